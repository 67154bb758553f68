#include "bilip/space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bilip {

SpaceSample SpaceSample::circle_uniform(int n) {
    if (n < 2) throw std::invalid_argument("circle_uniform: need at least 2 points");
    SpaceSample s;
    s.n_ = n;
    s.coords_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        s.coords_[static_cast<std::size_t>(i)] = static_cast<double>(i) / static_cast<double>(n);
    }
    s.table_.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            s.table_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                arc_distance(s.coords_[static_cast<std::size_t>(i)],
                             s.coords_[static_cast<std::size_t>(j)]);
        }
    }
    for (const auto& row : s.table_) {
        for (double d : row) s.diameter_ = std::max(s.diameter_, d);
    }
    s.validate();
    return s;
}

SpaceSample SpaceSample::cyclic_cloud(int n) {
    if (n < 2) throw std::invalid_argument("cyclic_cloud: need at least 2 points");
    // One distance per index gap; every pair with the same gap shares the
    // identical double, so cyclic shifts leave the table bitwise invariant.
    std::vector<double> by_gap(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
        const int folded = std::min(d, n - d);
        by_gap[static_cast<std::size_t>(d)] =
            static_cast<double>(folded) / static_cast<double>(n);
    }
    SpaceSample s;
    s.n_ = n;
    s.table_.assign(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int gap = ((i - j) % n + n) % n;
            s.table_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                by_gap[static_cast<std::size_t>(gap)];
        }
    }
    for (const auto& row : s.table_) {
        for (double d : row) s.diameter_ = std::max(s.diameter_, d);
    }
    s.validate();
    return s;
}

SpaceSample SpaceSample::from_table(std::vector<std::vector<double>> table) {
    SpaceSample s;
    s.n_ = static_cast<int>(table.size());
    s.table_ = std::move(table);
    for (const auto& row : s.table_) {
        if (static_cast<int>(row.size()) != s.n_) {
            throw std::invalid_argument("from_table: table must be square");
        }
        for (double d : row) s.diameter_ = std::max(s.diameter_, d);
    }
    s.validate();
    return s;
}

void SpaceSample::validate() const {
    if (n_ < 2) throw std::invalid_argument("SpaceSample: need at least 2 points");
    if (!(diameter_ > 0.0)) throw std::invalid_argument("SpaceSample: diameter must be positive");
    for (int i = 0; i < n_; ++i) {
        if (dist(i, i) != 0.0) {
            throw std::invalid_argument("SpaceSample: nonzero diagonal entry");
        }
        for (int j = 0; j < n_; ++j) {
            const double d = dist(i, j);
            if (!(d >= 0.0)) throw std::invalid_argument("SpaceSample: negative distance");
            if (d != dist(j, i)) {
                throw std::invalid_argument("SpaceSample: asymmetric table");
            }
        }
    }
    for (int i = 0; i < n_; ++i) {
        for (int j = 0; j < n_; ++j) {
            for (int k = 0; k < n_; ++k) {
                const double lhs = dist(i, k);
                const double rhs = dist(i, j) + dist(j, k);
                if (lhs - rhs > 1e-12 * std::max(1.0, lhs)) {
                    throw std::invalid_argument("SpaceSample: triangle inequality violated");
                }
            }
        }
    }
}

PointCloudAction PointCloudAction::cyclic_shifts(int n, const std::vector<int>& shifts) {
    PointCloudAction a;
    for (int m : shifts) {
        const int r = ((m % n) + n) % n;
        std::vector<int> fwd(static_cast<std::size_t>(n));
        std::vector<int> bwd(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            fwd[static_cast<std::size_t>(i)] = (i + r) % n;
            bwd[static_cast<std::size_t>(i)] = (i - r + n) % n;
        }
        a.maps.push_back(std::move(fwd));
        a.maps.push_back(std::move(bwd));
    }
    a.validate(n);
    return a;
}

void PointCloudAction::validate(int n) const {
    if (maps.size() % 2 != 0) {
        throw std::invalid_argument("PointCloudAction: letters must come in inverse pairs");
    }
    for (const auto& m : maps) {
        if (static_cast<int>(m.size()) != n) {
            throw std::invalid_argument("PointCloudAction: map size mismatch");
        }
        std::vector<bool> hit(static_cast<std::size_t>(n), false);
        for (int v : m) {
            if (v < 0 || v >= n || hit[static_cast<std::size_t>(v)]) {
                throw std::invalid_argument("PointCloudAction: map is not a bijection");
            }
            hit[static_cast<std::size_t>(v)] = true;
        }
    }
    for (std::size_t g = 0; g + 1 < maps.size(); g += 2) {
        for (int i = 0; i < n; ++i) {
            if (maps[g + 1][static_cast<std::size_t>(maps[g][static_cast<std::size_t>(i)])] != i) {
                throw std::invalid_argument(
                    "PointCloudAction: paired letters are not mutually inverse");
            }
        }
    }
}

CircleAction CircleAction::from_generators(std::vector<CircleHomeoPL> gens) {
    CircleAction a;
    for (auto& g : gens) {
        CircleHomeoPL inv = g.inverse();
        a.maps.push_back(std::move(g));
        a.maps.push_back(std::move(inv));
    }
    a.validate(1e-10);
    return a;
}

void CircleAction::validate(double tau_inv) const {
    if (maps.size() % 2 != 0) {
        throw std::invalid_argument("CircleAction: letters must come in inverse pairs");
    }
    const int probes = 512;
    for (std::size_t g = 0; g + 1 < maps.size(); g += 2) {
        double worst = 0.0;
        for (int i = 0; i < probes; ++i) {
            const double t = static_cast<double>(i) / static_cast<double>(probes);
            const double back = maps[g + 1].apply(maps[g].apply(t));
            worst = std::max(worst, SpaceSample::arc_distance(back, t));
        }
        if (worst > tau_inv) {
            throw std::invalid_argument("CircleAction: paired letters fail the inverse check");
        }
    }
}

int generator_count(const GeneratorAction& action) {
    return std::visit([](const auto& a) { return static_cast<int>(a.maps.size()) / 2; }, action);
}

Point apply_letter(const GeneratorAction& action, Letter l, const Point& x) {
    if (std::holds_alternative<PointCloudAction>(action)) {
        return std::get<PointCloudAction>(action).apply_letter(l, std::get<int>(x));
    }
    return std::get<CircleAction>(action).apply_letter(l, std::get<double>(x));
}

Point apply_word(const GeneratorAction& action, const GroupWord& w, const Point& x) {
    const int letters = std::visit(
        [](const auto& a) { return static_cast<int>(a.maps.size()); }, action);
    Point p = x;
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) {
        if (*it < 0 || *it >= letters) {
            throw std::invalid_argument("apply_word: letter has no assigned generator map");
        }
        p = apply_letter(action, *it, p);
    }
    return p;
}

}  // namespace bilip
