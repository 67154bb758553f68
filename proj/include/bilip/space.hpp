// Finite samples of compact metric spaces, and concrete generator actions:
// permutations of a point cloud, or piecewise-linear circle homeomorphisms
// acting on a sampled circle.

#pragma once

#include <string>
#include <variant>
#include <vector>

#include "bilip/circle.hpp"
#include "bilip/group.hpp"

namespace bilip {

// N sampled points with a base metric table. Point identity is the sample
// index; circle samples additionally carry the coordinate of each point.
class SpaceSample {
public:
    // Uniform sample t_i = i/N of the circle with arc-length metric.
    static SpaceSample circle_uniform(int n);

    // Abstract N-point cloud carrying the same arc distances, but defined
    // purely through the index gap (i - j) mod N. All entries with equal
    // gap share one double, so cyclic index shifts preserve the table
    // bitwise — the discrete model of a rotation isometry.
    static SpaceSample cyclic_cloud(int n);

    // Any explicit table; validates the metric axioms.
    static SpaceSample from_table(std::vector<std::vector<double>> table);

    int size() const { return n_; }
    double dist(int i, int j) const {
        return table_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    const std::vector<std::vector<double>>& table() const { return table_; }
    double diameter() const { return diameter_; }

    bool has_coordinates() const { return !coords_.empty(); }
    double coordinate(int i) const { return coords_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& coordinates() const { return coords_; }

    // Zero diagonal and exact symmetry; triangle inequality on all sampled
    // triples within 1e-12 relative slack. Throws on violation.
    void validate() const;

    // Arc-length distance on the unit circle for raw coordinates.
    static double arc_distance(double u, double v) {
        double d = u - v;
        if (d < 0.0) d = -d;
        return d <= 0.5 ? d : 1.0 - d;
    }

private:
    SpaceSample() = default;

    int n_ = 0;
    std::vector<std::vector<double>> table_;
    std::vector<double> coords_;  // empty for abstract clouds
    double diameter_ = 0.0;
};

// Generators acting by permutations of the sample indices. maps[l] is the
// permutation of letter l; letter 2i+1 must be the inverse of letter 2i.
struct PointCloudAction {
    std::vector<std::vector<int>> maps;

    static PointCloudAction cyclic_shifts(int n, const std::vector<int>& shifts);

    int apply_letter(Letter l, int idx) const {
        return maps[static_cast<std::size_t>(l)][static_cast<std::size_t>(idx)];
    }
    // Checks each map is a bijection inverted exactly by its paired letter.
    void validate(int n) const;
};

// Generators acting on circle coordinates. maps[l] is the homeomorphism of
// letter l; letter 2i+1 is the inverse of letter 2i within tau_inv.
struct CircleAction {
    std::vector<CircleHomeoPL> maps;

    static CircleAction from_generators(std::vector<CircleHomeoPL> gens);

    double apply_letter(Letter l, double t) const {
        return maps[static_cast<std::size_t>(l)].apply(t);
    }
    // sup_t |g(g_inv(t)) - t| <= tau_inv on a probe grid, per generator.
    void validate(double tau_inv) const;
};

using GeneratorAction = std::variant<PointCloudAction, CircleAction>;

int generator_count(const GeneratorAction& action);

// A sampled point: cloud index or circle coordinate.
using Point = std::variant<int, double>;

Point apply_letter(const GeneratorAction& action, Letter l, const Point& x);

// w = l_1 ... l_m acts as the composition of letter maps, rightmost letter
// applied first, so apply_word(u v, x) = apply_word(u, apply_word(v, x)).
Point apply_word(const GeneratorAction& action, const GroupWord& w, const Point& x);

}  // namespace bilip
