#include "bilip/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "bilip/metric.hpp"
#include "bilip/report.hpp"

namespace bilip {
namespace {

void ensure_dir(const std::string& out_dir) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw std::invalid_argument("cannot create output directory '" + out_dir + "'");
}

std::string join(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

std::string word_label(const GroupWord& w, const GeneratorSet& gens) {
    return w.str(gens.labels);
}

// Words of the enumerated ball with 1 <= |w| <= max_len, canonical order.
std::vector<GroupWord> short_words(const WeightTable& wt, int max_len) {
    std::vector<GroupWord> out;
    for (const GroupWord& w : wt.words()) {
        if (w.length() == 0) continue;
        if (w.length() > max_len) break;
        out.push_back(w);
    }
    return out;
}

std::string pair_witness_str(const PairWitness& w) {
    if (w.i < 0) return "";
    return "pair(" + std::to_string(w.i) + "," + std::to_string(w.j) + ")";
}

}  // namespace

int cmd_enumerate(const SceneConfig& config, const std::string& out_dir) {
    Scene scene = build_scene(config);
    ensure_dir(out_dir);
    const WeightTable& wt = scene.wt;
    const GeneratorSet& gens = scene.gens;

    std::ofstream out(join(out_dir, "growth.csv"));
    if (!out) throw std::invalid_argument("cannot write growth.csv in '" + out_dir + "'");

    const double estimate = estimate_critical_exponent(wt.sphere_counts());
    out << "# k=" << gens.k << " mode=" << (gens.mode == EnumerationMode::Free ? "free" : "dedup")
        << " s=" << format_full(wt.s()) << " radius=" << wt.radius() << "\n";
    out << "# growth_estimate=" << format_full(estimate)
        << " growth_upper_bound=" << format_full(gens.exponent_upper_bound()) << "\n";
    out << "# total_mass=" << format_full(wt.total_mass())
        << " tail_bound=" << format_full(wt.tail_bound()) << "\n";
    out << "n,sphere_count,ball_size,weight,sphere_mass,tail_bound\n";
    std::uint64_t ball = 0;
    for (int n = 0; n <= wt.radius(); ++n) {
        ball += wt.sphere_counts()[static_cast<std::size_t>(n)];
        out << n << ',' << wt.sphere_counts()[static_cast<std::size_t>(n)] << ',' << ball << ','
            << format_full(wt.weight_of_length(n)) << ',' << format_full(wt.sphere_mass(n, n))
            << ',' << format_full(free_tail_bound(gens.k, wt.s(), n)) << "\n";
    }
    return 0;
}

int cmd_verify(const SceneConfig& config, const std::string& out_dir) {
    Scene scene = build_scene(config);
    ensure_dir(out_dir);
    const WeightTable& wt = scene.wt;
    const GeneratorSet& gens = scene.gens;
    const int radius = wt.radius();
    CertificateReport report;

    // Weight-table translation invariance on the common sub-ball.
    for (const GroupWord& p : short_words(wt, std::min(2, radius))) {
        const TranslationInvarianceReport ti = check_translation_invariance(wt, p);
        ClaimRecord rec;
        rec.id = "TRANSLATION_INVARIANCE_" + word_label(p, gens);
        rec.params = "common_radius=" + std::to_string(ti.common_radius) +
                     " terms=" + std::to_string(ti.terms);
        rec.bound = 0.0;
        rec.achieved = std::max(ti.max_term_discrepancy, ti.sum_discrepancy);
        rec.status = ti.pass ? ClaimStatus::Pass : ClaimStatus::Fail;
        if (!ti.pass) rec.reason = "weight discrepancy on translated words";
        report.add(rec);
    }

    const RegularizedMetric rm =
        RegularizedMetric::build(scene.space, scene.action, wt, {}, config.threads);

    {
        const LowerBoundReport lb = verify_lower_bound_identity(rm);
        ClaimRecord rec;
        rec.id = "LOWER_BOUND";
        rec.params = "violations=" + std::to_string(lb.violations);
        rec.bound = 0.0;
        rec.achieved = -lb.min_slack;  // pass means slack >= 0
        rec.witness = pair_witness_str(lb.worst);
        rec.status = lb.pass ? ClaimStatus::Pass : ClaimStatus::Fail;
        if (!lb.pass) rec.reason = "regularized distance fell below the base metric";
        report.add(rec);
    }

    for (const GroupWord& p : short_words(wt, std::min(2, radius / 2))) {
        const SandwichReport sw = verify_bilipschitz_sandwich(rm, p);
        ClaimRecord rec;
        rec.id = "SANDWICH_" + word_label(p, gens);
        rec.params = "eps_t=" + format_full(sw.eps_t) + " ratio=[" + format_full(sw.min_ratio) +
                     "," + format_full(sw.max_ratio) + "] degenerate=" +
                     std::to_string(sw.degenerate_pairs);
        rec.bound = 0.0;
        rec.achieved = std::max(sw.max_lower_violation, sw.max_upper_violation);
        rec.witness = pair_witness_str(sw.worst);
        rec.status = sw.pass ? ClaimStatus::Pass : ClaimStatus::Fail;
        if (!sw.pass) rec.reason = "sandwich inequality violated beyond the truncation allowance";
        report.add(rec);
    }

    // Equivariance needs a non-trivial basepoint; take the first generator
    // when the radius leaves room for it.
    if (gens.k >= 1 && radius >= 4) {
        const GroupWord p0({0});
        const RegularizedMetric rm_p =
            RegularizedMetric::build(scene.space, scene.action, wt, p0, config.threads);
        const int eta_max = std::min(2, radius / 2 - p0.length());
        std::vector<GroupWord> etas;
        etas.emplace_back();
        for (const GroupWord& w : short_words(wt, eta_max)) etas.push_back(w);
        for (const GroupWord& eta : etas) {
            const EquivarianceReport eq = verify_equivariance(rm_p, eta);
            ClaimRecord rec;
            rec.id = "EQUIVARIANCE_" + word_label(eta, gens);
            rec.params = "basepoint=" + word_label(p0, gens);
            rec.bound = eq.bound;
            rec.achieved = eq.max_residual;
            rec.witness = pair_witness_str(eq.worst);
            rec.status = eq.pass ? ClaimStatus::Pass : ClaimStatus::Fail;
            if (!eq.pass) rec.reason = "relabeling residual exceeded the truncation bound";
            report.add(rec);
        }
    } else {
        ClaimRecord rec;
        rec.id = "EQUIVARIANCE";
        rec.status = ClaimStatus::Skipped;
        rec.reason = gens.k < 1 ? "trivial group has no non-trivial relabeling"
                                : "radius too small for a shifted basepoint";
        report.add(rec);
    }

    for (Letter l = 0; l < static_cast<Letter>(2 * gens.k); ++l) {
        const GroupWord psi({l});
        const GeneratorBilipschitzReport gb = verify_generator_bilipschitz(rm, psi);
        ClaimRecord rec;
        rec.id = "GENERATOR_BILIPSCHITZ_" + word_label(psi, gens);
        rec.params = "eps_rel=" + format_full(gb.eps_rel) +
                     " degenerate=" + std::to_string(gb.degenerate_pairs);
        rec.bound = gb.bound;
        rec.achieved = gb.constant;
        rec.witness = pair_witness_str(gb.worst);
        rec.status = gb.pass ? ClaimStatus::Pass : ClaimStatus::Fail;
        if (!gb.pass) rec.reason = "generator distortion exceeded the certified factor";
        report.add(rec);
    }

    for (const WitnessSpec& w : config.witnesses) {
        char id[96];
        std::snprintf(id, sizeof id, "NEIGHBORHOOD_WITNESS_%d_%g", w.x, w.epsilon);
        ClaimRecord rec;
        rec.id = id;
        rec.bound = w.epsilon;
        try {
            const NeighborhoodWitnessReport nw = neighborhood_witness(rm, w.x, w.epsilon);
            rec.params = "r=" + std::to_string(nw.r) + " b=" + format_full(nw.b) +
                         " words=" + std::to_string(nw.words_in_a) +
                         " candidates=" + std::to_string(nw.candidates);
            rec.achieved = nw.b;
            rec.status = nw.verified ? ClaimStatus::Pass : ClaimStatus::Fail;
            if (!nw.verified) rec.reason = "a filtered point escaped the epsilon ball";
        } catch (const std::invalid_argument& e) {
            rec.status = ClaimStatus::Skipped;
            rec.reason = e.what();
        } catch (const std::runtime_error& e) {
            rec.status = ClaimStatus::Fail;
            rec.reason = e.what();
        }
        report.add(rec);
    }

    if (config.adjustment.enabled) {
        const LipschitzAdjustmentReport adj =
            verify_lipschitz_adjustment(rm, config.adjustment.l, config.adjustment.u);
        ClaimRecord rec;
        rec.id = "LIPSCHITZ_ADJUSTMENT";
        rec.params = "l=" + format_full(adj.l) + " u=" + format_full(adj.u) +
                     " degenerate=" + std::to_string(adj.degenerate_pairs);
        rec.bound = adj.c_u;
        rec.achieved = adj.max_ratio;
        rec.witness = pair_witness_str(adj.worst);
        if (!adj.parameters_ok) {
            rec.status = ClaimStatus::Skipped;
            rec.reason = adj.parameter_failure;
        } else {
            rec.status = adj.pass ? ClaimStatus::Pass : ClaimStatus::Fail;
            if (!adj.pass) rec.reason = "distance ratio exceeded the certified constant";
        }
        report.add(rec);
    }

    write_certificates_csv(join(out_dir, "certificates.csv"), report);
    return report.all_pass() ? 0 : 1;
}

int cmd_conjugate(const SceneConfig& config, const std::string& out_dir) {
    if (config.action_type != "circle")
        throw std::invalid_argument("scene config: conjugation requires a circle action");
    Scene scene = build_scene(config);
    ensure_dir(out_dir);
    const WeightTable& wt = scene.wt;
    const GeneratorSet& gens = scene.gens;
    CertificateReport report;

    BuildMuOptions options;
    options.policy = config.mu.policy;
    options.uniform_cells = config.mu.uniform_cells;
    const MuResult mu_result = build_mu(scene.circle_generators, wt, options);
    const MeasureCDF& mu = mu_result.mu;

    {
        ClaimRecord rec;
        rec.id = "MU_MASS_MATCH";
        rec.params = "grid_points=" + std::to_string(mu_result.grid_points) +
                     (mu_result.merged_exact ? " grid=merged" : " grid=uniform") +
                     " mass=" + format_full(mu_result.nu_mass);
        rec.bound = 0.0;
        rec.achieved = mu_result.mass_error;
        rec.status = mu_result.mass_error == 0.0 ? ClaimStatus::Pass : ClaimStatus::Fail;
        if (rec.status == ClaimStatus::Fail) rec.reason = "summed mass drifted from the weight total";
        report.add(rec);
    }
    {
        ClaimRecord rec;
        rec.id = "MU_POSITIVE_DENSITY";
        rec.params = "max_slope=" + format_full(mu.max_slope());
        rec.bound = 0.0;
        rec.achieved = mu.min_slope();
        rec.status = mu.min_slope() > 0.0 ? ClaimStatus::Pass : ClaimStatus::Fail;
        if (rec.status == ClaimStatus::Fail) rec.reason = "averaged CDF is not strictly increasing";
        report.add(rec);
    }

    const PsiMuResult psi_result = psi_mu(mu);
    const CircleHomeoPL& psi = psi_result.psi;
    {
        ClaimRecord rec;
        rec.id = "PSI_ROUNDTRIP";
        rec.bound = 1e-10;
        rec.achieved = psi_result.roundtrip_residual;
        rec.status = rec.achieved <= rec.bound ? ClaimStatus::Pass : ClaimStatus::Fail;
        if (rec.status == ClaimStatus::Fail) rec.reason = "inverse CDF does not invert the CDF";
        report.add(rec);
    }
    {
        ClaimRecord rec;
        rec.id = "PUSHFORWARD_IDENTITY";
        rec.bound = 1e-10;
        rec.achieved = psi_result.pushforward_residual;
        rec.status = rec.achieved <= rec.bound ? ClaimStatus::Pass : ClaimStatus::Fail;
        if (rec.status == ClaimStatus::Fail)
            rec.reason = "psi does not push the averaged measure to uniform";
        report.add(rec);
    }

    const std::vector<CircleHomeoPL> conjugated = conjugate_action(scene.circle_generators, psi);
    const double slope_bound = std::exp(wt.s()) * 1.05;
    const double tail_in = gens.k > 0 && wt.radius() >= 1
                               ? free_tail_bound(gens.k, wt.s(), wt.radius() - 1)
                               : 0.0;

    for (std::size_t g = 0; g < scene.circle_generators.size(); ++g) {
        const std::string label = gens.labels[2 * g];
        {
            ClaimRecord rec;
            rec.id = "RAW_LIPSCHITZ_" + label;
            rec.params = "breakpoints=" + std::to_string(scene.circle_generators[g].breakpoint_count());
            rec.bound = std::numeric_limits<double>::infinity();
            rec.achieved = lipschitz_certificate(scene.circle_generators[g]);
            rec.status = ClaimStatus::Pass;  // informational
            report.add(rec);
        }
        {
            ClaimRecord rec;
            rec.id = "CONJUGATED_LIPSCHITZ_" + label;
            rec.params = "breakpoints=" + std::to_string(conjugated[g].breakpoint_count());
            rec.bound = slope_bound;
            rec.achieved = lipschitz_certificate(conjugated[g]);
            rec.status = rec.achieved <= rec.bound ? ClaimStatus::Pass : ClaimStatus::Fail;
            if (rec.status == ClaimStatus::Fail)
                rec.reason = "conjugated slope exceeded the certified factor";
            report.add(rec);
        }
        {
            const MeasureEquivarianceReport me = verify_measure_equivariance(
                mu, scene.circle_generators[g], wt.s(), tail_in / mu_result.nu_mass);
            ClaimRecord rec;
            rec.id = "MEASURE_EQUIVARIANCE_" + label;
            rec.params = "tail_term=" + format_full(tail_in / mu_result.nu_mass) +
                         " lower_violation=" + format_full(me.max_lower_violation);
            rec.bound = me.bound;
            rec.achieved = me.max_upper_violation;
            rec.status = me.pass ? ClaimStatus::Pass : ClaimStatus::Fail;
            if (rec.status == ClaimStatus::Fail)
                rec.reason = "averaged measure moved more than the weight shift allows";
            report.add(rec);
        }
    }

    // Artifacts: CDF and inverse sampled on their own breakpoints, each
    // conjugated generator on its breakpoints.
    {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < mu.breakpoint_count(); ++i)
            rows.push_back({mu.breakpoints()[i], mu.values()[i]});
        write_table_csv(join(out_dir, "mu_cdf.csv"), {"t", "cdf"}, rows);
    }
    {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < psi.breakpoint_count(); ++i)
            rows.push_back({psi.breakpoints()[i], psi.lift_values()[i]});
        write_table_csv(join(out_dir, "psi_mu.csv"), {"t", "lift"}, rows);
    }
    for (std::size_t g = 0; g < conjugated.size(); ++g) {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < conjugated[g].breakpoint_count(); ++i)
            rows.push_back({conjugated[g].breakpoints()[i], conjugated[g].lift_values()[i]});
        write_table_csv(join(out_dir, "conjugated_" + gens.labels[2 * g] + ".csv"), {"t", "lift"},
                        rows);
    }

    write_certificates_csv(join(out_dir, "certificates.csv"), report);
    return report.all_pass() ? 0 : 1;
}

}  // namespace bilip
