#include "bilip/scene.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "bilip/circle.hpp"

namespace bilip {
namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& what) {
    throw std::invalid_argument("scene config: " + what);
}

GridPolicy parse_policy(const std::string& name) {
    if (name == "auto") return GridPolicy::Auto;
    if (name == "merged") return GridPolicy::MergedExact;
    if (name == "uniform") return GridPolicy::Uniform;
    config_error("unknown mu grid policy '" + name + "'");
}

SceneConfig parse_config(const json& j) {
    SceneConfig cfg;
    if (!j.is_object()) config_error("top-level document must be an object");

    if (!j.contains("group") || !j["group"].is_object()) config_error("missing 'group' object");
    const json& jg = j["group"];
    cfg.k = jg.value("k", -1);
    if (cfg.k < 0) config_error("'group.k' must be a non-negative integer");
    const std::string mode = jg.value("mode", "free");
    if (mode == "free") {
        cfg.mode = EnumerationMode::Free;
    } else if (mode == "dedup") {
        cfg.mode = EnumerationMode::Dedup;
    } else {
        config_error("'group.mode' must be 'free' or 'dedup'");
    }
    cfg.resolver = jg.value("resolver", "");
    if (!cfg.resolver.empty() && cfg.resolver != "abelianized" && cfg.resolver != "action")
        config_error("'group.resolver' must be '', 'abelianized', or 'action'");
    if (cfg.mode == EnumerationMode::Dedup && cfg.resolver.empty())
        config_error("dedup mode requires a resolver");

    if (!j.contains("action") || !j["action"].is_object()) config_error("missing 'action' object");
    const json& ja = j["action"];
    cfg.action_type = ja.value("type", "");
    if (cfg.action_type != "circle" && cfg.action_type != "pointcloud")
        config_error("'action.type' must be 'circle' or 'pointcloud'");
    if (!ja.contains("generators") || !ja["generators"].is_array())
        config_error("missing 'action.generators' array");
    for (const json& je : ja["generators"]) {
        GeneratorSpec spec;
        spec.kind = je.value("kind", "");
        if (spec.kind == "rotation") {
            if (!je.contains("theta")) config_error("rotation generator needs 'theta'");
            spec.theta = je["theta"].get<double>();
        } else if (spec.kind == "power") {
            if (!je.contains("alpha")) config_error("power generator needs 'alpha'");
            spec.alpha = je["alpha"].get<double>();
            spec.segments = je.value("segments", 4096);
            if (spec.segments < 1) config_error("'segments' must be positive");
        } else if (spec.kind == "shift") {
            spec.amount = je.value("amount", 1);
        } else {
            config_error("generator kind must be 'rotation', 'power', or 'shift'");
        }
        cfg.generators.push_back(spec);
    }
    if (static_cast<int>(cfg.generators.size()) != cfg.k)
        config_error("'action.generators' must list exactly k generators");

    if (!j.contains("params") || !j["params"].is_object()) config_error("missing 'params' object");
    const json& jp = j["params"];
    if (!jp.contains("s")) config_error("missing 'params.s'");
    cfg.s = jp["s"].get<double>();
    cfg.radius = jp.value("radius", -1);
    if (cfg.radius < 0) config_error("'params.radius' must be a non-negative integer");
    cfg.sample_n = jp.value("sample", 0);
    if (cfg.sample_n < 2) config_error("'params.sample' must be at least 2");
    cfg.threads = jp.value("threads", 1);
    if (cfg.threads < 1) config_error("'params.threads' must be positive");

    if (j.contains("witness")) {
        if (!j["witness"].is_array()) config_error("'witness' must be an array");
        for (const json& jw : j["witness"]) {
            WitnessSpec w;
            w.x = jw.value("x", -1);
            if (!jw.contains("epsilon")) config_error("witness entry needs 'epsilon'");
            w.epsilon = jw["epsilon"].get<double>();
            if (w.x < 0 || w.x >= cfg.sample_n) config_error("witness 'x' out of sample range");
            if (!(w.epsilon > 0.0)) config_error("witness 'epsilon' must be positive");
            cfg.witnesses.push_back(w);
        }
    }

    if (j.contains("adjustment")) {
        const json& jd = j["adjustment"];
        if (!jd.is_object() || !jd.contains("l") || !jd.contains("u"))
            config_error("'adjustment' needs 'l' and 'u'");
        cfg.adjustment.enabled = true;
        cfg.adjustment.l = jd["l"].get<double>();
        cfg.adjustment.u = jd["u"].get<double>();
    }

    if (j.contains("mu")) {
        const json& jm = j["mu"];
        if (!jm.is_object()) config_error("'mu' must be an object");
        cfg.mu.policy = parse_policy(jm.value("policy", "auto"));
        cfg.mu.uniform_cells = jm.value("uniform_cells", 1 << 16);
        if (cfg.mu.uniform_cells < 2) config_error("'mu.uniform_cells' must be at least 2");
    }

    return cfg;
}

}  // namespace

SceneConfig SceneConfig::from_json_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        config_error(std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

SceneConfig SceneConfig::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

ElementResolver make_action_resolver(const GeneratorAction& action, const SpaceSample& space,
                                     double tol) {
    ElementResolver r;
    r.name = "action";
    const int n = space.size();
    // A handful of spread-out probes; exact match for integer orbits, arc
    // distance within tol for circle points.
    std::vector<int> probes;
    const int want = n < 8 ? n : 8;
    for (int i = 0; i < want; ++i) probes.push_back(static_cast<int>(i * (static_cast<long long>(n) / want)));
    if (std::holds_alternative<PointCloudAction>(action)) {
        const PointCloudAction act = std::get<PointCloudAction>(action);
        r.same = [act, probes](const GroupWord& u, const GroupWord& v) {
            for (int p : probes) {
                if (std::get<int>(apply_word(act, u, Point{p})) !=
                    std::get<int>(apply_word(act, v, Point{p})))
                    return false;
            }
            return true;
        };
    } else {
        const CircleAction act = std::get<CircleAction>(action);
        std::vector<double> pts;
        for (int p : probes) pts.push_back(space.coordinate(p));
        r.same = [act, pts, tol](const GroupWord& u, const GroupWord& v) {
            for (double t : pts) {
                const double a = std::get<double>(apply_word(act, u, Point{t}));
                const double b = std::get<double>(apply_word(act, v, Point{t}));
                if (SpaceSample::arc_distance(a, b) > tol) return false;
            }
            return true;
        };
    }
    return r;
}

Scene build_scene(const SceneConfig& config) {
    GeneratorSet gens = config.mode == EnumerationMode::Free ? GeneratorSet::free_group(config.k)
                                                             : GeneratorSet::dedup_group(config.k);

    std::vector<CircleHomeoPL> circle_generators;
    const bool circle = config.action_type == "circle";
    if (circle) {
        for (const GeneratorSpec& spec : config.generators) {
            if (spec.kind == "rotation") {
                circle_generators.push_back(CircleHomeoPL::rotation(spec.theta));
            } else if (spec.kind == "power") {
                circle_generators.push_back(CircleHomeoPL::power_map(spec.alpha, spec.segments));
            } else {
                config_error("point-cloud generator kind '" + spec.kind + "' in a circle scene");
            }
        }
    }
    std::vector<int> shifts;
    if (!circle) {
        for (const GeneratorSpec& spec : config.generators) {
            if (spec.kind != "shift")
                config_error("circle generator kind '" + spec.kind + "' in a point-cloud scene");
            shifts.push_back(spec.amount);
        }
    }

    SpaceSample space = circle ? SpaceSample::circle_uniform(config.sample_n)
                               : SpaceSample::cyclic_cloud(config.sample_n);
    GeneratorAction action =
        circle ? GeneratorAction{CircleAction::from_generators(circle_generators)}
               : GeneratorAction{PointCloudAction::cyclic_shifts(config.sample_n, shifts)};

    const ElementResolver* resolver = nullptr;
    ElementResolver storage;
    if (config.resolver == "abelianized") {
        storage = ElementResolver::abelianized(config.k);
        resolver = &storage;
    } else if (config.resolver == "action") {
        storage = make_action_resolver(action, space);
        resolver = &storage;
    }

    WeightTable wt = WeightTable::build(gens, config.s, config.radius, resolver);
    return Scene{config,
                 std::move(gens),
                 std::move(space),
                 std::move(action),
                 std::move(circle_generators),
                 std::move(wt)};
}

}  // namespace bilip
