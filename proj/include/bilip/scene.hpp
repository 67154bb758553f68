// Scene configuration: a structured description of group, action, and
// verification parameters, loaded from a JSON document, plus the assembly
// of the live objects (sample, action, weight table) from it.

#pragma once

#include <string>
#include <vector>

#include "bilip/conjugacy.hpp"
#include "bilip/group.hpp"
#include "bilip/space.hpp"

namespace bilip {

struct GeneratorSpec {
    std::string kind;   // "rotation" | "power" | "shift"
    double theta = 0.0; // rotation angle
    double alpha = 1.0; // power exponent
    int segments = 4096;
    int amount = 1;     // shift amount
};

struct WitnessSpec {
    int x = 0;
    double epsilon = 0.0;
};

struct AdjustmentSpec {
    bool enabled = false;
    double l = 1.0;
    double u = 0.0;
};

struct MuSpec {
    GridPolicy policy = GridPolicy::Auto;
    int uniform_cells = 1 << 16;
};

struct SceneConfig {
    int k = 0;
    EnumerationMode mode = EnumerationMode::Free;
    std::string resolver;  // "", "abelianized", "action"

    std::string action_type;  // "circle" | "pointcloud"
    std::vector<GeneratorSpec> generators;

    double s = 1.0;
    int radius = 0;
    int sample_n = 2;
    int threads = 1;

    std::vector<WitnessSpec> witnesses;
    AdjustmentSpec adjustment;
    MuSpec mu;

    static SceneConfig from_json_file(const std::string& path);
    static SceneConfig from_json_text(const std::string& text);
};

// The live objects named by a config. The weight table is built last and
// validates s against the enumeration mode.
struct Scene {
    SceneConfig config;
    GeneratorSet gens;
    SpaceSample space;
    GeneratorAction action;
    std::vector<CircleHomeoPL> circle_generators;  // one per pair, circle scenes
    WeightTable wt;
};

Scene build_scene(const SceneConfig& config);

// Word equality through the action: words are identified when their orbit
// images agree on a probe set (exactly for point clouds, within tol on the
// circle). Sound for deduplication exactly when the action is faithful
// enough on the probes; inconsistencies surface as enumeration errors.
ElementResolver make_action_resolver(const GeneratorAction& action, const SpaceSample& space,
                                     double tol = 1e-9);

}  // namespace bilip
