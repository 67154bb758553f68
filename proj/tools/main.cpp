// bilipcert: certification driver. Subcommands share a JSON scene config;
// --radius/--exponent/--threads override the config in place.

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "bilip/commands.hpp"

namespace {

struct Options {
    std::string config_path;
    std::string out_dir = ".";
    int threads = 0;    // 0 = keep config value
    int radius = -1;    // -1 = keep config value
    double exponent = 0.0;
    bool exponent_set = false;
};

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--config", opt.config_path, "scene config JSON")->required();
    cmd->add_option("--out", opt.out_dir, "output directory");
    cmd->add_option("--threads", opt.threads, "worker threads (overrides config)");
    cmd->add_option("--radius", opt.radius, "ball radius (overrides config)");
    cmd->add_option("--exponent", opt.exponent, "weight exponent s (overrides config)")
        ->each([&opt](const std::string&) { opt.exponent_set = true; });
}

bilip::SceneConfig load(const Options& opt) {
    bilip::SceneConfig cfg = bilip::SceneConfig::from_json_file(opt.config_path);
    if (opt.threads > 0) cfg.threads = opt.threads;
    if (opt.radius >= 0) cfg.radius = opt.radius;
    if (opt.exponent_set) cfg.s = opt.exponent;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"certified regularized metrics for finitely generated actions"};
    app.require_subcommand(1);

    Options opt;
    CLI::App* c_enum = app.add_subcommand("enumerate", "word growth and weight masses");
    CLI::App* c_verify = app.add_subcommand("verify", "metric certificates on a sampled space");
    CLI::App* c_conj = app.add_subcommand("conjugate", "averaged-measure conjugation pipeline");
    add_common(c_enum, opt);
    add_common(c_verify, opt);
    add_common(c_conj, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const bilip::SceneConfig cfg = load(opt);
        if (c_enum->parsed()) return bilip::cmd_enumerate(cfg, opt.out_dir);
        if (c_verify->parsed()) return bilip::cmd_verify(cfg, opt.out_dir);
        return bilip::cmd_conjugate(cfg, opt.out_dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
