#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "common.hpp"
#include "restframe/checks.hpp"
#include "restframe/version.hpp"

namespace {

void add_common_flags(CLI::App* sub, Options& opts, bool& seed_flag_used) {
    auto* s = sub->add_option("--seed", opts.seed, "RNG seed (overrides the scenario seed)");
    s->each([&seed_flag_used](const std::string&) { seed_flag_used = true; });
    sub->add_option("--out", opts.out_dir, "directory for output files");
    sub->add_option("--tol-scale", opts.tol_scale, "multiply every invariant threshold")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--quiet", opts.quiet, "suppress stderr progress lines");
}

int read_thread_cap() {
    const char* env = std::getenv("RESTFRAME_THREADS");
    if (!env || !*env) return 1;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
        std::fprintf(stderr, "warning: ignoring invalid RESTFRAME_THREADS=%s\n", env);
        return 1;
    }
    return static_cast<int>(v);
}

int run_guarded(const std::function<int()>& f) {
    try {
        return f();
    } catch (const ScenarioError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rest-frame field and particle dynamics toolkit"};
    app.set_version_flag("--version", restframe::version_string);
    app.require_subcommand(1);

    Options opts;
    bool seed_flag_used = false;
    opts.threads = read_thread_cap();

    struct SubSpec {
        const char* name;
        const char* desc;
        int (*run)(const Scenario&, const Options&);
    };
    const std::vector<SubSpec> specs{
        {"kinematics", "Wigner boosts and external Poincare generators", cmd_kinematics},
        {"nbody", "relativistic two-body dynamics on the Wigner 3-space", cmd_nbody},
        {"em", "Maxwell field decomposition, evolution and charges", cmd_em},
        {"ym", "colour charges of a non-Abelian field state", cmd_ym},
        {"gravity", "ADM energy and rotation-curve fits", cmd_gravity},
    };

    std::vector<std::string> scen_paths(specs.size());
    int exit_code = 0;
    for (std::size_t i = 0; i < specs.size(); ++i) {
        CLI::App* sub = app.add_subcommand(specs[i].name, specs[i].desc);
        add_common_flags(sub, opts, seed_flag_used);
        sub->add_option("scenario", scen_paths[i], "scenario JSON file")->required();
        const SubSpec& spec = specs[i];
        std::string* path = &scen_paths[i];
        sub->callback([&, spec, path]() {
            exit_code = run_guarded([&]() {
                opts.seed_set = seed_flag_used;
                Scenario s = load_scenario(*path, spec.name);
                return spec.run(s, opts);
            });
        });
    }

    CLI::App* check = app.add_subcommand("check", "run module invariant suites");
    add_common_flags(check, opts, seed_flag_used);
    bool all = false;
    std::vector<std::string> mods;
    check->add_flag("--all", all, "run every module suite");
    check->add_option("--module", mods, "module suite to run (repeatable)");
    check->callback([&]() {
        exit_code = run_guarded([&]() {
            opts.seed_set = seed_flag_used;
            if (all) mods = restframe::checks::module_names();
            if (mods.empty())
                throw ScenarioError("check needs --all or at least one --module");
            return cmd_check(mods, opts);
        });
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    return exit_code;
}
