#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "common.hpp"
#include "restframe/checks.hpp"

int cmd_check(const std::vector<std::string>& modules, const Options& o) {
    restframe::checks::RunReport run =
        restframe::checks::run_checks(modules, o.seed, o.tol_scale);

    std::string body = restframe::checks::report_json(run);
    std::cout << body;
    if (o.out_dir != ".") {
        std::filesystem::create_directories(o.out_dir);
        std::string path = (std::filesystem::path(o.out_dir) / "report.json").string();
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ScenarioError("cannot write " + path);
        f << body;
    }
    if (!o.quiet)
        for (const auto& mod : run.modules)
            std::fprintf(stderr, "%s: %zu invariants, %s, %.1f ms\n", mod.module.c_str(),
                         mod.invariants.size(), mod.pass ? "pass" : "FAIL", mod.wall_ms);
    return run.all_pass ? 0 : 3;
}
