#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace restframe::checks {

struct InvariantResult {
    std::string name;
    double measured = 0;
    double threshold = 0;
    bool pass = false;
};

struct ModuleReport {
    std::string module;
    std::vector<InvariantResult> invariants;
    double wall_ms = 0;
    bool pass = true;
};

struct RunReport {
    std::uint64_t seed = 0;
    double tol_scale = 1;
    std::string version;
    std::vector<ModuleReport> modules;
    bool all_pass = true;
};

// Module invariant suites.  tol_scale multiplies every threshold.
ModuleReport check_numerics(std::uint64_t seed, double tol_scale = 1);
ModuleReport check_kinematics(std::uint64_t seed, double tol_scale = 1);
ModuleReport check_nbody(std::uint64_t seed, double tol_scale = 1);
ModuleReport check_gauge_fields(std::uint64_t seed, double tol_scale = 1);
ModuleReport check_york_gravity(std::uint64_t seed, double tol_scale = 1);

std::vector<std::string> module_names();
RunReport run_checks(const std::vector<std::string>& modules, std::uint64_t seed,
                     double tol_scale = 1);

// Deterministic JSON rendering of the report (timing excluded so identical
// seeds give byte-identical reports; wall clocks go to stderr/logs).
std::string report_json(const RunReport& r);

}  // namespace restframe::checks
