#pragma once

#include <json.hpp>

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "restframe/checks.hpp"
#include "restframe/geometry.hpp"

// Scenario/flag plumbing shared by the subcommand implementations.

struct Options {
    std::uint64_t seed = 0;
    bool seed_set = false;  // --seed given, overrides the scenario seed
    std::string out_dir = ".";
    double tol_scale = 1.0;
    bool quiet = false;
    int threads = 1;
};

struct Scenario {
    std::string module;
    std::uint64_t seed = 0;
    double tol_scale = 1;
    nlohmann::json params;
    nlohmann::json output;  // optional: csv / json / snapshot file names
    std::string path;
};

// Validation problems: exit code 2.
struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite or otherwise failed numerics in outputs: exit code 3.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Scenario load_scenario(const std::string& path, const std::string& expected_module);

// Rejects keys outside required+optional; checks required presence.
void require_keys(const nlohmann::json& j, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional, const std::string& where);

double get_double(const nlohmann::json& j, const char* key, const std::string& where);
double get_double_or(const nlohmann::json& j, const char* key, double fallback,
                     const std::string& where);
long long get_int_or(const nlohmann::json& j, const char* key, long long fallback,
                     const std::string& where);
restframe::Vec3 get_vec3(const nlohmann::json& j, const char* key, const std::string& where);
restframe::Vec3 get_vec3_or(const nlohmann::json& j, const char* key, const restframe::Vec3& fb,
                            const std::string& where);
std::string get_string(const nlohmann::json& j, const char* key, const std::string& where);

// Effective run parameters after flag overrides.
std::uint64_t effective_seed(const Scenario& s, const Options& o);
double effective_tol_scale(const Scenario& s, const Options& o);

// Resolves an output name against --out and creates parent directories.
std::string resolve_out(const Options& o, const std::string& name);
// Output file requested in the scenario, or `fallback` ("" disables the file).
std::string output_name(const Scenario& s, const char* key, const char* fallback);

// CSV with %.17g cells; throws NumericalError on any non-finite value.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

void add_invariant(restframe::checks::ModuleReport& rep, const std::string& name, double measured,
                   double threshold, double tol_scale);

// Renders the report (stdout, or the scenario's json output file), prints the
// wall-clock line to stderr unless quiet, and returns the process exit code.
int finish_report(restframe::checks::ModuleReport rep, const Scenario& s, const Options& o,
                  std::uint64_t seed, double tol_scale, double wall_ms);

int cmd_kinematics(const Scenario& s, const Options& o);
int cmd_nbody(const Scenario& s, const Options& o);
int cmd_em(const Scenario& s, const Options& o);
int cmd_ym(const Scenario& s, const Options& o);
int cmd_gravity(const Scenario& s, const Options& o);
int cmd_check(const std::vector<std::string>& modules, const Options& o);
