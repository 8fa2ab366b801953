#include "common.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "restframe/version.hpp"

using nlohmann::json;

namespace {

std::string where_key(const std::string& where, const char* key) {
    return where + "." + key;
}

const json& fetch(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) throw ScenarioError("missing key " + where_key(where, key));
    return *it;
}

}  // namespace

void require_keys(const json& j, std::initializer_list<const char*> required,
                  std::initializer_list<const char*> optional, const std::string& where) {
    if (!j.is_object()) throw ScenarioError(where + " must be a JSON object");
    for (const char* k : required)
        if (!j.contains(k)) throw ScenarioError("missing key " + where_key(where, k));
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : required) known = known || it.key() == k;
        for (const char* k : optional) known = known || it.key() == k;
        if (!known) throw ScenarioError("unknown key " + where_key(where, it.key().c_str()));
    }
}

double get_double(const json& j, const char* key, const std::string& where) {
    const json& v = fetch(j, key, where);
    if (!v.is_number()) throw ScenarioError(where_key(where, key) + " must be a number");
    return v.get<double>();
}

double get_double_or(const json& j, const char* key, double fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    return get_double(j, key, where);
}

long long get_int_or(const json& j, const char* key, long long fallback,
                     const std::string& where) {
    if (!j.contains(key)) return fallback;
    const json& v = j.at(key);
    if (!v.is_number_integer()) throw ScenarioError(where_key(where, key) + " must be an integer");
    return v.get<long long>();
}

restframe::Vec3 get_vec3(const json& j, const char* key, const std::string& where) {
    const json& v = fetch(j, key, where);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number())
        throw ScenarioError(where_key(where, key) + " must be an array of 3 numbers");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

restframe::Vec3 get_vec3_or(const json& j, const char* key, const restframe::Vec3& fb,
                            const std::string& where) {
    if (!j.contains(key)) return fb;
    return get_vec3(j, key, where);
}

std::string get_string(const json& j, const char* key, const std::string& where) {
    const json& v = fetch(j, key, where);
    if (!v.is_string()) throw ScenarioError(where_key(where, key) + " must be a string");
    return v.get<std::string>();
}

Scenario load_scenario(const std::string& path, const std::string& expected_module) {
    std::ifstream in(path);
    if (!in) throw ScenarioError(path + ": cannot open scenario file");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ScenarioError(path + ": " + e.what());
    }
    require_keys(j, {"module", "params"}, {"seed", "tol_scale", "output"}, path);

    Scenario s;
    s.path = path;
    s.module = get_string(j, "module", path);
    if (s.module != expected_module)
        throw ScenarioError(path + ": scenario module '" + s.module +
                            "' does not match subcommand '" + expected_module + "'");
    if (j.contains("seed")) {
        const json& v = j.at("seed");
        if (!v.is_number_unsigned())
            throw ScenarioError(path + ".seed must be an unsigned integer");
        s.seed = v.get<std::uint64_t>();
    }
    s.tol_scale = get_double_or(j, "tol_scale", 1.0, path);
    if (!(s.tol_scale > 0)) throw ScenarioError(path + ".tol_scale must be positive");
    s.params = fetch(j, "params", path);
    if (!s.params.is_object()) throw ScenarioError(path + ".params must be a JSON object");
    if (j.contains("output")) {
        s.output = j.at("output");
        require_keys(s.output, {}, {"csv", "json", "snapshot", "worldlines", "metric", "fit"},
                     path + ".output");
        for (auto it = s.output.begin(); it != s.output.end(); ++it)
            if (!it.value().is_string())
                throw ScenarioError(path + ".output." + it.key() + " must be a string");
    }
    return s;
}

std::uint64_t effective_seed(const Scenario& s, const Options& o) {
    return o.seed_set ? o.seed : s.seed;
}

double effective_tol_scale(const Scenario& s, const Options& o) {
    return s.tol_scale * o.tol_scale;
}

std::string resolve_out(const Options& o, const std::string& name) {
    std::filesystem::path p(name);
    if (p.is_relative()) p = std::filesystem::path(o.out_dir) / p;
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    return p.string();
}

std::string output_name(const Scenario& s, const char* key, const char* fallback) {
    if (s.output.is_object() && s.output.contains(key))
        return s.output.at(key).get<std::string>();
    return fallback;
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::string out = header;
    out += '\n';
    char buf[40];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (!std::isfinite(row[i]))
                throw NumericalError("non-finite value in output column " + std::to_string(i));
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            if (i) out += ',';
            out += buf;
        }
        out += '\n';
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ScenarioError("cannot write " + path);
    f << out;
}

void add_invariant(restframe::checks::ModuleReport& rep, const std::string& name, double measured,
                   double threshold, double tol_scale) {
    restframe::checks::InvariantResult res;
    res.name = name;
    res.measured = measured;
    res.threshold = threshold * tol_scale;
    res.pass = std::isfinite(measured) && measured <= res.threshold;
    rep.pass = rep.pass && res.pass;
    rep.invariants.push_back(std::move(res));
}

int finish_report(restframe::checks::ModuleReport rep, const Scenario& s, const Options& o,
                  std::uint64_t seed, double tol_scale, double wall_ms) {
    rep.wall_ms = wall_ms;
    restframe::checks::RunReport run;
    run.seed = seed;
    run.tol_scale = tol_scale;
    run.version = restframe::version_string;
    run.all_pass = rep.pass;
    run.modules.push_back(rep);
    std::string body = restframe::checks::report_json(run);

    std::string json_name = output_name(s, "json", "");
    if (!json_name.empty()) {
        std::string path = resolve_out(o, json_name);
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ScenarioError("cannot write " + path);
        f << body;
    } else {
        std::cout << body;
    }
    if (!o.quiet)
        std::fprintf(stderr, "%s: %zu invariants, %s, %.1f ms\n", rep.module.c_str(),
                     rep.invariants.size(), rep.pass ? "pass" : "FAIL", wall_ms);
    return run.all_pass ? 0 : 3;
}
