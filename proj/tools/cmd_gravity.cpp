#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>

#include "common.hpp"
#include "restframe/pn.hpp"
#include "restframe/york.hpp"

using namespace restframe;

namespace {

using Clock = std::chrono::steady_clock;

int finish(checks::ModuleReport rep, const Scenario& s, const Options& o, std::uint64_t seed,
           double ts, Clock::time_point start) {
    auto stop = Clock::now();
    return finish_report(std::move(rep), s, o, seed, ts,
                         std::chrono::duration<double, std::milli>(stop - start).count());
}

std::array<double, 2> get_pair_or(const nlohmann::json& j, const char* key,
                                  const std::string& where) {
    if (!j.contains(key)) return {0, 0};
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
        throw ScenarioError(where + "." + key + " must be an array of 2 numbers");
    return {v[0].get<double>(), v[1].get<double>()};
}

GravityUnits get_units(const nlohmann::json& params) {
    GravityUnits u;
    u.G = get_double_or(params, "G", 1.0, "params");
    u.c = get_double_or(params, "c", 1.0, "params");
    if (!(u.G > 0) || !(u.c > 0)) throw ScenarioError("params.G and params.c must be positive");
    return u;
}

// JSON basis point -> 4-metric artifact plus the invariant report.
int run_metric(const Scenario& s, const Options& o, std::uint64_t seed, double ts,
               Clock::time_point start) {
    require_keys(s.params,
                 {"mode"},
                 {"theta", "phi_tilde", "R", "pi_phi", "Pi", "n", "n_bar", "shear", "eps",
                  "gamma_seed"},
                 "params");
    YorkBasisPoint p;
    p.theta = get_vec3_or(s.params, "theta", {}, "params");
    p.phi_tilde = get_double_or(s.params, "phi_tilde", 1.0, "params");
    if (!(p.phi_tilde > 0)) throw ScenarioError("params.phi_tilde must be positive");
    p.R = get_pair_or(s.params, "R", "params");
    p.pi_phi = get_double_or(s.params, "pi_phi", 0.0, "params");
    p.Pi = get_pair_or(s.params, "Pi", "params");
    p.n = get_double_or(s.params, "n", 0.0, "params");
    if (!(1 + p.n > 0)) throw ScenarioError("params.n must satisfy 1 + n > 0");
    p.n_bar = get_vec3_or(s.params, "n_bar", {}, "params");
    if (s.params.contains("shear")) {
        const auto& js = s.params.at("shear");
        if (!js.is_array() || js.size() != 3)
            throw ScenarioError("params.shear must be a 3x3 array");
        for (int r = 0; r < 3; ++r) {
            if (!js[r].is_array() || js[r].size() != 3)
                throw ScenarioError("params.shear must be a 3x3 array");
            for (int c = 0; c < 3; ++c) {
                if (!js[r][c].is_number())
                    throw ScenarioError("params.shear must be a 3x3 array of numbers");
                p.shear(r, c) = js[r][c].get<double>();
            }
        }
        double scale = 0;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) scale = std::max(scale, std::abs(p.shear(r, c)));
        double tr = p.shear(0, 0) + p.shear(1, 1) + p.shear(2, 2);
        double asym = 0;
        for (int r = 0; r < 3; ++r)
            for (int c = r + 1; c < 3; ++c)
                asym = std::max(asym, std::abs(p.shear(r, c) - p.shear(c, r)));
        if (std::abs(tr) > 1e-12 * (1 + scale) || asym > 1e-12 * (1 + scale))
            throw ScenarioError("params.shear must be symmetric and trace-free");
    }
    long long eps = get_int_or(s.params, "eps", 1, "params");
    if (eps != 1 && eps != -1) throw ScenarioError("params.eps must be 1 or -1");

    std::optional<std::uint64_t> gamma_seed;
    if (s.params.contains("gamma_seed")) {
        long long gs = get_int_or(s.params, "gamma_seed", 0, "params");
        if (gs < 0) throw ScenarioError("params.gamma_seed must be non-negative");
        gamma_seed = static_cast<std::uint64_t>(gs);
    }
    GammaMatrix gamma = gamma_solve(gamma_seed);
    MetricResult m = metric_from_york(p, gamma, static_cast<int>(eps));

    nlohmann::json out;
    out["eps"] = m.eps;
    out["phi_tilde"] = m.phi_tilde;
    auto mat = nlohmann::json::array();
    for (int r = 0; r < 4; ++r) {
        auto row = nlohmann::json::array();
        for (int c = 0; c < 4; ++c) row.push_back(m.g(r, c));
        mat.push_back(row);
    }
    out["g"] = mat;
    auto tri = nlohmann::json::array();
    for (int a = 0; a < 3; ++a) {
        auto row = nlohmann::json::array();
        for (int r = 0; r < 3; ++r) row.push_back(m.triad(a, r));
        tri.push_back(row);
    }
    out["triad"] = tri;
    {
        std::string path = resolve_out(o, output_name(s, "metric", "metric.json"));
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ScenarioError("cannot write " + path);
        f << out.dump(2) << '\n';
    }

    checks::ModuleReport rep;
    rep.module = "york_gravity";
    add_invariant(rep, "gamma-constraints", gamma_residual(gamma), 1e-12, ts);

    Mat3 h;  // positive 3-metric -eps * g_rs
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) h(r, c) = -m.eps * m.g(r + 1, c + 1);
    double p2 = m.phi_tilde * m.phi_tilde;
    add_invariant(rep, "metric-determinant", std::abs(det(h) - p2) / p2, 1e-12, ts);

    double minor1 = h(0, 0);
    double minor2 = h(0, 0) * h(1, 1) - h(0, 1) * h(1, 0);
    double min_minor = std::min({minor1, minor2, det(h)});
    add_invariant(rep, "three-metric-positive", std::max(0.0, -min_minor) / p2, 1e-15, ts);

    Mat3 hinv = inverse(h);
    double q = 0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) q += m.g(0, r + 1) * hinv(r, c) * m.g(0, c + 1);
    double lapse2 = (1 + p.n) * (1 + p.n);
    double defect = std::abs(m.g(0, 0) + m.eps * q - m.eps * lapse2);
    add_invariant(rep, "lapse-consistency", defect / (lapse2 + dot(p.n_bar, p.n_bar)), 1e-12, ts);

    return finish(std::move(rep), s, o, seed, ts, start);
}

// Uniform gridded basis point -> weak ADM energy scalar against the closed form.
int run_energy(const Scenario& s, const Options& o, std::uint64_t seed, double ts,
               Clock::time_point start) {
    require_keys(s.params, {"mode", "grid_n", "spacing", "pi_phi"}, {"matter", "G", "c"},
                 "params");
    long long n = get_int_or(s.params, "grid_n", 0, "params");
    double spacing = get_double(s.params, "spacing", "params");
    Grid3 g(static_cast<int>(n), spacing);
    double pi_phi = get_double(s.params, "pi_phi", "params");
    double matter = get_double_or(s.params, "matter", 0.0, "params");
    GravityUnits u = get_units(s.params);

    YorkField f(g);
    for (auto& p : f.pts) p.pi_phi = pi_phi;
    ScalarField m(g);
    for (auto& v : m.v) v = matter;

    GammaMatrix gamma = gamma_solve();
    double E = adm_energy(f, m, gamma, u);
    double vol = g.cell_volume() * static_cast<double>(g.size());
    double want =
        (u.c * matter - 6 * std::numbers::pi * u.G / (u.c * u.c) * pi_phi * pi_phi) * vol;

    write_csv(resolve_out(o, output_name(s, "csv", "energy.csv")), "E_adm,E_closed_form",
              {{E, want}});

    checks::ModuleReport rep;
    rep.module = "york_gravity";
    double scale = std::abs(want) > 0 ? std::abs(want) : 1.0;
    add_invariant(rep, "adm-uniform-closed-form", std::abs(E - want) / scale, 1e-10, ts);
    add_invariant(rep, "basis-reference-constraints", gamma_residual(gamma_solve()), 1e-15, ts);
    return finish(std::move(rep), s, o, seed, ts, start);
}

// Slow-motion n-body with the York inertial term -> CSV trajectories.
int run_pn(const Scenario& s, const Options& o, std::uint64_t seed, double ts,
           Clock::time_point start) {
    require_keys(s.params, {"mode", "bodies", "t1", "dt"},
                 {"t0", "profile", "G", "c", "r_min", "stride"}, "params");
    const auto& jb = s.params.at("bodies");
    if (!jb.is_array() || jb.empty()) throw ScenarioError("params.bodies must be a non-empty array");
    std::vector<PnBody> bodies;
    for (const auto& item : jb) {
        require_keys(item, {"m", "x", "v"}, {}, "params.bodies[]");
        bodies.push_back({get_double(item, "m", "params.bodies[]"),
                          get_vec3(item, "x", "params.bodies[]"),
                          get_vec3(item, "v", "params.bodies[]")});
    }
    GravityUnits u = get_units(s.params);
    YorkProfile profile = YorkProfile::zero();
    bool zero_profile = true;
    if (s.params.contains("profile")) {
        const auto& jp = s.params.at("profile");
        require_keys(jp, {"type"}, {"delta0"}, "params.profile");
        std::string type = get_string(jp, "type", "params.profile");
        if (type == "uniform_rate") {
            profile = YorkProfile::uniform_rate(get_double(jp, "delta0", "params.profile"), u.c);
            zero_profile = false;
        } else if (type != "zero") {
            throw ScenarioError("params.profile.type must be zero or uniform_rate");
        }
    }
    double t0 = get_double_or(s.params, "t0", 0.0, "params");
    double t1 = get_double(s.params, "t1", "params");
    double dt = get_double(s.params, "dt", "params");
    double r_min = get_double_or(s.params, "r_min", 1e-8, "params");
    long long stride = get_int_or(s.params, "stride", 1, "params");
    if (stride < 1) throw ScenarioError("params.stride must be positive");

    PnTrajectory tr =
        pn_evolve(bodies, profile, u, t0, t1, dt, r_min, static_cast<int>(stride));

    std::vector<std::vector<double>> rows;
    rows.reserve(tr.samples.size() * bodies.size());
    Vec3 P0 = tr.samples.front().momentum;
    double E0 = tr.samples.front().energy;
    double p_drift = 0, e_drift = 0;
    for (const auto& sample : tr.samples) {
        for (std::size_t i = 0; i < sample.bodies.size(); ++i) {
            const PnBody& b = sample.bodies[i];
            rows.push_back({sample.t, static_cast<double>(i + 1), b.x.x, b.x.y, b.x.z, b.v.x,
                            b.v.y, b.v.z});
        }
        p_drift = std::max(p_drift, norm(sample.momentum - P0) / (1 + norm(P0)));
        e_drift = std::max(e_drift, std::abs(sample.energy - E0) / (1 + std::abs(E0)));
    }
    write_csv(resolve_out(o, output_name(s, "csv", "pn.csv")), "t,body,x,y,z,vx,vy,vz", rows);

    checks::ModuleReport rep;
    rep.module = "york_gravity";
    add_invariant(rep, "momentum-drift", p_drift, 1e-10, ts);
    if (zero_profile) add_invariant(rep, "energy-drift", e_drift, 1e-2, ts);
    return finish(std::move(rep), s, o, seed, ts, start);
}

// r,v rotation-curve data file -> fitted delta knots + predicted curve.
void read_curve_csv(const std::string& path, std::vector<double>& radii,
                    std::vector<double>& speeds) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot read " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (lineno == 1 && line == "r,v") continue;
        const char* b = line.data();
        const char* e = b + line.size();
        double r = 0, v = 0;
        auto [p1, ec1] = std::from_chars(b, e, r);
        if (ec1 != std::errc() || p1 == e || *p1 != ',')
            throw ScenarioError(path + ":" + std::to_string(lineno) +
                                ": expected two numeric columns r,v");
        auto [p2, ec2] = std::from_chars(p1 + 1, e, v);
        if (ec2 != std::errc() || p2 != e)
            throw ScenarioError(path + ":" + std::to_string(lineno) +
                                ": expected two numeric columns r,v");
        radii.push_back(r);
        speeds.push_back(v);
    }
    if (radii.empty()) throw ScenarioError(path + ": no data rows");
}

int run_fit(const Scenario& s, const Options& o, std::uint64_t seed, double ts,
            Clock::time_point start) {
    require_keys(s.params, {"mode", "M", "data"}, {"knots", "G", "c"}, "params");
    double M = get_double(s.params, "M", "params");
    if (!(M > 0)) throw ScenarioError("params.M must be positive");
    GravityUnits u = get_units(s.params);

    std::filesystem::path data(get_string(s.params, "data", "params"));
    if (data.is_relative()) data = std::filesystem::path(s.path).parent_path() / data;
    std::vector<double> radii, speeds;
    read_curve_csv(data.string(), radii, speeds);

    std::vector<double> knots = radii;
    if (s.params.contains("knots")) {
        const auto& jk = s.params.at("knots");
        if (!jk.is_array() || jk.empty())
            throw ScenarioError("params.knots must be a non-empty array of numbers");
        knots.clear();
        for (const auto& v : jk) {
            if (!v.is_number())
                throw ScenarioError("params.knots must be a non-empty array of numbers");
            knots.push_back(v.get<double>());
        }
    }

    RotationCurveFit fit = rotation_curve_fit(radii, speeds, M, u, knots);
    std::vector<double> v_model = rotation_curve_predict(M, fit.delta, u, radii);

    std::vector<std::vector<double>> rows;
    rows.reserve(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i)
        rows.push_back({radii[i], speeds[i], v_model[i], fit.delta(radii[i]), fit.halo_mass[i]});
    write_csv(resolve_out(o, output_name(s, "csv", "fit.csv")),
              "r,v_data,v_model,delta,halo_mass", rows);

    nlohmann::json out;
    out["M"] = M;
    out["knot_radii"] = fit.delta.knot_r;
    out["delta"] = fit.delta.knot_delta;
    out["rms"] = fit.rms;
    out["halo_mass"] = fit.halo_mass;
    {
        std::string path = resolve_out(o, output_name(s, "fit", "fit.json"));
        std::ofstream f(path, std::ios::binary);
        if (!f) throw ScenarioError("cannot write " + path);
        f << out.dump(2) << '\n';
    }

    double v_scale = 0;
    for (double v : speeds) v_scale += v;
    v_scale /= static_cast<double>(speeds.size());

    checks::ModuleReport rep;
    rep.module = "york_gravity";
    add_invariant(rep, "fit-residual-rms", fit.rms / v_scale, 0.02, ts);
    return finish(std::move(rep), s, o, seed, ts, start);
}

}  // namespace

int cmd_gravity(const Scenario& s, const Options& o) {
    auto start = Clock::now();
    if (!s.params.contains("mode")) throw ScenarioError("params.mode is required");
    std::string mode = get_string(s.params, "mode", "params");
    std::uint64_t seed = effective_seed(s, o);
    double ts = effective_tol_scale(s, o);
    if (mode == "metric") return run_metric(s, o, seed, ts, start);
    if (mode == "energy") return run_energy(s, o, seed, ts, start);
    if (mode == "pn") return run_pn(s, o, seed, ts, start);
    if (mode == "fit") return run_fit(s, o, seed, ts, start);
    throw ScenarioError("params.mode must be metric, energy, pn or fit");
}
