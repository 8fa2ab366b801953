#include <chrono>
#include <cmath>

#include "common.hpp"
#include "restframe/nbody.hpp"

using namespace restframe;

namespace {

Vec4 get_vec4_or(const nlohmann::json& j, const char* key, const Vec4& fallback,
                 const std::string& where) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_array() || v.size() != 4)
        throw ScenarioError(where + "." + key + " must be an array of 4 numbers");
    for (const auto& e : v)
        if (!e.is_number()) throw ScenarioError(where + "." + key + " must be an array of 4 numbers");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>()};
}

}  // namespace

int cmd_nbody(const Scenario& s, const Options& o) {
    auto start = std::chrono::steady_clock::now();
    require_keys(s.params, {"m1", "m2", "c", "tau1", "dt"},
                 {"rho0", "pi0", "eta1", "eta2", "kappa1", "kappa2", "potential", "alpha", "mu",
                  "tau0", "stride", "h", "Y0"},
                 "params");

    double m1 = get_double(s.params, "m1", "params");
    double m2 = get_double(s.params, "m2", "params");
    double c = get_double(s.params, "c", "params");
    if (!(m1 > 0) || !(m2 > 0) || !(c > 0))
        throw ScenarioError("params.m1, params.m2 and params.c must be positive");
    double tau0 = get_double_or(s.params, "tau0", 0.0, "params");
    double tau1 = get_double(s.params, "tau1", "params");
    double dt = get_double(s.params, "dt", "params");
    long long stride = get_int_or(s.params, "stride", 1, "params");
    if (stride < 1) throw ScenarioError("params.stride must be positive");

    // initial data: relative coordinates, or per-particle positions/momenta
    bool relative = s.params.contains("rho0") || s.params.contains("pi0");
    bool individual = s.params.contains("eta1") || s.params.contains("eta2") ||
                      s.params.contains("kappa1") || s.params.contains("kappa2");
    if (relative == individual)
        throw ScenarioError("params needs either rho0/pi0 or eta1/eta2/kappa1/kappa2");
    TwoBodySplit init;
    init.m1 = m1;
    init.m2 = m2;
    if (relative) {
        init.rho = get_vec3(s.params, "rho0", "params");
        init.pi = get_vec3(s.params, "pi0", "params");
    } else {
        Particle p1{m1, get_vec3(s.params, "eta1", "params"),
                    get_vec3(s.params, "kappa1", "params")};
        Particle p2{m2, get_vec3(s.params, "eta2", "params"),
                    get_vec3(s.params, "kappa2", "params")};
        init = two_body_split(p1, p2);
        double scale = 1 + norm(p1.kappa) + norm(p2.kappa);
        if (norm(init.kappa_plus) > 1e-9 * scale)
            throw ScenarioError("params: total momentum kappa1 + kappa2 must vanish (rest frame)");
        init.kappa_plus = {};
    }

    std::string pot = "free";
    if (s.params.contains("potential")) pot = get_string(s.params, "potential", "params");
    TwoBodyMass mass;
    if (pot == "free") {
        mass = free_mass(m1, m2, c);
    } else if (pot == "coulomb") {
        mass = coulomb_mass(m1, m2, c, get_double(s.params, "alpha", "params"));
    } else if (pot == "yukawa") {
        mass = yukawa_mass(m1, m2, c, get_double(s.params, "alpha", "params"),
                           get_double(s.params, "mu", "params"));
    } else {
        throw ScenarioError("params.potential must be free, coulomb or yukawa");
    }

    Trajectory tr = evolve(init, mass, tau0, tau1, dt, static_cast<int>(stride));

    Vec3 pi0 = init.pi;
    std::vector<std::vector<double>> rows;
    rows.reserve(tr.samples.size());
    double Mc0 = tr.samples.front().gen.Mc;
    double mc_drift = 0, pi_drift = 0, p_rest = 0;
    for (const auto& sample : tr.samples) {
        const TwoBodySplit& st = sample.state;
        rows.push_back({sample.tau, st.rho.x, st.rho.y, st.rho.z, st.pi.x, st.pi.y, st.pi.z,
                        sample.gen.Mc, norm(sample.gen.P), norm(sample.gen.J)});
        mc_drift = std::max(mc_drift, std::abs(sample.gen.Mc - Mc0) / Mc0);
        pi_drift = std::max(pi_drift, norm(st.pi - pi0));
        p_rest = std::max(p_rest, norm(sample.gen.P));
    }
    write_csv(resolve_out(o, output_name(s, "csv", "nbody.csv")),
              "tau,rho_x,rho_y,rho_z,pi_x,pi_y,pi_z,Mc,P_norm,J_norm", rows);

    Embedding e{get_vec4_or(s.params, "Y0", {}, "params"),
                get_vec3_or(s.params, "h", {}, "params")};
    WorldLines w = reconstruct_worldlines(tr, e);
    std::vector<std::vector<double>> wrows;
    wrows.reserve(2 * w.tau.size());
    for (std::size_t i = 0; i < w.tau.size(); ++i) {
        wrows.push_back({w.tau[i], 1, w.x1[i].t, w.x1[i].x, w.x1[i].y, w.x1[i].z});
        wrows.push_back({w.tau[i], 2, w.x2[i].t, w.x2[i].x, w.x2[i].y, w.x2[i].z});
    }
    write_csv(resolve_out(o, output_name(s, "worldlines", "worldlines.csv")),
              "tau,particle,x0,x1,x2,x3", wrows);

    std::uint64_t seed = effective_seed(s, o);
    double ts = effective_tol_scale(s, o);
    checks::ModuleReport rep;
    rep.module = "nbody";
    add_invariant(rep, "mass-conservation", mc_drift, 1e-6, ts);
    add_invariant(rep, "rest-frame-momentum", p_rest, 1e-12, ts);
    if (pot == "free") add_invariant(rep, "free-momentum-constant", pi_drift, 1e-12, ts);

    auto stop = std::chrono::steady_clock::now();
    return finish_report(std::move(rep), s, o, seed, ts,
                         std::chrono::duration<double, std::milli>(stop - start).count());
}
