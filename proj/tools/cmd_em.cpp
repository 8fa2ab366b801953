#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>

#include "common.hpp"
#include "restframe/maxwell.hpp"
#include "restframe/rng.hpp"
#include "restframe/spectral.hpp"

using namespace restframe;

namespace {

// seeded band-limited field: random cosine modes below a quarter of Nyquist
ScalarField random_scalar(std::mt19937_64& rng, const Grid3& g, int nmodes, double amp) {
    ScalarField f(g);
    double L = g.length();
    constexpr double two_pi = 2 * std::numbers::pi;
    for (int t = 0; t < nmodes; ++t) {
        std::array<int, 3> m;
        for (auto& mi : m) mi = static_cast<int>(uniform(rng, -3.49, 3.49));
        double a = uniform(rng, -amp, amp), ph = uniform(rng, 0, two_pi);
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                for (int k = 0; k < g.n; ++k) {
                    Vec3 x = g.point(i, j, k);
                    f.at(i, j, k) +=
                        a * std::cos(two_pi / L * (m[0] * x.x + m[1] * x.y + m[2] * x.z) + ph);
                }
    }
    return f;
}

void add_mode(ScalarField& f, const std::array<int, 3>& m, double amp, double phase) {
    const Grid3& g = f.grid;
    double L = g.length();
    constexpr double two_pi = 2 * std::numbers::pi;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            for (int k = 0; k < g.n; ++k) {
                Vec3 x = g.point(i, j, k);
                f.at(i, j, k) +=
                    amp * std::cos(two_pi / L * (m[0] * x.x + m[1] * x.y + m[2] * x.z) + phase);
            }
}

double max_field_diff(const ScalarField& a, const ScalarField& b) {
    double worst = 0;
    for (std::size_t i = 0; i < a.v.size(); ++i) worst = std::max(worst, std::abs(a.v[i] - b.v[i]));
    return worst;
}

double max_field_diff(const VectorField3& a, const VectorField3& b) {
    double worst = 0;
    for (int r = 0; r < 3; ++r) worst = std::max(worst, max_field_diff(a[r], b[r]));
    return worst;
}

void write_snapshot(const std::string& path, const VectorField3& f) {
    for (int r = 0; r < 3; ++r)
        for (double v : f[r].v)
            if (!std::isfinite(v)) throw NumericalError("non-finite value in field snapshot");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ScenarioError("cannot write " + path);
    for (int r = 0; r < 3; ++r)
        out.write(reinterpret_cast<const char*>(f[r].v.data()),
                  static_cast<std::streamsize>(f[r].v.size() * sizeof(double)));
}

}  // namespace

int cmd_em(const Scenario& s, const Options& o) {
    auto start = std::chrono::steady_clock::now();
    require_keys(s.params, {"grid_n", "spacing", "tau1", "dt"},
                 {"modes", "amp", "mode_list", "stride", "charges", "region", "gauge_sequence"},
                 "params");

    long long n = get_int_or(s.params, "grid_n", 0, "params");
    double spacing = get_double(s.params, "spacing", "params");
    Grid3 g(static_cast<int>(n), spacing);
    double tau1 = get_double(s.params, "tau1", "params");
    double dt = get_double(s.params, "dt", "params");
    if (!(dt > 0) || !(tau1 > 0)) throw ScenarioError("params.tau1 and params.dt must be positive");
    long long stride = get_int_or(s.params, "stride", 1, "params");
    if (stride < 1) throw ScenarioError("params.stride must be positive");

    std::uint64_t seed = effective_seed(s, o);
    double ts = effective_tol_scale(s, o);
    auto rng = make_rng(seed);

    EmState state(g);
    if (s.params.contains("mode_list")) {
        if (s.params.contains("modes") || s.params.contains("amp"))
            throw ScenarioError("params.mode_list excludes params.modes and params.amp");
        const auto& jm = s.params.at("mode_list");
        if (!jm.is_array() || jm.empty())
            throw ScenarioError("params.mode_list must be a non-empty array");
        for (const auto& item : jm) {
            require_keys(item, {"target", "k", "amp"}, {"component", "phase"},
                         "params.mode_list[]");
            std::string target = get_string(item, "target", "params.mode_list[]");
            const auto& jk = item.at("k");
            if (!jk.is_array() || jk.size() != 3)
                throw ScenarioError("params.mode_list[].k must be an array of 3 integers");
            std::array<int, 3> m;
            for (int r = 0; r < 3; ++r) {
                if (!jk[r].is_number_integer())
                    throw ScenarioError("params.mode_list[].k must be an array of 3 integers");
                m[r] = jk[r].get<int>();
            }
            double amp = get_double(item, "amp", "params.mode_list[]");
            double phase = get_double_or(item, "phase", 0.0, "params.mode_list[]");
            if (target == "A_tau") {
                add_mode(state.A_tau, m, amp, phase);
            } else if (target == "A" || target == "pi") {
                long long comp = get_int_or(item, "component", -1, "params.mode_list[]");
                if (comp < 0 || comp > 2)
                    throw ScenarioError("params.mode_list[].component must be 0, 1 or 2");
                int r = static_cast<int>(comp);
                add_mode(target == "A" ? state.A[r] : state.pi[r], m, amp, phase);
            } else {
                throw ScenarioError("params.mode_list[].target must be A, pi or A_tau");
            }
        }
    } else {
        long long modes = get_int_or(s.params, "modes", 8, "params");
        double amp = get_double_or(s.params, "amp", 1.0, "params");
        if (modes < 1) throw ScenarioError("params.modes must be positive");
        for (int r = 0; r < 3; ++r) {
            state.A[r] = random_scalar(rng, g, static_cast<int>(modes), amp);
            state.pi[r] = random_scalar(rng, g, static_cast<int>(modes), amp);
        }
        state.A_tau = random_scalar(rng, g, static_cast<int>(modes) / 2 + 1, 0.5 * amp);
    }

    ScalarField rho(g);
    if (s.params.contains("charges")) {
        const auto& jc = s.params.at("charges");
        if (!jc.is_array() || jc.empty())
            throw ScenarioError("params.charges must be a non-empty array");
        std::vector<ChargeSpec> specs;
        for (const auto& item : jc) {
            require_keys(item, {"e", "center", "width"}, {}, "params.charges[]");
            specs.push_back({get_double(item, "e", "params.charges[]"),
                             get_vec3(item, "center", "params.charges[]"),
                             get_double(item, "width", "params.charges[]")});
        }
        rho = make_charge_density(g, specs);
    }
    Box region{{0, 0, 0}, {g.length(), g.length(), g.length()}};
    if (s.params.contains("region")) {
        const auto& jr = s.params.at("region");
        require_keys(jr, {"lo", "hi"}, {}, "params.region");
        region = {get_vec3(jr, "lo", "params.region"), get_vec3(jr, "hi", "params.region")};
        for (int r = 0; r < 3; ++r) {
            double w = region.hi[r] - region.lo[r];
            if (!(w > 0) || w > g.length())
                throw ScenarioError("params.region must have 0 < hi - lo <= box length per axis");
        }
    }
    bool gauge_seq = false;
    if (s.params.contains("gauge_sequence")) {
        if (!s.params.at("gauge_sequence").is_boolean())
            throw ScenarioError("params.gauge_sequence must be a boolean");
        gauge_seq = s.params.at("gauge_sequence").get<bool>();
    }

    checks::ModuleReport rep;
    rep.module = "gauge_fields";

    EmDecomposition d = decompose(state);
    {
        EmState back = recompose(d);
        double scale = 1 + field_max_abs(state.A) + field_max_abs(state.pi);
        double worst = std::max(max_field_diff(back.A, state.A),
                                max_field_diff(back.pi, state.pi));
        add_invariant(rep, "decomposition-roundtrip", worst / scale, 1e-12, ts);
    }

    ScalarField Gamma0 = d.Gamma;
    long long nsteps = std::max<long long>(1, std::llround(tau1 / dt));
    double charge_defect = 0;
    auto row_at = [&](double tau, double energy, double max_div) {
        ChargePair cp = charge_identity(d, rho, region);
        double scale = 1 + std::abs(cp.Q_strong) + std::abs(cp.Q_weak);
        charge_defect = std::max(
            charge_defect, std::abs(cp.Q_strong - cp.Q_weak - cp.gamma_minus_rho) / scale);
        return std::vector<double>{tau,  energy,        max_div,
                                   field_max_abs(gauss_residual(d, rho)), cp.Q_strong, cp.Q_weak};
    };

    std::vector<std::vector<double>> rows;
    rows.push_back(row_at(0.0, radiation_energy(d), field_max_abs(divergence(d.A_perp))));
    double H0 = rows.front()[1];
    for (long long k = 0; k < nsteps; k += stride) {
        long long k1 = std::min(nsteps, k + stride);
        EmEvolveResult ev = evolve_free(d, dt * k, dt * k1, dt, static_cast<int>(k1 - k));
        d = ev.final_state;
        const EmEvolveSample& last = ev.series.back();
        rows.push_back(row_at(last.tau, last.energy, last.max_div_A_perp));
    }
    write_csv(resolve_out(o, output_name(s, "csv", "em.csv")),
              "tau,H_c,max_div_A_perp,max_gamma_minus_rho,Q_strong,Q_weak", rows);

    add_invariant(rep, "transversality", max_transverse_violation(d), 1e-10, ts);
    add_invariant(rep, "gauss-field-frozen", max_field_diff(d.Gamma, Gamma0), 1e-15, ts);
    if (H0 > 0)
        add_invariant(rep, "energy-drift", std::abs(rows.back()[1] - H0) / H0, 1e-2, ts);
    add_invariant(rep, "charge-identity", charge_defect, 1e-12, ts);

    if (gauge_seq) {
        EmDecomposition gd = d;
        EmState s0 = recompose(d);
        VectorField3 B0 = curl(s0.A);
        double Hc = radiation_energy(d);
        double fscale = 1 + field_max_abs(state.A) + field_max_abs(state.pi);
        for (int step = 0; step < 5; ++step) {
            ScalarField lam = random_scalar(rng, g, 3, 0.3);
            gauge_step(gd, lam, 0.1);
        }
        EmState s1 = recompose(gd);
        double worst = std::max({max_field_diff(gd.A_perp, d.A_perp),
                                 max_field_diff(gd.pi_perp, d.pi_perp),
                                 max_field_diff(gd.Gamma, d.Gamma),
                                 max_field_diff(s1.pi, s0.pi),
                                 max_field_diff(curl(s1.A), B0)});
        worst = std::max(worst / fscale, std::abs(radiation_energy(gd) - Hc) / (1 + Hc));
        add_invariant(rep, "gauge-invariance", worst, 1e-12, ts);
    }

    std::string snap = output_name(s, "snapshot", "");
    if (!snap.empty()) write_snapshot(resolve_out(o, snap), d.A_perp);

    auto stop = std::chrono::steady_clock::now();
    return finish_report(std::move(rep), s, o, seed, ts,
                         std::chrono::duration<double, std::milli>(stop - start).count());
}
