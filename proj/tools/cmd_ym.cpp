#include <chrono>
#include <cmath>
#include <numbers>

#include "common.hpp"
#include "restframe/rng.hpp"
#include "restframe/spectral.hpp"
#include "restframe/yangmills.hpp"

using namespace restframe;

namespace {

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

}  // namespace

int cmd_ym(const Scenario& s, const Options& o) {
    auto start = std::chrono::steady_clock::now();
    require_keys(s.params, {"group", "grid_n", "spacing", "region"}, {"colors", "modes", "amp"},
                 "params");

    std::string group = get_string(s.params, "group", "params");
    StructureConstants f;
    if (group == "su2") {
        f = StructureConstants::su2();
    } else if (group == "su3") {
        f = StructureConstants::su3();
    } else if (group == "abelian") {
        f = StructureConstants::abelian(
            static_cast<int>(get_int_or(s.params, "colors", 1, "params")));
    } else {
        throw ScenarioError("params.group must be su2, su3 or abelian");
    }

    Grid3 g(static_cast<int>(get_int_or(s.params, "grid_n", 0, "params")),
            get_double(s.params, "spacing", "params"));
    long long modes = get_int_or(s.params, "modes", 4, "params");
    double amp = get_double_or(s.params, "amp", 0.8, "params");
    if (modes < 1) throw ScenarioError("params.modes must be positive");
    const auto& jr = s.params.at("region");
    require_keys(jr, {"lo", "hi"}, {}, "params.region");
    Box region{get_vec3(jr, "lo", "params.region"), get_vec3(jr, "hi", "params.region")};

    std::uint64_t seed = effective_seed(s, o);
    double ts = effective_tol_scale(s, o);
    auto rng = make_rng(seed);

    YmState state(g, f);
    for (int a = 0; a < f.dim; ++a)
        for (int r = 0; r < 3; ++r) {
            state.A[a][r] = random_scalar(rng, g, static_cast<int>(modes), amp);
            state.pi[a][r] = random_scalar(rng, g, static_cast<int>(modes), amp);
        }

    ColorCharges cc = ym_color_charges(state, region);
    std::vector<std::vector<double>> rows;
    double worst = 0;
    for (int a = 0; a < f.dim; ++a) {
        rows.push_back({static_cast<double>(a), cc.Q_strong[a], cc.Q_weak[a],
                        cc.gamma_integral[a]});
        double scale = 1 + std::abs(cc.Q_strong[a]) + std::abs(cc.Q_weak[a]);
        worst = std::max(worst,
                         std::abs(cc.Q_strong[a] - cc.Q_weak[a] - cc.gamma_integral[a]) / scale);
    }
    write_csv(resolve_out(o, output_name(s, "csv", "ym.csv")),
              "colour,Q_strong,Q_weak,gamma_integral", rows);

    checks::ModuleReport rep;
    rep.module = "gauge_fields";
    add_invariant(rep, "colour-charge-identity", worst, 1e-12, ts);

    if (group == "abelian") {
        // every colour must reduce to the Maxwell relations
        double ab = 0;
        auto gauss = ym_gauss(state);
        for (int a = 0; a < f.dim; ++a) {
            ScalarField div = divergence(state.pi[a]);
            for (std::size_t i = 0; i < div.v.size(); ++i)
                ab = std::max(ab, std::abs(gauss[a].v[i] - div.v[i]));
            ab = std::max(ab, std::abs(cc.Q_weak[a]));
            ab = std::max(ab, std::abs(cc.Q_strong[a] - box_flux(state.pi[a], region)));
        }
        add_invariant(rep, "abelian-limit", ab, 1e-12, ts);
    }

    auto stop = std::chrono::steady_clock::now();
    return finish_report(std::move(rep), s, o, seed, ts,
                         std::chrono::duration<double, std::milli>(stop - start).count());
}
