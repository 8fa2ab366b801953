#include <chrono>
#include <cmath>

#include "common.hpp"
#include "restframe/kinematics.hpp"
#include "restframe/rng.hpp"

using namespace restframe;

namespace {

double metric_defect(const Mat4& B) {
    double worst = 0;
    for (int eps : {+1, -1}) {
        Mat4 eta = minkowski(eps);
        Mat4 lhs = B.transposed() * eta * B;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(lhs(i, j) - eta(i, j)));
    }
    return worst;
}

}  // namespace

int cmd_kinematics(const Scenario& s, const Options& o) {
    auto start = std::chrono::steady_clock::now();
    require_keys(s.params, {"h"}, {"Mc", "z", "S", "samples", "h_range"}, "params");

    Vec3 h = get_vec3(s.params, "h", "params");
    double Mc = get_double_or(s.params, "Mc", 1.0, "params");
    if (!(Mc > 0)) throw ScenarioError("params.Mc must be positive");
    Vec3 z = get_vec3_or(s.params, "z", {}, "params");
    Vec3 S = get_vec3_or(s.params, "S", {}, "params");
    long long samples = get_int_or(s.params, "samples", 0, "params");
    double h_range = get_double_or(s.params, "h_range", 10.0, "params");
    if (samples < 0) throw ScenarioError("params.samples must be non-negative");

    std::uint64_t seed = effective_seed(s, o);
    double ts = effective_tol_scale(s, o);

    Mat4 B = wigner_boost(h);
    JacobiData j{z, h, Mc, S};
    ExternalGenerators gen = external_generators(j);

    checks::ModuleReport rep;
    rep.module = "kinematics";
    double defect = metric_defect(B);
    double worst_sampled = defect;
    auto rng = make_rng(seed);
    for (long long t = 0; t < samples; ++t)
        worst_sampled =
            std::max(worst_sampled, metric_defect(wigner_boost(uniform_vec3(rng, -h_range, h_range))));
    add_invariant(rep, "boost-metric-preservation", worst_sampled, 1e-12, ts);

    double shell = 0;
    for (int eps : {+1, -1}) {
        double p2 = minkowski_dot(gen.P, gen.P, eps);
        shell = std::max(shell, std::abs(eps * p2 - Mc * Mc) / (Mc * Mc * (1 + dot(h, h))));
    }
    add_invariant(rep, "mass-shell", shell, 1e-12, ts);

    // boost matrix, then one row each for P, J (dual), K and the Moller radius
    std::vector<std::vector<double>> rows;
    for (int i = 0; i < 4; ++i) rows.push_back({B(i, 0), B(i, 1), B(i, 2), B(i, 3)});
    rows.push_back({gen.P.t, gen.P.x, gen.P.y, gen.P.z});
    rows.push_back({0, gen.J.x, gen.J.y, gen.J.z});
    rows.push_back({0, gen.K.x, gen.K.y, gen.K.z});
    rows.push_back({moller_radius(Mc, S), 0, 0, 0});
    write_csv(resolve_out(o, output_name(s, "csv", "kinematics.csv")), "c0,c1,c2,c3", rows);

    auto stop = std::chrono::steady_clock::now();
    return finish_report(std::move(rep), s, o, seed, ts,
                         std::chrono::duration<double, std::milli>(stop - start).count());
}
