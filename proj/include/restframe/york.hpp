#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "restframe/grid.hpp"

namespace restframe {

/*
 * York canonical basis for ADM tetrad gravity (3-orthogonal gauge family).
 * The diagonal scale factors are parameterized as Q_a = exp(sum_abar
 * gamma_abar_a R_abar) with a numerical 2x3 matrix gamma subject to
 *   sum_a gamma_abar_a = 0,  sum_a gamma_abar_a gamma_bbar_a = delta_abar_bbar,
 *   sum_abar gamma_abar_u gamma_abar_v = delta_uv - 1/3,
 * which make prod_a Q_a = 1 identically, so det 3g = phi_tilde^2 exactly.
 */
struct GammaMatrix {
    std::array<std::array<double, 3>, 2> g{};  // g[abar][a]

    double operator()(int abar, int a) const { return g[abar][a]; }
    double& operator()(int abar, int a) { return g[abar][a]; }
};

// The reference solution gamma_1 = (1,-1,0)/sqrt(2), gamma_2 =
// (1,1,-2)/sqrt(6), optionally rotated in the abar-plane by a seeded random
// O(2) element (every rotation of a solution is a solution).
GammaMatrix gamma_solve(std::optional<std::uint64_t> seed = std::nullopt);

// Largest constraint violation of the three families above.
double gamma_residual(const GammaMatrix& g);

// V(theta) = exp(sum theta^i T_i) via the Rodrigues formula; T_i are the
// so(3) generators, right-handed rotation by |theta| about theta-hat.
Mat3 rotation_from_theta(const Vec3& theta);

/*
 * Point of the York canonical basis: angles theta^i, volume density
 * phi_tilde = sqrt(det 3g) > 0, diagonal logs R_abar with momenta Pi_abar,
 * York time pi_phi (conjugate to phi_tilde, proportional to the trace 3K),
 * lapse perturbation n (1+n > 0), shift n_bar_(a), and the trace-free shear
 * sigma_(a)(b).
 */
struct YorkBasisPoint {
    Vec3 theta;
    double phi_tilde = 1;
    std::array<double, 2> R{};
    double pi_phi = 0;
    std::array<double, 2> Pi{};
    double n = 0;
    Vec3 n_bar;
    Mat3 shear;  // symmetric trace-free, flat indices (a)(b)
};

struct MetricResult {
    Mat4 g;      // 4-metric, index order (tau, r)
    Mat3 triad;  // triad[a][r] = cotriad component 3e_(a)r
    double phi_tilde = 1;
    int eps = 1;
};

/*
 * Reconstructs the 4-metric of Eq-type
 *   4g_tautau = eps[(1+n)^2 - sum_a n_bar_a^2]
 *   4g_taur   = -eps sum_a n_bar_a 3e_(a)r
 *   4g_rs     = -eps phi_tilde^(2/3) sum_a V_ra V_sa Q_a^2
 * with 3e_(a)r = V_ra(theta) phi_tilde^(1/3) Q_a.  Throws std::domain_error
 * for phi_tilde <= 0 or 1+n <= 0.
 */
MetricResult metric_from_york(const YorkBasisPoint& p, const GammaMatrix& gamma, int eps = 1);

struct GravityUnits {
    double G = 1;
    double c = 1;
};

/*
 * Weak ADM energy density in the York basis (units of energy / volume):
 *   c [ M_check - (c^3/16 pi G) S
 *       + (4 pi G/c^3) phi_tilde^{-1} sum_abar Pi_abar^2
 *       + phi_tilde ( (c^3/16 pi G) sum_{a != b} sigma_(a)(b)^2
 *                     - (6 pi G/c^3) pi_phi^2 ) ]
 * M_check is the matter energy density term, S the Christoffel-quadratic
 * curvature scalar.  The negative pi_phi^2 term is the inverted kinetic
 * sign of the York time.
 */
double adm_energy_density(const YorkBasisPoint& p, double matter, double S_term,
                          const GravityUnits& u);

struct YorkField {
    Grid3 grid;
    std::vector<YorkBasisPoint> pts;

    YorkField() = default;
    explicit YorkField(const Grid3& g) : grid(g), pts(g.size()) {}
};

/*
 * Weak ADM energy: lattice integral of adm_energy_density.  S is computed
 * from the reconstructed 3-metric with centred-difference Christoffels,
 *   S = 3g^{rs} (Gamma^u_{vr} Gamma^v_{us} - Gamma^u_{rs} Gamma^v_{uv}),
 * unless `S_override` supplies it directly (spatially constant fields have
 * S = 0 exactly).
 */
double adm_energy(const YorkField& f, const ScalarField& matter, const GammaMatrix& gamma,
                  const GravityUnits& u, const ScalarField* S_override = nullptr);

// Pointwise S of the reconstructed 3-metric field (exposed for testing).
ScalarField curvature_scalar_fd(const YorkField& f, const GammaMatrix& gamma);

}  // namespace restframe
