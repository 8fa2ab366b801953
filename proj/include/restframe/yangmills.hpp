#pragma once

#include <string>
#include <vector>

#include "restframe/maxwell.hpp"

namespace restframe {

/*
 * Totally antisymmetric structure constants c_abc of a compact group.
 * Antisymmetry and the Jacobi identity are verified at construction
 * (std::invalid_argument otherwise).
 */
struct StructureConstants {
    int dim = 0;
    std::vector<double> c;  // c[(a*dim + b)*dim + c]
    std::string group;

    double at(int a, int b, int cc) const { return c[(static_cast<std::size_t>(a) * dim + b) * dim + cc]; }

    static StructureConstants su2();
    static StructureConstants su3();
    static StructureConstants abelian(int dim);  // all zero: Maxwell copies
};

struct YmState {
    Grid3 grid;
    StructureConstants f;
    std::vector<VectorField3> A;   // per colour
    std::vector<VectorField3> pi;  // per colour

    YmState() = default;
    YmState(const Grid3& g, StructureConstants sc)
        : grid(g), f(std::move(sc)), A(f.dim, VectorField3(g)), pi(f.dim, VectorField3(g)) {}
};

// Non-Abelian Gauss constraint Gamma_a = div pi_a + c_abc A_b . pi_c
// (spectral divergence, pointwise colour product).
std::vector<ScalarField> ym_gauss(const YmState& s);

// Infinitesimal gauge transformation with parameters eps_a:
//   delta A_a = grad eps_a + c_abc A_b eps_c,   delta pi_a = c_abc pi_b eps_c.
void ym_gauge_transform(YmState& s, const std::vector<ScalarField>& eps);

/*
 * Colour charges of a region:
 *   Q_a_strong = flux of pi_a through the boundary,
 *   Q_a_weak   = -c_abc integral A_b . pi_c,
 *   Q_a_strong - Q_a_weak = integral Gamma_a.
 * The linear (divergence) part uses the exact interpolant calculus; the
 * bilinear terms in Q_weak and Gamma_a share the lattice quadrature, so the
 * identity holds discretely for every state.  c_abc = 0 reduces everything
 * to per-colour Maxwell charges.
 */
struct ColorCharges {
    std::vector<double> Q_strong, Q_weak, gamma_integral;
};

ColorCharges ym_color_charges(const YmState& s, const Box& region);

}  // namespace restframe
