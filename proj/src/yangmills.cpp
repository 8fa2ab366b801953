#include "restframe/yangmills.hpp"

#include <cmath>
#include <stdexcept>

namespace restframe {

namespace {

// Fill all six permutations of one independent entry.
void set_perm(StructureConstants& f, int a, int b, int c, double v) {
    auto& t = f.c;
    const int d = f.dim;
    auto put = [&](int i, int j, int k, double x) {
        t[(static_cast<std::size_t>(i) * d + j) * d + k] = x;
    };
    put(a, b, c, v);
    put(b, c, a, v);
    put(c, a, b, v);
    put(b, a, c, -v);
    put(a, c, b, -v);
    put(c, b, a, -v);
}

void validate(const StructureConstants& f) {
    const int d = f.dim;
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                if (f.at(a, b, c) + f.at(b, a, c) != 0.0 || f.at(a, b, c) + f.at(a, c, b) != 0.0)
                    throw std::invalid_argument("structure constants are not totally antisymmetric");
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c)
                for (int e = 0; e < d; ++e) {
                    double s = 0;
                    for (int g = 0; g < d; ++g)
                        s += f.at(a, b, g) * f.at(g, c, e) + f.at(b, c, g) * f.at(g, a, e) +
                             f.at(c, a, g) * f.at(g, b, e);
                    if (std::abs(s) > 1e-14)
                        throw std::invalid_argument("structure constants violate the Jacobi identity");
                }
}

}  // namespace

StructureConstants StructureConstants::su2() {
    StructureConstants f;
    f.dim = 3;
    f.group = "su(2)";
    f.c.assign(27, 0.0);
    set_perm(f, 0, 1, 2, 1.0);
    validate(f);
    return f;
}

StructureConstants StructureConstants::su3() {
    StructureConstants f;
    f.dim = 8;
    f.group = "su(3)";
    f.c.assign(512, 0.0);
    const double h = 0.5, r3 = std::sqrt(3.0) / 2;
    set_perm(f, 0, 1, 2, 1.0);
    set_perm(f, 0, 3, 6, h);
    set_perm(f, 0, 4, 5, -h);
    set_perm(f, 1, 3, 5, h);
    set_perm(f, 1, 4, 6, h);
    set_perm(f, 2, 3, 4, h);
    set_perm(f, 2, 5, 6, -h);
    set_perm(f, 3, 4, 7, r3);
    set_perm(f, 5, 6, 7, r3);
    validate(f);
    return f;
}

StructureConstants StructureConstants::abelian(int dim) {
    if (dim < 1) throw std::invalid_argument("abelian group needs at least one colour");
    StructureConstants f;
    f.dim = dim;
    f.group = "abelian";
    f.c.assign(static_cast<std::size_t>(dim) * dim * dim, 0.0);
    return f;
}

std::vector<ScalarField> ym_gauss(const YmState& s) {
    const int d = s.f.dim;
    std::vector<ScalarField> G;
    G.reserve(d);
    for (int a = 0; a < d; ++a) G.push_back(divergence(s.pi[a]));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c) {
                const double fv = s.f.at(a, b, c);
                if (fv == 0.0) continue;
                for (int r = 0; r < 3; ++r) {
                    const auto& Ab = s.A[b][r].v;
                    const auto& pc = s.pi[c][r].v;
                    auto& out = G[a].v;
                    for (std::size_t i = 0; i < out.size(); ++i) out[i] += fv * Ab[i] * pc[i];
                }
            }
    return G;
}

void ym_gauge_transform(YmState& s, const std::vector<ScalarField>& eps) {
    const int d = s.f.dim;
    if (static_cast<int>(eps.size()) != d)
        throw std::invalid_argument("one gauge parameter per colour required");
    for (const ScalarField& e : eps)
        if (!(e.grid == s.grid)) throw std::invalid_argument("gauge parameter on wrong grid");

    std::vector<VectorField3> dA, dpi;
    dA.reserve(d);
    dpi.reserve(d);
    for (int a = 0; a < d; ++a) {
        dA.push_back(gradient(eps[a]));
        dpi.emplace_back(s.grid);
    }
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c) {
                const double fv = s.f.at(a, b, c);
                if (fv == 0.0) continue;
                for (int r = 0; r < 3; ++r)
                    for (std::size_t i = 0; i < eps[c].v.size(); ++i) {
                        dA[a][r].v[i] += fv * s.A[b][r].v[i] * eps[c].v[i];
                        dpi[a][r].v[i] += fv * s.pi[b][r].v[i] * eps[c].v[i];
                    }
            }
    for (int a = 0; a < d; ++a)
        for (int r = 0; r < 3; ++r)
            for (std::size_t i = 0; i < s.A[a][r].v.size(); ++i) {
                s.A[a][r].v[i] += dA[a][r].v[i];
                s.pi[a][r].v[i] += dpi[a][r].v[i];
            }
}

ColorCharges ym_color_charges(const YmState& s, const Box& region) {
    const int d = s.f.dim;
    ColorCharges cc;
    cc.Q_strong.resize(d);
    cc.Q_weak.resize(d);
    cc.gamma_integral.resize(d);
    for (int a = 0; a < d; ++a) {
        ScalarField bilin(s.grid);
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c) {
                const double fv = s.f.at(a, b, c);
                if (fv == 0.0) continue;
                for (int r = 0; r < 3; ++r)
                    for (std::size_t i = 0; i < bilin.v.size(); ++i)
                        bilin.v[i] += fv * s.A[b][r].v[i] * s.pi[c][r].v[i];
            }
        const double bl = box_lattice_sum(bilin, region);
        cc.Q_strong[a] = box_flux(s.pi[a], region);
        cc.Q_weak[a] = -bl;
        cc.gamma_integral[a] = box_integral(divergence(s.pi[a]), region) + bl;
    }
    return cc;
}

}  // namespace restframe
