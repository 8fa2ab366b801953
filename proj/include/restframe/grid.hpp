#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "restframe/geometry.hpp"

namespace restframe {

/*
 * Periodic cubic lattice: n points per axis, physical side length n*spacing.
 * Fields are stored flat in row-major order, x slowest / z fastest:
 *     index(i,j,k) = (i*n + j)*n + k.
 */
struct Grid3 {
    int n = 0;
    double spacing = 1.0;

    Grid3() = default;
    Grid3(int n_, double spacing_) : n(n_), spacing(spacing_) {
        if (n < 4) throw std::invalid_argument("grid needs at least 4 points per axis");
        if (spacing <= 0) throw std::invalid_argument("grid spacing must be positive");
    }

    std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }
    double length() const { return n * spacing; }
    double cell_volume() const { return spacing * spacing * spacing; }
    std::size_t index(int i, int j, int k) const {
        return (static_cast<std::size_t>(i) * n + j) * n + k;
    }
    Vec3 point(int i, int j, int k) const { return {i * spacing, j * spacing, k * spacing}; }

    bool operator==(const Grid3& o) const { return n == o.n && spacing == o.spacing; }
};

struct ScalarField {
    Grid3 grid;
    std::vector<double> v;

    ScalarField() = default;
    explicit ScalarField(const Grid3& g) : grid(g), v(g.size(), 0.0) {}

    double& at(int i, int j, int k) { return v[grid.index(i, j, k)]; }
    double at(int i, int j, int k) const { return v[grid.index(i, j, k)]; }
};

struct VectorField3 {
    Grid3 grid;
    std::array<ScalarField, 3> comp;

    VectorField3() = default;
    explicit VectorField3(const Grid3& g) : grid(g), comp{ScalarField(g), ScalarField(g), ScalarField(g)} {}

    ScalarField& operator[](int r) { return comp[r]; }
    const ScalarField& operator[](int r) const { return comp[r]; }
};

// Axis-aligned region in physical coordinates, lo < hi componentwise.
// Bounds need not sit on lattice planes.
struct Box {
    Vec3 lo, hi;
};

double field_mean(const ScalarField& f);
double field_max_abs(const ScalarField& f);
double field_max_abs(const VectorField3& f);
Vec3 field_mean(const VectorField3& f);

// Shortest displacement a-b on the torus of side L.
Vec3 torus_delta(const Vec3& a, const Vec3& b, double L);

}  // namespace restframe
