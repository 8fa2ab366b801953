#pragma once

#include <cstdint>
#include <random>

#include "restframe/geometry.hpp"

namespace restframe {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(g);
}

inline Vec3 uniform_vec3(std::mt19937_64& g, double lo, double hi) {
    double x = uniform(g, lo, hi), y = uniform(g, lo, hi), z = uniform(g, lo, hi);
    return {x, y, z};
}

}  // namespace restframe
