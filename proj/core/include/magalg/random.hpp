#pragma once

// Seeded random configurations. Built only on the raw mt19937_64 stream so a
// seed reproduces the same configuration with any standard library.

#include <cstdint>
#include <random>

#include "magalg/dipole_field.hpp"

namespace magalg {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Integer in [lo, hi].
    int integer(int lo, int hi) { return lo + int(uniform() * double(hi - lo + 1)); }
    double normal();
    Vec3 unit_vector();
    std::uint64_t next() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

struct PlanarSample {
    DipoleConfig config;
    Vec3 normal;  ///< normal of the plane holding the magnets and the field point
};

/// n magnets at distances in [r_min, r_max] from a random field point.
DipoleConfig random_config(Rng& rng, int n_magnets, double r_min = 0.3, double r_max = 2.0);

/// 1..max_magnets coplanar magnets, field point in the same (random) plane.
PlanarSample random_planar_config(Rng& rng, int max_magnets = 8, double r_min = 0.3, double r_max = 2.0);

/// Mirror pairs (1..4) plus 0..3 in-plane magnets about a random plane through
/// a random field point.
PlanarSample random_mirror_config(Rng& rng, double r_min = 0.3, double r_max = 2.0);

}  // namespace magalg
