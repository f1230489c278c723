#include "magalg/random.hpp"

#include <cmath>
#include <numbers>

namespace magalg {

double Rng::normal() {
    // Box-Muller; 1 - u keeps the log argument away from zero.
    const double u1 = 1.0 - uniform(), u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vec3 Rng::unit_vector() {
    for (;;) {
        const Vec3 v{normal(), normal(), normal()};
        const double n = norm(v);
        if (n > 1e-6) return v / n;
    }
}

namespace {

Vec3 random_point(Rng& rng) { return Vec3{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}; }

}  // namespace

DipoleConfig random_config(Rng& rng, int n_magnets, double r_min, double r_max) {
    DipoleConfig cfg;
    cfg.field_point = random_point(rng);
    for (int i = 0; i < n_magnets; ++i)
        cfg.magnets.push_back(cfg.field_point + rng.uniform(r_min, r_max) * rng.unit_vector());
    return cfg;
}

PlanarSample random_planar_config(Rng& rng, int max_magnets, double r_min, double r_max) {
    PlanarSample s;
    s.normal = rng.unit_vector();
    s.config.field_point = random_point(rng);
    const Vec3 u = any_orthogonal(s.normal), v = cross(s.normal, u);
    const int n = rng.integer(1, max_magnets);
    for (int i = 0; i < n; ++i) {
        const double a = rng.uniform(0.0, 2.0 * std::numbers::pi), r = rng.uniform(r_min, r_max);
        s.config.magnets.push_back(s.config.field_point + r * (std::cos(a) * u + std::sin(a) * v));
    }
    return s;
}

PlanarSample random_mirror_config(Rng& rng, double r_min, double r_max) {
    PlanarSample s;
    s.normal = rng.unit_vector();
    const Vec3 u = any_orthogonal(s.normal), v = cross(s.normal, u);
    std::vector<MirrorBasePoint> base;
    std::vector<Vec3> in_plane;
    const int pairs = rng.integer(1, 4), singles = rng.integer(0, 3);
    for (int i = 0; i < pairs; ++i) {
        // Distance to the field point r, elevation angle away from the plane.
        const double a = rng.uniform(0.0, 2.0 * std::numbers::pi), r = rng.uniform(r_min, r_max);
        const double el = rng.uniform(0.1, 1.4);
        base.push_back({r * std::cos(el) * (std::cos(a) * u + std::sin(a) * v), r * std::sin(el)});
    }
    for (int i = 0; i < singles; ++i) {
        const double a = rng.uniform(0.0, 2.0 * std::numbers::pi), r = rng.uniform(r_min, r_max);
        in_plane.push_back(r * (std::cos(a) * u + std::sin(a) * v));
    }
    s.config = gen_mirror_symmetric(base, in_plane, s.normal);
    const Vec3 shift = random_point(rng);
    for (Vec3& o : s.config.magnets) o += shift;
    s.config.field_point = shift;
    return s;
}

}  // namespace magalg
