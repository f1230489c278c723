#include "magalg/dipole_field.hpp"

#include <algorithm>
#include <cmath>

#include "magalg/errors.hpp"

namespace magalg {

void validate(const DipoleConfig& cfg) {
    if (cfg.magnets.empty()) throw InvalidArgument("empty configuration");
    for (std::size_t i = 0; i < cfg.magnets.size(); ++i) {
        const Vec3 d = cfg.field_point - cfg.magnets[i];
        if (!(norm(d) >= kSingularDistance)) throw SingularFieldPoint(i);
    }
}

double MagneticAlgebra::scale() const {
    double s = 0.0;
    for (const auto& b : basis_) s = std::max(s, frobenius_norm(b.sym()));
    return s;
}

Vec3 p_vector(const DipoleConfig& cfg) {
    validate(cfg);
    Vec3 p;
    for (const Vec3& o : cfg.magnets) {
        const Vec3 d = cfg.field_point - o;
        const double r2 = dot(d, d);
        p += d / (r2 * r2 * std::sqrt(r2));
    }
    return p;
}

TracelessSymMat3 gradient_operator(const DipoleConfig& cfg, const Vec3& moment) {
    const Vec3 p = p_vector(cfg);
    SymMat3 f = SymMat3::sym_outer(p, moment) + dot(moment, p) * SymMat3::identity();
    for (const Vec3& o : cfg.magnets) {
        const Vec3 d = cfg.field_point - o;
        const double r = norm(d);
        const Vec3 u = d / r;
        const double r4 = r * r * r * r;
        f -= (5.0 * dot(moment, u) / r4) * SymMat3::outer(u);
    }
    // Removes only rounding drift; the expression is traceless analytically.
    return TracelessSymMat3::project(f);
}

MagneticAlgebra build_algebra(const DipoleConfig& cfg) {
    validate(cfg);
    return MagneticAlgebra({gradient_operator(cfg, Vec3::unit(0)), gradient_operator(cfg, Vec3::unit(1)),
                            gradient_operator(cfg, Vec3::unit(2))});
}

Vec3 field_B(const Vec3& magnet_pos, const Vec3& moment, const Vec3& at) {
    const Vec3 d = at - magnet_pos;
    const double r = norm(d);
    if (!(r >= kSingularDistance)) throw SingularFieldPoint(0);
    const Vec3 u = d / r;
    return (kMu0Over4Pi / (r * r * r)) * (3.0 * dot(u, moment) * u - moment);
}

Vec3 force(const DipoleConfig& cfg, const Vec3& big_m, const Vec3& small_m) {
    const Vec3 f = gradient_operator(cfg, big_m) * small_m;
    return cfg.si_prefactor ? (3.0 * kMu0Over4Pi) * f : f;
}

DipoleConfig gen_pair(const Vec3& o_plus, const Vec3& o_minus) {
    if (!(norm(o_plus - o_minus) >= kSingularDistance))
        throw InvalidArgument("coincident magnet positions");
    return DipoleConfig{{o_plus, o_minus}, Vec3{}, false};
}

DipoleConfig gen_mirror_symmetric(const std::vector<MirrorBasePoint>& base_points,
                                  const std::vector<Vec3>& in_plane_points,
                                  const Vec3& plane_normal) {
    if (!(norm(plane_normal) > 0.0)) throw InvalidArgument("zero plane normal");
    if (base_points.empty() && in_plane_points.empty()) throw InvalidArgument("empty configuration");
    const Vec3 n = normalized(plane_normal);
    const auto in_plane = [&](const Vec3& v) { return v - dot(v, n) * n; };

    DipoleConfig cfg;
    cfg.magnets.reserve(2 * base_points.size() + in_plane_points.size());
    for (const auto& b : base_points) {
        if (!(b.height > 0.0)) throw InvalidArgument("mirror height must be positive");
        const Vec3 u = in_plane(b.offset);
        cfg.magnets.push_back(u + b.height * n);
        cfg.magnets.push_back(u - b.height * n);
    }
    for (const Vec3& q : in_plane_points) cfg.magnets.push_back(in_plane(q));
    return cfg;
}

DipoleConfig gen_cubic_lattice(double spacing, int half_extent, bool exclude_origin) {
    if (!(spacing > 0.0)) throw InvalidArgument("lattice spacing must be positive");
    if (half_extent < 1) throw InvalidArgument("lattice half extent must be at least 1");
    DipoleConfig cfg;
    for (int i = -half_extent; i <= half_extent; ++i)
        for (int j = -half_extent; j <= half_extent; ++j)
            for (int k = -half_extent; k <= half_extent; ++k) {
                if (exclude_origin && i == 0 && j == 0 && k == 0) continue;
                cfg.magnets.push_back(spacing * Vec3{double(i), double(j), double(k)});
            }
    return cfg;
}

}  // namespace magalg
