#pragma once

// Gradient operator of a system of synchronised point dipoles.
//
// For magnets at o_i sharing one moment M and a test magnet at p, with
// p_i = p - o_i and P = sum p_i_hat / |p_i|^4,
//
//   F_M = P M^T + M P^T + (M . P) I - 5 sum (M . p_i_hat) p_i_hat p_i_hat^T / |p_i|^4
//
// and the translational force on a test moment m is (3 mu0 / 4 pi) F_M m.
// The operator is stored bare (no physical prefactor); only force() applies it.

#include <array>
#include <cstddef>
#include <vector>

#include "magalg/linalg3.hpp"

namespace magalg {

/// mu0 / 4 pi in SI units (T m / A).
inline constexpr double kMu0Over4Pi = 1e-7;
/// Minimum admissible distance (m) between the field point and any magnet.
inline constexpr double kSingularDistance = 1e-9;

struct DipoleConfig {
    std::vector<Vec3> magnets;
    Vec3 field_point;
    bool si_prefactor = false;
};

/// Throws InvalidArgument for an empty configuration and SingularFieldPoint
/// (carrying the first offending index) when the field point is within
/// kSingularDistance of a magnet.
void validate(const DipoleConfig& cfg);

/// A linear map M -> F_M into traceless symmetric matrices, stored as the three
/// images of the standard basis.
class MagneticAlgebra {
public:
    MagneticAlgebra() = default;
    explicit MagneticAlgebra(const std::array<TracelessSymMat3, 3>& basis_images)
        : basis_(basis_images) {}

    const std::array<TracelessSymMat3, 3>& basis_images() const { return basis_; }
    const TracelessSymMat3& basis_image(std::size_t i) const { return basis_[i]; }

    /// F_M = sum_k M_k F_{e_k}
    TracelessSymMat3 apply(const Vec3& m) const {
        return TracelessSymMat3::assume(m.x * basis_[0].sym() + m.y * basis_[1].sym() +
                                        m.z * basis_[2].sym());
    }

    /// F_M m
    Vec3 product(const Vec3& big_m, const Vec3& small_m) const { return apply(big_m) * small_m; }

    /// Largest Frobenius norm among the basis images; the natural magnitude
    /// against which tolerances are expressed.
    double scale() const;

    bool is_zero() const { return scale() == 0.0; }

    MagneticAlgebra& operator+=(const MagneticAlgebra& o) {
        for (std::size_t k = 0; k < 3; ++k) basis_[k] += o.basis_[k];
        return *this;
    }
    friend MagneticAlgebra operator+(MagneticAlgebra a, const MagneticAlgebra& b) { return a += b; }
    friend MagneticAlgebra operator*(double s, MagneticAlgebra a) {
        for (auto& b : a.basis_) b *= s;
        return a;
    }

private:
    std::array<TracelessSymMat3, 3> basis_{};
};

/// P = sum p_i_hat / |p_i|^4.
Vec3 p_vector(const DipoleConfig& cfg);

/// Direct evaluation of F_M from the configuration (no basis expansion).
TracelessSymMat3 gradient_operator(const DipoleConfig& cfg, const Vec3& moment);

MagneticAlgebra build_algebra(const DipoleConfig& cfg);

/// Dipole field (tesla) at `at` of moment `moment` (A m^2) placed at `magnet_pos`.
Vec3 field_B(const Vec3& magnet_pos, const Vec3& moment, const Vec3& at);

/// Translational force on the test moment m. Newtons (prefactor 3 mu0 / 4 pi)
/// when cfg.si_prefactor, the bare F_M m otherwise.
Vec3 force(const DipoleConfig& cfg, const Vec3& big_m, const Vec3& small_m);

// Generators. The field point of every generated configuration is the origin;
// callers move it as needed.

/// Two magnets at o_plus and o_minus. Throws for coincident positions.
DipoleConfig gen_pair(const Vec3& o_plus, const Vec3& o_minus);

struct MirrorBasePoint {
    Vec3 offset;    ///< in-plane offset u (projected onto the plane)
    double height;  ///< t > 0; magnets go to u + t n and u - t n
};

/// Configuration invariant under reflection through the plane through the
/// origin with normal `plane_normal`.
DipoleConfig gen_mirror_symmetric(const std::vector<MirrorBasePoint>& base_points,
                                  const std::vector<Vec3>& in_plane_points,
                                  const Vec3& plane_normal);

/// Magnets at spacing * (i, j, k) for integers in [-half_extent, half_extent].
DipoleConfig gen_cubic_lattice(double spacing, int half_extent, bool exclude_origin);

}  // namespace magalg
