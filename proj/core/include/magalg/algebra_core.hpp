#pragma once

// Structure analysis of an abstract magnetic algebra: the Gram matrix F^T F,
// invariant planes, their (n, P, P_hat, Q_hat) frames, and the one-parameter
// family of P-decompositions F = E^gamma - Pcal^gamma.

#include <vector>

#include "magalg/dipole_field.hpp"
#include "magalg/linalg3.hpp"

namespace magalg {

struct AlgebraCheck {
    double reciprocity_residual = 0.0;  ///< max_ij |F_{e_i} e_j - F_{e_j} e_i|
    double trace_residual = 0.0;        ///< max_i |tr F_{e_i}|
    bool trivial = true;                ///< every basis image is zero
};

AlgebraCheck check_algebra(const MagneticAlgebra& alg);

struct GramSpectrum {
    SymMat3 gram;                   ///< entries tr(F_{e_i} F_{e_j})
    SymEigen eigen;                 ///< descending eigenvalues with orthonormal vectors
    double lambda_F = 0.0;          ///< largest eigenvalue
    Vec3 M_F{0.0, 0.0, 1.0};        ///< unit top eigenvector
    int top_multiplicity = 1;       ///< dimension of the top eigenspace
    std::vector<Vec3> top_eigenspace;
};

/// Eigenvalues closer than this (relative to the largest) are treated as one.
inline constexpr double kGramClusterTolerance = 1e-8;

GramSpectrum gram_spectrum(const MagneticAlgebra& alg);

/// || [n] F_n [n] ||_F; zero exactly when n is the normal of an invariant plane.
double planarity_residual(const MagneticAlgebra& alg, const Vec3& n_hat);

/// Default planarity tolerance, relative to alg.scale().
inline constexpr double kDefaultPlaneTolerance = 1e-8;

struct PlanarStructure {
    Vec3 n_hat;              ///< unit normal
    Vec3 P;                  ///< F_n n
    double norm_P = 0.0;
    Vec3 P_hat;              ///< P / |P| when has_P_direction, otherwise an arbitrary in-plane unit vector
    Vec3 Q_hat;              ///< n x P_hat
    bool has_P_direction = false;
    double residual = 0.0;   ///< || [n] F_n [n] ||_F
    double inplane_residual = 0.0;  ///< max over in-plane basis M of |F_M n - (P.M) n|
};

/// Frame of the plane with normal `n_hat` (normalised internally). Throws
/// NotInvariantPlane when the residual exceeds rel_tol * alg.scale().
PlanarStructure planar_structure(const MagneticAlgebra& alg, const Vec3& n_hat,
                                 double rel_tol = kDefaultPlaneTolerance);

struct PlaneSearchOptions {
    double rel_tol = kDefaultPlaneTolerance;
    int angle_grid = 720;       ///< samples per degenerate 2D eigenspace
    int family_samples = 12;    ///< representatives returned for a continuous family
    bool global_scan = false;   ///< also run a Fibonacci-lattice scan of S^2
    int global_points = 10000;
};

struct PlaneSet {
    std::vector<PlanarStructure> planes;
    /// Set when a gram eigenspace of dimension >= 2 consists entirely of
    /// invariant-plane normals; `planes` then holds sampled representatives.
    bool degenerate_family = false;
};

/// Invariant planes of a nontrivial algebra. Candidates are gram eigenvectors;
/// degenerate eigenspaces are scanned. Throws TrivialAlgebra for F == 0.
PlaneSet find_invariant_planes(const MagneticAlgebra& alg, const PlaneSearchOptions& opts = {});

/// F = E^gamma - Pcal^gamma with
///   E^gamma_M = P M^T + M P^T + (M . P) I - gamma P P^T.
class Decomposition {
public:
    Decomposition(const MagneticAlgebra& alg, const PlanarStructure& plane, double gamma)
        : alg_(alg), plane_(plane), gamma_(gamma) {}

    double gamma() const { return gamma_; }
    const PlanarStructure& plane() const { return plane_; }

    SymMat3 E(const Vec3& m) const;
    /// E^gamma_M - F_M; maps R^3 into the invariant plane.
    SymMat3 Pcal(const Vec3& m) const;
    /// max_k |n . (Pcal_M e_k)|
    double image_residual(const Vec3& m) const;

private:
    MagneticAlgebra alg_;
    PlanarStructure plane_;
    double gamma_;
};

inline Decomposition decompose(const MagneticAlgebra& alg, const PlanarStructure& plane,
                               double gamma = 0.0) {
    return Decomposition(alg, plane, gamma);
}

}  // namespace magalg
