#pragma once

// Worst-case force magnitude lambda_bar = max_{|M|=1} |lambda_M|: a sampled
// lower bound, the in-plane maximum lambda_P, closed forms and the bound chain
// available when the algebra has an invariant plane.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "magalg/algebra_core.hpp"
#include "magalg/dipole_field.hpp"

namespace magalg {

/// |principal eigenvalue of F_M|
double principal_magnitude(const MagneticAlgebra& alg, const Vec3& m);

struct SamplingOptions {
    int n_samples = 20000;
    int refine_steps = 100;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

/// Single dipole, unrefined lattice, ten seeds: max error * n / scale ~ 1.04.
/// About a factor 5 of margin on top.
inline constexpr double kSamplingConstant = 5.0;

/// kSamplingConstant * scale / n_samples
double sampling_tolerance(double scale, int n_samples);

struct BruteForceResult {
    double lambda_bar = 0.0;   ///< lower bound on the true maximum
    Vec3 M_bar{0.0, 0.0, 1.0};
    Vec3 m_bar{0.0, 0.0, 1.0};
    double tol_sampling = 0.0;
    std::size_t best_sample = 0;
    bool degenerate = false;   ///< F == 0
};

/// Lattice scan (lowest index wins ties) followed by local ascent.
/// Throws InvalidArgument when n_samples < 100.
BruteForceResult lambda_bar_bruteforce(const MagneticAlgebra& alg, const SamplingOptions& opts = {});

/// max{(|P.M| + sqrt(2 tr F_M^2 - 3 |P.M|^2)) / 2, |P.M|}; M must lie in the plane.
double in_plane_magnitude(const MagneticAlgebra& alg, const PlanarStructure& plane, const Vec3& m);

struct PlaneMaximum {
    double lambda_P = 0.0;
    Vec3 M_P;
    double beta = 0.0;          ///< M_P = cos(beta) P_hat + sin(beta) Q_hat
    bool degenerate_plane = false;
};

/// Maximum of the in-plane closed form over beta in [0, pi): grid, then
/// golden-section on the best bracket. n_angles >= 360.
PlaneMaximum lambda_plane(const MagneticAlgebra& alg, const PlanarStructure& plane, int n_angles = 720);

/// Top Gram eigenvector chosen from {+-n} or the plane (always possible since
/// n is a Gram eigenvector). Sign: largest component positive.
Vec3 plane_aligned_top_moment(const GramSpectrum& gs, const PlanarStructure& plane);

/// (|P.M_F| + sqrt(2 lambda_F - 3 |P.M_F|^2)) / 2
double lambda_MF_closed_form(const MagneticAlgebra& alg, const PlanarStructure& plane);

enum class Branch { PlaneDominant, PDominant, Degenerate };
std::string to_string(Branch b);

struct ReportOptions {
    SamplingOptions sampling;
    double tol = 1e-9;          ///< chain tolerance, relative to scale
    double branch_band = 1e-9;  ///< relative to scale; the boundary counts as PLANE_DOMINANT
    int n_angles = 720;
};

struct BoundValues {
    double chain_upper = 0.0;  ///< |lambda_MF| + |P|/2
    double pdom_mf = 0.0;     ///< |lambda_MF| + |P|/3
    double pdom_p = 0.0;      ///< 2|P| sqrt(|P| / (3|P| - lambda_P)); +inf if 3|P| <= lambda_P
    double pdom = 0.0;        ///< min of the two
    double plane_upper = 0.0;        ///< (|P| + sqrt(2 lambda_F - 3|P|^2)) / 2
    double plane_outer = 0.0;  ///< sqrt(2 lambda_F / 3)
    double refined = 0.0;    ///< plane_upper or pdom depending on the branch
};

struct ChainFlags {
    bool norm_P_le_lambda_MF = true;
    bool lambda_MF_le_lambda_P = true;
    bool lambda_P_le_lambda_bar = true;
    bool lambda_bar_le_chain = true;
    bool refined = true;
    bool basic = true;  ///< lambda_bar_bf^2 <= 2/3 lambda_F
    bool all() const {
        return norm_P_le_lambda_MF && lambda_MF_le_lambda_P && lambda_P_le_lambda_bar && lambda_bar_le_chain &&
               refined && basic;
    }
};

struct ExtremalReport {
    Branch branch = Branch::Degenerate;
    double lambda_bar = 0.0;     ///< lambda_P in PLANE_DOMINANT, else the sampled value
    double lambda_bar_bf = 0.0;
    double lambda_bar_upper = 0.0;
    Vec3 M_bar{0.0, 0.0, 1.0};
    Vec3 m_bar{0.0, 0.0, 1.0};
    double tol_sampling = 0.0;
    double scale = 0.0;
    double norm_P = 0.0;
    double abs_lambda_MF = 0.0;
    double lambda_P = 0.0;
    double lambda_F = 0.0;
    Vec3 M_F{0.0, 0.0, 1.0};
    Vec3 M_P{0.0, 0.0, 1.0};
    BoundValues bounds;
    ChainFlags chain;
};

/// Full chain for a planar algebra. A zero algebra gives a DEGENERATE report of
/// zeros; otherwise a missing plane throws InvalidArgument.
ExtremalReport bounds_report(const MagneticAlgebra& alg, const std::optional<PlanarStructure>& plane,
                             const ReportOptions& opts = {});

enum class CandidateKind { GramTop, InPlaneMax, EigenSelf, DetZero };
std::string to_string(CandidateKind k);

struct Candidate {
    Vec3 moment;
    CandidateKind kind = CandidateKind::EigenSelf;
    double lambda_abs = 0.0;       ///< |principal eigenvalue of F_moment|
    double mu = 0.0;               ///< F_M M = mu M for self-eigen solutions
    double eigen_residual = 0.0;   ///< |F_M M - mu M|
    double det = 0.0;
    /// |(mu - 2 M.P) M - P + Pcal0_M M|, planar algebras only
    double location_residual = 0.0;
};

struct CandidateOptions {
    int starts = 50;
    std::uint64_t seed = 0;
    double det_tol = 1e-9;  ///< relative to scale^3
    int n_angles = 720;
};

struct CandidateSet {
    std::vector<Candidate> items;
    /// Candidate with the largest lambda_abs (first on ties); nullptr when empty.
    const Candidate* best() const;
};

CandidateSet locate_candidates(const MagneticAlgebra& alg, const std::optional<PlanarStructure>& plane,
                               const CandidateOptions& opts = {});

struct TheoremCheck {
    std::string name;
    bool applicable = true;
    bool passed = true;
    double worst = 0.0;      ///< largest observed lhs - rhs (before tolerance)
    double tolerance = 0.0;
};

struct TheoremReport {
    std::vector<TheoremCheck> checks;
    bool all_passed() const;
};

/// basic_ineq, r_ordering, lower_chain (needs a plane), subadditivity (against
/// a random algebra drawn from `seed`). `trials` random moments feed r_ordering.
TheoremReport verify_theorems(const MagneticAlgebra& alg, const std::optional<PlanarStructure>& plane,
                              int trials, std::uint64_t seed, const SamplingOptions& sampling = {});

}  // namespace magalg
