#pragma once

// Per-field-point pipeline shared by analyze, sweep and verify.

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "magalg/algebra_core.hpp"
#include "magalg/extremal.hpp"

namespace magalg::cli {

struct AnalyzeParams {
    double tol = 1e-9;
    int samples = 20000;
    int refine = 100;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool candidates = true;
};

/// Throws CliError(2) on samples < 100 or tol <= 0.
void validate(const AnalyzeParams& p);

inline const std::string kNonplanar = "NONPLANAR";

struct PointAnalysis {
    Vec3 field_point;
    bool si_prefactor = false;
    Vec3 P_actual;
    MagneticAlgebra alg;
    AlgebraCheck check;
    GramSpectrum gram;
    PlaneSet planes;
    std::optional<std::size_t> selected_plane;
    std::optional<ExtremalReport> report;  ///< planar or degenerate algebras
    BruteForceResult bf;                   ///< always filled
    CandidateSet candidates;
    std::string branch;

    double lambda_bar() const;
    /// Chain upper bound when planar; sqrt(2 lambda_F / 3) otherwise.
    double ub_chain() const;
    /// Branch-refined bound; NaN when there is none.
    double ub_refined() const;
};

/// Among several planes the one with the largest lambda_P (first on ties).
std::optional<std::size_t> select_plane(const MagneticAlgebra& alg, const PlaneSet& planes);

/// Throws SingularFieldPoint / InvalidArgument from the core unchanged.
PointAnalysis analyze_point(const DipoleConfig& cfg, const AnalyzeParams& p);

nlohmann::json to_json(const PointAnalysis& a);

/// Row for the sweep CSV (without trailing newline).
std::string csv_row(const PointAnalysis& a);
std::string csv_singular_row(const Vec3& field_point);

inline const std::string kCsvHeader = "x,y,z,norm_P,abs_lambda_MF,lambda_P,lambda_bar,ub_chain,ub_refined,branch";

}  // namespace magalg::cli
