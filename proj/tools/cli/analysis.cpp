#include "analysis.hpp"

#include <cmath>
#include <limits>

#include "config_io.hpp"
#include "magalg/errors.hpp"

namespace magalg::cli {

using nlohmann::json;

void validate(const AnalyzeParams& p) {
    if (p.samples < 100) throw CliError(kExitInput, "--samples must be at least 100");
    if (!(p.tol > 0.0)) throw CliError(kExitInput, "--tol must be positive");
    if (p.refine < 0) throw CliError(kExitInput, "--refine must be non-negative");
}

double PointAnalysis::lambda_bar() const { return report ? report->lambda_bar : bf.lambda_bar; }

double PointAnalysis::ub_chain() const {
    if (report) return report->bounds.chain_upper;
    return std::sqrt(2.0 * gram.lambda_F / 3.0);
}

double PointAnalysis::ub_refined() const {
    if (report) return report->bounds.refined;
    return std::numeric_limits<double>::quiet_NaN();
}

std::optional<std::size_t> select_plane(const MagneticAlgebra& alg, const PlaneSet& planes) {
    std::optional<std::size_t> best;
    double best_value = -1.0;
    for (std::size_t i = 0; i < planes.planes.size(); ++i) {
        const double v = lambda_plane(alg, planes.planes[i]).lambda_P;
        if (v > best_value) { best_value = v; best = i; }
    }
    return best;
}

PointAnalysis analyze_point(const DipoleConfig& cfg, const AnalyzeParams& p) {
    magalg::validate(cfg);
    PointAnalysis a;
    a.field_point = cfg.field_point;
    a.si_prefactor = cfg.si_prefactor;
    a.P_actual = p_vector(cfg);
    a.alg = build_algebra(cfg);
    a.check = check_algebra(a.alg);
    a.gram = gram_spectrum(a.alg);

    ReportOptions ro;
    ro.sampling = SamplingOptions{p.samples, p.refine, p.seed, p.threads};
    ro.tol = p.tol;

    std::optional<PlanarStructure> plane;
    if (a.alg.is_zero()) {
        a.report = bounds_report(a.alg, std::nullopt, ro);
    } else {
        a.planes = find_invariant_planes(a.alg);
        a.selected_plane = select_plane(a.alg, a.planes);
        if (a.selected_plane) {
            plane = a.planes.planes[*a.selected_plane];
            a.report = bounds_report(a.alg, plane, ro);
        }
    }
    if (a.report && !a.alg.is_zero()) {
        a.bf.lambda_bar = a.report->lambda_bar_bf;
        a.bf.M_bar = a.report->M_bar;
        a.bf.m_bar = a.report->m_bar;
        a.bf.tol_sampling = a.report->tol_sampling;
    } else {
        a.bf = lambda_bar_bruteforce(a.alg, ro.sampling);
    }
    a.branch = a.report ? to_string(a.report->branch) : kNonplanar;
    if (p.candidates) {
        CandidateOptions co;
        co.seed = p.seed;
        a.candidates = locate_candidates(a.alg, plane, co);
    }
    return a;
}

namespace {

json sym_json(const SymMat3& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < 3; ++i) rows.push_back(json::array({m(i, 0), m(i, 1), m(i, 2)}));
    return rows;
}

json plane_json(const PlanarStructure& ps) {
    return {{"n_hat", to_json(ps.n_hat)},   {"P", to_json(ps.P)},
            {"norm_P", ps.norm_P},          {"P_hat", to_json(ps.P_hat)},
            {"Q_hat", to_json(ps.Q_hat)},   {"has_P_direction", ps.has_P_direction},
            {"residual", ps.residual}};
}

}  // namespace

json to_json(const PointAnalysis& a) {
    json j;
    j["field_point"] = to_json(a.field_point);
    j["P"] = to_json(a.P_actual);
    j["scale"] = a.alg.scale();
    j["algebra_check"] = {{"reciprocity_residual", a.check.reciprocity_residual},
                          {"trace_residual", a.check.trace_residual},
                          {"trivial", a.check.trivial}};

    json eigenspace = json::array();
    for (const Vec3& v : a.gram.top_eigenspace) eigenspace.push_back(to_json(v));
    j["gram"] = {{"matrix", sym_json(a.gram.gram)},
                 {"eigenvalues", a.gram.eigen.values},
                 {"lambda_F", a.gram.lambda_F},
                 {"M_F", to_json(a.gram.M_F)},
                 {"top_multiplicity", a.gram.top_multiplicity},
                 {"top_eigenspace", eigenspace}};

    json planes = json::array();
    for (const PlanarStructure& ps : a.planes.planes) planes.push_back(plane_json(ps));
    j["planes"] = {{"degenerate_family", a.planes.degenerate_family},
                   {"items", planes},
                   {"selected", a.selected_plane ? json(*a.selected_plane) : json(nullptr)}};

    j["branch"] = a.branch;
    j["lambda_bar"] = {{"value", a.lambda_bar()},
                       {"bruteforce", a.bf.lambda_bar},
                       {"upper", a.report ? a.report->lambda_bar_upper : a.ub_chain()},
                       {"tol_sampling", a.bf.tol_sampling},
                       {"M_bar", to_json(a.bf.M_bar)},
                       {"m_bar", to_json(a.bf.m_bar)}};

    if (a.report) {
        const ExtremalReport& r = *a.report;
        j["norm_P"] = r.norm_P;
        j["abs_lambda_MF"] = r.abs_lambda_MF;
        j["M_F"] = to_json(r.M_F);
        j["lambda_P"] = r.lambda_P;
        j["M_P"] = to_json(r.M_P);
        const BoundValues& b = r.bounds;
        j["bounds"] = {{"chain_upper", b.chain_upper}, {"p_dominant_mf", b.pdom_mf},
                       {"p_dominant_p", b.pdom_p},     {"p_dominant", b.pdom},
                       {"plane_upper", b.plane_upper}, {"plane_outer", b.plane_outer},
                       {"refined", b.refined}};
        const ChainFlags& c = r.chain;
        j["chain_ok"] = {{"norm_P_le_lambda_MF", c.norm_P_le_lambda_MF},
                         {"lambda_MF_le_lambda_P", c.lambda_MF_le_lambda_P},
                         {"lambda_P_le_lambda_bar", c.lambda_P_le_lambda_bar},
                         {"lambda_bar_le_chain", c.lambda_bar_le_chain},
                         {"refined", c.refined},
                         {"basic", c.basic},
                         {"all", c.all()}};
    } else {
        j["norm_P"] = nullptr;
        j["abs_lambda_MF"] = principal_magnitude(a.alg, a.gram.M_F);
        j["M_F"] = to_json(a.gram.M_F);
        j["lambda_P"] = nullptr;
        j["bounds"] = {{"basic_upper", a.ub_chain()}};
        j["chain_ok"] = {{"basic", a.bf.lambda_bar <= a.ub_chain() + 1e-9 * a.alg.scale()}};
    }

    json cands = json::array();
    for (const Candidate& c : a.candidates.items)
        cands.push_back({{"moment", to_json(c.moment)},
                         {"kind", to_string(c.kind)},
                         {"lambda_abs", c.lambda_abs},
                         {"mu", c.mu},
                         {"eigen_residual", c.eigen_residual},
                         {"det", c.det}});
    j["candidates"] = cands;

    if (a.si_prefactor) {
        const double k = 3.0 * kMu0Over4Pi;
        j["si"] = {{"prefactor", k}, {"max_force_unit_moments", k * a.lambda_bar()}};
    }
    return j;
}

namespace {

std::string cell(double v) { return std::isnan(v) ? std::string() : format_number(v); }

}  // namespace

std::string csv_row(const PointAnalysis& a) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const bool planar = a.report.has_value();
    const double abs_mf = planar ? a.report->abs_lambda_MF : principal_magnitude(a.alg, a.gram.M_F);
    std::string row;
    for (double v : {a.field_point.x, a.field_point.y, a.field_point.z, planar ? a.report->norm_P : nan, abs_mf,
                     planar ? a.report->lambda_P : nan, a.lambda_bar(), a.ub_chain(), a.ub_refined()}) {
        row += cell(v);
        row += ',';
    }
    return row + a.branch;
}

std::string csv_singular_row(const Vec3& p) {
    return format_number(p.x) + ',' + format_number(p.y) + ',' + format_number(p.z) + ",,,,,,,singular";
}

}  // namespace magalg::cli
