#include "magalg/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "magalg/errors.hpp"
#include "magalg/sphere.hpp"

namespace magalg {

namespace {

Vec3 canonical_sign(const Vec3& v) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(v[i]) > std::abs(v[k]) + 1e-12) k = i;
    return v[k] < 0.0 ? -v : v;
}

template <class F>
double golden_max(F f, double a, double b, int iterations = 80) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iterations; ++i) {
        if (fc > fd) { b = d; d = c; fd = fc; c = b - g * (b - a); fc = f(c); }
        else { a = c; c = d; fc = fd; d = a + g * (b - a); fd = f(d); }
    }
    return fc > fd ? c : d;
}

// Solves the 4x4 system a x = b in place by partial pivoting; false if singular.
bool solve4(std::array<std::array<double, 5>, 4>& a, std::array<double, 4>& x) {
    for (std::size_t c = 0; c < 4; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < 4; ++r)
            if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
        if (!(std::abs(a[p][c]) > 1e-300)) return false;
        std::swap(a[p], a[c]);
        for (std::size_t r = c + 1; r < 4; ++r) {
            const double f = a[r][c] / a[c][c];
            for (std::size_t k = c; k < 5; ++k) a[r][k] -= f * a[c][k];
        }
    }
    for (std::size_t c = 4; c-- > 0;) {
        double s = a[c][4];
        for (std::size_t k = c + 1; k < 4; ++k) s -= a[c][k] * x[k];
        x[c] = s / a[c][c];
    }
    return true;
}

struct SelfEigen {
    Vec3 m;
    double mu = 0.0;
    double residual = 0.0;
};

// Newton on F_M M = mu M, |M| = 1. Jacobian uses d(F_M M) = 2 F_M dM (reciprocity).
SelfEigen newton_self_eigen(const MagneticAlgebra& alg, Vec3 m, int iterations = 60) {
    const auto residual = [&](const Vec3& v, double mu) { return alg.product(v, v) - mu * v; };
    double mu = dot(m, alg.product(m, m));
    const double stop = 1e-15 * alg.scale();
    for (int it = 0; it < iterations; ++it) {
        const Vec3 r = residual(m, mu);
        if (norm(r) <= stop) break;
        const Mat3 f = alg.apply(m).sym().dense();
        std::array<std::array<double, 5>, 4> a{};
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) a[i][j] = 2.0 * f(i, j) - (i == j ? mu : 0.0);
            a[i][3] = -m[i];
            a[i][4] = -r[i];
            a[3][i] = m[i];
        }
        a[3][4] = -0.5 * (dot(m, m) - 1.0);
        std::array<double, 4> dx{};
        if (!solve4(a, dx)) break;
        m = normalized(m + Vec3{dx[0], dx[1], dx[2]});
        mu = dot(m, alg.product(m, m));
    }
    return {m, mu, norm(residual(m, mu))};
}

}  // namespace

double principal_magnitude(const MagneticAlgebra& alg, const Vec3& m) {
    return std::abs(eig_traceless(alg.apply(m)).lambda);
}

double sampling_tolerance(double scale, int n_samples) {
    return kSamplingConstant * scale / double(std::max(n_samples, 1));
}

BruteForceResult lambda_bar_bruteforce(const MagneticAlgebra& alg, const SamplingOptions& opts) {
    if (opts.n_samples < 100) throw InvalidArgument("n_samples must be at least 100");
    BruteForceResult out;
    const double scale = alg.scale();
    out.tol_sampling = sampling_tolerance(scale, opts.n_samples);
    if (scale == 0.0) {
        out.degenerate = true;
        return out;
    }
    const std::size_t n = std::size_t(opts.n_samples);
    const auto lattice = seeded_sphere_lattice(n, opts.seed);
    std::vector<double> values(n);
    parallel_for(n, opts.threads, [&](std::size_t i) { values[i] = principal_magnitude(alg, lattice[i]); });
    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (values[i] > values[best]) best = i;
    out.best_sample = best;

    const auto f = [&](const Vec3& m) { return principal_magnitude(alg, m); };
    const double spacing = std::sqrt(4.0 * std::numbers::pi / double(n));
    const AscentResult a = sphere_ascent(f, lattice[best], spacing, std::max(opts.refine_steps, 0));
    out.M_bar = canonical_sign(a.point);
    const TracelessSymMat3 fm = alg.apply(out.M_bar);
    out.lambda_bar = std::abs(eig_traceless(fm).lambda);
    out.m_bar = principal_eigenvector(fm);
    return out;
}

double in_plane_magnitude(const MagneticAlgebra& alg, const PlanarStructure& plane, const Vec3& m) {
    const double t = std::abs(dot(plane.P, m));
    const double tr = trace_sq(alg.apply(m).sym());
    return std::max(0.5 * (t + std::sqrt(std::max(0.0, 2.0 * tr - 3.0 * t * t))), t);
}

PlaneMaximum lambda_plane(const MagneticAlgebra& alg, const PlanarStructure& plane, int n_angles) {
    if (n_angles < 360) throw InvalidArgument("n_angles must be at least 360");
    const auto at = [&](double b) { return std::cos(b) * plane.P_hat + std::sin(b) * plane.Q_hat; };
    const auto f = [&](double b) { return in_plane_magnitude(alg, plane, at(b)); };
    const double h = std::numbers::pi / n_angles;

    PlaneMaximum out;
    std::size_t best = 0;
    double best_value = -1.0;
    for (int i = 0; i < n_angles; ++i) {
        const double v = f(h * i);
        if (v > best_value) { best_value = v; best = std::size_t(i); }
    }
    out.beta = h * double(best);
    out.lambda_P = best_value;
    out.degenerate_plane = !plane.has_P_direction && best_value <= 1e-14 * alg.scale();
    if (!out.degenerate_plane) {
        const double b = golden_max(f, out.beta - h, out.beta + h);
        const double v = f(b);
        if (v > out.lambda_P) {
            out.lambda_P = v;
            out.beta = b < 0.0 ? b + std::numbers::pi : b;
        }
    }
    out.M_P = at(out.beta);
    return out;
}

Vec3 plane_aligned_top_moment(const GramSpectrum& gs, const PlanarStructure& plane) {
    // The Gram matrix preserves the plane, so its top eigenspace is either the
    // normal alone or contains an in-plane vector, whose basis projection has
    // length >= 1/sqrt(2).
    const Vec3& n = plane.n_hat;
    Vec3 best;
    double best_len = -1.0;
    for (const Vec3& v : gs.top_eigenspace) {
        const Vec3 w = v - dot(v, n) * n;
        if (norm(w) > best_len) { best_len = norm(w); best = w; }
    }
    return canonical_sign(best_len > 0.5 ? normalized(best) : n);
}

double lambda_MF_closed_form(const MagneticAlgebra& alg, const PlanarStructure& plane) {
    if (alg.is_zero()) return 0.0;
    const GramSpectrum gs = gram_spectrum(alg);
    const Vec3 m = plane_aligned_top_moment(gs, plane);
    const double t = std::abs(dot(plane.P, m));
    return 0.5 * (t + std::sqrt(std::max(0.0, 2.0 * gs.lambda_F - 3.0 * t * t)));
}

std::string to_string(Branch b) {
    switch (b) {
        case Branch::PlaneDominant: return "PLANE_DOMINANT";
        case Branch::PDominant: return "P_DOMINANT";
        case Branch::Degenerate: return "DEGENERATE";
    }
    return "?";
}

ExtremalReport bounds_report(const MagneticAlgebra& alg, const std::optional<PlanarStructure>& plane,
                             const ReportOptions& opts) {
    ExtremalReport r;
    r.scale = alg.scale();
    if (alg.is_zero()) return r;
    if (!plane) throw InvalidArgument("bounds report needs an invariant plane");

    const GramSpectrum gs = gram_spectrum(alg);
    const BruteForceResult bf = lambda_bar_bruteforce(alg, opts.sampling);
    const PlaneMaximum pm = lambda_plane(alg, *plane, opts.n_angles);

    r.lambda_bar_bf = bf.lambda_bar;
    r.M_bar = bf.M_bar;
    r.m_bar = bf.m_bar;
    r.tol_sampling = bf.tol_sampling;
    r.norm_P = plane->norm_P;
    r.lambda_F = gs.lambda_F;
    r.M_F = plane_aligned_top_moment(gs, *plane);
    r.abs_lambda_MF = lambda_MF_closed_form(alg, *plane);
    r.lambda_P = pm.lambda_P;
    r.M_P = canonical_sign(pm.M_P);

    const double p = r.norm_P, lp = r.lambda_P;
    r.branch = lp >= 2.0 * p - opts.branch_band * r.scale ? Branch::PlaneDominant : Branch::PDominant;

    BoundValues& b = r.bounds;
    b.chain_upper = r.abs_lambda_MF + 0.5 * p;
    b.pdom_mf = r.abs_lambda_MF + p / 3.0;
    b.pdom_p = 3.0 * p > lp ? 2.0 * p * std::sqrt(p / (3.0 * p - lp)) : std::numeric_limits<double>::infinity();
    b.pdom = std::min(b.pdom_mf, b.pdom_p);
    b.plane_upper = 0.5 * (p + std::sqrt(std::max(0.0, 2.0 * r.lambda_F - 3.0 * p * p)));
    b.plane_outer = std::sqrt(2.0 * r.lambda_F / 3.0);
    const bool plane_dominant = r.branch == Branch::PlaneDominant;
    b.refined = plane_dominant ? b.plane_upper : b.pdom;

    r.lambda_bar = plane_dominant ? lp : r.lambda_bar_bf;
    r.lambda_bar_upper = plane_dominant ? lp : std::min(b.chain_upper, b.pdom);

    const double tol = opts.tol * r.scale;
    ChainFlags& c = r.chain;
    c.norm_P_le_lambda_MF = p <= r.abs_lambda_MF + tol;
    c.lambda_MF_le_lambda_P = r.abs_lambda_MF <= lp + tol;
    c.lambda_P_le_lambda_bar = lp <= r.lambda_bar_bf + r.tol_sampling + tol;
    c.lambda_bar_le_chain = r.lambda_bar_bf <= b.chain_upper + tol;
    c.basic = r.lambda_bar_bf <= b.plane_outer + tol;
    if (plane_dominant)
        c.refined = std::abs(r.lambda_bar_bf - lp) <= r.tol_sampling + tol && lp <= b.plane_upper + tol &&
                    b.plane_upper <= b.plane_outer + tol;
    else
        c.refined = r.lambda_bar_bf <= b.pdom + tol;
    return r;
}

std::string to_string(CandidateKind k) {
    switch (k) {
        case CandidateKind::GramTop: return "GRAM_TOP";
        case CandidateKind::InPlaneMax: return "IN_PLANE_MAX";
        case CandidateKind::EigenSelf: return "EIGEN_SELF";
        case CandidateKind::DetZero: return "DETZERO";
    }
    return "?";
}

const Candidate* CandidateSet::best() const {
    const Candidate* b = nullptr;
    for (const Candidate& c : items)
        if (!b || c.lambda_abs > b->lambda_abs) b = &c;
    return b;
}

CandidateSet locate_candidates(const MagneticAlgebra& alg, const std::optional<PlanarStructure>& plane,
                               const CandidateOptions& opts) {
    CandidateSet out;
    if (alg.is_zero()) return out;
    const double scale = alg.scale();
    const std::optional<Decomposition> dec =
        plane ? std::optional<Decomposition>(decompose(alg, *plane, 0.0)) : std::nullopt;

    const auto make = [&](const Vec3& v, CandidateKind kind) {
        Candidate c;
        c.moment = canonical_sign(normalized(v));
        c.kind = kind;
        const TracelessSymMat3 f = alg.apply(c.moment);
        c.lambda_abs = std::abs(eig_traceless(f).lambda);
        const Vec3 fm = f * c.moment;
        c.mu = dot(c.moment, fm);
        c.eigen_residual = norm(fm - c.mu * c.moment);
        c.det = determinant(f.sym());
        if (dec) {
            const Vec3 lhs = (c.mu - 2.0 * dot(c.moment, plane->P)) * c.moment;
            c.location_residual = norm(lhs - plane->P + dec->Pcal(c.moment) * c.moment);
        }
        return c;
    };
    const auto parallel_to_any = [&](const Vec3& v, auto pred) {
        return std::any_of(out.items.begin(), out.items.end(), [&](const Candidate& c) {
            return pred(c) && std::abs(dot(c.moment, v)) > 1.0 - 1e-8;
        });
    };

    const GramSpectrum gs = gram_spectrum(alg);
    const auto is_gram = [](const Candidate& c) { return c.kind == CandidateKind::GramTop; };
    if (plane) out.items.push_back(make(plane_aligned_top_moment(gs, *plane), CandidateKind::GramTop));
    for (const Vec3& v : gs.top_eigenspace)
        if (!parallel_to_any(v, is_gram)) out.items.push_back(make(v, CandidateKind::GramTop));

    if (plane) out.items.push_back(make(lambda_plane(alg, *plane, opts.n_angles).M_P, CandidateKind::InPlaneMax));

    const std::size_t first_self = out.items.size();
    const auto is_self = [](const Candidate& c) {
        return c.kind == CandidateKind::EigenSelf || c.kind == CandidateKind::DetZero;
    };
    for (const Vec3& start : seeded_sphere_lattice(std::size_t(std::max(opts.starts, 0)), opts.seed)) {
        const SelfEigen s = newton_self_eigen(alg, start);
        if (!(s.residual <= 1e-10 * scale)) continue;
        if (parallel_to_any(s.m, is_self)) continue;
        Candidate c = make(s.m, CandidateKind::EigenSelf);
        if (std::abs(c.det) <= opts.det_tol * scale * scale * scale) c.kind = CandidateKind::DetZero;
        out.items.push_back(c);
    }
    std::stable_sort(out.items.begin() + std::ptrdiff_t(first_self), out.items.end(),
                     [](const Candidate& a, const Candidate& b) { return a.lambda_abs > b.lambda_abs; });
    return out;
}

}  // namespace magalg
