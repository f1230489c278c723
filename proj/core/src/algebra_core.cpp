#include "magalg/algebra_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "magalg/errors.hpp"
#include "magalg/sphere.hpp"

namespace magalg {

AlgebraCheck check_algebra(const MagneticAlgebra& alg) {
    AlgebraCheck out;
    for (std::size_t i = 0; i < 3; ++i) {
        const SymMat3& fi = alg.basis_image(i).sym();
        out.trace_residual = std::max(out.trace_residual, std::abs(fi.trace()));
        if (fi.max_abs_entry() != 0.0) out.trivial = false;
        for (std::size_t j = i + 1; j < 3; ++j) {
            const Vec3 d = fi * Vec3::unit(j) - alg.basis_image(j).sym() * Vec3::unit(i);
            out.reciprocity_residual = std::max(out.reciprocity_residual, max_abs(d));
        }
    }
    return out;
}

GramSpectrum gram_spectrum(const MagneticAlgebra& alg) {
    GramSpectrum out;
    const auto& b = alg.basis_images();
    const auto g = [&](std::size_t i, std::size_t j) { return trace_product(b[i].sym(), b[j].sym()); };
    out.gram = SymMat3{g(0, 0), g(1, 1), g(2, 2), g(0, 1), g(0, 2), g(1, 2)};
    out.eigen = jacobi_eigen(out.gram);
    for (double& v : out.eigen.values) v = std::max(v, 0.0);  // PSD up to rounding
    out.lambda_F = out.eigen.values[0];
    out.M_F = out.eigen.vectors[0];

    const double tol = kGramClusterTolerance * std::max(out.lambda_F, 1e-300);
    out.top_multiplicity = 1;
    out.top_eigenspace = {out.eigen.vectors[0]};
    for (std::size_t k = 1; k < 3; ++k) {
        if (out.lambda_F - out.eigen.values[k] <= tol) {
            ++out.top_multiplicity;
            out.top_eigenspace.push_back(out.eigen.vectors[k]);
        }
    }
    return out;
}

double planarity_residual(const MagneticAlgebra& alg, const Vec3& n_hat) {
    const Mat3 c = cross_matrix(n_hat);
    return frobenius_norm(c * alg.apply(n_hat).sym().dense() * c);
}

namespace {

// Canonical orientation of a normal: largest-magnitude component positive.
Vec3 canonical_normal(Vec3 n) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(n[i]) > std::abs(n[k]) + 1e-12) k = i;
    return n[k] < 0.0 ? -n : n;
}

// Nine entries of [n] F_n [n], used as a residual vector.
std::array<double, 9> residual_vector(const MagneticAlgebra& alg, const Vec3& n) {
    const Mat3 c = cross_matrix(n);
    return (c * alg.apply(n).sym().dense() * c).a;
}

// Levenberg-Marquardt on the residual vector in tangent coordinates of S^2.
Vec3 refine_normal(const MagneticAlgebra& alg, Vec3 n, int max_iterations = 60) {
    n = normalized(n);
    double mu = 1e-3;
    auto r = residual_vector(alg, n);
    const auto sq = [](const std::array<double, 9>& v) {
        double s = 0.0;
        for (double x : v) s += x * x;
        return s;
    };
    double cost = sq(r);
    constexpr double h = 1e-7;
    for (int it = 0; it < max_iterations && cost > 0.0; ++it) {
        const auto [t1, t2] = tangent_basis(n);
        const auto r1p = residual_vector(alg, normalized(n + h * t1));
        const auto r1m = residual_vector(alg, normalized(n - h * t1));
        const auto r2p = residual_vector(alg, normalized(n + h * t2));
        const auto r2m = residual_vector(alg, normalized(n - h * t2));
        double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
        for (std::size_t k = 0; k < 9; ++k) {
            const double j1 = (r1p[k] - r1m[k]) / (2 * h), j2 = (r2p[k] - r2m[k]) / (2 * h);
            a11 += j1 * j1; a12 += j1 * j2; a22 += j2 * j2;
            b1 -= j1 * r[k]; b2 -= j2 * r[k];
        }
        bool improved = false;
        for (int tries = 0; tries < 20; ++tries) {
            const double d11 = a11 * (1 + mu), d22 = a22 * (1 + mu);
            const double det = d11 * d22 - a12 * a12;
            if (!(std::abs(det) > 0.0)) { mu *= 10; continue; }
            const double x1 = (b1 * d22 - b2 * a12) / det, x2 = (d11 * b2 - a12 * b1) / det;
            const Vec3 cand = normalized(n + x1 * t1 + x2 * t2);
            const auto rc = residual_vector(alg, cand);
            const double cc = sq(rc);
            if (cc < cost) {
                n = cand; r = rc; cost = cc;
                mu = std::max(mu * 0.3, 1e-12);
                improved = true;
                break;
            }
            mu *= 10;
        }
        if (!improved) break;
    }
    return n;
}

// Golden-section minimum of f on [a, b].
template <class F>
double golden_min(F f, double a, double b, int iterations = 80) {
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < iterations; ++i) {
        if (fc < fd) { b = d; d = c; fd = fc; c = b - g * (b - a); fc = f(c); }
        else { a = c; c = d; fc = fd; d = a + g * (b - a); fd = f(d); }
    }
    return fc < fd ? c : d;
}

bool already_have(const std::vector<PlanarStructure>& planes, const Vec3& n) {
    return std::any_of(planes.begin(), planes.end(),
                       [&](const PlanarStructure& p) { return std::abs(dot(p.n_hat, n)) > 1.0 - 1e-9; });
}

void try_add(const MagneticAlgebra& alg, const Vec3& n, double rel_tol, std::vector<PlanarStructure>& out) {
    const Vec3 cn = canonical_normal(normalized(n));
    if (already_have(out, cn)) return;
    if (planarity_residual(alg, cn) > rel_tol * alg.scale()) return;
    out.push_back(planar_structure(alg, cn, rel_tol));
}

// Scan the circle cos(b) u + sin(b) v, b in [0, pi). Returns true when every grid
// point passes (continuous family).
bool scan_circle(const MagneticAlgebra& alg, const Vec3& u, const Vec3& v, const PlaneSearchOptions& opts,
                 std::vector<PlanarStructure>& out) {
    const int n = std::max(opts.angle_grid, 8);
    const double tol = opts.rel_tol * alg.scale();
    const auto at = [&](double b) { return std::cos(b) * u + std::sin(b) * v; };
    const auto res = [&](double b) { return planarity_residual(alg, at(b)); };

    std::vector<double> grid(static_cast<std::size_t>(n));
    int passing = 0;
    for (int i = 0; i < n; ++i) {
        grid[std::size_t(i)] = res(std::numbers::pi * i / n);
        if (grid[std::size_t(i)] <= tol) ++passing;
    }
    if (passing == n) {
        const int k = std::max(opts.family_samples, 1);
        for (int i = 0; i < k; ++i) try_add(alg, at(std::numbers::pi * i / k), opts.rel_tol, out);
        return true;
    }
    const double h = std::numbers::pi / n;
    for (int i = 0; i < n; ++i) {
        const double prev = grid[std::size_t((i + n - 1) % n)], next = grid[std::size_t((i + 1) % n)];
        const double here = grid[std::size_t(i)];
        if (here <= prev && here <= next) {
            const double b = golden_min(res, (i - 1) * h, (i + 1) * h);
            try_add(alg, refine_normal(alg, at(b)), opts.rel_tol, out);
        }
    }
    return false;
}

// Sphere-wide search: best lattice points (angularly separated) refined by LM.
bool scan_sphere(const MagneticAlgebra& alg, int points, const PlaneSearchOptions& opts,
                 std::vector<PlanarStructure>& out) {
    const double tol = opts.rel_tol * alg.scale();
    const auto lattice = fibonacci_sphere(std::size_t(std::max(points, 100)));
    std::vector<std::pair<double, std::size_t>> ranked;
    ranked.reserve(lattice.size());
    int passing = 0;
    for (std::size_t i = 0; i < lattice.size(); ++i) {
        const double r = planarity_residual(alg, lattice[i]);
        if (r <= tol) ++passing;
        ranked.emplace_back(r, i);
    }
    if (passing == int(lattice.size())) {
        // Every direction works; report a deterministic handful.
        const auto reps = fibonacci_sphere(std::size_t(std::max(opts.family_samples, 1)) * 2);
        for (const Vec3& p : reps) try_add(alg, p, opts.rel_tol, out);
        return true;
    }
    std::stable_sort(ranked.begin(), ranked.end());
    std::vector<Vec3> seeds;
    for (const auto& [r, i] : ranked) {
        const Vec3& p = lattice[i];
        const bool separated = std::all_of(seeds.begin(), seeds.end(),
                                           [&](const Vec3& s) { return std::abs(dot(s, p)) < std::cos(0.15); });
        if (separated) seeds.push_back(p);
        if (seeds.size() >= 24) break;
    }
    for (const Vec3& s : seeds) try_add(alg, refine_normal(alg, s), opts.rel_tol, out);
    return false;
}

}  // namespace

PlanarStructure planar_structure(const MagneticAlgebra& alg, const Vec3& n_hat, double rel_tol) {
    PlanarStructure ps;
    ps.n_hat = normalized(n_hat);
    ps.residual = planarity_residual(alg, ps.n_hat);
    const double scale = alg.scale();
    if (ps.residual > rel_tol * scale) throw NotInvariantPlane(ps.residual);

    const SymMat3 fn = alg.apply(ps.n_hat).sym();
    ps.P = fn * ps.n_hat;
    ps.norm_P = norm(ps.P);
    const Vec3 in_plane = ps.P - dot(ps.P, ps.n_hat) * ps.n_hat;
    ps.has_P_direction = norm(in_plane) > 1e-14 * std::max(scale, 1e-300);
    ps.P_hat = ps.has_P_direction ? normalized(in_plane) : any_orthogonal(ps.n_hat);
    ps.Q_hat = cross(ps.n_hat, ps.P_hat);

    for (const Vec3& m : {ps.P_hat, ps.Q_hat}) {
        const Vec3 d = alg.product(m, ps.n_hat) - dot(ps.P, m) * ps.n_hat;
        ps.inplane_residual = std::max(ps.inplane_residual, norm(d));
    }
    return ps;
}

PlaneSet find_invariant_planes(const MagneticAlgebra& alg, const PlaneSearchOptions& opts) {
    if (alg.is_zero()) throw TrivialAlgebra();
    const GramSpectrum gs = gram_spectrum(alg);
    const double cluster = kGramClusterTolerance * std::max(gs.lambda_F, 1e-300);

    PlaneSet out;
    std::size_t k = 0;
    while (k < 3) {
        std::size_t end = k + 1;
        while (end < 3 && gs.eigen.values[k] - gs.eigen.values[end] <= cluster) ++end;
        const std::size_t dim = end - k;
        if (dim == 1) {
            Vec3 v = gs.eigen.vectors[k];
            // Close eigenvalues leave eigenvector error of order eps / gap.
            if (planarity_residual(alg, v) > opts.rel_tol * alg.scale()) v = refine_normal(alg, v);
            try_add(alg, v, opts.rel_tol, out.planes);
        } else if (dim == 2) {
            out.degenerate_family |= scan_circle(alg, gs.eigen.vectors[k], gs.eigen.vectors[k + 1], opts, out.planes);
        } else {
            out.degenerate_family |= scan_sphere(alg, std::max(opts.global_points, 2000), opts, out.planes);
        }
        k = end;
    }
    if (opts.global_scan) scan_sphere(alg, opts.global_points, opts, out.planes);
    return out;
}

SymMat3 Decomposition::E(const Vec3& m) const {
    const Vec3& p = plane_.P;
    return SymMat3::sym_outer(p, m) + dot(m, p) * SymMat3::identity() - gamma_ * SymMat3::outer(p);
}

SymMat3 Decomposition::Pcal(const Vec3& m) const { return E(m) - alg_.apply(m).sym(); }

double Decomposition::image_residual(const Vec3& m) const {
    const SymMat3 p = Pcal(m);
    double worst = 0.0;
    for (std::size_t k = 0; k < 3; ++k) worst = std::max(worst, std::abs(dot(plane_.n_hat, p * Vec3::unit(k))));
    return worst;
}

}  // namespace magalg
