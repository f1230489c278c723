#include "magalg/linalg3.hpp"

#include <algorithm>
#include <numbers>
#include <utility>

#include "magalg/errors.hpp"

namespace magalg {

Vec3 normalized(const Vec3& a) {
    // pre-scale so tiny or huge vectors do not under/overflow in the dot product
    const double m = max_abs(a);
    if (!(m > 0.0)) throw InvalidArgument("cannot normalize the zero vector");
    const Vec3 b = a / m;
    return b / norm(b);
}

Vec3 any_orthogonal(const Vec3& a) {
    // Cross with the axis least aligned with `a`.
    const double ax = std::abs(a.x), ay = std::abs(a.y), az = std::abs(a.z);
    const Vec3 e = (ax <= ay && ax <= az) ? Vec3{1, 0, 0} : (ay <= az ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
    return normalized(cross(a, e));
}

double frobenius_norm(const Mat3& m) {
    double s = 0.0;
    for (double v : m.a) s += v * v;
    return std::sqrt(s);
}

double determinant(const Mat3& m) {
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

double trace_cube(const SymMat3& a) {
    const Mat3 d = a.dense();
    const Mat3 sq = d * d;
    double t = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) t += sq(i, j) * d(j, i);
    return t;
}

double determinant(const SymMat3& a) {
    return a.a11 * (a.a22 * a.a33 - a.a23 * a.a23) - a.a12 * (a.a12 * a.a33 - a.a23 * a.a13) +
           a.a13 * (a.a12 * a.a23 - a.a22 * a.a13);
}

SymMat3 congruence(const Mat3& c, const SymMat3& a) {
    return SymMat3::symmetric_part(c * a.dense() * c.transposed());
}

TracelessSymMat3 TracelessSymMat3::checked(const SymMat3& a) {
    const double tol = 1e-12 * std::max(a.max_abs_entry(), 1.0);
    if (std::abs(a.trace()) > tol) throw InvalidArgument("matrix is not traceless");
    return TracelessSymMat3(a);
}

namespace {

// One Newton step on t^3 - q t - c, skipped where the derivative vanishes.
double polish_root(double t, double q, double c) {
    const double f = (t * t - q) * t - c;
    const double df = 3.0 * t * t - q;
    if (std::abs(df) <= 1e-8 * std::max(q, 1e-300)) return t;
    const double next = t - f / df;
    const double fn = (next * next - q) * next - c;
    return std::abs(fn) < std::abs(f) ? next : t;
}

}  // namespace

EigenTriple eig_traceless(const TracelessSymMat3& a) {
    const double scale = a.sym().max_abs_entry();
    if (scale == 0.0) return {};

    const SymMat3 b = (1.0 / scale) * a.sym();
    const double q = 0.5 * trace_sq(b);  // t^3 - q t - c = 0
    const double c = determinant(b);
    if (q <= 0.0) return {};

    const double m = 2.0 * std::sqrt(q / 3.0);
    const double arg = std::clamp(4.0 * c / (m * m * m), -1.0, 1.0);
    const double theta = std::acos(arg) / 3.0;
    constexpr double two_thirds_pi = 2.0 * std::numbers::pi / 3.0;

    double hi = polish_root(m * std::cos(theta), q, c);
    double lo = polish_root(m * std::cos(theta + two_thirds_pi), q, c);
    double mid = -(hi + lo);

    // Tie between +|lambda| and -|lambda| resolves to the positive root.
    const double tie_tol = 1e-12 * std::max(std::abs(hi), std::abs(lo));
    double lambda = 0.0, other1 = 0.0, other2 = 0.0;
    if (std::abs(hi) + tie_tol >= std::abs(lo)) {
        lambda = hi;
        other1 = mid;
        other2 = lo;
    } else {
        lambda = lo;
        other1 = hi;
        other2 = mid;
    }

    EigenTriple out;
    out.lambda = lambda * scale;
    out.delta = 0.5 * std::abs(other1 - other2) * scale;
    out.r = lambda == 0.0 ? 0.0 : std::clamp(2.0 * out.delta / std::abs(out.lambda), 0.0, 1.0);
    out.delta = std::min(out.delta, 0.5 * std::abs(out.lambda));
    return out;
}

Vec3 principal_eigenvector(const TracelessSymMat3& a) {
    const EigenTriple e = eig_traceless(a);
    if (e.lambda == 0.0) return {1.0, 0.0, 0.0};

    // The principal eigenvalue is separated from the others by at least |lambda|,
    // so A - lambda I has rank exactly two and the cross product of two rows spans
    // its null space.
    Mat3 shifted = a.sym().dense();
    for (std::size_t i = 0; i < 3; ++i) shifted(i, i) -= e.lambda;
    const Vec3 r0 = shifted.row(0), r1 = shifted.row(1), r2 = shifted.row(2);
    const std::array<Vec3, 3> candidates{cross(r0, r1), cross(r0, r2), cross(r1, r2)};
    const Vec3* best = &candidates[0];
    for (const Vec3& v : candidates)
        if (dot(v, v) > dot(*best, *best)) best = &v;
    Vec3 v = normalized(*best);

    // Canonical sign: largest-magnitude component positive.
    std::size_t k = 0;
    for (std::size_t i = 1; i < 3; ++i)
        if (std::abs(v[i]) > std::abs(v[k])) k = i;
    return v[k] < 0.0 ? -v : v;
}

SymEigen jacobi_eigen(const SymMat3& s) {
    Mat3 a = s.dense();
    Mat3 v = Mat3::identity();
    const double scale = std::max(s.max_abs_entry(), 1e-300);

    for (int sweep = 0; sweep < 64; ++sweep) {
        const double off = std::abs(a(0, 1)) + std::abs(a(0, 2)) + std::abs(a(1, 2));
        if (off <= 1e-18 * scale) break;
        for (std::size_t p = 0; p < 2; ++p) {
            for (std::size_t q = p + 1; q < 3; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < 3; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < 3; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (std::size_t k = 0; k < 3; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }

    std::array<std::size_t, 3> order{0, 1, 2};
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    SymEigen out;
    for (std::size_t k = 0; k < 3; ++k) {
        out.values[k] = a(order[k], order[k]);
        out.vectors[k] = v.column(order[k]);
    }
    if (dot(cross(out.vectors[0], out.vectors[1]), out.vectors[2]) < 0.0)
        out.vectors[2] = -out.vectors[2];
    return out;
}

Mat3 rot_about(const Vec3& axis, double angle) {
    const double n = norm(axis);
    if (!(n > 0.0)) throw InvalidArgument("degenerate axis");
    const Mat3 k = cross_matrix(axis / n);
    return Mat3::identity() + std::sin(angle) * k + (1.0 - std::cos(angle)) * (k * k);
}

}  // namespace magalg
