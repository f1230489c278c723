#pragma once

// Fixed-size 3D linear algebra: vectors, general and symmetric 3x3 matrices,
// rotations, and eigen-solvers specialised to the symmetric case.

#include <array>
#include <cmath>
#include <cstddef>

namespace magalg {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr double operator[](std::size_t i) const { return i == 0 ? x : (i == 1 ? y : z); }
    constexpr double& operator[](std::size_t i) { return i == 0 ? x : (i == 1 ? y : z); }

    constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
    constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    static constexpr Vec3 unit(std::size_t i) {
        return {i == 0 ? 1.0 : 0.0, i == 1 ? 1.0 : 0.0, i == 2 ? 1.0 : 0.0};
    }

    friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
constexpr double max_abs(const Vec3& a) {
    double m = a.x < 0 ? -a.x : a.x;
    double ay = a.y < 0 ? -a.y : a.y;
    double az = a.z < 0 ? -a.z : a.z;
    return m > ay ? (m > az ? m : az) : (ay > az ? ay : az);
}

/// Unit vector along `a`; throws InvalidArgument for the zero vector.
Vec3 normalized(const Vec3& a);

/// Any unit vector orthogonal to `a` (deterministic choice). `a` must be nonzero.
Vec3 any_orthogonal(const Vec3& a);

/// Dense row-major 3x3 matrix.
struct Mat3 {
    std::array<double, 9> a{};

    constexpr double operator()(std::size_t i, std::size_t j) const { return a[3 * i + j]; }
    constexpr double& operator()(std::size_t i, std::size_t j) { return a[3 * i + j]; }

    static constexpr Mat3 identity() { return Mat3{{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }
    static constexpr Mat3 zero() { return Mat3{}; }
    static constexpr Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
        return Mat3{{c0.x, c1.x, c2.x, c0.y, c1.y, c2.y, c0.z, c1.z, c2.z}};
    }

    constexpr Vec3 column(std::size_t j) const { return {a[j], a[3 + j], a[6 + j]}; }
    constexpr Vec3 row(std::size_t i) const { return {a[3 * i], a[3 * i + 1], a[3 * i + 2]}; }

    constexpr Mat3 transposed() const {
        return Mat3{{a[0], a[3], a[6], a[1], a[4], a[7], a[2], a[5], a[8]}};
    }

    friend constexpr bool operator==(const Mat3&, const Mat3&) = default;
};

constexpr Vec3 operator*(const Mat3& m, const Vec3& v) {
    return {m(0, 0) * v.x + m(0, 1) * v.y + m(0, 2) * v.z,
            m(1, 0) * v.x + m(1, 1) * v.y + m(1, 2) * v.z,
            m(2, 0) * v.x + m(2, 1) * v.y + m(2, 2) * v.z};
}

constexpr Mat3 operator*(const Mat3& l, const Mat3& r) {
    Mat3 out;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            out(i, j) = l(i, 0) * r(0, j) + l(i, 1) * r(1, j) + l(i, 2) * r(2, j);
    return out;
}

constexpr Mat3 operator+(const Mat3& l, const Mat3& r) {
    Mat3 out;
    for (std::size_t k = 0; k < 9; ++k) out.a[k] = l.a[k] + r.a[k];
    return out;
}

constexpr Mat3 operator-(const Mat3& l, const Mat3& r) {
    Mat3 out;
    for (std::size_t k = 0; k < 9; ++k) out.a[k] = l.a[k] - r.a[k];
    return out;
}

constexpr Mat3 operator*(double s, const Mat3& m) {
    Mat3 out;
    for (std::size_t k = 0; k < 9; ++k) out.a[k] = s * m.a[k];
    return out;
}

double frobenius_norm(const Mat3& m);
double determinant(const Mat3& m);

/// Symmetric 3x3 matrix stored by its six independent entries.
struct SymMat3 {
    double a11 = 0.0, a22 = 0.0, a33 = 0.0;
    double a12 = 0.0, a13 = 0.0, a23 = 0.0;

    constexpr double operator()(std::size_t i, std::size_t j) const {
        if (i == j) return i == 0 ? a11 : (i == 1 ? a22 : a33);
        const std::size_t k = i + j;  // 1 -> (0,1), 2 -> (0,2), 3 -> (1,2)
        return k == 1 ? a12 : (k == 2 ? a13 : a23);
    }

    static constexpr SymMat3 identity() { return {1, 1, 1, 0, 0, 0}; }
    static constexpr SymMat3 diagonal(double d1, double d2, double d3) { return {d1, d2, d3, 0, 0, 0}; }
    /// a b^T + b a^T
    static constexpr SymMat3 sym_outer(const Vec3& a, const Vec3& b) {
        return {2 * a.x * b.x, 2 * a.y * b.y, 2 * a.z * b.z,
                a.x * b.y + b.x * a.y, a.x * b.z + b.x * a.z, a.y * b.z + b.y * a.z};
    }
    /// a a^T
    static constexpr SymMat3 outer(const Vec3& a) {
        return {a.x * a.x, a.y * a.y, a.z * a.z, a.x * a.y, a.x * a.z, a.y * a.z};
    }
    /// Symmetric part of a general matrix.
    static constexpr SymMat3 symmetric_part(const Mat3& m) {
        return {m(0, 0), m(1, 1), m(2, 2), 0.5 * (m(0, 1) + m(1, 0)), 0.5 * (m(0, 2) + m(2, 0)),
                0.5 * (m(1, 2) + m(2, 1))};
    }

    constexpr double trace() const { return a11 + a22 + a33; }
    constexpr Mat3 dense() const { return Mat3{{a11, a12, a13, a12, a22, a23, a13, a23, a33}}; }
    constexpr double max_abs_entry() const {
        double m = 0.0;
        for (double v : {a11, a22, a33, a12, a13, a23}) m = (v < 0 ? -v : v) > m ? (v < 0 ? -v : v) : m;
        return m;
    }

    constexpr SymMat3& operator+=(const SymMat3& o) {
        a11 += o.a11; a22 += o.a22; a33 += o.a33; a12 += o.a12; a13 += o.a13; a23 += o.a23;
        return *this;
    }
    constexpr SymMat3& operator-=(const SymMat3& o) {
        a11 -= o.a11; a22 -= o.a22; a33 -= o.a33; a12 -= o.a12; a13 -= o.a13; a23 -= o.a23;
        return *this;
    }
    constexpr SymMat3& operator*=(double s) {
        a11 *= s; a22 *= s; a33 *= s; a12 *= s; a13 *= s; a23 *= s;
        return *this;
    }

    friend constexpr bool operator==(const SymMat3&, const SymMat3&) = default;
};

constexpr SymMat3 operator+(SymMat3 l, const SymMat3& r) { return l += r; }
constexpr SymMat3 operator-(SymMat3 l, const SymMat3& r) { return l -= r; }
constexpr SymMat3 operator*(double s, SymMat3 m) { return m *= s; }
constexpr SymMat3 operator*(SymMat3 m, double s) { return m *= s; }

constexpr Vec3 operator*(const SymMat3& m, const Vec3& v) {
    return {m.a11 * v.x + m.a12 * v.y + m.a13 * v.z,
            m.a12 * v.x + m.a22 * v.y + m.a23 * v.z,
            m.a13 * v.x + m.a23 * v.y + m.a33 * v.z};
}

/// tr(A B) for symmetric A, B (the R^9 inner product).
constexpr double trace_product(const SymMat3& a, const SymMat3& b) {
    return a.a11 * b.a11 + a.a22 * b.a22 + a.a33 * b.a33 +
           2.0 * (a.a12 * b.a12 + a.a13 * b.a13 + a.a23 * b.a23);
}
/// tr(A^2) == squared Frobenius norm.
constexpr double trace_sq(const SymMat3& a) { return trace_product(a, a); }
double trace_cube(const SymMat3& a);
double determinant(const SymMat3& a);
inline double frobenius_norm(const SymMat3& a) { return std::sqrt(trace_sq(a)); }

/// C A C^T
SymMat3 congruence(const Mat3& c, const SymMat3& a);

/// Symmetric matrix with zero trace. Construction through `checked` enforces the
/// invariant to 1e-12 * max(max|entry|, 1); `project` removes the trace.
class TracelessSymMat3 {
public:
    constexpr TracelessSymMat3() = default;

    /// Throws InvalidArgument when |tr A| exceeds the relative tolerance.
    static TracelessSymMat3 checked(const SymMat3& a);
    /// A - (tr A / 3) I
    static constexpr TracelessSymMat3 project(const SymMat3& a) {
        const double t = a.trace() / 3.0;
        return TracelessSymMat3(SymMat3{a.a11 - t, a.a22 - t, a.a33 - t, a.a12, a.a13, a.a23});
    }
    /// Wraps `a` without any check; callers guarantee tracelessness by construction.
    static constexpr TracelessSymMat3 assume(const SymMat3& a) { return TracelessSymMat3(a); }

    constexpr const SymMat3& sym() const { return m_; }
    constexpr double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    constexpr TracelessSymMat3& operator+=(const TracelessSymMat3& o) { m_ += o.m_; return *this; }
    constexpr TracelessSymMat3& operator-=(const TracelessSymMat3& o) { m_ -= o.m_; return *this; }
    constexpr TracelessSymMat3& operator*=(double s) { m_ *= s; return *this; }

    friend constexpr bool operator==(const TracelessSymMat3&, const TracelessSymMat3&) = default;

private:
    constexpr explicit TracelessSymMat3(const SymMat3& a) : m_(a) {}
    SymMat3 m_{};
};

constexpr TracelessSymMat3 operator+(TracelessSymMat3 l, const TracelessSymMat3& r) { return l += r; }
constexpr TracelessSymMat3 operator-(TracelessSymMat3 l, const TracelessSymMat3& r) { return l -= r; }
constexpr TracelessSymMat3 operator*(double s, TracelessSymMat3 m) { return m *= s; }
constexpr Vec3 operator*(const TracelessSymMat3& m, const Vec3& v) { return m.sym() * v; }

/// Principal eigenvalue `lambda` (largest magnitude) of a traceless symmetric
/// matrix, with the remaining pair written -lambda/2 +- delta and r = 2 delta / |lambda|.
struct EigenTriple {
    double lambda = 0.0;
    double delta = 0.0;
    double r = 0.0;

    /// {lambda, -lambda/2 + delta, -lambda/2 - delta}
    std::array<double, 3> eigenvalues() const {
        return {lambda, -0.5 * lambda + delta, -0.5 * lambda - delta};
    }
};

/// Closed-form (trigonometric) solution of t^3 - (tr A^2 / 2) t - det A = 0.
/// Ties in |lambda| between a positive and a negative root resolve to the
/// positive root; the zero matrix gives {0, 0, 0}.
EigenTriple eig_traceless(const TracelessSymMat3& a);

/// Unit eigenvector belonging to the principal eigenvalue of `a`.
Vec3 principal_eigenvector(const TracelessSymMat3& a);

/// Full symmetric eigen-decomposition by cyclic Jacobi rotations.
/// Eigenvalues are sorted in descending order; vectors are orthonormal and
/// right-handed.
struct SymEigen {
    std::array<double, 3> values{};
    std::array<Vec3, 3> vectors{};
};
SymEigen jacobi_eigen(const SymMat3& a);

/// Matrix [n] with [n] v = n x v.
constexpr Mat3 cross_matrix(const Vec3& n) {
    return Mat3{{0.0, -n.z, n.y, n.z, 0.0, -n.x, -n.y, n.x, 0.0}};
}

/// Right-handed rotation by `angle` radians about `axis` (Rodrigues).
/// Throws InvalidArgument("degenerate axis") for a zero axis.
Mat3 rot_about(const Vec3& axis, double angle);

}  // namespace magalg
