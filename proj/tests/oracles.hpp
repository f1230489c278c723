#pragma once

// Reference computations used only by the tests. Everything here avoids the
// library's own eigen-solver and operator code paths.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "magalg/algebra_core.hpp"
#include "magalg/dipole_field.hpp"

namespace oracle {

using magalg::Vec3;

inline Eigen::Vector3d ev(const Vec3& v) { return {v.x, v.y, v.z}; }
inline Vec3 vec(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }

inline Eigen::Matrix3d dense(const magalg::SymMat3& a) {
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = a(std::size_t(i), std::size_t(j));
    return m;
}
inline Eigen::Matrix3d dense(const magalg::TracelessSymMat3& a) { return dense(a.sym()); }

/// Ascending eigenvalues.
inline Eigen::Vector3d eigenvalues(const Eigen::Matrix3d& m) {
    return Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d>(m, Eigen::EigenvaluesOnly).eigenvalues();
}

struct Spectrum {
    double lambda = 0.0;  ///< largest magnitude (positive on ties)
    double delta = 0.0;
    double r = 0.0;
};

inline Spectrum spectrum(const Eigen::Matrix3d& m) {
    const Eigen::Vector3d e = eigenvalues(m);
    const double scale = std::max({std::abs(e(0)), std::abs(e(2)), 1e-300});
    Spectrum s;
    // e(0) <= e(1) <= e(2); the principal one is an end of the range.
    if (std::abs(e(2)) >= std::abs(e(0)) - 1e-12 * scale) {
        s.lambda = e(2);
        s.delta = 0.5 * std::abs(e(1) - e(0));
    } else {
        s.lambda = e(0);
        s.delta = 0.5 * std::abs(e(2) - e(1));
    }
    s.r = s.lambda == 0.0 ? 0.0 : 2.0 * s.delta / std::abs(s.lambda);
    return s;
}

inline double principal_abs(const Eigen::Matrix3d& m) {
    const Eigen::Vector3d e = eigenvalues(m);
    return std::max(std::abs(e(0)), std::abs(e(2)));
}

/// F_M straight from the dipole sum, no trace projection, Eigen arithmetic.
inline Eigen::Matrix3d direct_operator(const magalg::DipoleConfig& cfg, const Vec3& moment) {
    const Eigen::Vector3d m = ev(moment);
    Eigen::Vector3d p = Eigen::Vector3d::Zero();
    Eigen::Matrix3d sum = Eigen::Matrix3d::Zero();
    for (const Vec3& o : cfg.magnets) {
        const Eigen::Vector3d d = ev(cfg.field_point) - ev(o);
        const double r = d.norm();
        const Eigen::Vector3d u = d / r;
        const double r4 = std::pow(r, 4);
        p += u / r4;
        sum += 5.0 * m.dot(u) / r4 * u * u.transpose();
    }
    return p * m.transpose() + m * p.transpose() + m.dot(p) * Eigen::Matrix3d::Identity() - sum;
}

/// Dipole field (tesla) of `moment` at `src` evaluated at `at`.
inline Eigen::Vector3d dipole_B(const Eigen::Vector3d& src, const Eigen::Vector3d& moment, const Eigen::Vector3d& at) {
    const Eigen::Vector3d d = at - src;
    const double r = d.norm();
    const Eigen::Vector3d u = d / r;
    return 1e-7 / (r * r * r) * (3.0 * u * u.transpose() - Eigen::Matrix3d::Identity()) * moment;
}

/// Force on test moment m at the field point: grad(m . B_total) by central
/// differences with step h.
inline Vec3 fd_force(const magalg::DipoleConfig& cfg, const Vec3& big_m, const Vec3& small_m, double h) {
    const auto energy = [&](const Eigen::Vector3d& at) {
        Eigen::Vector3d b = Eigen::Vector3d::Zero();
        for (const Vec3& o : cfg.magnets) b += dipole_B(ev(o), ev(big_m), at);
        return ev(small_m).dot(b);
    };
    Eigen::Vector3d g;
    for (int k = 0; k < 3; ++k) {
        Eigen::Vector3d e = Eigen::Vector3d::Zero();
        e(k) = h;
        const Eigen::Vector3d p = ev(cfg.field_point);
        // fourth-order stencil
        g(k) = (-energy(p + 2 * e) + 8 * energy(p + e) - 8 * energy(p - e) + energy(p - 2 * e)) / (12 * h);
    }
    return vec(g);
}

/// Eigenvalues of F_M for the unit dipole at distance 1, M at angle theta from
/// the axis: {cos t, (-cos t +- sqrt(4 + 5 cos^2 t)) / 2}.
inline double single_dipole_principal(double theta) {
    const double c = std::cos(theta);
    const double s = std::sqrt(4.0 + 5.0 * c * c);
    return std::max({std::abs(c), std::abs(0.5 * (-c + s)), std::abs(0.5 * (-c - s))});
}

/// max over theta in [0, pi] of single_dipole_principal, dense grid + golden section.
inline double single_dipole_lambda_bar() {
    const int n = 20000;
    double best = -1.0, bt = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = std::numbers::pi * i / n;
        if (single_dipole_principal(t) > best) { best = single_dipole_principal(t); bt = t; }
    }
    double a = std::max(0.0, bt - std::numbers::pi / n), b = std::min(std::numbers::pi, bt + std::numbers::pi / n);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int i = 0; i < 200; ++i) {
        const double c = b - g * (b - a), d = a + g * (b - a);
        if (single_dipole_principal(c) > single_dipole_principal(d)) b = d;
        else a = c;
    }
    return std::max(best, single_dipole_principal(0.5 * (a + b)));
}

/// lambda_P by brute force: Eigen principal magnitude on a dense beta grid,
/// then golden-section on the best bracket.
inline double lambda_plane(const magalg::MagneticAlgebra& alg, const magalg::PlanarStructure& plane, int n = 3600) {
    const auto f = [&](double b) {
        const Vec3 m = std::cos(b) * plane.P_hat + std::sin(b) * plane.Q_hat;
        return principal_abs(dense(alg.apply(m)));
    };
    double best = -1.0, bb = 0.0;
    for (int i = 0; i < n; ++i) {
        const double b = std::numbers::pi * i / n;
        if (f(b) > best) { best = f(b); bb = b; }
    }
    double a = bb - std::numbers::pi / n, c = bb + std::numbers::pi / n;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int i = 0; i < 100; ++i) {
        const double x = c - g * (c - a), y = a + g * (c - a);
        if (f(x) > f(y)) c = y;
        else a = x;
    }
    return std::max(best, f(0.5 * (a + c)));
}

/// Gram matrix from traces of products of dense basis images.
inline Eigen::Matrix3d gram(const magalg::MagneticAlgebra& alg) {
    Eigen::Matrix3d g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            g(i, j) = (dense(alg.basis_image(std::size_t(i))) * dense(alg.basis_image(std::size_t(j)))).trace();
    return g;
}

/// E^gamma_M built with Eigen.
inline Eigen::Matrix3d E(const Vec3& P, const Vec3& M, double gamma) {
    const Eigen::Vector3d p = ev(P), m = ev(M);
    return p * m.transpose() + m * p.transpose() + m.dot(p) * Eigen::Matrix3d::Identity() - gamma * p * p.transpose();
}

}  // namespace oracle
