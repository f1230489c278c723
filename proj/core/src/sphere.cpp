#include "magalg/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

namespace magalg {

std::vector<Vec3> fibonacci_sphere(std::size_t n) {
    std::vector<Vec3> pts;
    pts.reserve(n);
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * double(i) + 1.0) / double(n);
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * double(i);
        pts.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
    }
    return pts;
}

std::vector<Vec3> seeded_sphere_lattice(std::size_t n, std::uint64_t seed) {
    std::vector<Vec3> pts = fibonacci_sphere(n);
    if (seed == 0) return pts;
    // Uniform random rotation from a unit quaternion; uses only the engine's raw
    // output so the lattice is identical across standard libraries.
    std::mt19937_64 rng(seed);
    const auto uniform = [&] { return double(rng() >> 11) * 0x1.0p-53; };
    const double u1 = uniform(), u2 = uniform(), u3 = uniform();
    const double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    const double w = a * std::sin(2 * std::numbers::pi * u2), x = a * std::cos(2 * std::numbers::pi * u2);
    const double y = b * std::sin(2 * std::numbers::pi * u3), z = b * std::cos(2 * std::numbers::pi * u3);
    const Mat3 r{{1 - 2 * (y * y + z * z), 2 * (x * y - z * w), 2 * (x * z + y * w),
                  2 * (x * y + z * w), 1 - 2 * (x * x + z * z), 2 * (y * z - x * w),
                  2 * (x * z - y * w), 2 * (y * z + x * w), 1 - 2 * (x * x + y * y)}};
    for (Vec3& p : pts) p = r * p;
    return pts;
}

std::pair<Vec3, Vec3> tangent_basis(const Vec3& p) {
    const Vec3 t1 = any_orthogonal(p);
    return {t1, cross(p, t1)};
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = unsigned(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (std::size_t i = lo; i < hi; ++i) fn(i);
        });
    }
}

AscentResult sphere_ascent(const std::function<double(const Vec3&)>& f, const Vec3& start,
                           double initial_step, int max_iterations, double fd_step) {
    AscentResult res{normalized(start), 0.0, 0};
    res.value = f(res.point);
    double step = initial_step;
    for (int it = 0; it < max_iterations && step > 1e-14; ++it) {
        res.iterations = it + 1;
        const auto [t1, t2] = tangent_basis(res.point);
        const auto at = [&](const Vec3& dir, double h) { return f(normalized(res.point + h * dir)); };
        const double g1 = (at(t1, fd_step) - at(t1, -fd_step)) / (2 * fd_step);
        const double g2 = (at(t2, fd_step) - at(t2, -fd_step)) / (2 * fd_step);
        const double gn = std::hypot(g1, g2);
        if (gn == 0.0) break;
        const Vec3 dir = (g1 / gn) * t1 + (g2 / gn) * t2;

        bool moved = false;
        while (step > 1e-14) {
            const Vec3 trial = normalized(res.point + step * dir);
            const double v = f(trial);
            if (v > res.value) {
                res.point = trial;
                res.value = v;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
        step *= 1.5;
    }
    return res;
}

}  // namespace magalg
