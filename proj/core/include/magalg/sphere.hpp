#pragma once

// Deterministic sampling and small optimisation helpers on the unit sphere.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "magalg/linalg3.hpp"

namespace magalg {

/// n points of the golden-angle (Fibonacci) lattice on S^2.
std::vector<Vec3> fibonacci_sphere(std::size_t n);

/// Same lattice rotated by a rotation derived deterministically from `seed`.
/// Seed 0 returns the unrotated lattice.
std::vector<Vec3> seeded_sphere_lattice(std::size_t n, std::uint64_t seed);

/// Orthonormal (t1, t2) spanning the tangent plane at unit `p`.
std::pair<Vec3, Vec3> tangent_basis(const Vec3& p);

/// Runs fn(i) for i in [0, n) on up to `threads` workers with static chunks.
/// Results must be written to per-index storage so that output is independent
/// of the thread count. threads == 0 uses the hardware concurrency.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Local ascent of a function on S^2: central finite-difference gradient in the
/// tangent plane (step fd_step), move along it with step halving on failure.
struct AscentResult {
    Vec3 point;
    double value = 0.0;
    int iterations = 0;
};
AscentResult sphere_ascent(const std::function<double(const Vec3&)>& f, const Vec3& start,
                           double initial_step, int max_iterations, double fd_step = 1e-6);

}  // namespace magalg
