#include <algorithm>
#include <cmath>

#include "magalg/errors.hpp"
#include "magalg/extremal.hpp"
#include "magalg/random.hpp"

namespace magalg {

bool TheoremReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const TheoremCheck& c) { return c.passed; });
}

TheoremReport verify_theorems(const MagneticAlgebra& alg, const std::optional<PlanarStructure>& plane,
                              int trials, std::uint64_t seed, const SamplingOptions& sampling) {
    if (trials < 1) throw InvalidArgument("trials must be at least 1");
    const double scale = alg.scale();
    const GramSpectrum gs = gram_spectrum(alg);
    const Vec3 m_f = plane && !alg.is_zero() ? plane_aligned_top_moment(gs, *plane) : gs.M_F;
    const EigenTriple e_f = eig_traceless(alg.apply(m_f));
    const double lambda_mf = std::abs(e_f.lambda);

    SamplingOptions s0 = sampling;
    s0.seed = seed;
    const BruteForceResult bf = lambda_bar_bruteforce(alg, s0);

    TheoremReport report;
    {
        TheoremCheck c{"basic_ineq"};
        const double hi = bf.lambda_bar + bf.tol_sampling;
        c.worst = std::max(lambda_mf * lambda_mf - hi * hi, bf.lambda_bar * bf.lambda_bar - 2.0 * gs.lambda_F / 3.0);
        c.tolerance = 1e-9 * scale * scale;
        c.passed = c.worst <= c.tolerance;
        report.checks.push_back(c);
    }
    {
        TheoremCheck c{"r_ordering"};
        c.tolerance = 1e-9;  // on r^2
        c.worst = -1.0;
        Rng rng(seed);
        const double gate = e_f.lambda * e_f.lambda + 1e-9 * scale * scale;
        const auto probe = [&](const Vec3& m) {
            const EigenTriple e = eig_traceless(alg.apply(m));
            if (e.lambda * e.lambda >= gate) c.worst = std::max(c.worst, e.r * e.r - e_f.r * e_f.r);
        };
        probe(bf.M_bar);
        for (int i = 0; i < trials; ++i) probe(rng.unit_vector());
        c.passed = c.worst <= c.tolerance;
        report.checks.push_back(c);
    }
    {
        TheoremCheck c{"lower_chain"};
        c.applicable = plane.has_value() && !alg.is_zero();
        c.tolerance = 1e-9 * scale;
        if (c.applicable) {
            const double lp = lambda_plane(alg, *plane).lambda_P;
            c.worst = std::max(plane->norm_P - lambda_mf, lambda_mf - lp);
            c.passed = c.worst <= c.tolerance;
        }
        report.checks.push_back(c);
    }
    {
        TheoremCheck c{"subadditivity"};
        Rng rng(seed ^ 0x5bd1e995u);
        const MagneticAlgebra other = build_algebra(random_config(rng, rng.integer(1, 5)));
        SamplingOptions s1 = s0;
        const BruteForceResult b1 = lambda_bar_bruteforce(other, s1);
        const BruteForceResult b01 = lambda_bar_bruteforce(alg + other, s1);
        c.worst = b01.lambda_bar - bf.lambda_bar - b1.lambda_bar;
        c.tolerance = 2.0 * std::max(bf.tol_sampling, b1.tol_sampling);
        c.passed = c.worst <= c.tolerance;
        report.checks.push_back(c);
    }
    return report;
}

}  // namespace magalg
