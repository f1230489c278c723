#include <gtest/gtest.h>

#include "magalg/errors.hpp"
#include "magalg/extremal.hpp"
#include "magalg/random.hpp"
#include "oracles.hpp"

using namespace magalg;

namespace {

DipoleConfig single() { return DipoleConfig{{Vec3{}}, Vec3{0, 0, 1}, false}; }
DipoleConfig pair_above() { return DipoleConfig{{Vec3{1, 0, 0}, Vec3{-1, 0, 0}}, Vec3{0, 0, 1}, false}; }

PlanarStructure largest_plane(const MagneticAlgebra& alg) {
    const PlaneSet ps = find_invariant_planes(alg);
    PlanarStructure best = ps.planes.at(0);
    double lp = -1.0;
    for (const PlanarStructure& p : ps.planes) {
        const double v = lambda_plane(alg, p).lambda_P;
        if (v > lp) { lp = v; best = p; }
    }
    return best;
}

}  // namespace

TEST(PrincipalMagnitude, MatchesOracle) {
    Rng rng(41);
    for (int i = 0; i < 500; ++i) {
        const DipoleConfig cfg = random_config(rng, rng.integer(1, 6));
        const MagneticAlgebra alg = build_algebra(cfg);
        const Vec3 m = rng.unit_vector();
        EXPECT_NEAR(principal_magnitude(alg, m), oracle::principal_abs(oracle::direct_operator(cfg, m)),
                    1e-10 * alg.scale());
    }
}

TEST(SamplingTolerance, Formula) {
    EXPECT_DOUBLE_EQ(sampling_tolerance(2.0, 20000), kSamplingConstant * 2.0 / 20000);
}

TEST(BruteForce, SingleDipole) {
    const MagneticAlgebra alg = build_algebra(single());
    const BruteForceResult r = lambda_bar_bruteforce(alg);
    const double expected = oracle::single_dipole_lambda_bar();
    EXPECT_NEAR(expected, 2.0, 1e-12);
    EXPECT_NEAR(r.lambda_bar, expected, 1e-6);
    EXPECT_LE(r.lambda_bar, expected + 1e-12);
    EXPECT_GE(std::abs(r.M_bar.z), 1.0 - 1e-6);
    EXPECT_FALSE(r.degenerate);
}

TEST(BruteForce, SingleDipoleUnrefinedWithinTolerance) {
    const MagneticAlgebra alg = build_algebra(single());
    for (int n : {100, 1000, 20000}) {
        SamplingOptions o;
        o.n_samples = n;
        o.refine_steps = 0;
        const BruteForceResult r = lambda_bar_bruteforce(alg, o);
        EXPECT_GE(r.lambda_bar, 2.0 - r.tol_sampling) << n;
        EXPECT_NEAR(r.tol_sampling, sampling_tolerance(alg.scale(), n), 1e-16);
    }
}

TEST(BruteForce, Errors) {
    SamplingOptions o;
    o.n_samples = 99;
    EXPECT_THROW(lambda_bar_bruteforce(build_algebra(single()), o), InvalidArgument);
}

TEST(BruteForce, ZeroAlgebra) {
    const BruteForceResult r = lambda_bar_bruteforce(MagneticAlgebra{});
    EXPECT_TRUE(r.degenerate);
    EXPECT_EQ(r.lambda_bar, 0.0);
}

TEST(BruteForce, DeterministicAcrossThreads) {
    Rng rng(42);
    const MagneticAlgebra alg = build_algebra(random_config(rng, 4));
    SamplingOptions o;
    o.seed = 7;
    const BruteForceResult a = lambda_bar_bruteforce(alg, o);
    o.threads = 4;
    const BruteForceResult b = lambda_bar_bruteforce(alg, o);
    EXPECT_EQ(a.lambda_bar, b.lambda_bar);
    EXPECT_EQ(a.M_bar, b.M_bar);
    EXPECT_EQ(a.best_sample, b.best_sample);
}

TEST(BruteForce, NeverExceedsTrueMaximum) {
    // Every returned value is attained by M_bar.
    Rng rng(43);
    for (int i = 0; i < 20; ++i) {
        const DipoleConfig cfg = random_config(rng, rng.integer(1, 5));
        const MagneticAlgebra alg = build_algebra(cfg);
        SamplingOptions o;
        o.n_samples = 2000;
        const BruteForceResult r = lambda_bar_bruteforce(alg, o);
        EXPECT_NEAR(r.lambda_bar, oracle::principal_abs(oracle::direct_operator(cfg, r.M_bar)), 1e-10 * alg.scale());
        EXPECT_NEAR(norm(r.M_bar), 1.0, 1e-12);
    }
}

TEST(InPlane, ClosedFormMatchesOracle) {
    Rng rng(44);
    for (int i = 0; i < 300; ++i) {
        const PlanarSample s = random_planar_config(rng);
        const MagneticAlgebra alg = build_algebra(s.config);
        const PlanarStructure p = planar_structure(alg, s.normal);
        const double b = rng.uniform(0, 7);
        const Vec3 m = std::cos(b) * p.P_hat + std::sin(b) * p.Q_hat;
        EXPECT_NEAR(in_plane_magnitude(alg, p, m), oracle::principal_abs(oracle::direct_operator(s.config, m)),
                    1e-9 * alg.scale());
    }
}

TEST(InPlane, LambdaPMatchesOracle) {
    Rng rng(45);
    for (int i = 0; i < 100; ++i) {
        const PlanarSample s = random_planar_config(rng);
        const MagneticAlgebra alg = build_algebra(s.config);
        const PlanarStructure p = planar_structure(alg, s.normal);
        const PlaneMaximum pm = lambda_plane(alg, p);
        EXPECT_NEAR(pm.lambda_P, oracle::lambda_plane(alg, p), 1e-9 * alg.scale());
        EXPECT_NEAR(dot(pm.M_P, p.n_hat), 0.0, 1e-12);
    }
    EXPECT_THROW(lambda_plane(build_algebra(single()), planar_structure(build_algebra(single()), Vec3::unit(0)), 359),
                 InvalidArgument);
}

TEST(ClosedForm, LambdaMF) {
    Rng rng(46);
    for (int i = 0; i < 300; ++i) {
        const PlanarSample s = random_planar_config(rng);
        const MagneticAlgebra alg = build_algebra(s.config);
        const PlanarStructure p = planar_structure(alg, s.normal);
        const GramSpectrum gs = gram_spectrum(alg);
        const Vec3 mf = plane_aligned_top_moment(gs, p);
        EXPECT_NEAR(lambda_MF_closed_form(alg, p), oracle::principal_abs(oracle::direct_operator(s.config, mf)),
                    1e-9 * alg.scale());
    }
}

TEST(BoundsReport, SingleDipole) {
    const MagneticAlgebra alg = build_algebra(single());
    const ExtremalReport r = bounds_report(alg, planar_structure(alg, Vec3::unit(0)));
    EXPECT_EQ(r.branch, Branch::PlaneDominant);
    EXPECT_EQ(to_string(r.branch), "PLANE_DOMINANT");
    EXPECT_NEAR(r.lambda_bar, 2.0, 1e-12);
    EXPECT_NEAR(r.norm_P, 1.0, 1e-15);
    EXPECT_NEAR(r.abs_lambda_MF, 2.0, 1e-12);
    EXPECT_NEAR(r.lambda_P, 2.0, 1e-12);
    EXPECT_NEAR(r.lambda_F, 6.0, 1e-12);
    EXPECT_NEAR(r.bounds.chain_upper, 2.5, 1e-12);
    EXPECT_NEAR(r.bounds.plane_upper, 2.0, 1e-12);
    EXPECT_NEAR(r.bounds.plane_outer, 2.0, 1e-12);
    EXPECT_TRUE(r.chain.all());
}

TEST(BoundsReport, PairIsPDominant) {
    const MagneticAlgebra alg = build_algebra(pair_above());
    const PlanarStructure p = largest_plane(alg);
    const ExtremalReport r = bounds_report(alg, p);
    EXPECT_EQ(r.branch, Branch::PDominant);
    EXPECT_NEAR(r.norm_P, 1.0 / (2.0 * std::sqrt(2.0)), 1e-15);
    EXPECT_NEAR(r.lambda_P, oracle::lambda_plane(alg, p), 1e-9);
    EXPECT_LT(r.lambda_P, 2.0 * r.norm_P);
    EXPECT_LE(r.lambda_bar_bf, r.bounds.pdom + 1e-9);
    EXPECT_TRUE(r.chain.all());
}

TEST(BoundsReport, Degenerate) {
    const MagneticAlgebra alg = build_algebra(DipoleConfig{{Vec3{0, 0, 1}, Vec3{0, 0, -1}}, Vec3{}, false});
    const ExtremalReport r = bounds_report(alg, std::nullopt);
    EXPECT_EQ(r.branch, Branch::Degenerate);
    EXPECT_EQ(r.lambda_bar, 0.0);
}

TEST(BoundsReport, RequiresPlane) {
    Rng rng(47);
    EXPECT_THROW(bounds_report(build_algebra(random_config(rng, 3)), std::nullopt), InvalidArgument);
}

TEST(BoundsReport, RandomPlanarChain) {
    Rng rng(48);
    for (int i = 0; i < 50; ++i) {
        const PlanarSample s = random_planar_config(rng);
        const MagneticAlgebra alg = build_algebra(s.config);
        ReportOptions o;
        o.sampling.n_samples = 5000;
        const ExtremalReport r = bounds_report(alg, planar_structure(alg, s.normal), o);
        EXPECT_TRUE(r.chain.all()) << "config " << i;
        EXPECT_NE(r.branch, Branch::Degenerate);
    }
}

TEST(Candidates, SingleDipole) {
    const MagneticAlgebra alg = build_algebra(single());
    const CandidateSet cs = locate_candidates(alg, planar_structure(alg, Vec3::unit(0)));
    ASSERT_NE(cs.best(), nullptr);
    EXPECT_NEAR(cs.best()->lambda_abs, 2.0, 1e-9);
    bool axis = false, circle = false;
    for (const Candidate& c : cs.items) {
        if (c.kind != CandidateKind::EigenSelf && c.kind != CandidateKind::DetZero) continue;
        EXPECT_LE(c.eigen_residual, 1e-9);
        EXPECT_LE(c.location_residual, 1e-9);
        if (std::abs(std::abs(c.moment.z) - 1.0) < 1e-8) {
            axis = true;
            EXPECT_NEAR(c.mu, -2.0, 1e-9);
        }
        // F_M M = mu M off the axis: cos^2 = 1/5, |lambda| = 3 / sqrt 5
        if (std::abs(c.moment.z * c.moment.z - 0.2) < 1e-8) {
            circle = true;
            EXPECT_NEAR(c.lambda_abs, 3.0 / std::sqrt(5.0), 1e-9);
        }
    }
    EXPECT_TRUE(axis);
    EXPECT_TRUE(circle);
}

TEST(Candidates, SelfEigenSolutionsAreExact) {
    Rng rng(49);
    for (int i = 0; i < 20; ++i) {
        const DipoleConfig cfg = random_config(rng, rng.integer(1, 5));
        const MagneticAlgebra alg = build_algebra(cfg);
        const CandidateSet cs = locate_candidates(alg, std::nullopt);
        for (const Candidate& c : cs.items) {
            if (c.kind == CandidateKind::GramTop) continue;
            const Eigen::Vector3d m = oracle::ev(c.moment);
            EXPECT_LE((oracle::direct_operator(cfg, c.moment) * m - c.mu * m).norm(), 1e-9 * alg.scale());
            EXPECT_TRUE(c.kind != CandidateKind::DetZero || std::abs(c.det) <= 1e-9 * std::pow(alg.scale(), 3));
        }
    }
}

TEST(Verify, SingleDipolePasses) {
    const MagneticAlgebra alg = build_algebra(single());
    const TheoremReport r = verify_theorems(alg, planar_structure(alg, Vec3::unit(0)), 50, 3);
    EXPECT_TRUE(r.all_passed());
    EXPECT_EQ(r.checks.size(), 4u);
    EXPECT_THROW(verify_theorems(alg, std::nullopt, 0, 0), InvalidArgument);
}

TEST(Verify, NonplanarSkipsLowerChain) {
    Rng rng(50);
    const MagneticAlgebra alg = build_algebra(random_config(rng, 4));
    const TheoremReport r = verify_theorems(alg, std::nullopt, 20, 1);
    EXPECT_TRUE(r.all_passed());
    for (const TheoremCheck& c : r.checks)
        if (c.name == "lower_chain") EXPECT_FALSE(c.applicable);
}
