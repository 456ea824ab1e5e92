#include "support.hpp"

#include "tricho/errors.hpp"
#include "tricho/linalg.hpp"
#include "tricho/lyapunov_norms.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace tricho;
using namespace tricho::testing;

namespace {

NormSampling sampling(double t_max = 10.0, double horizon = 10.0)
{
    NormSampling s;
    s.horizon = horizon;
    s.resolution = 0.5;
    s.t_max = t_max;
    s.samples = 32;
    s.seed = 11;
    return s;
}

Vector e(int i)
{
    return Vector::Unit(3, i);
}

} // namespace

TEST(LyapunovNorm, UniformExampleBasisVectors)
{
    const auto sys = example_system(false);
    const auto fwd = build_norm_family(NormVariant::forward_central, sys, example_rates(), sampling());
    const auto bwd = build_norm_family(NormVariant::backward_central, sys, example_rates(), sampling());
    for (double t : {0.0, 0.5, 3.0, 10.0}) {
        EXPECT_NEAR(fwd(t, e(0)), 1.0, 1e-14);
        EXPECT_NEAR(bwd(t, e(1)), 1.0, 1e-14);
        EXPECT_EQ(fwd(t, Vector::Zero(3)), 0.0);
        EXPECT_EQ(bwd(t, Vector::Zero(3)), 0.0);
    }
    EXPECT_LT(fwd.horizon_sensitivity(), kHorizonSensitivityLimit);
    EXPECT_FALSE(bwd.horizon_flagged());
}

TEST(LyapunovNorm, OffLatticeTimeMatchesClosedForm)
{
    // ||e1||_t = sup_tau h(tau)/h(t) e^{-(tau-t)} = 1 at any t, cached or not.
    const auto sys = example_system(false);
    const auto fwd = build_norm_family(NormVariant::forward_central, sys, example_rates(), sampling(4.0));
    for (double t : {0.3, 4.2, 7.75}) {
        EXPECT_NEAR(fwd(t, e(0)), 1.0, 1e-14);
    }
}

TEST(LyapunovNorm, NormAxioms)
{
    const auto sys = example_system(true);
    const auto fwd = build_norm_family(NormVariant::forward_central, sys, example_rates(), sampling(6.0));
    const Matrix xs = random_unit_vectors(3, 12, 99);
    for (double t : {0.0, 1.5, 6.0}) {
        for (Eigen::Index i = 0; i + 1 < xs.cols(); ++i) {
            const Vector x = xs.col(i);
            const Vector y = xs.col(i + 1);
            const double nx = fwd(t, x);
            EXPECT_GE(nx, x.norm() - 1e-12);
            for (double lambda : {-2.5, 0.1, 7.0}) {
                EXPECT_NEAR(fwd(t, lambda * x), std::abs(lambda) * nx, 1e-10 * std::abs(lambda) * nx);
            }
            EXPECT_LE(fwd(t, x + y), nx + fwd(t, y) + 1e-10);
        }
    }
}

TEST(LyapunovNorm, HorizonMonotonicity)
{
    const auto sys = example_system(true);
    const auto shortn = build_norm_family(NormVariant::forward_central, sys, example_rates(), sampling(5.0, 2.0));
    const auto longn = build_norm_family(NormVariant::forward_central, sys, example_rates(), sampling(5.0, 6.0));
    const Matrix xs = basis_and_samples(3, 16, 5);
    for (double t : {0.0, 2.5, 5.0}) {
        for (Eigen::Index i = 0; i < xs.cols(); ++i) {
            EXPECT_LE(shortn(t, xs.col(i)), longn(t, xs.col(i)) * (1.0 + 1e-15));
            EXPECT_LE(shortn(t, xs.col(i)), shortn.evaluate_extended(t, xs.col(i)) * (1.0 + 1e-15));
        }
    }
}

TEST(LyapunovNorm, BadSampling)
{
    const auto sys = example_system(false);
    auto s = sampling();
    s.horizon = 0.0;
    EXPECT_THROW(build_norm_family(NormVariant::forward_central, sys, example_rates(), s), ArgumentError);
}

TEST(Compatibility, UniformExampleIsTheL1Norm)
{
    // With u = 1 every term collapses to |x_i|, so |x|_t = |x|_1 and C(t) = sqrt(3).
    const auto sys = example_system(false);
    const auto grid = uniform_grid(10.0, 0.5);
    const Matrix xs = random_unit_vectors(3, 8, 21);
    for (auto v : {NormVariant::forward_central, NormVariant::backward_central}) {
        const auto norms = build_norm_family(v, sys, example_rates(), sampling());
        for (double t : {0.0, 4.5, 10.0}) {
            for (Eigen::Index i = 0; i < xs.cols(); ++i) {
                EXPECT_NEAR(norms(t, xs.col(i)), xs.col(i).lpNorm<1>(), 1e-14);
            }
            for (int i = 0; i < 3; ++i) {
                EXPECT_NEAR(norms(t, e(i)), 1.0, 1e-14);
            }
        }
        const auto r = check_compatibility(norms, grid, 32, 3);
        EXPECT_TRUE(r.pass);
        EXPECT_GE(r.lower_margin, -1e-12);
        EXPECT_LE(r.uniform_c, std::sqrt(3.0) + 1e-12);
        EXPECT_GT(r.uniform_c, 1.5);
        EXPECT_LE(r.uniform_c, 3.0);
    }
}

TEST(Compatibility, NonuniformExampleWithinThreeN)
{
    const auto sys = example_system(true);
    const auto grid = uniform_grid(10.0, 0.5);
    const auto p8 = check_proposition8(sys, example_rates(), grid, 1e-10);
    for (auto v : {NormVariant::forward_central, NormVariant::backward_central}) {
        const auto norms = build_norm_family(v, sys, example_rates(), sampling());
        const auto r = check_compatibility(norms, grid, 32, 3, 1e-12, &p8);
        EXPECT_TRUE(r.pass);
        EXPECT_TRUE(r.cross_checked);
        EXPECT_TRUE(r.cross_check_pass);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            EXPECT_GE(r.c[i], 1.0 - 1e-12);
            EXPECT_LE(r.c[i], 3.0 * (grid[i] + 1.0));
        }
    }
}

TEST(MainTheorem, BothExampleVariantsHold)
{
    for (bool nonuniform : {false, true}) {
        const auto sys = example_system(nonuniform);
        const auto grid = uniform_grid(10.0, 0.5);
        const auto fwd = build_norm_family(NormVariant::forward_central, sys, example_rates(), sampling());
        const auto bwd = build_norm_family(NormVariant::backward_central, sys, example_rates(), sampling());
        const auto r = verify_main_theorem(sys, example_rates(), fwd, bwd, grid, 32, 3, 1e-9);
        EXPECT_TRUE(r.pass) << "nonuniform=" << nonuniform;
        for (const auto& [tag, w] : r.worst_margin) {
            EXPECT_GE(w, nonuniform ? -1e-9 : -1e-10) << tag;
        }
    }
}

TEST(MainTheorem, MismatchedSourcesAreStructural)
{
    const auto a = example_system(false);
    const auto b = example_system(true);
    const auto fwd = build_norm_family(NormVariant::forward_central, a, example_rates(), sampling(2.0));
    const auto bwd = build_norm_family(NormVariant::backward_central, b, example_rates(), sampling(2.0));
    EXPECT_THROW(verify_main_theorem(a, example_rates(), fwd, bwd, {0.0, 1.0}, 4, 1, 1e-9), StructuralError);
    EXPECT_THROW(verify_main_theorem(a, example_rates(), fwd, fwd, {0.0, 1.0}, 4, 1, 1e-9), StructuralError);
}

TEST(UnprojectedTheorem, UniformExample)
{
    const auto sys = example_system(false);
    const auto grid = uniform_grid(6.0, 0.5);
    const auto fwd = build_norm_family(NormVariant::forward_central, sys, example_rates(), sampling(6.0));
    const auto bwd = build_norm_family(NormVariant::backward_central, sys, example_rates(), sampling(6.0));
    const auto r = verify_unprojected_theorem(sys, example_rates(), fwd, bwd, grid, 32, 3, 1e-9);
    EXPECT_TRUE(r.pass);
    for (const auto& [tag, w] : r.worst_margin) {
        EXPECT_GE(w, -1e-10) << tag;
    }
}

TEST(Sufficiency, ProofFormulaPasses)
{
    for (bool nonuniform : {false, true}) {
        const auto sys = example_system(nonuniform);
        const auto grid = uniform_grid(10.0, 0.5);
        const auto fwd = build_norm_family(NormVariant::forward_central, sys, example_rates(), sampling());
        const auto bwd = build_norm_family(NormVariant::backward_central, sys, example_rates(), sampling());
        const auto r = verify_sufficiency(sys, example_rates(), fwd, bwd, grid, 32, 3);
        EXPECT_TRUE(r.pass);
        EXPECT_EQ(r.definition5.verdict, Verdict::pass);
        if (!nonuniform) {
            // three unit-norm projectors: N = 3 C with C the measured (constant) compatibility value
            for (std::size_t i = 0; i < grid.size(); ++i) {
                EXPECT_NEAR(r.candidate[i], 3.0 * r.c[i], 1e-12);
                EXPECT_LE(r.candidate[i], 3.0 * std::sqrt(3.0) + 1e-12);
            }
        }
    }
}

TEST(Sufficiency, IdentityOperator)
{
    const SplitSystem sys(EvolutionOperator::identity(3), ProjectorFamily::coordinate_split(1, 1, 1));
    const auto rates = unit_rates(100.0);
    const auto fwd = build_norm_family(NormVariant::forward_central, sys, rates, sampling(4.0, 4.0));
    const auto bwd = build_norm_family(NormVariant::backward_central, sys, rates, sampling(4.0, 4.0));
    const auto r = verify_sufficiency(sys, rates, fwd, bwd, uniform_grid(4.0, 0.5), 8, 3);
    EXPECT_TRUE(r.pass);
}

TEST(UniformTheorem, ConstantAtMostThree)
{
    const auto sys = example_system(false);
    const auto grid = uniform_grid(10.0, 0.5);
    const auto fwd = build_norm_family(NormVariant::forward_central, sys, example_rates(), sampling());
    const auto bwd = build_norm_family(NormVariant::backward_central, sys, example_rates(), sampling());
    const auto r = verify_uniform_theorem(sys, example_rates(), fwd, bwd, grid, 32, 3, 1e-9);
    EXPECT_TRUE(r.pass);
    EXPECT_LE(r.c, 3.0);
    EXPECT_LE(r.n_constant, 3.0);
}

TEST(Corollary, ExponentialAndPolynomial)
{
    const auto grid = uniform_grid(8.0, 0.5);
    NormSampling s = sampling(8.0);
    const auto fam = ProjectorFamily::coordinate_split(1, 1, 1);
    const auto exp_sys = example_system(false);
    const auto er = instantiate_corollaries(CorollaryKind::exponential, {1.0, 2.0, 0.5, 0.25}, exp_sys, s, grid, 1e-9);
    EXPECT_TRUE(er.pass);
    EXPECT_GE(er.worst("et1"), -1e-9);

    const auto p = GrowthRate::polynomial(1.0);
    const SplitSystem poly_sys(paper_example({GrowthRate::unit(1000.0), p, p, p, p}, fam), fam);
    const auto pr = instantiate_corollaries(CorollaryKind::polynomial, {1.0, 1.0, 1.0, 1.0}, poly_sys, s, grid, 1e-9);
    EXPECT_TRUE(pr.pass);
    EXPECT_GE(pr.worst("pt4"), -1e-9);

    EXPECT_THROW(instantiate_corollaries(CorollaryKind::exponential, {0.0, 1.0, 1.0, 1.0}, exp_sys, s, grid, 1e-9),
                 ArgumentError);
}

TEST(ConsistencyLoop, DefinitionThenTheoremThenSufficiency)
{
    const auto sys = example_system(true);
    const auto grid = uniform_grid(10.0, 0.5);
    const auto d5 = check_definition5(sys, example_rates(), grid, [](double a) { return 3.0 * (a + 1.0); });
    ASSERT_EQ(d5.verdict, Verdict::pass);
    const auto fwd = build_norm_family(NormVariant::forward_central, sys, example_rates(), sampling());
    const auto bwd = build_norm_family(NormVariant::backward_central, sys, example_rates(), sampling());
    ASSERT_TRUE(verify_main_theorem(sys, example_rates(), fwd, bwd, grid, 32, 3, 1e-9).pass);
    EXPECT_TRUE(verify_sufficiency(sys, example_rates(), fwd, bwd, grid, 32, 3).pass);
}
