#include "support.hpp"

#include "tricho/errors.hpp"
#include "tricho/evolution.hpp"
#include "tricho/linalg.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace tricho;
using namespace tricho::testing;

namespace {

Matrix rotation(double angle)
{
    Matrix m(2, 2);
    m << std::cos(angle), std::sin(angle), -std::sin(angle), std::cos(angle);
    return m;
}

EvolutionOperator ode_rotation(std::vector<double> cache = {})
{
    GeneratorSpec spec;
    spec.dimension = 2;
    spec.step = 1e-3;
    spec.generator = [](double) {
        Matrix a(2, 2);
        a << 0.0, 1.0, -1.0, 0.0;
        return a;
    };
    return from_generator(spec, std::move(cache));
}

} // namespace

TEST(Evolution, DiagonalIsIdentity)
{
    const auto sys = example_system(true);
    EXPECT_EQ(spectral_norm(sys.op()(5.0, 5.0) - Matrix::Identity(3, 3)), 0.0);
    EXPECT_EQ(spectral_norm(sys.op()(0.0, 0.0) - Matrix::Identity(3, 3)), 0.0);
}

TEST(Evolution, OutsideDeltaIsDomainError)
{
    const auto sys = example_system(true);
    EXPECT_THROW(sys.op()(0.0, 1.0), DomainError);
    EXPECT_THROW(sys.op()(1.0, -0.5), DomainError);
}

TEST(Evolution, ExampleAtOneZero)
{
    const auto sys = example_system(true);
    const Matrix u = sys.op()(1.0, 0.0);
    const Matrix oracle = diag3(0.5 * exp_oracle(-1.0), 0.5 * exp_oracle(2.0), 0.5 * exp_oracle(0.25));
    EXPECT_LE(spectral_norm(u - oracle), 1e-15);
    EXPECT_NEAR(u(0, 0), 0.183940, 5e-7);
    EXPECT_NEAR(u(1, 1), 3.694528, 5e-7);
    EXPECT_NEAR(u(2, 2), 0.642013, 5e-7);
}

TEST(Evolution, ExampleTelescopes)
{
    const auto sys = example_system(true);
    const auto& u = sys.op();
    EXPECT_LE(spectral_norm(u(2.0, 0.0) - u(2.0, 1.0) * u(1.0, 0.0)), 1e-12);
    for (double m : {0.5, 1.25, 3.0}) {
        const Matrix d = u(4.0, 0.0) - u(4.0, m) * u(m, 0.0);
        EXPECT_LE(spectral_norm(d) / spectral_norm(u(4.0, 0.0)), 1e-15);
    }
}

TEST(Evolution, ExampleWithUnitInnerRates)
{
    const auto unit = GrowthRate::unit(100.0);
    const auto fam = ProjectorFamily::coordinate_split(1, 1, 1);
    const auto op = paper_example({GrowthRate::polynomial(1.0), unit, unit, unit, unit}, fam);
    EXPECT_LE(spectral_norm(op(3.0, 1.0) - 0.5 * Matrix::Identity(3, 3)), 1e-15);

    const auto r = example_rates();
    const auto op2 = paper_example({GrowthRate::unit(100.0), r.h, unit, unit, unit}, fam);
    EXPECT_NEAR(op2(1.0, 0.0)(0, 0), exp_oracle(-1.0), 1e-16);
}

TEST(Evolution, ExampleNeedsOrthogonalFamily)
{
    const auto fam = ProjectorFamily::constant(diag3(1, 0, 0), diag3(1, 0, 0), diag3(0, 1, 1));
    EXPECT_THROW(paper_example(example_operator_rates(true), fam), PreconditionError);
}

TEST(Evolution, CheckIdentityAndCocycle)
{
    const auto sys = example_system(true);
    const std::vector<double> grid{0.0, 1.0, 2.0, 4.0};
    EXPECT_TRUE(check_identity(sys.op(), grid, 1e-12).pass);
    const auto r = check_cocycle(sys.op(), grid_triples(grid), 1e-12);
    EXPECT_TRUE(r.pass) << r.residual("e2");
    EXPECT_EQ(check_cocycle(sys.op(), {{2.0, 2.0, 2.0}}, 1e-12).residual("e2"), 0.0);
    EXPECT_THROW(check_cocycle(sys.op(), {{1.0, 2.0, 0.0}}, 1e-12), ArgumentError);
}

TEST(Generator, ZeroGenerator)
{
    GeneratorSpec spec{3, [](double) { return Matrix(Matrix::Zero(3, 3)); }, 1e-2};
    const auto op = from_generator(spec);
    EXPECT_EQ(op.provenance(), Provenance::ode_generated);
    EXPECT_LE(spectral_norm(op(2.5, 0.3) - Matrix::Identity(3, 3)), 1e-15);
}

TEST(Generator, ConstantDiagonal)
{
    GeneratorSpec spec{3, [](double) { return diag3(-1.0, 2.0, 0.25); }, 1e-3};
    const auto op = from_generator(spec);
    const Matrix oracle = diag3(exp_oracle(-1.0), exp_oracle(2.0), exp_oracle(0.25));
    EXPECT_LE(spectral_norm(op(1.0, 0.0) - oracle), 1e-8);
}

TEST(Generator, RotationAtPi)
{
    const double pi = std::numbers::pi;
    const auto op = ode_rotation();
    EXPECT_LE(spectral_norm(op(pi, 0.0) + Matrix::Identity(2, 2)), 1e-6);
    EXPECT_LE(spectral_norm(op(2.0, 0.5) - rotation(1.5)), 1e-10);
}

TEST(Generator, RotationCocycle)
{
    const double pi = std::numbers::pi;
    const auto plain = ode_rotation();
    EXPECT_TRUE(check_cocycle(plain, {{pi, pi / 2, 0.0}}, 1e-6).pass);
    const auto cached = ode_rotation({0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5});
    EXPECT_TRUE(check_cocycle(cached, {{pi, pi / 2, 0.0}, {3.5, 1.0, 0.5}}, 1e-6).pass);
    EXPECT_LE(spectral_norm(cached(pi, 0.0) + Matrix::Identity(2, 2)), 1e-6);
}

TEST(Generator, RejectsBadStep)
{
    GeneratorSpec spec{2, [](double) { return Matrix(Matrix::Zero(2, 2)); }, 0.0};
    EXPECT_THROW(from_generator(spec), ArgumentError);
    spec.step = -1.0;
    EXPECT_THROW(from_generator(spec), ArgumentError);
}

TEST(Grid, PairsAndTriples)
{
    const std::vector<double> g{0.0, 1.0, 2.0};
    EXPECT_EQ(grid_pairs(g).size(), 6u);
    EXPECT_EQ(grid_triples(g).size(), 10u);
    for (const auto& [t, s] : grid_pairs(g)) {
        EXPECT_GE(t, s);
    }
}
