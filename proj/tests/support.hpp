#pragma once

// Shared fixtures for the unit and acceptance tests.

#include "tricho/evolution.hpp"
#include "tricho/invariance.hpp"
#include "tricho/lyapunov_norms.hpp"
#include "tricho/projectors.hpp"
#include "tricho/trichotomy.hpp"

#include <boost/multiprecision/cpp_dec_float.hpp>

#include <cmath>

namespace tricho::testing {

using BigFloat = boost::multiprecision::cpp_dec_float_50;

/// e^x evaluated in 50-digit arithmetic, rounded to double at the end.
inline double exp_oracle(double x)
{
    return static_cast<double>(boost::multiprecision::exp(BigFloat(x)));
}

/// Rates (1, 2, 0.5, 0.25) used by the worked example.
inline TrichotomyRates example_rates()
{
    return {GrowthRate::exponential(1.0), GrowthRate::exponential(2.0), GrowthRate::exponential(0.5),
            GrowthRate::exponential(0.25)};
}

inline TrichotomyRates unit_rates(double span)
{
    return {GrowthRate::unit(span), GrowthRate::unit(span), GrowthRate::unit(span), GrowthRate::unit(span)};
}

/// u(t) = t+1 when `nonuniform`, else u = 1.
inline ExampleRates example_operator_rates(bool nonuniform)
{
    const auto r = example_rates();
    return {nonuniform ? GrowthRate::polynomial(1.0) : GrowthRate::unit(1000.0), r.h, r.k, r.mu, r.nu};
}

inline SplitSystem example_system(bool nonuniform, const ProjectorFamily& family = ProjectorFamily::coordinate_split(1, 1, 1))
{
    return SplitSystem(paper_example(example_operator_rates(nonuniform), family), family);
}

/// U(t,s) = exp((t-s) diag(d)) in closed form.
inline EvolutionOperator diagonal_exponential(const std::vector<double>& d)
{
    const int n = static_cast<int>(d.size());
    return EvolutionOperator(
        n,
        [d](double t, double s) {
            Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d.size()), static_cast<Eigen::Index>(d.size()));
            for (std::size_t i = 0; i < d.size(); ++i) {
                m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = std::exp(d[i] * (t - s));
            }
            return m;
        },
        Provenance::closed_form);
}

/// Counterclockwise rotation by (t - s) in R^2.
inline EvolutionOperator rotation_operator()
{
    return EvolutionOperator(
        2,
        [](double t, double s) {
            Matrix m(2, 2);
            const double c = std::cos(t - s);
            const double n = std::sin(t - s);
            m << c, -n, n, c;
            return m;
        },
        Provenance::closed_form);
}

inline Matrix diag3(double a, double b, double c)
{
    return Eigen::Vector3d(a, b, c).asDiagonal();
}

} // namespace tricho::testing
