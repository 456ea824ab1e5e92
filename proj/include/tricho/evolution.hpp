#pragma once

#include "tricho/check_report.hpp"
#include "tricho/growth_rate.hpp"
#include "tricho/linalg.hpp"
#include "tricho/projectors.hpp"

#include <array>
#include <functional>
#include <memory>
#include <vector>

namespace tricho {

enum class Provenance { closed_form, ode_generated, composed };

std::string to_string(Provenance p);

/// Two-parameter family U(t,s) on t >= s >= 0.
///
/// The evaluator is shared and immutable, so copies are cheap and queries are
/// safe from several threads at once.
class EvolutionOperator {
public:
    using Evaluator = std::function<Matrix(double t, double s)>;

    EvolutionOperator(int n, Evaluator evaluator, Provenance provenance);

    static EvolutionOperator identity(int n);

    int dimension() const noexcept { return n_; }
    Provenance provenance() const noexcept { return provenance_; }

    /// U(t,s). DomainError outside t >= s >= 0; U(t,t) is returned as I.
    Matrix evaluate(double t, double s) const;
    Matrix operator()(double t, double s) const { return evaluate(t, s); }

    /// True when both handles refer to the same underlying evaluator.
    bool same_source(const EvolutionOperator& other) const noexcept { return evaluator_ == other.evaluator_; }

private:
    int n_;
    std::shared_ptr<const Evaluator> evaluator_;
    Provenance provenance_;
};

/// Rates u, h, k, mu, nu of the closed-form example operator.
struct ExampleRates {
    GrowthRate u;
    GrowthRate h;
    GrowthRate k;
    GrowthRate mu;
    GrowthRate nu;
};

/// U(t,s) = u(s)/u(t) * ( h(s)/h(t) P1(s) + k(t)/k(s) P2(s) + mu(t)/mu(s) * nu(s)/nu(t) P3(s) ).
///
/// The family must satisfy P1+P2+P3 = I and P_i(t)P_j(s) = delta_ij P_i(s) for
/// t >= s (sampled); PreconditionError otherwise.
EvolutionOperator paper_example(const ExampleRates& rates, const ProjectorFamily& family);

/// x' = A(t) x, integrated with classical fixed-step RK4.
struct GeneratorSpec {
    int dimension = 0;
    std::function<Matrix(double)> generator;
    double step = 1e-3;
};

/// Builds U(t,s) from the matrix ODE X' = A(t) X, X(s) = I.
///
/// Segment propagators between consecutive `cache_times` are integrated once;
/// queries compose the cached factors with short integrations at both ends,
/// so (e2) holds on cache times up to rounding.
EvolutionOperator from_generator(const GeneratorSpec& spec, std::vector<double> cache_times = {});

/// (e1): max ||U(t,t) - I|| over `times`.
CheckReport check_identity(const EvolutionOperator& op, const std::vector<double>& times, double tol);

/// (e2): max ||U(t,t0) - U(t,s) U(s,t0)|| / max(1, ||U(t,s)|| ||U(s,t0)||) over triples
/// ordered t >= s >= t0 >= 0. The scaling keeps the residual at round-off level when
/// the operator spans many orders of magnitude.
CheckReport check_cocycle(const EvolutionOperator& op, const std::vector<std::array<double, 3>>& triples,
                          double tol);

/// Every (t, s, t0) with t >= s >= t0 drawn from the grid.
std::vector<std::array<double, 3>> grid_triples(const std::vector<double>& grid);

/// Every (t, s) with t >= s drawn from the grid.
std::vector<std::pair<double, double>> grid_pairs(const std::vector<double>& grid);

} // namespace tricho
