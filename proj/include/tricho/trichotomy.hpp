#pragma once

#include "tricho/growth_rate.hpp"
#include "tricho/invariance.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tricho {

/// Relative slack allowed when comparing a measured factor against a bound.
inline constexpr double kVerdictRelTol = 1e-12;

struct TrichotomyRates {
    GrowthRate h;
    GrowthRate k;
    GrowthRate mu;
    GrowthRate nu;
};

struct DichotomyRates {
    GrowthRate h;
    GrowthRate k;
};

/// The four inequality families: stable (h), unstable (k), central upper (mu), central lower (nu).
enum class Inequality { h, k, mu, nu };

inline constexpr std::array<Inequality, 4> kInequalities{Inequality::h, Inequality::k, Inequality::mu,
                                                         Inequality::nu};

/// Whether the nonuniformity function multiplies at s (h, mu) or at t (k, nu).
enum class Binding { s, t };

Binding binding(Inequality ineq);

/// Smallest N(.) that makes one projected trichotomy inequality hold at (t,s), i.e. the
/// supremum over x of lhs / rhs-without-N, as a restricted operator norm:
///   h:  h(t)/h(s)   * |U(t,s)|        on Range P1(s)
///   k:  k(t)/k(s)   * |V2(t,s)P2(t)|  on Range P2(t)
///   mu: mu(s)/mu(t) * |U(t,s)|        on Range P3(s)
///   nu: nu(s)/nu(t) * |V3(t,s)P3(t)|  on Range P3(t)
/// An empty range gives 0.
double required_factor(const SplitSystem& system, const TrichotomyRates& rates, double t, double s,
                       Inequality ineq);

/// Same, measured against |x| on the whole space (the projector-free variant).
double required_factor_full(const SplitSystem& system, const TrichotomyRates& rates, double t, double s,
                            Inequality ineq);

using BoundFunction = std::function<double(double)>;

enum class Verdict { pass, fail, reported };

std::string to_string(Verdict v);

struct FactorRecord {
    double t;
    double s;
    Inequality ineq;
    double factor;
    /// bound (or, without a bound, the envelope) at the binding argument minus factor.
    double margin;
};

/// Outcome of one trichotomy-type check on a grid.
///
/// Verdicts from a finite grid are evidence, never proof.
struct TrichotomyReport {
    std::string label;
    std::array<std::string, 4> tags;
    std::vector<double> grid;
    std::vector<FactorRecord> records;
    /// Pointwise minimal admissible N per inequality, indexed like `grid`.
    std::array<std::vector<double>, 4> per_inequality;
    std::vector<double> pointwise;
    /// Smallest nondecreasing majorant of `pointwise`, floored at 1.
    std::vector<double> envelope;
    double uniform_constant = 1.0;
    /// Bound evaluated at the grid points; empty when none was supplied.
    std::vector<double> bound;
    Verdict verdict = Verdict::reported;
    bool evidence_only = true;
    std::string classification;
    std::vector<std::string> notes;

    const std::string& tag(Inequality ineq) const { return tags[static_cast<std::size_t>(ineq)]; }
    /// Envelope value at the largest grid point <= a.
    double envelope_at(double a) const;
};

/// Projected inequalities: with a bound, pass iff the bound dominates every pointwise requirement.
TrichotomyReport check_definition5(const SplitSystem& system, const TrichotomyRates& rates,
                                   const std::vector<double>& grid, std::optional<BoundFunction> bound = {});

/// Full-norm variant (right-hand sides use |x|). `tol` bounds the v2 residual of
/// the restricted inverses used on each pair.
TrichotomyReport check_proposition8(const SplitSystem& system, const TrichotomyRates& rates,
                                    const std::vector<double>& grid, double tol,
                                    std::optional<BoundFunction> bound = {});

/// Constant N: one constant over all grid pairs.
TrichotomyReport check_uniform(const SplitSystem& system, const TrichotomyRates& rates,
                               const std::vector<double>& grid, std::optional<double> constant = {});

/// (h,k)-dichotomy: requires P3 = 0 on the grid; the mu/nu rows come out vacuous.
TrichotomyReport check_dichotomy(const SplitSystem& system, const DichotomyRates& rates,
                                 const std::vector<double>& grid, std::optional<BoundFunction> bound = {});

/// Strictly increasing, nonnegative, nonempty; ArgumentError otherwise.
void require_time_grid(const std::vector<double>& grid);

/// {0, step, 2 step, ...} up to t_max (inclusive within rounding).
std::vector<double> uniform_grid(double t_max, double step);

} // namespace tricho
