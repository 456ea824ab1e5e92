#pragma once

#include <string>
#include <utility>
#include <vector>

namespace tricho {

enum class RateKind { exponential, polynomial, tabulated };

std::string to_string(RateKind kind);

/// Nondecreasing map R+ -> [1, inf) with divergence at infinity.
///
/// Exponential rates are e^{a t}, polynomial rates (t+1)^a, both with a > 0.
/// Tabulated rates interpolate linearly between knots and refuse to
/// extrapolate. Tabulated tables are only checked structurally on
/// construction; whether they really are growth rates is what
/// validate_on_grid reports.
class GrowthRate {
public:
    using Knot = std::pair<double, double>;

    static GrowthRate exponential(double exponent);
    static GrowthRate polynomial(double exponent);
    static GrowthRate tabulated(std::vector<Knot> table);
    /// Tabulated rate equal to 1 on [0, span_end].
    static GrowthRate unit(double span_end);

    RateKind kind() const noexcept { return kind_; }
    double exponent() const noexcept { return exponent_; }
    const std::vector<Knot>& table() const noexcept { return table_; }

    double evaluate(double t) const;

    /// evaluate(t) / evaluate(s), formed without evaluating either side for
    /// the closed-form kinds. ratio(t, t) == 1 exactly.
    double ratio(double t, double s) const;

private:
    GrowthRate(RateKind kind, double exponent, std::vector<Knot> table);

    RateKind kind_;
    double exponent_;
    std::vector<Knot> table_;
};

struct RateValidation {
    std::vector<std::string> violations;
    /// Heuristic only: evaluate(last) < 10 * evaluate(first). Never a violation.
    bool divergence_suspect = false;

    bool ok() const noexcept { return violations.empty(); }
};

/// Checks ">= 1" and monotonicity on a strictly increasing nonnegative grid.
RateValidation validate_on_grid(const GrowthRate& rate, const std::vector<double>& grid);

} // namespace tricho
