#include "tricho/growth_rate.hpp"

#include "tricho/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace tricho {

namespace {

std::string fmt_time(double t)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

void require_time(double t)
{
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw DomainError("growth rate evaluated at t=" + fmt_time(t) + " (time must be >= 0)");
    }
}

} // namespace

std::string to_string(RateKind kind)
{
    switch (kind) {
    case RateKind::exponential: return "exponential";
    case RateKind::polynomial: return "polynomial";
    case RateKind::tabulated: return "tabulated";
    }
    return "unknown";
}

GrowthRate::GrowthRate(RateKind kind, double exponent, std::vector<Knot> table)
    : kind_(kind), exponent_(exponent), table_(std::move(table))
{
}

GrowthRate GrowthRate::exponential(double exponent)
{
    if (!(exponent > 0.0) || !std::isfinite(exponent)) {
        throw ArgumentError("exponential rate needs a positive exponent, got " + fmt_time(exponent));
    }
    return GrowthRate(RateKind::exponential, exponent, {});
}

GrowthRate GrowthRate::polynomial(double exponent)
{
    if (!(exponent > 0.0) || !std::isfinite(exponent)) {
        throw ArgumentError("polynomial rate needs a positive exponent, got " + fmt_time(exponent));
    }
    return GrowthRate(RateKind::polynomial, exponent, {});
}

GrowthRate GrowthRate::tabulated(std::vector<Knot> table)
{
    if (table.empty()) {
        throw ArgumentError("tabulated rate needs at least one knot");
    }
    for (std::size_t i = 0; i < table.size(); ++i) {
        const auto [t, v] = table[i];
        if (!(t >= 0.0) || !std::isfinite(t) || !std::isfinite(v)) {
            throw ArgumentError("tabulated rate knot " + std::to_string(i) + " is not a finite (t >= 0, v) pair");
        }
        if (i > 0 && !(t > table[i - 1].first)) {
            throw ArgumentError("tabulated rate knot times must be strictly increasing");
        }
    }
    return GrowthRate(RateKind::tabulated, 0.0, std::move(table));
}

GrowthRate GrowthRate::unit(double span_end)
{
    if (!(span_end > 0.0)) {
        throw ArgumentError("unit rate span must be positive");
    }
    return tabulated({{0.0, 1.0}, {span_end, 1.0}});
}

double GrowthRate::evaluate(double t) const
{
    require_time(t);
    switch (kind_) {
    case RateKind::exponential:
        return std::exp(exponent_ * t);
    case RateKind::polynomial:
        return std::pow(t + 1.0, exponent_);
    case RateKind::tabulated:
        break;
    }
    if (t < table_.front().first || t > table_.back().first) {
        throw ExtrapolationError("tabulated rate queried at t=" + fmt_time(t) + " outside [" +
                                 fmt_time(table_.front().first) + ", " + fmt_time(table_.back().first) + "]");
    }
    auto hi = std::lower_bound(table_.begin(), table_.end(), t,
                               [](const Knot& k, double x) { return k.first < x; });
    if (hi->first == t) {
        return hi->second;
    }
    auto lo = std::prev(hi);
    const double w = (t - lo->first) / (hi->first - lo->first);
    return lo->second + w * (hi->second - lo->second);
}

double GrowthRate::ratio(double t, double s) const
{
    require_time(t);
    require_time(s);
    if (t == s) {
        return 1.0;
    }
    switch (kind_) {
    case RateKind::exponential:
        return std::exp(exponent_ * (t - s));
    case RateKind::polynomial:
        return std::pow((t + 1.0) / (s + 1.0), exponent_);
    case RateKind::tabulated:
        break;
    }
    return evaluate(t) / evaluate(s);
}

RateValidation validate_on_grid(const GrowthRate& rate, const std::vector<double>& grid)
{
    if (grid.empty()) {
        throw ArgumentError("validate_on_grid: empty grid");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0) || (i > 0 && !(grid[i] > grid[i - 1]))) {
            throw ArgumentError("validate_on_grid: grid must be nonnegative and strictly increasing");
        }
    }
    RateValidation out;
    std::vector<double> values;
    values.reserve(grid.size());
    for (double t : grid) {
        values.push_back(rate.evaluate(t));
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (values[i] < 1.0) {
            out.violations.push_back("value < 1 at t=" + fmt_time(grid[i]));
        }
        if (i > 0 && values[i] < values[i - 1]) {
            out.violations.push_back("decreasing on [" + fmt_time(grid[i - 1]) + "," + fmt_time(grid[i]) + "]");
        }
    }
    out.divergence_suspect = values.back() < 10.0 * values.front();
    return out;
}

} // namespace tricho
