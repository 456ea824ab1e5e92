#include "tricho/trichotomy.hpp"

#include "tricho/errors.hpp"
#include "tricho/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace tricho {

namespace {

struct PairFactors {
    std::array<double, 4> value{};
};

double rate_ratio(const TrichotomyRates& rates, Inequality ineq, double t, double s)
{
    switch (ineq) {
    case Inequality::h: return rates.h.ratio(t, s);
    case Inequality::k: return rates.k.ratio(t, s);
    case Inequality::mu: return rates.mu.ratio(s, t);
    case Inequality::nu: return rates.nu.ratio(s, t);
    }
    return 0.0;
}

int member_of(Inequality ineq)
{
    switch (ineq) {
    case Inequality::h: return 1;
    case Inequality::k: return 2;
    default: return 3;
    }
}

/// The composed map whose (restricted) norm is the factor, before rate scaling.
Matrix composed_map(const SplitSystem& system, Inequality ineq, double t, double s)
{
    switch (ineq) {
    case Inequality::h:
    case Inequality::mu: return system.op()(t, s);
    case Inequality::k: return system.v2()(t, s);
    case Inequality::nu: return system.v3()(t, s);
    }
    return {};
}

/// Time whose projector range restricts the map: s for forward maps, t for inverses.
double range_time(Inequality ineq, double t, double s)
{
    return binding(ineq) == Binding::s ? s : t;
}

std::array<std::string, 4> tags_with(const char* prefix, const char* suffix)
{
    std::array<std::string, 4> out;
    const std::array<const char*, 4> base{"ht", "kt", "mut", "nut"};
    for (std::size_t i = 0; i < 4; ++i) {
        out[i] = std::string(prefix) + base[i] + suffix;
    }
    return out;
}

std::size_t grid_index(const std::vector<double>& grid, double a)
{
    const auto it = std::upper_bound(grid.begin(), grid.end(), a);
    if (it == grid.begin()) {
        return 0;
    }
    return static_cast<std::size_t>(std::prev(it) - grid.begin());
}

using FactorFn = std::function<PairFactors(double t, double s)>;

TrichotomyReport assemble(std::string label, std::array<std::string, 4> tags, const std::vector<double>& grid,
                          const FactorFn& factors, const std::optional<BoundFunction>& bound)
{
    require_time_grid(grid);
    TrichotomyReport report;
    report.label = std::move(label);
    report.tags = std::move(tags);
    report.grid = grid;

    const auto m = grid.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b <= a; ++b) {
            pairs.emplace_back(a, b);
        }
    }
    std::vector<PairFactors> values(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t i) {
        values[i] = factors(grid[pairs[i].first], grid[pairs[i].second]);
    });

    for (auto& column : report.per_inequality) {
        column.assign(m, 0.0);
    }
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [a, b] = pairs[i];
        for (auto ineq : kInequalities) {
            const auto q = static_cast<std::size_t>(ineq);
            const std::size_t at = binding(ineq) == Binding::s ? b : a;
            auto& slot = report.per_inequality[q][at];
            const double f = values[i].value[q];
            if (std::isnan(f) || f > slot) {
                slot = f;
            }
        }
    }
    report.pointwise.assign(m, 0.0);
    report.envelope.assign(m, 1.0);
    double running = 1.0;
    for (std::size_t a = 0; a < m; ++a) {
        for (const auto& column : report.per_inequality) {
            report.pointwise[a] = std::max(report.pointwise[a], column[a]);
        }
        running = std::max(running, report.pointwise[a]);
        report.envelope[a] = running;
    }
    report.uniform_constant = report.envelope.back();

    if (bound) {
        report.bound.reserve(m);
        for (double a : grid) {
            report.bound.push_back((*bound)(a));
        }
        for (std::size_t a = 0; a < m; ++a) {
            if (!(report.bound[a] >= 1.0)) {
                throw ArgumentError("bound N must take values >= 1");
            }
            if (a > 0 && report.bound[a] < report.bound[a - 1] * (1.0 - kVerdictRelTol)) {
                throw ArgumentError("bound N must be nondecreasing");
            }
        }
    }

    bool dominated = true;
    report.records.reserve(pairs.size() * 4);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto [a, b] = pairs[i];
        for (auto ineq : kInequalities) {
            const auto q = static_cast<std::size_t>(ineq);
            const std::size_t at = binding(ineq) == Binding::s ? b : a;
            const double f = values[i].value[q];
            const double cap = bound ? report.bound[at] : report.envelope[at];
            if (!(f <= cap * (1.0 + kVerdictRelTol))) {
                dominated = false;
            }
            report.records.push_back({grid[a], grid[b], ineq, f, cap - f});
        }
    }
    if (bound) {
        report.verdict = dominated ? Verdict::pass : Verdict::fail;
    } else {
        report.verdict = std::isfinite(report.uniform_constant) ? Verdict::reported : Verdict::fail;
    }
    return report;
}

PairFactors restricted_factors(const SplitSystem& system, const TrichotomyRates& rates, double t, double s)
{
    PairFactors out;
    for (auto ineq : kInequalities) {
        out.value[static_cast<std::size_t>(ineq)] = required_factor(system, rates, t, s, ineq);
    }
    return out;
}

} // namespace

Binding binding(Inequality ineq)
{
    return ineq == Inequality::h || ineq == Inequality::mu ? Binding::s : Binding::t;
}

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::reported: return "reported";
    }
    return "unknown";
}

double required_factor(const SplitSystem& system, const TrichotomyRates& rates, double t, double s,
                       Inequality ineq)
{
    if (!(s >= 0.0) || !(t >= s)) {
        throw DomainError("required_factor: pair outside Delta");
    }
    const Matrix basis = projector_range_basis(system.family().member(member_of(ineq), range_time(ineq, t, s)));
    if (basis.cols() == 0) {
        return 0.0;
    }
    return rate_ratio(rates, ineq, t, s) * restricted_norm(composed_map(system, ineq, t, s), basis);
}

double required_factor_full(const SplitSystem& system, const TrichotomyRates& rates, double t, double s,
                            Inequality ineq)
{
    if (!(s >= 0.0) || !(t >= s)) {
        throw DomainError("required_factor_full: pair outside Delta");
    }
    const Matrix p = system.family().member(member_of(ineq), range_time(ineq, t, s));
    if (projector_range_basis(p).cols() == 0) {
        return 0.0;
    }
    Matrix m = composed_map(system, ineq, t, s);
    if (binding(ineq) == Binding::s) {
        m = m * p;
    }
    return rate_ratio(rates, ineq, t, s) * spectral_norm(m);
}

double TrichotomyReport::envelope_at(double a) const
{
    if (grid.empty()) {
        return 1.0;
    }
    return envelope[grid_index(grid, a)];
}

TrichotomyReport check_definition5(const SplitSystem& system, const TrichotomyRates& rates,
                                   const std::vector<double>& grid, std::optional<BoundFunction> bound)
{
    return assemble(
        "definition5", tags_with("", "1"), grid,
        [&](double t, double s) { return restricted_factors(system, rates, t, s); }, bound);
}

TrichotomyReport check_proposition8(const SplitSystem& system, const TrichotomyRates& rates,
                                    const std::vector<double>& grid, double tol, std::optional<BoundFunction> bound)
{
    auto factors = [&](double t, double s) {
        PairFactors out;
        const Matrix u = system.op()(t, s);
        for (int j = 2; j <= 3; ++j) {
            const Matrix w = (j == 2 ? system.v2() : system.v3())(t, s);
            const double residual = spectral_norm(u * w - system.family().member(j, t));
            if (!(residual <= tol)) {
                char buf[128];
                std::snprintf(buf, sizeof buf, "v2 residual %.3g for P%d at (t=%g, s=%g) exceeds tolerance", residual,
                              j, t, s);
                throw NotStronglyInvariantError(buf);
            }
        }
        for (auto ineq : kInequalities) {
            out.value[static_cast<std::size_t>(ineq)] = required_factor_full(system, rates, t, s, ineq);
        }
        return out;
    };
    return assemble("proposition8", tags_with("", "2"), grid, factors, bound);
}

TrichotomyReport check_uniform(const SplitSystem& system, const TrichotomyRates& rates,
                               const std::vector<double>& grid, std::optional<double> constant)
{
    if (constant && !(*constant >= 1.0)) {
        throw ArgumentError("uniform constant N must be >= 1");
    }
    std::optional<BoundFunction> bound;
    if (constant) {
        const double c = *constant;
        bound = [c](double) { return c; };
    }
    auto report = assemble(
        "uniform", tags_with("u", "1"), grid,
        [&](double t, double s) { return restricted_factors(system, rates, t, s); }, bound);

    char buf[160];
    if (constant) {
        std::snprintf(buf, sizeof buf, "%s evidence: constant %.6g %s N = %.6g on [%g, %g]",
                      report.verdict == Verdict::pass ? "uniform" : "nonuniform", report.uniform_constant,
                      report.verdict == Verdict::pass ? "<=" : ">", *constant, grid.front(), grid.back());
    } else {
        const double mid = report.envelope_at(0.5 * (grid.front() + grid.back()));
        const bool growing = report.uniform_constant > mid * (1.0 + 1e-9);
        std::snprintf(buf, sizeof buf, "%s evidence: constant %.6g on [%g, %g]%s", growing ? "nonuniform" : "uniform",
                      report.uniform_constant, grid.front(), grid.back(),
                      growing ? ", envelope still growing over the second half" : "");
    }
    report.classification = buf;
    return report;
}

TrichotomyReport check_dichotomy(const SplitSystem& system, const DichotomyRates& rates,
                                 const std::vector<double>& grid, std::optional<BoundFunction> bound)
{
    require_time_grid(grid);
    for (double t : grid) {
        if (spectral_norm(system.family().member(3, t)) > 1e-12) {
            throw PreconditionError("dichotomy check needs P3 = 0");
        }
    }
    // mu and nu never enter: Range P3 is empty, so those rows are vacuous.
    const TrichotomyRates full{rates.h, rates.k, rates.h, rates.h};
    auto report = check_definition5(system, full, grid, std::move(bound));
    report.label = "dichotomy";
    report.notes.push_back("P3 = 0: mu/nu rows vacuous");
    return report;
}

void require_time_grid(const std::vector<double>& grid)
{
    if (grid.empty()) {
        throw ArgumentError("time grid is empty");
    }
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] >= 0.0) || !std::isfinite(grid[i]) || (i > 0 && !(grid[i] > grid[i - 1]))) {
            throw ArgumentError("time grid must be nonnegative and strictly increasing");
        }
    }
}

std::vector<double> uniform_grid(double t_max, double step)
{
    if (!(step > 0.0) || !(t_max >= 0.0)) {
        throw ArgumentError("grid needs t_max >= 0 and step > 0");
    }
    const auto count = static_cast<std::size_t>(std::floor(t_max / step + 1e-9));
    std::vector<double> out;
    out.reserve(count + 1);
    for (std::size_t i = 0; i <= count; ++i) {
        out.push_back(static_cast<double>(i) * step);
    }
    return out;
}

} // namespace tricho
