#include "tricho/evolution.hpp"

#include "tricho/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace tricho {

namespace {

std::string pair_text(double t, double s)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "(t=%g, s=%g)", t, s);
    return buf;
}

Matrix rk4_propagate(const std::function<Matrix(double)>& a, int n, double from, double to, double step)
{
    Matrix x = Matrix::Identity(n, n);
    if (to == from) {
        return x;
    }
    const double span = to - from;
    const auto steps = std::max<long>(1, static_cast<long>(std::ceil(span / step - 1e-9)));
    const double h = span / static_cast<double>(steps);
    for (long i = 0; i < steps; ++i) {
        const double t = from + h * static_cast<double>(i);
        const Matrix a_mid = a(t + 0.5 * h);
        const Matrix k1 = a(t) * x;
        const Matrix k2 = a_mid * (x + 0.5 * h * k1);
        const Matrix k3 = a_mid * (x + 0.5 * h * k2);
        const Matrix k4 = a(t + h) * (x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return x;
}

} // namespace

std::string to_string(Provenance p)
{
    switch (p) {
    case Provenance::closed_form: return "closed_form";
    case Provenance::ode_generated: return "ode_generated";
    case Provenance::composed: return "composed";
    }
    return "unknown";
}

EvolutionOperator::EvolutionOperator(int n, Evaluator evaluator, Provenance provenance)
    : n_(n), evaluator_(std::make_shared<const Evaluator>(std::move(evaluator))), provenance_(provenance)
{
    if (n <= 0) {
        throw StructuralError("evolution operator needs a positive dimension");
    }
    if (!*evaluator_) {
        throw ArgumentError("evolution operator needs an evaluator");
    }
}

EvolutionOperator EvolutionOperator::identity(int n)
{
    return EvolutionOperator(n, [n](double, double) { return Matrix::Identity(n, n); }, Provenance::closed_form);
}

Matrix EvolutionOperator::evaluate(double t, double s) const
{
    if (!(s >= 0.0) || !(t >= s) || !std::isfinite(t)) {
        throw DomainError("evolution operator queried outside Delta at " + pair_text(t, s));
    }
    if (t == s) {
        return Matrix::Identity(n_, n_);
    }
    Matrix m = (*evaluator_)(t, s);
    if (m.rows() != n_ || m.cols() != n_) {
        throw StructuralError("evolution operator returned a " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()) + " matrix, expected " + std::to_string(n_) + "x" +
                              std::to_string(n_));
    }
    return m;
}

EvolutionOperator paper_example(const ExampleRates& rates, const ProjectorFamily& family)
{
    constexpr double tol = 1e-10;
    const std::vector<double> probe{0.0, 0.5, 1.0, 2.0, 5.0, 10.0};
    const auto ortho = check_orthogonal(family, family.is_constant() ? std::vector<double>{0.0} : probe, tol);
    if (!ortho.pass) {
        throw PreconditionError("example operator needs an orthogonal projector family (worst residual " +
                                std::to_string(ortho.worst()) + ")");
    }
    if (!family.is_constant()) {
        for (std::size_t a = 0; a < probe.size(); ++a) {
            for (std::size_t b = 0; b <= a; ++b) {
                const double t = probe[a];
                const double s = probe[b];
                for (int i = 1; i <= 3; ++i) {
                    for (int j = 1; j <= 3; ++j) {
                        const Matrix expect =
                            i == j ? family.member(i, s) : Matrix::Zero(family.dimension(), family.dimension());
                        if (spectral_norm(family.member(i, t) * family.member(j, s) - expect) > tol) {
                            throw PreconditionError("example operator needs P_i(t)P_j(s) = delta_ij P_i(s); violated at " +
                                                    pair_text(t, s));
                        }
                    }
                }
            }
        }
    }
    return EvolutionOperator(
        family.dimension(),
        [rates, family](double t, double s) -> Matrix {
            const double outer = rates.u.ratio(s, t);
            const double c1 = rates.h.ratio(s, t);
            const double c2 = rates.k.ratio(t, s);
            const double c3 = rates.mu.ratio(t, s) * rates.nu.ratio(s, t);
            return outer * (c1 * family.member(1, s) + c2 * family.member(2, s) + c3 * family.member(3, s));
        },
        Provenance::closed_form);
}

EvolutionOperator from_generator(const GeneratorSpec& spec, std::vector<double> cache_times)
{
    if (!(spec.step > 0.0) || !std::isfinite(spec.step)) {
        throw ArgumentError("generator step must be positive");
    }
    if (spec.dimension <= 0) {
        throw StructuralError("generator needs a positive dimension");
    }
    if (!spec.generator) {
        throw ArgumentError("generator callback is empty");
    }
    const int n = spec.dimension;
    auto a = spec.generator;
    std::sort(cache_times.begin(), cache_times.end());
    cache_times.erase(std::unique(cache_times.begin(), cache_times.end()), cache_times.end());
    for (double c : cache_times) {
        if (!(c >= 0.0)) {
            throw ArgumentError("generator cache times must be nonnegative");
        }
    }
    const std::vector<double> probe = cache_times.empty() ? std::vector<double>{0.0} : cache_times;
    for (double t : probe) {
        const Matrix m = a(t);
        if (m.rows() != n || m.cols() != n) {
            throw StructuralError("generator A(t) has the wrong shape");
        }
        if (!m.allFinite()) {
            throw ArgumentError("generator A(t) is not finite at a sampled time");
        }
    }

    std::vector<Matrix> segments;
    segments.reserve(cache_times.size());
    for (std::size_t i = 0; i + 1 < cache_times.size(); ++i) {
        segments.push_back(rk4_propagate(a, n, cache_times[i], cache_times[i + 1], spec.step));
    }
    const double step = spec.step;

    auto evaluator = [n, a, step, cache = std::move(cache_times), segments = std::move(segments)](double t,
                                                                                                   double s) {
        // first cache time >= s, last cache time <= t
        const auto lo = std::lower_bound(cache.begin(), cache.end(), s);
        const auto hi = std::upper_bound(cache.begin(), cache.end(), t);
        if (lo == cache.end() || hi == cache.begin() || std::prev(hi) < lo) {
            return rk4_propagate(a, n, s, t, step);
        }
        const auto first = static_cast<std::size_t>(lo - cache.begin());
        const auto last = static_cast<std::size_t>(std::prev(hi) - cache.begin());
        Matrix u = rk4_propagate(a, n, s, cache[first], step);
        for (std::size_t i = first; i < last; ++i) {
            u = segments[i] * u;
        }
        return Matrix(rk4_propagate(a, n, cache[last], t, step) * u);
    };
    return EvolutionOperator(n, std::move(evaluator), Provenance::ode_generated);
}

CheckReport check_identity(const EvolutionOperator& op, const std::vector<double>& times, double tol)
{
    CheckReport report;
    report.name = "identity";
    report.tol = tol;
    const Matrix id = Matrix::Identity(op.dimension(), op.dimension());
    for (double t : times) {
        report.record("e1", spectral_norm(op(t, t) - id));
    }
    report.finalize();
    return report;
}

CheckReport check_cocycle(const EvolutionOperator& op, const std::vector<std::array<double, 3>>& triples,
                          double tol)
{
    CheckReport report;
    report.name = "cocycle";
    report.tol = tol;
    report.record("e2", 0.0);
    for (const auto& [t, s, t0] : triples) {
        if (!(t0 >= 0.0) || !(s >= t0) || !(t >= s)) {
            throw ArgumentError("cocycle triple must satisfy t >= s >= t0 >= 0, got " + pair_text(t, s) +
                                " with t0=" + std::to_string(t0));
        }
        const Matrix a = op(t, s);
        const Matrix b = op(s, t0);
        const double scale = std::max(1.0, spectral_norm(a) * spectral_norm(b));
        report.record("e2", spectral_norm(op(t, t0) - a * b) / scale);
    }
    report.finalize();
    return report;
}

std::vector<std::array<double, 3>> grid_triples(const std::vector<double>& grid)
{
    std::vector<std::array<double, 3>> out;
    for (std::size_t a = 0; a < grid.size(); ++a) {
        for (std::size_t b = 0; b <= a; ++b) {
            for (std::size_t c = 0; c <= b; ++c) {
                out.push_back({grid[a], grid[b], grid[c]});
            }
        }
    }
    return out;
}

std::vector<std::pair<double, double>> grid_pairs(const std::vector<double>& grid)
{
    std::vector<std::pair<double, double>> out;
    for (std::size_t a = 0; a < grid.size(); ++a) {
        for (std::size_t b = 0; b <= a; ++b) {
            out.emplace_back(grid[a], grid[b]);
        }
    }
    return out;
}

} // namespace tricho
