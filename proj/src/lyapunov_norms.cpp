#include "tricho/lyapunov_norms.hpp"

#include "tricho/errors.hpp"
#include "tricho/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace tricho {

namespace {

constexpr double kLatticeSnap = 1e-9;

/// Index of the lattice point equal to t, or -1 when t is off the lattice.
long lattice_index(double t, double step)
{
    const double q = t / step;
    const double r = std::round(q);
    if (std::abs(r * step - t) <= kLatticeSnap * std::max(1.0, t)) {
        return static_cast<long>(r);
    }
    return -1;
}

long floor_index(double t, double step)
{
    auto i = static_cast<long>(std::floor(t / step));
    while (static_cast<double>(i) * step > t) {
        --i;
    }
    while (static_cast<double>(i + 1) * step <= t) {
        ++i;
    }
    return i;
}

double block_max(const Matrix& stack, Eigen::Index blocks, int n, const Vector& x)
{
    if (blocks == 0) {
        return 0.0;
    }
    const Vector y = stack.topRows(blocks * n) * x;
    double best = 0.0;
    for (Eigen::Index m = 0; m < blocks; ++m) {
        best = std::max(best, y.segment(m * n, n).norm());
    }
    return best;
}

void require_same_source(const SplitSystem& system, const LyapunovNormFamily& forward,
                         const LyapunovNormFamily& backward)
{
    if (forward.variant() != NormVariant::forward_central || backward.variant() != NormVariant::backward_central) {
        throw StructuralError("theorem checks need a forward_central and a backward_central norm family");
    }
    if (!forward.system().op().same_source(system.op()) || !backward.system().op().same_source(system.op()) ||
        forward.dimension() != system.dimension() || backward.dimension() != system.dimension()) {
        throw StructuralError("norm families were built from a different evolution operator");
    }
}

double relative_margin(double lhs, double rhs)
{
    return (rhs - lhs) / std::max(1.0, std::abs(rhs));
}

struct PairCheck {
    std::vector<TheoremRecord> records;
};

void keep_worst(TheoremRecord& slot, const TheoremRecord& candidate)
{
    if (std::isnan(candidate.margin) || candidate.margin < slot.margin) {
        slot = candidate;
    }
}

/// Shared driver for the projected and unprojected checks.
TheoremReport verify_theorem(const std::string& label, bool unprojected, const SplitSystem& system,
                             const TrichotomyRates& rates, const LyapunovNormFamily& forward,
                             const LyapunovNormFamily& backward, const std::vector<double>& grid, int samples,
                             std::uint64_t seed, double tol)
{
    require_same_source(system, forward, backward);
    require_time_grid(grid);
    if (samples < 0) {
        throw ArgumentError("sample count must be nonnegative");
    }
    const int n = system.dimension();
    const Matrix vectors = basis_and_samples(n, samples, seed);
    const auto& fam = system.family();

    TheoremReport report;
    report.label = label;
    report.tags = unprojected ? std::vector<std::string>{"ht4", "kt4", "mut4", "nut4"}
                              : std::vector<std::string>{"ht3", "kt3", "mut3", "nut3"};
    report.tol = tol;
    report.slack = std::max(forward.horizon_sensitivity(), backward.horizon_sensitivity());
    report.samples = samples;
    report.seed = seed;

    const auto pairs = grid_pairs(grid);
    std::vector<PairCheck> results(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t i) {
        const auto [t, s] = pairs[i];
        const Matrix u = system.op()(t, s);
        const Matrix p1s = fam.member(1, s);
        const Matrix p3s = fam.member(3, s);
        const Matrix p2t = fam.member(2, t);
        const Matrix p3t = fam.member(3, t);
        const Matrix w2 = system.v2()(t, s);
        const Matrix w3 = system.v3()(t, s);
        const std::array<double, 4> scale{rates.h.ratio(t, s), rates.k.ratio(t, s), rates.mu.ratio(s, t),
                                          rates.nu.ratio(s, t)};
        constexpr double inf = std::numeric_limits<double>::infinity();
        std::vector<TheoremRecord> worst;
        for (std::size_t q = 0; q < 4; ++q) {
            worst.push_back({report.tags[q], t, s, -1, 0.0, 0.0, inf});
        }
        for (Eigen::Index v = 0; v < vectors.cols(); ++v) {
            const Vector x = vectors.col(v);
            const int id = static_cast<int>(v);
            const double l_h = scale[0] * forward(t, u * (p1s * x));
            const double r_h = unprojected ? forward(s, x) : forward(s, p1s * x);
            const double l_k = scale[1] * backward(s, w2 * x);
            const double r_k = unprojected ? backward(t, x) : backward(t, p2t * x);
            const double l_mu = scale[2] * forward(t, u * (p3s * x));
            const double r_mu = unprojected ? forward(s, x) : forward(s, p3s * x);
            const double l_nu = scale[3] * backward(s, w3 * x);
            const double r_nu = unprojected ? backward(t, x) : backward(t, p3t * x);
            const std::array<std::pair<double, double>, 4> sides{
                {{l_h, r_h}, {l_k, r_k}, {l_mu, r_mu}, {l_nu, r_nu}}};
            for (std::size_t q = 0; q < 4; ++q) {
                const auto [lhs, rhs] = sides[q];
                keep_worst(worst[q], {report.tags[q], t, s, id, lhs, rhs, relative_margin(lhs, rhs)});
            }
        }
        results[i].records = std::move(worst);
    });
    for (auto& r : results) {
        for (auto& rec : r.records) {
            report.records.push_back(std::move(rec));
        }
    }

    if (unprojected) {
        const std::array<std::string, 6> lemma_tags{"lemma_fwd_P1", "lemma_fwd_P2", "lemma_fwd_P3",
                                                    "lemma_bwd_P1", "lemma_bwd_P2", "lemma_bwd_P3"};
        report.tags.insert(report.tags.end(), lemma_tags.begin(), lemma_tags.end());
        std::vector<PairCheck> lemma(grid.size());
        parallel_for(grid.size(), [&](std::size_t i) {
            const double t = grid[i];
            std::vector<TheoremRecord> worst;
            for (const auto& tag : lemma_tags) {
                worst.push_back({tag, t, t, -1, 0.0, 0.0, std::numeric_limits<double>::infinity()});
            }
            const std::array<Matrix, 3> p{fam.member(1, t), fam.member(2, t), fam.member(3, t)};
            for (Eigen::Index v = 0; v < vectors.cols(); ++v) {
                const Vector x = vectors.col(v);
                const double fx = forward(t, x);
                const double bx = backward(t, x);
                for (std::size_t q = 0; q < 3; ++q) {
                    const double lf = forward(t, p[q] * x);
                    const double lb = backward(t, p[q] * x);
                    keep_worst(worst[q], {lemma_tags[q], t, t, static_cast<int>(v), lf, fx, relative_margin(lf, fx)});
                    keep_worst(worst[q + 3],
                               {lemma_tags[q + 3], t, t, static_cast<int>(v), lb, bx, relative_margin(lb, bx)});
                }
            }
            lemma[i].records = std::move(worst);
        });
        for (auto& r : lemma) {
            for (auto& rec : r.records) {
                report.records.push_back(std::move(rec));
            }
        }
    }

    for (const auto& tag : report.tags) {
        double w = std::numeric_limits<double>::infinity();
        for (const auto& rec : report.records) {
            if (rec.tag == tag && (std::isnan(rec.margin) || rec.margin < w)) {
                w = rec.margin;
            }
        }
        report.worst_margin.emplace_back(tag, w);
    }
    report.pass = true;
    for (const auto& [tag, w] : report.worst_margin) {
        if (!(w >= -(tol + report.slack))) {
            report.pass = false;
        }
    }
    if (forward.horizon_flagged() || backward.horizon_flagged()) {
        report.notes.push_back("horizon sensitivity above limit; truncation slack is large");
    }
    return report;
}

} // namespace

std::string to_string(NormVariant v)
{
    return v == NormVariant::forward_central ? "forward_central" : "backward_central";
}

std::string to_string(CorollaryKind kind)
{
    return kind == CorollaryKind::exponential ? "exponential" : "polynomial";
}

LyapunovNormFamily::LyapunovNormFamily(NormVariant variant, std::shared_ptr<const SplitSystem> system,
                                       TrichotomyRates rates, NormSampling sampling)
    : variant_(variant), system_(std::move(system)), rates_(std::move(rates)), sampling_(sampling)
{
}

Matrix LyapunovNormFamily::forward_step(std::size_t i) const
{
    if (i < forward_steps_.size()) {
        return forward_steps_[i];
    }
    const double d = sampling_.resolution;
    return system_->op()(static_cast<double>(i + 1) * d, static_cast<double>(i) * d);
}

Matrix LyapunovNormFamily::inverse_step(int j, std::size_t i) const
{
    const auto& steps = inverse_steps_[static_cast<std::size_t>(j - 2)];
    if (i < steps.size()) {
        return steps[i];
    }
    const double d = sampling_.resolution;
    const auto& inv = j == 2 ? system_->v2() : system_->v3();
    return inv(static_cast<double>(i + 1) * d, static_cast<double>(i) * d);
}

LyapunovNormFamily::Terms LyapunovNormFamily::terms_at(double t) const
{
    if (!(t >= 0.0)) {
        throw DomainError("norm evaluated at negative time");
    }
    const double d = sampling_.resolution;
    const double horizon = sampling_.horizon;
    const int n = dimension();
    const auto& fam = system_->family();
    const auto& op = system_->op();
    const Matrix p1 = fam.member(1, t);
    const Matrix p2 = fam.member(2, t);
    const Matrix p3 = fam.member(3, t);
    const bool forward_variant = variant_ == NormVariant::forward_central;
    const long on = lattice_index(t, d);

    Terms terms;

    // future: tau_0 = t, then lattice points in (t, t + 2 horizon]
    const long first = on >= 0 ? on + 1 : floor_index(t, d) + 1;
    std::vector<double> taus{t};
    for (long j = first; static_cast<double>(j) * d <= t + 2.0 * horizon + kLatticeSnap * std::max(1.0, t); ++j) {
        taus.push_back(static_cast<double>(j) * d);
    }
    const auto blocks = static_cast<Eigen::Index>(taus.size());
    terms.future_cut = 0;
    for (double tau : taus) {
        if (tau <= t + horizon + kLatticeSnap * std::max(1.0, t)) {
            ++terms.future_cut;
        }
    }
    terms.future_stable.resize(blocks * n, n);
    if (forward_variant) {
        terms.future_central.resize(blocks * n, n);
    }
    Matrix g = Matrix::Identity(n, n);
    for (Eigen::Index m = 0; m < blocks; ++m) {
        const double tau = taus[static_cast<std::size_t>(m)];
        if (m == 1) {
            g = on >= 0 ? forward_step(static_cast<std::size_t>(on)) : op(tau, t);
        } else if (m > 1) {
            g = forward_step(static_cast<std::size_t>(first + m - 2)) * g;
        }
        terms.future_stable.middleRows(m * n, n) = rates_.h.ratio(tau, t) * (g * p1);
        if (forward_variant) {
            terms.future_central.middleRows(m * n, n) = rates_.mu.ratio(t, tau) * (g * p3);
        }
    }

    // past: r_0 = t, then lattice points in [0, t) in decreasing order
    const long below = on >= 0 ? on - 1 : floor_index(t, d);
    std::vector<double> rs{t};
    for (long j = below; j >= 0; --j) {
        rs.push_back(static_cast<double>(j) * d);
    }
    const auto past_blocks = static_cast<Eigen::Index>(rs.size());
    terms.past_unstable.resize(past_blocks * n, n);
    if (!forward_variant) {
        terms.past_central.resize(past_blocks * n, n);
    }
    Matrix w2 = p2;
    Matrix w3 = p3;
    for (Eigen::Index m = 0; m < past_blocks; ++m) {
        const double r = rs[static_cast<std::size_t>(m)];
        if (m == 1) {
            if (on >= 0) {
                w2 = inverse_step(2, static_cast<std::size_t>(below));
                w3 = forward_variant ? w3 : inverse_step(3, static_cast<std::size_t>(below));
            } else {
                w2 = system_->v2()(t, r);
                w3 = forward_variant ? w3 : system_->v3()(t, r);
            }
        } else if (m > 1) {
            const auto idx = static_cast<std::size_t>(below - (m - 1));
            w2 = inverse_step(2, idx) * w2;
            if (!forward_variant) {
                w3 = inverse_step(3, idx) * w3;
            }
        }
        terms.past_unstable.middleRows(m * n, n) = rates_.k.ratio(t, r) * w2;
        if (!forward_variant) {
            terms.past_central.middleRows(m * n, n) = rates_.nu.ratio(r, t) * w3;
        }
    }
    return terms;
}

const LyapunovNormFamily::Terms* LyapunovNormFamily::cached(double t) const
{
    const long on = lattice_index(t, sampling_.resolution);
    if (on >= 0 && static_cast<std::size_t>(on) < cache_.size()) {
        return &cache_[static_cast<std::size_t>(on)];
    }
    return nullptr;
}

double LyapunovNormFamily::evaluate_terms(const Terms& terms, const Vector& x, bool extended) const
{
    const int n = dimension();
    if (x.size() != n) {
        throw StructuralError("norm evaluated on a vector of the wrong dimension");
    }
    const Eigen::Index future = extended ? terms.future_stable.rows() / n : terms.future_cut;
    double value = block_max(terms.future_stable, future, n, x);
    value += block_max(terms.past_unstable, terms.past_unstable.rows() / n, n, x);
    if (variant_ == NormVariant::forward_central) {
        value += block_max(terms.future_central, future, n, x);
    } else {
        value += block_max(terms.past_central, terms.past_central.rows() / n, n, x);
    }
    return value;
}

double LyapunovNormFamily::evaluate(double t, const Vector& x) const
{
    if (const Terms* c = cached(t)) {
        return evaluate_terms(*c, x, false);
    }
    return evaluate_terms(terms_at(t), x, false);
}

double LyapunovNormFamily::evaluate_extended(double t, const Vector& x) const
{
    if (const Terms* c = cached(t)) {
        return evaluate_terms(*c, x, true);
    }
    return evaluate_terms(terms_at(t), x, true);
}

LyapunovNormFamily build_norm_family(NormVariant variant, const SplitSystem& system, const TrichotomyRates& rates,
                                     const NormSampling& sampling)
{
    if (!(sampling.horizon > 0.0) || !std::isfinite(sampling.horizon)) {
        throw ArgumentError("norm horizon must be positive");
    }
    if (!(sampling.resolution > 0.0) || !std::isfinite(sampling.resolution)) {
        throw ArgumentError("norm resolution must be positive");
    }
    if (!(sampling.t_max >= 0.0) || !std::isfinite(sampling.t_max)) {
        throw ArgumentError("norm t_max must be nonnegative");
    }
    if (sampling.samples < 0) {
        throw ArgumentError("sample count must be nonnegative");
    }
    LyapunovNormFamily family(variant, std::make_shared<const SplitSystem>(system), rates, sampling);
    const double d = sampling.resolution;

    const auto cached_points = static_cast<std::size_t>(std::floor(sampling.t_max / d + kLatticeSnap)) + 1;
    const auto forward_count =
        static_cast<std::size_t>(std::ceil((sampling.t_max + 2.0 * sampling.horizon) / d)) + 2;
    family.forward_steps_.resize(forward_count);
    parallel_for(forward_count, [&](std::size_t i) {
        family.forward_steps_[i] = system.op()(static_cast<double>(i + 1) * d, static_cast<double>(i) * d);
    });
    for (int j = 2; j <= 3; ++j) {
        if (j == 3 && variant == NormVariant::forward_central) {
            continue;
        }
        auto& steps = family.inverse_steps_[static_cast<std::size_t>(j - 2)];
        steps.resize(cached_points + 1);
        const auto& inv = j == 2 ? system.v2() : system.v3();
        parallel_for(steps.size(), [&](std::size_t i) {
            steps[i] = inv(static_cast<double>(i + 1) * d, static_cast<double>(i) * d);
        });
    }

    std::vector<LyapunovNormFamily::Terms> cache(cached_points);
    parallel_for(cached_points, [&](std::size_t i) { cache[i] = family.terms_at(static_cast<double>(i) * d); });
    family.cache_ = std::move(cache);

    const Matrix vectors = basis_and_samples(system.dimension(), sampling.samples, sampling.seed);
    double sensitivity = 0.0;
    for (std::size_t i = 0; i < family.cache_.size(); ++i) {
        for (Eigen::Index v = 0; v < vectors.cols(); ++v) {
            const Vector x = vectors.col(v);
            const double base = family.evaluate_terms(family.cache_[i], x, false);
            const double ext = family.evaluate_terms(family.cache_[i], x, true);
            if (ext > 0.0) {
                sensitivity = std::max(sensitivity, (ext - base) / ext);
            }
        }
    }
    family.sensitivity_ = sensitivity;
    return family;
}

CompatibilityReport check_compatibility(const LyapunovNormFamily& norms, const std::vector<double>& grid,
                                        int samples, std::uint64_t seed, double tol,
                                        const TrichotomyReport* reference)
{
    require_time_grid(grid);
    if (samples < 0) {
        throw ArgumentError("sample count must be nonnegative");
    }
    CompatibilityReport report;
    report.grid = grid;
    report.samples = samples;
    report.seed = seed;
    const Matrix vectors = basis_and_samples(norms.dimension(), samples, seed);
    report.c.assign(grid.size(), 0.0);
    std::vector<double> lower(grid.size(), std::numeric_limits<double>::infinity());
    parallel_for(grid.size(), [&](std::size_t i) {
        for (Eigen::Index v = 0; v < vectors.cols(); ++v) {
            const Vector x = vectors.col(v);
            const double value = norms(grid[i], x);
            const double len = x.norm();
            report.c[i] = std::max(report.c[i], value / len);
            lower[i] = std::min(lower[i], value - len);
        }
    });
    report.lower_margin = *std::min_element(lower.begin(), lower.end());
    report.c_envelope.resize(grid.size());
    double running = 1.0;
    bool finite = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        finite = finite && std::isfinite(report.c[i]);
        running = std::max(running, report.c[i]);
        report.c_envelope[i] = running;
    }
    report.uniform_c = running;
    report.pass = finite && report.lower_margin >= -tol;
    if (reference) {
        report.cross_checked = true;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double ratio = report.c[i] / (3.0 * reference->envelope_at(grid[i]));
            report.cross_check_ratio = std::max(report.cross_check_ratio, ratio);
        }
        report.cross_check_pass = report.cross_check_ratio <= 1.0 + 1e-9;
    }
    return report;
}

double TheoremReport::worst(const std::string& tag) const
{
    for (const auto& [key, value] : worst_margin) {
        if (key == tag) {
            return value;
        }
    }
    return std::numeric_limits<double>::infinity();
}

TheoremReport verify_main_theorem(const SplitSystem& system, const TrichotomyRates& rates,
                                  const LyapunovNormFamily& forward, const LyapunovNormFamily& backward,
                                  const std::vector<double>& grid, int samples, std::uint64_t seed, double tol)
{
    return verify_theorem("main_theorem", false, system, rates, forward, backward, grid, samples, seed, tol);
}

TheoremReport verify_unprojected_theorem(const SplitSystem& system, const TrichotomyRates& rates,
                                         const LyapunovNormFamily& forward, const LyapunovNormFamily& backward,
                                         const std::vector<double>& grid, int samples, std::uint64_t seed,
                                         double tol)
{
    return verify_theorem("unprojected_theorem", true, system, rates, forward, backward, grid, samples, seed, tol);
}

SufficiencyReport verify_sufficiency(const SplitSystem& system, const TrichotomyRates& rates,
                                     const LyapunovNormFamily& forward, const LyapunovNormFamily& backward,
                                     const std::vector<double>& grid, int samples, std::uint64_t seed)
{
    require_same_source(system, forward, backward);
    const auto fwd = check_compatibility(forward, grid, samples, seed);
    const auto bwd = check_compatibility(backward, grid, samples, seed);

    SufficiencyReport report;
    report.grid = grid;
    report.slack = std::max(forward.horizon_sensitivity(), backward.horizon_sensitivity());
    report.c.resize(grid.size());
    report.projector_norm_sum.resize(grid.size());
    report.candidate.resize(grid.size());
    double running = 1.0;
    double sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        running = std::max({running, fwd.c[i], bwd.c[i]});
        report.c[i] = running;
        double sum = 0.0;
        for (int j = 1; j <= 3; ++j) {
            sum += spectral_norm(system.family().member(j, grid[i]));
        }
        report.projector_norm_sum[i] = sum;
        sup = std::max(sup, running * sum);
        report.candidate[i] = std::max(1.0, sup * (1.0 + report.slack));
    }
    const auto grid_copy = grid;
    const auto values = report.candidate;
    BoundFunction bound = [grid_copy, values](double a) {
        const auto it = std::upper_bound(grid_copy.begin(), grid_copy.end(), a);
        return it == grid_copy.begin() ? values.front() : values[static_cast<std::size_t>(it - grid_copy.begin()) - 1];
    };
    report.definition5 = check_definition5(system, rates, grid, bound);
    report.pass = fwd.pass && bwd.pass && report.definition5.verdict == Verdict::pass;
    return report;
}

UniformTheoremReport verify_uniform_theorem(const SplitSystem& system, const TrichotomyRates& rates,
                                            const LyapunovNormFamily& forward, const LyapunovNormFamily& backward,
                                            const std::vector<double>& grid, int samples, std::uint64_t seed,
                                            double tol, std::optional<double> constant)
{
    UniformTheoremReport report;
    report.uniform = check_uniform(system, rates, grid, constant);
    report.n_constant = constant ? *constant : report.uniform.uniform_constant;
    report.forward = check_compatibility(forward, grid, samples, seed);
    report.backward = check_compatibility(backward, grid, samples, seed);
    report.c = std::max(report.forward.uniform_c, report.backward.uniform_c);
    report.theorem = verify_main_theorem(system, rates, forward, backward, grid, samples, seed, tol);
    report.pass = report.uniform.verdict != Verdict::fail && report.forward.pass && report.backward.pass &&
                  report.c <= 3.0 * report.n_constant * (1.0 + 1e-9) && report.theorem.pass;
    return report;
}

TrichotomyRates corollary_rates(CorollaryKind kind, const std::array<double, 4>& exponents)
{
    for (double e : exponents) {
        if (!(e > 0.0) || !std::isfinite(e)) {
            throw ArgumentError("corollary exponents must be positive");
        }
    }
    auto make = [kind](double e) {
        return kind == CorollaryKind::exponential ? GrowthRate::exponential(e) : GrowthRate::polynomial(e);
    };
    return {make(exponents[0]), make(exponents[1]), make(exponents[2]), make(exponents[3])};
}

TheoremReport instantiate_corollaries(CorollaryKind kind, const std::array<double, 4>& exponents,
                                      const SplitSystem& system, const NormSampling& sampling,
                                      const std::vector<double>& grid, double tol)
{
    const auto rates = corollary_rates(kind, exponents);
    const auto forward = build_norm_family(NormVariant::forward_central, system, rates, sampling);
    const auto backward = build_norm_family(NormVariant::backward_central, system, rates, sampling);
    auto report =
        verify_main_theorem(system, rates, forward, backward, grid, sampling.samples, sampling.seed, tol);

    const char* prefix = kind == CorollaryKind::exponential ? "et" : "pt";
    std::vector<std::string> renamed;
    for (std::size_t q = 0; q < 4; ++q) {
        renamed.push_back(prefix + std::to_string(q + 1));
    }
    for (auto& rec : report.records) {
        const auto q = static_cast<std::size_t>(
            std::find(report.tags.begin(), report.tags.end(), rec.tag) - report.tags.begin());
        // divide the rate quotient back out: lhs becomes the bare norm, rhs carries the
        // corollary's e^{-alpha(t-s)} or ((s+1)/(t+1))^alpha style factor
        double quotient = 1.0;
        switch (q) {
        case 0: quotient = rates.h.ratio(rec.t, rec.s); break;
        case 1: quotient = rates.k.ratio(rec.t, rec.s); break;
        case 2: quotient = rates.mu.ratio(rec.s, rec.t); break;
        default: quotient = rates.nu.ratio(rec.s, rec.t); break;
        }
        rec.lhs /= quotient;
        rec.rhs /= quotient;
        rec.tag = renamed[q];
    }
    for (std::size_t q = 0; q < 4; ++q) {
        report.worst_margin[q].first = renamed[q];
    }
    report.tags = renamed;
    report.label = "corollary_" + to_string(kind);
    return report;
}

} // namespace tricho
