#pragma once

#include "tricho/trichotomy.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tricho {

/// Relative change under horizon doubling above which a family is flagged.
inline constexpr double kHorizonSensitivityLimit = 1e-6;

/// Which norm of the characterization is built.
///   forward_central: |x|_t   = sup_{tau>=t} h-term + sup_{r<=t} k-term + sup_{tau>=t} mu-term
///   backward_central: |||x|||_t = same first two terms + sup_{r<=t} nu-term
enum class NormVariant { forward_central, backward_central };

std::string to_string(NormVariant v);

/// How the suprema are sampled.
///
/// Future suprema run over {t} and lattice points k*resolution in (t, t+horizon];
/// past suprema over {t} and lattice points in [0, t). Lattice times up to t_max
/// are precomputed at build time.
struct NormSampling {
    double horizon = 10.0;
    double resolution = 0.5;
    double t_max = 10.0;
    int samples = 32;
    std::uint64_t seed = 0x5eed;
};

/// A time-indexed norm family built from (U, P) and the rates.
class LyapunovNormFamily {
public:
    NormVariant variant() const noexcept { return variant_; }
    const NormSampling& sampling() const noexcept { return sampling_; }
    const SplitSystem& system() const noexcept { return *system_; }
    int dimension() const noexcept { return system_->dimension(); }

    /// The norm of x at time t, future suprema truncated at t + horizon.
    double evaluate(double t, const Vector& x) const;
    double operator()(double t, const Vector& x) const { return evaluate(t, x); }
    /// Same with the future suprema running to t + 2 horizon.
    double evaluate_extended(double t, const Vector& x) const;

    /// Max relative change of sampled values when the horizon is doubled.
    double horizon_sensitivity() const noexcept { return sensitivity_; }
    bool horizon_flagged() const noexcept { return sensitivity_ >= kHorizonSensitivityLimit; }

    friend LyapunovNormFamily build_norm_family(NormVariant variant, const SplitSystem& system,
                                                const TrichotomyRates& rates, const NormSampling& sampling);

private:
    /// Stacked term matrices at one time: block m of a stack is the m-th sampled operator.
    struct Terms {
        Matrix future_stable;
        Matrix future_central;
        Matrix past_unstable;
        Matrix past_central;
        Eigen::Index future_cut = 1;
    };

    LyapunovNormFamily(NormVariant variant, std::shared_ptr<const SplitSystem> system, TrichotomyRates rates,
                       NormSampling sampling);

    Terms terms_at(double t) const;
    const Terms* cached(double t) const;
    double evaluate_terms(const Terms& terms, const Vector& x, bool extended) const;
    Matrix forward_step(std::size_t i) const;
    Matrix inverse_step(int j, std::size_t i) const;

    NormVariant variant_;
    std::shared_ptr<const SplitSystem> system_;
    TrichotomyRates rates_;
    NormSampling sampling_;
    std::vector<Matrix> forward_steps_;
    std::array<std::vector<Matrix>, 2> inverse_steps_;
    std::vector<Terms> cache_;
    double sensitivity_ = 0.0;
};

/// Precomputes lattice step operators and the term stacks for lattice times <= t_max,
/// then measures horizon sensitivity on the basis plus `samples` random unit vectors.
LyapunovNormFamily build_norm_family(NormVariant variant, const SplitSystem& system, const TrichotomyRates& rates,
                                     const NormSampling& sampling);

struct CompatibilityReport {
    std::vector<double> grid;
    /// Estimated C(t) = max over sampled unit x of |x|_t.
    std::vector<double> c;
    std::vector<double> c_envelope;
    /// min over sampled (t, x) of |x|_t - |x|.
    double lower_margin = 0.0;
    /// max C(t) over the grid.
    double uniform_c = 1.0;
    int samples = 0;
    std::uint64_t seed = 0;
    bool pass = false;
    bool cross_checked = false;
    bool cross_check_pass = true;
    /// max over the grid of C(t) / (3 N1(t)).
    double cross_check_ratio = 0.0;
};

/// Lower bound |x| <= |x|_t checked on every sample; C(t) estimated from the same samples.
/// With a full-norm trichotomy report (check_proposition8), also checks C(t) <= 3 N1(t).
CompatibilityReport check_compatibility(const LyapunovNormFamily& norms, const std::vector<double>& grid,
                                        int samples, std::uint64_t seed, double tol = 1e-12,
                                        const TrichotomyReport* reference = nullptr);

struct TheoremRecord {
    std::string tag;
    double t;
    double s;
    /// Column of the basis-plus-samples matrix; the worst vector per (pair, tag) is kept.
    int vector_id;
    double lhs;
    double rhs;
    /// (rhs - lhs) / max(1, rhs).
    double margin;
};

struct TheoremReport {
    std::string label;
    std::vector<std::string> tags;
    std::vector<TheoremRecord> records;
    std::vector<std::pair<std::string, double>> worst_margin;
    double tol = 0.0;
    /// Horizon sensitivity of the norms; added to the tolerance.
    double slack = 0.0;
    int samples = 0;
    std::uint64_t seed = 0;
    bool pass = false;
    std::vector<std::string> notes;

    double worst(const std::string& tag) const;
};

/// Checks the constant-free inequalities
///   h(t)|U(t,s)P1(s)x|_t <= h(s)|P1(s)x|_s,     k(t)|||V2(t,s)P2(t)x|||_s <= k(s)|||P2(t)x|||_t,
///   mu(s)|U(t,s)P3(s)x|_t <= mu(t)|P3(s)x|_s,   nu(s)|||V3(t,s)P3(t)x|||_s <= nu(t)|||P3(t)x|||_t
/// on every grid pair and every basis-plus-sample vector.
TheoremReport verify_main_theorem(const SplitSystem& system, const TrichotomyRates& rates,
                                  const LyapunovNormFamily& forward, const LyapunovNormFamily& backward,
                                  const std::vector<double>& grid, int samples, std::uint64_t seed, double tol);

/// The same inequalities with |x|_s, |||x|||_t on the right, plus |P_i(t)x|_t <= |x|_t
/// and |||P_i(t)x|||_t <= |||x|||_t on every grid time.
TheoremReport verify_unprojected_theorem(const SplitSystem& system, const TrichotomyRates& rates,
                                         const LyapunovNormFamily& forward, const LyapunovNormFamily& backward,
                                         const std::vector<double>& grid, int samples, std::uint64_t seed,
                                         double tol);

struct SufficiencyReport {
    std::vector<double> grid;
    /// Measured C(t): larger of the two families, made nondecreasing.
    std::vector<double> c;
    std::vector<double> projector_norm_sum;
    /// N(t) = sup_{s<=t} C(s) (|P1(s)| + |P2(s)| + |P3(s)|), times (1 + slack).
    std::vector<double> candidate;
    double slack = 0.0;
    TrichotomyReport definition5;
    bool pass = false;
};

/// Rebuilds N from the measured compatibility functions and runs check_definition5 with it.
SufficiencyReport verify_sufficiency(const SplitSystem& system, const TrichotomyRates& rates,
                                     const LyapunovNormFamily& forward, const LyapunovNormFamily& backward,
                                     const std::vector<double>& grid, int samples, std::uint64_t seed);

struct UniformTheoremReport {
    TrichotomyReport uniform;
    CompatibilityReport forward;
    CompatibilityReport backward;
    /// max of the two uniform compatibility constants.
    double c = 1.0;
    /// constant N the norms are compared against (supplied or measured).
    double n_constant = 1.0;
    TheoremReport theorem;
    bool pass = false;
};

/// Uniform variant: constant N from check_uniform, c <= 3N, and the main inequalities.
UniformTheoremReport verify_uniform_theorem(const SplitSystem& system, const TrichotomyRates& rates,
                                            const LyapunovNormFamily& forward, const LyapunovNormFamily& backward,
                                            const std::vector<double>& grid, int samples, std::uint64_t seed,
                                            double tol, std::optional<double> constant = {});

enum class CorollaryKind { exponential, polynomial };

std::string to_string(CorollaryKind kind);

/// Four rates of one kind with exponents (alpha, beta, gamma, delta), all > 0.
TrichotomyRates corollary_rates(CorollaryKind kind, const std::array<double, 4>& exponents);

/// Builds the corollary rates and both norm families, runs the main theorem check and
/// re-expresses lhs/rhs in the corollary's form, e.g. |U(t,s)P1(s)x|_t <= e^{-alpha(t-s)} |P1(s)x|_s.
TheoremReport instantiate_corollaries(CorollaryKind kind, const std::array<double, 4>& exponents,
                                      const SplitSystem& system, const NormSampling& sampling,
                                      const std::vector<double>& grid, double tol);

} // namespace tricho
