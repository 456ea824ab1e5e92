#pragma once

#include "tricho/evolution.hpp"
#include "tricho/invariance.hpp"
#include "tricho/lyapunov_norms.hpp"
#include "tricho/trichotomy.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace tricho {

/// Check names in the order they are executed.
inline const std::vector<std::string>& known_checks()
{
    static const std::vector<std::string> names{
        "orthogonality", "cocycle", "invariance", "compatibility", "def5",     "prop8",
        "uniform",       "dichotomy", "norms",    "main_theorem",  "unprojected_theorem", "corollary"};
    return names;
}

struct OperatorSpec {
    enum class Type { paper_example, ode };
    Type type = Type::paper_example;
    /// ode only: either a builtin name or a constant row-major matrix.
    std::string builtin;
    Matrix constant;
    double step = 1e-3;
};

struct ProjectorSpec {
    enum class Type { coordinate_split, explicit_matrices };
    Type type = Type::coordinate_split;
    std::array<int, 3> blocks{0, 0, 0};
    std::array<Matrix, 3> matrices;
};

struct AffineBound {
    double intercept = 1.0;
    double slope = 0.0;
};

struct CorollarySpec {
    CorollaryKind kind = CorollaryKind::exponential;
    std::array<double, 4> exponents{1.0, 1.0, 1.0, 1.0};
};

struct Scenario {
    int dimension = 0;
    OperatorSpec op;
    ProjectorSpec projectors;
    /// Placeholders until parsed.
    TrichotomyRates rates{GrowthRate::exponential(1.0), GrowthRate::exponential(1.0), GrowthRate::exponential(1.0),
                          GrowthRate::exponential(1.0)};
    /// Rates of the closed-form example operator (may differ from the checked rates).
    std::optional<ExampleRates> example_rates;
    double t_max = 0.0;
    double step = 0.0;
    double horizon = 10.0;
    double resolution = 0.0;
    double structural_tol = 1e-10;
    double theorem_tol = 1e-9;
    std::uint64_t seed = 1;
    int samples = 32;
    std::vector<std::string> checks;
    std::optional<AffineBound> definition5_bound;
    std::optional<double> uniform_constant;
    std::optional<CorollarySpec> corollary;
    /// Effective scenario document, echoed into reports.
    nlohmann::json source;

    std::vector<double> grid() const;
    NormSampling sampling() const;
};

struct ScenarioOverrides {
    std::optional<double> grid_max;
    std::optional<double> grid_step;
    std::optional<double> horizon;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
};

/// Reads the JSON document; ParseError on I/O or syntax problems.
nlohmann::json load_scenario_json(const std::filesystem::path& path);
/// Writes override values into the document before validation.
void apply_overrides(nlohmann::json& doc, const ScenarioOverrides& overrides);
/// Validates and converts; ParseError names the offending key.
Scenario parse_scenario_json(const nlohmann::json& doc);
Scenario parse_scenario(const std::filesystem::path& path);

/// Generator behind a named builtin ("zero", "rotation", "split_oscillating").
std::function<Matrix(double)> builtin_generator(const std::string& name, int n, const std::array<int, 3>& blocks);

ProjectorFamily build_family(const Scenario& scenario);
SplitSystem build_system(const Scenario& scenario);

} // namespace tricho
