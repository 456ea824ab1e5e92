// Command-line runner: one scenario file in, one report directory out.

#include "tricho/errors.hpp"
#include "tricho/report_io.hpp"
#include "tricho/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

int main(int argc, char** argv)
{
    CLI::App app{"Numerical trichotomy checker for linear evolution operators"};

    std::string scenario_path;
    std::string out_dir = "tricho-out";
    std::string format = "json";
    std::optional<double> grid_max;
    std::optional<double> grid_step;
    std::optional<double> horizon;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;

    app.add_option("--scenario", scenario_path, "Scenario file (JSON)")->required();
    app.add_option("--out", out_dir, "Output directory")->capture_default_str();
    app.add_option("--format", format, "json, csv or both")->capture_default_str();
    app.add_option("--grid-max", grid_max, "Override grid.t_max");
    app.add_option("--grid-step", grid_step, "Override grid.step");
    app.add_option("--horizon", horizon, "Override the norm horizon");
    app.add_option("--tol", tol, "Override tolerances.theorem");
    app.add_option("--seed", seed, "Override the sampling seed");

    CLI11_PARSE(app, argc, argv);

    try {
        const auto fmt = tricho::parse_format(format);
        auto doc = tricho::load_scenario_json(scenario_path);
        tricho::apply_overrides(doc, {grid_max, grid_step, horizon, tol, seed});
        const auto scenario = tricho::parse_scenario_json(doc);

        const auto report = tricho::run(scenario);
        tricho::emit(report, fmt, out_dir);

        for (const auto& c : report.checks) {
            std::cout << c.name << ": " << tricho::to_string(c.status);
            if (!c.message.empty()) {
                std::cout << " (" << c.message << ")";
            }
            std::cout << '\n';
        }
        std::cout << "overall: " << tricho::to_string(report.overall) << '\n';
        std::fprintf(stderr, "elapsed %.3f s\n", report.elapsed_seconds);
        return report.exit_code;
    } catch (const tricho::ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return 2;
    } catch (const tricho::ArgumentError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const tricho::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
