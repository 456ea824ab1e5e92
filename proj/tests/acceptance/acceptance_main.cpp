// Acceptance runner: prints one PASS/FAIL line per criterion, exits nonzero on any FAIL.

#include "support.hpp"

#include "tricho/linalg.hpp"
#include "tricho/report_io.hpp"
#include "tricho/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <string>

using namespace tricho;
using namespace tricho::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

NormSampling example_sampling()
{
    NormSampling s;
    s.horizon = 10.0;
    s.resolution = 0.5;
    s.t_max = 10.0;
    s.samples = 32;
    s.seed = 1;
    return s;
}

// Structural residuals on the coordinate split and the example operator.
Outcome ac1()
{
    Outcome o;
    const auto grid = uniform_grid(10.0, 0.5);
    const auto ortho = check_orthogonal(ProjectorFamily::coordinate_split(1, 1, 1), grid, 1e-12);
    o.require(ortho.pass, "orthogonality worst " + fmt("%.3g", ortho.worst()));
    for (bool nonuniform : {false, true}) {
        const auto sys = example_system(nonuniform);
        const auto e1 = check_identity(sys.op(), grid, 1e-12);
        const auto e2 = check_cocycle(sys.op(), grid_triples(grid), 1e-12);
        o.require(e1.pass, "e1 " + fmt("%.3g", e1.worst()));
        o.require(e2.pass, "e2 " + fmt("%.3g", e2.worst()));
        if (nonuniform) {
            o.detail += "e2 worst " + fmt("%.3g", e2.worst());
        }
    }
    return o;
}

std::vector<std::array<double, 3>> sampled_triples(double t_max, int count, std::uint64_t seed)
{
    std::mt19937_64 gen(seed);
    std::vector<std::array<double, 3>> out;
    for (int i = 0; i < count; ++i) {
        std::array<double, 3> v{};
        for (auto& x : v) {
            x = t_max * static_cast<double>(gen() >> 11) * 0x1.0p-53;
        }
        std::sort(v.begin(), v.end(), std::greater<>());
        out.push_back(v);
    }
    return out;
}

// Restricted-inverse axioms on the example and on an ODE block-diagonal operator.
Outcome ac2()
{
    Outcome o;
    const auto triples = sampled_triples(5.0, 50, 2024);
    std::vector<std::pair<double, double>> pairs;
    for (const auto& [t, s, q] : triples) {
        pairs.emplace_back(t, s);
        pairs.emplace_back(s, q);
    }
    auto check_system = [&](const SplitSystem& sys, const std::string& name) {
        for (int j : {2, 3}) {
            const auto r = check_inverse_axioms(sys, j, pairs, triples, 1e-10);
            o.require(r.pass, name + " j=" + std::to_string(j) + " worst " + fmt("%.3g", r.worst()));
        }
    };
    check_system(example_system(true), "example");

    GeneratorSpec spec;
    spec.dimension = 4;
    spec.step = 1e-3;
    spec.generator = builtin_generator("split_oscillating", 4, {1, 2, 1});
    const auto family = ProjectorFamily::coordinate_split(1, 2, 1);
    const SplitSystem ode(from_generator(spec, uniform_grid(5.0, 0.5)), family);
    check_system(ode, "ode");
    o.detail += o.pass ? "50 triples, both systems" : "";
    return o;
}

// The worked example is nonuniform but not uniform.
Outcome ac3()
{
    Outcome o;
    const auto sys = example_system(true);
    const auto rates = example_rates();
    const auto d5 = check_definition5(sys, rates, uniform_grid(20.0, 0.5), [](double a) { return 3.0 * (a + 1.0); });
    o.require(d5.verdict == Verdict::pass, "definition5 with 3(a+1) did not pass");
    for (double t_max : {5.0, 10.0, 20.0}) {
        const auto u = check_uniform(sys, rates, uniform_grid(t_max, 0.5));
        o.require(u.uniform_constant >= t_max + 0.9, "uniform constant " + fmt("%.6g", u.uniform_constant) +
                                                         " below T+0.9 for T=" + fmt("%g", t_max));
        o.detail += (o.detail.empty() ? "" : ", ") + fmt("T=%g: ", t_max) + fmt("%.6g", u.uniform_constant);
    }
    return o;
}

struct NormPair {
    LyapunovNormFamily forward;
    LyapunovNormFamily backward;
};

NormPair build_pair(const SplitSystem& sys)
{
    return {build_norm_family(NormVariant::forward_central, sys, example_rates(), example_sampling()),
            build_norm_family(NormVariant::backward_central, sys, example_rates(), example_sampling())};
}

// Constant-free inequalities for the Lyapunov norms on both example variants.
Outcome ac4()
{
    Outcome o;
    const auto grid = uniform_grid(10.0, 0.5);
    for (bool nonuniform : {false, true}) {
        const auto sys = example_system(nonuniform);
        const auto norms = build_pair(sys);
        const double sens = std::max(norms.forward.horizon_sensitivity(), norms.backward.horizon_sensitivity());
        o.require(sens < kHorizonSensitivityLimit, "horizon sensitivity " + fmt("%.3g", sens));
        const auto r = verify_main_theorem(sys, example_rates(), norms.forward, norms.backward, grid, 32, 1, 1e-9);
        double worst = 1.0;
        for (const auto& [tag, w] : r.worst_margin) {
            worst = std::min(worst, w);
        }
        o.require(r.pass && worst >= -(1e-9 + r.slack), "worst margin " + fmt("%.3g", worst));
        o.detail += (o.detail.empty() ? "" : ", ") + std::string(nonuniform ? "u=t+1" : "u=1") + " worst margin " +
                    fmt("%.3g", worst) + " slack " + fmt("%.3g", r.slack);
    }
    return o;
}

// N rebuilt from the measured compatibility function makes the projected trichotomy check pass.
Outcome ac5()
{
    Outcome o;
    const auto grid = uniform_grid(10.0, 0.5);
    for (bool nonuniform : {false, true}) {
        const auto sys = example_system(nonuniform);
        const auto norms = build_pair(sys);
        const auto r = verify_sufficiency(sys, example_rates(), norms.forward, norms.backward, grid, 32, 1);
        o.require(r.pass, std::string(nonuniform ? "u=t+1" : "u=1") + " sufficiency failed");
        o.detail += (o.detail.empty() ? "" : ", ") + std::string(nonuniform ? "u=t+1" : "u=1") + " max N " +
                    fmt("%.6g", *std::max_element(r.candidate.begin(), r.candidate.end()));
    }
    return o;
}

// Uniform case: c <= 3, inequalities hold, classified uniform with constant <= 3.
Outcome ac6()
{
    Outcome o;
    const auto grid = uniform_grid(10.0, 0.5);
    const auto sys = example_system(false);
    const auto norms = build_pair(sys);
    const auto r = verify_uniform_theorem(sys, example_rates(), norms.forward, norms.backward, grid, 32, 1, 1e-9);
    o.require(r.pass, "uniform theorem failed");
    o.require(r.c <= 3.0, "c = " + fmt("%.6g", r.c));
    o.require(r.theorem.pass, "inequalities failed");
    const auto u = check_uniform(sys, example_rates(), grid, 3.0);
    o.require(u.verdict == Verdict::pass && u.uniform_constant <= 3.0, "uniform constant " + fmt("%.6g", u.uniform_constant));
    o.require(u.classification.rfind("uniform", 0) == 0, "classification '" + u.classification + "'");
    o.detail += "c = " + fmt("%.6g", r.c) + ", N = " + fmt("%.6g", u.uniform_constant);
    return o;
}

// Exponential and polynomial corollaries, and the dichotomy special case.
Outcome ac7()
{
    Outcome o;
    const auto grid = uniform_grid(10.0, 0.5);
    const auto family = ProjectorFamily::coordinate_split(1, 1, 1);
    const std::array<double, 4> ex{1.0, 2.0, 0.5, 0.25};
    const auto er = instantiate_corollaries(CorollaryKind::exponential, ex, example_system(false), example_sampling(),
                                            grid, 1e-9);
    o.require(er.pass, "exponential corollary failed");

    const std::array<double, 4> px{1.0, 1.0, 1.0, 1.0};
    const auto pr_rates = corollary_rates(CorollaryKind::polynomial, px);
    const SplitSystem poly(
        paper_example({GrowthRate::unit(1000.0), pr_rates.h, pr_rates.k, pr_rates.mu, pr_rates.nu}, family), family);
    const auto pr = instantiate_corollaries(CorollaryKind::polynomial, px, poly, example_sampling(), grid, 1e-9);
    o.require(pr.pass, "polynomial corollary failed");

    const auto fam2 = ProjectorFamily::coordinate_split(1, 1, 0);
    const auto r = example_rates();
    const SplitSystem dich_sys(paper_example({GrowthRate::polynomial(1.0), r.h, r.k, r.mu, r.nu}, fam2), fam2);
    const auto d = check_dichotomy(dich_sys, {r.h, r.k}, grid, [](double a) { return 3.0 * (a + 1.0); });
    o.require(d.verdict == Verdict::pass, "dichotomy did not pass");
    for (auto ineq : {Inequality::mu, Inequality::nu}) {
        const auto& row = d.per_inequality[static_cast<std::size_t>(ineq)];
        o.require(std::all_of(row.begin(), row.end(), [](double v) { return v == 0.0; }),
                  "dichotomy " + d.tag(ineq) + " row not vacuous");
    }
    o.detail += "exp worst " + fmt("%.3g", std::min({er.worst("et1"), er.worst("et2"), er.worst("et3"), er.worst("et4")})) +
                ", poly worst " + fmt("%.3g", std::min({pr.worst("pt1"), pr.worst("pt2"), pr.worst("pt3"), pr.worst("pt4")}));
    return o;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Every shipped scenario, run twice with the same seed, gives byte-identical reports.
Outcome ac8()
{
    Outcome o;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(TRICHO_SCENARIO_DIR)) {
        if (e.path().extension() == ".json") {
            files.push_back(e.path());
        }
    }
    std::sort(files.begin(), files.end());
    o.require(!files.empty(), "no scenarios found");
    const auto root = fs::temp_directory_path() / "tricho_acceptance_determinism";
    for (const auto& f : files) {
        const auto sc = parse_scenario(f);
        const auto a = root / f.stem() / "a";
        const auto b = root / f.stem() / "b";
        fs::remove_all(a);
        fs::remove_all(b);
        emit(run(sc), OutputFormat::both, a);
        emit(run(sc), OutputFormat::both, b);
        for (const char* name : {"report.json", "records.csv"}) {
            o.require(slurp(a / name) == slurp(b / name), f.filename().string() + ": " + name + " differs");
        }
    }
    o.detail += std::to_string(files.size()) + " scenarios";
    return o;
}

} // namespace

int main()
{
    struct Criterion {
        const char* id;
        const char* title;
        Outcome (*body)();
        double time_limit;
    };
    const Criterion criteria[] = {
        {"AC1", "structural residuals", ac1, 1.0},
        {"AC2", "restricted inverse axioms", ac2, 0.0},
        {"AC3", "example nonuniform but not uniform", ac3, 10.0},
        {"AC4", "main theorem necessity", ac4, 0.0},
        {"AC5", "main theorem sufficiency", ac5, 0.0},
        {"AC6", "uniform theorem", ac6, 0.0},
        {"AC7", "corollaries and dichotomy", ac7, 0.0},
        {"AC8", "determinism", ac8, 0.0},
    };

    int failures = 0;
    const auto suite_start = std::chrono::steady_clock::now();
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.time_limit > 0.0 && seconds >= c.time_limit) {
            o.pass = false;
            o.detail += fmt("; over time limit %.0f s", c.time_limit);
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %s: %s (%.2f s) %s\n", o.pass ? "PASS" : "FAIL", c.id, c.title, seconds, o.detail.c_str());
    }
    const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - suite_start).count();
    std::printf("%s suite runtime %.2f s (target < 60 s)\n", total < 60.0 ? "PASS" : "FAIL", total);
    return failures == 0 && total < 60.0 ? 0 : 1;
}
