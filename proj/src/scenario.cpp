#include "tricho/scenario.hpp"

#include "tricho/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace tricho {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& key, const std::string& what)
{
    throw ParseError("scenario key '" + key + "': " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& path)
{
    if (!obj.is_object() || !obj.contains(key)) {
        fail(path + key, "missing");
    }
    return obj.at(key);
}

double number(const json& v, const std::string& key)
{
    if (!v.is_number()) {
        fail(key, "expected a number");
    }
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
        fail(key, "must be finite");
    }
    return x;
}

double number_or(const json& obj, const std::string& key, const std::string& path, double fallback)
{
    if (!obj.contains(key)) {
        return fallback;
    }
    return number(obj.at(key), path + key);
}

GrowthRate parse_rate(const json& v, const std::string& key)
{
    if (!v.is_object()) {
        fail(key, "expected an object {kind, exponent} or {kind: tabulated, table}");
    }
    const auto& kind_v = require(v, "kind", key + ".");
    if (!kind_v.is_string()) {
        fail(key + ".kind", "expected a string");
    }
    const auto kind = kind_v.get<std::string>();
    try {
        if (kind == "exponential" || kind == "polynomial") {
            const double e = number(require(v, "exponent", key + "."), key + ".exponent");
            if (!(e > 0.0)) {
                fail(key + ".exponent", "must be positive");
            }
            return kind == "exponential" ? GrowthRate::exponential(e) : GrowthRate::polynomial(e);
        }
        if (kind == "tabulated") {
            const auto& table = require(v, "table", key + ".");
            if (!table.is_array() || table.empty()) {
                fail(key + ".table", "expected a nonempty list of [t, value] pairs");
            }
            std::vector<GrowthRate::Knot> knots;
            for (const auto& knot : table) {
                if (!knot.is_array() || knot.size() != 2) {
                    fail(key + ".table", "each knot must be a [t, value] pair");
                }
                knots.emplace_back(number(knot[0], key + ".table"), number(knot[1], key + ".table"));
            }
            return GrowthRate::tabulated(std::move(knots));
        }
    } catch (const ArgumentError& e) {
        fail(key, e.what());
    }
    fail(key + ".kind", "unknown rate kind '" + kind + "'");
}

Matrix parse_matrix(const json& v, int n, const std::string& key)
{
    if (!v.is_array()) {
        fail(key, "expected a row-major list of numbers");
    }
    if (v.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
        fail(key, "expected " + std::to_string(n * n) + " entries, got " + std::to_string(v.size()));
    }
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            m(i, j) = number(v[static_cast<std::size_t>(i * n + j)], key);
        }
    }
    return m;
}

} // namespace

std::vector<double> Scenario::grid() const
{
    return uniform_grid(t_max, step);
}

NormSampling Scenario::sampling() const
{
    NormSampling s;
    s.horizon = horizon;
    s.resolution = resolution;
    s.t_max = t_max;
    s.samples = samples;
    s.seed = seed;
    return s;
}

nlohmann::json load_scenario_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open scenario file " + path.string());
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("scenario file " + path.string() + " is not valid JSON: " + e.what());
    }
}

void apply_overrides(nlohmann::json& doc, const ScenarioOverrides& o)
{
    if (!doc.is_object()) {
        return;
    }
    if (o.grid_max) {
        doc["grid"]["t_max"] = *o.grid_max;
    }
    if (o.grid_step) {
        doc["grid"]["step"] = *o.grid_step;
        // the lattice must stay a divisor of the grid step
        if (doc.contains("resolution")) {
            doc.erase("resolution");
        }
    }
    if (o.horizon) {
        doc["horizon"] = *o.horizon;
    }
    if (o.tol) {
        doc["tolerances"]["theorem"] = *o.tol;
    }
    if (o.seed) {
        doc["seed"] = *o.seed;
    }
}

Scenario parse_scenario_json(const nlohmann::json& doc)
{
    if (!doc.is_object()) {
        throw ParseError("scenario must be a JSON object");
    }
    Scenario sc;
    sc.source = doc;

    const auto& dim = require(doc, "dimension", "");
    if (!dim.is_number_integer() || dim.get<long>() <= 0) {
        fail("dimension", "must be a positive integer");
    }
    sc.dimension = dim.get<int>();
    const int n = sc.dimension;

    // projectors
    const auto& proj = require(doc, "projectors", "");
    const auto& ptype = require(proj, "type", "projectors.");
    if (ptype == "coordinate-split") {
        sc.projectors.type = ProjectorSpec::Type::coordinate_split;
        const auto& blocks = require(proj, "blocks", "projectors.");
        if (!blocks.is_array() || blocks.size() != 3) {
            fail("projectors.blocks", "expected [n1, n2, n3]");
        }
        int sum = 0;
        for (std::size_t i = 0; i < 3; ++i) {
            if (!blocks[i].is_number_integer() || blocks[i].get<int>() < 0) {
                fail("projectors.blocks", "block sizes must be nonnegative integers");
            }
            sc.projectors.blocks[i] = blocks[i].get<int>();
            sum += sc.projectors.blocks[i];
        }
        if (sum != n) {
            fail("projectors.blocks", "n1+n2+n3 = " + std::to_string(sum) + " differs from dimension " +
                                          std::to_string(n));
        }
    } else if (ptype == "explicit") {
        sc.projectors.type = ProjectorSpec::Type::explicit_matrices;
        for (int i = 0; i < 3; ++i) {
            const std::string key = "P" + std::to_string(i + 1);
            sc.projectors.matrices[static_cast<std::size_t>(i)] =
                parse_matrix(require(proj, key, "projectors."), n, "projectors." + key);
        }
    } else {
        fail("projectors.type", "expected \"coordinate-split\" or \"explicit\"");
    }

    // rates
    const auto& rates = require(doc, "rates", "");
    sc.rates = {parse_rate(require(rates, "h", "rates."), "rates.h"), parse_rate(require(rates, "k", "rates."), "rates.k"),
                parse_rate(require(rates, "mu", "rates."), "rates.mu"),
                parse_rate(require(rates, "nu", "rates."), "rates.nu")};

    // operator
    const auto& op = require(doc, "operator", "");
    const auto& otype = require(op, "type", "operator.");
    if (otype == "paper_example") {
        sc.op.type = OperatorSpec::Type::paper_example;
        const json& src = op.contains("rates") ? op.at("rates") : rates;
        const std::string where = op.contains("rates") ? "operator.rates." : "rates.";
        sc.example_rates = ExampleRates{parse_rate(require(src, "u", where), where + "u"),
                                        parse_rate(require(src, "h", where), where + "h"),
                                        parse_rate(require(src, "k", where), where + "k"),
                                        parse_rate(require(src, "mu", where), where + "mu"),
                                        parse_rate(require(src, "nu", where), where + "nu")};
    } else if (otype == "ode") {
        sc.op.type = OperatorSpec::Type::ode;
        const auto& a = require(op, "A", "operator.");
        if (a.is_string()) {
            sc.op.builtin = a.get<std::string>();
            if (sc.op.builtin != "zero" && sc.op.builtin != "rotation" && sc.op.builtin != "split_oscillating") {
                fail("operator.A", "unknown builtin generator '" + sc.op.builtin + "'");
            }
            if (sc.op.builtin == "rotation" && n != 2) {
                fail("operator.A", "builtin 'rotation' needs dimension 2");
            }
            if (sc.op.builtin == "split_oscillating" &&
                sc.projectors.type != ProjectorSpec::Type::coordinate_split) {
                fail("operator.A", "builtin 'split_oscillating' needs coordinate-split projectors");
            }
        } else {
            sc.op.constant = parse_matrix(a, n, "operator.A");
        }
        sc.op.step = number(require(op, "step", "operator."), "operator.step");
        if (!(sc.op.step > 0.0)) {
            fail("operator.step", "step must be positive");
        }
    } else {
        fail("operator.type", "expected \"paper_example\" or \"ode\"");
    }

    // grid
    const auto& grid = require(doc, "grid", "");
    sc.t_max = number(require(grid, "t_max", "grid."), "grid.t_max");
    sc.step = number(require(grid, "step", "grid."), "grid.step");
    if (!(sc.t_max > 0.0)) {
        fail("grid.t_max", "t_max must be positive");
    }
    if (!(sc.step > 0.0)) {
        fail("grid.step", "step must be positive");
    }
    if (sc.step > sc.t_max) {
        fail("grid.step", "step must not exceed t_max");
    }

    sc.horizon = number_or(doc, "horizon", "", 10.0);
    if (!(sc.horizon > 0.0)) {
        fail("horizon", "must be positive");
    }
    sc.resolution = number_or(doc, "resolution", "", sc.step);
    if (!(sc.resolution > 0.0)) {
        fail("resolution", "must be positive");
    }
    const double ratio = sc.step / sc.resolution;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
        fail("resolution", "must divide grid.step");
    }

    if (doc.contains("tolerances")) {
        const auto& tol = doc.at("tolerances");
        sc.structural_tol = number_or(tol, "structural", "tolerances.", sc.structural_tol);
        sc.theorem_tol = number_or(tol, "theorem", "tolerances.", sc.theorem_tol);
        if (!(sc.structural_tol > 0.0)) {
            fail("tolerances.structural", "must be positive");
        }
        if (!(sc.theorem_tol > 0.0)) {
            fail("tolerances.theorem", "must be positive");
        }
    }
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned()) {
            fail("seed", "must be a nonnegative integer");
        }
        sc.seed = doc.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("samples")) {
        if (!doc.at("samples").is_number_integer() || doc.at("samples").get<long>() < 0) {
            fail("samples", "must be a nonnegative integer");
        }
        sc.samples = doc.at("samples").get<int>();
    }

    if (doc.contains("checks")) {
        const auto& checks = doc.at("checks");
        if (!checks.is_array()) {
            fail("checks", "expected a list of check names");
        }
        for (const auto& c : checks) {
            if (!c.is_string()) {
                fail("checks", "check names must be strings");
            }
            const auto name = c.get<std::string>();
            const auto& known = known_checks();
            if (std::find(known.begin(), known.end(), name) == known.end()) {
                fail("checks", "unknown check '" + name + "'");
            }
            if (std::find(sc.checks.begin(), sc.checks.end(), name) == sc.checks.end()) {
                sc.checks.push_back(name);
            }
        }
    }

    if (doc.contains("bounds")) {
        const auto& bounds = doc.at("bounds");
        if (bounds.contains("definition5")) {
            const auto& b = bounds.at("definition5");
            AffineBound ab;
            ab.intercept = number_or(b, "intercept", "bounds.definition5.", 1.0);
            ab.slope = number_or(b, "slope", "bounds.definition5.", 0.0);
            if (!(ab.intercept >= 1.0) || !(ab.slope >= 0.0)) {
                fail("bounds.definition5", "needs intercept >= 1 and slope >= 0");
            }
            sc.definition5_bound = ab;
        }
        if (bounds.contains("uniform")) {
            const double c = number(bounds.at("uniform"), "bounds.uniform");
            if (!(c >= 1.0)) {
                fail("bounds.uniform", "constant must be >= 1");
            }
            sc.uniform_constant = c;
        }
    }

    if (doc.contains("corollary")) {
        const auto& c = doc.at("corollary");
        CorollarySpec spec;
        const auto& kind = require(c, "kind", "corollary.");
        if (kind == "exponential") {
            spec.kind = CorollaryKind::exponential;
        } else if (kind == "polynomial") {
            spec.kind = CorollaryKind::polynomial;
        } else {
            fail("corollary.kind", "expected \"exponential\" or \"polynomial\"");
        }
        const auto& ex = require(c, "exponents", "corollary.");
        if (!ex.is_array() || ex.size() != 4) {
            fail("corollary.exponents", "expected four exponents");
        }
        for (std::size_t i = 0; i < 4; ++i) {
            spec.exponents[i] = number(ex[i], "corollary.exponents");
            if (!(spec.exponents[i] > 0.0)) {
                fail("corollary.exponents", "exponents must be positive");
            }
        }
        sc.corollary = spec;
    }
    return sc;
}

Scenario parse_scenario(const std::filesystem::path& path)
{
    return parse_scenario_json(load_scenario_json(path));
}

std::function<Matrix(double)> builtin_generator(const std::string& name, int n, const std::array<int, 3>& blocks)
{
    if (name == "zero") {
        return [n](double) { return Matrix::Zero(n, n); };
    }
    if (name == "rotation") {
        if (n != 2) {
            throw ArgumentError("builtin 'rotation' needs dimension 2");
        }
        return [](double) {
            Matrix a(2, 2);
            a << 0.0, 1.0, -1.0, 0.0;
            return a;
        };
    }
    if (name == "split_oscillating") {
        if (blocks[0] + blocks[1] + blocks[2] != n) {
            throw ArgumentError("builtin 'split_oscillating' block sizes must sum to the dimension");
        }
        return [n, blocks](double t) {
            Matrix a = Matrix::Zero(n, n);
            const std::array<double, 3> diag{-1.0 + 0.5 * std::sin(t), 1.0 + 0.5 * std::cos(t), 0.2 * std::sin(t)};
            int offset = 0;
            for (std::size_t b = 0; b < 3; ++b) {
                for (int i = 0; i < blocks[b]; ++i) {
                    a(offset + i, offset + i) = diag[b];
                }
                // rotate consecutive coordinate pairs inside the block
                for (int i = 0; i + 1 < blocks[b]; i += 2) {
                    a(offset + i, offset + i + 1) = 1.0;
                    a(offset + i + 1, offset + i) = -1.0;
                }
                offset += blocks[b];
            }
            return a;
        };
    }
    throw ArgumentError("unknown builtin generator '" + name + "'");
}

ProjectorFamily build_family(const Scenario& sc)
{
    if (sc.projectors.type == ProjectorSpec::Type::coordinate_split) {
        const auto& b = sc.projectors.blocks;
        return ProjectorFamily::coordinate_split(b[0], b[1], b[2]);
    }
    const auto& m = sc.projectors.matrices;
    return ProjectorFamily::constant(m[0], m[1], m[2]);
}

SplitSystem build_system(const Scenario& sc)
{
    auto family = build_family(sc);
    if (sc.op.type == OperatorSpec::Type::paper_example) {
        auto op = paper_example(*sc.example_rates, family);
        return SplitSystem(std::move(op), std::move(family));
    }
    GeneratorSpec spec;
    spec.dimension = sc.dimension;
    spec.step = sc.op.step;
    if (!sc.op.builtin.empty()) {
        spec.generator = builtin_generator(sc.op.builtin, sc.dimension, sc.projectors.blocks);
    } else {
        const Matrix a = sc.op.constant;
        spec.generator = [a](double) { return a; };
    }
    // cache on the norm lattice out to the longest horizon the norms look at
    std::vector<double> cache = uniform_grid(sc.t_max + 2.0 * sc.horizon + sc.resolution, sc.resolution);
    return SplitSystem(from_generator(spec, std::move(cache)), std::move(family));
}

} // namespace tricho
