#include "tricho/report_io.hpp"

#include "tricho/errors.hpp"
#include "tricho/linalg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>

namespace tricho {

namespace {

using nlohmann::json;

/// Which checks must have passed (when also requested) before a check may run.
const std::map<std::string, std::vector<std::string>>& prerequisites()
{
    static const std::map<std::string, std::vector<std::string>> deps{
        {"orthogonality", {}},
        {"cocycle", {}},
        {"invariance", {"orthogonality"}},
        {"compatibility", {"orthogonality"}},
        {"def5", {"orthogonality"}},
        {"prop8", {"compatibility"}},
        {"uniform", {"compatibility"}},
        {"dichotomy", {"orthogonality"}},
        {"norms", {"compatibility"}},
        {"main_theorem", {"norms"}},
        {"unprojected_theorem", {"norms"}},
        {"corollary", {"compatibility"}},
    };
    return deps;
}

json finite_or_null(double x)
{
    return std::isfinite(x) ? json(x) : json(nullptr);
}

json to_json(const CheckReport& r)
{
    json residuals = json::object();
    for (const auto& [key, value] : r.residuals) {
        residuals[key] = finite_or_null(value);
    }
    return {{"tol", r.tol}, {"residuals", residuals}, {"notes", r.notes}, {"pass", r.pass}};
}

json array_of(const std::vector<double>& v)
{
    json out = json::array();
    for (double x : v) {
        out.push_back(finite_or_null(x));
    }
    return out;
}

json to_json(const TrichotomyReport& r)
{
    json per = json::object();
    for (auto ineq : kInequalities) {
        per[r.tag(ineq)] = array_of(r.per_inequality[static_cast<std::size_t>(ineq)]);
    }
    json records = json::array();
    for (const auto& rec : r.records) {
        records.push_back({rec.t, rec.s, r.tag(rec.ineq), finite_or_null(rec.factor), finite_or_null(rec.margin)});
    }
    return {{"label", r.label},
            {"grid", array_of(r.grid)},
            {"pointwise", array_of(r.pointwise)},
            {"per_inequality", per},
            {"envelope", array_of(r.envelope)},
            {"uniform_constant", finite_or_null(r.uniform_constant)},
            {"bound", array_of(r.bound)},
            {"verdict", to_string(r.verdict)},
            {"evidence_only", r.evidence_only},
            {"classification", r.classification},
            {"notes", r.notes},
            {"record_fields", {"t", "s", "tag", "factor", "margin"}},
            {"records", records}};
}

std::vector<CsvRow> rows_of(const std::string& check, const TrichotomyReport& r)
{
    std::vector<CsvRow> rows;
    rows.reserve(r.records.size());
    for (const auto& rec : r.records) {
        rows.push_back({check, rec.t, rec.s, r.tag(rec.ineq), rec.factor, rec.margin});
    }
    return rows;
}

json to_json(const CompatibilityReport& r)
{
    json out{{"grid", array_of(r.grid)},
             {"C", array_of(r.c)},
             {"C_envelope", array_of(r.c_envelope)},
             {"lower_margin", finite_or_null(r.lower_margin)},
             {"uniform_c", finite_or_null(r.uniform_c)},
             {"samples", r.samples},
             {"seed", r.seed},
             {"pass", r.pass}};
    if (r.cross_checked) {
        out["cross_check"] = {{"ratio_to_3N1", finite_or_null(r.cross_check_ratio)}, {"pass", r.cross_check_pass}};
    }
    return out;
}

json to_json(const TheoremReport& r)
{
    json worst = json::object();
    for (const auto& [tag, w] : r.worst_margin) {
        worst[tag] = finite_or_null(w);
    }
    json records = json::array();
    for (const auto& rec : r.records) {
        records.push_back({rec.tag, rec.t, rec.s, rec.vector_id, finite_or_null(rec.lhs), finite_or_null(rec.rhs),
                           finite_or_null(rec.margin)});
    }
    return {{"label", r.label},
            {"tol", r.tol},
            {"slack", r.slack},
            {"samples", r.samples},
            {"seed", r.seed},
            {"worst_margin", worst},
            {"pass", r.pass},
            {"notes", r.notes},
            {"record_fields", {"tag", "t", "s", "vector", "lhs", "rhs", "margin"}},
            {"records", records}};
}

std::vector<CsvRow> rows_of(const std::string& check, const TheoremReport& r)
{
    std::vector<CsvRow> rows;
    rows.reserve(r.records.size());
    for (const auto& rec : r.records) {
        rows.push_back({check, rec.t, rec.s, rec.tag + "#" + std::to_string(rec.vector_id), rec.lhs, rec.margin});
    }
    return rows;
}

/// Lazily built objects shared between checks of one run.
class RunContext {
public:
    explicit RunContext(const Scenario& sc) : sc_(sc), grid_(sc.grid()) {}

    const Scenario& scenario() const { return sc_; }
    const std::vector<double>& grid() const { return grid_; }

    const SplitSystem& system()
    {
        if (!system_) {
            system_ = std::make_unique<SplitSystem>(build_system(sc_));
        }
        return *system_;
    }

    const LyapunovNormFamily& norms(NormVariant v)
    {
        auto& slot = v == NormVariant::forward_central ? forward_ : backward_;
        if (!slot) {
            slot = std::make_unique<LyapunovNormFamily>(build_norm_family(v, system(), sc_.rates, sc_.sampling()));
        }
        return *slot;
    }

    const TrichotomyReport& proposition8()
    {
        if (!prop8_) {
            prop8_ = check_proposition8(system(), sc_.rates, grid_, sc_.structural_tol);
        }
        return *prop8_;
    }

private:
    const Scenario& sc_;
    std::vector<double> grid_;
    std::unique_ptr<SplitSystem> system_;
    std::unique_ptr<LyapunovNormFamily> forward_;
    std::unique_ptr<LyapunovNormFamily> backward_;
    std::optional<TrichotomyReport> prop8_;
};

bool acceptable(CheckStatus s)
{
    return s == CheckStatus::pass || s == CheckStatus::reported || s == CheckStatus::not_applicable;
}

CheckStatus status_of(bool pass)
{
    return pass ? CheckStatus::pass : CheckStatus::fail;
}

CheckStatus status_of(Verdict v)
{
    switch (v) {
    case Verdict::pass: return CheckStatus::pass;
    case Verdict::fail: return CheckStatus::fail;
    case Verdict::reported: return CheckStatus::reported;
    }
    return CheckStatus::error;
}

void run_check(const std::string& name, RunContext& ctx, CheckEntry& entry)
{
    const auto& sc = ctx.scenario();
    const auto& grid = ctx.grid();
    const double tol = sc.structural_tol;

    if (name == "orthogonality") {
        const auto r = check_orthogonal(build_family(sc), grid, tol);
        entry.status = status_of(r.pass);
        entry.detail = to_json(r);
    } else if (name == "cocycle") {
        const auto& op = ctx.system().op();
        const auto e1 = check_identity(op, grid, tol);
        const auto e2 = check_cocycle(op, grid_triples(grid), tol);
        entry.status = status_of(e1.pass && e2.pass);
        entry.detail = {{"identity", to_json(e1)}, {"cocycle", to_json(e2)}};
    } else if (name == "invariance") {
        const auto& sys = ctx.system();
        const auto r = check_invariance(sys.family(), sys.op(), grid_pairs(grid), tol);
        entry.status = status_of(r.pass);
        entry.detail = to_json(r);
    } else if (name == "compatibility") {
        const auto& sys = ctx.system();
        const auto r = check_compatible(sys.family(), sys.op(), grid, tol);
        entry.status = status_of(r.pass);
        entry.detail = to_json(r);
    } else if (name == "def5") {
        std::optional<BoundFunction> bound;
        if (sc.definition5_bound) {
            const auto b = *sc.definition5_bound;
            bound = [b](double a) { return b.intercept + b.slope * a; };
        }
        const auto r = check_definition5(ctx.system(), sc.rates, grid, bound);
        entry.status = status_of(r.verdict);
        entry.detail = to_json(r);
        entry.rows = rows_of(name, r);
    } else if (name == "prop8") {
        const auto& r = ctx.proposition8();
        entry.status = status_of(r.verdict);
        entry.detail = to_json(r);
        entry.rows = rows_of(name, r);
    } else if (name == "uniform") {
        const auto r = check_uniform(ctx.system(), sc.rates, grid, sc.uniform_constant);
        entry.status = status_of(r.verdict);
        entry.message = r.classification;
        entry.detail = to_json(r);
        entry.rows = rows_of(name, r);
    } else if (name == "dichotomy") {
        const auto& sys = ctx.system();
        for (double t : grid) {
            if (spectral_norm(sys.family().member(3, t)) > 1e-12) {
                entry.status = CheckStatus::not_applicable;
                entry.message = "P3 is not zero; the dichotomy check needs P3 = 0";
                return;
            }
        }
        const auto r = check_dichotomy(sys, {sc.rates.h, sc.rates.k}, grid);
        entry.status = status_of(r.verdict);
        entry.detail = to_json(r);
        entry.rows = rows_of(name, r);
    } else if (name == "norms") {
        const auto& fwd = ctx.norms(NormVariant::forward_central);
        const auto& bwd = ctx.norms(NormVariant::backward_central);
        const auto& prop8 = ctx.proposition8();
        const auto cf = check_compatibility(fwd, grid, sc.samples, sc.seed, 1e-12, &prop8);
        const auto cb = check_compatibility(bwd, grid, sc.samples, sc.seed, 1e-12, &prop8);
        const bool flagged = fwd.horizon_flagged() || bwd.horizon_flagged();
        entry.status = status_of(cf.pass && cb.pass && !flagged);
        if (flagged) {
            entry.message = "horizon sensitivity above limit";
        }
        entry.detail = {{"forward_central",
                         {{"compatibility", to_json(cf)}, {"horizon_sensitivity", fwd.horizon_sensitivity()}}},
                        {"backward_central",
                         {{"compatibility", to_json(cb)}, {"horizon_sensitivity", bwd.horizon_sensitivity()}}},
                        {"horizon", sc.horizon},
                        {"resolution", sc.resolution}};
        for (std::size_t i = 0; i < grid.size(); ++i) {
            entry.rows.push_back({name, grid[i], grid[i], "C_forward", cf.c[i], cf.c_envelope[i] - cf.c[i]});
            entry.rows.push_back({name, grid[i], grid[i], "C_backward", cb.c[i], cb.c_envelope[i] - cb.c[i]});
        }
    } else if (name == "main_theorem" || name == "unprojected_theorem") {
        const auto& fwd = ctx.norms(NormVariant::forward_central);
        const auto& bwd = ctx.norms(NormVariant::backward_central);
        const auto r = name == "main_theorem"
                           ? verify_main_theorem(ctx.system(), sc.rates, fwd, bwd, grid, sc.samples, sc.seed,
                                                 sc.theorem_tol)
                           : verify_unprojected_theorem(ctx.system(), sc.rates, fwd, bwd, grid, sc.samples, sc.seed,
                                                        sc.theorem_tol);
        entry.status = status_of(r.pass);
        entry.detail = to_json(r);
        entry.rows = rows_of(name, r);
        if (name == "main_theorem") {
            const auto suff = verify_sufficiency(ctx.system(), sc.rates, fwd, bwd, grid, sc.samples, sc.seed);
            entry.detail["sufficiency"] = {{"candidate_N", array_of(suff.candidate)},
                                           {"C", array_of(suff.c)},
                                           {"projector_norm_sum", array_of(suff.projector_norm_sum)},
                                           {"slack", suff.slack},
                                           {"definition5_verdict", to_string(suff.definition5.verdict)},
                                           {"pass", suff.pass}};
            if (!suff.pass) {
                entry.status = CheckStatus::fail;
                entry.message = "sufficiency direction failed";
            }
        }
    } else if (name == "corollary") {
        CorollarySpec spec;
        if (sc.corollary) {
            spec = *sc.corollary;
        } else {
            const auto& r = sc.rates;
            const auto kind = r.h.kind();
            if (kind == RateKind::tabulated || r.k.kind() != kind || r.mu.kind() != kind || r.nu.kind() != kind) {
                throw PreconditionError("corollary check needs a 'corollary' block or four rates of one closed-form kind");
            }
            spec.kind = kind == RateKind::exponential ? CorollaryKind::exponential : CorollaryKind::polynomial;
            spec.exponents = {r.h.exponent(), r.k.exponent(), r.mu.exponent(), r.nu.exponent()};
        }
        const auto r = instantiate_corollaries(spec.kind, spec.exponents, ctx.system(), sc.sampling(), grid,
                                               sc.theorem_tol);
        entry.status = status_of(r.pass);
        entry.detail = to_json(r);
        entry.rows = rows_of(name, r);
    } else {
        throw ArgumentError("unknown check '" + name + "'");
    }
}

void write_json_value(std::ostream& out, const json& v, int indent, int depth)
{
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(indent * depth), ' ');
    switch (v.type()) {
    case json::value_t::object: {
        if (v.empty()) {
            out << "{}";
            return;
        }
        out << "{\n";
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) {
                out << ",\n";
            }
            first = false;
            out << pad << json(it.key()).dump() << ": ";
            write_json_value(out, it.value(), indent, depth + 1);
        }
        out << "\n" << close << "}";
        return;
    }
    case json::value_t::array: {
        if (v.empty()) {
            out << "[]";
            return;
        }
        // arrays of scalars stay on one line
        const bool flat = std::none_of(v.begin(), v.end(), [](const json& e) { return e.is_structured(); });
        if (flat) {
            out << "[";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i > 0) {
                    out << ", ";
                }
                write_json_value(out, v[i], indent, depth + 1);
            }
            out << "]";
            return;
        }
        out << "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i > 0) {
                out << ",\n";
            }
            out << pad;
            write_json_value(out, v[i], indent, depth + 1);
        }
        out << "\n" << close << "]";
        return;
    }
    case json::value_t::number_float: {
        const double x = v.get<double>();
        out << (std::isfinite(x) ? format_number(x) : "null");
        return;
    }
    default:
        out << v.dump();
        return;
    }
}

json summary_json(const RunReport& report, bool with_detail)
{
    json checks = json::array();
    for (const auto& c : report.checks) {
        json entry{{"name", c.name}, {"status", to_string(c.status)}, {"message", c.message}};
        if (with_detail) {
            entry["detail"] = c.detail;
        }
        checks.push_back(std::move(entry));
    }
    return {{"scenario", report.scenario},
            {"checks", checks},
            {"overall", to_string(report.overall)},
            {"exit_code", report.exit_code}};
}

void write_file(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error("cannot write " + path.string());
    }
    body(out);
    out.flush();
    if (!out) {
        throw Error("error while writing " + path.string());
    }
}

} // namespace

std::string to_string(CheckStatus s)
{
    switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::reported: return "reported";
    case CheckStatus::skipped: return "skipped";
    case CheckStatus::error: return "error";
    case CheckStatus::not_applicable: return "not_applicable";
    }
    return "unknown";
}

std::string format_number(double x)
{
    if (!std::isfinite(x)) {
        return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

RunReport run(const Scenario& scenario)
{
    const auto start = std::chrono::steady_clock::now();
    RunReport report;
    report.scenario = scenario.source;
    RunContext ctx(scenario);
    std::map<std::string, CheckStatus> done;

    for (const auto& name : known_checks()) {
        if (std::find(scenario.checks.begin(), scenario.checks.end(), name) == scenario.checks.end()) {
            continue;
        }
        CheckEntry entry;
        entry.name = name;
        std::string blocked;
        for (const auto& dep : prerequisites().at(name)) {
            const auto it = done.find(dep);
            if (it != done.end() && !acceptable(it->second)) {
                blocked = dep;
                break;
            }
        }
        if (!blocked.empty()) {
            entry.status = CheckStatus::skipped;
            entry.message = "prerequisite '" + blocked + "' did not pass";
        } else {
            try {
                run_check(name, ctx, entry);
            } catch (const StructuralError& e) {
                entry.status = CheckStatus::error;
                entry.structural = true;
                entry.message = e.what();
            } catch (const Error& e) {
                entry.status = CheckStatus::error;
                entry.message = e.what();
            }
        }
        done[name] = entry.status;
        report.checks.push_back(std::move(entry));
    }

    report.exit_code = 0;
    report.overall = CheckStatus::pass;
    for (const auto& c : report.checks) {
        if (c.structural) {
            report.exit_code = 2;
        } else if (!acceptable(c.status)) {
            report.exit_code = std::max(report.exit_code, 1);
        }
    }
    if (report.exit_code != 0) {
        report.overall = CheckStatus::fail;
    }
    report.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

OutputFormat parse_format(const std::string& name)
{
    if (name == "json") {
        return OutputFormat::json;
    }
    if (name == "csv") {
        return OutputFormat::csv;
    }
    if (name == "both") {
        return OutputFormat::both;
    }
    throw ArgumentError("unknown output format '" + name + "' (expected json, csv or both)");
}

void write_json(std::ostream& out, const nlohmann::json& value, int indent)
{
    write_json_value(out, value, indent, 0);
    out << "\n";
}

void emit(const RunReport& report, OutputFormat format, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
    }
    if (report.checks.empty()) {
        write_file(dir / "summary.json", [&](std::ostream& out) { write_json(out, summary_json(report, false)); });
        return;
    }
    if (format == OutputFormat::json || format == OutputFormat::both) {
        write_file(dir / "report.json", [&](std::ostream& out) { write_json(out, summary_json(report, true)); });
    } else {
        write_file(dir / "summary.json", [&](std::ostream& out) { write_json(out, summary_json(report, false)); });
    }
    if (format == OutputFormat::csv || format == OutputFormat::both) {
        write_file(dir / "records.csv", [&](std::ostream& out) {
            out << "check,t,s,tag,value,margin\n";
            for (const auto& c : report.checks) {
                for (const auto& row : c.rows) {
                    out << row.check << ',' << format_number(row.t) << ',' << format_number(row.s) << ',' << row.tag
                        << ',' << format_number(row.value) << ',' << format_number(row.margin) << '\n';
                }
            }
        });
    }
}

} // namespace tricho
