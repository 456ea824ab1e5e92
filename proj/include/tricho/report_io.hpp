#pragma once

#include "tricho/scenario.hpp"

#include <json.hpp>

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace tricho {

/// not_applicable: the check's precondition does not hold for this scenario (dichotomy with P3 != 0).
enum class CheckStatus { pass, fail, reported, skipped, error, not_applicable };

std::string to_string(CheckStatus s);

/// One CSV row: (check, t, s, tag, value, margin).
struct CsvRow {
    std::string check;
    double t;
    double s;
    std::string tag;
    double value;
    double margin;
};

struct CheckEntry {
    std::string name;
    CheckStatus status = CheckStatus::skipped;
    std::string message;
    /// Set when the check died on a StructuralError; drives exit code 2.
    bool structural = false;
    nlohmann::json detail = nlohmann::json::object();
    std::vector<CsvRow> rows;
};

struct RunReport {
    nlohmann::json scenario;
    std::vector<CheckEntry> checks;
    CheckStatus overall = CheckStatus::pass;
    /// 0 all passed, reported or not applicable; 1 a check failed or was skipped; 2 structural error.
    int exit_code = 0;
    /// Wall time; kept out of the report files so they stay byte-stable.
    double elapsed_seconds = 0.0;
};

/// Runs the requested checks in dependency order. Dependents of a check that did
/// not pass are marked skipped.
RunReport run(const Scenario& scenario);

enum class OutputFormat { json, csv, both };

OutputFormat parse_format(const std::string& name);

/// json: report.json. csv: summary.json + records.csv. both: report.json + records.csv.
/// An empty check list writes summary.json only.
void emit(const RunReport& report, OutputFormat format, const std::filesystem::path& dir);

/// JSON writer printing every double with 17 significant digits (non-finite as null).
void write_json(std::ostream& out, const nlohmann::json& value, int indent = 2);

/// 17-significant-digit rendering used by every report writer.
std::string format_number(double x);

} // namespace tricho
