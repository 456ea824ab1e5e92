#pragma once

#include <string>
#include <utility>
#include <vector>

namespace tricho {

/// Worst residual per named condition and the resulting verdict.
struct CheckReport {
    std::string name;
    double tol = 0.0;
    std::vector<std::pair<std::string, double>> residuals;
    std::vector<std::string> notes;
    bool pass = true;

    /// Records `value` under `condition`, keeping the maximum seen so far.
    void record(const std::string& condition, double value);
    double residual(const std::string& condition) const;
    double worst() const;
    /// pass = every residual <= tol and no failure was forced.
    void finalize();
    void force_fail(std::string note);

private:
    bool forced_fail_ = false;
};

} // namespace tricho
