#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "meixner/cli/config.hpp"
#include "meixner/rmt.hpp"

namespace meixner::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_computation_error = 1,
    exit_config_error = 2,
    exit_check_failed = 3,
};

/// One line of an `rmt` result table.
struct ResultRow {
    std::string item;  ///< label name, word, "cfree[<centering>] <word>" or "sweep <label>"
    int state = 1;
    std::string id;  ///< moment order or word id (w1, c1, ...)
    int n = 0;
    double estimate = 0.0;
    double standard_error = 0.0;
    double oracle = 0.0;
    double abs_error = 0.0;
    double tolerance = 0.0;  ///< acceptance band used by --check; 0 disables the row check
    bool pass = true;
};

struct ExperimentResult {
    std::vector<ResultRow> rows;
    /// Extra pass/fail checks that are not tied to a single row (sweep trend).
    std::vector<std::string> failed_checks;
    bool passed() const;
};

/// Runs every section of the config: moment tables per label, mixed-moment
/// words, centered products and finite-size sweeps. Progress goes to `log`.
ExperimentResult run_experiment(const RunConfig& config, ExecutionPolicy policy, std::ostream& log);

void write_rows_csv(std::ostream& out, const std::vector<ResultRow>& rows);
nlohmann::json rows_to_json(const std::vector<ResultRow>& rows);

/// Entry point of the `meixner` tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace meixner::cli
