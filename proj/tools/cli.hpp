#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "xamm/relay_sim.hpp"

namespace xamm::cli {

/// Process exit codes. Stable across releases.
enum ExitCode : int {
    kExitOk = 0,
    kExitViolation = 1,  // invariant violation; the report is still written
    kExitInvalid = 2,    // unreadable, malformed or invalid input, bad flags, empty grid
};

enum class Format { Table, Structured, Delimited };

struct RunOptions {
    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    Format format = Format::Table;
    std::optional<double> tolerance;
    std::optional<double> drop_rate;
    std::optional<double> dup_rate;
    std::optional<bool> reorder;
    std::optional<long long> max_delay;
    std::optional<long long> refund_timeout;
    std::string out_path;  // empty: stdout
};

struct SweepGrid {
    std::vector<double> amplification;
    std::vector<double> fee_rate;
    std::vector<double> drop_rate;
};

struct SweepRow {
    std::optional<double> amplification;
    std::optional<double> fee_rate;
    std::optional<double> drop_rate;
    double max_slippage = 0.0;
    double deviation_max = 0.0;
    std::size_t refund_count = 0;
    std::size_t violations = 0;
    std::string status;  // pass, violation or error: <message>
};

/// Applies the seed, tolerance and fault overrides to a parsed scenario.
void apply_overrides(Scenario& scenario, const RunOptions& options);

std::string render(const Report& report, Format format);

/// Runs every grid point as an independent world; rows come back in grid
/// order (amplification, then fee, then drop rate) whatever the scheduling.
std::vector<SweepRow> sweep(const Scenario& base, const SweepGrid& grid, unsigned jobs = 0);
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);
int cmd_check(const std::string& scenario_path, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunOptions& options, const SweepGrid& grid, unsigned jobs, std::ostream& out,
              std::ostream& err);

/// Full command line, including argv[0].
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace xamm::cli
