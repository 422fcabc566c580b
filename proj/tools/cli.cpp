#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "xamm/decimal.hpp"
#include "xamm/errors.hpp"

namespace xamm::cli {
namespace {

int write_output(const std::string& text, const std::string& path, std::ostream& out,
                 std::ostream& err) {
    if (path.empty() || path == "-") {
        out << text;
        if (!text.empty() && text.back() != '\n') out << '\n';
        return kExitOk;
    }
    std::ofstream file(path, std::ios::binary);
    file << text;
    if (!file) {
        err << "error: cannot write " << path << "\n";
        return kExitInvalid;
    }
    return kExitOk;
}

std::string opt_num(const std::optional<double>& x) { return x ? format_decimal(*x) : ""; }

}  // namespace

void apply_overrides(Scenario& s, const RunOptions& o) {
    if (o.seed) s.relay.seed = *o.seed;
    if (o.tolerance) s.tolerance = *o.tolerance;
    if (o.drop_rate) s.relay.drop_rate = *o.drop_rate;
    if (o.dup_rate) s.relay.dup_rate = *o.dup_rate;
    if (o.reorder) s.relay.reorder = *o.reorder;
    if (o.max_delay) s.relay.max_delay = *o.max_delay;
    if (o.refund_timeout) s.relay.refund_timeout = *o.refund_timeout;
    s.validate();
}

std::string render(const Report& report, Format format) {
    switch (format) {
        case Format::Structured: return report_to_json(report);
        case Format::Delimited: return report_to_csv(report);
        case Format::Table: break;
    }
    return report_to_table(report);
}

int cmd_check(const std::string& path, std::ostream& out, std::ostream& err) {
    try {
        const Scenario s = load_scenario(path);
        out << "ok: " << (s.name.empty() ? path : s.name) << " (" << s.chains.size()
            << " chains, " << s.events.size() << " events)\n";
        return kExitOk;
    } catch (const AmmError& e) {
        err << path << ": " << e.what() << "\n";
        return kExitInvalid;
    }
}

int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
    Scenario s;
    try {
        s = load_scenario(o.scenario_path);
        apply_overrides(s, o);
    } catch (const AmmError& e) {
        err << o.scenario_path << ": " << e.what() << "\n";
        return kExitInvalid;
    }
    const Report report = run_scenario(s);
    if (const int rc = write_output(render(report, o.format), o.out_path, out, err); rc != kExitOk) {
        return rc;
    }
    for (const auto& v : report.violations) err << "invariant violation: " << v << "\n";
    return report.passed() ? kExitOk : kExitViolation;
}

std::vector<SweepRow> sweep(const Scenario& base, const SweepGrid& grid, unsigned jobs) {
    auto axis = [](const std::vector<double>& v) {
        std::vector<std::optional<double>> out(v.begin(), v.end());
        if (out.empty()) out.push_back(std::nullopt);
        return out;
    };
    std::vector<SweepRow> rows;
    for (const auto& a : axis(grid.amplification)) {
        for (const auto& f : axis(grid.fee_rate)) {
            for (const auto& d : axis(grid.drop_rate)) {
                SweepRow r;
                r.amplification = a;
                r.fee_rate = f;
                r.drop_rate = d;
                rows.push_back(r);
            }
        }
    }

    auto run_point = [&base](SweepRow row) {
        try {
            Scenario s = base;
            if (row.fee_rate) s.fee_rate = *row.fee_rate;
            if (row.drop_rate) s.relay.drop_rate = *row.drop_rate;
            if (row.amplification) {
                for (auto& c : s.chains) {
                    for (auto& d : c.deposits) {
                        if (d.kind == CurveKind::Stable) d.amplification = *row.amplification;
                    }
                }
            }
            s.validate();
            const Report rep = run_scenario(s);
            row.max_slippage = rep.max_slippage();
            row.deviation_max = rep.max_abs_deviation();
            row.refund_count = rep.refunds;
            row.violations = rep.violations.size();
            row.status = rep.passed() ? "pass" : "violation";
        } catch (const AmmError& e) {
            row.status = std::string("error: ") + e.what();
        }
        return row;
    };

    if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t start = 0; start < rows.size(); start += jobs) {
        const std::size_t end = std::min(rows.size(), start + jobs);
        std::vector<std::future<SweepRow>> pending;
        for (std::size_t i = start; i < end; ++i) {
            pending.push_back(std::async(std::launch::async, run_point, rows[i]));
        }
        for (std::size_t i = start; i < end; ++i) rows[i] = pending[i - start].get();
    }
    return rows;
}

std::string sweep_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "amplification,fee_rate,drop_rate,max_slippage,deviation_max,refund_count,violations,"
           "status\n";
    for (const auto& r : rows) {
        std::string status = r.status;
        std::replace(status.begin(), status.end(), ',', ';');
        std::replace(status.begin(), status.end(), '\n', ' ');
        out << opt_num(r.amplification) << ',' << opt_num(r.fee_rate) << ','
            << opt_num(r.drop_rate) << ',' << format_decimal(r.max_slippage) << ','
            << format_decimal(r.deviation_max) << ',' << r.refund_count << ',' << r.violations
            << ',' << status << "\n";
    }
    return out.str();
}

int cmd_sweep(const RunOptions& o, const SweepGrid& grid, unsigned jobs, std::ostream& out,
              std::ostream& err) {
    if (grid.amplification.empty() && grid.fee_rate.empty() && grid.drop_rate.empty()) {
        err << "error: empty parameter grid (give --amp, --fee or --drop)\n";
        return kExitInvalid;
    }
    Scenario s;
    try {
        s = load_scenario(o.scenario_path);
        apply_overrides(s, o);
    } catch (const AmmError& e) {
        err << o.scenario_path << ": " << e.what() << "\n";
        return kExitInvalid;
    }
    const auto rows = sweep(s, grid, jobs);
    if (const int rc = write_output(sweep_to_csv(rows), o.out_path, out, err); rc != kExitOk) {
        return rc;
    }
    const bool all_pass =
        std::all_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.status == "pass"; });
    return all_pass ? kExitOk : kExitViolation;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Cross-chain AMM simulator"};
    app.require_subcommand(1);
    app.footer("exit codes: 0 ok, 1 invariant violation (report still written), "
               "2 invalid input or usage");

    RunOptions o;
    std::string format = "table";
    SweepGrid grid;
    unsigned jobs = 0;
    bool reorder = false;
    bool in_order = false;

    const std::map<std::string, Format> formats{
        {"table", Format::Table}, {"structured", Format::Structured}, {"delimited", Format::Delimited}};

    auto add_run_flags = [&](CLI::App* cmd) {
        cmd->add_option("scenario", o.scenario_path, "scenario file")->required();
        cmd->add_option("--seed", o.seed, "override the relay seed");
        cmd->add_option("--format", format, "table, structured or delimited")
            ->check(CLI::IsMember({"table", "structured", "delimited"}));
        cmd->add_option("--tol", o.tolerance, "value tolerance for inversions");
        cmd->add_option("--drop-rate", o.drop_rate, "probability a message is lost");
        cmd->add_option("--dup-rate", o.dup_rate, "probability a message is duplicated");
        cmd->add_flag("--reorder", reorder, "let channels deliver out of order");
        cmd->add_flag("--in-order", in_order, "force FIFO channels")->excludes("--reorder");
        cmd->add_option("--max-delay", o.max_delay, "maximum relay delay in ticks");
        cmd->add_option("--timeout", o.refund_timeout, "source refund timeout in ticks (0: off)");
        cmd->add_option("--out", o.out_path, "write output to a file instead of stdout");
    };

    CLI::App* run = app.add_subcommand("run", "run a scenario and print its report");
    add_run_flags(run);
    CLI::App* check = app.add_subcommand("check", "validate a scenario without running it");
    check->add_option("scenario", o.scenario_path, "scenario file")->required();
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a scenario over a parameter grid");
    add_run_flags(sweep_cmd);
    sweep_cmd->add_option("--amp", grid.amplification, "amplification values (stable assets)")
        ->delimiter(',');
    sweep_cmd->add_option("--fee", grid.fee_rate, "fee rates")->delimiter(',');
    sweep_cmd->add_option("--drop", grid.drop_rate, "drop rates")->delimiter(',');
    sweep_cmd->add_option("--jobs", jobs, "parallel runs (default: hardware threads)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitInvalid;
    }
    o.format = formats.at(format);
    if (reorder) o.reorder = true;
    if (in_order) o.reorder = false;

    if (*check) return cmd_check(o.scenario_path, out, err);
    if (*run) return cmd_run(o, out, err);
    return cmd_sweep(o, grid, jobs, out, err);
}

}  // namespace xamm::cli
