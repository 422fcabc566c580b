#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "xamm/decimal.hpp"
#include "xamm/relay_sim.hpp"
#include "xamm/snapshot.hpp"

namespace xamm {
namespace {

using nlohmann::ordered_json;

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    return format_decimal(x);
}

ordered_json relay_json(const RelayConfig& r) {
    return ordered_json{{"min_delay", r.min_delay},
                        {"max_delay", r.max_delay},
                        {"drop_rate", num(r.drop_rate)},
                        {"dup_rate", num(r.dup_rate)},
                        {"reorder", r.reorder},
                        {"refund_timeout", r.refund_timeout}};
}

std::string fixed(double x, int precision = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, x);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    s.append(s.size() < width ? width - s.size() : 1, ' ');
    return s;
}

}  // namespace

std::string report_to_json(const Report& r) {
    ordered_json root;
    root["schema_version"] = r.schema_version;
    root["generator"] = r.generator;
    root["seed"] = r.relay.seed;
    root["scenario"] = r.scenario_name;
    root["relay"] = relay_json(r.relay);
    root["result"] = {{"passed", r.passed()},
                      {"aborted", r.aborted},
                      {"quiescent", r.quiescent()},
                      {"steps", r.steps},
                      {"final_tick", r.final_tick},
                      {"final_deviation", num(r.final_deviation)},
                      {"max_abs_deviation", num(r.max_abs_deviation())},
                      {"max_slippage", num(r.max_slippage())},
                      {"refunds", r.refunds},
                      {"unresolved", r.unresolved}};

    ordered_json swaps = ordered_json::array();
    for (const auto& s : r.swaps) {
        swaps.push_back({{"swap_id", s.swap_id},
                         {"source_chain", s.source_chain},
                         {"dest_chain", s.dest_chain},
                         {"asset_in", s.asset_in},
                         {"asset_out", s.asset_out},
                         {"status", std::string(to_string(s.status))},
                         {"value", num(s.value)},
                         {"amount_in", num(s.amount_in)},
                         {"fee_paid", num(s.fee)},
                         {"amount_out", num(s.amount_out)},
                         {"effective_price",
                          num(s.amount_out > 0.0 ? s.amount_in / s.amount_out : 0.0)},
                         {"slippage", num(s.slippage())},
                         {"refunded", num(s.refunded)},
                         {"initiated_tick", s.initiated_tick},
                         {"resolved_tick", s.resolved_tick},
                         {"note", s.note}});
    }
    root["swaps"] = swaps;

    ordered_json receipts = ordered_json::array();
    for (const auto& rc : r.receipts) {
        receipts.push_back({{"swap_id", rc.swap_id},
                            {"amount_in", num(rc.amount_in)},
                            {"amount_out", num(rc.amount_out)},
                            {"fee_paid", num(rc.fee_paid)},
                            {"effective_price", num(rc.effective_price)}});
    }
    root["receipts"] = receipts;
    root["final_state"] = ordered_json::parse(snapshot_to_json(r.final_pools, r.final_ledger));

    ordered_json trace = ordered_json::array();
    for (const auto& p : r.trace) {
        trace.push_back({{"tick", p.tick},
                         {"seq", p.seq},
                         {"kind", p.kind},
                         {"deviation", num(p.deviation)},
                         {"outstanding", num(p.outstanding)}});
    }
    root["deviation_trace"] = trace;

    root["messages"] = {{"sent", r.stats.sent},
                        {"dropped", r.stats.dropped},
                        {"duplicated", r.stats.duplicated},
                        {"delivered", r.stats.delivered},
                        {"duplicates_ignored", r.stats.duplicates_ignored},
                        {"revoked_discards", r.stats.revoked_discards},
                        {"refunds_sent", r.stats.refunds_sent},
                        {"timeouts_fired", r.stats.timeouts_fired}};
    root["locality"] = {{"ok", r.locality_violations.empty()},
                        {"coordinated_events", r.coordinated_events},
                        {"violations", r.locality_violations}};
    root["violations"] = r.violations;
    root["event_errors"] = r.event_errors;
    if (!r.state_dump.empty()) root["state_dump"] = ordered_json::parse(r.state_dump);
    return root.dump(2) + "\n";
}

std::string report_to_csv(const Report& r) {
    std::ostringstream out;
    out << "# schema_version=" << r.schema_version << "\n";
    out << "# generator=" << r.generator << " seed=" << r.relay.seed << "\n";
    out << "# scenario=" << r.scenario_name << "\n";
    out << "# passed=" << (r.passed() ? "true" : "false")
        << " final_deviation=" << num(r.final_deviation)
        << " max_abs_deviation=" << num(r.max_abs_deviation()) << " refunds=" << r.refunds
        << " unresolved=" << r.unresolved << "\n";
    for (const auto& v : r.violations) out << "# violation=" << v << "\n";
    for (const auto& e : r.event_errors) out << "# event_error=" << e << "\n";
    out << "swap_id,source_chain,dest_chain,asset_in,asset_out,status,amount_in,fee_paid,"
           "amount_out,effective_price,slippage,refunded,value\n";
    for (const auto& s : r.swaps) {
        out << s.swap_id << ',' << s.source_chain << ',' << s.dest_chain << ',' << s.asset_in
            << ',' << s.asset_out << ',' << to_string(s.status) << ',' << num(s.amount_in) << ','
            << num(s.fee) << ',' << num(s.amount_out) << ','
            << num(s.amount_out > 0.0 ? s.amount_in / s.amount_out : 0.0) << ','
            << num(s.slippage()) << ',' << num(s.refunded) << ',' << num(s.value) << "\n";
    }
    return out.str();
}

std::string report_to_table(const Report& r) {
    std::ostringstream out;
    out << "scenario   " << (r.scenario_name.empty() ? "(unnamed)" : r.scenario_name) << "\n";
    out << "schema     " << r.schema_version << "  generator " << r.generator << "  seed "
        << r.relay.seed << "\n";
    out << "result     " << (r.passed() ? "PASS" : "FAIL") << "  steps " << r.steps
        << "  final tick " << r.final_tick << "\n";
    out << "deviation  final " << num(r.final_deviation) << "  max |dev - in-flight| "
        << num(r.max_abs_deviation()) << "\n";
    out << "swaps      " << r.swaps.size() << "  refunded " << r.refunds << "  unresolved "
        << r.unresolved << "  max slippage " << fixed(r.max_slippage()) << "\n";
    out << "messages   sent " << r.stats.sent << "  dropped " << r.stats.dropped
        << "  duplicated " << r.stats.duplicated << "  duplicates ignored "
        << r.stats.duplicates_ignored << "\n\n";

    auto route = [](const SwapTrack& s) {
        return s.asset_in + "@" + s.source_chain + ">" + s.asset_out + "@" + s.dest_chain;
    };
    std::size_t route_width = 26;
    for (const auto& s : r.swaps) route_width = std::max(route_width, route(s).size() + 2);

    out << pad("swap", 12) << pad("route", route_width) << pad("status", 11) << pad("in", 14)
        << pad("out", 14) << pad("price", 12) << "slippage\n";
    for (const auto& s : r.swaps) {
        out << pad(s.swap_id, 12)
            << pad(route(s), route_width)
            << pad(std::string(to_string(s.status)), 11) << pad(fixed(s.amount_in), 14)
            << pad(fixed(s.amount_out), 14)
            << pad(s.amount_out > 0.0 ? fixed(s.amount_in / s.amount_out) : "-", 12)
            << fixed(s.slippage()) << "\n";
    }
    out << "\n" << pad("chain", 12) << pad("asset", 10) << pad("balance", 18) << "reference\n";
    for (const auto& [id, pool] : r.final_pools) {
        for (const auto& a : pool.assets()) {
            out << pad(id, 12) << pad(a.asset_id, 10) << pad(fixed(a.balance, 9), 18)
                << fixed(a.reference, 9) << "\n";
        }
    }
    for (const auto& v : r.violations) out << "VIOLATION  " << v << "\n";
    for (const auto& v : r.locality_violations) out << "LOCALITY   " << v << "\n";
    for (const auto& e : r.event_errors) out << "ERROR      " << e << "\n";
    return out.str();
}

}  // namespace xamm
