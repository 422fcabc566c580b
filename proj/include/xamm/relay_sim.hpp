#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "xamm/pool_state.hpp"
#include "xamm/scenario.hpp"
#include "xamm/swap_protocol.hpp"

namespace xamm {

inline constexpr int kReportSchemaVersion = 1;
/// Every random draw in a run comes from this generator, mapped to integers
/// and [0, 1) reals by hand so results do not depend on the standard
/// library's distribution implementations.
inline constexpr const char* kGeneratorName = "std::mt19937_64";

/// One simulated chain: its pool, its processed-swap registry and an event
/// counter.
struct ChainState {
    ChainId chain_id;
    PoolView pool;
    SwapRegistry registry;
    long long local_time = 0;
};

/// Simulator-side view of a swap, used for auditing and reporting only.
struct SwapTrack {
    SwapId swap_id;
    ChainId source_chain;
    ChainId dest_chain;
    AssetId asset_in;
    AssetId asset_out;
    long long initiated_tick = 0;
    long long resolved_tick = -1;
    Value value = 0.0;
    double amount_in = 0.0;
    double fee = 0.0;
    double amount_out = 0.0;
    double refunded = 0.0;
    double spot_in = 0.0;   // source price before the credit
    double spot_out = 0.0;  // destination price before the debit
    SwapStatus status = SwapStatus::Pending;
    bool debited = false;
    std::string note;

    /// 1 - amount_out / (amount_in * spot_in / spot_out); 0 when not finalized.
    double slippage() const;
};

struct DeviationPoint {
    long long tick = 0;
    std::uint64_t seq = 0;
    std::string kind;
    Value deviation = 0.0;
    Value outstanding = 0.0;  // value of credited swaps not yet debited or refunded
};

struct MessageStats {
    std::size_t sent = 0;
    std::size_t dropped = 0;
    std::size_t duplicated = 0;
    std::size_t delivered = 0;
    std::size_t duplicates_ignored = 0;
    std::size_t revoked_discards = 0;
    std::size_t refunds_sent = 0;
    std::size_t timeouts_fired = 0;
};

struct HandlerAudit {
    std::uint64_t seq = 0;
    long long tick = 0;
    std::string kind;
    std::vector<ChainId> touched;
    bool coordinated = false;  // multi-chain by design (LP events)
};

struct Report {
    int schema_version = kReportSchemaVersion;
    std::string generator = kGeneratorName;
    std::string scenario_name;
    RelayConfig relay;
    std::vector<SwapTrack> swaps;
    std::vector<SwapReceipt> receipts;
    std::map<ChainId, PoolView> final_pools;
    ShareLedger final_ledger;
    std::vector<DeviationPoint> trace;
    std::vector<std::string> violations;
    std::vector<std::string> event_errors;
    std::vector<std::string> locality_violations;
    std::size_t coordinated_events = 0;
    MessageStats stats;
    bool aborted = false;
    std::string state_dump;
    long long final_tick = 0;
    std::size_t steps = 0;
    std::size_t refunds = 0;
    std::size_t unresolved = 0;
    Value final_deviation = 0.0;

    bool quiescent() const { return unresolved == 0; }
    bool passed() const { return violations.empty() && !aborted; }
    double max_slippage() const;
    double max_abs_deviation() const;
};

struct StepOutcome {
    bool progressed = false;
    long long tick = 0;
    std::string kind;
};

/// Deterministic discrete-event world: chains as independent state machines
/// joined by a relay that can delay, drop, duplicate and reorder messages.
///
/// Queue items are ordered by (tick, insertion sequence). Each handler acts
/// on one chain through `chain()`, which records what it touched so the
/// locality audit can prove single-chain execution.
class World {
public:
    World(const Scenario& scenario, const RelayConfig& relay);

    /// Processes the earliest queued item. `progressed` is false when the
    /// queue is empty, past the stop tick, or the run has aborted.
    StepOutcome step();
    Report run();

    bool audit_locality() const;
    const std::vector<HandlerAudit>& handler_audits() const noexcept { return audits_; }

    /// Runs `fn` as an instrumented handler. Used for fixtures and tests.
    void run_handler(const std::string& kind, bool coordinated,
                     const std::function<void(World&)>& fn);

    /// Tracked access: counts as a touch by the running handler.
    ChainState& chain(const ChainId& id);
    /// Untracked read for diagnostics.
    const ChainState& peek(const ChainId& id) const;

    const std::map<ChainId, ChainState>& chains() const noexcept { return chains_; }
    const ShareLedger& ledger() const noexcept { return ledger_; }
    const std::map<SwapId, SwapTrack>& swaps() const noexcept { return tracks_; }
    const RelayConfig& relay() const noexcept { return relay_; }
    const MessageStats& stats() const noexcept { return stats_; }
    long long now() const noexcept { return now_; }
    bool aborted() const noexcept { return aborted_; }
    const std::vector<std::string>& violations() const noexcept { return violations_; }

    Value value_deviation() const;
    Value outstanding_value() const;

    /// Schedules a swap exactly as a scenario event would be.
    void schedule_swap(long long tick, const SwapEvent& swap);

private:
    struct ScheduledEvent {
        EventBody body;
    };
    struct Delivery {
        std::string wire;
        ChainId to;
    };
    struct TimeoutCheck {
        SwapId swap_id;
        ChainId source;
    };
    using Item = std::variant<ScheduledEvent, Delivery, TimeoutCheck>;
    struct Queued {
        long long tick = 0;
        std::uint64_t seq = 0;
        Item item;
    };
    struct Later {
        bool operator()(const Queued& a, const Queued& b) const {
            return a.tick != b.tick ? a.tick > b.tick : a.seq > b.seq;
        }
    };
    /// What the relay observed when it delivered a swap message.
    struct RelayRecord {
        std::optional<SwapStatus> dest_outcome;
        std::optional<SwapMessage> refund;
        bool revoked = false;
    };

    void push(long long tick, Item item);
    void send(const SwapMessage& msg, const ChainId& from, const ChainId& to);
    std::uint64_t next_u64();
    double next_unit();

    void handle(const ScheduledEvent& ev);
    void handle(const Delivery& d);
    void handle(const TimeoutCheck& t);
    void handle_swap(const SwapEvent& e);
    void handle_forward(const SwapMessage& msg);
    void handle_refund(const SwapMessage& msg);
    void resolve_refunded(SwapTrack& track, double amount);

    void check_invariants(const std::string& kind);
    std::vector<PoolView*> all_pools();

    Scenario scenario_;
    RelayConfig relay_;
    std::mt19937_64 rng_;
    std::map<ChainId, ChainState> chains_;
    ShareLedger ledger_;
    std::priority_queue<Queued, std::vector<Queued>, Later> queue_;
    std::uint64_t seq_ = 0;
    long long now_ = 0;
    std::map<std::pair<ChainId, ChainId>, long long> channel_tail_;
    std::map<SwapId, RelayRecord> relay_records_;
    std::map<SwapId, SwapTrack> tracks_;
    std::vector<SwapId> track_order_;
    std::map<ChainId, std::pair<std::size_t, std::size_t>> registry_sizes_;
    MessageStats stats_;
    std::vector<DeviationPoint> trace_;
    std::vector<std::string> violations_;
    std::vector<std::string> event_errors_;
    std::vector<HandlerAudit> audits_;
    std::set<ChainId>* touched_ = nullptr;
    std::size_t steps_ = 0;
    std::size_t completions_ = 0;
    bool aborted_ = false;
    std::string state_dump_;
};

Report run_scenario(const Scenario& scenario, const RelayConfig& relay);
Report run_scenario(const Scenario& scenario);

/// Report renderings. `structured` is JSON, `delimited` is CSV with
/// `#`-prefixed header lines, `table` is fixed-width text.
std::string report_to_json(const Report& report);
std::string report_to_csv(const Report& report);
std::string report_to_table(const Report& report);

}  // namespace xamm
