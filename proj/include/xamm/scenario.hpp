#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xamm/amm_math.hpp"
#include "xamm/pool_state.hpp"

namespace xamm {

inline constexpr int kScenarioSchemaVersion = 1;

struct RelayConfig {
    std::uint64_t seed = 0;
    long long min_delay = 1;
    long long max_delay = 1;
    double drop_rate = 0.0;
    double dup_rate = 0.0;
    bool reorder = false;
    long long refund_timeout = 0;  // 0 disables source-side timeouts

    void validate() const;
};

struct SwapEvent {
    ChainId from;
    AssetId asset_in;
    double amount = 0.0;
    ChainId to;
    AssetId asset_out;
    double min_out = 0.0;
};

struct AddLiquidityEvent {
    ProviderId provider;
    double fraction = 0.0;
};

struct RemoveLiquidityEvent {
    ProviderId provider;
    double shares = 0.0;
};

/// Empty `chain` applies to every chain (one single-chain step per chain).
struct SetFeeEvent {
    ChainId chain;
    double fee_rate = 0.0;
};

struct SetFaultsEvent {
    std::optional<double> drop_rate;
    std::optional<double> dup_rate;
    std::optional<bool> reorder;
};

/// Test fixture: overwrites a balance without going through the pool logic.
struct CorruptBalanceEvent {
    ChainId chain;
    AssetId asset;
    double balance = 0.0;
};

using EventBody = std::variant<SwapEvent, AddLiquidityEvent, RemoveLiquidityEvent, SetFeeEvent,
                               SetFaultsEvent, CorruptBalanceEvent>;

struct ScenarioEvent {
    long long tick = 0;
    EventBody body;
};

/// Swaps generated from the run seed: each picks a random source asset, a
/// random destination asset on another chain and an amount up to
/// `max_fraction` of the source's initial deposit.
struct RandomSwaps {
    int count = 0;
    long long start_tick = 1;
    long long spacing = 1;
    double max_fraction = 0.05;
};

struct ChainSpec {
    ChainId id;
    std::vector<Deposit> deposits;
};

struct Scenario {
    std::string name;
    double fee_rate = 0.0;
    double tolerance = kDefaultValueTolerance;
    ProviderId founder = "founder";
    std::vector<ChainSpec> chains;
    std::vector<ScenarioEvent> events;
    std::optional<RandomSwaps> random_swaps;
    long long max_ticks = 1'000'000;
    RelayConfig relay;

    /// Throws ValidationError naming the offending field.
    void validate() const;
    std::vector<Deposit> deposits() const;
};

/// Parses the JSON scenario format. Reals are decimal strings (or JSON
/// integers); JSON floating-point literals are rejected. Throws
/// ValidationError with a line/column or field-path diagnostic.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);

std::string_view event_kind(const EventBody& body);

}  // namespace xamm
