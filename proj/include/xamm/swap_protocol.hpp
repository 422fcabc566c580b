#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xamm/amm_math.hpp"
#include "xamm/pool_state.hpp"

namespace xamm {

using SwapId = std::string;

enum class SwapStatus { Pending, Finalized, Refunding, Refunded };

std::string_view to_string(SwapStatus status);
SwapStatus swap_status_from_string(std::string_view text);

/// The only data that crosses chains during a swap. `value` is the integral
/// of the source price over the credited interval.
struct SwapMessage {
    SwapId swap_id;
    ChainId source_chain;
    ChainId dest_chain;
    AssetId asset_in;
    AssetId asset_out;
    Value value = 0.0;
    double min_out = 0.0;
    SwapStatus status = SwapStatus::Pending;

    friend bool operator==(const SwapMessage&, const SwapMessage&) = default;
};

/// Wire form: one `key=value` line per field in declaration order, numbers as
/// shortest round-trip decimal strings.
std::string encode_message(const SwapMessage& msg);
SwapMessage decode_message(std::string_view wire);

struct SwapReceipt {
    SwapId swap_id;
    double amount_in = 0.0;
    double amount_out = 0.0;
    double fee_paid = 0.0;
    double effective_price = 0.0;  // amount_in / amount_out

    friend bool operator==(const SwapReceipt&, const SwapReceipt&) = default;
};

struct SwapRequest {
    AssetId asset_in;
    double amount = 0.0;
    ChainId dest_chain;
    AssetId asset_out;
    double min_out = 0.0;
};

/// What the source chain remembers about a swap it started.
struct SourceRecord {
    SwapMessage message;
    double amount_in = 0.0;
    double net_in = 0.0;
    double fee = 0.0;
    SwapStatus status = SwapStatus::Pending;
    double refunded = 0.0;
};

/// Destination-side result of a successful finalization.
struct Payout {
    SwapId swap_id;
    double amount_out = 0.0;
    Value value = 0.0;

    friend bool operator==(const Payout&, const Payout&) = default;
};

struct DestRecord {
    SwapStatus status = SwapStatus::Finalized;  // Finalized or Refunding
    std::optional<Payout> payout;
    std::optional<SwapMessage> refund;
    std::string reason;
};

using FinalizeResult = std::variant<Payout, SwapMessage>;

/// Per-chain record of processed swap ids. Entries are never removed.
class SwapRegistry {
public:
    SwapRegistry() = default;
    explicit SwapRegistry(ChainId chain_id) : chain_id_(std::move(chain_id)) {}

    const ChainId& chain_id() const noexcept { return chain_id_; }
    SwapId next_swap_id();

    std::map<SwapId, SourceRecord>& initiated() noexcept { return initiated_; }
    const std::map<SwapId, SourceRecord>& initiated() const noexcept { return initiated_; }
    std::map<SwapId, DestRecord>& processed() noexcept { return processed_; }
    const std::map<SwapId, DestRecord>& processed() const noexcept { return processed_; }

    const std::vector<std::string>& audit_log() const noexcept { return audit_log_; }
    void log(std::string entry) { audit_log_.push_back(std::move(entry)); }

private:
    ChainId chain_id_;
    unsigned long long nonce_ = 0;
    std::map<SwapId, SourceRecord> initiated_;
    std::map<SwapId, DestRecord> processed_;
    std::vector<std::string> audit_log_;
};

/// Credits the source asset and returns the Pending message to relay. The
/// source state is committed before the message exists.
SwapMessage initiate_swap(PoolView& source, SwapRegistry& registry, const SwapRequest& request);

/// Destination half. Idempotent per swap id: a redelivered message returns
/// the recorded outcome without touching the pool. Slippage, dust-floor and
/// malformed-message failures come back as a Refunding message.
/// `claimed_out` switches to verify-only mode.
FinalizeResult finalize_swap(PoolView& dest, SwapRegistry& registry, const SwapMessage& msg,
                             double tol = kDefaultValueTolerance,
                             std::optional<double> claimed_out = std::nullopt);

struct RefundOutcome {
    double amount = 0.0;
    bool applied = false;  // false for a redelivered refund
};

/// Withdraws from the source asset the amount whose value equals the message
/// value at the current balance, and marks the swap Refunded. Unknown swap
/// ids are logged and rejected with ValidationError.
RefundOutcome apply_refund(PoolView& source, SwapRegistry& registry, const SwapMessage& refund,
                           double tol = kDefaultValueTolerance);

/// Source learns (through relay attestation) that the destination paid out.
void mark_finalized(SwapRegistry& registry, const SwapId& swap_id);

SwapReceipt make_receipt(const SourceRecord& source, const Payout& payout);

}  // namespace xamm
