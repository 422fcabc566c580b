#include "xamm/swap_protocol.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "xamm/decimal.hpp"
#include "xamm/errors.hpp"

namespace xamm {
namespace {

constexpr std::array<std::string_view, 8> kWireFields = {
    "swap_id", "source_chain", "dest_chain", "asset_in",
    "asset_out", "value", "min_out", "status",
};

void check_token(const std::string& s, std::string_view field) {
    if (s.empty() || s.find_first_of("\n\r=") != std::string::npos) {
        throw ValidationError("message field '" + std::string(field) +
                              "' must be non-empty without newlines or '='");
    }
}

}  // namespace

std::string_view to_string(SwapStatus status) {
    switch (status) {
        case SwapStatus::Pending: return "Pending";
        case SwapStatus::Finalized: return "Finalized";
        case SwapStatus::Refunding: return "Refunding";
        case SwapStatus::Refunded: return "Refunded";
    }
    return "?";
}

SwapStatus swap_status_from_string(std::string_view text) {
    if (text == "Pending") return SwapStatus::Pending;
    if (text == "Finalized") return SwapStatus::Finalized;
    if (text == "Refunding") return SwapStatus::Refunding;
    if (text == "Refunded") return SwapStatus::Refunded;
    throw ValidationError("unknown swap status '" + std::string(text) + "'");
}

std::string encode_message(const SwapMessage& msg) {
    check_token(msg.swap_id, "swap_id");
    check_token(msg.source_chain, "source_chain");
    check_token(msg.dest_chain, "dest_chain");
    check_token(msg.asset_in, "asset_in");
    check_token(msg.asset_out, "asset_out");
    std::string out;
    out += "swap_id=" + msg.swap_id + "\n";
    out += "source_chain=" + msg.source_chain + "\n";
    out += "dest_chain=" + msg.dest_chain + "\n";
    out += "asset_in=" + msg.asset_in + "\n";
    out += "asset_out=" + msg.asset_out + "\n";
    out += "value=" + format_decimal(msg.value) + "\n";
    out += "min_out=" + format_decimal(msg.min_out) + "\n";
    out += "status=" + std::string(to_string(msg.status)) + "\n";
    return out;
}

SwapMessage decode_message(std::string_view wire) {
    std::array<std::optional<std::string>, kWireFields.size()> fields;
    std::size_t line_no = 0;
    while (!wire.empty()) {
        ++line_no;
        const auto nl = wire.find('\n');
        std::string_view line = wire.substr(0, nl);
        wire = nl == std::string_view::npos ? std::string_view{} : wire.substr(nl + 1);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ValidationError("message line " + std::to_string(line_no) + ": missing '='");
        }
        const auto key = line.substr(0, eq);
        std::size_t idx = 0;
        while (idx < kWireFields.size() && kWireFields[idx] != key) ++idx;
        if (idx == kWireFields.size()) {
            throw ValidationError("message line " + std::to_string(line_no) + ": unknown field '" +
                                  std::string(key) + "'");
        }
        if (fields[idx]) {
            throw ValidationError("message field '" + std::string(key) + "' repeated");
        }
        fields[idx] = std::string(line.substr(eq + 1));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (!fields[i]) {
            throw ValidationError("message field '" + std::string(kWireFields[i]) + "' missing");
        }
    }
    SwapMessage msg;
    msg.swap_id = *fields[0];
    msg.source_chain = *fields[1];
    msg.dest_chain = *fields[2];
    msg.asset_in = *fields[3];
    msg.asset_out = *fields[4];
    try {
        msg.value = parse_decimal(*fields[5]);
        msg.min_out = parse_decimal(*fields[6]);
    } catch (const DomainError& e) {
        throw ValidationError(std::string("message number: ") + e.what());
    }
    msg.status = swap_status_from_string(*fields[7]);
    check_token(msg.swap_id, "swap_id");
    check_token(msg.source_chain, "source_chain");
    check_token(msg.dest_chain, "dest_chain");
    check_token(msg.asset_in, "asset_in");
    check_token(msg.asset_out, "asset_out");
    return msg;
}

SwapId SwapRegistry::next_swap_id() {
    return chain_id_ + ":" + std::to_string(++nonce_);
}

SwapMessage initiate_swap(PoolView& source, SwapRegistry& registry, const SwapRequest& request) {
    if (!(request.amount > 0.0) || !std::isfinite(request.amount)) {
        throw DomainError("swap amount must be positive");
    }
    if (!(request.min_out >= 0.0)) throw DomainError("min_out must be non-negative");
    if (!source.hosts(request.asset_in)) throw UnknownAsset(request.asset_in);

    const Credit credit = swap_credit(source, request.asset_in, request.amount);

    SwapMessage msg;
    msg.swap_id = registry.next_swap_id();
    msg.source_chain = source.chain_id();
    msg.dest_chain = request.dest_chain;
    msg.asset_in = request.asset_in;
    msg.asset_out = request.asset_out;
    msg.value = credit.value;
    msg.min_out = request.min_out;
    msg.status = SwapStatus::Pending;

    SourceRecord rec;
    rec.message = msg;
    rec.amount_in = request.amount;
    rec.net_in = credit.net_amount;
    rec.fee = credit.fee;
    registry.initiated().emplace(msg.swap_id, rec);
    return msg;
}

FinalizeResult finalize_swap(PoolView& dest, SwapRegistry& registry, const SwapMessage& msg,
                             double tol, std::optional<double> claimed_out) {
    if (auto it = registry.processed().find(msg.swap_id); it != registry.processed().end()) {
        if (it->second.payout) return *it->second.payout;
        return *it->second.refund;
    }
    if (msg.status != SwapStatus::Pending) {
        throw ValidationError("finalize_swap expects a Pending message, got " +
                              std::string(to_string(msg.status)));
    }

    auto refund_with = [&](std::string reason) -> FinalizeResult {
        SwapMessage refund = msg;
        refund.status = SwapStatus::Refunding;
        DestRecord rec;
        rec.status = SwapStatus::Refunding;
        rec.refund = refund;
        rec.reason = std::move(reason);
        registry.processed().emplace(msg.swap_id, std::move(rec));
        return refund;
    };

    if (msg.dest_chain != dest.chain_id()) return refund_with("message addressed to another chain");
    if (!dest.hosts(msg.asset_out)) return refund_with("unknown asset '" + msg.asset_out + "'");
    if (!(msg.value > 0.0) || !std::isfinite(msg.value)) return refund_with("non-positive value");

    try {
        const double out = swap_debit(dest, msg.asset_out, msg.value, msg.min_out, tol, claimed_out);
        DestRecord rec;
        rec.status = SwapStatus::Finalized;
        rec.payout = Payout{msg.swap_id, out, msg.value};
        registry.processed().emplace(msg.swap_id, rec);
        return *rec.payout;
    } catch (const SlippageExceeded& e) {
        return refund_with(e.what());
    } catch (const InsufficientLiquidity& e) {
        return refund_with(e.what());
    } catch (const NoConvergence& e) {
        return refund_with(e.what());
    } catch (const ValidationError& e) {
        return refund_with(e.what());
    }
}

RefundOutcome apply_refund(PoolView& source, SwapRegistry& registry, const SwapMessage& refund,
                           double tol) {
    auto it = registry.initiated().find(refund.swap_id);
    if (it == registry.initiated().end()) {
        registry.log("rejected refund for unknown swap " + refund.swap_id);
        throw ValidationError("refund for unknown swap id '" + refund.swap_id + "'");
    }
    SourceRecord& rec = it->second;
    if (rec.status == SwapStatus::Refunded) return {rec.refunded, false};
    if (refund.status != SwapStatus::Refunding) {
        registry.log("rejected refund for " + refund.swap_id + " with status " +
                     std::string(to_string(refund.status)));
        throw ValidationError("refund message must have status Refunding");
    }
    if (rec.status == SwapStatus::Finalized) {
        registry.log("rejected refund for finalized swap " + refund.swap_id);
        throw ValidationError("swap '" + refund.swap_id + "' was already finalized");
    }
    if (refund.value != rec.message.value || refund.asset_in != rec.message.asset_in) {
        registry.log("rejected refund for " + refund.swap_id + ": payload does not match");
        throw ValidationError("refund payload does not match the initiated swap");
    }

    AssetState& a = source.asset(rec.message.asset_in);
    const Inversion inv = invert_out_detailed(a.curve, a.balance, rec.message.value, tol);
    a.balance = inv.remaining;
    rec.status = SwapStatus::Refunded;
    rec.refunded = inv.amount;
    return {inv.amount, true};
}

void mark_finalized(SwapRegistry& registry, const SwapId& swap_id) {
    auto it = registry.initiated().find(swap_id);
    if (it == registry.initiated().end()) {
        throw ValidationError("unknown swap id '" + swap_id + "'");
    }
    if (it->second.status == SwapStatus::Pending) it->second.status = SwapStatus::Finalized;
}

SwapReceipt make_receipt(const SourceRecord& source, const Payout& payout) {
    SwapReceipt r;
    r.swap_id = payout.swap_id;
    r.amount_in = source.amount_in;
    r.amount_out = payout.amount_out;
    r.fee_paid = source.fee;
    r.effective_price = payout.amount_out > 0.0 ? source.amount_in / payout.amount_out : 0.0;
    return r;
}

}  // namespace xamm
