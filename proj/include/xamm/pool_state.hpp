#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xamm/amm_math.hpp"
#include "xamm/curve.hpp"

namespace xamm {

using AssetId = std::string;
using ChainId = std::string;
using ProviderId = std::string;

/// One asset's pool state on its home chain.
struct AssetState {
    AssetId asset_id;
    double balance = 0.0;    // current quantity
    double reference = 0.0;  // lower integration bound, moved by liquidity and fee events
    Curve curve;

    /// Value traded into (positive) or out of this asset since the reference.
    Value local_value() const { return value_between(curve, reference, balance); }
    double spot_price() const { return price(curve, balance); }

    friend bool operator==(const AssetState&, const AssetState&) = default;
};

/// All pool assets hosted on one chain.
class PoolView {
public:
    PoolView() = default;
    PoolView(ChainId chain_id, double fee_rate);

    const ChainId& chain_id() const noexcept { return chain_id_; }

    double fee_rate() const noexcept { return fee_rate_; }
    void set_fee_rate(double fee_rate);

    void add_asset(AssetState asset);
    bool hosts(const AssetId& id) const noexcept;
    AssetState& asset(const AssetId& id);
    const AssetState& asset(const AssetId& id) const;

    const std::vector<AssetState>& assets() const noexcept { return assets_; }
    std::vector<AssetState>& assets() noexcept { return assets_; }

    /// Sum of the local values of every hosted asset.
    Value local_value() const;

    friend bool operator==(const PoolView&, const PoolView&) = default;

private:
    ChainId chain_id_;
    double fee_rate_ = 0.0;
    std::vector<AssetState> assets_;
};

/// LP share (SINS) supply and positions. Lives above the chains: it is the
/// simulator's logical ledger, not hosted state.
class ShareLedger {
public:
    double total_supply() const noexcept { return total_supply_; }
    const std::map<ProviderId, double>& positions() const noexcept { return positions_; }
    double balance_of(const ProviderId& provider) const;

    void mint(const ProviderId& provider, double amount);
    void burn(const ProviderId& provider, double amount);

    /// Reinstates a checkpointed ledger verbatim.
    static ShareLedger restore(double total_supply, std::map<ProviderId, double> positions);

    friend bool operator==(const ShareLedger&, const ShareLedger&) = default;

private:
    double total_supply_ = 0.0;
    std::map<ProviderId, double> positions_;
};

struct Deposit {
    ChainId chain_id;
    AssetId asset_id;
    double amount = 0.0;
    CurveKind kind = CurveKind::Volatile;
    double weight = 1.0;
    double amplification = 0.0;       // stable only
    std::optional<double> x_stable;   // stable only; defaults to the deposit amount
};

struct Genesis {
    std::map<ChainId, PoolView> pools;
    ShareLedger ledger;
};

/// Builds the per-chain pools from the founding deposits. Every asset starts
/// with balance == reference == amount; the founder receives the geometric
/// mean of all amounts as shares.
Genesis init_pool(std::span<const Deposit> deposits, double fee_rate,
                  const ProviderId& founder = "founder");

struct Credit {
    Value value = 0.0;       // the cross-chain payload
    double net_amount = 0.0; // amount that moved the curve
    double fee = 0.0;        // amount retained through accrue_fee
};

/// Source half of a swap. Adds `amount` to the asset, retains the fee and
/// returns the value of the post-fee deposit.
Credit swap_credit(PoolView& pool, const AssetId& asset_id, double amount);

/// Destination half of a swap. Withdraws the amount carrying `v` units of
/// value. The state is unchanged when SlippageExceeded or
/// InsufficientLiquidity is thrown. With `claimed_out` set, that amount is
/// verified instead of searched for; a failed verification throws
/// ValidationError.
double swap_debit(PoolView& pool, const AssetId& asset_id, Value v, double min_out,
                  double tol = kDefaultValueTolerance,
                  std::optional<double> claimed_out = std::nullopt);

/// Adds a retained fee to the balance and moves the reference (and the
/// stable-curve centre and width) by the same factor, leaving the local value
/// unchanged.
void accrue_fee(PoolView& pool, const AssetId& asset_id, double fee_amount);

/// All-asset proportional deposit: every balance grows by `fraction` of
/// itself. Returns the shares minted to `provider`.
double add_liquidity(std::span<PoolView* const> pools, ShareLedger& ledger,
                     const ProviderId& provider, double fraction);

struct Withdrawal {
    ChainId chain_id;
    AssetId asset_id;
    double amount = 0.0;
};

/// Burns `shares` from `provider` and pays out the same fraction of every
/// balance.
std::vector<Withdrawal> remove_liquidity(std::span<PoolView* const> pools, ShareLedger& ledger,
                                         const ProviderId& provider, double shares);

/// Sum over all assets of value_between(reference, balance). Zero for a
/// quiesced pool.
Value value_deviation(std::span<const PoolView* const> pools);
Value value_deviation(std::span<PoolView* const> pools);
Value value_deviation(const std::map<ChainId, PoolView>& pools);

}  // namespace xamm
