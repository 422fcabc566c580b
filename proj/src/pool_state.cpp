#include "xamm/pool_state.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "xamm/errors.hpp"

namespace xamm {

PoolView::PoolView(ChainId chain_id, double fee_rate) : chain_id_(std::move(chain_id)) {
    set_fee_rate(fee_rate);
}

void PoolView::set_fee_rate(double fee_rate) {
    if (!(fee_rate >= 0.0 && fee_rate < 1.0)) {
        throw DomainError("fee rate must be in [0, 1)");
    }
    fee_rate_ = fee_rate;
}

void PoolView::add_asset(AssetState asset) {
    if (hosts(asset.asset_id)) {
        throw ValidationError("duplicate asset '" + asset.asset_id + "' on chain '" + chain_id_ +
                              "'");
    }
    if (!(asset.balance > 0.0) || !(asset.reference > 0.0)) {
        throw DomainError("asset balance and reference must be positive");
    }
    asset.curve.validate();
    assets_.push_back(std::move(asset));
}

bool PoolView::hosts(const AssetId& id) const noexcept {
    return std::any_of(assets_.begin(), assets_.end(),
                       [&](const AssetState& a) { return a.asset_id == id; });
}

AssetState& PoolView::asset(const AssetId& id) {
    for (auto& a : assets_) {
        if (a.asset_id == id) return a;
    }
    throw UnknownAsset(id);
}

const AssetState& PoolView::asset(const AssetId& id) const {
    for (const auto& a : assets_) {
        if (a.asset_id == id) return a;
    }
    throw UnknownAsset(id);
}

Value PoolView::local_value() const {
    Value sum = 0.0;
    for (const auto& a : assets_) sum += a.local_value();
    return sum;
}

double ShareLedger::balance_of(const ProviderId& provider) const {
    auto it = positions_.find(provider);
    return it == positions_.end() ? 0.0 : it->second;
}

void ShareLedger::mint(const ProviderId& provider, double amount) {
    if (!(amount > 0.0)) throw DomainError("mint amount must be positive");
    positions_[provider] += amount;
    total_supply_ += amount;
}

void ShareLedger::burn(const ProviderId& provider, double amount) {
    if (!(amount > 0.0)) throw DomainError("burn amount must be positive");
    auto it = positions_.find(provider);
    if (it == positions_.end() || it->second < amount) {
        throw InsufficientShares("provider '" + provider + "' holds fewer than " +
                                 std::to_string(amount) + " shares");
    }
    it->second -= amount;
    total_supply_ -= amount;
    if (it->second == 0.0) positions_.erase(it);
}

ShareLedger ShareLedger::restore(double total_supply, std::map<ProviderId, double> positions) {
    ShareLedger l;
    l.total_supply_ = total_supply;
    l.positions_ = std::move(positions);
    return l;
}

Genesis init_pool(std::span<const Deposit> deposits, double fee_rate, const ProviderId& founder) {
    if (deposits.size() < 2) {
        throw ValidationError("a pool needs at least two assets");
    }
    Genesis g;
    std::set<std::pair<ChainId, AssetId>> seen;
    std::vector<double> amounts;
    for (const auto& d : deposits) {
        if (!(d.amount > 0.0) || !std::isfinite(d.amount)) {
            throw DomainError("deposit of '" + d.asset_id + "' must be positive");
        }
        if (!seen.insert({d.chain_id, d.asset_id}).second) {
            throw ValidationError("duplicate asset '" + d.asset_id + "' on chain '" + d.chain_id +
                                  "'");
        }
        Curve curve = d.kind == CurveKind::Stable
                          ? Curve::stable(d.weight, d.x_stable.value_or(d.amount), d.amplification)
                          : Curve::volatile_curve(d.weight);
        auto [it, inserted] = g.pools.try_emplace(d.chain_id, d.chain_id, fee_rate);
        it->second.add_asset(AssetState{d.asset_id, d.amount, d.amount, curve});
        amounts.push_back(d.amount);
    }
    g.ledger.mint(founder, initial_shares(amounts));
    return g;
}

Credit swap_credit(PoolView& pool, const AssetId& asset_id, double amount) {
    if (!(amount > 0.0) || !std::isfinite(amount)) {
        throw DomainError("swap amount must be positive");
    }
    AssetState& a = pool.asset(asset_id);
    Credit c;
    c.fee = pool.fee_rate() * amount;
    c.net_amount = amount - c.fee;
    const double before = a.balance;
    c.value = value_between(a.curve, before, before + c.net_amount);
    a.balance = before + c.net_amount;
    if (c.fee > 0.0) accrue_fee(pool, asset_id, c.fee);
    return c;
}

double swap_debit(PoolView& pool, const AssetId& asset_id, Value v, double min_out, double tol,
                  std::optional<double> claimed_out) {
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("swap value must be positive");
    AssetState& a = pool.asset(asset_id);
    double out = 0.0;
    double remaining = 0.0;
    if (claimed_out) {
        if (!verify_out(a.curve, a.balance, v, *claimed_out, tol)) {
            throw ValidationError("claimed output does not carry the message value");
        }
        out = *claimed_out;
        remaining = a.balance - out;
    } else {
        const Inversion inv = invert_out_detailed(a.curve, a.balance, v, tol);
        out = inv.amount;
        remaining = inv.remaining;
    }
    if (out < min_out) throw SlippageExceeded(out, min_out);
    a.balance = remaining;
    return out;
}

void accrue_fee(PoolView& pool, const AssetId& asset_id, double fee_amount) {
    if (!(fee_amount > 0.0) || !std::isfinite(fee_amount)) {
        throw DomainError("fee amount must be positive");
    }
    AssetState& a = pool.asset(asset_id);
    const double factor = (a.balance + fee_amount) / a.balance;
    a.reference += reference_shift(a.reference, a.balance, fee_amount);
    a.balance += fee_amount;
    a.curve = a.curve.scaled(factor);
}

double add_liquidity(std::span<PoolView* const> pools, ShareLedger& ledger,
                     const ProviderId& provider, double fraction) {
    if (!(fraction > 0.0) || !std::isfinite(fraction)) {
        throw DomainError("liquidity fraction must be positive");
    }
    if (!(ledger.total_supply() > 0.0)) throw DomainError("pool is not initialised");
    const double factor = 1.0 + fraction;
    const double minted = proportional_shares(fraction, 1.0, ledger.total_supply());
    for (PoolView* pool : pools) {
        for (AssetState& a : pool->assets()) {
            const double delta = fraction * a.balance;
            a.reference += reference_shift(a.reference, a.balance, delta);
            a.balance += delta;
            a.curve = a.curve.scaled(factor);
        }
    }
    ledger.mint(provider, minted);
    return minted;
}

std::vector<Withdrawal> remove_liquidity(std::span<PoolView* const> pools, ShareLedger& ledger,
                                         const ProviderId& provider, double shares) {
    if (!(shares > 0.0) || !std::isfinite(shares)) {
        throw DomainError("shares to remove must be positive");
    }
    if (ledger.balance_of(provider) < shares) {
        throw InsufficientShares("provider '" + provider + "' holds " +
                                 std::to_string(ledger.balance_of(provider)) + " shares, " +
                                 std::to_string(shares) + " requested");
    }
    const double fraction = shares / ledger.total_supply();
    if (!(fraction < 1.0)) {
        throw InsufficientLiquidity("removing the full share supply would drain the pool");
    }
    const double keep = 1.0 - fraction;
    for (const PoolView* pool : pools) {
        for (const AssetState& a : pool->assets()) {
            if (a.balance * keep < kDustFloor) {
                throw InsufficientLiquidity("withdrawal would leave '" + a.asset_id +
                                            "' below the dust floor");
            }
        }
    }

    std::vector<Withdrawal> out;
    for (PoolView* pool : pools) {
        for (AssetState& a : pool->assets()) {
            const double delta = -fraction * a.balance;
            a.reference += reference_shift(a.reference, a.balance, delta);
            a.balance += delta;
            a.curve = a.curve.scaled(keep);
            out.push_back({pool->chain_id(), a.asset_id, -delta});
        }
    }
    ledger.burn(provider, shares);
    return out;
}

Value value_deviation(std::span<const PoolView* const> pools) {
    Value sum = 0.0;
    for (const PoolView* pool : pools) sum += pool->local_value();
    return sum;
}

Value value_deviation(std::span<PoolView* const> pools) {
    Value sum = 0.0;
    for (const PoolView* pool : pools) sum += pool->local_value();
    return sum;
}

Value value_deviation(const std::map<ChainId, PoolView>& pools) {
    Value sum = 0.0;
    for (const auto& [id, pool] : pools) sum += pool.local_value();
    return sum;
}

}  // namespace xamm
