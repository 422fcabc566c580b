#include "xamm/relay_sim.hpp"

#include <algorithm>
#include <cmath>

#include "xamm/errors.hpp"
#include "xamm/snapshot.hpp"

namespace xamm {
namespace {

// Workload draws use their own stream so changing fault knobs does not
// change which swaps a scenario generates.
constexpr std::uint64_t kWorkloadStream = 0x9E3779B97F4A7C15ull;

double unit_from(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

bool transition_allowed(SwapStatus from, SwapStatus to) {
    switch (from) {
        case SwapStatus::Pending:
            return to == SwapStatus::Finalized || to == SwapStatus::Refunding;
        case SwapStatus::Refunding:
            return to == SwapStatus::Refunded;
        default:
            return false;
    }
}

}  // namespace

double SwapTrack::slippage() const {
    if (status != SwapStatus::Finalized || !(spot_out > 0.0) || !(amount_in > 0.0)) return 0.0;
    const double ideal = amount_in * spot_in / spot_out;
    return 1.0 - amount_out / ideal;
}

double Report::max_slippage() const {
    double m = 0.0;
    for (const auto& s : swaps) m = std::max(m, s.slippage());
    return m;
}

double Report::max_abs_deviation() const {
    double m = 0.0;
    for (const auto& p : trace) m = std::max(m, std::fabs(p.deviation - p.outstanding));
    return m;
}

World::World(const Scenario& scenario, const RelayConfig& relay)
    : scenario_(scenario), relay_(relay), rng_(relay.seed) {
    scenario_.validate();
    relay_.validate();

    const auto deposits = scenario_.deposits();
    Genesis g = init_pool(deposits, scenario_.fee_rate, scenario_.founder);
    ledger_ = std::move(g.ledger);
    for (const auto& spec : scenario_.chains) {
        ChainState cs;
        cs.chain_id = spec.id;
        auto it = g.pools.find(spec.id);
        cs.pool = it != g.pools.end() ? std::move(it->second) : PoolView(spec.id, scenario_.fee_rate);
        cs.registry = SwapRegistry(spec.id);
        chains_.emplace(spec.id, std::move(cs));
    }

    for (const auto& ev : scenario_.events) {
        if (const auto* fee = std::get_if<SetFeeEvent>(&ev.body); fee && fee->chain.empty()) {
            for (const auto& spec : scenario_.chains) {
                push(ev.tick, ScheduledEvent{SetFeeEvent{spec.id, fee->fee_rate}});
            }
            continue;
        }
        push(ev.tick, ScheduledEvent{ev.body});
    }

    if (scenario_.random_swaps && scenario_.random_swaps->count > 0) {
        const RandomSwaps& rs = *scenario_.random_swaps;
        std::mt19937_64 workload(relay_.seed ^ kWorkloadStream);
        auto pick = [&](std::size_t n) { return static_cast<std::size_t>(workload() % n); };
        for (int k = 0; k < rs.count; ++k) {
            const Deposit& src = deposits[pick(deposits.size())];
            std::vector<const Deposit*> targets;
            for (const auto& d : deposits) {
                if (d.chain_id != src.chain_id) targets.push_back(&d);
            }
            if (targets.empty()) {
                for (const auto& d : deposits) {
                    if (d.asset_id != src.asset_id) targets.push_back(&d);
                }
            }
            const Deposit& dst = *targets[pick(targets.size())];
            const double u = 1.0 - unit_from(workload());  // (0, 1]
            SwapEvent e{src.chain_id, src.asset_id, src.amount * rs.max_fraction * u,
                        dst.chain_id, dst.asset_id, 0.0};
            push(rs.start_tick + rs.spacing * k, ScheduledEvent{e});
        }
    }
    check_invariants("genesis");
}

void World::schedule_swap(long long tick, const SwapEvent& swap) {
    push(tick, ScheduledEvent{swap});
}

void World::push(long long tick, Item item) {
    queue_.push(Queued{tick, seq_++, std::move(item)});
}

std::uint64_t World::next_u64() { return rng_(); }

double World::next_unit() { return unit_from(rng_()); }

ChainState& World::chain(const ChainId& id) {
    auto it = chains_.find(id);
    if (it == chains_.end()) throw ValidationError("unknown chain '" + id + "'");
    if (touched_) touched_->insert(id);
    return it->second;
}

const ChainState& World::peek(const ChainId& id) const {
    auto it = chains_.find(id);
    if (it == chains_.end()) throw ValidationError("unknown chain '" + id + "'");
    return it->second;
}

std::vector<PoolView*> World::all_pools() {
    std::vector<PoolView*> out;
    for (auto& [id, cs] : chains_) out.push_back(&chain(id).pool);
    return out;
}

Value World::value_deviation() const {
    Value sum = 0.0;
    for (const auto& [id, cs] : chains_) sum += cs.pool.local_value();
    return sum;
}

Value World::outstanding_value() const {
    Value sum = 0.0;
    for (const auto& [id, t] : tracks_) {
        if (!t.debited && t.status != SwapStatus::Refunded) sum += t.value;
    }
    return sum;
}

void World::run_handler(const std::string& kind, bool coordinated,
                        const std::function<void(World&)>& fn) {
    std::set<ChainId> touched;
    touched_ = &touched;
    try {
        fn(*this);
    } catch (const AmmError& e) {
        event_errors_.push_back("tick " + std::to_string(now_) + " " + kind + ": " + e.what());
    }
    touched_ = nullptr;

    HandlerAudit audit;
    audit.seq = steps_;
    audit.tick = now_;
    audit.kind = kind;
    audit.touched.assign(touched.begin(), touched.end());
    audit.coordinated = coordinated;
    for (const auto& id : touched) ++chains_.at(id).local_time;
    audits_.push_back(std::move(audit));
}

bool World::audit_locality() const {
    return std::none_of(audits_.begin(), audits_.end(), [](const HandlerAudit& a) {
        return !a.coordinated && a.touched.size() > 1;
    });
}

void World::send(const SwapMessage& msg, const ChainId& from, const ChainId& to) {
    ++stats_.sent;
    const std::string wire = encode_message(msg);
    if (next_unit() < relay_.drop_rate) {
        ++stats_.dropped;
        return;
    }
    const int copies = next_unit() < relay_.dup_rate ? 2 : 1;
    if (copies == 2) ++stats_.duplicated;
    const auto span = static_cast<std::uint64_t>(relay_.max_delay - relay_.min_delay + 1);
    for (int c = 0; c < copies; ++c) {
        long long at = now_ + relay_.min_delay + static_cast<long long>(next_u64() % span);
        if (!relay_.reorder) {
            long long& tail = channel_tail_[{from, to}];
            at = std::max(at, tail);
            tail = at;
        }
        push(at, Delivery{wire, to});
    }
}

StepOutcome World::step() {
    if (aborted_ || queue_.empty()) return {};
    if (queue_.top().tick > scenario_.max_ticks) return {};
    Queued q = queue_.top();
    queue_.pop();
    now_ = std::max(now_, q.tick);

    StepOutcome out;
    out.progressed = true;
    out.tick = now_;
    if (const auto* ev = std::get_if<ScheduledEvent>(&q.item)) {
        out.kind = std::string(event_kind(ev->body));
        handle(*ev);
    } else if (const auto* d = std::get_if<Delivery>(&q.item)) {
        out.kind = "deliver";
        handle(*d);
    } else {
        out.kind = "timeout";
        handle(std::get<TimeoutCheck>(q.item));
    }
    ++steps_;
    check_invariants(out.kind);
    if (!trace_.empty()) trace_.back().seq = q.seq;
    return out;
}

void World::handle(const ScheduledEvent& ev) {
    std::visit(
        [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, SwapEvent>) {
                run_handler("swap", false, [&](World&) { handle_swap(e); });
            } else if constexpr (std::is_same_v<T, AddLiquidityEvent>) {
                run_handler("add_liquidity", true, [&](World& w) {
                    auto pools = w.all_pools();
                    add_liquidity(pools, w.ledger_, e.provider, e.fraction);
                });
            } else if constexpr (std::is_same_v<T, RemoveLiquidityEvent>) {
                run_handler("remove_liquidity", true, [&](World& w) {
                    auto pools = w.all_pools();
                    remove_liquidity(pools, w.ledger_, e.provider, e.shares);
                });
            } else if constexpr (std::is_same_v<T, SetFeeEvent>) {
                run_handler("set_fee", false,
                            [&](World& w) { w.chain(e.chain).pool.set_fee_rate(e.fee_rate); });
            } else if constexpr (std::is_same_v<T, SetFaultsEvent>) {
                run_handler("set_faults", false, [&](World& w) {
                    if (e.drop_rate) w.relay_.drop_rate = *e.drop_rate;
                    if (e.dup_rate) w.relay_.dup_rate = *e.dup_rate;
                    if (e.reorder) w.relay_.reorder = *e.reorder;
                });
            } else if constexpr (std::is_same_v<T, CorruptBalanceEvent>) {
                run_handler("corrupt_balance", false, [&](World& w) {
                    w.chain(e.chain).pool.asset(e.asset).balance = e.balance;
                });
            }
        },
        ev.body);
}

void World::handle_swap(const SwapEvent& e) {
    ChainState& src = chain(e.from);
    const double spot_in = src.pool.asset(e.asset_in).spot_price();
    const SwapMessage msg = initiate_swap(src.pool, src.registry,
                                          SwapRequest{e.asset_in, e.amount, e.to, e.asset_out,
                                                      e.min_out});
    const SourceRecord& rec = src.registry.initiated().at(msg.swap_id);

    SwapTrack t;
    t.swap_id = msg.swap_id;
    t.source_chain = e.from;
    t.dest_chain = e.to;
    t.asset_in = e.asset_in;
    t.asset_out = e.asset_out;
    t.initiated_tick = now_;
    t.value = msg.value;
    t.amount_in = rec.amount_in;
    t.fee = rec.fee;
    t.spot_in = spot_in;
    tracks_.emplace(msg.swap_id, t);
    track_order_.push_back(msg.swap_id);
    relay_records_[msg.swap_id];

    if (relay_.refund_timeout > 0) {
        push(now_ + relay_.refund_timeout, TimeoutCheck{msg.swap_id, e.from});
    }
    send(msg, e.from, e.to);
}

void World::handle(const Delivery& d) {
    run_handler("deliver", false, [&](World&) {
        const SwapMessage msg = decode_message(d.wire);
        if (msg.status == SwapStatus::Pending) {
            handle_forward(msg);
        } else if (msg.status == SwapStatus::Refunding) {
            handle_refund(msg);
        } else {
            throw ValidationError("relay carried a message with status " +
                                  std::string(to_string(msg.status)));
        }
    });
}

void World::handle_forward(const SwapMessage& msg) {
    RelayRecord& rr = relay_records_[msg.swap_id];
    if (rr.revoked) {
        ++stats_.revoked_discards;
        return;
    }
    ChainState& dst = chain(msg.dest_chain);
    ++stats_.delivered;
    if (dst.registry.processed().count(msg.swap_id)) {
        ++stats_.duplicates_ignored;
        finalize_swap(dst.pool, dst.registry, msg, scenario_.tolerance);
        return;
    }
    auto track_it = tracks_.find(msg.swap_id);
    if (track_it != tracks_.end() && dst.pool.hosts(msg.asset_out)) {
        track_it->second.spot_out = dst.pool.asset(msg.asset_out).spot_price();
    }

    const FinalizeResult result = finalize_swap(dst.pool, dst.registry, msg, scenario_.tolerance);
    if (const auto* payout = std::get_if<Payout>(&result)) {
        rr.dest_outcome = SwapStatus::Finalized;
        if (track_it != tracks_.end()) {
            SwapTrack& t = track_it->second;
            if (!transition_allowed(t.status, SwapStatus::Finalized)) {
                violations_.push_back("swap " + t.swap_id + " finalized from status " +
                                      std::string(to_string(t.status)));
            }
            t.status = SwapStatus::Finalized;
            t.debited = true;
            t.amount_out = payout->amount_out;
            t.resolved_tick = now_;
            ++completions_;
        }
    } else {
        const SwapMessage& refund = std::get<SwapMessage>(result);
        rr.dest_outcome = SwapStatus::Refunding;
        rr.refund = refund;
        if (track_it != tracks_.end()) {
            SwapTrack& t = track_it->second;
            t.status = SwapStatus::Refunding;
            t.note = dst.registry.processed().at(msg.swap_id).reason;
        }
        ++stats_.refunds_sent;
        send(refund, msg.dest_chain, msg.source_chain);
    }
}

void World::handle_refund(const SwapMessage& msg) {
    ChainState& src = chain(msg.source_chain);
    ++stats_.delivered;
    const RefundOutcome r = apply_refund(src.pool, src.registry, msg, scenario_.tolerance);
    if (!r.applied) {
        ++stats_.duplicates_ignored;
        return;
    }
    if (auto it = tracks_.find(msg.swap_id); it != tracks_.end()) {
        resolve_refunded(it->second, r.amount);
    }
}

void World::handle(const TimeoutCheck& t) {
    run_handler("timeout", false, [&](World&) {
        ++stats_.timeouts_fired;
        ChainState& src = chain(t.source);
        const SourceRecord& rec = src.registry.initiated().at(t.swap_id);
        if (rec.status != SwapStatus::Pending) return;

        RelayRecord& rr = relay_records_[t.swap_id];
        auto track_it = tracks_.find(t.swap_id);
        if (rr.dest_outcome == SwapStatus::Finalized) {
            mark_finalized(src.registry, t.swap_id);
            return;
        }
        SwapMessage refund;
        if (rr.dest_outcome == SwapStatus::Refunding) {
            refund = *rr.refund;
        } else {
            // Nothing reached the destination: revoke in-flight copies and
            // turn the lost message into a refund claim.
            rr.revoked = true;
            refund = rec.message;
            refund.status = SwapStatus::Refunding;
            if (track_it != tracks_.end()) {
                track_it->second.status = SwapStatus::Refunding;
                track_it->second.note = "refund timeout";
            }
        }
        const RefundOutcome r = apply_refund(src.pool, src.registry, refund, scenario_.tolerance);
        if (r.applied && track_it != tracks_.end()) resolve_refunded(track_it->second, r.amount);
    });
}

void World::resolve_refunded(SwapTrack& t, double amount) {
    if (!transition_allowed(t.status, SwapStatus::Refunded)) {
        violations_.push_back("swap " + t.swap_id + " refunded from status " +
                              std::string(to_string(t.status)));
    }
    t.status = SwapStatus::Refunded;
    t.refunded = amount;
    t.resolved_tick = now_;
    ++completions_;
}

void World::check_invariants(const std::string& kind) {
    const std::size_t before = violations_.size();
    double weight_scale = 1.0;
    bool balances_ok = true;

    for (const auto& [id, cs] : chains_) {
        for (const auto& a : cs.pool.assets()) {
            const std::string where = "asset " + a.asset_id + " on " + id;
            if (!std::isfinite(a.balance) || a.balance < kDustFloor) {
                violations_.push_back(where + ": balance " + std::to_string(a.balance) +
                                      " below dust floor");
                balances_ok = false;
            }
            if (!std::isfinite(a.reference) || !(a.reference > 0.0)) {
                violations_.push_back(where + ": reference " + std::to_string(a.reference) +
                                      " not positive");
                balances_ok = false;
            }
            try {
                a.curve.validate();
            } catch (const DomainError& e) {
                violations_.push_back(where + ": " + e.what());
                balances_ok = false;
            }
            weight_scale = std::max(weight_scale, a.curve.weight);
        }
        auto& sizes = registry_sizes_[id];
        const std::size_t ini = cs.registry.initiated().size();
        const std::size_t proc = cs.registry.processed().size();
        if (ini < sizes.first || proc < sizes.second) {
            violations_.push_back("registry on " + id + " shrank");
        }
        sizes = {ini, proc};
    }

    double pos_sum = 0.0;
    for (const auto& [p, s] : ledger_.positions()) pos_sum += s;
    if (!(ledger_.total_supply() > 0.0) ||
        std::fabs(pos_sum - ledger_.total_supply()) > 1e-9 * ledger_.total_supply()) {
        violations_.push_back("share ledger positions do not sum to supply");
    }

    DeviationPoint p;
    p.tick = now_;
    p.kind = kind;
    p.outstanding = outstanding_value();
    if (balances_ok) {
        p.deviation = value_deviation();
        const double tol = 1e-9 * static_cast<double>(steps_ + 1) * weight_scale;
        if (!(std::fabs(p.deviation - p.outstanding) <= tol)) {
            violations_.push_back("value deviation " + std::to_string(p.deviation) +
                                  " differs from in-flight value " +
                                  std::to_string(p.outstanding));
        }
    } else {
        p.deviation = std::nan("");
    }
    trace_.push_back(p);

    if (violations_.size() > before) {
        for (std::size_t i = before; i < violations_.size(); ++i) {
            violations_[i] = "tick " + std::to_string(now_) + " after " + kind + ": " +
                             violations_[i];
        }
        aborted_ = true;
        std::map<ChainId, PoolView> pools;
        for (const auto& [id, cs] : chains_) pools.emplace(id, cs.pool);
        try {
            state_dump_ = snapshot_to_json(pools, ledger_);
        } catch (const AmmError&) {
            state_dump_.clear();
        }
    }
}

Report World::run() {
    while (step().progressed) {
    }

    Report r;
    r.scenario_name = scenario_.name;
    r.relay = relay_;
    r.relay.seed = relay_.seed;
    for (const auto& id : track_order_) {
        const SwapTrack& t = tracks_.at(id);
        r.swaps.push_back(t);
        if (t.status == SwapStatus::Finalized) {
            const SourceRecord& src = peek(t.source_chain).registry.initiated().at(id);
            r.receipts.push_back(make_receipt(src, Payout{id, t.amount_out, t.value}));
        }
        if (t.status == SwapStatus::Refunded) ++r.refunds;
        if (t.status == SwapStatus::Pending || t.status == SwapStatus::Refunding) ++r.unresolved;
    }
    for (const auto& [id, cs] : chains_) r.final_pools.emplace(id, cs.pool);
    r.final_ledger = ledger_;
    r.trace = trace_;
    r.violations = violations_;
    r.event_errors = event_errors_;
    for (const auto& a : audits_) {
        if (a.coordinated) {
            ++r.coordinated_events;
        } else if (a.touched.size() > 1) {
            std::string chains;
            for (const auto& c : a.touched) chains += (chains.empty() ? "" : ",") + c;
            r.locality_violations.push_back("tick " + std::to_string(a.tick) + " " + a.kind +
                                            " touched " + chains);
        }
    }
    r.stats = stats_;
    r.aborted = aborted_;
    r.state_dump = state_dump_;
    r.final_tick = now_;
    r.steps = steps_;
    r.final_deviation = aborted_ ? std::nan("") : value_deviation();
    return r;
}

Report run_scenario(const Scenario& scenario, const RelayConfig& relay) {
    World world(scenario, relay);
    return world.run();
}

Report run_scenario(const Scenario& scenario) { return run_scenario(scenario, scenario.relay); }

}  // namespace xamm
