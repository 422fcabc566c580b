// Acceptance suite: one PASS/FAIL line per criterion, exit status 0 only if
// every criterion passes within its tolerance and time budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "support.hpp"
#include "xamm/amm_math.hpp"
#include "xamm/errors.hpp"
#include "xamm/oracle.hpp"
#include "xamm/pool_state.hpp"
#include "xamm/relay_sim.hpp"
#include "xamm/swap_protocol.hpp"

using namespace xamm;
using xamm::testing::Rng;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double rel_err(double got, double want, double floor = 0.0) {
    const double scale = std::max({std::fabs(got), std::fabs(want), floor});
    return scale == 0.0 ? 0.0 : std::fabs(got - want) / scale;
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Deposit deposit(const std::string& chain, const std::string& asset, double amount,
                CurveKind kind = CurveKind::Volatile, double weight = 1.0, double amp = 0.0) {
    Deposit d;
    d.chain_id = chain;
    d.asset_id = asset;
    d.amount = amount;
    d.kind = kind;
    d.weight = weight;
    d.amplification = amp;
    return d;
}

// 1. Depositing (200, 200) into a stable (100, 100) pair.
Outcome stable_deposit() {
    Genesis g = init_pool(std::vector<Deposit>{deposit("eth", "USDC", 100.0, CurveKind::Stable, 1.0, 10.0),
                                               deposit("arb", "DAI", 100.0, CurveKind::Stable, 1.0, 10.0)},
                          0.0, "founder");
    std::vector<PoolView*> pools;
    for (auto& [id, p] : g.pools) pools.push_back(&p);
    add_liquidity(pools, g.ledger, "lp", 200.0 / 100.0);
    bool exact = true;
    std::string detail;
    for (const auto& [id, p] : g.pools) {
        const AssetState& a = p.assets().front();
        exact = exact && a.curve.x_stable == 300.0 && a.reference == 300.0 && a.balance == 300.0;
        detail += a.asset_id + " x_stable=" + fmt("%.17g", a.curve.x_stable) +
                  " reference=" + fmt("%.17g", a.reference) + " ";
    }
    return {exact, detail + "(exact)"};
}

// 2. value(a, b) + value(b, c) == value(a, c).
Outcome additivity() {
    Rng rng(2);
    double worst[2] = {0.0, 0.0};
    for (int kind = 0; kind < 2; ++kind) {
        for (int k = 0; k < 1000; ++k) {
            const Curve c = kind == 0 ? rng.volatile_curve() : rng.stable_curve();
            const double scale = c.is_stable() ? c.x_stable : 1000.0;
            const double a = scale * rng.log_uniform(1e-3, 1e3);
            const double b = scale * rng.log_uniform(1e-3, 1e3);
            const double d = scale * rng.log_uniform(1e-3, 1e3);
            const double lhs = value_between(c, a, b) + value_between(c, b, d);
            const double rhs = value_between(c, a, d);
            // cancellation between the two legs is bounded by their magnitudes
            const double mag = std::fabs(value_between(c, a, b)) + std::fabs(value_between(c, b, d));
            worst[kind] = std::max(worst[kind], rel_err(lhs, rhs, mag));
        }
    }
    const double w = std::max(worst[0], worst[1]);
    return {w <= 1e-9, "max rel err volatile " + fmt("%.2e", worst[0]) + " stable " +
                           fmt("%.2e", worst[1]) + " (tol 1e-9)"};
}

// 3. Cross-chain output vs the direct computation, the brute-force oracle and the
// constant-product formula.
Outcome swap_output() {
    Rng rng(3);
    std::size_t mismatches = 0;
    double worst_brute = 0.0;
    double worst_cp = 0.0;
    std::size_t equal_weight = 0;
    for (int k = 0; k < 1000; ++k) {
        const bool same_weight = k % 4 == 0;
        const double wi = rng.log_uniform(0.2, 5.0);
        const double wj = same_weight ? wi : rng.log_uniform(0.2, 5.0);
        const double bi = rng.log_uniform(1.0, 1e7);
        const double bj = rng.log_uniform(1.0, 1e7);
        const double amount = bi * rng.log_uniform(1e-6, 3.0);

        PoolView src("s", 0.0);
        PoolView dst("d", 0.0);
        src.add_asset({"I", bi, bi, Curve::volatile_curve(wi)});
        dst.add_asset({"J", bj, bj, Curve::volatile_curve(wj)});
        SwapRegistry sreg("s");
        SwapRegistry dreg("d");
        const SwapMessage sent = initiate_swap(src, sreg, SwapRequest{"I", amount, "d", "J", 0.0});
        const SwapMessage received = decode_message(encode_message(sent));
        const FinalizeResult result = finalize_swap(dst, dreg, received);
        const auto* payout = std::get_if<Payout>(&result);
        if (!payout) {
            ++mismatches;
            continue;
        }
        const double direct = atomic_swap_out(Curve::volatile_curve(wi), bi, amount,
                                              Curve::volatile_curve(wj), bj);
        if (payout->amount_out != direct) ++mismatches;

        const double brute = oracle::brute_invert(Curve::volatile_curve(wj), bj, sent.value,
                                                  1e-12 * payout->amount_out);
        worst_brute = std::max(worst_brute, rel_err(payout->amount_out, brute));
        if (same_weight) {
            ++equal_weight;
            worst_cp = std::max(worst_cp, rel_err(payout->amount_out,
                                                  oracle::constant_product_out(bi, bj, amount)));
        }
    }
    const bool pass = mismatches == 0 && worst_brute <= 1e-9 && worst_cp <= 1e-9;
    return {pass, std::to_string(mismatches) + " bit mismatches / 1000, brute-force rel err " +
                      fmt("%.2e", worst_brute) + ", constant-product rel err " +
                      fmt("%.2e", worst_cp) + " over " + std::to_string(equal_weight) +
                      " equal-weight cases (tol 1e-9)"};
}

Scenario three_chain(std::uint64_t seed, double fee) {
    Scenario s;
    s.name = "acceptance";
    s.fee_rate = fee;
    s.chains = {
        {"a", {deposit("a", "ETH", 1000.0), deposit("a", "USDC", 1e6, CurveKind::Stable, 1.0, 1e5)}},
        {"b", {deposit("b", "ARB", 5e5, CurveKind::Volatile, 0.5),
               deposit("b", "DAI", 1e6, CurveKind::Stable, 1.0, 1e5)}},
        {"c", {deposit("c", "SOL", 2e4, CurveKind::Volatile, 2.0)}},
    };
    s.random_swaps = RandomSwaps{100, 1, 1, 0.05};
    s.relay.seed = seed;
    return s;
}

// 4. Value conservation at quiescence.
Outcome conservation() {
    double worst = 0.0;
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Report r = run_scenario(three_chain(seed, 0.0));
        ok = ok && r.passed() && r.quiescent() && r.swaps.size() == 100;
        worst = std::max(worst, std::fabs(r.final_deviation));
    }
    return {ok && worst <= 1e-7, "20 seeds x 100 swaps, max |deviation| " + fmt("%.2e", worst) +
                                     " (tol 1e-7)"};
}

// 5. Liquidity and fee events leave per-asset local value unchanged.
Outcome neutrality() {
    Rng rng(5);
    double worst_event = 0.0;
    double worst_trip = 0.0;
    int events = 0;
    while (events < 1000) {
        std::vector<Deposit> d;
        const int n = 2 + static_cast<int>(rng.index(3));
        for (int i = 0; i < n; ++i) {
            const double amt = rng.log_uniform(1.0, 1e6);
            const std::string chain = "c" + std::to_string(i);
            d.push_back(rng.unit() < 0.5
                            ? deposit(chain, "T", amt, CurveKind::Volatile, rng.log_uniform(0.2, 5.0))
                            : deposit(chain, "T", amt, CurveKind::Stable, rng.log_uniform(0.2, 5.0),
                                      amt * rng.log_uniform(0.01, 2.0)));
        }
        Genesis g = init_pool(d, 0.0, "founder");
        std::vector<PoolView*> pools;
        for (auto& [id, p] : g.pools) pools.push_back(&p);
        // move every balance away from its reference so local values are non-trivial
        for (PoolView* p : pools) {
            AssetState& a = p->assets().front();
            a.balance = a.reference * std::exp((rng.unit() < 0.5 ? -1 : 1) * rng.uniform(0.1, 0.7));
        }
        for (int step = 0; step < 50; ++step, ++events) {
            std::vector<double> before;
            for (PoolView* p : pools) before.push_back(p->assets().front().local_value());
            const double u = rng.unit();
            if (u < 1.0 / 3) {
                const auto start = g.pools;
                const double supply = g.ledger.total_supply();
                const double minted = add_liquidity(pools, g.ledger, "lp", rng.log_uniform(1e-3, 2.0));
                for (std::size_t i = 0; i < pools.size(); ++i) {
                    worst_event = std::max(worst_event,
                                           rel_err(pools[i]->assets().front().local_value(), before[i]));
                }
                remove_liquidity(pools, g.ledger, "lp", minted);
                for (const auto& [id, p] : g.pools) {
                    const AssetState& a = p.assets().front();
                    const AssetState& s = start.at(id).assets().front();
                    for (auto [x, y] : {std::pair{a.balance, s.balance}, {a.reference, s.reference},
                                        {a.curve.x_stable, s.curve.x_stable},
                                        {a.curve.amplification, s.curve.amplification},
                                        {a.local_value(), s.local_value()}}) {
                        worst_trip = std::max(worst_trip, rel_err(x, y));
                    }
                }
                worst_trip = std::max(worst_trip, rel_err(g.ledger.total_supply(), supply));
                continue;
            }
            if (u < 2.0 / 3) {
                const double shares = g.ledger.balance_of("founder") * rng.uniform(0.001, 0.2);
                remove_liquidity(pools, g.ledger, "founder", shares);
            } else {
                PoolView* p = pools[rng.index(pools.size())];
                accrue_fee(*p, "T", p->assets().front().balance * rng.log_uniform(1e-6, 0.1));
            }
            for (std::size_t i = 0; i < pools.size(); ++i) {
                worst_event = std::max(worst_event,
                                       rel_err(pools[i]->assets().front().local_value(), before[i]));
            }
        }
    }
    return {worst_event <= 1e-9 && worst_trip <= 1e-9,
            std::to_string(events) + " events, max local-value rel change " + fmt("%.2e", worst_event) +
                ", add/remove round-trip rel err " + fmt("%.2e", worst_trip) + " (tol 1e-9)"};
}

// 6. Stable antiderivative against finite differences and quadrature.
Outcome stable_validation() {
    Rng rng(6);
    double worst_fd = 0.0;
    double worst_quad = 0.0;
    bool monotone = true;
    const int curves = 10;
    const int points = 1000;  // per curve: 10^4 grid points overall
    for (int c = 0; c < curves; ++c) {
        const Curve cv = rng.stable_curve();
        double prev = INFINITY;
        for (int i = 0; i < points; ++i) {
            const double x = cv.x_stable * std::pow(10.0, -2.0 + 4.0 * i / (points - 1));
            const double h = x * 1e-5;
            const double fd = (antiderivative(cv, x + h) - antiderivative(cv, x - h)) / ((x + h) - (x - h));
            const double p = price(cv, x);
            worst_fd = std::max(worst_fd, rel_err(fd, p));
            if (p > prev) monotone = false;
            prev = p;
        }
    }
    for (int k = 0; k < 100; ++k) {
        const Curve cv = rng.stable_curve();
        double a = cv.x_stable * rng.log_uniform(1e-2, 1e2);
        double b = cv.x_stable * rng.log_uniform(1e-2, 1e2);
        if (a > b) std::swap(a, b);
        const double closed = antiderivative(cv, b) - antiderivative(cv, a);
        const double quad = oracle::quad_value(cv, a, b, 1e-12 * std::fabs(closed) + 1e-300).value;
        worst_quad = std::max(worst_quad, rel_err(closed, quad));
    }
    return {worst_fd <= 1e-6 && worst_quad <= 1e-8 && monotone,
            "finite-difference rel err " + fmt("%.2e", worst_fd) + " on 10^4 points (tol 1e-6), " +
                "quadrature rel err " + fmt("%.2e", worst_quad) + " on 100 intervals (tol 1e-8), " +
                (monotone ? "price non-increasing" : "price NOT monotone")};
}

// 7. Stable inversion converges within the iteration budget. The round trip
// goes through a pool debit, which stores the remaining balance; recomputing
// it as balance - amount loses the remainder when it is far below
// ulp(balance), so that form is only counted for information.
Outcome inversion() {
    Rng rng(7);
    int worst_iter = 0;
    double worst_resid = 0.0;
    int failures = 0;
    int amount_form_lossy = 0;
    for (int k = 0; k < 1000; ++k) {
        const double xs = rng.log_uniform(10.0, 1e6);
        const Curve c = Curve::stable(rng.log_uniform(0.5, 2.0), xs, xs * rng.log_uniform(0.01, 2.0));
        const double balance = c.x_stable * rng.log_uniform(0.1, 10.0);
        const double v = value_between(c, kDustFloor, balance) * rng.log_uniform(1e-6, 0.99);
        try {
            const Inversion inv = invert_out_detailed(c, balance, v, 1e-12);
            PoolView pool("p", 0.0);
            pool.add_asset({"S", balance, balance, c});
            const double paid = swap_debit(pool, "S", v, 0.0, 1e-12);
            const double round_trip = std::fabs(value_between(c, pool.asset("S").balance, balance) - v);
            worst_iter = std::max(worst_iter, inv.iterations);
            worst_resid = std::max({worst_resid, inv.residual, round_trip});
            if (inv.iterations > kBisectionBudget || inv.residual > 1e-12 || round_trip > 1e-12 ||
                paid != inv.amount) {
                ++failures;
            }
            if (std::fabs(value_between(c, balance - inv.amount, balance) - v) > 1e-12) {
                ++amount_form_lossy;
            }
        } catch (const AmmError&) {
            ++failures;
        }
    }
    return {failures == 0, std::to_string(failures) + " failures / 1000, max iterations " +
                               std::to_string(worst_iter) + " (budget 128), max round-trip value err " +
                               fmt("%.2e", worst_resid) + " (tol 1e-12); " +
                               std::to_string(amount_form_lossy) +
                               " near-drain cases where balance - amount cannot hold the remainder"};
}

// 8. Faulty relays reach the same conserved state as a clean one.
Outcome fault_tolerance() {
    struct Schedule {
        const char* name;
        std::function<void(RelayConfig&)> apply;
    };
    const std::vector<Schedule> schedules{
        {"duplicate", [](RelayConfig& r) { r.dup_rate = 0.5; }},
        {"reorder", [](RelayConfig& r) { r.reorder = true; r.max_delay = 15; }},
        {"drop+timeout", [](RelayConfig& r) { r.drop_rate = 0.3; r.refund_timeout = 25; }},
        {"all", [](RelayConfig& r) {
             r.dup_rate = 0.3; r.drop_rate = 0.2; r.reorder = true; r.max_delay = 10;
             r.refund_timeout = 20;
         }},
    };
    double worst = 0.0;
    std::size_t double_applied = 0;
    std::size_t runs = 0;
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Report clean = run_scenario(three_chain(seed, 0.003));
        ok = ok && clean.passed() && clean.quiescent();
        worst = std::max(worst, std::fabs(clean.final_deviation));
        for (const auto& sched : schedules) {
            Scenario s = three_chain(seed, 0.003);
            sched.apply(s.relay);
            const Report r = run_scenario(s);
            ++runs;
            // every step already checked deviation == in-flight value, which a
            // second debit or refund of the same swap would break
            ok = ok && r.passed() && r.quiescent();
            worst = std::max(worst, std::fabs(r.final_deviation - clean.final_deviation));
            std::set<SwapId> seen;
            for (const auto& t : r.swaps) {
                if (!seen.insert(t.swap_id).second) ++double_applied;
                if (t.amount_out > 0.0 && t.refunded > 0.0) ++double_applied;
                if (t.status != SwapStatus::Finalized && t.status != SwapStatus::Refunded) ok = false;
            }
        }
    }
    return {ok && double_applied == 0 && worst <= 1e-7,
            std::to_string(runs) + " faulty runs, max |deviation - clean| " + fmt("%.2e", worst) +
                " (tol 1e-7), double-applied swaps " + std::to_string(double_applied)};
}

// 9. Same scenario and seed give byte-identical reports.
Outcome determinism() {
    std::size_t identical = 0;
    std::size_t total = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Scenario s = three_chain(seed, 0.003);
        s.relay.dup_rate = 0.2;
        s.relay.drop_rate = 0.2;
        s.relay.reorder = true;
        s.relay.max_delay = 8;
        s.relay.refund_timeout = 20;
        const Report a = run_scenario(s);
        const Report b = run_scenario(s);
        for (auto render : {report_to_json, report_to_csv, report_to_table}) {
            ++total;
            if (render(a) == render(b)) ++identical;
        }
    }
    return {identical == total,
            std::to_string(identical) + "/" + std::to_string(total) + " report pairs byte-identical"};
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double budget_s;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {1, "stable deposit 100 -> 300", 1.0, stable_deposit},
        {2, "value additivity", 5.0, additivity},
        {3, "swap output", 10.0, swap_output},
        {4, "conservation", 30.0, conservation},
        {5, "liquidity/fee neutrality", 10.0, neutrality},
        {6, "stable curve validation", 30.0, stable_validation},
        {7, "inversion convergence", 10.0, inversion},
        {8, "fault tolerance", 60.0, fault_tolerance},
        {9, "determinism", 10.0, determinism},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = o.pass && secs <= c.budget_s;
        if (!pass) ++failed;
        std::printf("%s criterion %d (%s): %s [%.3f s, budget %.0f s]\n", pass ? "PASS" : "FAIL", c.id,
                    c.name, o.detail.c_str(), secs, c.budget_s);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
                std::size(criteria));
    return failed == 0 ? 0 : 1;
}
