#include "xamm/scenario.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "xamm/decimal.hpp"
#include "xamm/errors.hpp"

namespace xamm {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError(path + ": " + what);
}

const json* find(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double real_of(const json& v, const std::string& path) {
    if (v.is_string()) {
        try {
            return parse_decimal(v.get<std::string>());
        } catch (const DomainError&) {
            fail(path, "'" + v.get<std::string>() + "' is not a decimal number");
        }
    }
    if (v.is_number_integer()) return static_cast<double>(v.get<long long>());
    if (v.is_number_float()) fail(path, "reals must be written as decimal strings");
    fail(path, "expected a decimal string");
}

double get_real(const json& obj, const char* key, const std::string& path,
                std::optional<double> fallback = std::nullopt) {
    const json* v = find(obj, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(path + "." + key, "missing required field");
    }
    return real_of(*v, path + "." + key);
}

std::optional<double> get_opt_real(const json& obj, const char* key, const std::string& path) {
    const json* v = find(obj, key);
    if (!v) return std::nullopt;
    return real_of(*v, path + "." + key);
}

long long get_int(const json& obj, const char* key, const std::string& path,
                  std::optional<long long> fallback = std::nullopt) {
    const json* v = find(obj, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(path + "." + key, "missing required field");
    }
    if (!v->is_number_integer()) fail(path + "." + key, "expected an integer");
    return v->get<long long>();
}

std::string get_string(const json& obj, const char* key, const std::string& path,
                       std::optional<std::string> fallback = std::nullopt) {
    const json* v = find(obj, key);
    if (!v) {
        if (fallback) return *fallback;
        fail(path + "." + key, "missing required field");
    }
    if (!v->is_string()) fail(path + "." + key, "expected a string");
    return v->get<std::string>();
}

std::optional<bool> get_opt_bool(const json& obj, const char* key, const std::string& path) {
    const json* v = find(obj, key);
    if (!v) return std::nullopt;
    if (!v->is_boolean()) fail(path + "." + key, "expected true or false");
    return v->get<bool>();
}

void require_object(const json& v, const std::string& path) {
    if (!v.is_object()) fail(path, "expected an object");
}

RelayConfig parse_relay(const json& obj, const std::string& path) {
    require_object(obj, path);
    RelayConfig r;
    r.min_delay = get_int(obj, "min_delay", path, 1);
    r.max_delay = get_int(obj, "max_delay", path, r.min_delay);
    r.drop_rate = get_real(obj, "drop_rate", path, 0.0);
    r.dup_rate = get_real(obj, "dup_rate", path, 0.0);
    r.reorder = get_opt_bool(obj, "reorder", path).value_or(false);
    r.refund_timeout = get_int(obj, "refund_timeout", path, 0);
    return r;
}

Deposit parse_asset(const json& obj, const ChainId& chain, const std::string& path) {
    require_object(obj, path);
    Deposit d;
    d.chain_id = chain;
    d.asset_id = get_string(obj, "id", path);
    d.amount = get_real(obj, "amount", path);
    const json* curve = find(obj, "curve");
    if (!curve) fail(path + ".curve", "missing required field");
    const std::string cpath = path + ".curve";
    require_object(*curve, cpath);
    const std::string kind = get_string(*curve, "kind", cpath);
    if (kind == "volatile") {
        d.kind = CurveKind::Volatile;
    } else if (kind == "stable") {
        d.kind = CurveKind::Stable;
        d.amplification = get_real(*curve, "amplification", cpath);
        d.x_stable = get_opt_real(*curve, "x_stable", cpath);
    } else {
        fail(cpath + ".kind", "unknown curve kind '" + kind + "'");
    }
    d.weight = get_real(*curve, "weight", cpath, 1.0);
    return d;
}

ScenarioEvent parse_event(const json& obj, const std::string& path) {
    require_object(obj, path);
    ScenarioEvent ev;
    ev.tick = get_int(obj, "tick", path);
    const std::string type = get_string(obj, "type", path);
    if (type == "swap") {
        SwapEvent s;
        s.from = get_string(obj, "from", path);
        s.asset_in = get_string(obj, "asset_in", path);
        s.amount = get_real(obj, "amount", path);
        s.to = get_string(obj, "to", path);
        s.asset_out = get_string(obj, "asset_out", path);
        s.min_out = get_real(obj, "min_out", path, 0.0);
        ev.body = s;
    } else if (type == "add_liquidity") {
        ev.body = AddLiquidityEvent{get_string(obj, "provider", path),
                                    get_real(obj, "fraction", path)};
    } else if (type == "remove_liquidity") {
        ev.body = RemoveLiquidityEvent{get_string(obj, "provider", path),
                                       get_real(obj, "shares", path)};
    } else if (type == "set_fee") {
        ev.body = SetFeeEvent{get_string(obj, "chain", path, ""), get_real(obj, "fee_rate", path)};
    } else if (type == "set_faults") {
        SetFaultsEvent f;
        f.drop_rate = get_opt_real(obj, "drop_rate", path);
        f.dup_rate = get_opt_real(obj, "dup_rate", path);
        f.reorder = get_opt_bool(obj, "reorder", path);
        ev.body = f;
    } else if (type == "corrupt_balance") {
        ev.body = CorruptBalanceEvent{get_string(obj, "chain", path), get_string(obj, "asset", path),
                                      get_real(obj, "balance", path)};
    } else {
        fail(path + ".type", "unknown event type '" + type + "'");
    }
    return ev;
}

void check_rate(double r, const std::string& path) {
    if (!(r >= 0.0 && r <= 1.0)) fail(path, "must be in [0, 1]");
}

}  // namespace

void RelayConfig::validate() const {
    if (min_delay < 0) fail("relay.min_delay", "must be non-negative");
    if (max_delay < min_delay) fail("relay.max_delay", "must be >= min_delay");
    check_rate(drop_rate, "relay.drop_rate");
    check_rate(dup_rate, "relay.dup_rate");
    if (refund_timeout < 0) fail("relay.refund_timeout", "must be non-negative");
}

std::vector<Deposit> Scenario::deposits() const {
    std::vector<Deposit> out;
    for (const auto& c : chains) out.insert(out.end(), c.deposits.begin(), c.deposits.end());
    return out;
}

void Scenario::validate() const {
    if (chains.empty()) fail("chains", "at least one chain is required");
    if (!(fee_rate >= 0.0 && fee_rate < 1.0)) fail("fee_rate", "must be in [0, 1)");
    if (!(tolerance > 0.0)) fail("tolerance", "must be positive");
    if (founder.empty()) fail("founder", "must be non-empty");
    if (max_ticks < 0) fail("stop.max_ticks", "must be non-negative");
    relay.validate();

    std::map<ChainId, std::set<AssetId>> assets;
    std::size_t asset_count = 0;
    for (std::size_t i = 0; i < chains.size(); ++i) {
        const auto& c = chains[i];
        const std::string path = "chains[" + std::to_string(i) + "]";
        if (c.id.empty()) fail(path + ".id", "must be non-empty");
        if (assets.count(c.id)) fail(path + ".id", "duplicate chain id '" + c.id + "'");
        auto& set = assets[c.id];
        for (std::size_t k = 0; k < c.deposits.size(); ++k) {
            const auto& d = c.deposits[k];
            const std::string apath = path + ".assets[" + std::to_string(k) + "]";
            if (d.asset_id.empty()) fail(apath + ".id", "must be non-empty");
            if (!set.insert(d.asset_id).second) {
                fail(apath + ".id", "duplicate asset '" + d.asset_id + "' on chain '" + c.id + "'");
            }
            if (!(d.amount > 0.0)) fail(apath + ".amount", "must be positive");
            if (!(d.weight > 0.0)) fail(apath + ".curve.weight", "must be positive");
            if (d.kind == CurveKind::Stable) {
                if (!(d.amplification > 0.0)) {
                    fail(apath + ".curve.amplification", "must be positive");
                }
                if (d.x_stable && !(*d.x_stable > 0.0)) {
                    fail(apath + ".curve.x_stable", "must be positive");
                }
            }
            ++asset_count;
        }
    }
    if (asset_count < 2) fail("chains", "a pool needs at least two assets");

    auto require_asset = [&](const ChainId& chain, const AssetId& asset, const std::string& path,
                             const char* chain_field, const char* asset_field) {
        auto it = assets.find(chain);
        if (it == assets.end()) fail(path + "." + chain_field, "unknown chain '" + chain + "'");
        if (!it->second.count(asset)) {
            fail(path + "." + asset_field,
                 "unknown asset '" + asset + "' on chain '" + chain + "'");
        }
    };

    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& ev = events[i];
        const std::string path = "events[" + std::to_string(i) + "]";
        if (ev.tick < 0) fail(path + ".tick", "must be non-negative");
        std::visit(
            [&](const auto& e) {
                using T = std::decay_t<decltype(e)>;
                if constexpr (std::is_same_v<T, SwapEvent>) {
                    require_asset(e.from, e.asset_in, path, "from", "asset_in");
                    require_asset(e.to, e.asset_out, path, "to", "asset_out");
                    if (!(e.amount > 0.0)) fail(path + ".amount", "must be positive");
                    if (!(e.min_out >= 0.0)) fail(path + ".min_out", "must be non-negative");
                } else if constexpr (std::is_same_v<T, AddLiquidityEvent>) {
                    if (e.provider.empty()) fail(path + ".provider", "must be non-empty");
                    if (!(e.fraction > 0.0)) fail(path + ".fraction", "must be positive");
                } else if constexpr (std::is_same_v<T, RemoveLiquidityEvent>) {
                    if (e.provider.empty()) fail(path + ".provider", "must be non-empty");
                    if (!(e.shares > 0.0)) fail(path + ".shares", "must be positive");
                } else if constexpr (std::is_same_v<T, SetFeeEvent>) {
                    if (!e.chain.empty() && !assets.count(e.chain)) {
                        fail(path + ".chain", "unknown chain '" + e.chain + "'");
                    }
                    if (!(e.fee_rate >= 0.0 && e.fee_rate < 1.0)) {
                        fail(path + ".fee_rate", "must be in [0, 1)");
                    }
                } else if constexpr (std::is_same_v<T, SetFaultsEvent>) {
                    if (e.drop_rate) check_rate(*e.drop_rate, path + ".drop_rate");
                    if (e.dup_rate) check_rate(*e.dup_rate, path + ".dup_rate");
                } else if constexpr (std::is_same_v<T, CorruptBalanceEvent>) {
                    require_asset(e.chain, e.asset, path, "chain", "asset");
                }
            },
            ev.body);
    }

    if (random_swaps) {
        if (random_swaps->count < 0) fail("random_swaps.count", "must be non-negative");
        if (random_swaps->start_tick < 0) fail("random_swaps.start_tick", "must be non-negative");
        if (random_swaps->spacing < 0) fail("random_swaps.spacing", "must be non-negative");
        if (!(random_swaps->max_fraction > 0.0 && random_swaps->max_fraction < 1.0)) {
            fail("random_swaps.max_fraction", "must be in (0, 1)");
        }
    }
}

Scenario parse_scenario(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("parse error: ") + e.what());
    }
    require_object(root, "$");

    if (const json* v = find(root, "schema_version")) {
        if (!v->is_number_integer() || v->get<long long>() != kScenarioSchemaVersion) {
            fail("schema_version", "unsupported schema version (expected " +
                                       std::to_string(kScenarioSchemaVersion) + ")");
        }
    }

    Scenario s;
    s.name = get_string(root, "name", "$", "");
    s.fee_rate = get_real(root, "fee_rate", "$", 0.0);
    s.tolerance = get_real(root, "tolerance", "$", kDefaultValueTolerance);
    s.founder = get_string(root, "founder", "$", "founder");

    const long long seed = get_int(root, "seed", "$", 0);
    if (seed < 0) fail("seed", "must be non-negative");
    if (const json* relay = find(root, "relay")) s.relay = parse_relay(*relay, "relay");
    s.relay.seed = static_cast<std::uint64_t>(seed);

    const json* chains = find(root, "chains");
    if (!chains || !chains->is_array()) fail("chains", "expected an array of chains");
    for (std::size_t i = 0; i < chains->size(); ++i) {
        const std::string path = "chains[" + std::to_string(i) + "]";
        const json& c = (*chains)[i];
        require_object(c, path);
        ChainSpec spec;
        spec.id = get_string(c, "id", path);
        const json* assets = find(c, "assets");
        if (!assets || !assets->is_array()) fail(path + ".assets", "expected an array of assets");
        for (std::size_t k = 0; k < assets->size(); ++k) {
            spec.deposits.push_back(
                parse_asset((*assets)[k], spec.id, path + ".assets[" + std::to_string(k) + "]"));
        }
        s.chains.push_back(std::move(spec));
    }

    if (const json* events = find(root, "events")) {
        if (!events->is_array()) fail("events", "expected an array");
        for (std::size_t i = 0; i < events->size(); ++i) {
            s.events.push_back(parse_event((*events)[i], "events[" + std::to_string(i) + "]"));
        }
    }

    if (const json* rs = find(root, "random_swaps")) {
        require_object(*rs, "random_swaps");
        RandomSwaps r;
        r.count = static_cast<int>(get_int(*rs, "count", "random_swaps"));
        r.start_tick = get_int(*rs, "start_tick", "random_swaps", 1);
        r.spacing = get_int(*rs, "spacing", "random_swaps", 1);
        r.max_fraction = get_real(*rs, "max_fraction", "random_swaps", 0.05);
        s.random_swaps = r;
    }

    if (const json* stop = find(root, "stop")) {
        require_object(*stop, "stop");
        s.max_ticks = get_int(*stop, "max_ticks", "stop", s.max_ticks);
    }

    s.validate();
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str());
}

std::string_view event_kind(const EventBody& body) {
    return std::visit(
        [](const auto& e) -> std::string_view {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, SwapEvent>) return "swap";
            else if constexpr (std::is_same_v<T, AddLiquidityEvent>) return "add_liquidity";
            else if constexpr (std::is_same_v<T, RemoveLiquidityEvent>) return "remove_liquidity";
            else if constexpr (std::is_same_v<T, SetFeeEvent>) return "set_fee";
            else if constexpr (std::is_same_v<T, SetFaultsEvent>) return "set_faults";
            else return "corrupt_balance";
        },
        body);
}

}  // namespace xamm
