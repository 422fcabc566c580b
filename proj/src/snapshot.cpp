#include "xamm/snapshot.hpp"

#include <json.hpp>

#include "xamm/decimal.hpp"
#include "xamm/errors.hpp"

namespace xamm {

using nlohmann::ordered_json;

std::string snapshot_to_json(const std::map<ChainId, PoolView>& pools, const ShareLedger& ledger) {
    ordered_json root;
    root["chains"] = ordered_json::array();
    for (const auto& [id, pool] : pools) {
        ordered_json c;
        c["id"] = id;
        c["fee_rate"] = format_decimal(pool.fee_rate());
        c["assets"] = ordered_json::array();
        for (const auto& a : pool.assets()) {
            ordered_json curve;
            curve["kind"] = std::string(to_string(a.curve.kind));
            curve["weight"] = format_decimal(a.curve.weight);
            if (a.curve.is_stable()) {
                curve["x_stable"] = format_decimal(a.curve.x_stable);
                curve["amplification"] = format_decimal(a.curve.amplification);
            }
            c["assets"].push_back({{"id", a.asset_id},
                                   {"balance", format_decimal(a.balance)},
                                   {"reference", format_decimal(a.reference)},
                                   {"curve", curve}});
        }
        root["chains"].push_back(c);
    }
    ordered_json positions = ordered_json::object();
    for (const auto& [p, amount] : ledger.positions()) positions[p] = format_decimal(amount);
    root["shares"] = {{"total_supply", format_decimal(ledger.total_supply())},
                      {"positions", positions}};
    return root.dump(2);
}

Genesis snapshot_from_json(std::string_view text) {
    Genesis g;
    try {
        const auto root = ordered_json::parse(text.begin(), text.end());
        for (const auto& c : root.at("chains")) {
            const ChainId id = c.at("id").get<std::string>();
            PoolView pool(id, parse_decimal(c.at("fee_rate").get<std::string>()));
            for (const auto& a : c.at("assets")) {
                const auto& cj = a.at("curve");
                Curve curve;
                curve.kind = curve_kind_from_string(cj.at("kind").get<std::string>());
                curve.weight = parse_decimal(cj.at("weight").get<std::string>());
                if (curve.is_stable()) {
                    curve.x_stable = parse_decimal(cj.at("x_stable").get<std::string>());
                    curve.amplification = parse_decimal(cj.at("amplification").get<std::string>());
                }
                pool.add_asset(AssetState{a.at("id").get<std::string>(),
                                          parse_decimal(a.at("balance").get<std::string>()),
                                          parse_decimal(a.at("reference").get<std::string>()),
                                          curve});
            }
            g.pools.emplace(id, std::move(pool));
        }
        std::map<ProviderId, double> positions;
        const auto& shares = root.at("shares");
        for (const auto& [p, amount] : shares.at("positions").items()) {
            positions[p] = parse_decimal(amount.get<std::string>());
        }
        g.ledger = ShareLedger::restore(
            parse_decimal(shares.at("total_supply").get<std::string>()), std::move(positions));
    } catch (const ordered_json::exception& e) {
        throw ValidationError(std::string("malformed snapshot: ") + e.what());
    }
    return g;
}

}  // namespace xamm
