#pragma once

#include <map>
#include <string>
#include <string_view>

#include "xamm/pool_state.hpp"

namespace xamm {

/// Structured-text (JSON) checkpoint of every chain's pool plus the share
/// ledger. Numbers are shortest round-trip decimal strings, so a snapshot
/// reloads bit-exactly.
std::string snapshot_to_json(const std::map<ChainId, PoolView>& pools, const ShareLedger& ledger);
Genesis snapshot_from_json(std::string_view text);

}  // namespace xamm
