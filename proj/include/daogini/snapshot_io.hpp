#pragma once

#include <filesystem>

#include "daogini/holder.hpp"

namespace daogini {

// Snapshot file schema (version 1): a JSON object with
//   schema_version, token_symbol, token_contract, chain_id,
//   captured_at (RFC 3339), decimals, contracts_removed,
//   total_balance (decimal string), records: [{address, balance}]
// Balances are always decimal strings, never floating point. Key order is
// fixed so identical snapshots serialize byte-identically.
void save_snapshot(const HolderSnapshot& snapshot, const std::filesystem::path& path);

// Round-trip identity with save_snapshot; re-validates every invariant
// (sortedness, uniqueness, total) and rejects non-integer balances.
HolderSnapshot load_snapshot(const std::filesystem::path& path);

// Holder CSV import, header `address,balance[,is_contract]`.
// The optional is_contract column (true/false) substitutes for live
// classification; requesting drop_contracts without it is an error.
HolderSnapshot import_csv(const std::filesystem::path& path, SnapshotMeta meta,
                          bool drop_contracts);

}  // namespace daogini
