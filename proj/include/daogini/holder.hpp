#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "daogini/bigint.hpp"

namespace daogini {

// Lowercases the hex digits and validates ^0x[0-9a-f]{40}$.
std::string normalize_address(std::string_view raw);
bool is_valid_address(std::string_view addr);

struct HolderRecord {
  std::string address;  // canonical lowercase 0x-form
  Balance balance;      // >= 0, base units

  bool operator==(const HolderRecord&) const = default;
};

enum class AddressKind { contract, external };

enum class ClassificationSource { lookup, cache, file };

struct AddressClassification {
  std::string address;
  AddressKind kind;
  ClassificationSource source;
};

// address -> kind, as needed by build_snapshot.
using ClassificationMap = std::unordered_map<std::string, AddressKind>;

struct SnapshotMeta {
  std::string token_symbol;
  std::string token_contract;
  std::int64_t chain_id = 1;
  std::string captured_at;  // RFC 3339 UTC, e.g. 2026-08-11T12:00:00Z
  std::uint32_t decimals = 18;

  bool operator==(const SnapshotMeta&) const = default;
};

// A token's holder list at a capture instant. Invariants hold for every
// instance: records sorted by balance descending (ties by address ascending),
// addresses unique, balances strictly positive, total = sum of balances.
class HolderSnapshot {
 public:
  // Filters and orders raw records into a valid snapshot.
  //  - zero-balance records are dropped (they carry no voting weight)
  //  - when drop_contracts, every surviving address must be classified and
  //    contract-kind records are removed; missing classifications are an
  //    error listing the offending addresses
  static HolderSnapshot build(std::vector<HolderRecord> records,
                              const ClassificationMap& classifications, bool drop_contracts,
                              SnapshotMeta meta);

  // Load path: takes already-final parts and re-checks every invariant.
  static HolderSnapshot from_parts(SnapshotMeta meta, bool contracts_removed, Balance total,
                                   std::vector<HolderRecord> records);

  const SnapshotMeta& meta() const { return meta_; }
  bool contracts_removed() const { return contracts_removed_; }
  const Balance& total_balance() const { return total_; }
  const std::vector<HolderRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }

  bool operator==(const HolderSnapshot&) const = default;

 private:
  HolderSnapshot() = default;

  SnapshotMeta meta_;
  bool contracts_removed_ = false;
  Balance total_ = 0;
  std::vector<HolderRecord> records_;
};

// RFC 3339 UTC timestamp for "now", second precision.
std::string now_rfc3339();
bool looks_like_rfc3339(std::string_view s);

}  // namespace daogini
