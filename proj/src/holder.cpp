#include "daogini/holder.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <ctime>
#include <unordered_set>

#include "daogini/errors.hpp"

namespace daogini {

bool is_valid_address(std::string_view addr) {
  if (addr.size() != 42 || addr[0] != '0' || addr[1] != 'x') return false;
  for (std::size_t i = 2; i < addr.size(); ++i) {
    char c = addr[i];
    bool hex = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
    if (!hex) return false;
  }
  return true;
}

std::string normalize_address(std::string_view raw) {
  std::string out(raw);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (!is_valid_address(out))
    throw ValidationError("malformed address \"" + std::string(raw) +
                          "\" (want 0x followed by 40 hex digits)");
  return out;
}

namespace {

void sort_records(std::vector<HolderRecord>& records) {
  // Descending balance; equal balances ordered by ascending address so
  // partitions are deterministic.
  std::sort(records.begin(), records.end(), [](const HolderRecord& a, const HolderRecord& b) {
    if (a.balance != b.balance) return a.balance > b.balance;
    return a.address < b.address;
  });
}

void check_unique_addresses(const std::vector<HolderRecord>& records) {
  std::unordered_set<std::string_view> seen;
  seen.reserve(records.size());
  for (const auto& r : records) {
    if (!seen.insert(r.address).second)
      throw ValidationError("duplicate holder address " + r.address);
  }
}

}  // namespace

HolderSnapshot HolderSnapshot::build(std::vector<HolderRecord> records,
                                     const ClassificationMap& classifications,
                                     bool drop_contracts, SnapshotMeta meta) {
  std::vector<HolderRecord> kept;
  kept.reserve(records.size());
  std::vector<std::string> unclassified;
  for (auto& r : records) {
    r.address = normalize_address(r.address);
    if (r.balance < 0) throw ValidationError("negative balance for " + r.address);
    if (r.balance == 0) continue;
    if (drop_contracts) {
      auto it = classifications.find(r.address);
      if (it == classifications.end()) {
        unclassified.push_back(r.address);
        continue;
      }
      if (it->second == AddressKind::contract) continue;
    }
    kept.push_back(std::move(r));
  }
  if (!unclassified.empty()) {
    std::string msg = "cannot drop contracts, unclassified addresses:";
    for (const auto& a : unclassified) msg += " " + a;
    throw ValidationError(msg);
  }

  sort_records(kept);
  check_unique_addresses(kept);

  HolderSnapshot snap;
  snap.meta_ = std::move(meta);
  snap.contracts_removed_ = drop_contracts;
  snap.records_ = std::move(kept);
  snap.total_ = 0;
  for (const auto& r : snap.records_) snap.total_ += r.balance;
  return snap;
}

HolderSnapshot HolderSnapshot::from_parts(SnapshotMeta meta, bool contracts_removed,
                                          Balance total, std::vector<HolderRecord> records) {
  Balance sum = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!is_valid_address(r.address))
      throw ValidationError("record " + std::to_string(i) + ": malformed address \"" +
                            r.address + "\"");
    if (r.balance <= 0)
      throw ValidationError("record " + std::to_string(i) + " (" + r.address +
                            "): balance must be positive");
    if (i > 0) {
      const auto& prev = records[i - 1];
      bool ordered = prev.balance > r.balance ||
                     (prev.balance == r.balance && prev.address < r.address);
      if (!ordered)
        throw ValidationError("records not sorted (descending balance, ties by address) at index " +
                              std::to_string(i));
    }
    sum += r.balance;
  }
  check_unique_addresses(records);
  if (sum != total)
    throw ValidationError("total_balance " + total.str() + " does not match record sum " +
                          sum.str());

  HolderSnapshot snap;
  snap.meta_ = std::move(meta);
  snap.contracts_removed_ = contracts_removed;
  snap.total_ = std::move(total);
  snap.records_ = std::move(records);
  return snap;
}

std::string now_rfc3339() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool looks_like_rfc3339(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SS followed by Z or a numeric offset.
  if (s.size() < 20) return false;
  auto digit = [&](std::size_t i) { return s[i] >= '0' && s[i] <= '9'; };
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u, 11u, 12u, 14u, 15u, 17u, 18u})
    if (!digit(i)) return false;
  if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != 't') || s[13] != ':' ||
      s[16] != ':')
    return false;
  std::string_view rest = s.substr(19);
  if (rest == "Z" || rest == "z") return true;
  if (rest.size() == 6 && (rest[0] == '+' || rest[0] == '-') && rest[3] == ':') return true;
  // Fractional seconds also pass: .123Z etc.
  if (rest[0] == '.') {
    std::size_t i = 1;
    while (i < rest.size() && rest[i] >= '0' && rest[i] <= '9') ++i;
    return i > 1 && i < rest.size() && (rest[i] == 'Z' || rest[i] == 'z');
  }
  return false;
}

}  // namespace daogini
