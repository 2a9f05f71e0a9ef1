#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "daogini/holder.hpp"

namespace daogini {

// One Etherscan-compatible endpoint. The same query shape works unchanged
// against Arbiscan, BscScan, Snowtrace, and local mocks; only base_url and
// the key differ.
struct ExplorerTarget {
  std::int64_t chain_id = 1;
  std::string base_url;                          // absolute, e.g. https://api.etherscan.io/api
  std::string api_key_ref = "DAOGINI_API_KEY";   // env var holding the key; may be unset/empty
  double rate_limit = 5.0;                       // requests per second, > 0
  int page_size = 1000;                          // holders per page, >= 1

  void validate() const;
};

// Paces calls so the gap between consecutive requests is at least
// 1/per_second. Shared by holder pages and code lookups, so the limit holds
// globally per client. Thread-safe.
class RateLimiter {
 public:
  explicit RateLimiter(double per_second);
  void acquire();

 private:
  std::mutex mutex_;
  std::chrono::steady_clock::duration interval_;
  std::chrono::steady_clock::time_point next_;
};

// Persistent (chain_id, address) -> kind map backed by one append-friendly
// CSV file. Bytecode presence is effectively permanent, so entries never
// expire. Single-process use: one cache object owns the file; there is no
// cross-process lock.
class ClassificationCache {
 public:
  // In-memory only.
  ClassificationCache() = default;
  // Loads existing entries; the file is created on first store.
  explicit ClassificationCache(std::filesystem::path file);

  std::optional<AddressKind> find(std::int64_t chain_id, const std::string& address) const;
  void store(std::int64_t chain_id, const std::string& address, AddressKind kind);
  std::size_t size() const { return entries_.size(); }

 private:
  std::filesystem::path file_;
  std::unordered_map<std::string, AddressKind> entries_;  // key: chain_id + "/" + address
};

struct RetryPolicy {
  int max_attempts = 5;  // total tries for transport-level failures
  std::chrono::milliseconds base_delay{250};  // doubles per retry
};

// Holder-list and bytecode lookups against one explorer target.
// Returned values are immutable snapshots; the client itself serializes its
// requests through the shared rate limiter.
class ExplorerClient {
 public:
  explicit ExplorerClient(ExplorerTarget target, RetryPolicy retry = {});
  ~ExplorerClient();

  ExplorerClient(const ExplorerClient&) = delete;
  ExplorerClient& operator=(const ExplorerClient&) = delete;

  const ExplorerTarget& target() const { return target_; }

  // Union of all pages of the token-holder-list endpoint, in served order.
  // Aborts with PaginationError if a page repeats an address.
  std::vector<HolderRecord> fetch_holders(const std::string& token_contract);

  // contract iff deployed bytecode at the address is non-empty. Results are
  // written through to the cache; repeated calls are answered from it.
  AddressClassification classify_address(const std::string& address, ClassificationCache& cache);

 private:
  std::string get_body(const std::string& query);

  ExplorerTarget target_;
  RetryPolicy retry_;
  RateLimiter limiter_;
  std::string path_prefix_;
  struct Http;  // hides the httplib client
  std::unique_ptr<Http> http_;
};

}  // namespace daogini
