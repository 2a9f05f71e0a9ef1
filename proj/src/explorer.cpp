#include "daogini/explorer.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <thread>
#include <unordered_set>

#include "daogini/csv.hpp"
#include "daogini/errors.hpp"

namespace daogini {

void ExplorerTarget::validate() const {
  if (!(rate_limit > 0)) throw ConfigError("explorer rate_limit must be positive");
  if (page_size < 1) throw ConfigError("explorer page_size must be at least 1");
  if (base_url.rfind("http://", 0) != 0 && base_url.rfind("https://", 0) != 0)
    throw ConfigError("explorer base_url must be an absolute http(s) URL, got \"" + base_url +
                      "\"");
}

namespace {

std::chrono::steady_clock::duration rate_interval(double per_second) {
  if (!(per_second > 0)) throw ConfigError("rate limit must be positive");
  return std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(1.0 / per_second));
}

}  // namespace

RateLimiter::RateLimiter(double per_second)
    : interval_(rate_interval(per_second)), next_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
  std::chrono::steady_clock::time_point wake;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto now = std::chrono::steady_clock::now();
    wake = std::max(now, next_);
    next_ = wake + interval_;
  }
  std::this_thread::sleep_until(wake);
}

namespace {

std::string cache_key(std::int64_t chain_id, const std::string& address) {
  return std::to_string(chain_id) + "/" + address;
}

const char* kind_name(AddressKind kind) {
  return kind == AddressKind::contract ? "contract" : "external";
}

}  // namespace

ClassificationCache::ClassificationCache(std::filesystem::path file) : file_(std::move(file)) {
  if (!std::filesystem::exists(file_)) return;
  csv::Table table = csv::read_file(file_);
  int chain = table.find("chain_id");
  int addr = table.find("address");
  int kind = table.find("kind");
  if (chain < 0 || addr < 0 || kind < 0)
    throw ParseError(file_.string() + ": header must be chain_id,address,kind");
  for (const auto& row : table.rows) {
    const std::string& k = row[static_cast<std::size_t>(kind)];
    if (k != "contract" && k != "external")
      throw ParseError(file_.string() + ": unknown kind \"" + k + "\"");
    entries_[cache_key(std::stoll(row[static_cast<std::size_t>(chain)]),
                       row[static_cast<std::size_t>(addr)])] =
        k == "contract" ? AddressKind::contract : AddressKind::external;
  }
}

std::optional<AddressKind> ClassificationCache::find(std::int64_t chain_id,
                                                     const std::string& address) const {
  auto it = entries_.find(cache_key(chain_id, address));
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void ClassificationCache::store(std::int64_t chain_id, const std::string& address,
                                AddressKind kind) {
  auto [it, inserted] = entries_.emplace(cache_key(chain_id, address), kind);
  if (!inserted) return;
  if (file_.empty()) return;
  bool fresh = !std::filesystem::exists(file_);
  std::ofstream out(file_, std::ios::app);
  if (!out) throw Error("cannot append to classification cache " + file_.string());
  if (fresh) out << "chain_id,address,kind\n";
  out << chain_id << ',' << address << ',' << kind_name(kind) << '\n';
}

struct ExplorerClient::Http {
  explicit Http(const std::string& origin) : client(origin) {
    client.set_connection_timeout(std::chrono::seconds(10));
    client.set_read_timeout(std::chrono::seconds(30));
    client.set_keep_alive(true);
  }
  httplib::Client client;
};

ExplorerClient::ExplorerClient(ExplorerTarget target, RetryPolicy retry)
    : target_(std::move(target)), retry_(retry), limiter_(target_.rate_limit) {
  target_.validate();
  if (retry_.max_attempts < 1) throw ConfigError("retry max_attempts must be at least 1");

  // Split scheme://host[:port] from the request path.
  auto scheme_end = target_.base_url.find("://") + 3;
  auto path_start = target_.base_url.find('/', scheme_end);
  std::string origin = path_start == std::string::npos ? target_.base_url
                                                       : target_.base_url.substr(0, path_start);
  path_prefix_ = path_start == std::string::npos ? "/" : target_.base_url.substr(path_start);
  http_ = std::make_unique<Http>(origin);
}

ExplorerClient::~ExplorerClient() = default;

std::string ExplorerClient::get_body(const std::string& query) {
  std::string path = path_prefix_ + query;
  if (const char* key = std::getenv(target_.api_key_ref.c_str()); key && *key)
    path += "&apikey=" + std::string(key);

  auto delay = retry_.base_delay;
  for (int attempt = 1;; ++attempt) {
    limiter_.acquire();
    httplib::Result res = http_->client.Get(path);
    if (res) {
      if (res->status != 200)
        throw ExplorerError("explorer returned HTTP " + std::to_string(res->status) + " for " +
                            path_prefix_ + query);
      return res->body;
    }
    if (attempt >= retry_.max_attempts)
      throw NetworkError("explorer unreachable after " + std::to_string(attempt) +
                         " attempts: " + httplib::to_string(res.error()));
    std::this_thread::sleep_for(delay);
    delay *= 2;
  }
}

std::vector<HolderRecord> ExplorerClient::fetch_holders(const std::string& token_contract) {
  std::string contract = normalize_address(token_contract);
  std::vector<HolderRecord> records;
  std::unordered_set<std::string> seen;

  for (int page = 1;; ++page) {
    std::string query = "?module=token&action=tokenholderlist&contractaddress=" + contract +
                        "&page=" + std::to_string(page) +
                        "&offset=" + std::to_string(target_.page_size);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(get_body(query));
    } catch (const nlohmann::json::parse_error& e) {
      throw ExplorerError("explorer returned unparseable body: " + std::string(e.what()));
    }

    const auto result = doc.find("result");
    if (result == doc.end()) throw ExplorerError("explorer response has no result field");
    if (!result->is_array()) {
      // Etherscan-family endpoints answer past-the-end pages with
      // status "0" and a "No ... found" message rather than an empty array.
      std::string message = doc.value("message", "");
      std::string detail = result->is_string() ? result->get<std::string>() : result->dump();
      if (message.find("No") == 0 && message.find("found") != std::string::npos) break;
      throw ExplorerError("explorer error: " + message + ": " + detail);
    }
    if (doc.value("status", "1") == "0" && result->empty()) break;

    for (const auto& item : *result) {
      if (!item.contains("TokenHolderAddress") || !item.contains("TokenHolderQuantity"))
        throw ExplorerError("holder entry missing TokenHolderAddress/TokenHolderQuantity");
      HolderRecord rec;
      rec.address = normalize_address(item.at("TokenHolderAddress").get<std::string>());
      rec.balance = parse_balance(item.at("TokenHolderQuantity").get<std::string>());
      if (!seen.insert(rec.address).second)
        throw PaginationError("inconsistent pagination: address " + rec.address +
                              " repeated on page " + std::to_string(page));
      records.push_back(std::move(rec));
    }
    if (result->size() < static_cast<std::size_t>(target_.page_size) || result->empty()) break;
  }
  return records;
}

AddressClassification ExplorerClient::classify_address(const std::string& address,
                                                       ClassificationCache& cache) {
  std::string addr = normalize_address(address);
  if (auto cached = cache.find(target_.chain_id, addr))
    return {addr, *cached, ClassificationSource::cache};

  std::string query = "?module=proxy&action=eth_getCode&address=" + addr + "&tag=latest";
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(get_body(query));
  } catch (const nlohmann::json::parse_error& e) {
    throw ExplorerError("explorer returned unparseable body: " + std::string(e.what()));
  }
  if (doc.contains("error"))
    throw ExplorerError("code lookup failed for " + addr + ": " + doc.at("error").dump());
  if (!doc.contains("result") || !doc.at("result").is_string())
    throw ExplorerError("code lookup for " + addr + " returned no result string");

  std::string code = doc.at("result").get<std::string>();
  AddressKind kind =
      (code.empty() || code == "0x") ? AddressKind::external : AddressKind::contract;
  cache.store(target_.chain_id, addr, kind);
  return {addr, kind, ClassificationSource::lookup};
}

}  // namespace daogini
