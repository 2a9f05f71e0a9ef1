#include "mock_explorer.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace daogini::testing {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

MockExplorer::MockExplorer() : server_(std::make_unique<httplib::Server>()) {
  server_->Get("/api", [this](const httplib::Request& req, httplib::Response& res) {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      ++total_requests_;
      times_.push_back(std::chrono::steady_clock::now());
      last_query_ = req.target;
    }
    std::string module = req.get_param_value("module");
    std::string action = req.get_param_value("action");

    if (module == "token" && action == "tokenholderlist") {
      std::string contract = lower(req.get_param_value("contractaddress"));
      int page = std::stoi(req.get_param_value("page"));
      int offset = std::stoi(req.get_param_value("offset"));

      std::lock_guard<std::mutex> lock(mutex_);
      ++holder_counts_[contract];
      auto it = tokens_.find(contract);
      if (it == tokens_.end() || it->second.mode == TokenConfig::Mode::http404) {
        res.status = 404;
        res.set_content("not found", "text/plain");
        return;
      }
      const TokenConfig& config = it->second;
      if (config.mode == TokenConfig::Mode::error) {
        nlohmann::json doc{{"status", "0"},
                           {"message", config.error_message},
                           {"result", config.error_result}};
        res.set_content(doc.dump(), "application/json");
        return;
      }

      std::vector<Holder> slice;
      if (config.pages.size() == 1) {
        const auto& all = config.pages[0];
        std::size_t begin = static_cast<std::size_t>(page - 1) * static_cast<std::size_t>(offset);
        std::size_t end = std::min(all.size(), begin + static_cast<std::size_t>(offset));
        if (begin < all.size())
          slice.assign(all.begin() + static_cast<std::ptrdiff_t>(begin),
                       all.begin() + static_cast<std::ptrdiff_t>(end));
      } else if (static_cast<std::size_t>(page) <= config.pages.size()) {
        slice = config.pages[static_cast<std::size_t>(page - 1)];
      }

      if (slice.empty()) {
        nlohmann::json doc{{"status", "0"},
                           {"message", "No token holder found"},
                           {"result", nlohmann::json::array()}};
        res.set_content(doc.dump(), "application/json");
        return;
      }
      auto holders = nlohmann::json::array();
      for (const auto& [addr, qty] : slice)
        holders.push_back({{"TokenHolderAddress", addr}, {"TokenHolderQuantity", qty}});
      nlohmann::json doc{{"status", "1"}, {"message", "OK"}, {"result", std::move(holders)}};
      res.set_content(doc.dump(), "application/json");
      return;
    }

    if (module == "proxy" && action == "eth_getCode") {
      std::string address = lower(req.get_param_value("address"));
      std::lock_guard<std::mutex> lock(mutex_);
      ++code_counts_[address];
      if (auto it = code_errors_.find(address); it != code_errors_.end()) {
        nlohmann::json doc{{"jsonrpc", "2.0"},
                           {"id", 1},
                           {"error", {{"code", -32000}, {"message", it->second}}}};
        res.set_content(doc.dump(), "application/json");
        return;
      }
      auto it = codes_.find(address);
      nlohmann::json doc{{"jsonrpc", "2.0"},
                         {"id", 1},
                         {"result", it == codes_.end() ? "0x" : it->second}};
      res.set_content(doc.dump(), "application/json");
      return;
    }

    res.status = 400;
    res.set_content("unsupported module/action", "text/plain");
  });

  port_ = server_->bind_to_any_port("127.0.0.1");
  if (port_ <= 0) throw std::runtime_error("mock explorer failed to bind");
  thread_ = std::thread([this] { server_->listen_after_bind(); });
  server_->wait_until_ready();
}

MockExplorer::~MockExplorer() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

std::string MockExplorer::base_url() const {
  return "http://127.0.0.1:" + std::to_string(port_) + "/api";
}

void MockExplorer::add_token(const std::string& contract, std::vector<Holder> holders) {
  std::lock_guard<std::mutex> lock(mutex_);
  TokenConfig config;
  config.pages = {std::move(holders)};
  tokens_[lower(contract)] = std::move(config);
}

void MockExplorer::add_token_pages(const std::string& contract,
                                   std::vector<std::vector<Holder>> pages) {
  std::lock_guard<std::mutex> lock(mutex_);
  TokenConfig config;
  config.pages = std::move(pages);
  if (config.pages.size() < 2)
    throw std::runtime_error("add_token_pages wants two or more explicit pages");
  tokens_[lower(contract)] = std::move(config);
}

void MockExplorer::set_token_error(const std::string& contract, const std::string& message,
                                   const std::string& result) {
  std::lock_guard<std::mutex> lock(mutex_);
  TokenConfig config;
  config.mode = TokenConfig::Mode::error;
  config.error_message = message;
  config.error_result = result;
  tokens_[lower(contract)] = std::move(config);
}

void MockExplorer::set_token_unknown(const std::string& contract) {
  std::lock_guard<std::mutex> lock(mutex_);
  TokenConfig config;
  config.mode = TokenConfig::Mode::http404;
  tokens_[lower(contract)] = std::move(config);
}

void MockExplorer::set_code(const std::string& address, const std::string& bytecode) {
  std::lock_guard<std::mutex> lock(mutex_);
  codes_[lower(address)] = bytecode;
}

void MockExplorer::set_code_error(const std::string& address, const std::string& message) {
  std::lock_guard<std::mutex> lock(mutex_);
  code_errors_[lower(address)] = message;
}

int MockExplorer::holder_requests(const std::string& contract) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = holder_counts_.find(lower(contract));
  return it == holder_counts_.end() ? 0 : it->second;
}

int MockExplorer::code_requests(const std::string& address) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = code_counts_.find(lower(address));
  return it == code_counts_.end() ? 0 : it->second;
}

int MockExplorer::total_requests() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return total_requests_;
}

std::vector<std::chrono::steady_clock::time_point> MockExplorer::request_times() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return times_;
}

std::string MockExplorer::last_query() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return last_query_;
}

void MockExplorer::reset_counters() {
  std::lock_guard<std::mutex> lock(mutex_);
  holder_counts_.clear();
  code_counts_.clear();
  total_requests_ = 0;
  times_.clear();
}

}  // namespace daogini::testing
