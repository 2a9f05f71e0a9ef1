#include "daogini/snapshot_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>

#include "daogini/csv.hpp"
#include "daogini/errors.hpp"

namespace daogini {

namespace {

constexpr int kSchemaVersion = 1;

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

void save_snapshot(const HolderSnapshot& snapshot, const std::filesystem::path& path) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["token_symbol"] = snapshot.meta().token_symbol;
  doc["token_contract"] = snapshot.meta().token_contract;
  doc["chain_id"] = snapshot.meta().chain_id;
  doc["captured_at"] = snapshot.meta().captured_at;
  doc["decimals"] = snapshot.meta().decimals;
  doc["contracts_removed"] = snapshot.contracts_removed();
  doc["total_balance"] = balance_to_string(snapshot.total_balance());
  auto records = nlohmann::ordered_json::array();
  for (const auto& r : snapshot.records()) {
    records.push_back({{"address", r.address}, {"balance", balance_to_string(r.balance)}});
  }
  doc["records"] = std::move(records);

  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw Error("failed writing " + path.string());
}

HolderSnapshot load_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }

  auto require = [&](const char* field) -> const nlohmann::json& {
    if (!doc.contains(field))
      throw ParseError(path.string() + ": missing field \"" + field + "\"");
    return doc.at(field);
  };

  try {
    if (require("schema_version").get<int>() != kSchemaVersion)
      throw ParseError(path.string() + ": unsupported schema_version");

    SnapshotMeta meta;
    meta.token_symbol = require("token_symbol").get<std::string>();
    meta.token_contract = require("token_contract").get<std::string>();
    meta.chain_id = require("chain_id").get<std::int64_t>();
    meta.captured_at = require("captured_at").get<std::string>();
    meta.decimals = require("decimals").get<std::uint32_t>();
    if (!looks_like_rfc3339(meta.captured_at))
      throw ParseError(path.string() + ": captured_at \"" + meta.captured_at +
                       "\" is not RFC 3339");

    bool contracts_removed = require("contracts_removed").get<bool>();

    const auto& total_field = require("total_balance");
    if (!total_field.is_string())
      throw ParseError(path.string() + ": total_balance must be a decimal string");
    Balance total = parse_balance(total_field.get<std::string>());

    std::vector<HolderRecord> records;
    const auto& arr = require("records");
    if (!arr.is_array()) throw ParseError(path.string() + ": records must be an array");
    records.reserve(arr.size());
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto& item = arr[i];
      auto context = path.string() + ": records[" + std::to_string(i) + "]";
      if (!item.contains("address") || !item.contains("balance"))
        throw ParseError(context + ": need address and balance");
      if (!item.at("balance").is_string())
        throw ParseError(context + ": balance must be a decimal string");
      HolderRecord rec;
      rec.address = item.at("address").get<std::string>();
      try {
        rec.balance = parse_balance(item.at("balance").get<std::string>());
      } catch (const ParseError& e) {
        throw ParseError(context + ": " + e.what());
      }
      records.push_back(std::move(rec));
    }

    return HolderSnapshot::from_parts(std::move(meta), contracts_removed, std::move(total),
                                      std::move(records));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

HolderSnapshot import_csv(const std::filesystem::path& path, SnapshotMeta meta,
                          bool drop_contracts) {
  csv::Table table = csv::read_file(path);
  int addr_col = table.find("address");
  int bal_col = table.find("balance");
  int contract_col = table.find("is_contract");
  if (addr_col < 0 || bal_col < 0)
    throw ParseError(path.string() + ": header must contain address,balance[,is_contract]");
  if (drop_contracts && contract_col < 0)
    throw ConfigError(path.string() +
                      ": classification unavailable (no is_contract column) but contract "
                      "removal was requested");

  std::vector<HolderRecord> records;
  ClassificationMap classifications;
  records.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    auto context = path.string() + " row " + std::to_string(i + 2);
    HolderRecord rec;
    rec.address = normalize_address(row[static_cast<std::size_t>(addr_col)]);
    try {
      rec.balance = parse_balance(row[static_cast<std::size_t>(bal_col)]);
    } catch (const ParseError& e) {
      throw ParseError(context + ": " + e.what());
    }
    if (contract_col >= 0) {
      std::string flag = lower(row[static_cast<std::size_t>(contract_col)]);
      if (flag == "true")
        classifications[rec.address] = AddressKind::contract;
      else if (flag == "false")
        classifications[rec.address] = AddressKind::external;
      else
        throw ParseError(context + ": is_contract must be true or false, got \"" + flag + "\"");
    }
    records.push_back(std::move(rec));
  }

  return HolderSnapshot::build(std::move(records), classifications, drop_contracts,
                               std::move(meta));
}

}  // namespace daogini
