#include "daogini/manifest.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "daogini/csv.hpp"
#include "daogini/errors.hpp"
#include "daogini/holder.hpp"
#include "daogini/numfmt.hpp"

namespace daogini {

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

namespace {

std::string read_all(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool parse_bool(const std::string& raw, const std::string& context) {
  std::string v = raw;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError(context + ": expected a boolean, got \"" + raw + "\"");
}

TransformSpec::Kind parse_transform_kind(const std::string& raw, const std::string& context) {
  if (raw == "ln") return TransformSpec::Kind::ln;
  if (raw == "ln1p") return TransformSpec::Kind::ln1p;
  if (raw == "identity") return TransformSpec::Kind::identity;
  throw ParseError(context + ": unknown transform \"" + raw + "\" (want ln, ln1p or identity)");
}

void check_unique(const Manifest& manifest, const std::filesystem::path& path) {
  std::set<std::pair<std::int64_t, std::string>> seen;
  for (const auto& e : manifest.entries) {
    if (!seen.emplace(e.chain_id, e.token_contract).second)
      throw ValidationError(path.string() + ": duplicate (chain_id, token_contract) pair " +
                            std::to_string(e.chain_id) + ", " + e.token_contract);
  }
}

Manifest load_csv(const std::filesystem::path& path, const std::string& raw) {
  csv::Table table = csv::read_string(raw, path.string());
  int company = table.find("company");
  int symbol = table.find("token_symbol");
  int contract = table.find("token_contract");
  int chain = table.find("chain_id");
  int roi = table.find("roi");
  int verified = table.find("dao_verified");
  if (company < 0 || symbol < 0 || contract < 0 || chain < 0)
    throw ParseError(path.string() +
                     ": header needs company,token_symbol,token_contract,chain_id[,roi,dao_verified]");

  Manifest manifest;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    std::string context = path.string() + " row " + std::to_string(i + 2);
    ManifestEntry entry;
    entry.company = row[static_cast<std::size_t>(company)];
    entry.token_symbol = row[static_cast<std::size_t>(symbol)];
    entry.token_contract = normalize_address(row[static_cast<std::size_t>(contract)]);
    try {
      entry.chain_id = std::stoll(row[static_cast<std::size_t>(chain)]);
    } catch (const std::exception&) {
      throw ParseError(context + ": chain_id is not an integer");
    }
    if (roi >= 0 && !row[static_cast<std::size_t>(roi)].empty())
      entry.roi = parse_double_strict(row[static_cast<std::size_t>(roi)], context + " roi");
    if (verified >= 0 && !row[static_cast<std::size_t>(verified)].empty())
      entry.dao_verified =
          parse_bool(row[static_cast<std::size_t>(verified)], context + " dao_verified");
    manifest.entries.push_back(std::move(entry));
  }
  return manifest;
}

Manifest load_json(const std::filesystem::path& path, const std::string& raw) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(raw);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }

  Manifest manifest;
  try {
    if (doc.contains("defaults")) {
      const auto& d = doc.at("defaults");
      if (d.contains("drop_contracts"))
        manifest.defaults.drop_contracts = d.at("drop_contracts").get<bool>();
      if (d.contains("transform_dep"))
        manifest.defaults.transform_dep =
            parse_transform_kind(d.at("transform_dep").get<std::string>(),
                                 path.string() + " defaults.transform_dep");
      if (d.contains("gini_floor")) manifest.defaults.gini_floor = d.at("gini_floor").get<double>();
    }
    const auto& entries = doc.contains("entries") ? doc.at("entries") : doc;
    if (!entries.is_array()) throw ParseError(path.string() + ": entries must be an array");
    for (const auto& e : entries) {
      ManifestEntry entry;
      entry.company = e.at("company").get<std::string>();
      entry.token_symbol = e.at("token_symbol").get<std::string>();
      entry.token_contract = normalize_address(e.at("token_contract").get<std::string>());
      entry.chain_id = e.at("chain_id").get<std::int64_t>();
      if (e.contains("roi") && !e.at("roi").is_null()) entry.roi = e.at("roi").get<double>();
      if (e.contains("dao_verified")) entry.dao_verified = e.at("dao_verified").get<bool>();
      manifest.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(path.string() + ": " + ex.what());
  }
  return manifest;
}

}  // namespace

Manifest Manifest::load(const std::filesystem::path& path) {
  std::string raw = read_all(path);
  Manifest manifest =
      path.extension() == ".json" ? load_json(path, raw) : load_csv(path, raw);
  manifest.content_hash = fnv1a64(raw);
  check_unique(manifest, path);
  return manifest;
}

}  // namespace daogini
