#include "daogini/pipeline.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

#include "daogini/errors.hpp"
#include "daogini/gini.hpp"
#include "daogini/numfmt.hpp"
#include "daogini/snapshot_io.hpp"
#include "daogini/version.hpp"

namespace daogini {

namespace {

const std::map<std::int64_t, std::string>& builtin_endpoints() {
  static const std::map<std::int64_t, std::string> endpoints{
      {1, "https://api.etherscan.io/api"},
      {56, "https://api.bscscan.com/api"},
      {42161, "https://api.arbiscan.io/api"},
      {43114, "https://api.snowtrace.io/api"},
  };
  return endpoints;
}

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

void write_output(const std::optional<std::filesystem::path>& path, const std::string& content,
                  std::ostream& fallback) {
  if (!path) {
    fallback << content;
    return;
  }
  std::ofstream out(*path);
  if (!out) throw ConfigError("cannot open " + path->string() + " for writing");
  out << content;
  if (!out) throw Error("failed writing " + path->string());
}

}  // namespace

ExplorerTarget resolve_target(std::int64_t chain_id, const ExplorerOverrides& overrides) {
  ExplorerTarget target;
  target.chain_id = chain_id;

  if (auto it = builtin_endpoints().find(chain_id); it != builtin_endpoints().end())
    target.base_url = it->second;

  if (overrides.config_file) {
    std::ifstream in(*overrides.config_file);
    if (!in) throw ConfigError("cannot open explorer config " + overrides.config_file->string());
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(overrides.config_file->string() + ": " + e.what());
    }
    auto key = std::to_string(chain_id);
    if (doc.contains(key)) {
      const auto& c = doc.at(key);
      if (c.contains("base_url")) target.base_url = c.at("base_url").get<std::string>();
      if (c.contains("api_key_ref")) target.api_key_ref = c.at("api_key_ref").get<std::string>();
      if (c.contains("rate_limit")) target.rate_limit = c.at("rate_limit").get<double>();
      if (c.contains("page_size")) target.page_size = c.at("page_size").get<int>();
    }
  }

  if (overrides.base_url) target.base_url = *overrides.base_url;
  if (overrides.api_key_ref) target.api_key_ref = *overrides.api_key_ref;
  if (overrides.rate_limit) target.rate_limit = *overrides.rate_limit;
  if (overrides.page_size) target.page_size = *overrides.page_size;

  if (target.base_url.empty())
    throw ConfigError("no explorer endpoint for chain " + std::to_string(chain_id) +
                      " (pass --explorer-url or --explorers)");
  target.validate();
  return target;
}

namespace {

std::filesystem::path snapshot_path(const std::filesystem::path& dir,
                                    const ManifestEntry& entry) {
  return dir / (entry.token_symbol + ".json");
}

// A snapshot counts as fresh when it loads cleanly and belongs to the same
// token on the same chain.
bool snapshot_fresh(const std::filesystem::path& path, const ManifestEntry& entry) {
  if (!std::filesystem::exists(path)) return false;
  try {
    HolderSnapshot snap = load_snapshot(path);
    return snap.meta().token_contract == entry.token_contract &&
           snap.meta().chain_id == entry.chain_id;
  } catch (const Error&) {
    return false;
  }
}

std::filesystem::path resolve_cache_dir(const IngestOptions& options) {
  if (options.cache_dir) return *options.cache_dir;
  if (const char* env = std::getenv("DAOGINI_CACHE_DIR"); env && *env) return env;
  return options.out_dir;
}

}  // namespace

int cmd_ingest(const IngestOptions& options, std::ostream& out, std::ostream& err) {
  Manifest manifest = Manifest::load(options.manifest_path);
  if (manifest.entries.empty()) throw ConfigError("manifest has no entries");
  std::filesystem::create_directories(options.out_dir);

  bool drop_contracts = options.drop_contracts.value_or(manifest.defaults.drop_contracts);
  std::filesystem::path cache_dir = resolve_cache_dir(options);
  std::filesystem::create_directories(cache_dir);
  ClassificationCache cache(cache_dir / "classifications.csv");

  // One client per chain so the rate limit is honored across entries.
  std::map<std::int64_t, std::unique_ptr<ExplorerClient>> clients;
  auto client_for = [&](std::int64_t chain_id) -> ExplorerClient& {
    auto it = clients.find(chain_id);
    if (it == clients.end()) {
      auto client = std::make_unique<ExplorerClient>(resolve_target(chain_id, options.explorer),
                                                     options.retry);
      it = clients.emplace(chain_id, std::move(client)).first;
    }
    return *it->second;
  };

  std::vector<RowError> failures;
  for (const auto& entry : manifest.entries) {
    auto path = snapshot_path(options.out_dir, entry);
    try {
      if (!options.force && snapshot_fresh(path, entry)) {
        out << entry.token_symbol << ": fresh snapshot, skipped (use --force to refetch)\n";
        continue;
      }

      SnapshotMeta meta;
      meta.token_symbol = entry.token_symbol;
      meta.token_contract = entry.token_contract;
      meta.chain_id = entry.chain_id;
      meta.captured_at = now_rfc3339();

      std::optional<std::filesystem::path> csv_path;
      if (options.csv_dir) {
        auto candidate = *options.csv_dir / (entry.token_symbol + ".csv");
        if (std::filesystem::exists(candidate)) csv_path = candidate;
      }

      HolderSnapshot snapshot = [&] {
        if (csv_path) return import_csv(*csv_path, meta, drop_contracts);
        ExplorerClient& client = client_for(entry.chain_id);
        auto records = client.fetch_holders(entry.token_contract);
        ClassificationMap classifications;
        if (drop_contracts) {
          for (const auto& r : records)
            classifications[r.address] = client.classify_address(r.address, cache).kind;
        }
        return HolderSnapshot::build(std::move(records), classifications, drop_contracts, meta);
      }();

      save_snapshot(snapshot, path);
      out << entry.token_symbol << ": " << snapshot.size() << " holders -> " << path.string()
          << (csv_path ? " (from CSV)" : "") << "\n";
    } catch (const Error& e) {
      failures.push_back({entry.token_symbol, e.what()});
      err << entry.token_symbol << ": " << e.what() << "\n";
    }
  }

  if (!failures.empty()) {
    err << failures.size() << " of " << manifest.entries.size() << " entries failed:";
    for (const auto& f : failures) err << " " << f.symbol;
    err << "\n";
    return kExitPartial;
  }
  return kExitOk;
}

int cmd_gini(const GiniOptions& options, std::ostream& out, std::ostream& err) {
  struct Item {
    std::filesystem::path path;
    std::string company;  // empty when running from bare snapshot paths
    std::string symbol;   // fallback label until the snapshot is read
  };
  std::vector<Item> items;

  std::optional<Manifest> manifest;
  if (options.manifest_path) {
    manifest = Manifest::load(*options.manifest_path);
    if (!options.snapshot_dir)
      throw ConfigError("--manifest needs --snapshot-dir to locate snapshot files");
    for (const auto& entry : manifest->entries)
      items.push_back({snapshot_path(*options.snapshot_dir, entry), entry.company,
                       entry.token_symbol});
  } else {
    for (const auto& path : options.snapshots)
      items.push_back({path, "", path.stem().string()});
  }
  if (items.empty()) throw ConfigError("no snapshots to process");

  std::vector<BundleRow> rows;
  std::vector<RowError> errors;
  RunProvenance provenance;
  provenance.tool_version = kVersion;
  if (manifest) provenance.manifest_hash = hash_hex(manifest->content_hash);

  for (const auto& item : items) {
    try {
      HolderSnapshot snapshot = load_snapshot(item.path);
      GiniBundle bundle = compute_bundle(snapshot);
      BundleRow row;
      row.company = item.company;
      row.symbol = snapshot.meta().token_symbol;
      row.g_all = bundle.g_all;
      row.g_c = bundle.g_c;
      row.g_d = bundle.g_d;
      row.g_e = bundle.g_e;
      row.g_f = bundle.g_f;
      rows.push_back(std::move(row));
      provenance.captured_at.emplace_back(snapshot.meta().token_symbol,
                                          snapshot.meta().captured_at);
    } catch (const Error& e) {
      errors.push_back({item.symbol, e.what()});
      err << item.symbol << ": " << e.what() << "\n";
    }
  }

  std::string content;
  switch (options.format) {
    case ReportFormat::csv:
      content = bundle_csv(rows);
      break;
    case ReportFormat::md:
      content = bundle_markdown(rows, errors, &provenance);
      break;
    case ReportFormat::json:
      content = bundle_json(rows, errors, &provenance);
      break;
  }
  write_output(options.out_path, content, out);

  return errors.empty() ? kExitOk : kExitPartial;
}

std::string transformed_label(const std::string& column, TransformSpec::Kind kind) {
  std::string base;
  // g_c -> GC, roi -> ROI, x1 -> X1
  for (char c : column) {
    if (c == '_') continue;
    base += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  switch (kind) {
    case TransformSpec::Kind::ln:
      return "Ln" + base;
    case TransformSpec::Kind::ln1p:
      return "Ln1p" + base;
    case TransformSpec::Kind::identity:
      return base;
  }
  return base;
}

std::vector<ModelSpec> default_model_specs(SeFlavor flavor) {
  auto label = [](const char* col) { return transformed_label(col, TransformSpec::Kind::ln); };
  std::vector<std::vector<std::string>> sets{
      {label("g_c"), label("g_d"), label("g_e"), label("g_f")},
      {label("g_d"), label("g_e"), label("g_f")},
      {label("g_d"), label("g_e")},
      {label("g_d")},
  };
  std::vector<ModelSpec> specs;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    ModelSpec spec;
    spec.name = "OLS (" + std::to_string(i + 1) + ")";
    spec.dependent = "";  // filled by run_regression once the transform is known
    spec.regressors = std::move(sets[i]);
    spec.se_flavor = flavor;
    specs.push_back(std::move(spec));
  }
  return specs;
}

namespace {

// "g_c+g_d;g_d" -> model specs over transformed labels.
std::vector<ModelSpec> parse_model_sets(const std::string& text, SeFlavor flavor) {
  std::vector<ModelSpec> specs;
  std::stringstream models(text);
  std::string model;
  while (std::getline(models, model, ';')) {
    if (model.empty()) continue;
    ModelSpec spec;
    spec.name = "OLS (" + std::to_string(specs.size() + 1) + ")";
    spec.se_flavor = flavor;
    std::stringstream cols(model);
    std::string col;
    while (std::getline(cols, col, '+')) {
      if (col.empty()) throw ConfigError("empty regressor in model set \"" + model + "\"");
      spec.regressors.push_back(transformed_label(col, TransformSpec::Kind::ln));
    }
    specs.push_back(std::move(spec));
  }
  if (specs.empty()) throw ConfigError("no models parsed from \"" + text + "\"");
  return specs;
}

// Transforms `column` and stores it as `label`, naming offending companies.
void add_transformed(ObservationTable& panel, const std::string& column,
                     const TransformSpec& spec, const std::string& label) {
  if (!panel.has_column(column)) throw ConfigError("dependent column not found: " + column);
  auto raw = panel.column(column);
  try {
    panel.set_column(label, transform_column(raw, spec));
  } catch (const TransformError& e) {
    throw ValidationError("column " + column + ", company " + panel.companies()[e.row()] + ": " +
                          e.what());
  }
}

const std::map<std::string, std::string>& regressor_sources() {
  // transformed label -> panel column
  static const std::map<std::string, std::string> sources = [] {
    std::map<std::string, std::string> m;
    for (const char* col : {"g_all", "g_c", "g_d", "g_e", "g_f"})
      m[transformed_label(col, TransformSpec::Kind::ln)] = col;
    return m;
  }();
  return sources;
}

}  // namespace

std::vector<FitResult> run_regression(const ObservationTable& panel,
                                      const RegressOptions& options) {
  std::vector<ModelSpec> specs = options.models
                                     ? parse_model_sets(*options.models, options.se_flavor)
                                     : default_model_specs(options.se_flavor);

  ObservationTable table = panel;

  // Dependent: roi under the chosen transform.
  TransformSpec dep_spec{options.transform_dep, 0.0};
  std::string dep_label = transformed_label("roi", options.transform_dep);
  add_transformed(table, "roi", dep_spec, dep_label);

  // Regressors: full-precision Gini columns under ln (optionally floored for
  // published tables whose rounded cells contain zeros).
  TransformSpec gini_spec{TransformSpec::Kind::ln, options.gini_floor};
  std::set<std::string> needed;
  for (const auto& spec : specs)
    for (const auto& r : spec.regressors) needed.insert(r);
  for (const auto& label : needed) {
    auto it = regressor_sources().find(label);
    if (it == regressor_sources().end())
      throw ConfigError("unknown regressor " + label +
                        " (model sets use panel columns g_all, g_c, g_d, g_e, g_f)");
    add_transformed(table, it->second, gini_spec, label);
  }

  bool log_log = options.transform_dep == TransformSpec::Kind::ln;
  std::vector<FitResult> fits;
  for (auto& spec : specs) {
    spec.dependent = dep_label;
    fits.push_back(fit_ols(table, spec, log_log));
  }
  return fits;
}

int cmd_regress(const RegressOptions& options, std::ostream& out, std::ostream& err) {
  (void)err;
  ObservationTable panel = ObservationTable::from_csv(options.panel_path);
  std::vector<FitResult> fits = run_regression(panel, options);

  RunProvenance provenance;
  provenance.tool_version = kVersion;
  provenance.transform_dep = options.transform_dep == TransformSpec::Kind::ln     ? "ln"
                             : options.transform_dep == TransformSpec::Kind::ln1p ? "ln1p"
                                                                                  : "identity";
  provenance.gini_floor = options.gini_floor;
  provenance.se_flavor = options.se_flavor == SeFlavor::hc1 ? "hc1" : "hc0";

  std::string content;
  switch (options.format) {
    case ReportFormat::md:
      content = regression_markdown(fits, &provenance);
      break;
    case ReportFormat::csv:
      content = regression_csv(fits);
      break;
    case ReportFormat::json:
      content = regression_json(fits, &provenance);
      break;
  }
  write_output(options.out_path, content, out);
  return kExitOk;
}

std::vector<FitResult> parse_regression_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }

  std::vector<FitResult> fits;
  try {
    for (const auto& m : doc.at("models")) {
      FitResult fit;
      fit.model_name = m.at("name").get<std::string>();
      fit.dependent = m.at("dependent").get<std::string>();
      fit.n = m.at("n").get<int>();
      fit.k = m.at("k").get<int>();
      fit.se_flavor = m.at("se_flavor").get<std::string>() == "hc0" ? SeFlavor::hc0
                                                                    : SeFlavor::hc1;
      fit.log_log = m.value("log_log", false);
      const auto& terms = m.at("terms");
      auto count = static_cast<Eigen::Index>(terms.size());
      fit.beta.resize(count);
      fit.se.resize(count);
      fit.t.resize(count);
      fit.p.resize(count);
      Eigen::Index i = 0;
      for (const auto& term : terms) {
        fit.terms.push_back(term.at("term").get<std::string>());
        fit.beta[i] = term.at("coef").get<double>();
        fit.se[i] = term.at("se").get<double>();
        fit.t[i] = term.at("t").get<double>();
        fit.p[i] = term.at("p").get<double>();
        fit.stars.push_back(term.at("stars").get<std::string>());
        ++i;
      }
      fits.push_back(std::move(fit));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (fits.empty()) throw ParseError(path.string() + ": no models");
  return fits;
}

int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err) {
  (void)err;
  if (!options.bundle_path && !options.regression_path)
    throw ConfigError("empty artifact set: pass --bundle and/or --regression");

  RunProvenance provenance;
  provenance.tool_version = kVersion;

  std::string content;
  if (options.bundle_path) {
    auto rows = read_gini_table_csv(*options.bundle_path);
    switch (options.format) {
      case ReportFormat::md:
        content += bundle_markdown(rows, {}, &provenance);
        break;
      case ReportFormat::csv:
        content += bundle_csv(rows);
        break;
      case ReportFormat::json:
        content += bundle_json(rows, {}, &provenance);
        break;
    }
  }
  if (options.regression_path) {
    if (options.bundle_path && options.format == ReportFormat::csv)
      throw ConfigError("csv format renders one artifact at a time");
    if (!content.empty()) content += "\n";
    auto fits = parse_regression_json(*options.regression_path);
    switch (options.format) {
      case ReportFormat::md:
        content += regression_markdown(fits, &provenance);
        break;
      case ReportFormat::csv:
        content += regression_csv(fits);
        break;
      case ReportFormat::json:
        content += regression_json(fits, &provenance);
        break;
    }
  }
  write_output(options.out_path, content, out);
  return kExitOk;
}

}  // namespace daogini
