#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "daogini/explorer.hpp"
#include "daogini/manifest.hpp"
#include "daogini/ols.hpp"
#include "daogini/report.hpp"

namespace daogini {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;    // bad flags, config or inputs
inline constexpr int kExitPartial = 2;  // one or more entries failed, run continued

struct ExplorerOverrides {
  std::optional<std::string> base_url;  // forces one endpoint for every chain
  std::optional<std::string> api_key_ref;
  std::optional<double> rate_limit;
  std::optional<int> page_size;
  std::optional<std::filesystem::path> config_file;  // JSON: chain_id -> target fields
};

// Built-in endpoints for well-known chains, overlaid by the config file,
// overlaid by CLI flags.
ExplorerTarget resolve_target(std::int64_t chain_id, const ExplorerOverrides& overrides);

struct IngestOptions {
  std::filesystem::path manifest_path;
  std::filesystem::path out_dir;
  bool force = false;
  std::optional<bool> drop_contracts;  // flag > manifest default
  std::optional<std::filesystem::path> csv_dir;    // offline path: <dir>/<symbol>.csv
  std::optional<std::filesystem::path> cache_dir;  // flag > DAOGINI_CACHE_DIR > out_dir
  ExplorerOverrides explorer;
  RetryPolicy retry;
};

// One snapshot file per manifest entry; entries with fresh snapshots are
// skipped unless force. Per-entry failures are collected, reported on err,
// and turn the exit code to kExitPartial.
int cmd_ingest(const IngestOptions& options, std::ostream& out, std::ostream& err);

struct GiniOptions {
  std::optional<std::filesystem::path> manifest_path;  // ordering + company names
  std::optional<std::filesystem::path> snapshot_dir;
  std::vector<std::filesystem::path> snapshots;  // explicit paths, used as given
  std::optional<std::filesystem::path> out_path;  // default: stdout
  ReportFormat format = ReportFormat::csv;
};

// Bundle rows in manifest (or argument) order. Snapshots that cannot be
// measured become row-level errors; the run continues.
int cmd_gini(const GiniOptions& options, std::ostream& out, std::ostream& err);

struct RegressOptions {
  std::filesystem::path panel_path;
  std::optional<std::filesystem::path> out_path;  // default: stdout
  ReportFormat format = ReportFormat::md;
  TransformSpec::Kind transform_dep = TransformSpec::Kind::ln;
  double gini_floor = 0.0;
  SeFlavor se_flavor = SeFlavor::hc1;
  // Extra model sets as raw regressor columns, e.g. "g_c+g_d;g_d".
  // Empty: the four nested default models over g_c..g_f.
  std::optional<std::string> models;
};

int cmd_regress(const RegressOptions& options, std::ostream& out, std::ostream& err);

// The regression stage without I/O: transforms the panel columns the models
// need, fits every model, returns the fits in order.
std::vector<FitResult> run_regression(const ObservationTable& panel,
                                      const RegressOptions& options);

// Default nested models over transformed group-Gini columns.
std::vector<ModelSpec> default_model_specs(SeFlavor flavor);

struct ReportOptions {
  std::optional<std::filesystem::path> bundle_path;        // gini-table CSV
  std::optional<std::filesystem::path> regression_path;    // regression JSON artifact
  ReportFormat format = ReportFormat::md;
  std::optional<std::filesystem::path> out_path;  // default: stdout
};

int cmd_report(const ReportOptions& options, std::ostream& out, std::ostream& err);

// Rehydrates fits from a regression JSON artifact (rendering fields only).
std::vector<FitResult> parse_regression_json(const std::filesystem::path& path);

// Display label for a transformed column: g_c -> LnGC, roi -> LnROI, ...
std::string transformed_label(const std::string& column, TransformSpec::Kind kind);

}  // namespace daogini
