#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "daogini/gini.hpp"
#include "daogini/ols.hpp"

namespace daogini {

enum class ReportFormat { md, csv, json };
ReportFormat parse_report_format(const std::string& name);

struct BundleRow {
  std::string company;  // may be empty (plain bundle CSVs carry only the symbol)
  std::string symbol;
  std::optional<double> g_all;  // reference tables publish only the four groups
  double g_c = 0;
  double g_d = 0;
  double g_e = 0;
  double g_f = 0;
};

// One skipped token in a batch run.
struct RowError {
  std::string symbol;
  std::string message;
};

struct RunProvenance {
  std::string tool_version;
  std::string manifest_hash;  // 16 hex digits, empty when no manifest was involved
  std::vector<std::pair<std::string, std::string>> captured_at;  // (symbol, timestamp)
  std::string transform_dep;  // regression flags, empty for pure gini runs
  double gini_floor = 0.0;
  std::string se_flavor;
};

// Machine bundle rows: `symbol,g_all,g_c,g_d,g_e,g_f`, six decimals.
std::string bundle_csv(const std::vector<BundleRow>& rows);

// Reads either a bundle CSV (symbol,g_all,...) or a published-table CSV
// (company,token,g_c,...); the four group columns are required.
std::vector<BundleRow> read_gini_table_csv(const std::filesystem::path& path);

// Human table in the published layout: company/token columns, two-decimal
// half-up cells.
std::string bundle_markdown(const std::vector<BundleRow>& rows,
                            const std::vector<RowError>& errors = {},
                            const RunProvenance* provenance = nullptr);
std::string bundle_json(const std::vector<BundleRow>& rows,
                        const std::vector<RowError>& errors = {},
                        const RunProvenance* provenance = nullptr);

// Nested-model table: one column per fit, coefficient rows with stars
// attached and "(se)" beneath, a Constant row, an Observations row, and the
// significance-threshold legend.
std::string regression_markdown(const std::vector<FitResult>& fits,
                                const RunProvenance* provenance = nullptr);
// Long format: model,term,coef,se,t,p,stars (shortest round-trip numbers).
std::string regression_csv(const std::vector<FitResult>& fits);
// Full-precision document including n, df, flags.
std::string regression_json(const std::vector<FitResult>& fits,
                            const RunProvenance* provenance = nullptr);

}  // namespace daogini
