#include "daogini/report.hpp"

#include <json.hpp>

#include <algorithm>

#include "daogini/csv.hpp"
#include "daogini/errors.hpp"
#include "daogini/numfmt.hpp"

namespace daogini {

ReportFormat parse_report_format(const std::string& name) {
  if (name == "md") return ReportFormat::md;
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw ConfigError("unknown report format \"" + name + "\" (want md, csv or json)");
}

std::string bundle_csv(const std::vector<BundleRow>& rows) {
  std::string out = "symbol,g_all,g_c,g_d,g_e,g_f\n";
  for (const auto& r : rows) {
    out += csv::format_row({r.symbol, r.g_all ? format_fixed(*r.g_all, 6) : std::string{},
                            format_fixed(r.g_c, 6), format_fixed(r.g_d, 6),
                            format_fixed(r.g_e, 6), format_fixed(r.g_f, 6)});
  }
  return out;
}

std::vector<BundleRow> read_gini_table_csv(const std::filesystem::path& path) {
  csv::Table table = csv::read_file(path);
  int company = table.find("company");
  int symbol = table.find("symbol");
  if (symbol < 0) symbol = table.find("token");
  int g_all = table.find("g_all");
  int g_c = table.find("g_c");
  int g_d = table.find("g_d");
  int g_e = table.find("g_e");
  int g_f = table.find("g_f");
  if (g_c < 0 || g_d < 0 || g_e < 0 || g_f < 0)
    throw ParseError(path.string() + ": need columns g_c,g_d,g_e,g_f");
  if (symbol < 0 && company < 0)
    throw ParseError(path.string() + ": need a symbol, token or company column");

  std::vector<BundleRow> rows;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& raw = table.rows[i];
    std::string context = path.string() + " row " + std::to_string(i + 2);
    BundleRow row;
    if (company >= 0) row.company = raw[static_cast<std::size_t>(company)];
    row.symbol = symbol >= 0 ? raw[static_cast<std::size_t>(symbol)] : row.company;
    auto num = [&](int col, const char* name) {
      return parse_double_strict(raw[static_cast<std::size_t>(col)],
                                 context + " " + std::string(name));
    };
    if (g_all >= 0 && !raw[static_cast<std::size_t>(g_all)].empty())
      row.g_all = num(g_all, "g_all");
    row.g_c = num(g_c, "g_c");
    row.g_d = num(g_d, "g_d");
    row.g_e = num(g_e, "g_e");
    row.g_f = num(g_f, "g_f");
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

bool any_company(const std::vector<BundleRow>& rows) {
  return std::any_of(rows.begin(), rows.end(), [](const BundleRow& r) { return !r.company.empty(); });
}

bool any_g_all(const std::vector<BundleRow>& rows) {
  return std::any_of(rows.begin(), rows.end(),
                     [](const BundleRow& r) { return r.g_all.has_value(); });
}

std::string provenance_lines(const RunProvenance& p) {
  std::string out;
  out += "Tool version: " + p.tool_version + "\n";
  if (!p.manifest_hash.empty()) out += "Manifest hash: " + p.manifest_hash + "\n";
  for (const auto& [symbol, ts] : p.captured_at)
    out += "Captured " + symbol + ": " + ts + "\n";
  if (!p.transform_dep.empty()) {
    out += "Dependent transform: " + p.transform_dep + "\n";
    out += "Gini floor: " + format_double_shortest(p.gini_floor) + "\n";
  }
  if (!p.se_flavor.empty()) out += "Standard errors: " + p.se_flavor + "\n";
  return out;
}

nlohmann::ordered_json provenance_json(const RunProvenance& p) {
  nlohmann::ordered_json doc;
  doc["tool_version"] = p.tool_version;
  if (!p.manifest_hash.empty()) doc["manifest_hash"] = p.manifest_hash;
  if (!p.captured_at.empty()) {
    auto captured = nlohmann::ordered_json::object();
    for (const auto& [symbol, ts] : p.captured_at) captured[symbol] = ts;
    doc["captured_at"] = std::move(captured);
  }
  if (!p.transform_dep.empty()) {
    doc["transform_dep"] = p.transform_dep;
    doc["gini_floor"] = p.gini_floor;
  }
  if (!p.se_flavor.empty()) doc["se_flavor"] = p.se_flavor;
  return doc;
}

}  // namespace

std::string bundle_markdown(const std::vector<BundleRow>& rows,
                            const std::vector<RowError>& errors,
                            const RunProvenance* provenance) {
  if (rows.empty() && errors.empty()) throw ConfigError("nothing to report");
  bool with_company = any_company(rows);
  bool with_g = any_g_all(rows);

  std::string out = "| ";
  if (with_company) out += "Company | ";
  out += "Governance token | ";
  if (with_g) out += "Gini (G) | ";
  out +=
      "Gini for first group (C) | Gini for second group (D) | "
      "Gini for top 50% of first group (E) | Gini for bottom 50% of first group (F) |\n";
  int columns = 5 + (with_company ? 1 : 0) + (with_g ? 1 : 0);
  out += "|";
  for (int i = 0; i < columns; ++i) out += " --- |";
  out += "\n";

  for (const auto& r : rows) {
    out += "| ";
    if (with_company) out += r.company + " | ";
    out += r.symbol + " | ";
    if (with_g) out += (r.g_all ? format_fixed(*r.g_all, 2) : std::string("-")) + " | ";
    out += format_fixed(r.g_c, 2) + " | " + format_fixed(r.g_d, 2) + " | " +
           format_fixed(r.g_e, 2) + " | " + format_fixed(r.g_f, 2) + " |\n";
  }

  if (!errors.empty()) {
    out += "\nSkipped tokens:\n";
    for (const auto& e : errors) out += "- " + e.symbol + ": " + e.message + "\n";
  }
  if (provenance) out += "\n" + provenance_lines(*provenance);
  return out;
}

std::string bundle_json(const std::vector<BundleRow>& rows, const std::vector<RowError>& errors,
                        const RunProvenance* provenance) {
  nlohmann::ordered_json doc;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json row;
    if (!r.company.empty()) row["company"] = r.company;
    row["symbol"] = r.symbol;
    if (r.g_all) row["g_all"] = *r.g_all;
    row["g_c"] = r.g_c;
    row["g_d"] = r.g_d;
    row["g_e"] = r.g_e;
    row["g_f"] = r.g_f;
    arr.push_back(std::move(row));
  }
  doc["bundles"] = std::move(arr);
  if (!errors.empty()) {
    auto errs = nlohmann::ordered_json::array();
    for (const auto& e : errors) errs.push_back({{"symbol", e.symbol}, {"message", e.message}});
    doc["errors"] = std::move(errs);
  }
  if (provenance) doc["provenance"] = provenance_json(*provenance);
  return doc.dump(2) + "\n";
}

namespace {

// Row order for the nested-model table: regressors by first appearance
// across models, then Constant.
std::vector<std::string> collect_terms(const std::vector<FitResult>& fits) {
  std::vector<std::string> terms;
  for (const auto& fit : fits) {
    for (const auto& t : fit.terms) {
      if (t == "Constant") continue;
      if (std::find(terms.begin(), terms.end(), t) == terms.end()) terms.push_back(t);
    }
  }
  terms.emplace_back("Constant");
  return terms;
}

int term_index(const FitResult& fit, const std::string& term) {
  for (std::size_t i = 0; i < fit.terms.size(); ++i)
    if (fit.terms[i] == term) return static_cast<int>(i);
  return -1;
}

constexpr int kCoefDigits = 7;
constexpr const char* kStarsLegend = "* p ≤ 0.05, ** p ≤ 0.01, *** p ≤ 0.001";

}  // namespace

std::string regression_markdown(const std::vector<FitResult>& fits,
                                const RunProvenance* provenance) {
  if (fits.empty()) throw ConfigError("nothing to report");
  auto terms = collect_terms(fits);

  std::string out = "| |";
  for (const auto& fit : fits) out += " " + fit.model_name + " |";
  out += "\n|";
  for (std::size_t i = 0; i <= fits.size(); ++i) out += " --- |";
  out += "\n";

  for (const auto& term : terms) {
    std::string coef_line = "| " + term + " |";
    std::string se_line = "| |";
    for (const auto& fit : fits) {
      int idx = term_index(fit, term);
      if (idx < 0) {
        coef_line += " - |";
        se_line += " |";
        continue;
      }
      coef_line += " " + format_sig(fit.beta[idx], kCoefDigits) +
                   fit.stars[static_cast<std::size_t>(idx)] + " |";
      se_line += " (" + format_sig(fit.se[idx], kCoefDigits) + ") |";
    }
    out += coef_line + "\n" + se_line + "\n";
  }

  out += "| Observations |";
  for (const auto& fit : fits) out += " " + std::to_string(fit.n) + " |";
  out += "\n";

  out += "\nNotes: OLS regression with robust standard errors";
  out += fits.front().se_flavor == SeFlavor::hc1 ? " (HC1)." : " (HC0).";
  out += " The number in parentheses is the standard error. ";
  out += kStarsLegend;
  out += "\n";
  if (provenance) out += "\n" + provenance_lines(*provenance);
  return out;
}

std::string regression_csv(const std::vector<FitResult>& fits) {
  if (fits.empty()) throw ConfigError("nothing to report");
  std::string out = "model,term,coef,se,t,p,stars\n";
  for (const auto& fit : fits) {
    for (std::size_t i = 0; i < fit.terms.size(); ++i) {
      auto idx = static_cast<Eigen::Index>(i);
      out += csv::format_row({fit.model_name, fit.terms[i], format_double_shortest(fit.beta[idx]),
                              format_double_shortest(fit.se[idx]),
                              format_double_shortest(fit.t[idx]),
                              format_double_shortest(fit.p[idx]), fit.stars[i]});
    }
  }
  return out;
}

std::string regression_json(const std::vector<FitResult>& fits,
                            const RunProvenance* provenance) {
  if (fits.empty()) throw ConfigError("nothing to report");
  nlohmann::ordered_json doc;
  auto models = nlohmann::ordered_json::array();
  for (const auto& fit : fits) {
    nlohmann::ordered_json m;
    m["name"] = fit.model_name;
    m["dependent"] = fit.dependent;
    m["n"] = fit.n;
    m["k"] = fit.k;
    m["df"] = fit.df();
    m["se_flavor"] = fit.se_flavor == SeFlavor::hc1 ? "hc1" : "hc0";
    m["log_log"] = fit.log_log;
    auto terms = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < fit.terms.size(); ++i) {
      auto idx = static_cast<Eigen::Index>(i);
      terms.push_back({{"term", fit.terms[i]},
                       {"coef", fit.beta[idx]},
                       {"se", fit.se[idx]},
                       {"t", fit.t[idx]},
                       {"p", fit.p[idx]},
                       {"stars", fit.stars[i]}});
    }
    m["terms"] = std::move(terms);
    models.push_back(std::move(m));
  }
  doc["models"] = std::move(models);
  doc["stars_legend"] = kStarsLegend;
  if (provenance) doc["provenance"] = provenance_json(*provenance);
  return doc.dump(2) + "\n";
}

}  // namespace daogini
