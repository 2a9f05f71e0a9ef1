#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "daogini/errors.hpp"
#include "daogini/pipeline.hpp"
#include "daogini/version.hpp"

namespace {

daogini::ReportFormat to_format(const std::string& name) {
  return daogini::parse_report_format(name);
}

daogini::SeFlavor to_se_flavor(const std::string& name) {
  if (name == "hc0") return daogini::SeFlavor::hc0;
  if (name == "hc1") return daogini::SeFlavor::hc1;
  throw daogini::ConfigError("unknown --se value \"" + name + "\" (want hc0 or hc1)");
}

daogini::TransformSpec::Kind to_transform(const std::string& name) {
  if (name == "ln") return daogini::TransformSpec::Kind::ln;
  if (name == "ln1p") return daogini::TransformSpec::Kind::ln1p;
  throw daogini::ConfigError("unknown --transform-dep value \"" + name +
                             "\" (want ln or ln1p)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Token-holder inequality metrics and robust log-log regressions for DAO "
               "governance tokens"};
  app.set_version_flag("--version", std::string("daogini ") + daogini::kVersion);
  app.require_subcommand(1);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Fetch holder snapshots for a manifest");
  daogini::IngestOptions ingest_opts;
  std::string ingest_manifest;
  std::string ingest_out_dir = "snapshots";
  std::string ingest_base_url, ingest_key_env, ingest_csv_dir, ingest_cache_dir,
      ingest_explorers;
  double ingest_rate = 0;
  int ingest_page_size = 0;
  bool ingest_drop_contracts = true;
  ingest->add_option("--manifest", ingest_manifest, "Manifest CSV or JSON")->required();
  ingest->add_option("--out-dir", ingest_out_dir, "Snapshot output directory");
  ingest->add_flag("--force", ingest_opts.force, "Refetch even when a fresh snapshot exists");
  auto* drop_opt = ingest->add_option("--drop-contracts", ingest_drop_contracts,
                                      "Remove contract-classified holders (default true)");
  ingest->add_option("--explorer-url", ingest_base_url,
                     "Explorer endpoint for every chain (overrides built-ins)");
  ingest->add_option("--api-key-env", ingest_key_env,
                     "Environment variable holding the explorer key (default DAOGINI_API_KEY)");
  ingest->add_option("--rate-limit", ingest_rate, "Requests per second (default 5)");
  ingest->add_option("--page-size", ingest_page_size, "Holders per page (default 1000)");
  ingest->add_option("--explorers", ingest_explorers,
                     "JSON file mapping chain_id to explorer settings");
  ingest->add_option("--csv-dir", ingest_csv_dir,
                     "Directory of <symbol>.csv holder lists used instead of fetching");
  ingest->add_option("--cache-dir", ingest_cache_dir,
                     "Classification cache directory (default: DAOGINI_CACHE_DIR or out-dir)");

  // gini
  auto* gini = app.add_subcommand("gini", "Compute Gini bundles from snapshots");
  std::string gini_manifest, gini_snapshot_dir, gini_out, gini_format = "csv";
  std::vector<std::string> gini_snapshots;
  gini->add_option("--manifest", gini_manifest, "Manifest for ordering and company names");
  gini->add_option("--snapshot-dir", gini_snapshot_dir, "Directory holding <symbol>.json");
  gini->add_option("--snapshots", gini_snapshots, "Explicit snapshot files");
  gini->add_option("--out", gini_out, "Output path (default stdout)");
  gini->add_option("--format", gini_format, "csv (default), md or json");

  // regress
  auto* regress = app.add_subcommand("regress", "Fit the nested robust log-log models");
  std::string regress_panel, regress_out, regress_format = "md", regress_se = "hc1",
              regress_transform = "ln", regress_models;
  double regress_floor = 0.0;
  regress->add_option("--panel", regress_panel, "Panel CSV (company,token,roi,g_*)")->required();
  regress->add_option("--out", regress_out, "Output path (default stdout)");
  regress->add_option("--format", regress_format, "md (default), csv or json");
  regress->add_option("--transform-dep", regress_transform, "Dependent transform: ln or ln1p");
  regress->add_option("--gini-floor", regress_floor,
                      "Clamp Gini regressors to this floor before ln (for published 0.00 cells)");
  regress->add_option("--se", regress_se, "Robust covariance flavor: hc0 or hc1 (default)");
  regress->add_option("--models", regress_models,
                      "Override model sets, e.g. \"g_c+g_d+g_e+g_f;g_d\"");

  // report
  auto* report = app.add_subcommand("report", "Re-render stored artifacts");
  std::string report_bundle, report_regression, report_out, report_format = "md";
  report->add_option("--bundle", report_bundle, "Bundle or published-table CSV");
  report->add_option("--regression", report_regression, "Regression JSON artifact");
  report->add_option("--format", report_format, "md (default), csv or json");
  report->add_option("--out", report_out, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? daogini::kExitOk : daogini::kExitUsage;
  }

  try {
    if (*ingest) {
      ingest_opts.manifest_path = ingest_manifest;
      ingest_opts.out_dir = ingest_out_dir;
      if (*drop_opt) ingest_opts.drop_contracts = ingest_drop_contracts;
      if (!ingest_base_url.empty()) ingest_opts.explorer.base_url = ingest_base_url;
      if (!ingest_key_env.empty()) ingest_opts.explorer.api_key_ref = ingest_key_env;
      if (ingest_rate > 0) ingest_opts.explorer.rate_limit = ingest_rate;
      if (ingest_page_size > 0) ingest_opts.explorer.page_size = ingest_page_size;
      if (!ingest_explorers.empty()) ingest_opts.explorer.config_file = ingest_explorers;
      if (!ingest_csv_dir.empty()) ingest_opts.csv_dir = ingest_csv_dir;
      if (!ingest_cache_dir.empty()) ingest_opts.cache_dir = ingest_cache_dir;
      return daogini::cmd_ingest(ingest_opts, std::cout, std::cerr);
    }
    if (*gini) {
      daogini::GiniOptions opts;
      if (!gini_manifest.empty()) opts.manifest_path = gini_manifest;
      if (!gini_snapshot_dir.empty()) opts.snapshot_dir = gini_snapshot_dir;
      for (const auto& s : gini_snapshots) opts.snapshots.emplace_back(s);
      if (!gini_out.empty()) opts.out_path = gini_out;
      opts.format = to_format(gini_format);
      return daogini::cmd_gini(opts, std::cout, std::cerr);
    }
    if (*regress) {
      daogini::RegressOptions opts;
      opts.panel_path = regress_panel;
      if (!regress_out.empty()) opts.out_path = regress_out;
      opts.format = to_format(regress_format);
      opts.transform_dep = to_transform(regress_transform);
      opts.gini_floor = regress_floor;
      opts.se_flavor = to_se_flavor(regress_se);
      if (!regress_models.empty()) opts.models = regress_models;
      return daogini::cmd_regress(opts, std::cout, std::cerr);
    }
    if (*report) {
      daogini::ReportOptions opts;
      if (!report_bundle.empty()) opts.bundle_path = report_bundle;
      if (!report_regression.empty()) opts.regression_path = report_regression;
      opts.format = to_format(report_format);
      if (!report_out.empty()) opts.out_path = report_out;
      return daogini::cmd_report(opts, std::cout, std::cerr);
    }
  } catch (const daogini::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return daogini::kExitUsage;
  } catch (const daogini::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return daogini::kExitUsage;
  } catch (const daogini::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return daogini::kExitPartial;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return daogini::kExitPartial;
  }
  return daogini::kExitUsage;
}
