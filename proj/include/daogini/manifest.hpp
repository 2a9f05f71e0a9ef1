#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "daogini/ols.hpp"

namespace daogini {

struct ManifestEntry {
  std::string company;
  std::string token_symbol;
  std::string token_contract;  // canonical lowercase 0x-form
  std::int64_t chain_id = 1;
  std::optional<double> roi;  // required only for the regression stage
  bool dao_verified = false;  // manual sample-selection flag, carried as-is
};

struct ManifestDefaults {
  bool drop_contracts = true;
  TransformSpec::Kind transform_dep = TransformSpec::Kind::ln;
  double gini_floor = 0.0;
};

// The batch run definition: which tokens to ingest/measure, plus run-wide
// defaults (CLI flags and env override these, in that order).
struct Manifest {
  std::vector<ManifestEntry> entries;
  ManifestDefaults defaults;
  std::uint64_t content_hash = 0;  // FNV-1a of the raw file bytes, for provenance

  // CSV (company,token_symbol,token_contract,chain_id,roi,dao_verified) or
  // JSON ({"defaults": {...}, "entries": [...]}), chosen by extension.
  static Manifest load(const std::filesystem::path& path);
};

std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace daogini
