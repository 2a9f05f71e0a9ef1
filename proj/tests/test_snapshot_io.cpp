#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "daogini/errors.hpp"
#include "daogini/snapshot_io.hpp"

using namespace daogini;

namespace {

std::string addr(char fill) { return "0x" + std::string(40, fill); }

SnapshotMeta meta() {
  SnapshotMeta m;
  m.token_symbol = "TKN";
  m.token_contract = addr('9');
  m.chain_id = 5;
  m.captured_at = "2026-08-11T00:00:00Z";
  m.decimals = 8;
  return m;
}

std::filesystem::path temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "daogini-tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("snapshot save/load round trip") {
  std::vector<HolderRecord> records{{addr('a'), parse_balance("123456789012345678901234567890")},
                                    {addr('b'), Balance(7)}};
  auto snap = HolderSnapshot::build(records, {}, false, meta());
  auto path = temp_file("roundtrip.json");
  save_snapshot(snap, path);
  auto loaded = load_snapshot(path);
  CHECK(loaded == snap);
}

TEST_CASE("load rejects duplicate addresses") {
  auto path = temp_file("dup.json");
  write_file(path, R"({
    "schema_version": 1, "token_symbol": "T", "token_contract": ")" +
                       addr('9') + R"(",
    "chain_id": 1, "captured_at": "2026-08-11T00:00:00Z", "decimals": 18,
    "contracts_removed": false, "total_balance": "10",
    "records": [
      {"address": ")" + addr('a') + R"(", "balance": "5"},
      {"address": ")" + addr('a') + R"(", "balance": "5"}
    ]})");
  CHECK_THROWS_AS(load_snapshot(path), ValidationError);
}

TEST_CASE("load rejects scientific-notation balances") {
  auto path = temp_file("sci.json");
  write_file(path, R"({
    "schema_version": 1, "token_symbol": "T", "token_contract": ")" +
                       addr('9') + R"(",
    "chain_id": 1, "captured_at": "2026-08-11T00:00:00Z", "decimals": 18,
    "contracts_removed": false, "total_balance": "100000",
    "records": [{"address": ")" + addr('a') + R"(", "balance": "1e5"}]})");
  CHECK_THROWS_WITH_AS(load_snapshot(path), doctest::Contains("records[0]"), ParseError);
}

TEST_CASE("load rejects unsorted records") {
  auto path = temp_file("unsorted.json");
  write_file(path, R"({
    "schema_version": 1, "token_symbol": "T", "token_contract": ")" +
                       addr('9') + R"(",
    "chain_id": 1, "captured_at": "2026-08-11T00:00:00Z", "decimals": 18,
    "contracts_removed": false, "total_balance": "8",
    "records": [
      {"address": ")" + addr('a') + R"(", "balance": "3"},
      {"address": ")" + addr('b') + R"(", "balance": "5"}
    ]})");
  CHECK_THROWS_WITH_AS(load_snapshot(path), doctest::Contains("not sorted"), ValidationError);
}

TEST_CASE("load rejects malformed json with context") {
  auto path = temp_file("broken.json");
  write_file(path, "{ not json");
  CHECK_THROWS_AS(load_snapshot(path), ParseError);

  write_file(path, R"({"schema_version": 1})");
  CHECK_THROWS_WITH_AS(load_snapshot(path), doctest::Contains("token_symbol"), ParseError);
}

TEST_CASE("csv import with classification column") {
  auto path = temp_file("holders.csv");
  write_file(path, "address,balance,is_contract\n" + addr('a') + ",100,false\n" + addr('b') +
                       ",50,true\n" + addr('c') + ",10,false\n");
  auto snap = import_csv(path, meta(), true);
  REQUIRE(snap.size() == 2);
  CHECK(snap.records()[0].address == addr('a'));
  CHECK(snap.total_balance() == 110);
}

TEST_CASE("csv import without classification refuses contract dropping") {
  auto path = temp_file("holders_plain.csv");
  write_file(path, "address,balance\n" + addr('a') + ",100\n");
  CHECK_THROWS_WITH_AS(import_csv(path, meta(), true),
                       doctest::Contains("classification unavailable"), ConfigError);
  CHECK_NOTHROW(import_csv(path, meta(), false));
}

TEST_CASE("csv import edge cases") {
  auto empty = temp_file("empty.csv");
  write_file(empty, "address,balance\n");
  CHECK(import_csv(empty, meta(), false).size() == 0);

  auto missing = temp_file("missing_col.csv");
  write_file(missing, "address\n" + addr('a') + "\n");
  CHECK_THROWS_AS(import_csv(missing, meta(), false), ParseError);

  auto bad_balance = temp_file("bad_balance.csv");
  write_file(bad_balance, "address,balance\n" + addr('a') + ",12.5\n");
  CHECK_THROWS_AS(import_csv(bad_balance, meta(), false), ParseError);

  auto bad_bool = temp_file("bad_bool.csv");
  write_file(bad_bool, "address,balance,is_contract\n" + addr('a') + ",5,maybe\n");
  CHECK_THROWS_AS(import_csv(bad_bool, meta(), true), ParseError);
}
