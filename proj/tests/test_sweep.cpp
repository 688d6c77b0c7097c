#include "cran/sweep.hpp"

#include <sstream>

#include "doctest.h"

using namespace cran;
using sweep::SweepConfig;

namespace {

const char* kMinimalConfig = R"({
  "scenario": {"users": 2, "basestations": 2},
  "sweep": {"axis": "c_sym", "values": [2.0]},
  "pairs": [{"source": "suc", "decoder": "mmse"}]
})";

}  // namespace

TEST_CASE("minimal config picks up documented defaults") {
  const SweepConfig cfg = sweep::parse_config(kMinimalConfig);
  CHECK(cfg.base.users == 2);
  CHECK(cfg.base.basestations == 2);
  CHECK(cfg.base.snr_db == 25.0);
  CHECK(cfg.base.c_sym == 3.0);
  CHECK(cfg.base.csir == model::Csir::Global);
  CHECK(cfg.base.rho == 0.05);
  CHECK(cfg.base.rho_s == 0.025);
  CHECK(cfg.base.trials == 1000);
  CHECK(cfg.base.seed == 0);
  CHECK(cfg.axis == sweep::SweepAxis::CSym);
  REQUIRE(cfg.pairs.size() == 1);
  CHECK(cfg.pairs[0].csir == model::Csir::Global);
  CHECK(cfg.threads == 0);
  CHECK(cfg.output_path.empty());
}

TEST_CASE("config errors carry the offending field path") {
  CHECK_THROWS_WITH_AS(sweep::parse_config("{}"),
                       doctest::Contains("scenario"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      sweep::parse_config(R"({"scenario": {"users": 2},
        "sweep": {"axis": "c_sym", "values": [1]},
        "pairs": [{"source": "suc", "decoder": "mmse"}]})"),
      doctest::Contains("scenario.basestations"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      sweep::parse_config(R"({"scenario": {"users": 2, "basestations": 2},
        "sweep": {"axis": "c_sym", "values": [1]},
        "pairs": [{"source": "nope", "decoder": "mmse"}]})"),
      doctest::Contains("nope"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      sweep::parse_config(R"({"scenario": {"users": 2, "basestations": 2},
        "sweep": {"axis": "power", "values": [1]},
        "pairs": [{"source": "suc", "decoder": "mmse"}]})"),
      doctest::Contains("sweep.axis"), std::invalid_argument);
}

TEST_CASE("local CSIR with rho_s >= rho is rejected") {
  CHECK_THROWS_AS(
      sweep::parse_config(R"({"scenario": {"users": 2, "basestations": 2,
          "csir": "local", "rho": 0.05, "rho_s": 0.05},
        "sweep": {"axis": "c_sym", "values": [1]},
        "pairs": [{"source": "ifsc_local", "decoder": "ifcc"}]})"),
      std::invalid_argument);
}

TEST_CASE("incompatible pair/csir combinations are rejected at parse time") {
  CHECK_THROWS_AS(
      sweep::parse_config(R"({"scenario": {"users": 2, "basestations": 2},
        "sweep": {"axis": "c_sym", "values": [1]},
        "pairs": [{"source": "ifsc_local", "decoder": "ifcc"}]})"),
      std::invalid_argument);
}

TEST_CASE("serialize then parse is the identity on the config") {
  SweepConfig cfg = sweep::parse_config(kMinimalConfig);
  cfg.base.snr_db = 17.5;
  cfg.values = {1.0, 2.5, 4.0};
  cfg.threads = 3;
  const SweepConfig back = sweep::parse_config(sweep::serialize_config(cfg));
  CHECK(back.base.snr_db == cfg.base.snr_db);
  CHECK(back.base.trials == cfg.base.trials);
  CHECK(back.values == cfg.values);
  CHECK(back.threads == cfg.threads);
  CHECK(back.pairs.size() == cfg.pairs.size());
  CHECK(back.pairs[0].source == cfg.pairs[0].source);
  CHECK(back.pairs[0].decoder == cfg.pairs[0].decoder);
}

TEST_CASE("name round trips") {
  using e2e::Decoder;
  using e2e::SourceScheme;
  for (auto s : {SourceScheme::Suc, SourceScheme::WzExhaustive, SourceScheme::WzGreedy,
                 SourceScheme::Bt, SourceScheme::IfscSym, SourceScheme::IfscAsym,
                 SourceScheme::IfscLocal, SourceScheme::IfscOpportunistic})
    CHECK(sweep::source_from_name(sweep::source_name(s)) == s);
  for (auto d : {Decoder::Ml, Decoder::Mmse, Decoder::MmseSic, Decoder::Ifcc})
    CHECK(sweep::decoder_from_name(sweep::decoder_name(d)) == d);
  CHECK_THROWS_AS(sweep::source_from_name("zf"), std::invalid_argument);
  CHECK_THROWS_AS(sweep::decoder_from_name("zf"), std::invalid_argument);
}

TEST_CASE("run_sweep emits the fixed header and one row per grid point") {
  SweepConfig cfg = sweep::parse_config(kMinimalConfig);
  cfg.base.trials = 50;
  cfg.values = {1.0, 2.0};
  cfg.threads = 1;
  const std::string csv = sweep::run_sweep(cfg);

  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == sweep::kCsvHeader);
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    CHECK(line.substr(0, 4) == "2,2,");
    CHECK(line.find(",suc,mmse,") != std::string::npos);
  }
  CHECK(rows == 2);
}

TEST_CASE("sweep output is byte-identical across thread counts") {
  SweepConfig cfg = sweep::parse_config(kMinimalConfig);
  cfg.base.trials = 100;
  cfg.values = {1.0, 3.0};
  cfg.pairs.push_back({e2e::SourceScheme::IfscSym, e2e::Decoder::Ifcc});
  cfg.threads = 1;
  const std::string one = sweep::run_sweep(cfg);
  cfg.threads = 8;
  const std::string eight = sweep::run_sweep(cfg);
  CHECK(one == eight);
}
