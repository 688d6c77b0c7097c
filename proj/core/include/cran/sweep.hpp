#pragma once

#include <string>
#include <vector>

#include "cran/e2e.hpp"

// Batch experiment driver: JSON sweep configuration in, deterministic CSV out.
namespace cran::sweep {

using e2e::SchemePair;
using model::Scenario;

enum class SweepAxis { CSym, SnrDb };

struct SweepConfig {
  Scenario base;
  SweepAxis axis = SweepAxis::CSym;
  std::vector<double> values;
  std::vector<SchemePair> pairs;
  std::string output_path;  // empty = stdout
  int threads = 0;          // 0 = hardware count

  void validate() const;
};

// Throws std::invalid_argument with the offending field path on bad input.
SweepConfig parse_config(const std::string& text);
std::string serialize_config(const SweepConfig& cfg);

std::string source_name(e2e::SourceScheme s);
std::string decoder_name(e2e::Decoder d);
std::string csir_name(model::Csir c);
e2e::SourceScheme source_from_name(const std::string& name);
e2e::Decoder decoder_from_name(const std::string& name);
model::Csir csir_from_name(const std::string& name);

inline constexpr const char* kCsvHeader =
    "K,L,snr_db,c_sym,csir,source,decoder,rho,rho_s,N,seed,"
    "outage_rate_bits,mean_rate_bits,compression_outage_frac";

// One row per (sweep point x scheme pair), deterministically sorted; a pure
// function of (config, seed).
std::string run_sweep(const SweepConfig& cfg);

}  // namespace cran::sweep
