#include "cran/sweep.hpp"

#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cran::sweep {

namespace {

using json = nlohmann::json;
using e2e::Decoder;
using e2e::SourceScheme;
using model::Csir;

const std::map<std::string, SourceScheme> kSources = {
    {"suc", SourceScheme::Suc},
    {"wz_exhaustive", SourceScheme::WzExhaustive},
    {"wz_greedy", SourceScheme::WzGreedy},
    {"bt", SourceScheme::Bt},
    {"ifsc_sym", SourceScheme::IfscSym},
    {"ifsc_asym", SourceScheme::IfscAsym},
    {"ifsc_local", SourceScheme::IfscLocal},
    {"ifsc_opportunistic", SourceScheme::IfscOpportunistic},
};

const std::map<std::string, Decoder> kDecoders = {
    {"ml", Decoder::Ml},
    {"mmse", Decoder::Mmse},
    {"mmse_sic", Decoder::MmseSic},
    {"ifcc", Decoder::Ifcc},
};

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config error at " + path + ": " + what);
}

template <typename T>
T get_or(const json& j, const char* key, T fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(path + "." + key, e.what());
  }
}

template <typename T>
T require(const json& j, const char* key, const std::string& path) {
  if (!j.contains(key)) fail(path + "." + key, "missing required field");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(path + "." + key, e.what());
  }
}

std::string fmt9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::string source_name(SourceScheme s) {
  for (const auto& [name, v] : kSources)
    if (v == s) return name;
  return "?";
}

std::string decoder_name(Decoder d) {
  for (const auto& [name, v] : kDecoders)
    if (v == d) return name;
  return "?";
}

std::string csir_name(Csir c) { return c == Csir::Global ? "global" : "local"; }

SourceScheme source_from_name(const std::string& name) {
  const auto it = kSources.find(name);
  if (it == kSources.end()) fail("pairs.source", "unknown scheme name '" + name + "'");
  return it->second;
}

Decoder decoder_from_name(const std::string& name) {
  const auto it = kDecoders.find(name);
  if (it == kDecoders.end()) fail("pairs.decoder", "unknown decoder name '" + name + "'");
  return it->second;
}

Csir csir_from_name(const std::string& name) {
  if (name == "global") return Csir::Global;
  if (name == "local") return Csir::Local;
  fail("csir", "expected 'global' or 'local', got '" + name + "'");
}

void SweepConfig::validate() const {
  base.validate();
  if (values.empty()) fail("sweep.values", "sweep list must be nonempty");
  if (pairs.empty()) fail("pairs", "at least one scheme pair required");
  for (const auto& p : pairs) p.validate();
}

SweepConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail("<root>", e.what());
  }

  SweepConfig cfg;
  const json sc = require<json>(j, "scenario", "<root>");
  cfg.base.users = require<int>(sc, "users", "scenario");
  cfg.base.basestations = require<int>(sc, "basestations", "scenario");
  cfg.base.snr_db = get_or<double>(sc, "snr_db", 25.0, "scenario");
  cfg.base.c_sym = get_or<double>(sc, "c_sym", 3.0, "scenario");
  cfg.base.csir = csir_from_name(get_or<std::string>(sc, "csir", "global", "scenario"));
  cfg.base.rho = get_or<double>(sc, "rho", 0.05, "scenario");
  cfg.base.rho_s = get_or<double>(sc, "rho_s", cfg.base.rho / 2.0, "scenario");
  cfg.base.trials = get_or<int>(sc, "trials", 1000, "scenario");
  cfg.base.seed = get_or<std::uint64_t>(sc, "seed", 0, "scenario");

  const json sw = require<json>(j, "sweep", "<root>");
  const std::string axis = require<std::string>(sw, "axis", "sweep");
  if (axis == "c_sym")
    cfg.axis = SweepAxis::CSym;
  else if (axis == "snr_db")
    cfg.axis = SweepAxis::SnrDb;
  else
    fail("sweep.axis", "expected 'c_sym' or 'snr_db', got '" + axis + "'");
  cfg.values = require<std::vector<double>>(sw, "values", "sweep");

  const json pairs = require<json>(j, "pairs", "<root>");
  if (!pairs.is_array()) fail("pairs", "must be an array");
  for (size_t i = 0; i < pairs.size(); ++i) {
    const std::string path = "pairs[" + std::to_string(i) + "]";
    e2e::SchemePair p;
    p.source = source_from_name(require<std::string>(pairs[i], "source", path));
    p.decoder = decoder_from_name(require<std::string>(pairs[i], "decoder", path));
    p.csir = pairs[i].contains("csir")
                 ? csir_from_name(require<std::string>(pairs[i], "csir", path))
                 : cfg.base.csir;
    cfg.pairs.push_back(p);
  }

  cfg.output_path = get_or<std::string>(j, "output", "", "<root>");
  cfg.threads = get_or<int>(j, "threads", 0, "<root>");

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    fail("<validation>", e.what());
  }
  return cfg;
}

std::string serialize_config(const SweepConfig& cfg) {
  json j;
  j["scenario"] = {
      {"users", cfg.base.users},
      {"basestations", cfg.base.basestations},
      {"snr_db", cfg.base.snr_db},
      {"c_sym", cfg.base.c_sym},
      {"csir", csir_name(cfg.base.csir)},
      {"rho", cfg.base.rho},
      {"rho_s", cfg.base.rho_s},
      {"trials", cfg.base.trials},
      {"seed", cfg.base.seed},
  };
  j["sweep"] = {
      {"axis", cfg.axis == SweepAxis::CSym ? "c_sym" : "snr_db"},
      {"values", cfg.values},
  };
  j["pairs"] = json::array();
  for (const auto& p : cfg.pairs)
    j["pairs"].push_back({{"source", source_name(p.source)},
                          {"decoder", decoder_name(p.decoder)},
                          {"csir", csir_name(p.csir)}});
  if (!cfg.output_path.empty()) j["output"] = cfg.output_path;
  if (cfg.threads != 0) j["threads"] = cfg.threads;
  return j.dump(2);
}

std::string run_sweep(const SweepConfig& cfg) {
  cfg.validate();
  int threads = cfg.threads;
  if (threads == 0) {
    if (const char* env = std::getenv("CRAN_SWEEP_THREADS")) threads = std::atoi(env);
  }

  std::ostringstream csv;
  csv << kCsvHeader << "\n";
  for (double v : cfg.values) {
    Scenario s = cfg.base;
    if (cfg.axis == SweepAxis::CSym)
      s.c_sym = v;
    else
      s.snr_db = v;
    for (const auto& p : cfg.pairs) {
      e2e::OutagePoint pt;
      try {
        pt = e2e::outage_rate(p, s, threads);
      } catch (const std::exception& e) {
        throw std::runtime_error("sweep point (" +
                                 std::string(cfg.axis == SweepAxis::CSym ? "c_sym=" : "snr_db=") +
                                 fmt9(v) + ", " + source_name(p.source) + "+" +
                                 decoder_name(p.decoder) + ") failed: " + e.what());
      }
      csv << s.users << ',' << s.basestations << ',' << fmt9(s.snr_db) << ','
          << fmt9(s.c_sym) << ',' << csir_name(p.csir) << ',' << source_name(p.source)
          << ',' << decoder_name(p.decoder) << ',' << fmt9(s.rho) << ','
          << fmt9(s.rho_s) << ',' << s.trials << ',' << s.seed << ','
          << fmt9(pt.outage_rate) << ',' << fmt9(pt.mean_rate) << ','
          << fmt9(pt.compression_outage_frac) << "\n";
    }
  }
  return csv.str();
}

}  // namespace cran::sweep
