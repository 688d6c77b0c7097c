#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cran/chandec.hpp"
#include "cran/srccode.hpp"

// End-to-end compositions of a source scheme with a decoder, outage-rate
// evaluation, the cut-set bound, and the empirical gap diagnostic.
namespace cran::e2e {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using model::ChannelMatrix;
using model::Csir;
using model::Scenario;

enum class SourceScheme {
  Suc,
  WzExhaustive,
  WzGreedy,
  Bt,
  IfscSym,
  IfscAsym,
  IfscLocal,
  IfscOpportunistic,
};

enum class Decoder { Ml, Mmse, MmseSic, Ifcc };

struct SchemePair {
  SourceScheme source;
  Decoder decoder;
  Csir csir = Csir::Global;

  void validate() const;  // local sources only with local csir and vice versa
};

bool source_is_local(SourceScheme s);

struct TrialRate {
  double rate = 0.0;
  bool compression_outage = false;
};

// Global CSIR: calibrate the source to saturate c_sym on this H, then run the
// decoder with the resulting distortions. Local CSIR: evaluate at the supplied
// d_t; a trial whose compression rate exceeds c_sym contributes rate 0.
TrialRate rate_end_to_end(const ChannelMatrix& ch, const Scenario& s,
                          const SchemePair& pair,
                          std::optional<double> d_t = std::nullopt);

struct OutagePoint {
  double outage_rate = 0.0;
  double mean_rate = 0.0;
  double compression_outage_frac = 0.0;
  double d_t = 0.0;       // local CSIR only
  bool reliable = true;   // false when rho * N < 1
};

// threads = 0 uses the hardware count; results are independent of it.
OutagePoint outage_rate(const SchemePair& pair, const Scenario& s, int threads = 0);

// min{L C_sym, (1/2) log2 |P H^T H + I|}, bits.
double cutset_bound(const ChannelMatrix& ch, double c_sym);

struct GapCurve {
  std::vector<double> deltas;
  std::vector<double> p_diff;  // fraction of draws with K R < C_upper - delta
};

GapCurve gap_diagnostic(const Scenario& s, const SchemePair& pair,
                        const std::vector<double>& deltas, int threads = 0);

}  // namespace cran::e2e
