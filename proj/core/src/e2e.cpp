#include "cran/e2e.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

namespace cran::e2e {

namespace {

using chandec::EffectiveChannel;
using srccode::LocalScheme;

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(1, std::min(threads, n));
  if (threads == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

LocalScheme local_scheme_of(SourceScheme s) {
  switch (s) {
    case SourceScheme::IfscLocal: return LocalScheme::IfscLocal;
    case SourceScheme::IfscOpportunistic: return LocalScheme::IfscOpportunistic;
    case SourceScheme::WzExhaustive:
    case SourceScheme::WzGreedy: return LocalScheme::WzSymmetric;
    case SourceScheme::Bt: return LocalScheme::Bt;
    default:
      throw std::invalid_argument("scheme has no local-CSIR compression variant");
  }
}

double decode(const EffectiveChannel& ec, Decoder dec) {
  switch (dec) {
    case Decoder::Ml: return chandec::rate_ml(ec);
    case Decoder::Mmse: return chandec::rate_mmse(ec);
    case Decoder::MmseSic: {
      const auto policy = ec.h.cols() <= 8 ? chandec::SicOrderPolicy::Exhaustive
                                           : chandec::SicOrderPolicy::Greedy;
      return chandec::rate_mmse_sic(ec, policy).rate;
    }
    case Decoder::Ifcc: return chandec::rate_ifcc(ec).rate;
  }
  throw std::logic_error("decode: unknown decoder");
}

Vec global_distortions(const ChannelMatrix& ch, const Scenario& s, SourceScheme src) {
  const int l = static_cast<int>(ch.h.rows());
  switch (src) {
    case SourceScheme::Suc: {
      Vec d(l);
      for (int i = 0; i < l; ++i)
        d(i) = srccode::distortion_suc(ch.h.row(i).transpose(), ch.power, s.c_sym);
      return d;
    }
    case SourceScheme::WzExhaustive:
      return srccode::calibrate_wz(ch, s.c_sym, srccode::WzOrderPolicy::Exhaustive)
          .profile.d;
    case SourceScheme::WzGreedy:
      return srccode::calibrate_wz(ch, s.c_sym, srccode::WzOrderPolicy::Greedy)
          .profile.d;
    case SourceScheme::Bt:
      return Vec::Constant(l, srccode::calibrate_bt(model::covariance(ch), s.c_sym));
    case SourceScheme::IfscSym:
      return srccode::calibrate_ifsc_sym(model::covariance(ch), s.c_sym,
                                         srccode::kBisectTol)
          .profile.d;
    case SourceScheme::IfscAsym:
      return srccode::calibrate_ifsc_asym(model::covariance(ch), s.c_sym).profile.d;
    default:
      throw std::invalid_argument("rate_end_to_end: source requires local CSIR");
  }
}

}  // namespace

bool source_is_local(SourceScheme s) {
  return s == SourceScheme::IfscLocal || s == SourceScheme::IfscOpportunistic;
}

void SchemePair::validate() const {
  const bool local_only = source_is_local(source);
  const bool global_only = source == SourceScheme::Bt ||
                           source == SourceScheme::IfscSym ||
                           source == SourceScheme::IfscAsym;
  if (local_only && csir != Csir::Local)
    throw std::invalid_argument("SchemePair: local-CSIR source paired with global csir");
  if (global_only && csir != Csir::Global)
    throw std::invalid_argument("SchemePair: calibrated global source paired with local csir");
}

TrialRate rate_end_to_end(const ChannelMatrix& ch, const Scenario& s,
                          const SchemePair& pair, std::optional<double> d_t) {
  pair.validate();
  const int l = static_cast<int>(ch.h.rows());

  Vec d;
  if (pair.csir == Csir::Global) {
    d = global_distortions(ch, s, pair.source);
  } else if (pair.source == SourceScheme::Suc) {
    // Each BS knows its own row, so SUC never suffers compression outage.
    d = Vec(l);
    for (int i = 0; i < l; ++i)
      d(i) = srccode::distortion_suc(ch.h.row(i).transpose(), ch.power, s.c_sym);
  } else {
    if (!d_t)
      throw std::invalid_argument("rate_end_to_end: local CSIR requires a calibrated d_t");
    const LocalScheme scheme = local_scheme_of(pair.source);
    if (srccode::local_compression_rate(scheme, ch, s.c_sym, *d_t) > s.c_sym)
      return TrialRate{0.0, true};
    if (pair.source == SourceScheme::IfscOpportunistic)
      d = srccode::rate_ifsc_opportunistic(ch, s.c_sym, *d_t).profile.d;
    else
      d = Vec::Constant(l, *d_t);
  }

  const EffectiveChannel ec{ch.h, ch.power, d};
  return TrialRate{decode(ec, pair.decoder), false};
}

OutagePoint outage_rate(const SchemePair& pair, const Scenario& s, int threads) {
  s.validate();
  pair.validate();
  const int n = s.trials;

  std::optional<double> d_t;
  OutagePoint out;
  if (pair.csir == Csir::Local && pair.source != SourceScheme::Suc) {
    const auto calib = srccode::calibrate_outage_distortion(local_scheme_of(pair.source), s);
    d_t = calib.d_t;
    out.d_t = calib.d_t;
  }

  std::vector<TrialRate> trials(n);
  parallel_for(n, threads, [&](int i) {
    trials[i] = rate_end_to_end(model::sample_channel(s, i), s, pair, d_t);
  });

  std::vector<double> rates(n);
  int outages = 0;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    rates[i] = trials[i].rate;
    sum += trials[i].rate;
    if (trials[i].compression_outage) ++outages;
  }
  std::sort(rates.begin(), rates.end());

  // Lower order statistic at floor(rho N): largest R with P(rate < R) <= rho.
  const int idx = std::min(n - 1, static_cast<int>(std::floor(s.rho * n)));
  out.outage_rate = rates[idx];
  out.mean_rate = sum / n;
  out.compression_outage_frac = static_cast<double>(outages) / n;
  out.reliable = s.rho * n >= 1.0;
  return out;
}

double cutset_bound(const ChannelMatrix& ch, double c_sym) {
  const int k = static_cast<int>(ch.h.cols());
  const int l = static_cast<int>(ch.h.rows());
  const Mat m = ch.power * ch.h.transpose() * ch.h + Mat::Identity(k, k);
  const double info = std::log2(m.llt().matrixL().determinant());
  return std::min(l * c_sym, info);
}

GapCurve gap_diagnostic(const Scenario& s, const SchemePair& pair,
                        const std::vector<double>& deltas, int threads) {
  s.validate();
  if (pair.source != SourceScheme::IfscSym || pair.decoder != Decoder::Ifcc ||
      pair.csir != Csir::Global)
    throw std::invalid_argument(
        "gap_diagnostic: covers the (ifsc_sym, ifcc) global configuration only");
  const int n = s.trials;
  std::vector<double> gap(n);
  parallel_for(n, threads, [&](int i) {
    const ChannelMatrix ch = model::sample_channel(s, i);
    const double r = rate_end_to_end(ch, s, pair).rate;
    gap[i] = cutset_bound(ch, s.c_sym) - s.users * r;
  });

  GapCurve curve;
  curve.deltas = deltas;
  curve.p_diff.reserve(deltas.size());
  for (double dc : deltas) {
    int count = 0;
    for (double g : gap)
      if (g > dc) ++count;
    curve.p_diff.push_back(static_cast<double>(count) / n);
  }
  return curve;
}

}  // namespace cran::e2e
