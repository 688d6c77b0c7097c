#include "cran/srccode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cran::srccode {

namespace {

double log2p(double x) { return std::max(0.0, std::log2(x)); }

double pow22(double c_sym) { return std::exp2(2.0 * c_sym); }

void require_positive_d(double d, const char* who) {
  if (!(d > 0.0)) throw std::domain_error(std::string(who) + ": distortion must be positive");
}

std::vector<int> identity_order(int l) {
  std::vector<int> order(l);
  std::iota(order.begin(), order.end(), 0);
  return order;
}

// Sequential WZ calibration for a fixed decompression order, which may be a
// prefix of the full order during the greedy search. Each step's distortion
// solves the rate equation in closed form via the Schur complement:
// |M_l| / |M_{l-1}| = kyy(p,p) + d_p - b^T M_{l-1}^{-1} b.
Vec wz_distortions_for_order(const Mat& kyy, double c_sym,
                             const std::vector<int>& order) {
  const int steps = static_cast<int>(order.size());
  const double denom = pow22(c_sym) - 1.0;
  if (!(denom > 0.0)) throw std::domain_error("calibrate_wz: c_sym must be positive");
  Vec d = Vec::Zero(kyy.rows());
  Mat m;  // K_YY(T,T) + diag(d_T) over the already-calibrated set
  for (int step = 0; step < steps; ++step) {
    const int p = order[step];
    double schur = kyy(p, p);
    if (step > 0) {
      Vec b(step);
      for (int i = 0; i < step; ++i) b(i) = kyy(order[i], p);
      schur -= b.dot(m.llt().solve(b));
    }
    d(p) = schur / denom;
    Mat next(step + 1, step + 1);
    for (int i = 0; i <= step; ++i)
      for (int j = 0; j <= step; ++j) next(i, j) = kyy(order[i], order[j]);
    for (int i = 0; i <= step; ++i) next(i, i) += d(order[i]);
    m = next;
  }
  return d;
}

double default_wz_metric(const Vec& d) { return d.sum(); }

void all_orders(int l, std::vector<std::vector<int>>& out) {
  std::vector<int> order = identity_order(l);
  do {
    out.push_back(order);
  } while (std::next_permutation(order.begin(), order.end()));
}

struct Bisection {
  double d = 0.0;
  int iterations = 0;
};

// Decreasing rate(d); returns d with c_sym - tol <= rate(d) <= c_sym given a
// bracket [lo, hi] with rate(hi) <= c_sym.
template <typename F>
Bisection bisect_rate(F&& rate, double lo, double hi, double c_sym, double tol) {
  if (!(tol > 0.0)) throw std::domain_error("bisection: tol must be positive");
  Bisection r;
  for (r.iterations = 0; r.iterations < kBisectMaxIter; ++r.iterations) {
    const double at_hi = rate(hi);
    if (at_hi >= c_sym - tol && at_hi <= c_sym) {
      r.d = hi;
      return r;
    }
    // Integer-matrix reselection can make the rate jump across the target
    // window; once the bracket is numerically exhausted, keep the feasible
    // endpoint (rate <= c_sym).
    if (hi - lo <= 1e-12 * std::max(1.0, hi)) {
      r.d = hi;
      return r;
    }
    const double mid = 0.5 * (lo + hi);
    if (rate(mid) > c_sym)
      lo = mid;
    else
      hi = mid;
  }
  throw std::runtime_error("bisection: failed to converge within iteration budget");
}

}  // namespace

double rate_suc(const Vec& h_row, double p, double d) {
  require_positive_d(d, "rate_suc");
  return 0.5 * std::log2(1.0 + (p * h_row.squaredNorm() + 1.0) / d);
}

double distortion_suc(const Vec& h_row, double p, double c_sym) {
  const double denom = pow22(c_sym) - 1.0;
  if (!(denom > 0.0))
    throw std::domain_error("distortion_suc: c_sym = 0 requires infinite distortion");
  return (p * h_row.squaredNorm() + 1.0) / denom;
}

Vec rate_wz(const ChannelMatrix& ch, const Vec& d, const std::vector<int>& order) {
  const int l = static_cast<int>(ch.h.rows());
  if (static_cast<int>(order.size()) != l || d.size() != l)
    throw std::invalid_argument("rate_wz: order and distortion sizes must match L");
  for (int i = 0; i < l; ++i) require_positive_d(d(i), "rate_wz");

  const Mat kyy = model::covariance(ch);
  Vec rates(l);
  double prev_logdet = 0.0;  // |empty| = 1
  for (int step = 0; step < l; ++step) {
    Mat m(step + 1, step + 1);
    for (int i = 0; i <= step; ++i)
      for (int j = 0; j <= step; ++j) m(i, j) = kyy(order[i], order[j]);
    for (int i = 0; i <= step; ++i) m(i, i) += d(order[i]);
    const double logdet = std::log2(m.llt().matrixL().determinant()) * 2.0;
    rates(step) = 0.5 * (logdet - prev_logdet) - 0.5 * std::log2(d(order[step]));
    prev_logdet = logdet;
  }
  return rates;
}

SourceCalibration calibrate_wz(const ChannelMatrix& ch, double c_sym,
                               WzOrderPolicy policy,
                               const std::vector<int>& fixed_order,
                               const WzMetric& metric) {
  const int l = static_cast<int>(ch.h.rows());
  const Mat kyy = model::covariance(ch);
  const WzMetric score = metric ? metric : WzMetric(default_wz_metric);

  std::vector<int> best_order;
  Vec best_d;
  switch (policy) {
    case WzOrderPolicy::Fixed: {
      if (static_cast<int>(fixed_order.size()) != l)
        throw std::invalid_argument("calibrate_wz: fixed order must have length L");
      best_order = fixed_order;
      best_d = wz_distortions_for_order(kyy, c_sym, best_order);
      break;
    }
    case WzOrderPolicy::Exhaustive: {
      if (l > 8)
        throw std::invalid_argument("calibrate_wz: exhaustive order search limited to L <= 8");
      std::vector<std::vector<int>> orders;
      all_orders(l, orders);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& order : orders) {
        Vec d = wz_distortions_for_order(kyy, c_sym, order);
        const double s = score(d);
        if (s < best) {
          best = s;
          best_order = order;
          best_d = std::move(d);
        }
      }
      break;
    }
    case WzOrderPolicy::Greedy: {
      // Next BS = the one whose calibrated distortion, given the already
      // decompressed set, is smallest.
      std::vector<bool> used(l, false);
      best_order.clear();
      for (int step = 0; step < l; ++step) {
        int pick = -1;
        double pick_d = std::numeric_limits<double>::infinity();
        for (int c = 0; c < l; ++c) {
          if (used[c]) continue;
          auto trial = best_order;
          trial.push_back(c);
          const Vec d = wz_distortions_for_order(kyy, c_sym, trial);
          if (d(c) < pick_d) {
            pick_d = d(c);
            pick = c;
          }
        }
        best_order.push_back(pick);
        used[pick] = true;
      }
      best_d = wz_distortions_for_order(kyy, c_sym, best_order);
      break;
    }
  }

  SourceCalibration out;
  out.profile = DistortionProfile{best_d, "wz", Vec{}};
  out.pi_if = best_order;  // decompression order
  const Vec by_position = rate_wz(ch, best_d, best_order);
  out.achieved_rates = Vec(l);
  for (int step = 0; step < l; ++step) out.achieved_rates(best_order[step]) = by_position(step);
  return out;
}

double rate_bt(const Mat& kyy, double d) {
  require_positive_d(d, "rate_bt");
  const int l = static_cast<int>(kyy.rows());
  const Mat m = Mat::Identity(l, l) + kyy / d;
  return std::log2(m.llt().matrixL().determinant()) / static_cast<double>(l);
}

double calibrate_bt(const Mat& kyy, double c_sym) {
  if (!(c_sym > 0.0)) throw std::domain_error("calibrate_bt: c_sym must be positive");
  double hi = 1.0;
  while (rate_bt(kyy, hi) > c_sym) hi *= 2.0;
  return bisect_rate([&](double d) { return rate_bt(kyy, d); }, 0.0, hi, c_sym,
                     kBisectTol)
      .d;
}

namespace {

// A_s = I is always admissible, so the reduction-based selection must never do
// worse than the identity; when it does (LLL tie-breaking on near-diagonal
// Grams), fall back to the identity rows sorted by their quadratic forms.
IfscSymRate best_integer_rate(const Mat& g, SelectMode mode) {
  const int l = static_cast<int>(g.rows());
  lattice::SelectedMatrix sel = lattice::select_integer_matrix(g, mode);
  if (sel.forms(l - 1) <= g.diagonal().maxCoeff())
    return IfscSymRate{0.5 * log2p(sel.forms(l - 1)), sel.rows};
  std::vector<int> idx(l);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return g(a, a) < g(b, b); });
  lattice::IMat rows = lattice::IMat::Zero(l, l);
  for (int i = 0; i < l; ++i) rows(i, idx[i]) = 1;
  return IfscSymRate{0.5 * log2p(g.diagonal().maxCoeff()), rows};
}

}  // namespace

IfscSymRate rate_ifsc_sym(const Mat& kyy, double d, SelectMode mode) {
  require_positive_d(d, "rate_ifsc_sym");
  const int l = static_cast<int>(kyy.rows());
  const Mat g = kyy / d + Mat::Identity(l, l);
  return best_integer_rate(g, mode);
}

SourceCalibration calibrate_ifsc_sym(const Mat& kyy, double c_sym, double tol,
                                     SelectMode mode) {
  if (!(c_sym > 0.0)) throw std::domain_error("calibrate_ifsc_sym: c_sym must be positive");
  if (!(tol > 0.0)) throw std::domain_error("calibrate_ifsc_sym: tol must be positive");
  const int l = static_cast<int>(kyy.rows());
  // With A_s = I the rate at d_max is at most c_sym, so the bracket is valid.
  const double d_max = kyy.diagonal().maxCoeff() / (pow22(c_sym) - 1.0);
  const Bisection b = bisect_rate(
      [&](double d) { return rate_ifsc_sym(kyy, d, mode).rate; }, 0.0, d_max,
      c_sym, tol);
  IfscSymRate r = rate_ifsc_sym(kyy, b.d, mode);

  // Reselection makes the optimized rate jump in d, so bisection can stop
  // short of the budget. Freeze the selected matrix and solve its rate
  // equation exactly: max_l (a^T K a / d + |a|^2) = 2^{2 c_sym}.
  double d_star = b.d;
  const double target = pow22(c_sym);
  bool snappable = true;
  double snapped = 0.0;
  for (int i = 0; i < l && snappable; ++i) {
    const Vec a = r.a_s.row(i).transpose().cast<double>();
    const double q = a.dot(kyy * a);
    const double n2 = a.squaredNorm();
    if (target - n2 <= 0.0)
      snappable = false;
    else
      snapped = std::max(snapped, q / (target - n2));
  }
  if (snappable && snapped > 0.0 && snapped <= b.d) d_star = snapped;

  double worst = 0.0;
  for (int i = 0; i < l; ++i) {
    const Vec a = r.a_s.row(i).transpose().cast<double>();
    worst = std::max(worst, a.dot(kyy * a) / d_star + a.squaredNorm());
  }
  SourceCalibration out;
  out.profile = DistortionProfile{Vec::Constant(l, d_star), "ifsc_sym", Vec{}};
  out.a_s = r.a_s;
  out.achieved_rates = Vec::Constant(l, 0.5 * log2p(worst));
  out.iterations = b.iterations;
  return out;
}

Vec rate_ifsc_asym(const Mat& kyy, const Vec& d, const IMat& a_s) {
  const int l = static_cast<int>(kyy.rows());
  if (d.size() != l || a_s.rows() != l || a_s.cols() != l)
    throw std::invalid_argument("rate_ifsc_asym: dimension mismatch");
  for (int i = 0; i < l; ++i) require_positive_d(d(i), "rate_ifsc_asym");
  const Mat kd = kyy + Mat(d.asDiagonal());
  Vec forms(l);
  for (int i = 0; i < l; ++i) {
    const Vec a = a_s.row(i).transpose().cast<double>();
    forms(i) = a.dot(kd * a);
  }
  for (int i = 1; i < l; ++i) {
    if (forms(i) + 1e-9 * std::abs(forms(i)) < forms(i - 1))
      throw std::invalid_argument(
          "rate_ifsc_asym: rows must be ordered by ascending effective variance");
  }
  Vec rates(l);
  for (int i = 0; i < l; ++i) rates(i) = 0.5 * log2p(forms(i) / d(i));
  return rates;
}

SourceCalibration calibrate_ifsc_asym(const Mat& kyy, double c_sym, SelectMode mode) {
  const int l = static_cast<int>(kyy.rows());
  SourceCalibration sym = calibrate_ifsc_sym(kyy, c_sym, kBisectTol, mode);
  const IMat& a0 = *sym.a_s;  // rows already ascending in effective variance

  const std::vector<int> pi = lattice::full_rank_permutation(a0);
  IMat a(l, l);
  Mat kp(l, l);
  for (int i = 0; i < l; ++i)
    for (int j = 0; j < l; ++j) {
      a(i, j) = a0(i, pi[j]);
      kp(i, j) = kyy(pi[i], pi[j]);
    }

  // Linear system: 2^{2 c_sym} d_l - sum_j a_{lj}^2 d_j = a_l^T K_YY a_l.
  Mat c = Mat::Zero(l, l);
  Vec e(l);
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < l; ++j)
      c(i, j) = (i == j ? pow22(c_sym) : 0.0) -
                static_cast<double>(a(i, j)) * static_cast<double>(a(i, j));
    const Vec ai = a.row(i).transpose().cast<double>();
    e(i) = ai.dot(kp * ai);
  }

  Eigen::FullPivLU<Mat> lu(c);
  bool ok = lu.isInvertible();
  Vec dp;
  if (ok) {
    dp = lu.solve(e);
    ok = (dp.array() > 0.0).all();
  }
  if (ok) {
    // Achieved per-combination rates with the solved asymmetric profile.
    Mat kd = kp;
    for (int i = 0; i < l; ++i) kd(i, i) += dp(i);
    Vec rates(l);
    for (int i = 0; i < l; ++i) {
      const Vec ai = a.row(i).transpose().cast<double>();
      rates(i) = 0.5 * log2p(ai.dot(kd * ai) / dp(i));
      if (rates(i) > c_sym + kBisectTol) ok = false;
    }
    if (ok) {
      Vec d_bs(l);
      for (int j = 0; j < l; ++j) d_bs(pi[j]) = dp(j);  // map back through pi^-1
      SourceCalibration out;
      out.profile = DistortionProfile{d_bs, "ifsc_asym", Vec{}};
      out.a_s = a0;
      out.pi_if = pi;
      out.achieved_rates = rates;
      out.iterations = sym.iterations;
      return out;
    }
  }

  sym.fell_back_to_symmetric = true;
  sym.profile.scheme = "ifsc_asym_fallback";
  return sym;
}

OpportunisticRate rate_ifsc_opportunistic(const ChannelMatrix& ch, double c_sym,
                                          double d_t, SelectMode mode) {
  require_positive_d(d_t, "rate_ifsc_opportunistic");
  const int l = static_cast<int>(ch.h.rows());
  const double denom = pow22(c_sym) - 1.0;
  Vec beta(l), d(l);
  for (int i = 0; i < l; ++i) {
    const double threshold = (ch.power * ch.h.row(i).squaredNorm() + 1.0) / denom;
    beta(i) = d_t <= threshold ? 1.0 : std::sqrt(d_t / threshold);
    d(i) = d_t / (beta(i) * beta(i));
  }
  const Mat kyy = model::covariance(ch);
  const Mat g = (kyy + Mat(d.asDiagonal())) / d_t;
  IfscSymRate best = best_integer_rate(g, mode);
  OpportunisticRate out;
  out.rate = best.rate;
  out.profile = DistortionProfile{d, "ifsc_opportunistic", beta};
  out.a_s = best.a_s;
  return out;
}

double local_compression_rate(LocalScheme scheme, const ChannelMatrix& ch,
                              double c_sym, double d_t) {
  const int l = static_cast<int>(ch.h.rows());
  switch (scheme) {
    case LocalScheme::IfscLocal:
      return rate_ifsc_sym(model::covariance(ch), d_t).rate;
    case LocalScheme::IfscOpportunistic:
      return rate_ifsc_opportunistic(ch, c_sym, d_t).rate;
    case LocalScheme::WzSymmetric:
      return rate_wz(ch, Vec::Constant(l, d_t), identity_order(l)).maxCoeff();
    case LocalScheme::Bt:
      return rate_bt(model::covariance(ch), d_t);
  }
  throw std::logic_error("local_compression_rate: unknown scheme");
}

OutageCalibration calibrate_outage_distortion(LocalScheme scheme, const Scenario& s) {
  s.validate();
  if (s.csir != model::Csir::Local)
    throw std::invalid_argument("calibrate_outage_distortion: requires local CSIR");
  const int n = s.trials;
  // Fixed, seed-determined draw set reused across all bisection probes, so the
  // empirical outage is monotone in d_t and bisection is valid.
  std::vector<ChannelMatrix> draws;
  draws.reserve(n);
  for (int i = 0; i < n; ++i)
    draws.push_back(ChannelMatrix{
        model::sample_gaussian(s.seed, kCalibrationStreamOffset + static_cast<std::uint64_t>(i),
                               s.basestations, s.users),
        s.power()});

  auto outage = [&](double d_t) {
    int over = 0;
    for (const auto& ch : draws)
      if (local_compression_rate(scheme, ch, s.c_sym, d_t) > s.c_sym) ++over;
    return static_cast<double>(over) / static_cast<double>(n);
  };

  double lo = 1e-9;
  double hi = 1.0;
  if (s.rho_s >= 1.0) return OutageCalibration{lo, outage(lo)};
  int expand = 0;
  while (outage(hi) > s.rho_s) {
    hi *= 4.0;
    if (++expand > 24)
      throw std::runtime_error(
          "calibrate_outage_distortion: target infeasible, achieved floor " +
          std::to_string(outage(hi)));
  }
  if (outage(lo) <= s.rho_s) return OutageCalibration{lo, outage(lo)};
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (outage(mid) <= s.rho_s)
      hi = mid;
    else
      lo = mid;
  }
  return OutageCalibration{hi, outage(hi)};
}

}  // namespace cran::srccode
