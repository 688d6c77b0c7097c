#include "cran/chandec.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace cran::chandec {

namespace {

void check_dims(const EffectiveChannel& ec, const char* who) {
  if (ec.distortion.size() != ec.h.rows())
    throw std::invalid_argument(std::string(who) + ": distortion length must equal L");
  if ((ec.distortion.array() < 0.0).any())
    throw std::invalid_argument(std::string(who) + ": distortions must be nonnegative");
  if (!(ec.power > 0.0))
    throw std::invalid_argument(std::string(who) + ": power must be positive");
}

Mat id_plus_d(const EffectiveChannel& ec) {
  Mat m = Mat(ec.distortion.asDiagonal());
  m.diagonal().array() += 1.0;
  return m;
}

double logdet2(const Mat& spd) {
  return 2.0 * std::log2(spd.llt().matrixL().determinant());
}

// Per-user SIC rates for a fixed order: user at stage k sees residual
// interference from not-yet-decoded users only.
Vec sic_rates(const EffectiveChannel& ec, const std::vector<int>& order) {
  const int k = static_cast<int>(ec.h.cols());
  const Mat noise = id_plus_d(ec);
  Vec rates(k);
  for (int stage = 0; stage < k; ++stage) {
    Mat cov = noise;
    for (int j = stage; j < k; ++j) {
      const Vec hj = ec.h.col(order[j]);
      cov += ec.power * hj * hj.transpose();
    }
    const Vec hk = ec.h.col(order[stage]);
    const Vec b = cov.llt().solve(ec.power * hk);
    double interference = 0.0;
    for (int j = stage + 1; j < k; ++j) {
      const double c = b.dot(ec.h.col(order[j]));
      interference += ec.power * c * c;
    }
    const double signal = ec.power * b.dot(hk) * b.dot(hk);
    const double denom = b.dot(noise * b) + interference;
    rates(stage) = 0.5 * std::log2(1.0 + signal / denom);
  }
  return rates;
}

}  // namespace

double rate_ml(const EffectiveChannel& ec) {
  check_dims(ec, "rate_ml");
  const int k = static_cast<int>(ec.h.cols());
  if (k > 16) throw std::invalid_argument("rate_ml: refuses K > 16 (2^K subsets)");
  const Mat noise = id_plus_d(ec);
  const double logdet_noise = logdet2(noise);
  double best = std::numeric_limits<double>::infinity();
  for (unsigned subset = 1; subset < (1u << k); ++subset) {
    Mat cov = noise;
    int size = 0;
    for (int j = 0; j < k; ++j) {
      if (subset & (1u << j)) {
        const Vec hj = ec.h.col(j);
        cov += ec.power * hj * hj.transpose();
        ++size;
      }
    }
    best = std::min(best, (logdet2(cov) - logdet_noise) / (2.0 * size));
  }
  return best;
}

double rate_mmse(const EffectiveChannel& ec) {
  check_dims(ec, "rate_mmse");
  const int k = static_cast<int>(ec.h.cols());
  const Mat noise = id_plus_d(ec);
  const Mat cov = ec.power * ec.h * ec.h.transpose() + noise;
  const auto solver = cov.llt();
  double best = std::numeric_limits<double>::infinity();
  for (int u = 0; u < k; ++u) {
    const Vec hu = ec.h.col(u);
    const Vec b = solver.solve(ec.power * hu);
    double interference = 0.0;
    for (int j = 0; j < k; ++j) {
      if (j == u) continue;
      const double c = b.dot(ec.h.col(j));
      interference += ec.power * c * c;
    }
    const double signal = ec.power * b.dot(hu) * b.dot(hu);
    const double sinr = signal / (b.dot(noise * b) + interference);
    best = std::min(best, 0.5 * std::log2(1.0 + sinr));
  }
  return best;
}

SicResult rate_mmse_sic(const EffectiveChannel& ec, SicOrderPolicy policy,
                        const std::vector<int>& fixed_order) {
  check_dims(ec, "rate_mmse_sic");
  const int k = static_cast<int>(ec.h.cols());
  switch (policy) {
    case SicOrderPolicy::Fixed: {
      if (static_cast<int>(fixed_order.size()) != k)
        throw std::invalid_argument("rate_mmse_sic: fixed order must have length K");
      return SicResult{sic_rates(ec, fixed_order).minCoeff(), fixed_order};
    }
    case SicOrderPolicy::Exhaustive: {
      if (k > 8)
        throw std::invalid_argument("rate_mmse_sic: exhaustive search limited to K <= 8");
      std::vector<int> order(k);
      std::iota(order.begin(), order.end(), 0);
      SicResult best{-std::numeric_limits<double>::infinity(), {}};
      do {
        const double r = sic_rates(ec, order).minCoeff();
        if (r > best.rate) {  // ties keep the lexicographically smallest order
          best.rate = r;
          best.order = order;
        }
      } while (std::next_permutation(order.begin(), order.end()));
      return best;
    }
    case SicOrderPolicy::Greedy: {
      std::vector<int> order;
      std::vector<bool> used(k, false);
      const Mat noise = id_plus_d(ec);
      for (int stage = 0; stage < k; ++stage) {
        Mat cov = noise;
        for (int j = 0; j < k; ++j)
          if (!used[j]) {
            const Vec hj = ec.h.col(j);
            cov += ec.power * hj * hj.transpose();
          }
        const auto solver = cov.llt();
        int pick = -1;
        double pick_sinr = -1.0;
        for (int u = 0; u < k; ++u) {
          if (used[u]) continue;
          const Vec hu = ec.h.col(u);
          const Vec b = solver.solve(ec.power * hu);
          double interference = 0.0;
          for (int j = 0; j < k; ++j) {
            if (used[j] || j == u) continue;
            const double c = b.dot(ec.h.col(j));
            interference += ec.power * c * c;
          }
          const double signal = ec.power * b.dot(hu) * b.dot(hu);
          const double sinr = signal / (b.dot(noise * b) + interference);
          if (sinr > pick_sinr) {
            pick_sinr = sinr;
            pick = u;
          }
        }
        order.push_back(pick);
        used[pick] = true;
      }
      return SicResult{sic_rates(ec, order).minCoeff(), order};
    }
  }
  throw std::logic_error("rate_mmse_sic: unknown policy");
}

Mat ifcc_gram(const EffectiveChannel& ec) {
  check_dims(ec, "rate_ifcc");
  const int k = static_cast<int>(ec.h.cols());
  // (P^{-1} I + H^T (I+D)^{-1} H)^{-1}, inner solve by factorization.
  Mat inner = Mat::Identity(k, k) / ec.power;
  Mat scaled = ec.h;
  for (int i = 0; i < ec.h.rows(); ++i) scaled.row(i) /= (1.0 + ec.distortion(i));
  inner += ec.h.transpose() * scaled;
  return inner.llt().solve(Mat::Identity(k, k));
}

IfccResult rate_ifcc(const EffectiveChannel& ec, SelectMode mode) {
  const Mat g = ifcc_gram(ec);
  const int k = static_cast<int>(g.rows());
  lattice::SelectedMatrix sel = lattice::select_integer_matrix(g, mode);
  double rate = std::numeric_limits<double>::infinity();
  for (int m = 0; m < k; ++m)
    rate = std::min(rate, 0.5 * std::max(0.0, std::log2(ec.power / sel.forms(m))));
  return IfccResult{rate, sel.rows};
}

}  // namespace cran::chandec
