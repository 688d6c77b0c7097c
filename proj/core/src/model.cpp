#include "cran/model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cran::model {

namespace {

// splitmix64: counter-based stream so parallel sampling is race-free.
struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
};

std::uint64_t mix_key(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 g{seed};
  const std::uint64_t a = g.next();
  SplitMix64 h{stream ^ 0x6a09e667f3bcc909ULL};
  return a ^ h.next();
}

}  // namespace

void Scenario::validate() const {
  if (users <= 0 || basestations <= 0)
    throw std::invalid_argument("Scenario: user and basestation counts must be positive");
  if (trials <= 0) throw std::invalid_argument("Scenario: trial count must be positive");
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("Scenario: rho must lie in (0,1)");
  if (!(rho_s > 0.0 && rho_s < 1.0))
    throw std::invalid_argument("Scenario: rho_s must lie in (0,1)");
  if (csir == Csir::Local && !(rho_s < rho))
    throw std::invalid_argument("Scenario: rho_s must be below rho under local CSIR");
  if (!(c_sym > 0.0)) throw std::invalid_argument("Scenario: c_sym must be positive");
  if (!std::isfinite(snr_db)) throw std::invalid_argument("Scenario: snr_db must be finite");
}

double Scenario::power() const { return snr_to_power(snr_db); }

double snr_to_power(double snr_db) {
  if (!std::isfinite(snr_db))
    throw std::invalid_argument("snr_to_power: input must be finite");
  return std::pow(10.0, snr_db / 10.0);
}

Mat sample_gaussian(std::uint64_t seed, std::uint64_t stream, int rows, int cols) {
  SplitMix64 g{mix_key(seed, stream)};
  Mat out(rows, cols);
  // Box-Muller on 53-bit uniforms; fixed method so statistics are comparable
  // across implementations.
  bool have_spare = false;
  double spare = 0.0;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (have_spare) {
        out(i, j) = spare;
        have_spare = false;
        continue;
      }
      const double u1 =
          (static_cast<double>(g.next() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
      const double u2 = static_cast<double>(g.next() >> 11) * 0x1.0p-53;  // [0,1)
      const double r = std::sqrt(-2.0 * std::log(u1));
      const double t = 2.0 * std::numbers::pi * u2;
      out(i, j) = r * std::cos(t);
      spare = r * std::sin(t);
      have_spare = true;
    }
  }
  return out;
}

ChannelMatrix sample_channel(const Scenario& s, std::uint64_t trial) {
  s.validate();
  return ChannelMatrix{sample_gaussian(s.seed, trial, s.basestations, s.users),
                       s.power()};
}

Mat covariance(const ChannelMatrix& ch) {
  const auto l = ch.h.rows();
  return ch.power * ch.h * ch.h.transpose() + Mat::Identity(l, l);
}

}  // namespace cran::model
