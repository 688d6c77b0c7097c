#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace cran::model {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

enum class Csir { Global, Local };

// All experiment parameters for one operating point.
struct Scenario {
  int users = 1;              // K
  int basestations = 1;       // L
  double snr_db = 25.0;
  double c_sym = 3.0;         // fronthaul bits per real channel use
  Csir csir = Csir::Global;
  double rho = 0.05;          // outage target
  double rho_s = 0.025;       // compression outage target (local CSIR)
  int trials = 1000;
  std::uint64_t seed = 0;

  void validate() const;      // throws std::invalid_argument
  double power() const;       // 10^(snr_db/10)
};

struct ChannelMatrix {
  Mat h;         // L x K fading realization
  double power;  // P
};

double snr_to_power(double snr_db);

// Deterministic per-trial stream: identical (seed, trial) gives a
// bit-identical matrix regardless of call order or thread.
ChannelMatrix sample_channel(const Scenario& s, std::uint64_t trial);

// Lower-level sampler used for independent draw sets (e.g. calibration).
Mat sample_gaussian(std::uint64_t seed, std::uint64_t stream, int rows, int cols);

// K_YY = P H H^T + I
Mat covariance(const ChannelMatrix& ch);

}  // namespace cran::model
