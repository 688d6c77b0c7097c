#pragma once

#include <vector>

#include "cran/lattice.hpp"

// Symmetric-rate evaluation for the four central-processor decoders given a
// channel and a distortion profile.
namespace cran::chandec {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using lattice::IMat;
using lattice::SelectMode;

// Effective channel after decompression: y_hat = H x + z + q, with q of
// covariance diag(distortion). distortion = 0 models infinite fronthaul.
struct EffectiveChannel {
  Mat h;           // L x K
  double power;    // P
  Vec distortion;  // L entries, >= 0
};

// Joint ML symmetric rate: min over nonempty user subsets. Refuses K > 16.
double rate_ml(const EffectiveChannel& ec);

double rate_mmse(const EffectiveChannel& ec);

enum class SicOrderPolicy { Exhaustive, Greedy, Fixed };

struct SicResult {
  double rate;
  std::vector<int> order;
};

// Exhaustive maximizes over all K! orders (K <= 8); greedy picks the user
// with the highest current SINR at each stage.
SicResult rate_mmse_sic(const EffectiveChannel& ec,
                        SicOrderPolicy policy = SicOrderPolicy::Exhaustive,
                        const std::vector<int>& fixed_order = {});

struct IfccResult {
  double rate;
  IMat a_c;
};

// Integer-forcing with parallel channel decoding.
IfccResult rate_ifcc(const EffectiveChannel& ec, SelectMode mode = SelectMode::Lll);

// Effective-variance Gram (P^{-1} I + H^T (I+D)^{-1} H)^{-1} used by IFCC.
Mat ifcc_gram(const EffectiveChannel& ec);

}  // namespace cran::chandec
