#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cran/lattice.hpp"
#include "cran/model.hpp"

// Compression-rate evaluation and distortion calibration for the six
// source-coding schemes: SUC, WZ, BT, symmetric IFSC, asymmetric IFSC and
// opportunistic IFSC, plus local-CSIR outage calibration.
namespace cran::srccode {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using lattice::IMat;
using lattice::SelectMode;
using model::ChannelMatrix;
using model::Scenario;

inline constexpr double kBisectTol = 1e-6;   // bits
inline constexpr int kBisectMaxIter = 200;

// Per-basestation quantization MSE, diag(D).
struct DistortionProfile {
  Vec d;
  std::string scheme;
  Vec beta;  // present only for the opportunistic scheme
};

struct SourceCalibration {
  DistortionProfile profile;
  std::optional<IMat> a_s;
  std::optional<std::vector<int>> pi_if;
  Vec achieved_rates;                 // bits, one per basestation
  bool fell_back_to_symmetric = false;
  int iterations = 0;                 // bisection iterations, when applicable
};

// --- single-user compression -------------------------------------------------

double rate_suc(const Vec& h_row, double p, double d);
double distortion_suc(const Vec& h_row, double p, double c_sym);

// --- Wyner-Ziv ---------------------------------------------------------------

// Rates indexed by position in the decompression order.
Vec rate_wz(const ChannelMatrix& ch, const Vec& d, const std::vector<int>& order);

enum class WzOrderPolicy { Exhaustive, Greedy, Fixed };

using WzMetric = std::function<double(const Vec& d)>;  // lower is better

SourceCalibration calibrate_wz(const ChannelMatrix& ch, double c_sym,
                               WzOrderPolicy policy,
                               const std::vector<int>& fixed_order = {},
                               const WzMetric& metric = {});

// --- Berger-Tung -------------------------------------------------------------

double rate_bt(const Mat& kyy, double d);
double calibrate_bt(const Mat& kyy, double c_sym);

// --- symmetric IFSC ----------------------------------------------------------

struct IfscSymRate {
  double rate;
  IMat a_s;
};

IfscSymRate rate_ifsc_sym(const Mat& kyy, double d,
                          SelectMode mode = SelectMode::Lll);

SourceCalibration calibrate_ifsc_sym(const Mat& kyy, double c_sym,
                                     double tol = 1e-3,
                                     SelectMode mode = SelectMode::Lll);

// --- asymmetric IFSC ---------------------------------------------------------

// Rows of a_s must already be sorted ascending by a^T (K_YY + D) a.
Vec rate_ifsc_asym(const Mat& kyy, const Vec& d, const IMat& a_s);

SourceCalibration calibrate_ifsc_asym(const Mat& kyy, double c_sym,
                                      SelectMode mode = SelectMode::Lll);

// --- opportunistic IFSC ------------------------------------------------------

struct OpportunisticRate {
  double rate;
  DistortionProfile profile;
  IMat a_s;
};

OpportunisticRate rate_ifsc_opportunistic(const ChannelMatrix& ch, double c_sym,
                                          double d_t,
                                          SelectMode mode = SelectMode::Lll);

// --- local-CSIR outage calibration -------------------------------------------

enum class LocalScheme { IfscLocal, IfscOpportunistic, WzSymmetric, Bt };

struct OutageCalibration {
  double d_t;
  double empirical_outage;  // at the returned d_t, over the calibration set
};

// Compression rate of one channel draw at symmetric target distortion d_t.
double local_compression_rate(LocalScheme scheme, const ChannelMatrix& ch,
                              double c_sym, double d_t);

// Smallest d_t (to bisection tolerance) whose empirical compression outage
// over a fixed seed-determined draw set is at most rho_s.
OutageCalibration calibrate_outage_distortion(LocalScheme scheme, const Scenario& s);

// Stream namespace offset separating calibration draws from evaluation draws.
inline constexpr std::uint64_t kCalibrationStreamOffset = 1ULL << 32;

}  // namespace cran::srccode
