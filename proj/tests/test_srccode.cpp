#include "cran/srccode.hpp"

#include <cmath>

#include "doctest.h"

using namespace cran;
using model::ChannelMatrix;
using srccode::Mat;
using srccode::Vec;

namespace {

// L=2, K=1, P=1, h=(1,1): K_YY = [[2,1],[1,2]].
ChannelMatrix two_bs_channel() {
  ChannelMatrix ch;
  ch.h = Mat::Ones(2, 1);
  ch.power = 1.0;
  return ch;
}

ChannelMatrix random_channel(int l, int k, double p, std::uint64_t stream) {
  ChannelMatrix ch;
  ch.h = model::sample_gaussian(99, stream, l, k);
  ch.power = p;
  return ch;
}

}  // namespace

TEST_CASE("single-user compression rate and its inverse") {
  Vec h(2);
  h << 1, 1;
  // P |h|^2 + 1 = 3, d = 1: rate = (1/2) log2(4) = 1 bit
  CHECK(srccode::rate_suc(h, 1.0, 1.0) == doctest::Approx(1.0));

  const double d = srccode::distortion_suc(h, 1.0, 1.0);
  CHECK(d == doctest::Approx(1.0));
  for (double c : {0.5, 1.0, 2.0, 4.0}) {
    const double dc = srccode::distortion_suc(h, 3.0, c);
    CHECK(srccode::rate_suc(h, 3.0, dc) == doctest::Approx(c));
  }
}

TEST_CASE("Wyner-Ziv per-step rates on the two-basestation channel") {
  const auto ch = two_bs_channel();
  Vec d = Vec::Ones(2);
  const Vec r = srccode::rate_wz(ch, d, {0, 1});
  CHECK(r(0) == doctest::Approx(0.5 * std::log2(3.0)));        // ~0.7925
  CHECK(r(1) == doctest::Approx(0.5 * std::log2(8.0 / 3.0)));  // ~0.7075
  // symmetric channel: the reversed order gives the same rates
  const Vec r2 = srccode::rate_wz(ch, d, {1, 0});
  CHECK(r2(0) == doctest::Approx(r(0)));
  CHECK(r2(1) == doctest::Approx(r(1)));
}

TEST_CASE("Wyner-Ziv rates decrease with distortion") {
  const auto ch = random_channel(3, 2, 10.0, 0);
  const Vec lo = srccode::rate_wz(ch, Vec::Constant(3, 0.5), {0, 1, 2});
  const Vec hi = srccode::rate_wz(ch, Vec::Constant(3, 2.0), {0, 1, 2});
  for (int i = 0; i < 3; ++i) CHECK(lo(i) > hi(i));
}

TEST_CASE("Wyner-Ziv calibration saturates every step") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto ch = random_channel(3, 2, 31.62, s);
    const auto cal = srccode::calibrate_wz(ch, 2.0, srccode::WzOrderPolicy::Exhaustive);
    for (int i = 0; i < 3; ++i)
      CHECK(cal.achieved_rates(i) == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(cal.profile.d.minCoeff() > 0.0);
  }
}

TEST_CASE("exhaustive WZ order is at least as good as greedy") {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto ch = random_channel(4, 3, 100.0, 200 + s);
    const auto ex = srccode::calibrate_wz(ch, 3.0, srccode::WzOrderPolicy::Exhaustive);
    const auto gr = srccode::calibrate_wz(ch, 3.0, srccode::WzOrderPolicy::Greedy);
    CHECK(ex.profile.d.sum() <= gr.profile.d.sum() * (1.0 + 1e-9));
  }
}

TEST_CASE("fixed WZ order is honored") {
  const auto ch = random_channel(3, 2, 10.0, 7);
  const std::vector<int> order{2, 0, 1};
  const auto cal =
      srccode::calibrate_wz(ch, 2.0, srccode::WzOrderPolicy::Fixed, order);
  const Vec r = srccode::rate_wz(ch, cal.profile.d, order);
  for (int i = 0; i < 3; ++i) CHECK(r(i) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("Berger-Tung rate on the frozen covariance") {
  Mat kyy(2, 2);
  kyy << 2, 1, 1, 2;
  // |I + K| = 8, rate = (1/4) log2 8 = 0.75
  CHECK(srccode::rate_bt(kyy, 1.0) == doctest::Approx(0.75));
  CHECK(srccode::rate_bt(kyy, 0.5) > srccode::rate_bt(kyy, 1.0));

  for (double c : {0.5, 1.0, 3.0}) {
    const double d = srccode::calibrate_bt(kyy, c);
    CHECK(srccode::rate_bt(kyy, d) == doctest::Approx(c).epsilon(1e-5));
  }
}

TEST_CASE("symmetric IFSC rate on the frozen covariance") {
  Mat kyy(2, 2);
  kyy << 2, 1, 1, 2;
  // G = K/d + I = [[3,1],[1,3]]: optimum unimodular A has max form 3
  const auto r = srccode::rate_ifsc_sym(kyy, 1.0);
  CHECK(r.rate == doctest::Approx(0.5 * std::log2(3.0)));
  CHECK(lattice::is_unimodular(r.a_s));
}

TEST_CASE("symmetric IFSC never beats Berger-Tung or loses to worst-case SUC") {
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto ch = random_channel(3, 2, 31.62, 400 + s);
    const Mat kyy = model::covariance(ch);
    // include near-saturating distortions, where the reduced basis can tie
    // with the identity and the fallback must keep the bound exact
    const double d_vals[] = {0.25 + 0.1 * static_cast<double>(s % 7),
                             kyy.diagonal().maxCoeff() / 3.0,
                             kyy.diagonal().maxCoeff()};
    for (const double d : d_vals) {
      const auto r = srccode::rate_ifsc_sym(kyy, d);
      // IFSC compression rate >= BT (IFSC is more constrained)
      CHECK(r.rate >= srccode::rate_bt(kyy, d) - 1e-9);
      // A = I is always admissible, so the optimized rate can't exceed the
      // largest direct-quantization rate
      double worst_direct = 0.0;
      for (int l = 0; l < 3; ++l)
        worst_direct = std::max(worst_direct, 0.5 * std::log2(kyy(l, l) / d + 1.0));
      CHECK(r.rate <= worst_direct + 1e-9);
    }
  }
}

TEST_CASE("symmetric IFSC calibration hits the fronthaul rate") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto ch = random_channel(3, 2, 316.23, 500 + s);
    const Mat kyy = model::covariance(ch);
    const auto cal = srccode::calibrate_ifsc_sym(kyy, 3.0);
    const double achieved = cal.achieved_rates(0);
    CHECK(achieved <= 3.0 + 1e-9);
    CHECK(achieved >= 3.0 - 1e-3);
    CHECK(cal.iterations <= srccode::kBisectMaxIter);
  }
}

TEST_CASE("asymmetric IFSC lowers distortions without exceeding the fronthaul") {
  int fell_back = 0;
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto ch = random_channel(3, 2, 316.23, 600 + s);
    const Mat kyy = model::covariance(ch);
    const auto sym = srccode::calibrate_ifsc_sym(kyy, 3.0);
    const auto asym = srccode::calibrate_ifsc_asym(kyy, 3.0);
    CHECK(asym.profile.d.minCoeff() > 0.0);
    for (int l = 0; l < 3; ++l) CHECK(asym.achieved_rates(l) <= 3.0 + 1e-6);
    if (asym.fell_back_to_symmetric) {
      ++fell_back;
    } else {
      // saturating every link lets each row quantize at least as finely as
      // the symmetric solution
      for (int l = 0; l < 3; ++l)
        CHECK(asym.profile.d(l) <= sym.profile.d(0) * (1.0 + 1e-9));
      CHECK(asym.pi_if.has_value());
    }
  }
  CHECK(fell_back < 100);  // the non-fallback path must actually be exercised
}

TEST_CASE("asymmetric IFSC rate checks the ordering precondition") {
  Mat kyy(2, 2);
  kyy << 5, 0, 0, 1;
  srccode::IMat a(2, 2);
  a << 1, 0, 0, 1;  // row 0 has the larger form: wrong order
  CHECK_THROWS_AS(srccode::rate_ifsc_asym(kyy, Vec::Ones(2), a),
                  std::invalid_argument);
}

TEST_CASE("opportunistic IFSC keeps distortions at or below the target") {
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto ch = random_channel(3, 2, 316.23, 700 + s);
    const auto opp = srccode::rate_ifsc_opportunistic(ch, 3.0, 1.0);
    CHECK(opp.profile.beta.minCoeff() >= 1.0 - 1e-12);
    CHECK(opp.profile.d.maxCoeff() <= 1.0 + 1e-9);
    CHECK(opp.rate >= 0.0);
    // larger beta headroom can only shrink the distortion
    for (int l = 0; l < 3; ++l)
      CHECK(opp.profile.d(l) ==
            doctest::Approx(1.0 / (opp.profile.beta(l) * opp.profile.beta(l))));
  }
}

TEST_CASE("local compression rates are monotone in the target distortion") {
  const auto ch = random_channel(4, 3, 316.23, 800);
  for (auto scheme : {srccode::LocalScheme::IfscLocal,
                      srccode::LocalScheme::IfscOpportunistic,
                      srccode::LocalScheme::WzSymmetric, srccode::LocalScheme::Bt}) {
    const double lo = srccode::local_compression_rate(scheme, ch, 3.0, 0.5);
    const double hi = srccode::local_compression_rate(scheme, ch, 3.0, 2.0);
    CHECK(lo >= hi - 1e-12);
  }
}

TEST_CASE("outage-distortion calibration meets the compression-outage target") {
  model::Scenario s;
  s.users = 2;
  s.basestations = 3;
  s.snr_db = 15.0;
  s.c_sym = 3.0;
  s.csir = model::Csir::Local;
  s.rho = 0.10;
  s.rho_s = 0.05;
  s.trials = 200;
  s.seed = 3;
  for (auto scheme : {srccode::LocalScheme::IfscLocal,
                      srccode::LocalScheme::IfscOpportunistic,
                      srccode::LocalScheme::WzSymmetric, srccode::LocalScheme::Bt}) {
    const auto cal = srccode::calibrate_outage_distortion(scheme, s);
    CHECK(cal.d_t > 0.0);
    CHECK(cal.empirical_outage <= s.rho_s + 1e-12);
  }
}
