#include <benchmark/benchmark.h>

#include "cran/chandec.hpp"
#include "cran/e2e.hpp"
#include "cran/srccode.hpp"

using namespace cran;
using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

namespace {

model::ChannelMatrix channel(int l, int k, double snr_db, std::uint64_t stream) {
  return {model::sample_gaussian(1, stream, l, k), model::snr_to_power(snr_db)};
}

void bm_lll_reduce(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Mat kyy = model::covariance(channel(n, 3, 25.0, 0));
  for (auto _ : state) benchmark::DoNotOptimize(lattice::lll_reduce(kyy / 0.5));
}
BENCHMARK(bm_lll_reduce)->Arg(4)->Arg(6)->Arg(8);

void bm_calibrate_ifsc_sym(benchmark::State& state) {
  const int l = static_cast<int>(state.range(0));
  const Mat kyy = model::covariance(channel(l, 3, 25.0, 1));
  for (auto _ : state)
    benchmark::DoNotOptimize(srccode::calibrate_ifsc_sym(kyy, 3.0));
}
BENCHMARK(bm_calibrate_ifsc_sym)->Arg(4)->Arg(6);

void bm_calibrate_wz_exhaustive(benchmark::State& state) {
  const auto ch = channel(static_cast<int>(state.range(0)), 3, 25.0, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        srccode::calibrate_wz(ch, 3.0, srccode::WzOrderPolicy::Exhaustive));
}
BENCHMARK(bm_calibrate_wz_exhaustive)->Arg(4)->Arg(6);

void bm_rate_mmse_sic_exhaustive(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const auto ch = channel(6, k, 25.0, 3);
  const chandec::EffectiveChannel ec{ch.h, ch.power, Vec::Constant(6, 0.5)};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        chandec::rate_mmse_sic(ec, chandec::SicOrderPolicy::Exhaustive));
}
BENCHMARK(bm_rate_mmse_sic_exhaustive)->Arg(3)->Arg(6);

void bm_end_to_end_trial(benchmark::State& state) {
  model::Scenario s;
  s.users = 3;
  s.basestations = 6;
  s.c_sym = 3.0;
  const auto ch = channel(6, 3, 25.0, 4);
  const e2e::SchemePair pair{e2e::SourceScheme::IfscSym, e2e::Decoder::Ifcc};
  for (auto _ : state)
    benchmark::DoNotOptimize(e2e::rate_end_to_end(ch, s, pair));
}
BENCHMARK(bm_end_to_end_trial);

}  // namespace

BENCHMARK_MAIN();
