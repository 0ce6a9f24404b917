#include <cmath>
#include <random>

#include "doctest.h"
#include "inkmetrics/errors.hpp"
#include "inkmetrics/synth.hpp"
#include "inkmetrics/temporal.hpp"
#include "test_helpers.hpp"

using namespace ink;
using ink::testing::make_session;

namespace {

BinarySeries bits_of(std::vector<int> v) {
  BinarySeries s;
  s.dt_ms = 100;
  for (int b : v) s.bits.push_back(static_cast<std::uint8_t>(b));
  return s;
}

// Brute-force population Gini straight from the double sum.
double gini_oracle(const std::vector<int>& bits) {
  double n = static_cast<double>(bits.size());
  double mean = 0.0;
  for (int b : bits) mean += b;
  mean /= n;
  double acc = 0.0;
  for (int a : bits)
    for (int b : bits) acc += std::fabs(a - b);
  return acc / (2.0 * n * n * mean);
}

}  // namespace

TEST_CASE("single full-length stroke summarizes to proportion one") {
  DrawingSession s = make_session({{0, {{0, 1, 1}, {800, 5, 5}}}});
  TemporalSummary t = temporal_summary(s);
  CHECK(t.test_time_ms == 800);
  CHECK(t.drawing_time_ms == 800);
  CHECK(t.n_sequences == 1);
  CHECK(t.drawing_time_proportion == doctest::Approx(1.0));
}

TEST_CASE("speed divides distance by ink time") {
  DrawingSession s = make_session({{0, {{0, 0, 0}, {200, 100, 0}}}});
  TemporalSummary t = temporal_summary(s);
  CHECK(t.speed_px_per_ms == doctest::Approx(0.5));
}

TEST_CASE("three strokes with gaps split the timeline") {
  DrawingSession s = make_session({{0, {{0, 1, 1}, {100, 5, 5}}},
                                   {0, {{200, 1, 1}, {300, 5, 5}}},
                                   {0, {{400, 1, 1}, {500, 5, 5}}}});
  TemporalSummary t = temporal_summary(s);
  CHECK(t.test_time_ms == 500);
  CHECK(t.drawing_time_ms == 300);
  CHECK(t.n_sequences == 5);
  CHECK(t.drawing_time_proportion == doctest::Approx(0.6));
}

TEST_CASE("proportion stays in the unit interval on fuzzed sessions") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<ink::testing::StrokeSpecT> strokes;
    std::int64_t t = 0;
    int n = 1 + static_cast<int>(rng() % 5);
    for (int k = 0; k < n; ++k) {
      ink::testing::StrokeSpecT spec;
      int pts = 1 + static_cast<int>(rng() % 3);
      for (int i = 0; i < pts; ++i) {
        spec.points.push_back(StrokePoint{t, 2.0 + k, 2.0 + i});
        t += 1 + static_cast<std::int64_t>(rng() % 50);
      }
      strokes.push_back(spec);
      t += static_cast<std::int64_t>(rng() % 100);
    }
    DrawingSession s = make_session(strokes);
    if (s.total_points() < 2) continue;
    TemporalSummary ts = temporal_summary(s);
    CHECK(ts.drawing_time_proportion >= 0.0);
    CHECK(ts.drawing_time_proportion <= 1.0);
    CHECK(ts.drawing_time_ms <= ts.test_time_ms);
  }
}

TEST_CASE("all-ones series has zero gini") {
  CHECK(gini_binary(bits_of({1, 1, 1, 1})) == 0.0);
}

TEST_CASE("gini matches the brute-force double sum at quarter density") {
  std::vector<int> bits = {1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0};
  CHECK(gini_binary(bits_of(bits)) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(gini_binary(bits_of(bits)) == doctest::Approx(gini_oracle(bits)).epsilon(1e-15));
}

TEST_CASE("all-zero series has no mean to normalize by") {
  CHECK_THROWS_AS(gini_binary(bits_of({0, 0, 0})), DegeneracyError);
}

TEST_CASE("gini plus bit mean is exactly one") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 1000; ++trial) {
    std::size_t n = 1 + rng() % 400;
    std::vector<int> bits(n);
    bool any = false;
    for (auto& b : bits) {
      b = static_cast<int>(rng() % 2);
      any |= b == 1;
    }
    if (!any) bits[rng() % n] = 1;
    BinarySeries s = bits_of(bits);
    double mean = 0.0;
    for (auto b : s.bits) mean += b;
    mean /= static_cast<double>(n);
    CHECK(std::fabs(gini_binary(s) + mean - 1.0) < 1e-12);
  }
}

TEST_CASE("unbiased gini applies the small-sample factor") {
  std::vector<int> bits = {1, 0, 0, 0};
  CHECK(gini_binary(bits_of(bits), true) == doctest::Approx(0.75 * 4.0 / 3.0));
}

TEST_CASE("a tap followed by idle time has zero entropy") {
  DrawingSession s = make_session({{0, {{0, 1, 1}}}, {0, {{10000, 5, 5}}}});
  CHECK(entropy_cumsum(s) == doctest::Approx(0.0));
}

TEST_CASE("continuous drawing for eight seconds carries three bits") {
  DrawingSession s = make_session({{0, {{0, 1, 1}, {8000, 5, 5}}}});
  CHECK(entropy_cumsum(s) == doctest::Approx(3.0));
}

TEST_CASE("draw-then-idle pattern matches the hand enumeration") {
  // Ink from 0 to 4000 ms, a tap at 8000 ms extends the span to 8 seconds.
  // Samples at seconds 1..8: 1000,2000,3000,4000,4000,4000,4000,4000
  // -> frequencies {1,1,1,5}/8.
  DrawingSession s = make_session({{0, {{0, 1, 1}, {4000, 5, 5}}}, {0, {{8000, 9, 9}}}});
  double expect = -(3.0 * (1.0 / 8.0) * std::log2(1.0 / 8.0) +
                    (5.0 / 8.0) * std::log2(5.0 / 8.0));
  CHECK(entropy_cumsum(s) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("entropy is bounded by the log of the sample count") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ink::testing::StrokeSpecT> strokes;
    std::int64_t t = 0;
    int n = 1 + static_cast<int>(rng() % 6);
    for (int k = 0; k < n; ++k) {
      ink::testing::StrokeSpecT spec;
      spec.points.push_back(StrokePoint{t, 3.0, 3.0});
      t += 500 + static_cast<std::int64_t>(rng() % 3000);
      spec.points.push_back(StrokePoint{t, 6.0, 6.0});
      t += 200 + static_cast<std::int64_t>(rng() % 2000);
      strokes.push_back(spec);
    }
    DrawingSession s = make_session(strokes);
    if (s.span_ms() < 1000) continue;
    double h = entropy_cumsum(s);
    double seconds = static_cast<double>(s.span_ms() / 1000);
    CHECK(h <= std::log2(seconds) + 1e-12);
    CHECK(h >= 0.0);
  }
}

TEST_CASE("fair-coin bits estimate H near one half") {
  std::vector<double> estimates;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(9000 + seed);
    BinarySeries s;
    s.dt_ms = 100;
    for (int i = 0; i < 4096; ++i) s.bits.push_back(static_cast<std::uint8_t>(rng() % 2));
    estimates.push_back(hurst_estimators(s).h_dfa);
  }
  std::sort(estimates.begin(), estimates.end());
  double median = (estimates[9] + estimates[10]) / 2.0;
  CHECK(median == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("persistent fGn thresholded at the median estimates high H") {
  std::vector<double> estimates;
  for (std::uint64_t seed = 0; seed < 20; ++seed)
    estimates.push_back(hurst_estimators(gen_fgn_binary(0.8, 4096, seed)).h_dfa);
  std::sort(estimates.begin(), estimates.end());
  double median = (estimates[9] + estimates[10]) / 2.0;
  CHECK(median > 0.70);
  CHECK(median < 0.90);
}

TEST_CASE("alternating bits are strongly anti-persistent") {
  BinarySeries s;
  s.dt_ms = 100;
  for (int i = 0; i < 1024; ++i) s.bits.push_back(static_cast<std::uint8_t>(i % 2));
  HurstEstimate h = hurst_estimators(s);
  CHECK(h.h_dfa < 0.5);
}

TEST_CASE("constant series cannot be analyzed") {
  BinarySeries s;
  s.dt_ms = 100;
  s.bits.assign(512, 1);
  CHECK_THROWS_WITH_AS(hurst_estimators(s), doctest::Contains("constant"), DegeneracyError);
}

TEST_CASE("short series are rejected") {
  BinarySeries s;
  s.dt_ms = 100;
  for (int i = 0; i < 255; ++i) s.bits.push_back(static_cast<std::uint8_t>(i % 2));
  CHECK_THROWS_AS(hurst_estimators(s), DegeneracyError);
}

TEST_CASE("the estimate is invariant under a global bit flip") {
  BinarySeries s = gen_fgn_binary(0.7, 1024, 5);
  BinarySeries flipped = s;
  for (auto& b : flipped.bits) b = static_cast<std::uint8_t>(1 - b);
  HurstEstimate a = hurst_estimators(s);
  HurstEstimate b = hurst_estimators(flipped);
  CHECK(a.h_dfa == doctest::Approx(b.h_dfa).epsilon(1e-9));
  CHECK(a.h_rs == doctest::Approx(b.h_rs).epsilon(1e-9));
}

TEST_CASE("identical estimator pairs give all-zero index scores") {
  std::vector<HurstEstimate> v(5, HurstEstimate{0.6, 0.7});
  HurstIndex idx = hurst_index(v);
  CHECK(idx.pca_used);
  for (double s : idx.scores) CHECK(s == doctest::Approx(0.0));
}

TEST_CASE("perfectly correlated estimators score along either column") {
  // 2x2 correlation matrix with unit off-diagonal has leading eigenvector
  // (1,1)/sqrt(2); scores must be proportional to the standardized column.
  std::vector<HurstEstimate> v;
  for (int i = 0; i < 8; ++i)
    v.push_back(HurstEstimate{0.4 + 0.05 * i, 0.5 + 0.1 * i});
  HurstIndex idx = hurst_index(v);
  // standardized column of h_dfa
  double mean = 0.0;
  for (const auto& h : v) mean += h.h_dfa;
  mean /= 8.0;
  double ss = 0.0;
  for (const auto& h : v) ss += (h.h_dfa - mean) * (h.h_dfa - mean);
  double sd = std::sqrt(ss / 7.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    double z = (v[i].h_dfa - mean) / sd;
    CHECK(idx.scores[i] == doctest::Approx(z * std::sqrt(2.0)).epsilon(1e-9));
  }
}

TEST_CASE("two drawings fall back to the estimator mean") {
  std::vector<HurstEstimate> v = {{0.4, 0.6}, {0.8, 1.0}};
  HurstIndex idx = hurst_index(v);
  CHECK_FALSE(idx.pca_used);
  CHECK(idx.scores[0] == doctest::Approx(0.5));
  CHECK(idx.scores[1] == doctest::Approx(0.9));
}
