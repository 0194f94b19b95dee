#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>

#include "brainrf/core/error.h"
#include "brainrf/core/metrics.h"
#include "brainrf/core/types.h"
#include "brainrf/eeg/de_features.h"
#include "brainrf/eeg/decoder.h"
#include "brainrf/eeg/filter.h"
#include "brainrf/eeg/preprocess.h"
#include "brainrf/pipeline/stats.h"
#include "doctest.h"

using namespace brainrf;
using namespace brainrf::eeg;

namespace {

// Power of a single DFT bin at `freq`, computed directly.
double dft_power(std::span<const double> x, double freq, double fs) {
  double re = 0.0, im = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double ph = 2.0 * std::numbers::pi * freq * static_cast<double>(t) / fs;
    re += x[t] * std::cos(ph);
    im -= x[t] * std::sin(ph);
  }
  return (re * re + im * im) / static_cast<double>(x.size() * x.size());
}

EegSegment filled_segment(std::size_t samples, double fs, double pre_ms,
                          const std::function<double(std::size_t, std::size_t)>& f) {
  EegSegment s(kChannelCount, samples, fs, pre_ms);
  for (std::size_t c = 0; c < kChannelCount; ++c)
    for (std::size_t t = 0; t < samples; ++t) s.at(c, t) = f(c, t);
  return s;
}

EegSegment noise_segment(std::size_t samples, double fs, std::uint64_t seed, double pre_ms = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  return filled_segment(samples, fs, pre_ms, [&](std::size_t, std::size_t) { return z(rng); });
}

struct Blobs {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
};

Blobs make_blobs(std::size_t n, std::size_t dim, double half_gap, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Blobs b;
  for (std::size_t i = 0; i < n; ++i) {
    const int label = static_cast<int>(i % 2);
    std::vector<double> v(dim);
    for (double& e : v) e = z(rng) + (label ? half_gap : -half_gap);
    b.x.push_back(std::move(v));
    b.y.push_back(label);
  }
  return b;
}

double model_auc(const DecoderModel& m, const Blobs& b) {
  std::vector<double> p;
  for (const auto& v : b.x) p.push_back(m.predict(v));
  return auc(p, b.y);
}

}  // namespace

TEST_CASE("preprocess removes a constant offset") {
  const auto raw = filled_segment(2500, 1000.0, 500.0, [](std::size_t, std::size_t) { return 10.0; });
  const EegSegment out = preprocess(raw, 2000.0, 500.0);
  double worst = 0.0;
  for (double v : out.data()) worst = std::max(worst, std::abs(v));
  CHECK(worst < 1e-6);
}

TEST_CASE("preprocess output length follows window and rate") {
  const EegSegment with_pre = noise_segment(2500, 1000.0, 1, 500.0);
  const EegSegment out = preprocess(with_pre, 2000.0, 500.0);
  CHECK(out.channels() == kChannelCount);
  CHECK(out.samples() == 1000);
  CHECK(out.sampling_rate_hz() == 500.0);
  CHECK_THROWS_AS(preprocess(with_pre, 2500.0, 500.0), InputError);
  CHECK_THROWS_AS(preprocess(with_pre, 2000.0, 2000.0), InputError);
}

TEST_CASE("60 Hz line noise is attenuated by at least 20 dB") {
  const double fs = 1000.0;
  auto tone = [fs](double f) {
    return filled_segment(6500, fs, 500.0, [=](std::size_t, std::size_t t) {
      return std::sin(2.0 * std::numbers::pi * f * static_cast<double>(t) / fs);
    });
  };
  const EegSegment line = preprocess(tone(60.0), 6000.0, 500.0);
  const EegSegment pass = preprocess(tone(10.0), 6000.0, 500.0);
  const double p60 = dft_power(line.channel(0), 60.0, 500.0);
  const double p10 = dft_power(pass.channel(0), 10.0, 500.0);
  CHECK(10.0 * std::log10(p10 / p60) >= 20.0);
  // The design itself: magnitude response at 60 Hz of the low-pass used above.
  const SosFilter lp = butterworth_lowpass(8, 50.0, fs);
  CHECK(20.0 * std::log10(lp.magnitude(60.0, fs) * lp.magnitude(60.0, fs)) <= -20.0);
}

TEST_CASE("butterworth magnitude at the cutoff is -3 dB") {
  for (int order : {2, 4, 8}) {
    CHECK(butterworth_lowpass(order, 50.0, 500.0).magnitude(50.0, 500.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
    CHECK(butterworth_highpass(order, 0.5, 500.0).magnitude(0.5, 500.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
  }
  const SosFilter bp = butterworth_bandpass(4, 8.0, 13.0, 500.0);
  CHECK(bp.magnitude(std::sqrt(8.0 * 13.0), 500.0) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("differential entropy of unit white noise") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> z;
  std::vector<double> x(200000);
  for (double& v : x) v = z(rng);
  CHECK(differential_entropy(x) == doctest::Approx(0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e)).epsilon(0.01));
  CHECK(gaussian_entropy(0.0) == doctest::Approx(0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * kVarianceFloor)));
}

TEST_CASE("band variance of white noise is proportional to bandwidth") {
  const double fs = 500.0;
  const DeExtractor ex(fs);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> z;
  std::vector<double> x(100000);
  for (double& v : x) v = z(rng);
  for (std::size_t b = 0; b < kBandCount; ++b) {
    const double expected = (kBands[b].high_hz - kBands[b].low_hz) / (fs / 2.0);
    CHECK(ex.band_variance(x, b) == doctest::Approx(expected).epsilon(0.1));
  }
  // Alpha band, the documented example.
  const double alpha = 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * ex.band_variance(x, 2));
  CHECK(alpha == doctest::Approx(0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * 5.0 / 250.0)).epsilon(0.1));
}

TEST_CASE("scaling a channel shifts its entropy by ln(a)") {
  const EegSegment base = noise_segment(1000, 500.0, 6);
  const DeFeatureVector f0 = extract_de(base);
  for (double a : {2.0, 0.3, 7.5}) {
    EegSegment scaled = base;
    for (double& v : scaled.channel(5)) v *= a;
    const DeFeatureVector f1 = extract_de(scaled);
    for (std::size_t b = 0; b < kBandCount; ++b) {
      CHECK(f1.at(5, b) - f0.at(5, b) == doctest::Approx(std::log(a)).epsilon(1e-6));
      CHECK(f1.at(4, b) == f0.at(4, b));
    }
  }
}

TEST_CASE("channel permutation permutes feature rows") {
  const EegSegment base = noise_segment(1000, 500.0, 8);
  std::vector<std::size_t> perm(kChannelCount);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(1));
  EegSegment permuted = base;
  for (std::size_t c = 0; c < kChannelCount; ++c) {
    auto src = base.channel(perm[c]);
    std::copy(src.begin(), src.end(), permuted.channel(c).begin());
  }
  const DeFeatureVector a = extract_de(base), b = extract_de(permuted);
  for (std::size_t c = 0; c < kChannelCount; ++c)
    for (std::size_t band = 0; band < kBandCount; ++band) CHECK(b.at(c, band) == a.at(perm[c], band));
}

TEST_CASE("feature extraction rejects bad input") {
  CHECK_THROWS_AS(extract_de(noise_segment(500, 80.0, 1)), InputError);
  const EegSegment flat = filled_segment(1000, 500.0, 0.0, [](std::size_t, std::size_t) { return 0.0; });
  const DeFeatureVector f = extract_de(flat);
  for (double v : f.flat()) CHECK(std::isfinite(v));
  CHECK(f.flat().size() == kFeatureLength);
}

TEST_CASE("grade binarization") {
  CHECK(binarize_grade(RelevanceGrade(1)) == 0);
  CHECK(binarize_grade(RelevanceGrade(2)) == 1);
  CHECK(binarize_grade(RelevanceGrade(3)) == 1);
  CHECK(binarize_grade(RelevanceGrade(4)) == 1);
}

TEST_CASE("decoder separates well-separated blobs") {
  const Blobs train = make_blobs(200, kFeatureLength, 1.5, 10);
  const Blobs test = make_blobs(200, kFeatureLength, 1.5, 11);
  const DecoderModel m = train_decoder(train.x, train.y);
  CHECK(m.trained());
  CHECK(m.trained_sample_count() == 200);
  CHECK(model_auc(m, test) >= 0.95);
  CHECK(model_auc(m, train) >= 0.99);
  CHECK(m.predict(std::vector<double>(kFeatureLength, 1.5)) >= 0.9);
  CHECK(m.predict(std::vector<double>(kFeatureLength, -1.5)) <= 0.1);
}

TEST_CASE("decoder is at chance on shuffled labels") {
  Blobs train = make_blobs(400, kFeatureLength, 0.0, 12);
  Blobs test = make_blobs(400, kFeatureLength, 0.0, 13);
  std::shuffle(train.y.begin(), train.y.end(), std::mt19937_64(14));
  const DecoderModel m = train_decoder(train.x, train.y);
  const double a = model_auc(m, test);
  CHECK(a >= 0.40);
  CHECK(a <= 0.60);
}

TEST_CASE("decoder midpoint of a symmetric problem is near one half") {
  const Blobs train = make_blobs(300, 20, 1.0, 15);
  const DecoderModel m = train_decoder(train.x, train.y);
  CHECK(m.predict(std::vector<double>(20, 0.0)) == doctest::Approx(0.5).epsilon(0.2));
  CHECK(std::abs(m.predict(std::vector<double>(20, 0.0)) - 0.5) <= 0.1);
}

TEST_CASE("decoder errors and determinism") {
  DecoderModel untrained;
  CHECK_THROWS_AS(untrained.predict(std::vector<double>(3, 0.0)), StateError);
  const Blobs b = make_blobs(60, 8, 1.0, 16);
  std::vector<int> one_class(60, 1);
  CHECK_THROWS_AS(train_decoder(b.x, one_class), TrainingError);
  const DecoderModel m1 = train_decoder(b.x, b.y), m2 = train_decoder(b.x, b.y);
  CHECK_THROWS_AS(m1.predict(std::vector<double>(7, 0.0)), InputError);
  for (const auto& v : b.x) {
    CHECK(m1.predict(v) == m2.predict(v));
    CHECK(m1.predict(v) == m1.predict(v));
    CHECK(m1.predict(v) >= 0.0);
    CHECK(m1.predict(v) <= 1.0);
  }
}

TEST_CASE("model selection switches at the personalization threshold") {
  const Blobs b = make_blobs(40, 4, 1.0, 17);
  const DecoderModel g = train_decoder(b.x, b.y, {}, DecoderScope::Generalized);
  const DecoderModel p = train_decoder(b.x, b.y, {}, DecoderScope::Personalized);
  CHECK(&select_model(g, p, 99) == &g);
  CHECK(&select_model(g, p, 100) == &p);
  CHECK(&select_model(g, p, 0) == &g);
}

TEST_CASE("personalized decoder beats generalized on subject-specific structure") {
  // The cohort's relevance direction differs from the target subject's; both
  // share a common component.
  constexpr std::size_t dim = 40;
  std::vector<double> gen_auc, pers_auc;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    std::mt19937_64 rng(seed * 101);
    std::normal_distribution<double> z;
    auto sample = [&](std::size_t n, double common, double own, std::size_t own_dim) {
      Blobs b;
      for (std::size_t i = 0; i < n; ++i) {
        const int y = static_cast<int>(rng() & 1u);
        const double s = y ? 1.0 : -1.0;
        std::vector<double> v(dim);
        for (double& e : v) e = z(rng);
        v[0] += s * common;
        v[own_dim] += s * own;
        b.x.push_back(std::move(v));
        b.y.push_back(y);
      }
      return b;
    };
    const Blobs cohort = sample(300, 0.5, 1.5, 1);
    const Blobs own_train = sample(150, 0.5, 1.5, 2);
    const Blobs own_test = sample(300, 0.5, 1.5, 2);
    const DecoderModel g = train_decoder(cohort.x, cohort.y, {}, DecoderScope::Generalized);
    const DecoderModel p = train_decoder(own_train.x, own_train.y, {}, DecoderScope::Personalized);
    gen_auc.push_back(model_auc(g, own_test));
    pers_auc.push_back(model_auc(p, own_test));
  }
  const TestResult t = paired_t_test(pers_auc, gen_auc);
  CHECK(t.mean_difference > 0.0);
  CHECK(t.p_value < 0.05);
}

TEST_CASE("platt fit recovers a known sigmoid") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-4.0, 4.0), coin(0.0, 1.0);
  std::vector<double> f(20000);
  std::vector<int> y(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    f[i] = u(rng);
    y[i] = coin(rng) < 1.0 / (1.0 + std::exp(-1.7 * f[i] + 0.4)) ? 1 : 0;
  }
  const PlattSigmoid p = fit_platt(f, y);
  CHECK(p.a == doctest::Approx(-1.7).epsilon(0.08));
  CHECK(p.b == doctest::Approx(0.4).epsilon(0.25));
}
