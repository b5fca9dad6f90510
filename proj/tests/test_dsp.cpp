#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "scene/dsp/dsp.hpp"
#include "scene/rng.hpp"

using namespace scene;
using namespace scene::dsp;

namespace {

DspConfig small_config() {
  DspConfig cfg;
  cfg.frame_length = 256;
  cfg.hop_length = 64;
  cfg.n_mels = 24;
  cfg.mfcc_count = 12;
  return cfg;
}

std::vector<double> random_signal(std::size_t n, Rng& rng) {
  std::vector<double> s(n);
  for (double& v : s) v = rng.uniform(-1.0, 1.0);
  return s;
}

}  // namespace

TEST_CASE("frame_signal frame count and placement") {
  DspConfig cfg;  // L=2048, H=512
  Rng rng(1);
  const auto sig = random_signal(160000, rng);
  const DTensor frames = frame_signal(sig, cfg);
  CHECK(frames.dim(0) == 309);  // floor((160000-2048)/512)+1
  CHECK(frames.dim(1) == 2048);

  // frame i starts at sample i*H and is windowed elementwise
  const auto w = hann_window(cfg.frame_length);
  for (int i : {0, 5, 308}) {
    for (int n : {0, 1, 1000, 2047}) {
      CHECK(frames(i, n) ==
            doctest::Approx(sig[static_cast<std::size_t>(i) * 512 + n] * w[n]).epsilon(1e-12));
    }
  }
}

TEST_CASE("frame_signal single frame boundary and errors") {
  DspConfig cfg;
  cfg.frame_length = 64;
  cfg.hop_length = 16;
  Rng rng(2);
  CHECK(frame_signal(random_signal(64, rng), cfg).dim(0) == 1);
  CHECK_THROWS_WITH_AS(frame_signal(random_signal(63, rng), cfg),
                       doctest::Contains("signal too short"), std::runtime_error);
}

TEST_CASE("frame_signal of zeros is zero") {
  DspConfig cfg = small_config();
  const DTensor frames = frame_signal(std::vector<double>(1000, 0.0), cfg);
  for (double v : frames.data) CHECK(v == 0.0);
}

TEST_CASE("frame count formula holds over random sizes") {
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    DspConfig cfg;
    cfg.frame_length = 8 + rng.uniform_int(200);
    cfg.hop_length = 1 + rng.uniform_int(cfg.frame_length);
    const int len = cfg.frame_length + rng.uniform_int(4000);
    const auto sig = random_signal(static_cast<std::size_t>(len), rng);
    const DTensor frames = frame_signal(sig, cfg);
    CHECK(frames.dim(0) == (len - cfg.frame_length) / cfg.hop_length + 1);
  }
}

TEST_CASE("power_spectrogram of zero frames is zero") {
  const DTensor power = power_spectrogram(DTensor({3, 128}));
  CHECK(power.dim(1) == 65);
  for (double v : power.data) CHECK(v == 0.0);
}

TEST_CASE("power_spectrogram matches naive DFT oracle on random frames") {
  Rng rng(4);
  for (const int L : {256, 2048, 300 /* non power of two */}) {
    DspConfig cfg;
    cfg.frame_length = L;
    cfg.hop_length = L;
    const auto sig = random_signal(static_cast<std::size_t>(3 * L), rng);
    const DTensor frames = frame_signal(sig, cfg);
    const DTensor power = power_spectrogram(frames);
    for (int t = 0; t < frames.dim(0); ++t) {
      const auto expected =
          oracles::naive_dft_power(frames.data.data() + static_cast<std::size_t>(t) * L, L);
      for (int k = 0; k <= L / 2; ++k) {
        const double scale = std::max({1.0, std::abs(expected[k]), std::abs(power(t, k))});
        CHECK(std::abs(power(t, k) - expected[k]) / scale < 1e-6);
      }
    }
  }
}

TEST_CASE("windowed sine at an exact bin peaks at that bin") {
  DspConfig cfg;
  cfg.frame_length = 512;
  cfg.hop_length = 512;
  const int k0 = 37;
  std::vector<double> sig(512);
  for (int n = 0; n < 512; ++n) sig[n] = std::sin(2.0 * oracles::kPi * k0 * n / 512.0);
  const DTensor power = power_spectrogram(frame_signal(sig, cfg));
  int argmax = 0;
  for (int k = 0; k <= 256; ++k) {
    if (power(0, k) > power(0, argmax)) argmax = k;
  }
  CHECK(argmax == k0);
}

TEST_CASE("numerical Parseval identity on random frames") {
  Rng rng(5);
  DspConfig cfg;
  cfg.frame_length = 1024;
  cfg.hop_length = 256;
  const auto sig = random_signal(8192, rng);
  const DTensor frames = frame_signal(sig, cfg);
  const DTensor power = power_spectrogram(frames);
  const int L = cfg.frame_length;
  for (int t = 0; t < frames.dim(0); ++t) {
    double time_energy = 0.0;
    for (int n = 0; n < L; ++n) time_energy += frames(t, n) * frames(t, n);
    // one-sided bins: weights 1 at DC and Nyquist, 2 elsewhere, all over L
    double freq_energy = power(t, 0) + power(t, L / 2);
    for (int k = 1; k < L / 2; ++k) freq_energy += 2.0 * power(t, k);
    freq_energy /= L;
    CHECK(std::abs(freq_energy - time_energy) / std::max(1.0, time_energy) < 1e-6);
  }
}

TEST_CASE("power_to_db known values and floor") {
  DTensor p({1, 3}, {1.0, 0.01, 0.0});
  const DTensor db = power_to_db(p, -80.0);
  CHECK(db(0, 0) == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(db(0, 1) == doctest::Approx(-20.0).epsilon(1e-8));
  CHECK(db(0, 2) == doctest::Approx(-80.0));
}

TEST_CASE("spectrogram_image handles constant input") {
  const DTensor img = spectrogram_image(DTensor::full({10, 20}, 3.5), 64);
  CHECK(img.dim(0) == 64);
  CHECK(img.dim(1) == 64);
  for (double v : img.data) CHECK(v == 0.0);
}

TEST_CASE("spectrogram_image on already-64x64 input is a min-max rescale") {
  Rng rng(6);
  DTensor m({64, 64});
  oracles::fill_uniform(m, rng, -30.0, 10.0);
  const DTensor img = spectrogram_image(m, 64);
  const double lo = *std::min_element(m.data.begin(), m.data.end());
  const double hi = *std::max_element(m.data.begin(), m.data.end());
  for (std::size_t i = 0; i < m.data.size(); ++i) {
    CHECK(img.data[i] == doctest::Approx((m.data[i] - lo) / (hi - lo)).epsilon(1e-12));
  }
}

TEST_CASE("bilinear resize matches the per-pixel oracle") {
  DTensor m({128, 618});
  for (int i = 0; i < 128; ++i) {
    for (int j = 0; j < 618; ++j) m(i, j) = 0.37 * i - 0.11 * j + 0.001 * i * j;
  }
  const DTensor out = resize_bilinear(m, 64, 64);
  for (int i = 0; i < 64; ++i) {
    for (int j = 0; j < 64; ++j) {
      CHECK(out(i, j) == doctest::Approx(oracles::bilinear_at(m, 64, 64, i, j)).epsilon(1e-6));
    }
  }
  // also on a random matrix
  Rng rng(7);
  DTensor r({31, 17});
  oracles::fill_uniform(r, rng, -5.0, 5.0);
  const DTensor out2 = resize_bilinear(r, 64, 64);
  for (int i = 0; i < 64; i += 7) {
    for (int j = 0; j < 64; j += 5) {
      CHECK(out2(i, j) ==
            doctest::Approx(oracles::bilinear_at(r, 64, 64, i, j)).epsilon(1e-6));
    }
  }
}

TEST_CASE("spectrogram_image output stays within [0,1]") {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    DTensor m({5 + rng.uniform_int(60), 5 + rng.uniform_int(60)});
    oracles::fill_uniform(m, rng, -80.0, 0.0);
    const DTensor img = spectrogram_image(m, 64);
    for (double v : img.data) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("mel scale formula") {
  CHECK(hz_to_mel(700.0) == doctest::Approx(2595.0 * std::log10(2.0)).epsilon(1e-12));
  CHECK(hz_to_mel(700.0) == doctest::Approx(781.17).epsilon(1e-4));
  CHECK(mel_to_hz(hz_to_mel(1234.5)) == doctest::Approx(1234.5).epsilon(1e-9));
}

TEST_CASE("mel filterbank triangles") {
  DspConfig cfg;  // 40 mels over 0..8000 at L=2048
  const DTensor fb = mel_filterbank(cfg);
  CHECK(fb.dim(0) == 40);
  CHECK(fb.dim(1) == 1025);

  for (int m = 0; m < fb.dim(0); ++m) {
    bool any_positive = false;
    for (int k = 0; k < fb.dim(1); ++k) {
      CHECK(fb(m, k) >= 0.0);
      if (fb(m, k) > 0.0) any_positive = true;
    }
    CHECK(any_positive);
  }

  // center frequencies (peak position) strictly increase
  int prev_peak = -1;
  for (int m = 0; m < fb.dim(0); ++m) {
    int peak = 0;
    for (int k = 1; k < fb.dim(1); ++k) {
      if (fb(m, k) > fb(m, peak)) peak = k;
    }
    CHECK(peak > prev_peak);
    prev_peak = peak;
  }
}

TEST_CASE("mel filterbank rejects too many bands for the resolution") {
  DspConfig cfg;
  cfg.frame_length = 64;
  cfg.hop_length = 32;
  cfg.n_mels = 60;  // 33 bins cannot host 60 filters
  cfg.mfcc_count = 10;
  CHECK_THROWS_AS(mel_filterbank(cfg), std::runtime_error);
}

TEST_CASE("mfcc of a zero spectrum is the DCT of a constant") {
  DspConfig cfg = small_config();
  const DTensor fb = mel_filterbank(cfg);
  const DTensor power({2, cfg.frame_length / 2 + 1});
  const DTensor coeffs = mfcc(power, fb, cfg.mfcc_count);
  const double expected0 = std::log(kLogEps) * std::sqrt(static_cast<double>(cfg.n_mels));
  for (int t = 0; t < 2; ++t) {
    CHECK(coeffs(t, 0) == doctest::Approx(expected0).epsilon(1e-9));
    for (int k = 1; k < cfg.mfcc_count; ++k) {
      CHECK(std::abs(coeffs(t, k)) < 1e-9);
    }
  }
}

TEST_CASE("mfcc matches the brute-force oracle") {
  Rng rng(9);
  DspConfig cfg = small_config();
  const DTensor fb = mel_filterbank(cfg);
  const auto sig = random_signal(2048, rng);
  const DTensor power = power_spectrogram(frame_signal(sig, cfg));
  const DTensor coeffs = mfcc(power, fb, cfg.mfcc_count);
  CHECK(coeffs.dim(1) == cfg.mfcc_count);
  for (int t = 0; t < power.dim(0); ++t) {
    std::vector<double> row(static_cast<std::size_t>(power.dim(1)));
    for (int k = 0; k < power.dim(1); ++k) row[k] = power(t, k);
    const auto expected = oracles::brute_mfcc_frame(row, fb, cfg.mfcc_count, kLogEps);
    for (int k = 0; k < cfg.mfcc_count; ++k) {
      const double scale = std::max({1.0, std::abs(expected[k]), std::abs(coeffs(t, k))});
      CHECK(std::abs(coeffs(t, k) - expected[k]) / scale < 1e-6);
    }
  }
}

TEST_CASE("default config keeps 20 coefficients") {
  DspConfig cfg;
  Rng rng(10);
  const auto sig = random_signal(16000, rng);
  const DTensor power = power_spectrogram(frame_signal(sig, cfg));
  const DTensor coeffs = mfcc(power, mel_filterbank(cfg), cfg.mfcc_count);
  CHECK(coeffs.dim(1) == 20);
}

TEST_CASE("extract_features yields one pair per channel, deterministically") {
  DspConfig cfg = small_config();
  Rng rng(11);
  data::AudioSegment seg;
  seg.sample_rate = 16000;
  seg.channels.assign(4, random_signal(4000, rng));
  const auto features = extract_features(seg, cfg);
  REQUIRE(features.size() == 4);
  // identical channels give identical features
  for (std::size_t c = 1; c < 4; ++c) {
    CHECK(features[c].image.data == features[0].image.data);
    CHECK(features[c].mfcc.data == features[0].mfcc.data);
  }
  // bit-deterministic across calls
  const auto again = extract_features(seg, cfg);
  CHECK(again[0].image.data == features[0].image.data);
  CHECK(again[0].mfcc.data == features[0].mfcc.data);
}

TEST_CASE("extract_features shapes at 10 s / 16 kHz defaults") {
  DspConfig cfg;
  Rng rng(12);
  data::AudioSegment seg;
  seg.sample_rate = 16000;
  std::vector<double> ch(160000);
  for (double& v : ch) v = rng.uniform(-0.5, 0.5);
  seg.channels = {ch};
  const auto features = extract_features(seg, cfg);
  REQUIRE(features.size() == 1);
  CHECK(features[0].mfcc.dim(0) == 309);
  CHECK(features[0].mfcc.dim(1) == 20);
  CHECK(features[0].image.dim(0) == 64);
  CHECK(features[0].image.dim(1) == 64);
}
