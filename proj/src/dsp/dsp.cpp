#include "scene/dsp/dsp.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace scene::dsp {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

/// Iterative radix-2 Cooley-Tukey, in place. size must be a power of two.
void fft_inplace(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  // bit-reversal permutation
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * kPi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

/// One-sided DFT of a real frame, bins 0..L/2. Uses the half-size complex
/// FFT packing trick when L is a power of two, otherwise a direct DFT.
std::vector<std::complex<double>> rdft_onesided(const double* x, int length) {
  const int half = length / 2;
  std::vector<std::complex<double>> out(half + 1);
  if (length >= 4 && length % 2 == 0 && is_pow2(length)) {
    // pack even/odd samples into a complex signal of half length
    std::vector<std::complex<double>> z(half);
    for (int n = 0; n < half; ++n) z[n] = {x[2 * n], x[2 * n + 1]};
    fft_inplace(z);
    for (int k = 0; k <= half; ++k) {
      const std::complex<double> zk = (k == half) ? z[0] : z[k];
      const std::complex<double> znk = std::conj(z[(half - k) % half]);
      const std::complex<double> even = 0.5 * (zk + znk);
      const std::complex<double> odd = std::complex<double>(0.0, -0.5) * (zk - znk);
      const double ang = -2.0 * kPi * k / length;
      out[k] = even + std::complex<double>(std::cos(ang), std::sin(ang)) * odd;
    }
  } else {
    for (int k = 0; k <= half; ++k) {
      std::complex<double> acc(0.0, 0.0);
      for (int n = 0; n < length; ++n) {
        const double ang = -2.0 * kPi * k * n / length;
        acc += x[n] * std::complex<double>(std::cos(ang), std::sin(ang));
      }
      out[k] = acc;
    }
  }
  return out;
}

}  // namespace

void DspConfig::validate() const {
  if (frame_length <= 0) throw std::runtime_error("frame_length must be > 0");
  if (hop_length <= 0 || hop_length > frame_length) {
    throw std::runtime_error("hop_length must satisfy 0 < H <= L");
  }
  if (image_size <= 0) throw std::runtime_error("image_size must be > 0");
  if (n_mels <= 0) throw std::runtime_error("n_mels must be > 0");
  if (mfcc_count <= 0 || mfcc_count > n_mels) {
    throw std::runtime_error("mfcc_count must satisfy 0 < M <= n_mels");
  }
  if (sample_rate <= 0) throw std::runtime_error("sample_rate must be > 0");
  if (!(fmin < fmax) || fmax > sample_rate / 2.0) {
    throw std::runtime_error("filterbank range must satisfy fmin < fmax <= sample_rate/2");
  }
}

std::vector<double> hann_window(int length) {
  std::vector<double> w(static_cast<std::size_t>(length));
  for (int n = 0; n < length; ++n) {
    w[n] = 0.5 - 0.5 * std::cos(2.0 * kPi * n / length);
  }
  return w;
}

DTensor frame_signal(const std::vector<double>& signal, const DspConfig& cfg) {
  cfg.validate();
  const int len = static_cast<int>(signal.size());
  const int L = cfg.frame_length;
  const int H = cfg.hop_length;
  if (len < L) {
    throw std::runtime_error("signal too short: " + std::to_string(len) +
                             " samples, need at least " + std::to_string(L));
  }
  const int n_frames = (len - L) / H + 1;
  const std::vector<double> window = hann_window(L);
  DTensor frames({n_frames, L});
  for (int i = 0; i < n_frames; ++i) {
    const double* src = signal.data() + static_cast<std::size_t>(i) * H;
    double* dst = frames.data.data() + static_cast<std::size_t>(i) * L;
    for (int n = 0; n < L; ++n) dst[n] = src[n] * window[n];
  }
  return frames;
}

DTensor power_spectrogram(const DTensor& frames) {
  if (frames.rank() != 2) throw std::runtime_error("frames must be 2-D");
  const int n_frames = frames.dim(0);
  const int L = frames.dim(1);
  const int bins = L / 2 + 1;
  DTensor power({n_frames, bins});
  for (int t = 0; t < n_frames; ++t) {
    const auto spec = rdft_onesided(frames.data.data() + static_cast<std::size_t>(t) * L, L);
    for (int k = 0; k < bins; ++k) power(t, k) = std::norm(spec[k]);
  }
  return power;
}

DTensor power_to_db(const DTensor& power, double db_floor) {
  DTensor db;
  db.shape = power.shape;
  db.data.resize(power.data.size());
  for (std::size_t i = 0; i < power.data.size(); ++i) {
    db.data[i] = std::max(10.0 * std::log10(power.data[i] + kLogEps), db_floor);
  }
  return db;
}

DTensor resize_bilinear(const DTensor& m, int out_rows, int out_cols) {
  if (m.rank() != 2) throw std::runtime_error("resize expects a matrix");
  const int in_rows = m.dim(0);
  const int in_cols = m.dim(1);
  DTensor out({out_rows, out_cols});
  for (int i = 0; i < out_rows; ++i) {
    const double sy = (out_rows > 1)
                          ? static_cast<double>(i) * (in_rows - 1) / (out_rows - 1)
                          : (in_rows - 1) / 2.0;
    const int y0 = static_cast<int>(std::floor(sy));
    const int y1 = std::min(y0 + 1, in_rows - 1);
    const double fy = sy - y0;
    for (int j = 0; j < out_cols; ++j) {
      const double sx = (out_cols > 1)
                            ? static_cast<double>(j) * (in_cols - 1) / (out_cols - 1)
                            : (in_cols - 1) / 2.0;
      const int x0 = static_cast<int>(std::floor(sx));
      const int x1 = std::min(x0 + 1, in_cols - 1);
      const double fx = sx - x0;
      out(i, j) = (1.0 - fy) * ((1.0 - fx) * m(y0, x0) + fx * m(y0, x1)) +
                  fy * ((1.0 - fx) * m(y1, x0) + fx * m(y1, x1));
    }
  }
  return out;
}

DTensor spectrogram_image(const DTensor& db, int image_size) {
  if (db.numel() == 0) throw std::runtime_error("empty dB matrix");
  DTensor img = resize_bilinear(db, image_size, image_size);
  const auto [lo_it, hi_it] = std::minmax_element(img.data.begin(), img.data.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (hi - lo < 1e-12) {
    img.fill(0.0);  // constant input: degenerate min-max maps to zeros
    return img;
  }
  const double inv = 1.0 / (hi - lo);
  for (double& v : img.data) v = (v - lo) * inv;
  return img;
}

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

DTensor mel_filterbank(const DspConfig& cfg) {
  cfg.validate();
  const int bins = cfg.frame_length / 2 + 1;
  const double bin_hz = static_cast<double>(cfg.sample_rate) / cfg.frame_length;
  const double mel_lo = hz_to_mel(cfg.fmin);
  const double mel_hi = hz_to_mel(cfg.fmax);

  // n_mels + 2 edge frequencies, equally spaced in mel
  std::vector<double> edges(static_cast<std::size_t>(cfg.n_mels) + 2);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const double mel = mel_lo + (mel_hi - mel_lo) * static_cast<double>(i) / (cfg.n_mels + 1);
    edges[i] = mel_to_hz(mel);
  }

  DTensor fb({cfg.n_mels, bins});
  for (int m = 0; m < cfg.n_mels; ++m) {
    const double f_lo = edges[m];
    const double f_c = edges[m + 1];
    const double f_hi = edges[m + 2];
    bool any = false;
    for (int k = 0; k < bins; ++k) {
      const double f = k * bin_hz;
      double w = 0.0;
      if (f > f_lo && f < f_c) {
        w = (f - f_lo) / (f_c - f_lo);
      } else if (f >= f_c && f < f_hi) {
        w = (f_hi - f) / (f_hi - f_c);
      }
      if (w > 0.0) any = true;
      fb(m, k) = w;
    }
    if (!any) {
      throw std::runtime_error(
          "mel filter " + std::to_string(m) +
          " covers no FFT bins; reduce n_mels or increase frame_length");
    }
  }
  return fb;
}

DTensor mfcc(const DTensor& power, const DTensor& filterbank, int mfcc_count) {
  if (power.rank() != 2 || filterbank.rank() != 2) {
    throw std::runtime_error("mfcc expects matrices");
  }
  if (power.dim(1) != filterbank.dim(1)) {
    throw std::runtime_error("filterbank bin count does not match spectrogram");
  }
  const int n_frames = power.dim(0);
  const int n_mels = filterbank.dim(0);
  if (mfcc_count <= 0 || mfcc_count > n_mels) {
    throw std::runtime_error("mfcc_count must satisfy 0 < M <= n_mels");
  }

  // orthonormal DCT-II basis, [M x n_mels]
  DTensor dct({mfcc_count, n_mels});
  const double s0 = std::sqrt(1.0 / n_mels);
  const double sk = std::sqrt(2.0 / n_mels);
  for (int k = 0; k < mfcc_count; ++k) {
    for (int n = 0; n < n_mels; ++n) {
      dct(k, n) = (k == 0 ? s0 : sk) * std::cos(kPi * k * (2.0 * n + 1.0) / (2.0 * n_mels));
    }
  }

  DTensor out({n_frames, mfcc_count});
  std::vector<double> log_e(static_cast<std::size_t>(n_mels));
  for (int t = 0; t < n_frames; ++t) {
    for (int m = 0; m < n_mels; ++m) {
      double e = 0.0;
      for (int k = 0; k < power.dim(1); ++k) e += filterbank(m, k) * power(t, k);
      log_e[m] = std::log(e + kLogEps);
    }
    for (int k = 0; k < mfcc_count; ++k) {
      double c = 0.0;
      for (int n = 0; n < n_mels; ++n) c += dct(k, n) * log_e[n];
      out(t, k) = c;
    }
  }
  return out;
}

std::vector<FeaturePair> extract_features(const data::AudioSegment& segment,
                                          const DspConfig& cfg) {
  segment.validate();
  const DTensor fb = mel_filterbank(cfg);
  std::vector<FeaturePair> out;
  out.reserve(segment.channels.size());
  for (const auto& channel : segment.channels) {
    const DTensor frames = frame_signal(channel, cfg);
    const DTensor power = power_spectrogram(frames);
    FeaturePair pair;
    pair.image = spectrogram_image(power_to_db(power, cfg.db_floor), cfg.image_size);
    pair.mfcc = mfcc(power, fb, cfg.mfcc_count);
    out.push_back(std::move(pair));
  }
  return out;
}

}  // namespace scene::dsp
