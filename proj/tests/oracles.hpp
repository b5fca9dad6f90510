// Test-only reference implementations, kept deliberately naive and
// independent of the library's computation paths.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "scene/rng.hpp"
#include "scene/tensor.hpp"

namespace oracles {

inline constexpr double kPi = std::numbers::pi;

/// O(L^2) DFT power, bins 0..L/2, straight from the definition.
inline std::vector<double> naive_dft_power(const double* frame, int length) {
  std::vector<double> power(static_cast<std::size_t>(length / 2) + 1);
  for (int k = 0; k <= length / 2; ++k) {
    double re = 0.0, im = 0.0;
    for (int n = 0; n < length; ++n) {
      const double ang = -2.0 * kPi * k * n / length;
      re += frame[n] * std::cos(ang);
      im += frame[n] * std::sin(ang);
    }
    power[k] = re * re + im * im;
  }
  return power;
}

/// Brute-force MFCC of one power-spectrum row: mel multiply, log, then the
/// DCT-II definition written out as a double loop (orthonormal scaling).
inline std::vector<double> brute_mfcc_frame(const std::vector<double>& power_row,
                                            const scene::DTensor& filterbank, int n_coeffs,
                                            double eps) {
  const int n_mels = filterbank.dim(0);
  std::vector<double> log_e(static_cast<std::size_t>(n_mels));
  for (int m = 0; m < n_mels; ++m) {
    double e = 0.0;
    for (int k = 0; k < filterbank.dim(1); ++k) e += filterbank(m, k) * power_row[k];
    log_e[m] = std::log(e + eps);
  }
  std::vector<double> coeffs(static_cast<std::size_t>(n_coeffs));
  for (int k = 0; k < n_coeffs; ++k) {
    double acc = 0.0;
    for (int n = 0; n < n_mels; ++n) {
      acc += log_e[n] * std::cos(kPi * k * (2.0 * n + 1.0) / (2.0 * n_mels));
    }
    const double scale = k == 0 ? std::sqrt(1.0 / n_mels) : std::sqrt(2.0 / n_mels);
    coeffs[k] = scale * acc;
  }
  return coeffs;
}

/// Direct bilinear interpolation at one output pixel (corner-aligned).
inline double bilinear_at(const scene::DTensor& m, int out_rows, int out_cols, int i, int j) {
  const int in_rows = m.dim(0), in_cols = m.dim(1);
  const double sy = out_rows > 1 ? static_cast<double>(i) * (in_rows - 1) / (out_rows - 1)
                                 : (in_rows - 1) / 2.0;
  const double sx = out_cols > 1 ? static_cast<double>(j) * (in_cols - 1) / (out_cols - 1)
                                 : (in_cols - 1) / 2.0;
  const int y0 = static_cast<int>(std::floor(sy));
  const int x0 = static_cast<int>(std::floor(sx));
  const int y1 = std::min(y0 + 1, in_rows - 1);
  const int x1 = std::min(x0 + 1, in_cols - 1);
  const double fy = sy - y0, fx = sx - x0;
  return (1 - fy) * (1 - fx) * m(y0, x0) + (1 - fy) * fx * m(y0, x1) +
         fy * (1 - fx) * m(y1, x0) + fy * fx * m(y1, x1);
}

/// Six-nested-loop 2-D convolution (zero padding), out[co][oy][ox].
inline scene::TensorT<double> naive_conv2d(const scene::TensorT<double>& x,
                                           const scene::TensorT<double>& w,
                                           const scene::TensorT<double>& b, int pad_top,
                                           int pad_left, int h_out, int w_out, int stride) {
  const int c_out = w.dim(0), c_in = w.dim(1), kh = w.dim(2), kw = w.dim(3);
  scene::TensorT<double> out({c_out, h_out, w_out});
  for (int co = 0; co < c_out; ++co) {
    for (int oy = 0; oy < h_out; ++oy) {
      for (int ox = 0; ox < w_out; ++ox) {
        double acc = b(co);
        for (int ci = 0; ci < c_in; ++ci) {
          for (int ki = 0; ki < kh; ++ki) {
            for (int kj = 0; kj < kw; ++kj) {
              const int iy = oy * stride + ki - pad_top;
              const int ix = ox * stride + kj - pad_left;
              if (iy >= 0 && iy < x.dim(1) && ix >= 0 && ix < x.dim(2)) {
                acc += x(ci, iy, ix) * w(co, ci, ki, kj);
              }
            }
          }
        }
        out(co, oy, ox) = acc;
      }
    }
  }
  return out;
}

/// Naive valid 1-D convolution over [T,C] input, out [T_out, C_out].
inline scene::TensorT<double> naive_conv1d(const scene::TensorT<double>& x,
                                           const scene::TensorT<double>& w,
                                           const scene::TensorT<double>& b) {
  const int c_out = w.dim(0), c_in = w.dim(1), k = w.dim(2);
  const int t_out = x.dim(0) - k + 1;
  scene::TensorT<double> out({t_out, c_out});
  for (int t = 0; t < t_out; ++t) {
    for (int co = 0; co < c_out; ++co) {
      double acc = b(co);
      for (int ci = 0; ci < c_in; ++ci) {
        for (int kj = 0; kj < k; ++kj) acc += x(t + kj, ci) * w(co, ci, kj);
      }
      out(t, co) = acc;
    }
  }
  return out;
}

/// Central finite differences on every element of `param`, against the
/// analytic gradient. `loss` must recompute the scalar objective from
/// current parameter values. Relative error per element must stay within
/// tol; near-zero pairs pass on an absolute threshold.
inline double max_rel_error_finite_diff(scene::TensorT<double>& param,
                                        const scene::TensorT<double>& analytic_grad,
                                        const std::function<double()>& loss,
                                        double step = 1e-3) {
  double worst = 0.0;
  for (std::size_t i = 0; i < param.data.size(); ++i) {
    const double saved = param.data[i];
    param.data[i] = saved + step;
    const double up = loss();
    param.data[i] = saved - step;
    const double down = loss();
    param.data[i] = saved;
    const double numeric = (up - down) / (2.0 * step);
    const double analytic = analytic_grad.data[i];
    const double scale = std::max(std::abs(numeric), std::abs(analytic));
    if (scale < 1e-7) continue;  // both effectively zero
    worst = std::max(worst, std::abs(numeric - analytic) / scale);
  }
  return worst;
}

/// Fills a tensor with uniform values in [lo, hi).
inline void fill_uniform(scene::TensorT<double>& t, scene::Rng& rng, double lo, double hi) {
  for (double& v : t.data) v = rng.uniform(lo, hi);
}

/// Fills a tensor with a shuffled grid of well-separated values (gap 0.1)
/// plus sub-tolerance jitter, so argmax-style layers have no near-ties.
inline void fill_distinct(scene::TensorT<double>& t, scene::Rng& rng) {
  const std::size_t n = t.data.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order.begin(), order.end());
  for (std::size_t i = 0; i < n; ++i) {
    t.data[order[i]] = 0.1 * static_cast<double>(i) - 0.05 * static_cast<double>(n) +
                       rng.uniform(-1e-6, 1e-6);
  }
}

}  // namespace oracles
