#pragma once

#include <vector>

#include "scene/data/audio.hpp"
#include "scene/tensor.hpp"

namespace scene::dsp {

/// Feature extraction settings. Defaults: 2048/512 framing, 64x64 images,
/// 40 mel bands, first 20 MFCCs, 16 kHz input.
struct DspConfig {
  int frame_length = 2048;  // L, samples
  int hop_length = 512;     // H, samples
  int image_size = 64;      // square spectrogram image side
  int n_mels = 40;
  int mfcc_count = 20;      // M, coefficients kept
  int sample_rate = 16000;  // Hz
  double db_floor = -80.0;  // dB clamp
  double fmin = 0.0;        // Hz, filterbank lower edge
  double fmax = 8000.0;     // Hz, filterbank upper edge

  void validate() const;
};

/// log/dB epsilon guarding log(0)
inline constexpr double kLogEps = 1e-10;

/// Periodic Hann window of the given length.
std::vector<double> hann_window(int length);

/// Slices the signal into hopped frames and applies the Hann window.
/// Output is [n_frames x L] with n_frames = floor((len - L) / H) + 1.
/// Throws if the signal is shorter than one frame.
DTensor frame_signal(const std::vector<double>& signal, const DspConfig& cfg);

/// Squared-magnitude one-sided DFT per frame: [n_frames x (L/2 + 1)].
DTensor power_spectrogram(const DTensor& frames);

/// 10*log10(p + eps), clamped below at db_floor.
DTensor power_to_db(const DTensor& power, double db_floor);

/// Bilinear resize of a matrix (corner-aligned sampling).
DTensor resize_bilinear(const DTensor& m, int out_rows, int out_cols);

/// Resizes a dB matrix to image_size x image_size and min-max normalizes it
/// to [0, 1]. A constant input maps to all zeros.
DTensor spectrogram_image(const DTensor& db, int image_size);

double hz_to_mel(double hz);
double mel_to_hz(double mel);

/// Triangular mel filters, [n_mels x (L/2 + 1)], centers equally spaced on
/// the mel scale between fmin and fmax. Throws if the FFT resolution is too
/// coarse for the requested band count (a filter would cover no bins).
DTensor mel_filterbank(const DspConfig& cfg);

/// Per frame: mel energies -> log -> orthonormal DCT-II, keeping the first
/// mfcc_count coefficients. Output [n_frames x M].
DTensor mfcc(const DTensor& power, const DTensor& filterbank, int mfcc_count);

struct FeaturePair {
  DTensor image;  // [image_size x image_size], values in [0, 1]
  DTensor mfcc;   // [n_frames x M]
};

/// Runs the full pipeline independently on every channel of the segment.
std::vector<FeaturePair> extract_features(const data::AudioSegment& segment,
                                          const DspConfig& cfg);

}  // namespace scene::dsp
