#include "scene/data/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "scene/data/wav.hpp"
#include "scene/rng.hpp"

namespace scene::data {

namespace {

constexpr double kTau = 2.0 * std::numbers::pi;

struct Partial {
  double freq;
  double amp;
};

struct NoiseBand {
  double f_lo = 0.0;
  double f_hi = 0.0;
  double amp = 0.0;
};

struct ClassSignature {
  std::vector<Partial> partials;
  NoiseBand band;
};

/// Spectrally well-separated signatures so mean-MFCC centroids stay apart.
const ClassSignature& signature(int class_id) {
  static const std::vector<ClassSignature> sigs = {
      /* Absence        */ {{{220.0, 0.45}}, {}},
      /* Cooking        */ {{{440.0, 0.30}, {880.0, 0.25}}, {}},
      /* Dishwashing    */ {{{330.0, 0.22}, {660.0, 0.20}, {990.0, 0.18}}, {}},
      /* Eating         */ {{{587.0, 0.20}, {740.0, 0.20}, {932.0, 0.18}}, {}},
      /* Other          */ {{}, {800.0, 1600.0, 0.40}},
      /* SocialActivity */ {{{1245.0, 0.30}}, {200.0, 420.0, 0.22}},
      /* VacuumCleaning */ {{}, {2500.0, 4000.0, 0.42}},
      /* WatchingTV     */ {{{1760.0, 0.25}, {2217.0, 0.22}}, {}},
      /* Working        */ {{{2960.0, 0.35}}, {5000.0, 6000.0, 0.18}},
  };
  return sigs[static_cast<std::size_t>(class_id)];
}

}  // namespace

AudioSegment synthesize_segment(int class_id, std::uint64_t seed, double duration_s,
                                int sample_rate, int channels) {
  if (class_id < 0 || class_id >= kNumClasses) {
    throw std::invalid_argument("class_id must be in [0, 9)");
  }
  if (channels < 1 || channels > 4) throw std::invalid_argument("channels must be 1-4");
  const auto n = static_cast<std::size_t>(duration_s * sample_rate);
  Rng rng(Rng::mix(seed, 0xacc0 + static_cast<std::uint64_t>(class_id)));

  const ClassSignature& sig = signature(class_id);
  const double detune = 1.0 + 0.01 * rng.uniform(-1.0, 1.0);

  std::vector<double> base(n, 0.0);
  for (const Partial& p : sig.partials) {
    const double phase = rng.uniform(0.0, kTau);
    const double w = kTau * p.freq * detune / sample_rate;
    for (std::size_t t = 0; t < n; ++t) base[t] += p.amp * std::sin(w * t + phase);
  }
  if (sig.band.amp > 0.0) {
    // band-limited noise: a sum of random-phase sinusoids inside the band
    constexpr int kBandTones = 40;
    const double amp = sig.band.amp / std::sqrt(static_cast<double>(kBandTones));
    for (int k = 0; k < kBandTones; ++k) {
      const double f = rng.uniform(sig.band.f_lo, sig.band.f_hi);
      const double phase = rng.uniform(0.0, kTau);
      const double w = kTau * f / sample_rate;
      for (std::size_t t = 0; t < n; ++t) base[t] += amp * std::sin(w * t + phase);
    }
  }

  AudioSegment seg;
  seg.sample_rate = sample_rate;
  seg.label = static_cast<ClassLabel>(class_id);
  seg.channels.resize(static_cast<std::size_t>(channels));
  for (int c = 0; c < channels; ++c) {
    const double gain = 1.0 + 0.05 * rng.uniform(-1.0, 1.0);
    auto& ch = seg.channels[static_cast<std::size_t>(c)];
    ch.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
      ch[t] = gain * base[t] + 0.002 * rng.uniform(-1.0, 1.0);
    }
  }
  return seg;
}

SyntheticDataset generate_synthetic_dataset(const SyntheticConfig& cfg) {
  SyntheticDataset out;
  for (int c = 0; c < kNumClasses; ++c) {
    for (int i = 0; i < cfg.n_per_class; ++i) {
      const std::uint64_t seg_seed =
          Rng::mix(cfg.seed, static_cast<std::uint64_t>(c) * 100000u +
                                 static_cast<std::uint64_t>(i));
      AudioSegment seg = synthesize_segment(c, seg_seed, cfg.duration_s, cfg.sample_rate,
                                            cfg.channels);
      char name[64];
      std::snprintf(name, sizeof(name), "audio/%s_%03d.wav",
                    std::string(class_codes()[c]).c_str(), i);
      ManifestEntry e;
      e.path = name;
      e.label = static_cast<ClassLabel>(c);
      e.session = "synth" + std::to_string(c);
      out.entries.push_back(std::move(e));
      out.segments.push_back(std::move(seg));
    }
  }
  return out;
}

void export_wav_corpus(const SyntheticDataset& dataset,
                       const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir / "audio");
  for (std::size_t i = 0; i < dataset.entries.size(); ++i) {
    write_wav(out_dir / dataset.entries[i].path, dataset.segments[i]);
  }
  save_manifest(dataset.entries, out_dir / "manifest.tsv");
}

}  // namespace scene::data
