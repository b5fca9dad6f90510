#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "scene/data/audio.hpp"
#include "scene/data/manifest.hpp"

namespace scene::data {

struct SyntheticConfig {
  int n_per_class = 10;
  double duration_s = 10.0;  // 1.0 in fast-test mode
  int sample_rate = 16000;
  int channels = 4;
  std::uint64_t seed = 0;
};

struct SyntheticDataset {
  std::vector<ManifestEntry> entries;   // paths are relative, e.g. audio/CO_003.wav
  std::vector<AudioSegment> segments;   // parallel to entries
};

/// One synthetic segment. Each class id has a distinct spectral signature
/// (tones, chords, or noise bands); channels share the waveform up to a
/// small per-channel gain jitter. Byte-deterministic for fixed arguments.
AudioSegment synthesize_segment(int class_id, std::uint64_t seed, double duration_s,
                                int sample_rate, int channels);

/// Balanced nine-class corpus held in memory.
SyntheticDataset generate_synthetic_dataset(const SyntheticConfig& cfg);

/// Writes the corpus as WAV files plus manifest.tsv under out_dir.
void export_wav_corpus(const SyntheticDataset& dataset,
                       const std::filesystem::path& out_dir);

}  // namespace scene::data
