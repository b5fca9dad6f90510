#include "scene/data/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace scene::data {

namespace {

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void write_u32(std::vector<unsigned char>& out, std::uint32_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
  out.push_back((v >> 16) & 0xff);
  out.push_back((v >> 24) & 0xff);
}

void write_u16(std::vector<unsigned char>& out, std::uint16_t v) {
  out.push_back(v & 0xff);
  out.push_back((v >> 8) & 0xff);
}

}  // namespace

AudioSegment read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open wav file: " + path.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());

  const std::string name = path.string();
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw std::runtime_error("not a RIFF/WAVE file: " + name);
  }

  bool have_fmt = false;
  std::uint16_t channels = 0, bits = 0, format = 0;
  std::uint32_t sample_rate = 0;
  std::size_t data_off = 0, data_len = 0;

  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t chunk_len = read_u32(bytes.data() + pos + 4);
    const unsigned char* chunk = bytes.data() + pos + 8;
    if (std::memcmp(bytes.data() + pos, "fmt ", 4) == 0) {
      if (chunk_len < 16 || pos + 8 + chunk_len > bytes.size()) {
        throw std::runtime_error("truncated fmt chunk: " + name);
      }
      format = read_u16(chunk);
      channels = read_u16(chunk + 2);
      sample_rate = read_u32(chunk + 4);
      bits = read_u16(chunk + 14);
      have_fmt = true;
    } else if (std::memcmp(bytes.data() + pos, "data", 4) == 0) {
      data_off = pos + 8;
      data_len = chunk_len;
      break;
    }
    pos += 8 + chunk_len + (chunk_len & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data_off == 0) throw std::runtime_error("missing fmt/data chunk: " + name);
  if (format != 1) throw std::runtime_error("non-PCM wav not supported: " + name);
  if (bits != 16) {
    throw std::runtime_error("unsupported bit depth " + std::to_string(bits) + ": " + name);
  }
  if (channels < 1 || channels > 4) {
    throw std::runtime_error("unsupported channel count " + std::to_string(channels) + ": " +
                             name);
  }
  if (data_off + data_len > bytes.size()) {
    throw std::runtime_error("truncated data chunk: " + name);
  }

  const std::size_t n_samples = data_len / 2 / channels;
  AudioSegment seg;
  seg.sample_rate = static_cast<int>(sample_rate);
  seg.channels.assign(channels, std::vector<double>(n_samples));
  const unsigned char* d = bytes.data() + data_off;
  for (std::size_t i = 0; i < n_samples; ++i) {
    for (int c = 0; c < channels; ++c) {
      const std::size_t off = (i * channels + c) * 2;
      const std::int16_t v = static_cast<std::int16_t>(d[off] | (d[off + 1] << 8));
      seg.channels[c][i] = static_cast<double>(v) / 32768.0;
    }
  }
  return seg;
}

void write_wav(const std::filesystem::path& path, const AudioSegment& segment) {
  segment.validate();
  const int channels = static_cast<int>(segment.channels.size());
  const std::size_t n_samples = segment.channels[0].size();
  const std::uint32_t data_len = static_cast<std::uint32_t>(n_samples * channels * 2);

  std::vector<unsigned char> out;
  out.reserve(44 + data_len);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  write_u32(out, 36 + data_len);
  out.insert(out.end(), {'W', 'A', 'V', 'E'});
  out.insert(out.end(), {'f', 'm', 't', ' '});
  write_u32(out, 16);
  write_u16(out, 1);  // PCM
  write_u16(out, static_cast<std::uint16_t>(channels));
  write_u32(out, static_cast<std::uint32_t>(segment.sample_rate));
  write_u32(out, static_cast<std::uint32_t>(segment.sample_rate * channels * 2));
  write_u16(out, static_cast<std::uint16_t>(channels * 2));
  write_u16(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  write_u32(out, data_len);

  for (std::size_t i = 0; i < n_samples; ++i) {
    for (int c = 0; c < channels; ++c) {
      const double scaled = std::round(segment.channels[c][i] * 32768.0);
      const auto v = static_cast<std::int16_t>(std::clamp(scaled, -32768.0, 32767.0));
      write_u16(out, static_cast<std::uint16_t>(v));
    }
  }

  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write wav file: " + path.string());
  f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
}

}  // namespace scene::data
