#include "scene/container.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace scene {

static_assert(std::endian::native == std::endian::little,
              "container I/O assumes a little-endian host");

namespace {
constexpr char kMagic[4] = {'S', 'E', 'N', 'S'};
}

void write_container(const std::filesystem::path& path, const Container& container) {
  nlohmann::json header;
  header["meta"] = container.meta;
  header["tensors"] = nlohmann::json::array();
  std::uint64_t offset = 0;
  for (const auto& [name, tensor] : container.tensors) {
    header["tensors"].push_back(
        {{"name", name}, {"shape", tensor.shape}, {"offset", offset}});
    offset += tensor.numel() * sizeof(float);
  }
  const std::string header_bytes = header.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write container: " + path.string());
  out.write(kMagic, 4);
  const std::uint16_t version = kContainerVersion;
  out.write(reinterpret_cast<const char*>(&version), sizeof(version));
  const std::uint32_t header_len = static_cast<std::uint32_t>(header_bytes.size());
  out.write(reinterpret_cast<const char*>(&header_len), sizeof(header_len));
  out.write(header_bytes.data(), static_cast<std::streamsize>(header_bytes.size()));
  for (const auto& [name, tensor] : container.tensors) {
    out.write(reinterpret_cast<const char*>(tensor.data.data()),
              static_cast<std::streamsize>(tensor.numel() * sizeof(float)));
  }
  if (!out) throw std::runtime_error("short write on container: " + path.string());
}

Container read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("container not found: " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  const std::string name = path.string();

  if (bytes.size() < 10 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw std::runtime_error("corrupt container (bad magic): " + name);
  }
  std::uint16_t version;
  std::memcpy(&version, bytes.data() + 4, sizeof(version));
  if (version != kContainerVersion) {
    throw std::runtime_error("unsupported container version " + std::to_string(version) +
                             ": " + name);
  }
  std::uint32_t header_len;
  std::memcpy(&header_len, bytes.data() + 6, sizeof(header_len));
  if (10 + static_cast<std::size_t>(header_len) > bytes.size()) {
    throw std::runtime_error("corrupt container (truncated header): " + name);
  }

  nlohmann::json header;
  try {
    header = nlohmann::json::parse(bytes.begin() + 10, bytes.begin() + 10 + header_len);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("corrupt container (bad header JSON): " + name + ": " +
                             e.what());
  }

  Container c;
  const std::size_t data_start = 10 + header_len;
  try {
    c.meta = header.at("meta");
    for (const auto& entry : header.at("tensors")) {
      const auto tname = entry.at("name").get<std::string>();
      const auto shape = entry.at("shape").get<std::vector<int>>();
      const auto offset = entry.at("offset").get<std::uint64_t>();
      Tensor t(shape);
      const std::size_t nbytes = t.numel() * sizeof(float);
      if (data_start + offset + nbytes > bytes.size()) {
        throw std::runtime_error("corrupt container (truncated data for '" + tname +
                                 "'): " + name);
      }
      std::memcpy(t.data.data(), bytes.data() + data_start + offset, nbytes);
      c.tensors.emplace_back(tname, std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("corrupt container (malformed directory): " + name + ": " +
                             e.what());
  }
  return c;
}

}  // namespace scene
