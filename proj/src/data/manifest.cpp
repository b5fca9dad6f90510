#include "scene/data/manifest.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scene::data {

namespace {
constexpr const char* kHeader = "path\tlabel\tsession";
}

std::string to_string(Split split) {
  switch (split) {
    case Split::Unassigned: return "unassigned";
    case Split::Train: return "train";
    case Split::Val: return "val";
    case Split::Test: return "test";
  }
  throw std::logic_error("unreachable split tag");
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("manifest not found: " + path.string());

  std::vector<ManifestEntry> entries;
  std::string line;
  int row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (row == 1 && line == kHeader) continue;

    std::string fields[3];
    int n_fields = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == '\t') {
        if (n_fields < 3) fields[n_fields] = line.substr(start, i - start);
        ++n_fields;
        start = i + 1;
      }
    }
    if (n_fields != 3 || fields[0].empty()) {
      throw std::runtime_error("manifest row " + std::to_string(row) +
                               " is malformed (want path<TAB>label<TAB>session): '" + line +
                               "'");
    }
    ManifestEntry e;
    e.path = fields[0];
    try {
      e.label = label_from_string(fields[1]);
    } catch (const std::exception&) {
      throw std::runtime_error("manifest row " + std::to_string(row) +
                               " has unknown label '" + fields[1] + "'");
    }
    e.session = fields[2];
    entries.push_back(std::move(e));
  }
  return entries;
}

void save_manifest(const std::vector<ManifestEntry>& entries,
                   const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write manifest: " + path.string());
  out << kHeader << "\n";
  for (const auto& e : entries) {
    out << e.path << "\t" << to_string(e.label) << "\t" << e.session << "\n";
  }
}

}  // namespace scene::data
