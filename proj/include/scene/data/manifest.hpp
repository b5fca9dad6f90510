#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "scene/data/labels.hpp"

namespace scene::data {

enum class Split { Unassigned, Train, Val, Test };

std::string to_string(Split split);

/// One dataset row: an audio file, its class, and the recording session it
/// came from (kept so a session-disjoint split can be layered on later).
struct ManifestEntry {
  std::string path;
  ClassLabel label = ClassLabel::Absence;
  std::string session;
  Split split = Split::Unassigned;
};

/// Reads a TSV manifest (`path<TAB>label<TAB>session`, with that header).
/// Malformed rows and unknown labels raise errors naming the row.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path);

void save_manifest(const std::vector<ManifestEntry>& entries,
                   const std::filesystem::path& path);

}  // namespace scene::data
