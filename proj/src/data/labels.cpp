#include "scene/data/labels.hpp"

#include <stdexcept>

namespace scene::data {

const std::array<std::string_view, kNumClasses>& class_names() {
  static const std::array<std::string_view, kNumClasses> names = {
      "Absence",        "Cooking",        "Dishwashing",
      "Eating",         "Other",          "SocialActivity",
      "VacuumCleaning", "WatchingTV",     "Working",
  };
  return names;
}

const std::array<std::string_view, kNumClasses>& class_codes() {
  static const std::array<std::string_view, kNumClasses> codes = {
      "AB", "CO", "DW", "EA", "OT", "SA", "VC", "WT", "WO",
  };
  return codes;
}

std::string_view to_string(ClassLabel label) {
  return class_names()[static_cast<std::size_t>(label)];
}

std::string_view to_code(ClassLabel label) {
  return class_codes()[static_cast<std::size_t>(label)];
}

ClassLabel label_from_string(std::string_view text) {
  for (int i = 0; i < kNumClasses; ++i) {
    if (text == class_names()[i] || text == class_codes()[i]) {
      return static_cast<ClassLabel>(i);
    }
  }
  throw std::runtime_error("unknown class label: '" + std::string(text) + "'");
}

}  // namespace scene::data
