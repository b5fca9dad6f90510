#pragma once

#include <array>
#include <string>
#include <string_view>

namespace scene::data {

/// The nine DCASE 2018 Task 5 domestic activity classes. Integer ids are
/// fixed in this order and index every confusion matrix.
enum class ClassLabel : int {
  Absence = 0,
  Cooking = 1,
  Dishwashing = 2,
  Eating = 3,
  Other = 4,
  SocialActivity = 5,
  VacuumCleaning = 6,
  WatchingTV = 7,
  Working = 8,
};

inline constexpr int kNumClasses = 9;

const std::array<std::string_view, kNumClasses>& class_names();
const std::array<std::string_view, kNumClasses>& class_codes();

std::string_view to_string(ClassLabel label);
std::string_view to_code(ClassLabel label);

/// Parses a full class name ("Cooking") or short code ("CO").
/// Throws std::runtime_error on anything else.
ClassLabel label_from_string(std::string_view text);

inline int label_id(ClassLabel label) { return static_cast<int>(label); }

}  // namespace scene::data
