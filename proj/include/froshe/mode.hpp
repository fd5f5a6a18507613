#pragma once

#include <string_view>

namespace froshe {

enum class ShepherdMode { Collecting, Herding };

inline std::string_view to_string(ShepherdMode m) {
  return m == ShepherdMode::Collecting ? "collecting" : "herding";
}

}  // namespace froshe
