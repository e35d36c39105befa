#pragma once

#include <span>

namespace mecsim::detail {

struct EmbeddedPreset {
  const char* name;
  const char* json;
};

// Generated at configure time from presets/*.json.
std::span<const EmbeddedPreset> embedded_presets();

}  // namespace mecsim::detail
