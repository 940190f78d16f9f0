#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tissuenet {

/// Identifier of a module (a cell) drawn from the finite universe {0, ..., N-1}.
enum class ModuleId : std::uint16_t {};

constexpr std::uint16_t to_index(ModuleId id) { return static_cast<std::uint16_t>(id); }
constexpr ModuleId module_id(unsigned value) { return ModuleId{static_cast<std::uint16_t>(value)}; }

inline std::string to_string(ModuleId id) { return std::to_string(to_index(id)); }

/// Level of a regulatory component. Ranges are capped so a level fits in 4 bits.
using Level = std::uint8_t;
inline constexpr Level kMaxLevel = 15;

/// Component levels of one network, indexed by declaration order.
using NetState = std::vector<Level>;

/// 1-based line/column of a construct in model text.
struct SourcePos {
  int line = 0;
  int column = 0;

  // Positions annotate syntax trees; they never take part in document equality.
  friend bool operator==(const SourcePos&, const SourcePos&) { return true; }
};

}  // namespace tissuenet
