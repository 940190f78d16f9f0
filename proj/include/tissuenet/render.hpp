#pragma once

#include <string>

#include "tissuenet/bundle.hpp"

namespace tissuenet {

/// Static SVG snapshot of a bundle state. Grid models are drawn as square tiles
/// or hexagons at their coordinates; graph models use a force-directed layout
/// with a fixed seed, so the output is byte-for-byte reproducible.
std::string render_svg(const BundleSpec& spec, const BundleState& state);

}  // namespace tissuenet
