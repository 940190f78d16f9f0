#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "tissuenet/dsl.hpp"

namespace tissuenet::testing {

inline std::string source_path(const std::string& relative) {
  return std::string(TISSUENET_SOURCE_DIR) + "/" + relative;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Loads a model shipped in models/, failing loudly on diagnostics.
inline Model load_shipped(const std::string& name) {
  auto result = load_model(read_text(source_path("models/" + name)));
  if (!result.ok()) {
    std::string all;
    for (const auto& d : result.diagnostics) all += format_diagnostic(d, name) + "\n";
    throw std::runtime_error(all.empty() ? "cannot load " + name : all);
  }
  return std::move(*result.model);
}

inline Model load_text(const std::string& text) {
  auto result = load_model(text);
  if (!result.ok()) {
    std::string all;
    for (const auto& d : result.diagnostics) all += format_diagnostic(d, "<text>") + "\n";
    throw std::runtime_error(all);
  }
  return std::move(*result.model);
}

}  // namespace tissuenet::testing
