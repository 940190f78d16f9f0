#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tissuenet/types.hpp"

namespace tissuenet {

/// SQUARE is presented by generators e, n; TRIANGULAR by e, n, nw with n - nw = e.
enum class GridKind { square, triangular };

enum class Generator { e, n, nw };

/// Grid location in the (e, n) basis. Triangular words are reduced by nw -> n - e,
/// so two words denote the same point iff their coordinates are equal.
struct GbfCoord {
  int a = 0;  // coefficient of e
  int b = 0;  // coefficient of n

  auto operator<=>(const GbfCoord&) const = default;
};

struct WordTerm {
  Generator generator;
  int coefficient;
};

/// Throws SpatialError(unknown_generator) for anything but "e", "n", "nw".
Generator generator_from_name(std::string_view name);

/// Sum of the word's terms in canonical coordinates. Throws SpatialError if a
/// generator does not belong to `kind`.
GbfCoord normalize(std::span<const WordTerm> word, GridKind kind);

/// Word metric: fewest unit generator steps between two points.
unsigned distance(GbfCoord x, GbfCoord y, GridKind kind);

/// The unit moves (generators and their inverses) of a grid kind.
std::span<const GbfCoord> unit_moves(GridKind kind);

/// "(a,b)"
std::string format_location(GbfCoord c);
std::optional<GbfCoord> parse_location(std::string_view text);

/// Spatial interface (theta, delta, eta) over grid locations. theta is kept as
/// an identifier-sorted list; delta and eta are derived on demand. Values are
/// immutable: allocate/free return updated copies.
class GbfInterface {
 public:
  explicit GbfInterface(GridKind kind, std::optional<unsigned> cutoff = std::nullopt)
      : kind_(kind), cutoff_(cutoff) {}

  GridKind kind() const { return kind_; }
  std::optional<unsigned> cutoff() const { return cutoff_; }
  const std::vector<std::pair<ModuleId, GbfCoord>>& theta() const { return theta_; }

  bool is_allocated(ModuleId i) const;
  std::vector<ModuleId> allocated() const;
  std::size_t size() const { return theta_.size(); }
  /// Throws SpatialError(unallocated_identifier).
  GbfCoord location(ModuleId i) const;
  std::optional<ModuleId> occupant(GbfCoord where) const;

  /// delta(i, j): 0 beyond the cutoff, 1/distance otherwise.
  double neighboring(ModuleId i, ModuleId j) const;
  /// eta(i): unoccupied locations at distance exactly 1, sorted.
  std::vector<GbfCoord> empty_neighbors(ModuleId i) const;
  /// Every other allocated module with delta > 0, with its distance.
  std::vector<std::pair<ModuleId, unsigned>> neighbors(ModuleId i) const;
  /// Same, seen from an arbitrary location; modules in `exclude` are skipped.
  std::vector<std::pair<ModuleId, unsigned>> neighbors_of_location(
      GbfCoord where, std::optional<ModuleId> exclude = std::nullopt) const;

  GbfInterface allocate(ModuleId i, GbfCoord where) const;
  GbfInterface free(ModuleId i) const;
  /// Moves `i` to an unoccupied location.
  GbfInterface move(ModuleId i, GbfCoord where) const;

  bool operator==(const GbfInterface&) const = default;

 private:
  GridKind kind_;
  std::optional<unsigned> cutoff_;
  std::vector<std::pair<ModuleId, GbfCoord>> theta_;
};

}  // namespace tissuenet
