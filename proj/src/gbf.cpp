#include "tissuenet/gbf.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdlib>

#include "tissuenet/error.hpp"

namespace tissuenet {

namespace {

constexpr std::array<GbfCoord, 4> kSquareMoves{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
// e, -e, n, -n, nw = n - e, -nw
constexpr std::array<GbfCoord, 6> kTriangularMoves{
    {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {-1, 1}, {1, -1}}};

[[noreturn]] void unallocated(ModuleId i) {
  throw SpatialError(SpatialError::Code::unallocated_identifier,
                     "module " + to_string(i) + " is not allocated");
}

}  // namespace

Generator generator_from_name(std::string_view name) {
  if (name == "e") return Generator::e;
  if (name == "n") return Generator::n;
  if (name == "nw") return Generator::nw;
  throw SpatialError(SpatialError::Code::unknown_generator,
                     "unknown generator '" + std::string(name) + "'");
}

GbfCoord normalize(std::span<const WordTerm> word, GridKind kind) {
  GbfCoord c;
  for (const auto& t : word) {
    switch (t.generator) {
      case Generator::e: c.a += t.coefficient; break;
      case Generator::n: c.b += t.coefficient; break;
      case Generator::nw:
        if (kind != GridKind::triangular) {
          throw SpatialError(SpatialError::Code::unknown_generator,
                             "generator 'nw' does not belong to the square grid");
        }
        c.a -= t.coefficient;
        c.b += t.coefficient;
        break;
    }
  }
  return c;
}

unsigned distance(GbfCoord x, GbfCoord y, GridKind kind) {
  int dx = y.a - x.a;
  int dy = y.b - x.b;
  if (kind == GridKind::square) return static_cast<unsigned>(std::abs(dx) + std::abs(dy));
  return static_cast<unsigned>((std::abs(dx) + std::abs(dy) + std::abs(dx + dy)) / 2);
}

std::span<const GbfCoord> unit_moves(GridKind kind) {
  if (kind == GridKind::square) return kSquareMoves;
  return kTriangularMoves;
}

std::string format_location(GbfCoord c) {
  return "(" + std::to_string(c.a) + "," + std::to_string(c.b) + ")";
}

std::optional<GbfCoord> parse_location(std::string_view text) {
  auto skip_ws = [&] {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  };
  auto expect = [&](char ch) {
    skip_ws();
    if (text.empty() || text.front() != ch) return false;
    text.remove_prefix(1);
    return true;
  };
  auto number = [&](int& out) {
    skip_ws();
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc{}) return false;
    text.remove_prefix(static_cast<std::size_t>(ptr - text.data()));
    return true;
  };
  GbfCoord c;
  if (!expect('(') || !number(c.a) || !expect(',') || !number(c.b) || !expect(')')) {
    return std::nullopt;
  }
  skip_ws();
  if (!text.empty()) return std::nullopt;
  return c;
}

bool GbfInterface::is_allocated(ModuleId i) const {
  return std::any_of(theta_.begin(), theta_.end(), [&](const auto& p) { return p.first == i; });
}

std::vector<ModuleId> GbfInterface::allocated() const {
  std::vector<ModuleId> ids;
  ids.reserve(theta_.size());
  for (const auto& p : theta_) ids.push_back(p.first);
  return ids;
}

GbfCoord GbfInterface::location(ModuleId i) const {
  for (const auto& [id, where] : theta_) {
    if (id == i) return where;
  }
  unallocated(i);
}

std::optional<ModuleId> GbfInterface::occupant(GbfCoord where) const {
  for (const auto& [id, at] : theta_) {
    if (at == where) return id;
  }
  return std::nullopt;
}

double GbfInterface::neighboring(ModuleId i, ModuleId j) const {
  if (i == j) {
    throw SpatialError(SpatialError::Code::same_identifier,
                       "neighboring is undefined for a module and itself");
  }
  unsigned d = distance(location(i), location(j), kind_);
  if (cutoff_ && d > *cutoff_) return 0.0;
  return 1.0 / d;
}

std::vector<GbfCoord> GbfInterface::empty_neighbors(ModuleId i) const {
  GbfCoord here = location(i);
  std::vector<GbfCoord> out;
  for (const auto& m : unit_moves(kind_)) {
    GbfCoord c{here.a + m.a, here.b + m.b};
    if (!occupant(c)) out.push_back(c);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<ModuleId, unsigned>> GbfInterface::neighbors(ModuleId i) const {
  return neighbors_of_location(location(i), i);
}

std::vector<std::pair<ModuleId, unsigned>> GbfInterface::neighbors_of_location(
    GbfCoord where, std::optional<ModuleId> exclude) const {
  std::vector<std::pair<ModuleId, unsigned>> out;
  for (const auto& [id, at] : theta_) {
    if (exclude && id == *exclude) continue;
    unsigned d = distance(where, at, kind_);
    if (d == 0 || (cutoff_ && d > *cutoff_)) continue;
    out.emplace_back(id, d);
  }
  return out;
}

GbfInterface GbfInterface::allocate(ModuleId i, GbfCoord where) const {
  if (is_allocated(i)) {
    throw SpatialError(SpatialError::Code::double_allocation,
                       "module " + to_string(i) + " is already allocated");
  }
  if (auto other = occupant(where)) {
    throw SpatialError(SpatialError::Code::occupied_location,
                       "location " + format_location(where) + " is occupied by module " +
                           to_string(*other));
  }
  GbfInterface next = *this;
  auto pos = std::lower_bound(next.theta_.begin(), next.theta_.end(), i,
                              [](const auto& p, ModuleId id) { return p.first < id; });
  next.theta_.insert(pos, {i, where});
  return next;
}

GbfInterface GbfInterface::free(ModuleId i) const {
  GbfInterface next = *this;
  auto it = std::find_if(next.theta_.begin(), next.theta_.end(),
                         [&](const auto& p) { return p.first == i; });
  if (it == next.theta_.end()) unallocated(i);
  next.theta_.erase(it);
  return next;
}

GbfInterface GbfInterface::move(ModuleId i, GbfCoord where) const {
  return free(i).allocate(i, where);
}

}  // namespace tissuenet
