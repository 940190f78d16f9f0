#include <gtest/gtest.h>

#include <map>
#include <set>
#include <queue>

#include "tissuenet/error.hpp"
#include "tissuenet/gbf.hpp"

using namespace tissuenet;

namespace {

constexpr ModuleId m0 = module_id(0);
constexpr ModuleId m1 = module_id(1);
constexpr ModuleId m2 = module_id(2);

// Unit steps written out by hand: e, n and, on the triangular grid, nw = n - e.
std::vector<GbfCoord> oracle_moves(GridKind kind) {
  std::vector<GbfCoord> moves{{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  if (kind == GridKind::triangular) {
    moves.push_back({-1, 1});
    moves.push_back({1, -1});
  }
  return moves;
}

std::map<GbfCoord, unsigned> bfs(GbfCoord from, GridKind kind, int bound) {
  std::map<GbfCoord, unsigned> dist{{from, 0}};
  std::queue<GbfCoord> todo;
  todo.push(from);
  auto moves = oracle_moves(kind);
  while (!todo.empty()) {
    auto c = todo.front();
    todo.pop();
    for (auto m : moves) {
      GbfCoord n{c.a + m.a, c.b + m.b};
      if (std::abs(n.a) > bound || std::abs(n.b) > bound || dist.count(n)) continue;
      dist[n] = dist[c] + 1;
      todo.push(n);
    }
  }
  return dist;
}

GbfInterface section_four_three(GridKind kind) {
  return GbfInterface(kind, 2).allocate(m0, {0, 0}).allocate(m1, {1, 0}).allocate(m2, {3, 0});
}

}  // namespace

TEST(Gbf, NormalizeTriangularWordIdentity) {
  std::vector<WordTerm> lhs{{Generator::n, 2}, {Generator::e, 1}};
  std::vector<WordTerm> rhs{{Generator::e, 2}, {Generator::n, 1}, {Generator::nw, 1}};
  EXPECT_EQ(normalize(lhs, GridKind::triangular), normalize(rhs, GridKind::triangular));
  EXPECT_EQ(normalize(lhs, GridKind::triangular), (GbfCoord{1, 2}));
}

TEST(Gbf, NwIsNotASquareGenerator) {
  std::vector<WordTerm> w{{Generator::nw, 1}};
  EXPECT_THROW(normalize(w, GridKind::square), SpatialError);
  EXPECT_THROW(generator_from_name("sw"), SpatialError);
  EXPECT_EQ(generator_from_name("nw"), Generator::nw);
}

TEST(Gbf, TriangularDistancesFromTheText) {
  EXPECT_EQ(distance({1, 0}, {0, 1}, GridKind::triangular), 1u);
  EXPECT_EQ(distance({0, 1}, {1, 2}, GridKind::triangular), 2u);
  EXPECT_EQ(distance({1, 0}, {0, 1}, GridKind::square), 2u);
}

TEST(Gbf, ClosedFormDistanceMatchesBfs) {
  for (auto kind : {GridKind::square, GridKind::triangular}) {
    std::size_t pairs = 0;
    for (int a = -5; a <= 5; ++a) {
      for (int b = -5; b <= 5; ++b) {
        auto dist = bfs({a, b}, kind, 16);
        for (int c = -5; c <= 5; ++c) {
          for (int d = -5; d <= 5; ++d) {
            ASSERT_EQ(distance({a, b}, {c, d}, kind), dist.at({c, d}));
            ++pairs;
          }
        }
      }
    }
    EXPECT_GE(pairs, 8000u);
  }
}

TEST(Gbf, UnitMovesAreTheGenerators) {
  for (auto kind : {GridKind::square, GridKind::triangular}) {
    auto moves = unit_moves(kind);
    auto expected = oracle_moves(kind);
    EXPECT_EQ(std::set<GbfCoord>(moves.begin(), moves.end()),
              std::set<GbfCoord>(expected.begin(), expected.end()));
  }
}

TEST(Gbf, NeighboringValuesWithCutoff) {
  for (auto kind : {GridKind::square, GridKind::triangular}) {
    auto iface = section_four_three(kind);
    EXPECT_EQ(iface.neighboring(m0, m1), 1.0);
    EXPECT_EQ(iface.neighboring(m1, m2), 0.5);
    EXPECT_EQ(iface.neighboring(m0, m2), 0.0);
    EXPECT_EQ(iface.neighboring(m1, m0), 1.0);
  }
}

TEST(Gbf, NeighboringIsSymmetricAndBounded) {
  auto iface = GbfInterface(GridKind::triangular)
                   .allocate(m0, {0, 0})
                   .allocate(m1, {2, -1})
                   .allocate(m2, {-3, 4});
  for (auto i : iface.allocated()) {
    for (auto j : iface.allocated()) {
      if (i == j) continue;
      double d = iface.neighboring(i, j);
      EXPECT_EQ(d, iface.neighboring(j, i));
      EXPECT_GT(d, 0.0);
      EXPECT_LE(d, 1.0);
    }
  }
  EXPECT_THROW(iface.neighboring(m0, m0), SpatialError);
  EXPECT_THROW(iface.neighboring(m0, module_id(9)), SpatialError);
}

TEST(Gbf, EmptyNeighbors) {
  auto iface = section_four_three(GridKind::square);
  auto eta = iface.empty_neighbors(m1);
  EXPECT_EQ(eta, (std::vector<GbfCoord>{{1, -1}, {1, 1}, {2, 0}}));
  auto tri = section_four_three(GridKind::triangular);
  EXPECT_EQ(tri.empty_neighbors(m0).size(), 5u);
}

TEST(Gbf, AllocationErrors) {
  auto iface = section_four_three(GridKind::square);
  try {
    iface.allocate(m0, {5, 5});
    FAIL();
  } catch (const SpatialError& e) {
    EXPECT_EQ(e.code(), SpatialError::Code::double_allocation);
  }
  try {
    iface.allocate(module_id(7), {1, 0});
    FAIL();
  } catch (const SpatialError& e) {
    EXPECT_EQ(e.code(), SpatialError::Code::occupied_location);
  }
  EXPECT_THROW(iface.location(module_id(7)), SpatialError);
  EXPECT_THROW(iface.free(module_id(7)), SpatialError);
}

TEST(Gbf, AllocateFreeMove) {
  auto iface = section_four_three(GridKind::square);
  auto moved = iface.move(m2, {2, 0});
  EXPECT_EQ(moved.location(m2), (GbfCoord{2, 0}));
  EXPECT_EQ(moved.neighboring(m1, m2), 1.0);
  auto freed = moved.free(m1);
  EXPECT_FALSE(freed.is_allocated(m1));
  EXPECT_FALSE(freed.occupant({1, 0}).has_value());
  EXPECT_EQ(freed.allocate(m1, {1, 0}), moved);
}

TEST(Gbf, LocationLiterals) {
  EXPECT_EQ(format_location({-2, 3}), "(-2,3)");
  EXPECT_EQ(parse_location("(-2,3)"), (GbfCoord{-2, 3}));
  EXPECT_EQ(parse_location(" ( 4 , -1 ) "), (GbfCoord{4, -1}));
  EXPECT_FALSE(parse_location("(1;2)").has_value());
  EXPECT_FALSE(parse_location("(1,2").has_value());
}

TEST(Gbf, NeighborsListsPositiveDeltaOnly) {
  auto iface = section_four_three(GridKind::triangular);
  auto n = iface.neighbors(m1);
  EXPECT_EQ(n, (std::vector<std::pair<ModuleId, unsigned>>{{m0, 1}, {m2, 2}}));
  EXPECT_EQ(iface.neighbors(m0), (std::vector<std::pair<ModuleId, unsigned>>{{m1, 1}}));
}
