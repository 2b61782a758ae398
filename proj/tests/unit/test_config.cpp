#include <cmath>

#include "doctest.h"
#include "hrtlab/configuration.hpp"
#include "hrtlab/errors.hpp"

using namespace hrtlab;

namespace {

double sqrt2 = std::sqrt(2.0);

Configuration config(std::vector<TFPoint> pts) { return validate(pts, 1e-9); }

void check_image(const SymplecticMap& m, const TFPoint& p, const TFPoint& want) {
  const TFPoint got = m(p);
  CHECK(std::abs(got.a - want.a) <= 1e-12);
  CHECK(std::abs(got.b - want.b) <= 1e-12);
}

}  // namespace

TEST_CASE("validate accepts distinct points and rejects duplicates") {
  CHECK(config({{0, 0}, {0, 1}}).size() == 2);
  CHECK(config({{0, 0}, {0, 1}, {sqrt2, sqrt2}}).size() == 3);
  CHECK_THROWS_AS(validate({{0, 0}, {0, 0}}, 1e-9), DuplicatePoint);
  try {
    validate({{0, 0}, {1, 1}, {1, 1 + 1e-12}}, 1e-9);
    FAIL("expected DuplicatePoint");
  } catch (const DuplicatePoint& d) {
    CHECK(d.first == 1);
    CHECK(d.second == 2);
  }
  CHECK_THROWS_AS(validate({}, 1e-9), InvalidSpec);
}

TEST_CASE("classify: collinear points") {
  const auto cls = classify(config({{0, 0}, {1, 0}, {2, 0}, {5, 0}}));
  CHECK(cls.kind == ConfigKind::Collinear);
  // convention: N <= 2 is collinear
  CHECK(classify(config({{0.3, 0.7}})).kind == ConfigKind::Collinear);
  CHECK(classify(config({{0, 0}, {1, 2}})).kind == ConfigKind::Collinear);
  // off-axis line
  CHECK(classify(config({{0, 0}, {1, 1}, {2, 2}, {-3, -3}})).kind ==
        ConfigKind::Collinear);
}

TEST_CASE("classify: the symmetric (2,3) configuration") {
  const auto cls =
      classify(config({{0, 0}, {0, 1}, {0, -1}, {1, 0.5}, {1, -0.5}}));
  REQUIRE(cls.kind == ConfigKind::NMConfig);
  CHECK(cls.n == 2);
  CHECK(cls.m == 3);
  // lines x=0 and x=1: the 3-point line holds indices 0,1,2
  REQUIRE(cls.line2.size() == 3);
  CHECK(cls.line2[0] == 0);
  CHECK(cls.line2[1] == 1);
  CHECK(cls.line2[2] == 2);
  REQUIRE(cls.line1.size() == 2);
  CHECK(cls.line1[0] == 3);
  CHECK(cls.line1[1] == 4);
}

TEST_CASE("classify: general position (no two-parallel-line cover)") {
  const auto cls = classify(config({{0, 0}, {0, 1}, {1, 0}, {sqrt2, sqrt2}}));
  CHECK(cls.kind == ConfigKind::General);
}

TEST_CASE("classify: a triangle is a (1,2) configuration") {
  const auto cls = classify(config({{0, 0}, {1, 0}, {0.3, 1.2}}));
  REQUIRE(cls.kind == ConfigKind::NMConfig);
  CHECK(cls.n == 1);
  CHECK(cls.m == 2);
}

TEST_CASE("classify is invariant under rotations and shears") {
  const std::vector<TFPoint> base{{0, 0}, {0, 1}, {0, -1}, {1, 0.5}, {1, -0.5}};
  const double c = std::cos(0.7), s = std::sin(0.7);
  SymplecticMap rot;
  rot.linear = {{{c, -s}, {s, c}}};
  SymplecticMap shear;
  shear.linear = {{{1.0, 0.8}, {0.0, 1.0}}};
  for (const SymplecticMap& m : {rot, shear}) {
    const auto cls = classify(apply_map(m, config(base)));
    CHECK(cls.kind == ConfigKind::NMConfig);
    CHECK(cls.n == 2);
    CHECK(cls.m == 3);
  }
  const auto col = classify(apply_map(rot, config({{0, 0}, {1, 0}, {2, 0}})));
  CHECK(col.kind == ConfigKind::Collinear);
}

TEST_CASE("normalize_three: already-normal input maps by the identity") {
  const auto [m, img] = normalize_three(config({{0, 0}, {0, 1}, {0.7, -0.3}}));
  CHECK(std::abs(m.det() - 1.0) <= 1e-12);
  check_image(m, {0, 0}, {0, 0});
  check_image(m, {0, 1}, {0, 1});
  CHECK(std::abs(img.points[2].a - 0.7) <= 1e-12);
  CHECK(std::abs(img.points[2].b + 0.3) <= 1e-12);
}

TEST_CASE("normalize_three: shifted lattice example") {
  const auto [m, img] = normalize_three(config({{1, 1}, {1, 2}, {2, 1}}));
  CHECK(std::abs(m.det() - 1.0) <= 1e-12);
  check_image(m, {1, 1}, {0, 0});
  check_image(m, {1, 2}, {0, 1});
  // v = (0,1) gives rows (1,0),(0,1): third point lands at (1,0)
  check_image(m, {2, 1}, {1, 0});
}

TEST_CASE("normalize_three: stretched second point") {
  const auto [m, img] = normalize_three(config({{0, 0}, {2, 0}, {0, 1}}));
  CHECK(std::abs(m.det() - 1.0) <= 1e-12);
  check_image(m, {2, 0}, {0, 1});
  // v = (2,0): rows (0,-2),(1/2,0); (0,1) -> (-2, 0)
  check_image(m, {0, 1}, {-2, 0});
  CHECK(img.points[0].a == 0.0);
}

TEST_CASE("normalize_three rejects degenerate anchors") {
  Configuration c;  // bypass validate to hit the degenerate branch
  c.points = {{0, 0}, {0, 0}, {1, 1}};
  c.geom_tol = 1e-9;
  CHECK_THROWS_AS(normalize_three(c), DegenerateConfig);
  CHECK_THROWS_AS(normalize_three(config({{0, 0}, {0, 1}})), InvalidSpec);
}

TEST_CASE("normalize_1n: already-normal (1,3) input") {
  const auto [m, img] = normalize_1n(config({{0, 1}, {0, 0}, {1, 0}, {2, 0}}));
  CHECK(std::abs(m.det() - 1.0) <= 1e-12);
  check_image(m, {0, 1}, {0, 1});
  check_image(m, {0, 0}, {0, 0});
  check_image(m, {1, 0}, {1, 0});
  check_image(m, {2, 0}, {2, 0});
}

TEST_CASE("normalize_1n: vertical 3-line with off point") {
  // lines x=0 (three points) and x=1 (one point): a (1,3) configuration
  const auto [m, img] = normalize_1n(config({{0, 0}, {0, 1}, {0, -1}, {1, 0}}));
  CHECK(std::abs(m.det() - 1.0) <= 1e-12);
  // off point to (0,1), on-line anchor to the origin
  check_image(m, {1, 0}, {0, 1});
  check_image(m, {0, 0}, {0, 0});
  // on-line images are on the horizontal axis, equi-spaced
  const TFPoint i1 = m({0, 1}), i2 = m({0, -1});
  CHECK(std::abs(i1.b) <= 1e-12);
  CHECK(std::abs(i2.b) <= 1e-12);
  CHECK(std::abs(i1.a + i2.a) <= 1e-12);
  CHECK(std::abs(std::abs(i1.a) - 1.0) <= 1e-12);
}

TEST_CASE("normalize_1n rejects non-(1,n) configurations") {
  CHECK_THROWS_AS(normalize_1n(config({{0, 0}, {1, 0}, {2, 0}})), NotOneN);
  CHECK_THROWS_AS(
      normalize_1n(config({{0, 0}, {0, 1}, {0, -1}, {1, 0.5}, {1, -0.5}})),
      NotOneN);
}

TEST_CASE("apply_map: identity, shift, inverse round-trip") {
  const Configuration c = config({{0.3, -0.4}, {1.7, 2.2}, {-0.6, 0.9}});
  SymplecticMap id;
  const Configuration same = apply_map(id, c);
  CHECK(same.points[1].a == c.points[1].a);

  SymplecticMap shift;
  shift.shift = {1.0, 0.0};
  CHECK(apply_map(shift, config({{0, 0}})).points[0].a == 1.0);

  SymplecticMap m;
  m.linear = {{{2.0, 0.3}, {1.0, 0.65}}};  // det = 1.3 - 0.3 = 1
  m.shift = {0.25, -1.5};
  REQUIRE(std::abs(m.det() - 1.0) <= 1e-12);
  const Configuration back = apply_map(m.inverse(), apply_map(m, c));
  for (std::size_t i = 0; i < c.size(); ++i) {
    CHECK(std::abs(back.points[i].a - c.points[i].a) <= 1e-12);
    CHECK(std::abs(back.points[i].b - c.points[i].b) <= 1e-12);
  }
}

TEST_CASE("normal-form maps have det 1 for a spread of inputs") {
  const std::vector<std::vector<TFPoint>> threes{
      {{0.2, 0.1}, {-1.4, 2.0}, {3.3, -0.7}},
      {{5, 5}, {5, 6}, {6, 5}},
      {{-2, 1}, {0.5, 0.5}, {1, -3}},
  };
  for (const auto& pts : threes) {
    const auto [m, img] = normalize_three(config(pts));
    CHECK(std::abs(m.det() - 1.0) <= 1e-12);
    CHECK(std::abs(img.points[0].a) <= 1e-12);
    CHECK(std::abs(img.points[0].b) <= 1e-12);
    CHECK(std::abs(img.points[1].a) <= 1e-12);
    CHECK(std::abs(img.points[1].b - 1.0) <= 1e-12);
  }
}
