#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "fracmass/geometry.hpp"
#include "fracmass/io.hpp"

using namespace fracmass;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) {
    path = std::string("io_test_") + name;
  }
  ~TempFile() { std::remove(path.c_str()); }
  void write(const std::string& text) {
    std::ofstream f(path);
    f << text;
  }
};

}  // namespace

TEST_CASE("format_double: shortest round-trip representation") {
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(0.5) == "0.5");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(std::stod(format_double(0.1)) == 0.1);
  const double tricky = 2.0 * M_PI * 1e-17;
  CHECK(std::stod(format_double(tricky)) == tricky);
}

TEST_CASE("curves: round-trip is loss-free") {
  TempFile tf("curves.json");
  PolyCurve c;
  c.closed = true;
  c.weight = 1.0 / 3.0;
  c.vertices = {Vec{0.1, 0.2}, Vec{1.0 / 7.0, -2e-13}, Vec{5.5, 1e17}};
  save_curves({c}, 2, tf.path);
  auto back = load_curves(tf.path);
  REQUIRE(back.size() == 1);
  CHECK(back[0].closed == c.closed);
  CHECK(back[0].weight == c.weight);
  REQUIRE(back[0].vertices.size() == c.vertices.size());
  for (std::size_t i = 0; i < c.vertices.size(); ++i)
    CHECK(back[0].vertices[i] == c.vertices[i]);
}

TEST_CASE("currents: round-trip is loss-free") {
  TempFile tf("current.json");
  SegmentCurrent mu;
  mu.dim = 3;
  mu.segments.push_back({Vec{0, 0, 0}, Vec{1.0 / 3.0, 0.25, -1e-9}, 0.001});
  mu.segments.push_back({Vec{1, 2, 3}, Vec{4, 5, 6}, -2.5});
  save_current(mu, tf.path);
  SegmentCurrent back = load_current(tf.path);
  CHECK(back.dim == 3);
  REQUIRE(back.segments.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(back.segments[i].a == mu.segments[i].a);
    CHECK(back.segments[i].b == mu.segments[i].b);
    CHECK(back.segments[i].w == mu.segments[i].w);
  }
}

TEST_CASE("regions: round-trip with holes") {
  TempFile tf("region.json");
  PlanarRegion E;
  E.outer.closed = true;
  E.outer.vertices = {Vec{0, 0}, Vec{1, 0}, Vec{1, 1}, Vec{0, 1}};
  PolyCurve hole;
  hole.closed = true;
  hole.vertices = {Vec{0.25, 0.25}, Vec{0.25, 0.75}, Vec{0.75, 0.75},
                   Vec{0.75, 0.25}};
  E.holes.push_back(hole);
  save_region(E, tf.path);
  PlanarRegion back = load_region(tf.path);
  CHECK(back.outer.vertices == E.outer.vertices);
  REQUIRE(back.holes.size() == 1);
  CHECK(back.holes[0].vertices == E.holes[0].vertices);
}

TEST_CASE("load_curves: malformed inputs raise invalid_argument") {
  TempFile tf("bad.json");
  tf.write("{not json");
  CHECK_THROWS_AS(load_curves(tf.path), std::invalid_argument);
  tf.write("{\"curves\": []}");  // missing dim
  CHECK_THROWS_AS(load_curves(tf.path), std::invalid_argument);
  tf.write("{\"dim\": 2, \"curves\": [{\"vertices\": [[1,2,3]]}]}");
  CHECK_THROWS_AS(load_curves(tf.path), std::invalid_argument);
  CHECK_THROWS_AS(load_curves("does_not_exist.json"), std::invalid_argument);
}

TEST_CASE("load_region: dimension and structure checks") {
  TempFile tf("badregion.json");
  tf.write("{\"dim\": 3, \"outer\": {\"vertices\": [[0,0],[1,0],[1,1]]}}");
  CHECK_THROWS_AS(load_region(tf.path), std::invalid_argument);
  tf.write("{\"dim\": 2}");
  CHECK_THROWS_AS(load_region(tf.path), std::invalid_argument);
  // Orientation is validated on load.
  tf.write(
      "{\"dim\": 2, \"outer\": {\"closed\": true, "
      "\"vertices\": [[0,0],[0,1],[1,1],[1,0]]}}");
  CHECK_THROWS_AS(load_region(tf.path), std::invalid_argument);
}

TEST_CASE("load_config: key = value with comments and whitespace") {
  TempFile tf("config.txt");
  tf.write(
      "# a comment line\n"
      "field = curl_bump_2d\n"
      "  eps=0.2,0.1   # trailing comment\n"
      "\n"
      "empty_is_skipped\n"
      "radius = 1.5\n");
  auto cfg = load_config(tf.path);
  CHECK(cfg.size() == 3);
  CHECK(cfg.at("field") == "curl_bump_2d");
  CHECK(cfg.at("eps") == "0.2,0.1");
  CHECK(cfg.at("radius") == "1.5");
  CHECK_THROWS_AS(load_config("missing_config.txt"), std::invalid_argument);
}

TEST_CASE("save/load: weight default and open curves") {
  TempFile tf("open.json");
  tf.write("{\"dim\": 2, \"curves\": [{\"vertices\": [[0,0],[1,0]]}]}");
  auto curves = load_curves(tf.path);
  REQUIRE(curves.size() == 1);
  CHECK(!curves[0].closed);
  CHECK(curves[0].weight == 1.0);
}
