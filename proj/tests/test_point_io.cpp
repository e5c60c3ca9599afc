#include <doctest.h>

#include <stdexcept>
#include <string>

#include "modehunt/point_io.hpp"
#include "modehunt/rng.hpp"

using namespace modehunt;

TEST_SUITE("point_io") {

TEST_CASE("single-column whitespace file") {
  PointSet pts = parse_points_text("0.1\n0.15\n0.9\n", "in");
  REQUIRE(pts.size() == 3);
  CHECK(pts.dim() == 1);
  CHECK(pts[0][0] == 0.1);
  CHECK(pts[2][0] == 0.9);
}

TEST_CASE("comma file with header") {
  PointSet pts = parse_points_text("x,y\n1,2\n3,4\n", "in");
  REQUIRE(pts.size() == 2);
  CHECK(pts.dim() == 2);
  CHECK(pts[0][0] == 1.0);
  CHECK(pts[1][1] == 4.0);
}

TEST_CASE("whitespace-delimited multi-column with CRLF") {
  PointSet pts = parse_points_text("1.5 2.5\r\n-3 0.25\r\n", "in");
  REQUIRE(pts.size() == 2);
  CHECK(pts.dim() == 2);
  CHECK(pts[1][0] == -3.0);
}

TEST_CASE("ragged rows name the offending line") {
  CHECK_THROWS_WITH_AS((void)parse_points_text("1,2\n3\n", "f.csv"),
                       "f.csv: line 2: expected 2 fields, got 1", std::runtime_error);
}

TEST_CASE("bad fields carry line and column") {
  try {
    (void)parse_points_text("1,2\n3,oops\n", "f.csv");
    FAIL("expected error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("column 3") != std::string::npos);
    CHECK(std::string(e.what()).find("oops") != std::string::npos);
  }
  CHECK_THROWS_AS((void)parse_points_text("1\ninf\n", "f"), std::runtime_error);
  CHECK_THROWS_AS((void)parse_points_text("1\nnan\n", "f"), std::runtime_error);
}

TEST_CASE("empty inputs") {
  CHECK_THROWS_WITH_AS((void)parse_points_text("", "f"), "f: no data", std::runtime_error);
  CHECK_THROWS_WITH_AS((void)parse_points_text("\n\n", "f"), "f: no data", std::runtime_error);
  CHECK_THROWS_AS((void)parse_points_text("x,y\n", "f"), std::runtime_error);
  CHECK_THROWS_AS((void)parse_points("/nonexistent/path.csv"), std::runtime_error);
}

TEST_CASE("format_double keeps values visibly floating-point and exact") {
  CHECK(format_double(0.0) == "0.0");
  CHECK(format_double(1.0) == "1.0");
  CHECK(format_double(-2.5) == "-2.5");
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("format/parse round-trip is exact") {
  Rng rng(555);
  PointSet pts(3);
  for (int i = 0; i < 500; ++i) {
    pts.push_back({rng.uniform(-1e6, 1e6), rng.uniform(-1e-6, 1e-6), rng.uniform(-1.0, 1.0)});
  }
  PointSet back = parse_points_text(format_points(pts), "roundtrip");
  REQUIRE(back.size() == pts.size());
  REQUIRE(back.dim() == 3);
  for (std::int64_t i = 0; i < pts.size(); ++i) {
    for (int j = 0; j < 3; ++j) CHECK(back[i][j] == pts[i][j]);
  }
}

}  // TEST_SUITE
