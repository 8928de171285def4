#include <doctest.h>

#include <cmath>
#include <random>

#include "capdyn/sysdef.hpp"

using namespace capdyn;

namespace {

const char* kTwistFile = R"(# twist of the closed unit disk
name: disk_twist
mode: polar
radius: 1
forward: r, mod2pi(theta + r)
inverse: r, mod2pi(theta - r)
)";

const char* kRotationFile = R"(name: plane_irrational_rotation
mode: cartesian
let: a = 2*pi/phi
forward: cos(a)*x - sin(a)*y, sin(a)*x + cos(a)*y
inverse: cos(a)*x + sin(a)*y, -sin(a)*x + cos(a)*y
)";

std::string describe_error(const std::string& text) {
  try {
    parse_expr(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("expressions evaluate like their closed forms") {
  const auto v = Vars::cartesian(0.3, -1.2);
  CHECK(parse_expr("1 + 2 * 3").eval(v) == 7.0);
  CHECK(parse_expr("(1 + 2) * 3").eval(v) == 9.0);
  CHECK(parse_expr("8 / 4 / 2").eval(v) == 1.0);
  CHECK(parse_expr("2 - 3 - 4").eval(v) == -5.0);
  CHECK(parse_expr("-x * -y").eval(v) == 0.3 * -1.2 * -1.0 * -1.0);
  CHECK(parse_expr("sqrt(x*x + y*y)").eval(v) == std::sqrt(0.3 * 0.3 + 1.2 * 1.2));
  CHECK(parse_expr("phi").eval(v) == std::numbers::phi);
  CHECK(parse_expr("mod2pi(-pi/2)").eval(v) == doctest::Approx(1.5 * std::numbers::pi));
  CHECK(parse_expr("r").eval(v) == doctest::Approx(std::hypot(0.3, -1.2)));
  CHECK(parse_expr("k * 2", {{"k", 1.5}}).eval(v) == 3.0);
}

TEST_CASE("printing is stable across equivalent texts") {
  CHECK(parse_expr("1+2*x").to_string() == parse_expr(" 1 + (2 * x) ").to_string());
  const auto e = parse_expr("sin(theta) - -r / 2");
  CHECK(parse_expr(e.to_string()).to_string() == e.to_string());
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_expr("sin(x");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
    CHECK(std::string(e.message()).find("end of input") != std::string::npos);
    CHECK(std::string(e.message()).find("unclosed '('") != std::string::npos);
  }
  CHECK(describe_error("1 + $").find("at 4") == 0);
  CHECK_THROWS_AS(parse_expr("foo(x)"), ParseError);
  CHECK_THROWS_AS(parse_expr("sin(x, y)"), ParseError);
  CHECK_THROWS_AS(parse_expr("x y"), ParseError);
  CHECK_THROWS_AS(parse_expr(""), ParseError);
  CHECK_THROWS_AS(parse_expr("z"), ParseError);
  CHECK_THROWS_AS(parse_expr(std::string(1000, '(') + "1" + std::string(1000, ')')), ParseError);
}

TEST_CASE("registry system files match their fixtures") {
  {
    const auto parsed = parse_system(kTwistFile);
    const auto f = fixture("disk_twist");
    CHECK(parsed.mode == "polar");
    CHECK(parsed.round_trip <= 1e-12);
    for (const auto& p : f.sampler(1000, 2)) {
      CHECK(f.system.space.distance(parsed.system.forward(p), f.system.forward(p)) <= 1e-12);
      CHECK(f.system.space.distance(parsed.system.inverse(p), f.system.inverse(p)) <= 1e-12);
    }
  }
  {
    const auto parsed = parse_system(kRotationFile);
    const auto f = fixture("plane_irrational_rotation");
    CHECK(parsed.mode == "cartesian");
    for (const auto& p : f.sampler(1000, 2)) {
      CHECK(f.system.space.distance(parsed.system.forward(p), f.system.forward(p)) <= 1e-12);
      CHECK(f.system.space.distance(parsed.system.inverse(p), f.system.inverse(p)) <= 1e-12);
    }
  }
}

TEST_CASE("system file errors") {
  auto error_of = [](const std::string& text) -> std::pair<std::size_t, std::string> {
    try {
      parse_system(text);
    } catch (const SystemParseError& e) {
      return {e.line(), e.what()};
    }
    return {0, ""};
  };
  // Not invertible as written.
  const auto bad = error_of("mode: cartesian\nforward: x + 1, y\ninverse: x + 1, y\n");
  CHECK(bad.first == 3);
  CHECK(bad.second.find("inverse does not undo forward") != std::string::npos);
  CHECK(error_of("mode: spherical\nforward: x, y\ninverse: x, y\n").first == 1);
  CHECK(error_of("mode: cartesian\nforward: x, \ninverse: x, y\n").first == 2);
  CHECK(error_of("mode: cartesian\nforward: x, y\n").first != 0);
  CHECK(error_of("mode: cartesian\ncolour: red\nforward: x, y\ninverse: x, y\n").first == 2);
  CHECK(error_of("mode: cartesian\nlet: x = 2\nforward: x, y\ninverse: x, y\n").first == 2);
  CHECK(error_of("mode: cartesian\nlet: k = y\nforward: x, y\ninverse: x, y\n").first == 2);
  CHECK(error_of("mode: cartesian\nforward: sin(x, y\ninverse: x, y\n").first == 2);
  CHECK(error_of("mode: cartesian\n# comment\n\nforward: x, y\ninverse: x, y\n").first == 0);
}

TEST_CASE("token mutations never crash the parser") {
  const std::vector<std::string> seeds{"cos(a)*x - sin(a)*y", "mod2pi(theta + r)", "sqrt(abs(x*y)) / (1 + exp(-r))",
                                       "-(x - 2.5e-1) * pi + phi"};
  const std::vector<std::string> tokens{"x", "y", "r", "theta", "(", ")", "+", "-", "*", "/", ",", "sin",
                                        "1", "2.5", "pi", "$", "", " ", "mod2pi", "1e", "."};
  std::mt19937_64 rng(99);
  int parsed = 0, rejected = 0;
  for (int trial = 0; trial < 20000; ++trial) {
    std::string text = seeds[rng() % seeds.size()];
    const int edits = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < edits; ++k) {
      const std::size_t at = text.empty() ? 0 : rng() % (text.size() + 1);
      const auto& tok = tokens[rng() % tokens.size()];
      switch (rng() % 3) {
        case 0: text.insert(at, tok); break;
        case 1: if (at < text.size()) text.erase(at, 1 + rng() % 3); break;
        default: text.replace(std::min(at, text.size()), 1, tok);
      }
    }
    try {
      const auto e = parse_expr(text, {{"a", 0.5}});
      // A valid tree reprints to itself.
      CHECK(parse_expr(e.to_string(), {{"a", 0.5}}).to_string() == e.to_string());
      ++parsed;
    } catch (const ParseError& e) {
      CHECK(e.position() <= text.size());
      ++rejected;
    }
  }
  CHECK(parsed > 0);
  CHECK(rejected > 0);
}

TEST_CASE("fixture registry") {
  for (const auto& name : fixture_names()) {
    CAPTURE(name);
    const auto f = fixture(name);
    CHECK_FALSE(f.expected.empty());
    for (const auto& [key, status] : f.expected) CHECK(status != Status::inconclusive);
    const auto pts = f.sampler(10000, 3);
    double worst = 0;
    for (const auto& p : pts) {
      CHECK(f.system.space.is_member(p));
      worst = std::fmax(worst, f.system.space.distance(f.system.inverse(f.system.forward(p)), p));
    }
    CHECK(worst <= 1e-9);
  }
  CHECK(fixture("disk_twist").expected.at(detector_key::cap) == Status::refuted);
  CHECK(fixture("plane_irrational_rotation").expected.at(detector_key::almost_period) == Status::refuted);
  CHECK(fixture("circle_rotation 3/8").expected.at(detector_key::cap) == Status::certified);
  try {
    fixture("no_such_example");
    FAIL("expected FixtureLookupError");
  } catch (const FixtureLookupError& e) {
    for (const auto& name : fixture_names()) CHECK(std::string(e.what()).find(name) != std::string::npos);
  }
}

TEST_CASE("doubling bijections") {
  CHECK(doubling_bijection_value(3, 2) == 4);
  CHECK(doubling_bijection_value(3, 4) == 1);
  CHECK(doubling_bijection_value(3, 6) == 5);
  CHECK(doubling_bijection_value(3, 7) == 7);
}
