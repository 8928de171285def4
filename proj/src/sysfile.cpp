#include <charconv>
#include <cmath>
#include <limits>
#include <optional>

#include "capdyn/sysdef.hpp"

namespace capdyn {

namespace {

constexpr double kRoundTripLimit = 1e-6;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

struct Line {
  std::string_view text;
  std::size_t number;
  // offset of text within the raw line
  std::size_t offset;
};

struct MapPair {
  Expr first;
  Expr second;
};

// Re-raises a ParseError from a sub-string as a SystemParseError located in
// the file. Columns are 1-based.
template <typename F>
auto located(const Line& line, std::size_t offset, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw SystemParseError(e.message(), line.number, line.offset + offset + e.position() + 1);
  }
}

MapPair parse_pair(const Line& line, std::size_t value_offset, const std::map<std::string, double>& constants) {
  const std::string_view v = line.text.substr(value_offset);
  int depth = 0;
  std::optional<std::size_t> comma;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] == '(') ++depth;
    if (v[i] == ')') --depth;
    if (v[i] == ',' && depth == 0) {
      if (comma) throw SystemParseError("expected exactly two components", line.number, line.offset + value_offset + i + 1);
      comma = i;
    }
  }
  if (!comma) throw SystemParseError("expected two comma-separated components", line.number, line.offset + line.text.size() + 1);
  auto a = located(line, value_offset, [&] { return parse_expr(v.substr(0, *comma), constants); });
  auto b = located(line, value_offset + *comma + 1, [&] { return parse_expr(v.substr(*comma + 1), constants); });
  return {a, b};
}

}  // namespace

ParsedSystem parse_system(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty() || number == 0) {
    ++number;
    const auto nl = text.find('\n');
    std::string_view raw = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const auto body = trim(raw);
    if (!body.empty() && body.front() != '#')
      lines.push_back({body, number, static_cast<std::size_t>(body.data() - raw.data())});
    if (text.empty()) break;
  }

  std::string name = "user_system", mode;
  double radius = std::numeric_limits<double>::infinity();
  std::map<std::string, double> constants;
  std::optional<MapPair> forward, inverse;
  std::size_t last_line = number;

  for (const auto& line : lines) {
    const auto colon = line.text.find(':');
    if (colon == std::string_view::npos)
      throw SystemParseError("expected 'key: value'", line.number, line.offset + 1);
    const auto key = trim(line.text.substr(0, colon));
    std::size_t value_offset = colon + 1;
    while (value_offset < line.text.size() && std::isspace(static_cast<unsigned char>(line.text[value_offset]))) ++value_offset;
    const auto value = line.text.substr(value_offset);
    const std::size_t value_col = line.offset + value_offset + 1;

    if (key == "name") {
      name = std::string(value);
    } else if (key == "mode") {
      if (value != "cartesian" && value != "polar")
        throw SystemParseError("mode must be cartesian or polar", line.number, value_col);
      mode = std::string(value);
    } else if (key == "radius") {
      double r = 0;
      const auto res = std::from_chars(value.data(), value.data() + value.size(), r);
      if (res.ec != std::errc() || res.ptr != value.data() + value.size() || !(r > 0))
        throw SystemParseError("radius must be a positive number", line.number, value_col);
      radius = r;
    } else if (key == "let") {
      const auto eq = value.find('=');
      if (eq == std::string_view::npos) throw SystemParseError("expected 'let: NAME = EXPR'", line.number, value_col);
      const std::string id(trim(value.substr(0, eq)));
      if (id.empty() || !(std::isalpha(static_cast<unsigned char>(id[0])) || id[0] == '_'))
        throw SystemParseError("invalid constant name", line.number, value_col);
      for (const char* reserved : {"x", "y", "r", "theta", "pi", "phi", "sin", "cos", "exp", "sqrt", "abs", "mod2pi"})
        if (id == reserved) throw SystemParseError("'" + id + "' is reserved", line.number, value_col);
      const auto e = located(line, value_offset + eq + 1, [&] { return parse_expr(value.substr(eq + 1), constants); });
      // Constants must not depend on coordinates: evaluate at two points.
      const double v0 = e.eval(Vars::cartesian(0.3, 0.7)), v1 = e.eval(Vars::cartesian(-1.9, 2.3));
      if (v0 != v1 && !(std::isnan(v0) && std::isnan(v1)))
        throw SystemParseError("constant '" + id + "' depends on the coordinates", line.number, value_col);
      constants[id] = v0;
    } else if (key == "forward") {
      forward = parse_pair(line, value_offset, constants);
    } else if (key == "inverse") {
      inverse = parse_pair(line, value_offset, constants);
    } else {
      throw SystemParseError("unknown key '" + std::string(key) + "'", line.number, line.offset + 1);
    }
  }

  if (mode.empty()) throw SystemParseError("missing 'mode:' header", last_line, 1);
  if (!forward) throw SystemParseError("missing 'forward:' line", last_line, 1);
  if (!inverse) throw SystemParseError("missing 'inverse:' line", last_line, 1);
  if (mode == "cartesian" && std::isfinite(radius))
    throw SystemParseError("'radius:' applies to polar mode only", last_line, 1);

  const bool polar = mode == "polar";
  auto make_map = [polar](MapPair m) -> PointMap {
    return [polar, m = std::move(m)](const Point& p) {
      const Vars v = polar ? Vars::polar(p[0], p[1]) : Vars::cartesian(p[0], p[1]);
      return Point::of(m.first.eval(v), m.second.eval(v));
    };
  };
  const Space space = polar ? Space::disk(radius) : Space::plane();
  ParsedSystem out{System{space, make_map(*forward), make_map(*inverse), name}, mode, 0.0,
                   [space](std::size_t count, std::uint64_t seed) { return space.sample(count, seed, Region{1.0}); }};

  const double check_radius = std::isfinite(radius) ? radius : 10.0;
  const auto probes = space.sample(1000, 12345, Region{check_radius});
  Point worst_point = probes.front();
  for (const auto& p : probes) {
    const double err = space.distance(out.system.inverse(out.system.forward(p)), p);
    if (!(err <= out.round_trip)) {
      out.round_trip = err;
      worst_point = p;
    }
  }
  if (!(out.round_trip <= kRoundTripLimit))
    throw SystemParseError("inverse does not undo forward: error " + std::to_string(out.round_trip) + " at (" +
                               std::to_string(worst_point[0]) + ", " + std::to_string(worst_point[1]) + ")",
                           last_line, 1);
  return out;
}

}  // namespace capdyn
