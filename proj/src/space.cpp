#include "capdyn/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace capdyn {

double mod2pi(double angle) {
  double r = std::fmod(angle, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double arc_distance(double a, double b) {
  const double t = std::fmod(std::abs(a - b), kTwoPi);
  return std::min(t, kTwoPi - t);
}

double chord_distance(double a, double b) { return 2.0 * std::sin(0.5 * arc_distance(a, b)); }

const char* to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::circle: return "circle";
    case SpaceKind::plane: return "plane";
    case SpaceKind::disk: return "disk";
    case SpaceKind::sphere: return "sphere";
    case SpaceKind::discrete: return "discrete";
    case SpaceKind::product: return "product";
    case SpaceKind::disjoint_union: return "disjoint_union";
    case SpaceKind::subspace: return "subspace";
  }
  return "unknown";
}

struct Space::Impl {
  SpaceKind kind;
  std::string label;
  std::uint8_t arity;
  std::function<double(const Point&, const Point&)> distance;
  std::function<std::vector<Point>(std::size_t, std::uint64_t, Region)> sample;
  std::function<std::vector<Point>(const Point&, double, std::size_t)> ring;
  std::function<bool(const Point&)> contains;
  std::function<bool(const Point&)> membership;  // empty when absent
  std::function<Point(std::span<const Point>)> centroid;
  std::size_t embedding_dim = 0;
  std::function<std::array<double, 4>(const Point&)> embed;
};

namespace {

double circular_mean(std::span<const Point> pts, std::size_t coord) {
  double s = 0, c = 0;
  for (const auto& p : pts) {
    s += std::sin(p[coord]);
    c += std::cos(p[coord]);
  }
  return mod2pi(std::atan2(s, c));
}

bool all_equal(std::span<const Point> pts) {
  return std::all_of(pts.begin(), pts.end(), [&](const Point& p) { return p == pts.front(); });
}

Point first_or_throw(std::span<const Point> pts) {
  if (pts.empty()) throw std::invalid_argument("centroid of an empty cluster");
  return pts.front();
}

std::vector<Point> planar_ring(double x, double y, double rho, std::size_t count) {
  std::vector<Point> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double a = kTwoPi * static_cast<double>(k) / static_cast<double>(count);
    out.push_back(Point::of(x + rho * std::cos(a), y + rho * std::sin(a)));
  }
  return out;
}

double chordal(const Point& p, const Point& q) {
  if (p.at_infinity && q.at_infinity) return 0.0;
  if (p.at_infinity || q.at_infinity) {
    const Point& z = p.at_infinity ? q : p;
    return 2.0 / std::sqrt(1.0 + z[0] * z[0] + z[1] * z[1]);
  }
  const double dx = p[0] - q[0], dy = p[1] - q[1];
  const double np = 1.0 + p[0] * p[0] + p[1] * p[1];
  const double nq = 1.0 + q[0] * q[0] + q[1] * q[1];
  return 2.0 * std::hypot(dx, dy) / std::sqrt(np * nq);
}

std::array<double, 4> stereographic(const Point& p) {
  if (p.at_infinity) return {0, 0, 1, 0};
  const double n2 = p[0] * p[0] + p[1] * p[1];
  const double s = 1.0 + n2;
  return {2 * p[0] / s, 2 * p[1] / s, (n2 - 1) / s, 0};
}

Point inverse_stereographic(double X, double Y, double Z) {
  const double norm = std::sqrt(X * X + Y * Y + Z * Z);
  if (norm == 0.0) return Point::of(0.0, 0.0);
  X /= norm;
  Y /= norm;
  Z /= norm;
  if (Z > 1.0 - 1e-15) return Point::infinity();
  return Point::of(X / (1.0 - Z), Y / (1.0 - Z));
}

}  // namespace

Space Space::circle() {
  auto impl = std::make_shared<Impl>();
  impl->kind = SpaceKind::circle;
  impl->label = "circle";
  impl->arity = 1;
  impl->distance = [](const Point& p, const Point& q) { return arc_distance(p[0], q[0]); };
  impl->sample = [](std::size_t count, std::uint64_t seed, Region) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    std::vector<Point> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(Point::of(u(rng)));
    return out;
  };
  impl->ring = [](const Point& x, double delta, std::size_t) {
    if (delta > std::numbers::pi) return std::vector<Point>{};
    return std::vector<Point>{Point::of(mod2pi(x[0] + delta)), Point::of(mod2pi(x[0] - delta))};
  };
  impl->contains = [](const Point& p) { return p[0] >= 0.0 && p[0] < kTwoPi; };
  impl->centroid = [](std::span<const Point> pts) {
    first_or_throw(pts);
    return Point::of(circular_mean(pts, 0));
  };
  impl->embedding_dim = 2;
  impl->embed = [](const Point& p) { return std::array<double, 4>{std::cos(p[0]), std::sin(p[0]), 0, 0}; };
  return Space(std::move(impl));
}

Space Space::plane() {
  auto impl = std::make_shared<Impl>();
  impl->kind = SpaceKind::plane;
  impl->label = "plane";
  impl->arity = 2;
  impl->distance = [](const Point& p, const Point& q) { return std::hypot(p[0] - q[0], p[1] - q[1]); };
  impl->sample = [](std::size_t count, std::uint64_t seed, Region region) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Point> out;
    for (std::size_t i = 0; i < count; ++i) {
      const double r = region.radius * std::sqrt(u(rng));
      const double a = kTwoPi * u(rng);
      out.push_back(Point::of(r * std::cos(a), r * std::sin(a)));
    }
    return out;
  };
  impl->ring = [](const Point& x, double delta, std::size_t count) { return planar_ring(x[0], x[1], delta, count); };
  impl->contains = [](const Point& p) { return std::isfinite(p[0]) && std::isfinite(p[1]); };
  impl->centroid = [](std::span<const Point> pts) {
    first_or_throw(pts);
    double x = 0, y = 0;
    for (const auto& p : pts) {
      x += p[0];
      y += p[1];
    }
    const auto n = static_cast<double>(pts.size());
    return Point::of(x / n, y / n);
  };
  impl->embedding_dim = 2;
  impl->embed = [](const Point& p) { return std::array<double, 4>{p[0], p[1], 0, 0}; };
  return Space(std::move(impl));
}

Space Space::disk(double radius) {
  auto impl = std::make_shared<Impl>();
  impl->kind = SpaceKind::disk;
  impl->label = std::isinf(radius) ? std::string("polar_plane") : "disk(" + std::to_string(radius) + ")";
  impl->arity = 2;
  impl->distance = [](const Point& p, const Point& q) {
    const double d2 = p[0] * p[0] + q[0] * q[0] - 2.0 * p[0] * q[0] * std::cos(p[1] - q[1]);
    return std::sqrt(std::max(0.0, d2));
  };
  impl->sample = [radius](std::size_t count, std::uint64_t seed, Region region) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double bound = std::min(radius, region.radius);
    std::vector<Point> out;
    for (std::size_t i = 0; i < count; ++i) {
      const double r = bound * std::sqrt(u(rng));
      out.push_back(Point::of(r, kTwoPi * u(rng)));
    }
    return out;
  };
  impl->contains = [radius](const Point& p) { return p[0] >= 0.0 && p[0] <= radius + 1e-12; };
  impl->ring = [radius](const Point& x, double delta, std::size_t count) {
    const double cx = x[0] * std::cos(x[1]), cy = x[0] * std::sin(x[1]);
    std::vector<Point> out;
    for (const auto& q : planar_ring(cx, cy, delta, count)) {
      const double r = std::hypot(q[0], q[1]);
      if (r > radius) continue;
      out.push_back(Point::of(r, mod2pi(std::atan2(q[1], q[0]))));
    }
    return out;
  };
  impl->centroid = [](std::span<const Point> pts) {
    first_or_throw(pts);
    if (all_equal(pts)) return pts.front();
    double x = 0, y = 0;
    for (const auto& p : pts) {
      x += p[0] * std::cos(p[1]);
      y += p[0] * std::sin(p[1]);
    }
    const auto n = static_cast<double>(pts.size());
    x /= n;
    y /= n;
    return Point::of(std::hypot(x, y), mod2pi(std::atan2(y, x)));
  };
  impl->embedding_dim = 2;
  impl->embed = [](const Point& p) {
    return std::array<double, 4>{p[0] * std::cos(p[1]), p[0] * std::sin(p[1]), 0, 0};
  };
  return Space(std::move(impl));
}

Space Space::sphere() {
  auto impl = std::make_shared<Impl>();
  impl->kind = SpaceKind::sphere;
  impl->label = "sphere";
  impl->arity = 2;
  impl->distance = chordal;
  // Always leads with infinity and a logarithmic ladder of radii so that
  // behaviour near infinity is probed.
  impl->sample = [](std::size_t count, std::uint64_t seed, Region region) {
    std::vector<Point> out;
    out.push_back(Point::infinity());
    for (double r = 1.0; r <= 1e6 && out.size() < count; r *= 10.0)
      out.push_back(Point::of(r * std::cos(0.5), r * std::sin(0.5)));
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (out.size() < count) {
      const double r = region.radius * std::sqrt(u(rng));
      const double a = kTwoPi * u(rng);
      out.push_back(Point::of(r * std::cos(a), r * std::sin(a)));
    }
    out.resize(std::min(out.size(), count));
    return out;
  };
  impl->ring = [](const Point& x, double delta, std::size_t count) {
    std::vector<Point> out;
    if (x.at_infinity) {
      if (delta >= 2.0) return out;
      const double R = std::sqrt(4.0 / (delta * delta) - 1.0);
      return planar_ring(0.0, 0.0, R, count);
    }
    const double rho = 0.5 * delta * (1.0 + x[0] * x[0] + x[1] * x[1]);
    return planar_ring(x[0], x[1], rho, count);
  };
  impl->contains = [](const Point& p) { return p.at_infinity || (std::isfinite(p[0]) && std::isfinite(p[1])); };
  impl->centroid = [](std::span<const Point> pts) {
    first_or_throw(pts);
    if (all_equal(pts)) return pts.front();
    double X = 0, Y = 0, Z = 0;
    for (const auto& p : pts) {
      const auto e = stereographic(p);
      X += e[0];
      Y += e[1];
      Z += e[2];
    }
    return inverse_stereographic(X, Y, Z);
  };
  impl->embedding_dim = 3;
  impl->embed = stereographic;
  return Space(std::move(impl));
}

Space Space::discrete() {
  auto impl = std::make_shared<Impl>();
  impl->kind = SpaceKind::discrete;
  impl->label = "discrete";
  impl->arity = 1;
  impl->distance = [](const Point& p, const Point& q) { return std::llround(p[0]) == std::llround(q[0]) ? 0.0 : 1.0; };
  impl->sample = [](std::size_t count, std::uint64_t, Region) {
    std::vector<Point> out;
    for (std::size_t i = 1; i <= count; ++i) out.push_back(Point::of(static_cast<double>(i)));
    return out;
  };
  impl->ring = [](const Point& x, double delta, std::size_t count) {
    std::vector<Point> out;
    if (delta < 1.0) return out;
    const long base = std::llround(x[0]);
    for (long k = 1; out.size() < count && k <= static_cast<long>(count); ++k) {
      out.push_back(Point::of(static_cast<double>(base + k)));
      if (base - k >= 1 && out.size() < count) out.push_back(Point::of(static_cast<double>(base - k)));
    }
    return out;
  };
  impl->contains = [](const Point& p) { return p[0] >= 1.0 && std::nearbyint(p[0]) == p[0]; };
  impl->centroid = [](std::span<const Point> pts) { return first_or_throw(pts); };
  return Space(std::move(impl));
}

Space Space::product_circles(int count) {
  if (count < 1 || count > 4) throw std::invalid_argument("product_circles supports 1..4 factors");
  auto impl = std::make_shared<Impl>();
  impl->kind = SpaceKind::product;
  impl->label = "product_circles(" + std::to_string(count) + ")";
  impl->arity = static_cast<std::uint8_t>(count);
  impl->distance = [count](const Point& p, const Point& q) {
    double d = 0;
    for (int i = 0; i < count; ++i) d = std::max(d, arc_distance(p[i], q[i]));
    return d;
  };
  impl->sample = [count](std::size_t n, std::uint64_t seed, Region) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    std::vector<Point> out;
    for (std::size_t i = 0; i < n; ++i) {
      Point p;
      p.dim = static_cast<std::uint8_t>(count);
      for (int k = 0; k < count; ++k) p[k] = u(rng);
      out.push_back(p);
    }
    return out;
  };
  impl->ring = [count](const Point& x, double delta, std::size_t) {
    std::vector<Point> out;
    if (delta > std::numbers::pi) return out;
    for (int k = 0; k < count; ++k) {
      for (double s : {1.0, -1.0}) {
        Point y = x;
        y[k] = mod2pi(x[k] + s * delta);
        out.push_back(y);
      }
    }
    for (double s : {1.0, -1.0}) {
      Point y = x;
      for (int k = 0; k < count; ++k) y[k] = mod2pi(x[k] + s * delta);
      out.push_back(y);
    }
    return out;
  };
  impl->contains = [count](const Point& p) {
    for (int k = 0; k < count; ++k)
      if (p[k] < 0.0 || p[k] >= kTwoPi) return false;
    return true;
  };
  impl->centroid = [count](std::span<const Point> pts) {
    Point out = first_or_throw(pts);
    for (int k = 0; k < count; ++k) out[k] = circular_mean(pts, static_cast<std::size_t>(k));
    return out;
  };
  return Space(std::move(impl));
}

Space Space::disjoint_circles(int count) {
  if (count < 1) throw std::invalid_argument("disjoint_circles needs at least one circle");
  auto impl = std::make_shared<Impl>();
  impl->kind = SpaceKind::disjoint_union;
  impl->label = "disjoint_circles(" + std::to_string(count) + ")";
  impl->arity = 2;
  impl->distance = [](const Point& p, const Point& q) {
    if (std::llround(p[0]) != std::llround(q[0])) return 1.0;
    return chord_distance(p[1], q[1]);
  };
  impl->sample = [count](std::size_t n, std::uint64_t seed, Region) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(0, count - 1);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    std::vector<Point> out;
    for (std::size_t i = 0; i < n; ++i) {
      const int j = pick(rng);
      out.push_back(Point::of(static_cast<double>(j), u(rng)));
    }
    return out;
  };
  impl->ring = [](const Point& x, double delta, std::size_t) {
    std::vector<Point> out;
    if (delta >= 2.0) return out;
    const double a = 2.0 * std::asin(0.5 * delta);
    out.push_back(Point::of(x[0], mod2pi(x[1] + a)));
    out.push_back(Point::of(x[0], mod2pi(x[1] - a)));
    return out;
  };
  impl->contains = [count](const Point& p) {
    const long j = std::llround(p[0]);
    return j >= 0 && j < count && p[1] >= 0.0 && p[1] < kTwoPi;
  };
  impl->centroid = [](std::span<const Point> pts) {
    Point out = first_or_throw(pts);
    for (const auto& p : pts)
      if (std::llround(p[0]) != std::llround(out[0])) return out;
    out[1] = circular_mean(pts, 1);
    return out;
  };
  return Space(std::move(impl));
}

Space Space::shrinking_circles(int levels, double base_angle) {
  if (levels < 1) throw std::invalid_argument("shrinking_circles needs at least one level");
  auto impl = std::make_shared<Impl>();
  impl->kind = SpaceKind::subspace;
  impl->label = "shrinking_circles(" + std::to_string(levels) + "," + std::to_string(base_angle) + ")";
  impl->arity = 2;
  const double theta = mod2pi(base_angle);
  impl->distance = [](const Point& p, const Point& q) { return std::hypot(p[0] - q[0], chord_distance(p[1], q[1])); };
  auto member = [levels, theta](const Point& p) {
    if (p.dim != 2) return false;
    if (p[0] == 0.0) return chord_distance(p[1], theta) < 1e-9;
    if (p[0] < 0.0 || p[0] > 1.0 + 1e-9) return false;
    const double n = std::round(1.0 / p[0]);
    return n >= 1 && n <= levels && std::abs(p[0] - 1.0 / n) < 1e-9;
  };
  impl->contains = member;
  impl->membership = member;
  impl->sample = [levels, theta](std::size_t n, std::uint64_t seed, Region) {
    std::vector<Point> out;
    if (n == 0) return out;
    out.push_back(Point::of(0.0, theta));
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> pick(1, levels);
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    while (out.size() < n) out.push_back(Point::of(1.0 / pick(rng), u(rng)));
    return out;
  };
  impl->ring = [levels](const Point& x, double delta, std::size_t count) {
    std::vector<Point> out;
    for (int m = 1; m <= levels && out.size() < count; ++m) {
      const double dt = 1.0 / m - x[0];
      if (std::abs(dt) > delta) continue;
      const double chord = std::sqrt(std::max(0.0, delta * delta - dt * dt));
      if (chord > 2.0) continue;
      const double a = 2.0 * std::asin(0.5 * chord);
      out.push_back(Point::of(1.0 / m, mod2pi(x[1] + a)));
      if (a > 0.0 && out.size() < count) out.push_back(Point::of(1.0 / m, mod2pi(x[1] - a)));
    }
    return out;
  };
  impl->centroid = [](std::span<const Point> pts) {
    first_or_throw(pts);
    if (all_equal(pts)) return pts.front();
    double t = 0;
    for (const auto& p : pts) t += p[0];
    return Point::of(t / static_cast<double>(pts.size()), circular_mean(pts, 1));
  };
  impl->embedding_dim = 3;
  impl->embed = [](const Point& p) { return std::array<double, 4>{p[0], std::cos(p[1]), std::sin(p[1]), 0}; };
  return Space(std::move(impl));
}

Space Space::circle_subspace(std::string label, std::function<bool(const Point&)> membership) {
  const Space base = circle();
  auto impl = std::make_shared<Impl>(*base.impl_);
  impl->kind = SpaceKind::subspace;
  impl->label = "circle_subspace:" + std::move(label);
  impl->membership = std::move(membership);
  return Space(std::move(impl));
}

SpaceKind Space::kind() const { return impl_->kind; }
const std::string& Space::label() const { return impl_->label; }
std::uint8_t Space::arity() const { return impl_->arity; }

double Space::distance(const Point& p, const Point& q) const {
  if (p.dim != impl_->arity || q.dim != impl_->arity)
    throw std::invalid_argument("point representation does not match space " + impl_->label);
  if ((p.at_infinity || q.at_infinity) && impl_->kind != SpaceKind::sphere)
    throw std::invalid_argument("point at infinity outside the sphere");
  return impl_->distance(p, q);
}

std::vector<Point> Space::sample(std::size_t count, std::uint64_t seed, Region region) const {
  return impl_->sample(count, seed, region);
}

std::vector<Point> Space::ring(const Point& x, double delta, std::size_t count) const {
  auto pts = impl_->ring(x, delta, count);
  std::erase_if(pts, [&](const Point& p) { return !impl_->contains(p); });
  return pts;
}

bool Space::contains(const Point& p) const { return p.dim == impl_->arity && impl_->contains(p); }
bool Space::has_membership() const { return static_cast<bool>(impl_->membership); }
bool Space::is_member(const Point& p) const {
  return impl_->membership ? impl_->membership(p) : contains(p);
}
Point Space::centroid(std::span<const Point> cluster) const { return impl_->centroid(cluster); }
std::size_t Space::embedding_dim() const { return impl_->embedding_dim; }
std::array<double, 4> Space::embed(const Point& p) const {
  if (!impl_->embed) return {};
  return impl_->embed(p);
}

}  // namespace capdyn
