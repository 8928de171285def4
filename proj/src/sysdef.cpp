#include "capdyn/sysdef.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <memory>
#include <sstream>

#include "capdyn/compactify.hpp"

namespace capdyn {

namespace {

constexpr double kGoldenAngle = kTwoPi / kGoldenRatio;

System circle_rotation_system(double angle, std::string name) {
  return System{Space::circle(), [angle](const Point& p) { return Point::of(mod2pi(p[0] + angle)); },
                [angle](const Point& p) { return Point::of(mod2pi(p[0] - angle)); }, std::move(name)};
}

Sampler space_sampler(Space space, double radius = 1.0) {
  return [space, radius](std::size_t count, std::uint64_t seed) { return space.sample(count, seed, Region{radius}); };
}

std::map<std::string, Status> all_certified() {
  return {{detector_key::almost_period, Status::certified},
          {detector_key::cap, Status::certified},
          {detector_key::equicontinuity, Status::certified}};
}

FixtureDescriptor circle_rotation_fixture(std::string_view arg) {
  double angle = 0;
  std::string label(arg);
  if (arg == "golden") {
    angle = kGoldenAngle;
  } else if (auto slash = arg.find('/'); slash != std::string_view::npos) {
    long p = 0, q = 0;
    const auto a = arg.substr(0, slash), b = arg.substr(slash + 1);
    const auto ra = std::from_chars(a.data(), a.data() + a.size(), p);
    const auto rb = std::from_chars(b.data(), b.data() + b.size(), q);
    if (ra.ec != std::errc() || ra.ptr != a.data() + a.size() || rb.ec != std::errc() ||
        rb.ptr != b.data() + b.size() || q <= 0)
      throw FixtureLookupError("circle_rotation expects P/Q with Q > 0, got '" + label + "'");
    angle = kTwoPi * static_cast<double>(p) / static_cast<double>(q);
  } else {
    const auto r = std::from_chars(arg.data(), arg.data() + arg.size(), angle);
    if (r.ec != std::errc() || r.ptr != arg.data() + arg.size())
      throw FixtureLookupError("circle_rotation expects P/Q, golden or a decimal, got '" + label + "'");
    angle *= kTwoPi;
  }
  FixtureDescriptor f{"circle_rotation:" + label, circle_rotation_system(angle, "circle_rotation:" + label),
                      all_certified(), "rotation of the circle by 2 pi times the argument",
                      space_sampler(Space::circle()), std::nullopt};
  return f;
}

FixtureDescriptor dense_circle_subset() {
  // Orbit of angle 0 up to this many steps each way; membership is exact
  // agreement with one of them.
  constexpr long kBudget = 20000;
  auto orbit = std::make_shared<std::vector<double>>();
  const System rot = circle_rotation_system(kGoldenAngle, "golden");
  for (const auto& p : orbit_segment(rot, Point::of(0.0), -kBudget, kBudget)) orbit->push_back(p[0]);
  std::sort(orbit->begin(), orbit->end());
  auto member = [orbit](const Point& p) {
    const double a = mod2pi(p[0]);
    auto it = std::lower_bound(orbit->begin(), orbit->end(), a - 1e-9);
    if (it != orbit->end() && *it <= a + 1e-9) return true;
    // wrap-around at 0
    return (a < 1e-9 && orbit->back() > kTwoPi - 1e-9) || (a > kTwoPi - 1e-9 && orbit->front() < 1e-9);
  };
  const Space space = Space::circle_subspace("golden_orbit_of_0", member);
  System sys{space, rot.forward, rot.inverse, "dense_circle_subset"};
  Sampler sampler = [rot](std::size_t count, std::uint64_t) {
    std::vector<Point> out;
    Point f = Point::of(0.0), b = f;
    out.push_back(f);
    while (out.size() < count) {
      f = rot.forward(f);
      out.push_back(f);
      if (out.size() == count) break;
      b = rot.inverse(b);
      out.push_back(b);
    }
    out.resize(std::min(out.size(), count));
    return out;
  };
  return {"dense_circle_subset",
          sys,
          {{detector_key::almost_period, Status::certified}, {detector_key::cap, Status::refuted}},
          "the golden orbit of angle 0; membership checked against 20000 iterates each way",
          sampler,
          std::nullopt};
}

FixtureDescriptor finite_product_rotations() {
  const std::array<double, 3> angles{kGoldenAngle, kTwoPi / 3.0, kTwoPi / 2.0};
  auto step = [angles](double sign) {
    return [angles, sign](const Point& p) {
      const auto j = static_cast<std::size_t>(std::llround(p[0]));
      return Point::of(p[0], mod2pi(p[1] + sign * angles[j]));
    };
  };
  const Space space = Space::disjoint_circles(3);
  return {"finite_product_rotations", System{space, step(1.0), step(-1.0), "finite_product_rotations"},
          all_certified(), "three disjoint unit circles, pairwise distance 1, each rotated by its own angle",
          space_sampler(space), std::nullopt};
}

FixtureDescriptor discrete_bijections() {
  const System sys = doubling_bijection(8);
  return {"discrete_bijections", sys, all_certified(),
          "f_8 on the positive integers with the discrete metric; a finite-order isometry",
          space_sampler(sys.space), std::nullopt};
}

FixtureDescriptor shrinking_circles(double theta) {
  constexpr int kLevels = 64;
  const Space space = Space::shrinking_circles(kLevels, theta);
  // The circle at height t is rotated by the angle t.
  auto step = [](double sign) {
    return [sign](const Point& p) { return p[0] == 0.0 ? p : Point::of(p[0], mod2pi(p[1] + sign * p[0])); };
  };
  std::vector<Point> compactum{Point::of(0.0, mod2pi(theta))};
  for (int n = 1; n <= 20; ++n) compactum.push_back(Point::of(1.0 / n, mod2pi(theta)));
  return {"shrinking_circles",
          System{space, step(1.0), step(-1.0), "shrinking_circles"},
          {{detector_key::cap, Status::refuted}},
          "circles at heights 1/n for n <= 64 plus the single point (0, theta)",
          space_sampler(space),
          FiniteCompactum(space, std::move(compactum))};
}

FixtureDescriptor disk_twist() {
  const Space space = Space::disk(1.0);
  auto step = [](double sign) { return [sign](const Point& p) { return Point::of(p[0], mod2pi(p[1] + sign * p[0])); }; };
  return {"disk_twist",
          System{space, step(1.0), step(-1.0), "disk_twist"},
          {{detector_key::cap, Status::refuted}, {detector_key::almost_period, Status::refuted}},
          "closed unit disk in polar coordinates, (r, theta) -> (r, theta + r)",
          space_sampler(space),
          std::nullopt};
}

System linear_system(std::array<double, 4> m, std::array<double, 4> inv, std::string name) {
  auto apply = [](std::array<double, 4> a) {
    return [a](const Point& p) { return Point::of(a[0] * p[0] + a[1] * p[1], a[2] * p[0] + a[3] * p[1]); };
  };
  return System{Space::plane(), apply(m), apply(inv), std::move(name)};
}

System plane_rotation(double a, std::string name) {
  const double c = std::cos(a), s = std::sin(a);
  return linear_system({c, -s, s, c}, {c, s, -s, c}, std::move(name));
}

Sampler euclidean_sampler(double radius) {
  return [radius](std::size_t count, std::uint64_t seed) { return euclidean_plane_sample(count, seed, radius); };
}

FixtureDescriptor plane_irrational_rotation() {
  return {"plane_irrational_rotation",
          plane_rotation(kGoldenAngle, "plane_irrational_rotation"),
          {{detector_key::almost_period, Status::refuted}, {detector_key::almost_period_chordal, Status::certified}},
          "rotation of the plane by 2 pi / phi; Euclidean samples reach radius 100",
          euclidean_sampler(100.0),
          std::nullopt};
}

FixtureDescriptor conjugated_rotation() {
  // S R S^-1 with S = diag(1, 2)
  const double c = std::cos(kGoldenAngle), s = std::sin(kGoldenAngle);
  return {"conjugated_rotation",
          linear_system({c, -0.5 * s, 2.0 * s, c}, {c, 0.5 * s, -2.0 * s, c}, "conjugated_rotation"),
          {{detector_key::equicontinuity, Status::certified}},
          "golden rotation conjugated by diag(1, 2); orbits are ellipses",
          space_sampler(Space::plane(), 1.0),
          std::nullopt};
}

FixtureDescriptor plane_translation() {
  return {"plane_translation",
          System{Space::plane(), [](const Point& p) { return Point::of(p[0] + 1.0, p[1]); },
                 [](const Point& p) { return Point::of(p[0] - 1.0, p[1]); }, "plane_translation"},
          {{detector_key::almost_period, Status::refuted},
           {detector_key::almost_period_chordal, Status::refuted},
           {detector_key::cap_chordal, Status::refuted}},
          "z -> z + 1 on the plane",
          euclidean_sampler(100.0),
          std::nullopt};
}

FixtureDescriptor annulus_rotation() {
  const Space space = Space::disk(std::numeric_limits<double>::infinity());
  auto step = [](double sign) {
    return [sign](const Point& p) { return Point::of(p[0], mod2pi(p[1] + sign * kGoldenAngle)); };
  };
  Sampler sampler = [](std::size_t count, std::uint64_t seed) {
    constexpr std::array<double, 3> radii{1.0, 1.5, 2.0};
    auto angles = Space::circle().sample(count, seed);
    std::vector<Point> out;
    for (std::size_t i = 0; i < count; ++i) out.push_back(Point::of(radii[i % 3], angles[i][0]));
    return out;
  };
  return {"annulus_rotation", System{space, step(1.0), step(-1.0), "annulus_rotation"}, all_certified(),
          "golden rotation of the plane in polar form, sampled on the radii 1, 1.5 and 2", sampler, std::nullopt};
}

FixtureDescriptor identity_fixture() {
  const Space space = Space::discrete();
  auto id = [](const Point& p) { return p; };
  return {"identity", System{space, id, id, "identity"}, all_certified(),
          "identity of the positive integers with the discrete metric", space_sampler(space), std::nullopt};
}

std::string registry_listing() {
  std::ostringstream os;
  const auto names = fixture_names();
  for (std::size_t i = 0; i < names.size(); ++i) os << (i ? ", " : "") << names[i];
  return os.str();
}

}  // namespace

long doubling_bijection_value(long n, long k) {
  if (k <= n) return 2 * k;
  if (k <= 2 * n) return 2 * (k - n) - 1;
  return k;
}

System doubling_bijection(long n) {
  auto inverse = [n](long m) {
    if (m > 2 * n) return m;
    return m % 2 == 0 ? m / 2 : n + (m + 1) / 2;
  };
  return System{Space::discrete(),
                [n](const Point& p) { return Point::of(static_cast<double>(doubling_bijection_value(n, std::llround(p[0])))); },
                [inverse](const Point& p) { return Point::of(static_cast<double>(inverse(std::llround(p[0])))); },
                "doubling_bijection:" + std::to_string(n)};
}

std::vector<std::string> fixture_names() {
  return {"dense_circle_subset", "finite_product_rotations", "discrete_bijections",
          "shrinking_circles",   "disk_twist",               "plane_irrational_rotation",
          "circle_rotation:3/8", "circle_rotation:golden",   "conjugated_rotation",
          "plane_translation",   "annulus_rotation",         "identity"};
}

FixtureDescriptor fixture(std::string_view name) {
  std::string_view head = name, arg;
  if (auto sep = name.find_first_of(": "); sep != std::string_view::npos) {
    head = name.substr(0, sep);
    arg = name.substr(sep + 1);
  }
  if (head == "circle_rotation") {
    if (arg.empty()) throw FixtureLookupError("circle_rotation needs an argument such as 3/8 or golden");
    return circle_rotation_fixture(arg);
  }
  if (head == "shrinking_circles") {
    double theta = 0;
    if (!arg.empty()) {
      const auto r = std::from_chars(arg.data(), arg.data() + arg.size(), theta);
      if (r.ec != std::errc() || r.ptr != arg.data() + arg.size())
        throw FixtureLookupError("shrinking_circles expects a decimal angle, got '" + std::string(arg) + "'");
    }
    return shrinking_circles(theta);
  }
  if (arg.empty()) {
    if (head == "dense_circle_subset") return dense_circle_subset();
    if (head == "finite_product_rotations") return finite_product_rotations();
    if (head == "discrete_bijections") return discrete_bijections();
    if (head == "disk_twist") return disk_twist();
    if (head == "plane_irrational_rotation") return plane_irrational_rotation();
    if (head == "conjugated_rotation") return conjugated_rotation();
    if (head == "plane_translation") return plane_translation();
    if (head == "annulus_rotation") return annulus_rotation();
    if (head == "identity") return identity_fixture();
  }
  throw FixtureLookupError("unknown fixture '" + std::string(name) + "'; registered: " + registry_listing());
}

}  // namespace capdyn
