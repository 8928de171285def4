#include <doctest.h>

#include <cmath>
#include <deque>

#include "capdyn/almost_period.hpp"
#include "capdyn/sysdef.hpp"

using namespace capdyn;

namespace {

// Oracle for rotations of the circle: the displacement of h^n is the arc
// length of n * alpha, the same for every point, evaluated in long double
// from the closed form.
double rotation_displacement(long double alpha, long n) {
  const long double two_pi = 2.0L * 3.141592653589793238462643383279502884L;
  long double a = std::fmod(static_cast<long double>(n) * alpha, two_pi);
  if (a < 0) a += two_pi;
  return static_cast<double>(std::fmin(a, two_pi - a));
}

// Oracle for the window length: largest gap between consecutive n in
// [-span, span] with displacement < eps.
long max_gap_oracle(long double alpha, long span, double eps) {
  long prev = -span - 1, gap = 0;
  bool any = false;
  for (long n = -span; n <= span; ++n) {
    if (rotation_displacement(alpha, n) < eps) {
      if (any) gap = std::max(gap, n - prev);
      prev = n;
      any = true;
    }
  }
  return gap;
}

}  // namespace

TEST_CASE("rational rotation 3/8 has almost period 8") {
  const auto f = fixture("circle_rotation:3/8");
  const auto sample = f.sampler(64, 0);
  const auto v = find_almost_period(f.system, sample, WindowSearch{0.1, 1000, 10000, 0.0});
  REQUIRE(v.certified());
  CHECK(v.certificate.at("N") == 8.0);
  for (long k = -20; k <= 20; ++k) CHECK(displacement(f.system, sample, 8 * k) <= 1e-12);
  for (long n = 1; n < 8; ++n) CHECK(displacement(f.system, sample, n) > 0.1);
}

TEST_CASE("golden rotation window matches the closed-form scan") {
  const long double alpha = 2.0L * 3.141592653589793238462643383279502884L /
                            ((1.0L + std::sqrt(5.0L)) / 2.0L);
  const long span = 20000;
  const auto f = fixture("circle_rotation:golden");
  const auto sample = f.sampler(8, 0);
  const auto v = find_almost_period(f.system, sample, WindowSearch{0.1, 1000, span, 0.0});
  REQUIRE(v.certified());
  CHECK(static_cast<long>(v.certificate.at("N")) == max_gap_oracle(alpha, span, 0.1));
  // Frozen value of the oracle.
  CHECK(v.certificate.at("N") == 55.0);
}

TEST_CASE("displacement series agrees with pointwise displacement") {
  const auto f = fixture("disk_twist");
  const auto sample = f.sampler(16, 3);
  const auto series = displacement_series(f.system, sample, 50);
  for (long n = -50; n <= 50; ++n) CHECK(series[static_cast<std::size_t>(n + 50)] == displacement(f.system, sample, n));
}

TEST_CASE("margin equals the sliding-window oracle") {
  const auto f = fixture("circle_rotation:golden");
  const auto sample = f.sampler(4, 0);
  const long span = 3000, window = 200;
  const auto v = find_almost_period(f.system, sample, WindowSearch{0.1, window, span, 0.0});
  REQUIRE(v.certified());
  const auto series = displacement_series(f.system, sample, span);
  double worst = 0;
  for (std::size_t s = 0; s + window <= series.size(); ++s) {
    double best = INFINITY;
    for (long j = 0; j < window; ++j) best = std::fmin(best, series[s + static_cast<std::size_t>(j)]);
    worst = std::fmax(worst, best);
  }
  CHECK(v.certificate.at("margin") == 0.1 - worst);
}

TEST_CASE("disk twist is refuted with a replayable window witness") {
  const auto f = fixture("disk_twist");
  const auto sample = f.sampler(64, 0);
  const auto v = find_almost_period(f.system, sample, WindowSearch{0.1, 1000, 10000, 0.0});
  REQUIRE(v.refuted());
  REQUIRE(v.witness);
  const auto& w = std::get<WindowWitness>(*v.witness);
  CHECK(w.length == 1000);
  CHECK(w.min_displacement >= 0.1);
  CHECK(replay_witness(f.system, sample, *v.witness) <= 1e-12);
}

TEST_CASE("equicontinuity: rotation certified, twist refuted") {
  const auto rot = fixture("circle_rotation:golden");
  const auto sched = default_probe_schedule();
  const auto ok = equicontinuity_modulus(rot.system, Point::of(1.0), 0.1, 10000, sched);
  REQUIRE(ok.certified());
  CHECK(ok.certificate.at("delta") == 0.05);

  const auto tw = fixture("disk_twist");
  const auto bad = equicontinuity_modulus(tw.system, Point::of(0.5, 0.0), 0.1, 10000, sched);
  REQUIRE(bad.refuted());
  const auto& w = std::get<PairWitness>(*bad.witness);
  CHECK(w.distance >= 0.1);
  CHECK(tw.system.space.distance(w.x, w.y) == doctest::Approx(w.delta).epsilon(1e-9));
  CHECK(replay_witness(tw.system, {}, *bad.witness) <= 1e-12);
}

TEST_CASE("equicontinuity on an isolated point") {
  const auto f = fixture("identity");
  const auto v = equicontinuity_modulus(f.system, Point::of(4.0), 0.1, 100, default_probe_schedule());
  CHECK(v.certified());
  CHECK(v.certificate.at("isolated") == 1.0);
}

TEST_CASE("classify_cap causes") {
  const ClosureParams closure{0.1, 10000, 0};
  CapBudgets b;
  b.closure = closure;
  {
    const auto f = fixture("disk_twist");
    const auto v = classify_cap(f.system, f.sampler(64, 0), 0.1, b);
    CHECK(v.refuted());
    CHECK(v.cause == "equicontinuity");
  }
  {
    const auto f = fixture("shrinking_circles");
    const auto v = classify_cap(f.system, f.sampler(64, 0), 0.1, b, f.test_compactum);
    CHECK(v.refuted());
    CHECK(v.cause == "compactum_closure");
    CHECK(replay_witness(f.system, {}, *v.witness) == 0.0);
  }
  {
    const auto f = fixture("dense_circle_subset");
    const auto v = classify_cap(f.system, f.sampler(16, 0), 0.1, b);
    CHECK(v.refuted());
    CHECK(v.cause == "orbit_closure");
  }
  {
    const auto f = fixture("circle_rotation:3/8");
    const auto v = classify_cap(f.system, f.sampler(32, 0), 0.1, b);
    CHECK(v.certified());
  }
}

TEST_CASE("tampered witnesses fail replay") {
  const auto f = fixture("disk_twist");
  const auto sample = f.sampler(64, 0);
  const auto v = find_almost_period(f.system, sample, WindowSearch{0.1, 1000, 10000, 0.0});
  REQUIRE(v.witness);
  auto w = std::get<WindowWitness>(*v.witness);
  w.min_displacement += 1e-9;
  CHECK(replay_witness(f.system, sample, w) > 1e-12);
  w.start = 0;  // the block now contains n = 0
  CHECK(std::isinf(replay_witness(f.system, sample, w)));
}

TEST_CASE("status names round trip") {
  for (auto s : {Status::certified, Status::refuted, Status::inconclusive})
    CHECK(status_from_string(to_string(s)) == s);
  CHECK_THROWS_AS(status_from_string("maybe"), std::invalid_argument);
}
