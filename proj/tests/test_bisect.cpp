#include <doctest.h>

#include "midco/bisect.hpp"

#include <climits>
#include <cmath>
#include <random>
#include <stdexcept>

using namespace midco;

namespace {

constexpr double kKappa = GoldenConstants::kappa;

// deterministic "adversarial" noise in [0,1)
double hash_noise(double t) {
  double s = std::sin(t * 12.9898 + 4.1414) * 43758.5453;
  return s - std::floor(s);
}

int prop3_budget(double gamma, double spread) {
  return 2 + static_cast<int>(std::ceil(std::log((kKappa - 1.0) * gamma / spread) /
                                        std::log(GoldenConstants::lambda1)));
}

int prop4_budget(double gamma, double spread, double tau) {
  int by_gamma = gamma > 0.0 ? 4 + static_cast<int>(std::ceil(
                                       std::log((kKappa - 1.0) * gamma / spread) /
                                       std::log(GoldenConstants::lambda1)))
                             : INT_MAX;
  int by_tau =
      5 + static_cast<int>(std::ceil(std::log(tau) / std::log(GoldenConstants::lambda1)));
  return std::min(by_gamma, by_tau);
}

}  // namespace

TEST_CASE("golden constants") {
  CHECK(GoldenConstants::lambda1 * GoldenConstants::lambda1 ==
        doctest::Approx(GoldenConstants::lambda0).epsilon(1e-14));
  CHECK(GoldenConstants::lambda0_plus < GoldenConstants::lambda1_plus);
  CHECK(kKappa == doctest::Approx(5.23606797749979).epsilon(1e-14));
}

TEST_CASE("integer_min_exact nearest integer") {
  auto r = integer_min_exact([](std::int64_t x) { return (x - 0.47) * (x - 0.47); }, -5, 5);
  CHECK(r.arg == 0);
  CHECK(r.value == doctest::Approx(0.2209));
}

TEST_CASE("integer_min_exact monotone") {
  auto r = integer_min_exact([](std::int64_t x) { return double(x); }, -3, 7);
  CHECK(r.arg == -3);
}

TEST_CASE("integer_min_exact matches enumeration on huge ranges") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> center(-9e5, 9e5);
  std::uniform_real_distribution<double> curv(0.1, 4.0);
  for (int trial = 0; trial < 100; ++trial) {
    double c = center(rng), a = curv(rng);
    auto f = [&](std::int64_t x) { return a * (x - c) * (x - c); };
    auto r = integer_min_exact(f, -1000000, 1000000);
    std::int64_t wlo = std::max<std::int64_t>(-1000000, std::llround(c) - 500);
    std::int64_t whi = std::min<std::int64_t>(1000000, std::llround(c) + 500);
    std::int64_t best = wlo;
    for (std::int64_t x = wlo; x <= whi; ++x)
      if (f(x) < f(best)) best = x;
    CHECK(r.arg == best);
    CHECK(r.evals <= 2 * std::log2(2e6) + 4);
  }
}

TEST_CASE("golden_min_continuous on a symmetric vee") {
  NoisyFn fn{[](double t) { return std::abs(t - 0.5); }, 1e-9, 0.5};
  auto r = golden_min_continuous(fn);
  CHECK(std::abs(r.x - 0.5) <= kKappa * 1e-8);
  CHECK(r.value <= (kKappa - 1.0) * 1e-9 + 1e-15);
}

TEST_CASE("golden_min_continuous under adversarial noise meets the stated accuracy") {
  const double gamma = 1e-3;
  NoisyFn fn{[&](double t) {
               double phi = (t - 0.3) * (t - 0.3);
               return phi + gamma * hash_noise(t);
             },
             gamma, 1.0};
  auto r = golden_min_continuous(fn);
  CHECK(r.value <= (kKappa - 1.0) * gamma);  // min phi = 0
  CHECK(r.evals <= prop3_budget(gamma, 1.0));
  CHECK(prop3_budget(gamma, 1.0) == 14);
}

TEST_CASE("golden_min_continuous eliminations are sound") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> cdist(-0.2, 1.2);
  std::uniform_real_distribution<double> adist(0.5, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    double c = cdist(rng), a = adist(rng), gamma = 1e-3;
    auto phi = [=](double t) { return a * (t - c) * (t - c); };
    std::vector<GoldenOptions::Elimination> trace;
    GoldenOptions opt;
    opt.trace = &trace;
    NoisyFn fn{[&](double t) { return phi(t) + gamma * hash_noise(t * 3.7 + trial); }, gamma,
               a * 2.0};
    golden_min_continuous(fn, opt);
    for (const auto& e : trace) {
      for (int i = 0; i <= 10; ++i) {
        double t = e.removed_lo + (e.removed_hi - e.removed_lo) * i / 10.0;
        CHECK(phi(t) >= e.certified_by - 1e-12);
      }
    }
  }
}

TEST_CASE("golden_min_integer with two candidates") {
  NoisyFn fn{[](double t) { return (t - 0.8) * (t - 0.8); }, 0.0, 1.0};
  auto r = golden_min_integer(fn, ScaledLattice{0.0, 1.0});
  CHECK(r.x == doctest::Approx(1.0));
}

TEST_CASE("golden_min_integer on a 11-point lattice") {
  const double gamma = 1e-4;
  NoisyFn fn{[&](double t) {
               return (t - 0.47) * (t - 0.47) + gamma * hash_noise(t * 7.3);
             },
             gamma, 1.0};
  ScaledLattice lat{0.0, 0.1};
  auto r = golden_min_integer(fn, lat);
  CHECK(r.x == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.value <= 0.0009 + kKappa * gamma);
  CHECK(r.evals <= prop4_budget(gamma, 1.0, 0.1));
}

TEST_CASE("golden_min_integer rejects an empty lattice") {
  NoisyFn fn{[](double t) { return t; }, 0.0, 1.0};
  CHECK_THROWS_AS((void)golden_min_integer(fn, ScaledLattice{2.5, 10.0}), std::invalid_argument);
}

TEST_CASE("golden_min_integer never worse than kappa*gamma vs enumeration") {
  // fixed family; the terminal inner-point comparison can cost one extra eval
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> cdist(-0.3, 1.3);
  std::uniform_real_distribution<double> adist(0.2, 6.0);
  std::uniform_real_distribution<double> t0dist(-0.05, 0.05);
  for (int trial = 0; trial < 300; ++trial) {
    double c = cdist(rng), a = adist(rng);
    double gamma = (trial % 2) ? 1e-2 : 1e-4;
    double tau = (trial % 3 == 0) ? 1e-3 : ((trial % 3 == 1) ? 0.07 : 0.25);
    ScaledLattice lat{t0dist(rng), tau};
    auto phi = [=](double t) { return a * (t - c) * (t - c); };
    NoisyFn fn{[&](double t) { return phi(t) + gamma * hash_noise(t * 13.1 + trial); }, gamma,
               2.0 * a};
    auto r = golden_min_integer(fn, lat);
    double best = std::numeric_limits<double>::infinity();
    for (std::int64_t i = lat.index_lo(); i <= lat.index_hi(); ++i)
      best = std::min(best, phi(std::clamp(lat.point(i), 0.0, 1.0)));
    CHECK(r.value - kKappa * gamma <= best + 1e-12);
    CHECK(phi(r.x) >= best - 1e-12);
    CHECK(r.evals <= prop4_budget(gamma, 2.0 * a, tau));
    CHECK(lat.contains(r.x));
  }
}

TEST_CASE("constrained_min: certified infeasibility") {
  NoisyFn phi{[](double t) { return t; }, 1e-4, 1.0};
  NoisyFn g{[](double) { return 0.5; }, 1e-4, 1.0};
  auto r = constrained_min(phi, g, 1.0);
  CHECK(!r.feasible_found);
}

TEST_CASE("constrained_min: symmetric corridor") {
  NoisyFn phi{[](double t) { return t; }, 1e-6, 1.0};
  NoisyFn g{[](double t) { return std::abs(t - 0.5) - 0.2; }, 1e-6, 1.0};
  auto r = constrained_min(phi, g, 1.0);
  REQUIRE(r.feasible_found);
  CHECK(r.t_minus == doctest::Approx(0.3).epsilon(1e-3));
  CHECK(r.t_plus == doctest::Approx(0.7).epsilon(1e-3));
  CHECK(r.x == doctest::Approx(0.3).epsilon(0.05));
  // certified margins never cut into the true feasible set
  CHECK(r.t_minus - r.margin <= 0.3 + 1e-9);
  CHECK(r.t_plus + r.margin >= 0.7 - 1e-9);
}

TEST_CASE("constrained_min: feasible left endpoint via probing") {
  NoisyFn phi{[](double t) { return (t - 1.0) * (t - 1.0); }, 1e-6, 1.0};
  NoisyFn g{[](double t) { return t - 0.8; }, 1e-6, 1.0};
  ConstrainedMinOptions opt;
  opt.probe_endpoints = true;
  auto r = constrained_min(phi, g, 1.0, opt);
  REQUIRE(r.feasible_found);
  CHECK(r.t_minus == 0.0);
  CHECK(r.t_plus == doctest::Approx(0.8).epsilon(1e-3));
  CHECK(r.x == doctest::Approx(0.8).epsilon(0.02));
  CHECK(r.x_value == doctest::Approx(0.04).epsilon(0.2));
}

TEST_CASE("constrained_min g-evaluation budget") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> cdist(0.2, 0.8);
  for (int trial = 0; trial < 50; ++trial) {
    double c = cdist(rng);
    double gamma = 1e-4, theta = 1.0;
    NoisyFn phi{[](double t) { return t * t; }, gamma, 1.0};
    NoisyFn g{[&](double t) { return std::abs(t - c) - 0.15 + gamma * hash_noise(t + trial); },
              gamma, 1.0};
    auto r = constrained_min(phi, g, theta);
    REQUIRE(r.feasible_found);
    int gbudget = 3 +
                  static_cast<int>(std::ceil(std::log((kKappa - 1.0) * gamma / 1.0) /
                                             std::log(GoldenConstants::lambda1))) +
                  2 * static_cast<int>(std::ceil(std::log(gamma / theta) / std::log(0.5)));
    CHECK(r.g_evals <= gbudget);
    int pbudget = prop3_budget(gamma, 1.0);
    CHECK(r.phi_evals <= pbudget);
  }
}
