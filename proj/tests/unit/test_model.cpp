#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "netpublic/model.hpp"
#include "oracle.hpp"

using namespace netpublic;

namespace {

const BenefitSpec kFamilies[] = {BenefitSpec::log(), BenefitSpec::sqrt(), BenefitSpec::power(0.15),
                                 BenefitSpec::power(0.7)};

GameParams game(std::vector<double> types, double k = 1.0, BenefitSpec b = BenefitSpec::log(),
                double c = 1.0) {
  GameParams p;
  p.types = TypeVector(std::move(types));
  p.k = k;
  p.c = c;
  p.benefit = b;
  return p;
}

}  // namespace

TEST_CASE("benefit evaluations") {
  CHECK(evaluate_benefit(BenefitSpec::log(), 2.0, BenefitMode::Deriv) == doctest::Approx(0.5));
  CHECK(evaluate_benefit(BenefitSpec::sqrt(), 1.0, BenefitMode::DerivInv) ==
        doctest::Approx(0.25));
  CHECK(evaluate_benefit(BenefitSpec::power(0.15), 1.0, BenefitMode::Value) == 1.0);
  CHECK(std::isinf(BenefitSpec::log().value(0.0)));
  CHECK_THROWS_AS(BenefitSpec::power(1.0), std::invalid_argument);
  CHECK_THROWS_AS(parse_benefit_family("cubic"), std::invalid_argument);
}

TEST_CASE("sqrt inverse marginal agrees with a numeric root") {
  // 1/(2 sqrt z) = m solved by bisection.
  for (double m : {0.1, 1.0, 3.0}) {
    double lo = 1e-12, hi = 1e6;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (1.0 / (2.0 * std::sqrt(mid)) > m ? lo : hi) = mid;
    }
    CHECK(BenefitSpec::sqrt().deriv_inverse(m) == doctest::Approx(lo).epsilon(1e-9));
  }
}

TEST_CASE("f is increasing and concave, and f'^-1 inverts f'") {
  for (const auto& spec : kFamilies) {
    CAPTURE(spec.describe());
    for (double z = 1e-6; z <= 1e6; z *= 3.7) {
      CHECK(spec.deriv(z) > 0.0);
      CHECK(spec.deriv(z * 1.01) < spec.deriv(z));
      CHECK(spec.value(z * 1.01) > spec.value(z));
      const double back = spec.deriv_inverse(spec.deriv(z));
      CHECK(std::abs(back - z) <= 1e-9 * z);
    }
    CHECK(spec.deriv(1e-12) > 1e3);
    CHECK(spec.deriv(1e12) < 1e-2);
  }
}

TEST_CASE("isolation demand examples") {
  auto d = isolation_demand(0.0, 1.0, BenefitSpec::log());
  CHECK(d.x_hat == 0.0);
  CHECK(d.y_hat == doctest::Approx(1.0));
  d = isolation_demand(0.5, 1.0, BenefitSpec::log());
  CHECK(d.x_hat == doctest::Approx(oracle::own_provision(BenefitSpec::log(), 0.5, 1.0, 0.0)));
  CHECK(d.x_hat == doctest::Approx(0.5));
  CHECK(d.y_hat == doctest::Approx(0.5));
  d = isolation_demand(1.0, 1.0, BenefitSpec::sqrt());
  CHECK(d.x_hat == doctest::Approx(oracle::own_provision(BenefitSpec::sqrt(), 1.0, 1.0, 0.0)));
  CHECK(d.x_hat == doctest::Approx(0.25));
  CHECK(d.y_hat == 0.0);
}

TEST_CASE("isolation demand matches numeric maximization for every family") {
  for (const auto& spec : kFamilies) {
    for (double t : {0.03, 0.3, 0.5, 0.81, 0.99}) {
      for (double c : {0.2, 1.0, 2.5}) {
        const auto d = isolation_demand(t, c, spec);
        CHECK(d.x_hat == doctest::Approx(oracle::own_provision(spec, t, c, 0.0)).epsilon(1e-6));
        CHECK(d.y_hat ==
              doctest::Approx(oracle::own_provision(spec, 1.0 - t, c, 0.0)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("isolation demand is monotone in type and zero only at the corners") {
  for (const auto& spec : kFamilies) {
    IsolationDemand prev = isolation_demand(0.0, 1.0, spec);
    CHECK(prev.x_hat == 0.0);
    CHECK(prev.y_hat > 0.0);
    for (int s = 1; s < 100; ++s) {
      const auto d = isolation_demand(s / 100.0, 1.0, spec);
      CHECK(d.x_hat > prev.x_hat);
      CHECK(d.y_hat < prev.y_hat);
      CHECK(d.x_hat > 0.0);
      CHECK(d.y_hat > 0.0);
      prev = d;
    }
    const auto top = isolation_demand(1.0, 1.0, spec);
    CHECK(top.y_hat == 0.0);
    CHECK(top.x_hat > 0.0);
  }
}

TEST_CASE("more extreme types demand more in total") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const auto& spec : kFamilies) {
    for (int r = 0; r < 1000; ++r) {
      const double ti = u(rng), tj = u(rng);
      const auto di = isolation_demand(ti, 1.0, spec);
      const auto dj = isolation_demand(tj, 1.0, spec);
      if (std::max(ti, 1.0 - ti) >= std::max(tj, 1.0 - tj)) {
        CHECK(di.total() >= dj.total() - 1e-12);
      } else {
        CHECK(dj.total() >= di.total() - 1e-12);
      }
    }
  }
}

TEST_CASE("log demands always sum to 1/c") {
  for (double c : {0.5, 1.0, 3.0}) {
    for (int s = 1; s < 200; ++s) {
      CHECK(std::abs(isolation_demand(s / 200.0, c, BenefitSpec::log()).total() - 1.0 / c) <=
            1e-12);
    }
  }
}

TEST_CASE("spillovers sum linked contributions") {
  const auto p = game({0.0, 0.5, 1.0});
  StrategyProfile s(3);
  CHECK(spillovers(s, 0).x == 0.0);
  s.x = {0.0, 1.0, 1.0};
  s.y = {0.0, 0.5, 0.0};
  s.g.set(0, 1);
  CHECK(spillovers(s, 0).x == 1.0);
  CHECK(spillovers(s, 0).y == 0.5);
  s.g.set(0, 2);
  CHECK(spillovers(s, 0).x == 2.0);
  (void)p;
}

TEST_CASE("utility examples") {
  auto p = game({0.0, 0.5, 1.0}, 0.4);
  StrategyProfile s(3);
  s.x = {0.0, 0.5, 1.0};
  s.y = {1.0, 0.5, 0.0};
  CHECK(utility(s, 1, p) == doctest::Approx(std::log(0.5) - 1.0).epsilon(1e-12));
  CHECK(utility(s, 2, p) == doctest::Approx(-1.0).epsilon(1e-12));
  // A link to someone providing nothing costs exactly k.
  s.x[0] = 0.0;
  s.y[0] = 0.0;
  s.g.set(2, 0);
  CHECK(utility(s, 2, p) == doctest::Approx(-1.4).epsilon(1e-12));
  // A positively weighted good that is not consumed.
  CHECK(std::isinf(utility(s, 0, p)));
}

TEST_CASE("utility agrees with the reference on random profiles") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (const auto& spec : kFamilies) {
    auto p = game({0.0, 0.2, 0.35, 0.6, 0.9, 1.0}, 0.3, spec, 0.8);
    for (int r = 0; r < 50; ++r) {
      StrategyProfile s(6);
      for (std::size_t i = 0; i < 6; ++i) {
        s.x[i] = u(rng);
        s.y[i] = u(rng);
        for (std::size_t j = 0; j < 6; ++j) {
          if (i != j && u(rng) < 0.6) s.g.set(i, j);
        }
      }
      for (std::size_t i = 0; i < 6; ++i) {
        CHECK(utility(s, i, p) == doctest::Approx(oracle::utility(s, i, p)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("utility is concave in own contributions") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  for (const auto& spec : kFamilies) {
    auto p = game({0.0, 0.4, 0.7, 1.0}, 0.2, spec);
    StrategyProfile s(4);
    for (std::size_t i = 0; i < 4; ++i) {
      s.x[i] = u(rng);
      s.y[i] = u(rng);
    }
    s.g.set(1, 2);
    for (int r = 0; r < 200; ++r) {
      StrategyProfile a = s, b = s, m = s;
      a.x[1] = u(rng);
      a.y[1] = u(rng);
      b.x[1] = u(rng);
      b.y[1] = u(rng);
      m.x[1] = 0.5 * (a.x[1] + b.x[1]);
      m.y[1] = 0.5 * (a.y[1] + b.y[1]);
      CHECK(utility(m, 1, p) >= 0.5 * (utility(a, 1, p) + utility(b, 1, p)) - 1e-12);
    }
  }
}

TEST_CASE("type vectors and parameters validate their inputs") {
  CHECK_THROWS_AS(TypeVector({0.1, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(TypeVector({0.0, 0.5, 0.5, 1.0}), std::invalid_argument);
  auto p = game({0.0, 1.0});
  p.k = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.k = 1.0;
  p.subsidy = {0.0, 1.0};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("type sampling") {
  const auto t3 = sample_types(TypeDistribution::uniform(), 3, 42);
  REQUIRE(t3.size() == 3);
  CHECK(t3[0] == 0.0);
  CHECK(t3[2] == 1.0);
  CHECK(t3[1] > 0.0);
  CHECK(t3[1] < 1.0);
  CHECK(sample_types(TypeDistribution::uniform(), 50, 8) ==
        sample_types(TypeDistribution::uniform(), 50, 8));
  CHECK_FALSE(sample_types(TypeDistribution::uniform(), 50, 8) ==
              sample_types(TypeDistribution::uniform(), 50, 9));
  CHECK_THROWS_AS(sample_types(TypeDistribution::uniform(), 2, 1), std::invalid_argument);

  // Smaller samples are contained in larger ones with the same seed.
  const auto small = sample_types(TypeDistribution::uniform(), 20, 4);
  const auto large = sample_types(TypeDistribution::uniform(), 80, 4);
  for (double t : small) {
    CHECK(std::find(large.begin(), large.end(), t) != large.end());
  }
}

TEST_CASE("truncated normal sample mean") {
  // Mean of N(0.3, 0.25) truncated to [0, 1] by midpoint integration.
  const double mu = 0.3, sd = 0.25;
  double mass = 0.0, moment = 0.0;
  const int steps = 200000;
  for (int s = 0; s < steps; ++s) {
    const double z = (s + 0.5) / steps;
    const double dens = std::exp(-0.5 * (z - mu) * (z - mu) / (sd * sd));
    mass += dens;
    moment += z * dens;
  }
  const double expected = moment / mass;

  const auto types = sample_types(TypeDistribution::trunc_normal(mu, sd), 1000, 17);
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < types.size(); ++i) sum += types[i];
  CHECK(std::abs(sum / 998.0 - expected) < 0.05);

  const auto wide = sample_types(TypeDistribution::trunc_normal(0.5, 1.0), 1000, 17);
  sum = 0.0;
  for (std::size_t i = 1; i + 1 < wide.size(); ++i) sum += wide[i];
  CHECK(std::abs(sum / 998.0 - 0.5) < 0.05);
}

TEST_CASE("normal quantile inverts the cdf") {
  for (double p = 0.001; p < 1.0; p += 0.0371) {
    CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-7));
  }
}
