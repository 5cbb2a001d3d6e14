#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>

#include "netpublic/equilibrium.hpp"
#include "netpublic/random.hpp"

namespace netpublic {

namespace {

constexpr double kFixedPointTol = 1e-10;
constexpr std::size_t kFixedPointMaxSweeps = 10000;
constexpr std::size_t kCycleWindow = 64;
// Contribution updates below this are noise and are not applied.
constexpr double kContributionNoise = 1e-12;

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

FixedPointResult contribution_fixed_point(const LinkMatrix& g, const GameParams& params) {
  const std::size_t n = params.n();
  if (g.size() != n) throw std::invalid_argument("link matrix size differs from n");
  const auto demands = isolation_demands(params);
  const std::vector<LinkSet> out = [&] {
    std::vector<LinkSet> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = g.out_links(i);
    return v;
  }();

  FixedPointResult r;
  r.x.resize(n);
  r.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    r.x[i] = demands[i].x_hat;
    r.y[i] = demands[i].y_hat;
  }

  std::deque<std::vector<double>> history;
  while (r.sweeps < kFixedPointMaxSweeps) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double sx = 0.0, sy = 0.0;
      for (std::size_t j : out[i]) {
        sx += r.x[j];
        sy += r.y[j];
      }
      const double nx = std::max(demands[i].x_hat - sx, 0.0);
      const double ny = std::max(demands[i].y_hat - sy, 0.0);
      change = std::max({change, std::abs(nx - r.x[i]), std::abs(ny - r.y[i])});
      r.x[i] = nx;
      r.y[i] = ny;
    }
    ++r.sweeps;
    if (change < kFixedPointTol) {
      r.converged = true;
      return r;
    }

    std::vector<double> state(r.x);
    state.insert(state.end(), r.y.begin(), r.y.end());
    for (const auto& past : history) {
      if (max_gap(past, state) < kFixedPointTol) return r;  // revisited: a cycle
    }
    history.push_back(std::move(state));
    if (history.size() > kCycleWindow) history.pop_front();
  }
  return r;
}

DynamicsResult best_response_dynamics(const StrategyProfile& start, const GameParams& params,
                                      const DynamicsConfig& config) {
  if (config.max_rounds < 1) throw std::invalid_argument("max_rounds must be at least 1");
  const std::size_t n = params.n();
  if (start.size() != n) throw std::invalid_argument("start profile size differs from n");

  DynamicsResult r{start, 0, false};
  StrategyProfile& s = r.profile;
  Rng rng(config.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  while (r.rounds < config.max_rounds) {
    ++r.rounds;
    if (config.order == DynamicsConfig::Order::RandomPermutation) rng.shuffle(order);
    bool changed = false;
    for (std::size_t i : order) {
      const auto c = optimal_contributions(params, i, spillovers(s, i));
      const double dx = std::abs(c.x - s.x[i]);
      const double dy = std::abs(c.y - s.y[i]);
      if (dx > kContributionNoise || dy > kContributionNoise) {
        s.x[i] = c.x;
        s.y[i] = c.y;
        if (dx > kDeviationTol || dy > kDeviationTol) changed = true;
      }

      const double current = utility(s, i, params);
      const BestResponse br = best_response(i, s, params, config.mode);
      if (br.utility > current + kDeviationTol) {
        s.g.clear_row(i);
        for (std::size_t j : br.links) s.g.set(i, j);
        s.x[i] = br.x;
        s.y[i] = br.y;
        changed = true;
      }
    }
    if (!changed) {
      r.converged = true;
      break;
    }
  }
  return r;
}

}  // namespace netpublic
