#include "netpublic/extensions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

#include "netpublic/best_response.hpp"
#include "netpublic/equilibrium.hpp"
#include "netpublic/random.hpp"

namespace netpublic {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

LinkMatrix closure(const LinkMatrix& g) {
  LinkMatrix c(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (g(i, j)) {
        c.set(i, j);
        c.set(j, i);
      }
    }
  }
  return c;
}

}  // namespace

// ---------------------------------------------------------------- two-way flow

double utility_two_way(const StrategyProfile& profile, std::size_t i, const GameParams& params) {
  const std::size_t n = profile.size();
  Spillover s;
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i && (profile.g(i, j) || profile.g(j, i))) {
      s.x += profile.x[j];
      s.y += profile.y[j];
    }
  }
  return consumption_benefit(params.benefit, params.type(i), profile.x[i] + s.x,
                             profile.y[i] + s.y) -
         params.cost(i) * (profile.x[i] + profile.y[i]) -
         params.k * static_cast<double>(profile.g.out_degree(i));
}

namespace {

// No player gains by changing its sponsored links and contributions while
// the links others sponsor to it stay in place.
bool two_way_stable(const StrategyProfile& s, const GameParams& params) {
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double current = utility_two_way(s, i, params);
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(j);
    }
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << others.size()); ++mask) {
      Spillover sp;
      for (std::size_t b = 0; b < others.size(); ++b) {
        const std::size_t j = others[b];
        if ((mask & (std::uint32_t{1} << b)) || s.g(j, i)) {
          sp.x += s.x[j];
          sp.y += s.y[j];
        }
      }
      const double u = link_set_value(params, i, sp) -
                       params.k * static_cast<double>(std::popcount(mask));
      if (u > current + kDeviationTol) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<StrategyProfile> brute_force_two_way_equilibria(const GameParams& params) {
  const std::size_t n = params.n();
  if (n > 4) throw std::invalid_argument("two-way brute force supports n <= 4");

  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) cells.emplace_back(i, j);
    }
  }

  std::vector<StrategyProfile> found;
  for (std::uint32_t code = 0; code < (std::uint32_t{1} << cells.size()); ++code) {
    StrategyProfile s(n);
    for (std::size_t b = 0; b < cells.size(); ++b) {
      if (code & (std::uint32_t{1} << b)) s.g.set(cells[b].first, cells[b].second);
    }
    for (auto& [x, y] : all_contribution_fixed_points(closure(s.g), params)) {
      s.x = std::move(x);
      s.y = std::move(y);
      if (two_way_stable(s, params)) found.push_back(s);
    }
  }
  return found;
}

// -------------------------------------------------------------- weighted links

double WeightedProfile::in_weight(std::size_t j) const {
  double total = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    if (i != j) total += weight(i, j);
  }
  return total;
}

void WeightedProfile::validate() const {
  const std::size_t n = size();
  if (y.size() != n || w.size() != n * n) throw std::invalid_argument("weighted profile shape");
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] < 0.0 || y[i] < 0.0) throw std::invalid_argument("contributions must be non-negative");
    if (weight(i, i) != 0.0) throw std::invalid_argument("self weight must be zero");
    for (std::size_t j = 0; j < n; ++j) {
      const double a = weight(i, j);
      if (a < 0.0 || a > 1.0) throw std::invalid_argument("weights must lie in [0, 1]");
    }
  }
}

double utility_weighted(const WeightedProfile& wp, std::size_t i, const GameParams& params) {
  const std::size_t n = wp.size();
  double sx = 0.0, sy = 0.0, total = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    const double a = wp.weight(i, j);
    sx += a * wp.x[j];
    sy += a * wp.y[j];
    total += a;
  }
  return consumption_benefit(params.benefit, params.type(i), wp.x[i] + sx, wp.y[i] + sy) -
         params.cost(i) * (wp.x[i] + wp.y[i]) - params.k * total;
}

namespace {

constexpr double kGoldenTol = 1e-8;
constexpr std::size_t kWeightedMaxCycles = 500;

double row_value(const GameParams& params, std::size_t i, const WeightedProfile& wp,
                 const std::vector<double>& row) {
  Spillover s;
  double total = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    s.x += row[j] * wp.x[j];
    s.y += row[j] * wp.y[j];
    total += row[j];
  }
  return link_set_value(params, i, s) - params.k * total;
}

// Maximizes a concave h on [0, 1], endpoints included.
template <class H>
std::pair<double, double> golden_max(H&& h) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0, b = 1.0;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double hc = h(c), hd = h(d);
  while (b - a > kGoldenTol) {
    if (hc >= hd) {
      b = d;
      d = c;
      hd = hc;
      c = b - phi * (b - a);
      hc = h(c);
    } else {
      a = c;
      c = d;
      hc = hd;
      d = a + phi * (b - a);
      hd = h(d);
    }
  }
  std::pair<double, double> best{0.5 * (a + b), h(0.5 * (a + b))};
  for (double edge : {0.0, 1.0}) {
    const double he = h(edge);
    if (he > best.second) best = {edge, he};
  }
  return best;
}

}  // namespace

WeightedResponse best_response_weighted(std::size_t i, const WeightedProfile& wp,
                                        const GameParams& params) {
  const std::size_t n = wp.size();
  if (n > 12) throw std::invalid_argument("weighted best response supports n <= 12");

  WeightedResponse r;
  r.weights.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) r.weights[j] = j == i ? 0.0 : wp.weight(i, j);
  double value = row_value(params, i, wp, r.weights);

  bool stationary = false;
  while (r.cycles < kWeightedMaxCycles) {
    ++r.cycles;
    bool moved = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      std::vector<double> trial = r.weights;
      const auto [alpha, v] = golden_max([&](double a) {
        trial[j] = a;
        return row_value(params, i, wp, trial);
      });
      if (v > value + 1e-12 && std::abs(alpha - r.weights[j]) > 1e-9) {
        r.weights[j] = alpha;
        value = v;
        moved = true;
      }
    }
    if (!moved) {
      stationary = true;
      break;
    }
  }
  r.stalled = !stationary;

  Spillover s;
  for (std::size_t j = 0; j < n; ++j) {
    s.x += r.weights[j] * wp.x[j];
    s.y += r.weights[j] * wp.y[j];
  }
  const auto c = optimal_contributions(params, i, s);
  r.x = c.x;
  r.y = c.y;
  r.utility = value;
  return r;
}

WeightedEquilibrium equilibrium_weighted(const GameParams& params, std::size_t max_rounds) {
  const std::size_t n = params.n();
  if (n > 12) throw std::invalid_argument("weighted equilibrium supports n <= 12");
  WeightedEquilibrium eq;
  eq.profile = WeightedProfile(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = isolation_demand(params, i);
    eq.profile.x[i] = d.x_hat;
    eq.profile.y[i] = d.y_hat;
  }

  constexpr double kChange = 1e-7;
  while (eq.rounds < max_rounds) {
    ++eq.rounds;
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      const auto br = best_response_weighted(i, eq.profile, params);
      double delta = std::max(std::abs(br.x - eq.profile.x[i]), std::abs(br.y - eq.profile.y[i]));
      for (std::size_t j = 0; j < n; ++j) {
        delta = std::max(delta, std::abs(br.weights[j] - eq.profile.weight(i, j)));
        eq.profile.weight(i, j) = br.weights[j];
      }
      eq.profile.x[i] = br.x;
      eq.profile.y[i] = br.y;
      if (delta > kChange) changed = true;
    }
    if (!changed) {
      eq.converged = true;
      break;
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (eq.profile.in_weight(j) > 1e-6) eq.recipients.push_back(j);
  }
  return eq;
}

// --------------------------------------------------------- perturbed utility

void PerturbationParams::validate(std::size_t n) const {
  if (eps1 < 0.0 || eps1 == 1.0) throw std::invalid_argument("eps1 must be >= 0 and != 1");
  if (eps2 < 0.0 || eps2 > 1.0) throw std::invalid_argument("eps2 must lie in [0, 1]");
  if (eps3 < 0.0 || eps3 > 1.0) throw std::invalid_argument("eps3 must lie in [0, 1]");
  if (!eps4.empty() && eps4.size() != n) throw std::invalid_argument("eps4 size mismatch");
  if (!eps5.empty() && eps5.size() != n) throw std::invalid_argument("eps5 size mismatch");
}

std::vector<std::size_t> path_distances(const LinkMatrix& g, std::size_t i) {
  const std::size_t n = g.size();
  std::vector<std::size_t> dist(n, 0);
  std::vector<std::uint8_t> seen(n, 0);
  seen[i] = 1;
  std::deque<std::size_t> queue{i};
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t v = 0; v < n; ++v) {
      if (g(u, v) && !seen[v]) {
        seen[v] = 1;
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

namespace {

// Discounted neighbor provision sum_j disc(d_j) * z_j^p, with zero providers
// contributing nothing.
double neighbor_mass(const std::vector<double>& z, const std::vector<std::size_t>& dist, double p,
                     double eps3) {
  double total = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j) {
    const std::size_t d = dist[j];
    if (d == 0 || z[j] <= 0.0) continue;
    double disc = 1.0;
    if (d > 1) {
      if (eps3 == 0.0) continue;
      disc = std::pow(eps3, static_cast<double>(d - 1));
    }
    total += disc * (p == 1.0 ? z[j] : std::pow(z[j], p));
  }
  return total;
}

double aggregate(double own, double mass, double p) {
  if (p == 1.0) return own + mass;
  const double inner = (own > 0.0 ? std::pow(own, p) : 0.0) + mass;
  return inner > 0.0 ? std::pow(inner, 1.0 / p) : 0.0;
}

struct PerturbedPlayer {
  double t;
  double cost;
  double link_cost;
  double p;
  double keep;  // 1 - eps2
};

PerturbedPlayer perturbed_player(const GameParams& params, const PerturbationParams& pert,
                                 std::size_t i) {
  return {params.type(i), params.cost(i) + (pert.eps4.empty() ? 0.0 : pert.eps4[i]),
          params.k + (pert.eps5.empty() ? 0.0 : pert.eps5[i]), 1.0 - pert.eps1,
          1.0 - pert.eps2};
}

// argmax_z weight f(A(z)) - cost z for one good, given discounted neighbor mass.
double best_own(const BenefitSpec& spec, double weight, double cost, double p, double mass) {
  if (weight == 0.0) return 0.0;
  if (p == 1.0) return std::max(spec.deriv_inverse(cost / weight) - mass, 0.0);
  auto slope = [&](double z) {
    const double a = aggregate(z, mass, p);
    return weight * spec.deriv(a) * std::pow(a / z, 1.0 - p) - cost;
  };
  double hi = std::max(1.0, spec.deriv_inverse(cost / weight));
  for (int guard = 0; guard < 200 && slope(hi) > 0.0; ++guard) hi *= 2.0;
  double lo = 0.0;
  while (hi - lo > 1e-10 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    if (slope(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double perturbed_value(const GameParams& params, const PerturbedPlayer& pl, double x, double y,
                       double mass_x, double mass_y, std::size_t links) {
  return weighted_benefit(params.benefit, pl.t, aggregate(x, pl.keep * mass_x, pl.p)) +
         weighted_benefit(params.benefit, 1.0 - pl.t, aggregate(y, pl.keep * mass_y, pl.p)) -
         (x + y) * pl.cost - static_cast<double>(links) * pl.link_cost;
}

}  // namespace

double utility_perturbed(const StrategyProfile& profile, std::size_t i, const GameParams& params,
                         const PerturbationParams& pert) {
  pert.validate(profile.size());
  const PerturbedPlayer pl = perturbed_player(params, pert, i);
  const auto dist = path_distances(profile.g, i);
  const double mx = neighbor_mass(profile.x, dist, pl.p, pert.eps3);
  const double my = neighbor_mass(profile.y, dist, pl.p, pert.eps3);
  return perturbed_value(params, pl, profile.x[i], profile.y[i], mx, my,
                         profile.g.out_degree(i));
}

bool solve_perturbed_contributions(StrategyProfile& profile, const GameParams& params,
                                   const PerturbationParams& pert) {
  pert.validate(profile.size());
  const std::size_t n = profile.size();
  std::vector<std::vector<std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = path_distances(profile.g, i);

  for (std::size_t i = 0; i < n; ++i) {
    if (!(perturbed_player(params, pert, i).cost > 0.0)) return false;
  }
  for (std::size_t sweep = 0; sweep < 5000; ++sweep) {
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const PerturbedPlayer pl = perturbed_player(params, pert, i);
      const double mx = pl.keep * neighbor_mass(profile.x, dist[i], pl.p, pert.eps3);
      const double my = pl.keep * neighbor_mass(profile.y, dist[i], pl.p, pert.eps3);
      const double nx = best_own(params.benefit, pl.t, pl.cost, pl.p, mx);
      const double ny = best_own(params.benefit, 1.0 - pl.t, pl.cost, pl.p, my);
      change = std::max({change, std::abs(nx - profile.x[i]), std::abs(ny - profile.y[i])});
      profile.x[i] = nx;
      profile.y[i] = ny;
    }
    if (change < 1e-10) return true;
  }
  return false;
}

bool perturbed_is_equilibrium(const StrategyProfile& profile, const GameParams& params,
                              const PerturbationParams& pert) {
  const std::size_t n = profile.size();
  if (n > 8) throw std::invalid_argument("perturbed equilibrium check supports n <= 8");
  pert.validate(n);

  for (std::size_t i = 0; i < n; ++i) {
    const double current = utility_perturbed(profile, i, params, pert);
    const PerturbedPlayer pl = perturbed_player(params, pert, i);
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(j);
    }
    LinkMatrix g = profile.g;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << others.size()); ++mask) {
      g.clear_row(i);
      for (std::size_t b = 0; b < others.size(); ++b) {
        if (mask & (std::uint32_t{1} << b)) g.set(i, others[b]);
      }
      const auto dist = path_distances(g, i);
      const double mx = neighbor_mass(profile.x, dist, pl.p, pert.eps3);
      const double my = neighbor_mass(profile.y, dist, pl.p, pert.eps3);
      const double x = best_own(params.benefit, pl.t, pl.cost, pl.p, pl.keep * mx);
      const double y = best_own(params.benefit, 1.0 - pl.t, pl.cost, pl.p, pl.keep * my);
      const double u =
          perturbed_value(params, pl, x, y, mx, my, static_cast<std::size_t>(std::popcount(mask)));
      if (u > current + kDeviationTol) return false;
    }
  }
  return true;
}

double perturbation_robustness(const StrategyProfile& profile, const GameParams& params,
                               double eps_bound, std::size_t trials, std::uint64_t seed) {
  const std::size_t n = profile.size();
  if (n > 8) throw std::invalid_argument("perturbation_robustness supports n <= 8");
  if (eps_bound < 0.0) throw std::invalid_argument("eps_bound must be non-negative");
  if (trials == 0) return 1.0;

  Rng rng(seed);
  std::size_t preserved = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    PerturbationParams pert;
    const double unit = std::min(eps_bound, 1.0);
    do {
      pert.eps1 = eps_bound * rng.uniform();
    } while (pert.eps1 == 1.0);
    pert.eps2 = unit * rng.uniform();
    pert.eps3 = unit * rng.uniform();
    pert.eps4.resize(n);
    pert.eps5.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      pert.eps4[i] = eps_bound * (2.0 * rng.uniform() - 1.0);
      pert.eps5[i] = eps_bound * (2.0 * rng.uniform() - 1.0);
    }

    StrategyProfile s = profile;
    if (!solve_perturbed_contributions(s, params, pert)) continue;
    if (perturbed_is_equilibrium(s, params, pert)) ++preserved;
  }
  return static_cast<double>(preserved) / static_cast<double>(trials);
}

}  // namespace netpublic
