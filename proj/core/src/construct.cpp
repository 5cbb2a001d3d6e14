#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <vector>

#include "netpublic/best_response.hpp"
#include "netpublic/equilibrium.hpp"

namespace netpublic {

namespace {

// Gain of p from a link to someone providing bundle `from`, p otherwise alone.
double isolated_gain(const GameParams& params, std::size_t p, const IsolationDemand& from) {
  return link_set_value(params, p, {from.x_hat, from.y_hat}) - link_set_value(params, p, {});
}

double extremism(double t) { return std::max(t, 1.0 - t); }

void reoptimize(StrategyProfile& s, std::size_t i, const GameParams& params) {
  const auto c = optimal_contributions(params, i, spillovers(s, i));
  s.x[i] = c.x;
  s.y[i] = c.y;
}

// Each non-core player picks the best subset of `core` given the core's
// contributions (fewer links, then the lexicographically smaller set on ties).
void attach_to_core(StrategyProfile& s, const std::vector<std::size_t>& core,
                    const GameParams& params) {
  const std::size_t n = s.size();
  const std::size_t m = core.size();
  std::vector<std::uint8_t> in_core(n, 0);
  for (std::size_t h : core) in_core[h] = 1;

  for (std::size_t p = 0; p < n; ++p) {
    if (in_core[p]) continue;
    std::vector<double> u(std::size_t{1} << m);
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t mask = 0; mask < u.size(); ++mask) {
      Spillover sp;
      std::size_t links = 0;
      for (std::size_t b = 0; b < m; ++b) {
        if (mask & (std::size_t{1} << b)) {
          sp.x += s.x[core[b]];
          sp.y += s.y[core[b]];
          ++links;
        }
      }
      u[mask] = link_set_value(params, p, sp) - params.k * static_cast<double>(links);
      top = std::max(top, u[mask]);
    }
    std::size_t pick = 0;
    bool found = false;
    for (std::size_t mask = 0; mask < u.size(); ++mask) {
      if (u[mask] < top - kDeviationTol) continue;
      if (!found) {
        pick = mask;
        found = true;
        continue;
      }
      const int pa = std::popcount(mask);
      const int pb = std::popcount(pick);
      const std::size_t diff = mask ^ pick;
      if (pa < pb || (pa == pb && (mask & diff & (~diff + 1)))) pick = mask;
    }
    s.g.clear_row(p);
    for (std::size_t b = 0; b < m; ++b) {
      if (pick & (std::size_t{1} << b)) s.g.set(p, core[b]);
    }
    reoptimize(s, p, params);
  }
}

}  // namespace

SearchMode default_mode(std::size_t n) {
  return n <= kExactMaxPlayers ? SearchMode::Exact : SearchMode::Structural;
}

double k_tilde(const GameParams& params) {
  const std::size_t n = params.n();
  const auto demands = isolation_demands(params);
  double best = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double alone = link_set_value(params, i, {});
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double gain =
          link_set_value(params, i, {demands[j].x_hat, demands[j].y_hat}) - alone;
      best = std::max(best, gain);
    }
  }
  return best;
}

StrategyProfile construct_independent(const GameParams& params) {
  const std::size_t n = params.n();
  StrategyProfile s = isolation_profile(params);
  if (params.k > k_tilde(params)) return s;

  const auto demands = isolation_demands(params);
  const std::size_t lo = 0;
  const std::size_t hi = n - 1;
  std::vector<std::uint8_t> fixed(n, 0), has_out(n, 0), has_in(n, 0);
  fixed[lo] = fixed[hi] = 1;

  auto link = [&](std::size_t p, std::size_t h) {
    s.g.set(p, h);
    has_out[p] = 1;
    has_in[h] = 1;
  };

  for (std::size_t p = 0; p < n; ++p) {
    if (fixed[p]) continue;
    const bool to_hi = isolated_gain(params, p, demands[hi]) >= params.k;
    const bool to_lo = isolated_gain(params, p, demands[lo]) >= params.k;
    if (to_hi) link(p, hi);
    if (to_lo) link(p, lo);
  }

  auto isolated = [&](std::size_t p) { return !has_out[p] && !has_in[p]; };
  for (;;) {
    std::size_t hub = n;
    for (std::size_t p = 0; p < n; ++p) {
      if (fixed[p] || !isolated(p)) continue;
      if (hub == n || extremism(params.type(p)) > extremism(params.type(hub))) hub = p;
    }
    if (hub == n) break;
    fixed[hub] = 1;
    for (std::size_t p = 0; p < n; ++p) {
      if (p == hub || !isolated(p)) continue;
      if (isolated_gain(params, p, demands[hub]) >= params.k) link(p, hub);
    }
  }

  for (std::size_t p = 0; p < n; ++p) {
    if (has_out[p]) reoptimize(s, p, params);
  }

  // A player attached to a corner early can prefer a closer hub fixed later.
  // Sequential best responses settle those switches.
  const SearchMode mode = default_mode(n);
  if (find_profitable_deviation(s, params, SearchMode::Structural) ||
      find_profitable_deviation(s, params, mode)) {
    DynamicsConfig cfg;
    cfg.mode = mode;
    auto repaired = best_response_dynamics(s, params, cfg);
    if (repaired.converged) return std::move(repaired.profile);
  }
  return s;
}

StrategyProfile hub_profile(const GameParams& params, const std::vector<std::size_t>& hubs) {
  StrategyProfile s = isolation_profile(params);
  attach_to_core(s, hubs, params);
  return s;
}

std::optional<StrategyProfile> construct_partially_collaborative(const GameParams& params,
                                                                 std::size_t a, std::size_t b,
                                                                 SearchMode mode) {
  const double ta = params.type(a);
  const double tb = params.type(b);
  if (a == b || !((ta - 0.5) * (tb - 0.5) < 0.0)) return std::nullopt;

  StrategyProfile s = isolation_profile(params);
  s.g.set(b, a);
  reoptimize(s, b, params);
  attach_to_core(s, {std::min(a, b), std::max(a, b)}, params);

  const auto report = verify_nash(s, params, mode);
  if (report.classification != Classification::PartiallyCollaborative) return std::nullopt;
  return s;
}

std::optional<StrategyProfile> construct_collaborative(const GameParams& params, std::size_t i,
                                                       std::size_t j, SearchMode mode) {
  if (!(params.type(i) > 0.5 && 0.5 > params.type(j))) return std::nullopt;

  StrategyProfile s(params.n());
  const auto di = isolation_demand(params, i);
  const auto dj = isolation_demand(params, j);
  s.x[i] = di.x_hat;
  s.y[j] = dj.y_hat;
  s.g.set(i, j);
  s.g.set(j, i);
  attach_to_core(s, {std::min(i, j), std::max(i, j)}, params);

  const auto report = verify_nash(s, params, mode);
  if (report.classification != Classification::Collaborative) return std::nullopt;
  return s;
}

}  // namespace netpublic
