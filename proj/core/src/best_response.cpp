#include "netpublic/best_response.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace netpublic {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Value of a link set for a player with demand d, given received spillovers.
double value_at(const BenefitSpec& spec, double t, double cost, const IsolationDemand& d,
                double sx, double sy) {
  const double x = std::max(d.x_hat - sx, 0.0);
  const double y = std::max(d.y_hat - sy, 0.0);
  return consumption_benefit(spec, t, x + sx, y + sy) - cost * (x + y);
}

std::vector<std::size_t> others_of(std::size_t i, std::size_t n) {
  std::vector<std::size_t> out;
  out.reserve(n - 1);
  for (std::size_t j = 0; j < n; ++j) {
    if (j != i) out.push_back(j);
  }
  return out;
}

// Per-profile data shared by every structural search on that profile.
struct StructuralIndex {
  std::vector<std::uint8_t> receiver;
  std::vector<std::size_t> by_provision;  // players sorted by x + y, descending

  explicit StructuralIndex(const StrategyProfile& profile) : receiver(profile.size(), 0) {
    const std::size_t n = profile.size();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (profile.g(i, j)) receiver[j] = 1;
      }
    }
    by_provision.resize(n);
    std::iota(by_provision.begin(), by_provision.end(), std::size_t{0});
    std::stable_sort(by_provision.begin(), by_provision.end(), [&](std::size_t a, std::size_t b) {
      return profile.x[a] + profile.y[a] > profile.x[b] + profile.y[b];
    });
  }

  // Current receivers plus the top providers by total provision, i excluded.
  std::vector<std::size_t> candidates(std::size_t i) const {
    std::vector<std::uint8_t> pick = receiver;
    std::size_t taken = 0;
    for (std::size_t j : by_provision) {
      if (taken == kStructuralTopProviders) break;
      if (j == i) continue;
      pick[j] = 1;
      ++taken;
    }
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < pick.size(); ++j) {
      if (pick[j] && j != i) out.push_back(j);
    }
    return out;
  }
};

struct Candidate {
  LinkSet links;
  double utility = kNegInf;
};

// Full search result: the unrestricted argmax and the tie-broken choice.
struct Search {
  Candidate best;
  Candidate chosen;
};

LinkSet mask_to_set(std::uint32_t mask, const std::vector<std::size_t>& targets) {
  LinkSet s;
  while (mask) {
    s.push_back(targets[static_cast<std::size_t>(std::countr_zero(mask))]);
    mask &= mask - 1;
  }
  return s;
}

Search search_exact(std::size_t i, const StrategyProfile& profile, const GameParams& params) {
  const std::size_t n = profile.size();
  if (n > kExactMaxPlayers) {
    throw std::invalid_argument("exact best response supports n <= " +
                                std::to_string(kExactMaxPlayers));
  }
  const auto targets = others_of(i, n);
  const std::size_t m = targets.size();
  const std::uint32_t count = std::uint32_t{1} << m;
  const IsolationDemand d = isolation_demand(params, i);
  const double t = params.type(i);
  const double cost = params.cost(i);

  std::vector<double> sx(count, 0.0), sy(count, 0.0), u(count, 0.0);
  double top = kNegInf;
  std::uint32_t top_mask = 0;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    if (mask) {
      const std::uint32_t rest = mask & (mask - 1);
      const std::size_t j = targets[static_cast<std::size_t>(std::countr_zero(mask))];
      sx[mask] = sx[rest] + profile.x[j];
      sy[mask] = sy[rest] + profile.y[j];
    }
    u[mask] = value_at(params.benefit, t, cost, d, sx[mask], sy[mask]) -
              params.k * static_cast<double>(std::popcount(mask));
    if (u[mask] > top) {
      top = u[mask];
      top_mask = mask;
    }
  }

  std::uint32_t pick = top_mask;
  for (std::uint32_t mask = 0; mask < count; ++mask) {
    if (u[mask] < top - kDeviationTol) continue;
    const int pa = std::popcount(mask);
    const int pb = std::popcount(pick);
    if (pa < pb) {
      pick = mask;
    } else if (pa == pb && mask != pick) {
      const std::uint32_t diff = mask ^ pick;
      if (mask & diff & (~diff + 1)) pick = mask;
    }
  }

  Search s;
  s.best = {mask_to_set(top_mask, targets), top};
  s.chosen = {mask_to_set(pick, targets), u[pick]};
  return s;
}

Search search_structural(std::size_t i, const StrategyProfile& profile, const GameParams& params,
                         const StructuralIndex& index) {
  const auto targets = index.candidates(i);
  const IsolationDemand d = isolation_demand(params, i);
  const double t = params.type(i);
  const double cost = params.cost(i);

  // Link sets as up to three positions into `targets`, kept in a reused buffer.
  struct Entry {
    std::array<std::uint32_t, kStructuralMaxLinks> pos;
    std::uint32_t size;
    double utility;
  };
  thread_local std::vector<Entry> all;
  all.clear();

  const std::size_t m = targets.size();
  auto consider = [&](std::uint32_t size, std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    Entry e{{a, b, c}, size, 0.0};
    double sx = 0.0, sy = 0.0;
    for (std::uint32_t r = 0; r < size; ++r) {
      sx += profile.x[targets[e.pos[r]]];
      sy += profile.y[targets[e.pos[r]]];
    }
    e.utility = value_at(params.benefit, t, cost, d, sx, sy) - params.k * static_cast<double>(size);
    all.push_back(e);
  };

  // Benefit rises in both spillovers, so the s largest x and the s largest y
  // bound every s-link set. Sets that cannot come within kDeviationTol of the
  // best value so far are skipped; they could be neither best nor chosen.
  std::array<double, kStructuralMaxLinks + 1> top_x{}, top_y{};
  {
    std::vector<double> xs, ys;
    for (std::size_t j : targets) {
      xs.push_back(profile.x[j]);
      ys.push_back(profile.y[j]);
    }
    const std::size_t keep = std::min(kStructuralMaxLinks, m);
    std::partial_sort(xs.begin(), xs.begin() + keep, xs.end(), std::greater<>());
    std::partial_sort(ys.begin(), ys.begin() + keep, ys.end(), std::greater<>());
    for (std::size_t r = 0; r < kStructuralMaxLinks; ++r) {
      top_x[r + 1] = top_x[r] + (r < keep ? xs[r] : 0.0);
      top_y[r + 1] = top_y[r] + (r < keep ? ys[r] : 0.0);
    }
  }
  double best_u = kNegInf;
  auto bound = [&](double sx, double sy, std::size_t size) {
    return value_at(params.benefit, t, cost, d, sx, sy) - params.k * static_cast<double>(size);
  };
  auto hopeless = [&](double ub) { return ub < best_u - kDeviationTol; };

  consider(0, 0, 0, 0);
  for (std::uint32_t a = 0; a < m; ++a) consider(1, a, 0, 0);
  for (const Entry& e : all) best_u = std::max(best_u, e.utility);

  if (m >= 2 && !hopeless(bound(top_x[2], top_y[2], 2))) {
    for (std::uint32_t a = 0; a < m; ++a) {
      for (std::uint32_t b = a + 1; b < m; ++b) {
        consider(2, a, b, 0);
        best_u = std::max(best_u, all.back().utility);
      }
    }
  }
  if (m >= 3 && !hopeless(bound(top_x[3], top_y[3], 3))) {
    for (std::uint32_t a = 0; a < m; ++a) {
      for (std::uint32_t b = a + 1; b < m; ++b) {
        const double px = profile.x[targets[a]] + profile.x[targets[b]];
        const double py = profile.y[targets[a]] + profile.y[targets[b]];
        if (hopeless(bound(px + top_x[1], py + top_y[1], 3))) continue;
        for (std::uint32_t c = b + 1; c < m; ++c) {
          consider(3, a, b, c);
          best_u = std::max(best_u, all.back().utility);
        }
      }
    }
  }

  // Positions are increasing, so comparing them orders the sets like their targets.
  auto earlier = [](const Entry& x, const Entry& y) {
    if (x.size != y.size) return x.size < y.size;
    return std::lexicographical_compare(x.pos.begin(), x.pos.begin() + x.size, y.pos.begin(),
                                        y.pos.begin() + y.size);
  };
  std::size_t best = 0;
  for (std::size_t e = 1; e < all.size(); ++e) {
    if (all[e].utility > all[best].utility) best = e;
  }
  std::size_t chosen = best;
  for (std::size_t e = 0; e < all.size(); ++e) {
    if (all[e].utility < all[best].utility - kDeviationTol) continue;
    if (earlier(all[e], all[chosen])) chosen = e;
  }

  auto to_candidate = [&](const Entry& e) {
    Candidate cand;
    for (std::uint32_t r = 0; r < e.size; ++r) cand.links.push_back(targets[e.pos[r]]);
    cand.utility = e.utility;
    return cand;
  };
  Search s;
  s.best = to_candidate(all[best]);
  s.chosen = to_candidate(all[chosen]);
  return s;
}

Search search(std::size_t i, const StrategyProfile& profile, const GameParams& params,
              SearchMode mode, const StructuralIndex* index = nullptr) {
  if (mode == SearchMode::Exact) return search_exact(i, profile, params);
  if (index) return search_structural(i, profile, params, *index);
  return search_structural(i, profile, params, StructuralIndex(profile));
}

BestResponse realize(std::size_t i, const Candidate& cand, const StrategyProfile& profile,
                     const GameParams& params) {
  const auto c = optimal_contributions(i, cand.links, profile, params);
  return {cand.links, c.x, c.y, cand.utility};
}

}  // namespace

std::string_view to_string(SearchMode mode) {
  return mode == SearchMode::Exact ? "exact" : "structural";
}

SearchMode parse_search_mode(std::string_view name) {
  if (name == "exact") return SearchMode::Exact;
  if (name == "structural") return SearchMode::Structural;
  throw std::invalid_argument("unknown mode: " + std::string(name));
}

Contributions optimal_contributions(const GameParams& params, std::size_t i, Spillover received) {
  const IsolationDemand d = isolation_demand(params, i);
  return {std::max(d.x_hat - received.x, 0.0), std::max(d.y_hat - received.y, 0.0)};
}

Contributions optimal_contributions(std::size_t i, std::span<const std::size_t> links,
                                    const StrategyProfile& others, const GameParams& params) {
  for (std::size_t j : links) {
    if (j == i) throw std::invalid_argument("link set contains the player itself");
  }
  return optimal_contributions(params, i, spillovers_over(others, links));
}

double link_set_value(const GameParams& params, std::size_t i, Spillover received) {
  return value_at(params.benefit, params.type(i), params.cost(i), isolation_demand(params, i),
                  received.x, received.y);
}

double gains_from_link(const StrategyProfile& profile, std::size_t i, std::size_t j,
                       LinkAction action, const GameParams& params) {
  if (i == j) throw std::invalid_argument("gains_from_link: i == j");
  if (i >= profile.size() || j >= profile.size()) throw std::out_of_range("gains_from_link");
  const bool linked = profile.g(i, j);
  if (action == LinkAction::Add && linked) throw std::invalid_argument("link already present");
  if (action == LinkAction::Delete && !linked) throw std::invalid_argument("link not present");

  Spillover without = spillovers(profile, i);
  if (linked) {
    without.x -= profile.x[j];
    without.y -= profile.y[j];
  }
  const Spillover with{without.x + profile.x[j], without.y + profile.y[j]};
  return link_set_value(params, i, with) - link_set_value(params, i, without);
}

BestResponse best_response(std::size_t i, const StrategyProfile& profile, const GameParams& params,
                           SearchMode mode) {
  const Search s = search(i, profile, params, mode);
  return realize(i, s.chosen, profile, params);
}

double best_response_utility(std::size_t i, const StrategyProfile& profile,
                             const GameParams& params, SearchMode mode) {
  return search(i, profile, params, mode).best.utility;
}

std::optional<Deviation> find_profitable_deviation(const StrategyProfile& profile,
                                                   const GameParams& params, SearchMode mode) {
  std::optional<StructuralIndex> index;
  if (mode == SearchMode::Structural) index.emplace(profile);
  for (std::size_t i = 0; i < profile.size(); ++i) {
    const double current = utility(profile, i, params);
    const Search s = search(i, profile, params, mode, index ? &*index : nullptr);
    const double gain = s.best.utility - current;
    if (gain > kDeviationTol) {
      const BestResponse br = realize(i, s.best, profile, params);
      return Deviation{i, br.links, br.x, br.y, gain};
    }
  }
  return std::nullopt;
}

double min_deviation_gap(const StrategyProfile& profile, const GameParams& params) {
  const std::size_t n = profile.size();
  if (n > kExactMaxPlayers) throw std::invalid_argument("min_deviation_gap requires n <= 16");
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const auto targets = others_of(i, n);
    const std::size_t m = targets.size();
    std::uint32_t current_mask = 0;
    for (std::size_t b = 0; b < m; ++b) {
      if (profile.g(i, targets[b])) current_mask |= std::uint32_t{1} << b;
    }
    const double current = utility(profile, i, params);
    const IsolationDemand d = isolation_demand(params, i);
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << m); ++mask) {
      double sx = 0.0, sy = 0.0;
      for (std::size_t b = 0; b < m; ++b) {
        if (mask & (std::uint32_t{1} << b)) {
          sx += profile.x[targets[b]];
          sy += profile.y[targets[b]];
        }
      }
      const double u = value_at(params.benefit, params.type(i), params.cost(i), d, sx, sy) -
                       params.k * static_cast<double>(std::popcount(mask));
      if (mask == current_mask) {
        // Contributions off the optimum for the current links count as a gap.
        if (u - current > kEqualityTol) gap = std::min(gap, current - u);
        continue;
      }
      gap = std::min(gap, current - u);
    }
  }
  return gap;
}

}  // namespace netpublic
