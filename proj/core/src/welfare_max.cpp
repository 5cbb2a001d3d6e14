#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "netpublic/equilibrium.hpp"
#include "netpublic/metrics.hpp"
#include "netpublic/parallel.hpp"
#include "netpublic/random.hpp"

namespace netpublic {

namespace {

constexpr std::size_t kPruneAbove = 25;

struct Generator {
  std::string origin;
  std::function<std::optional<StrategyProfile>()> make;
  bool verified = false;  // make() already ran verify_nash in the same mode
};

struct Outcome {
  std::optional<StrategyProfile> profile;
  EquilibriumReport report;
  double welfare = 0.0;
};

// Players on one side of 1/2, most moderate first (ties to the lower index).
std::vector<std::size_t> side(const GameParams& params, bool upper, std::size_t limit) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < params.n(); ++i) {
    const double t = params.type(i);
    if (upper ? t > 0.5 : t < 0.5) out.push_back(i);
  }
  std::stable_sort(out.begin(), out.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(params.type(a) - 0.5) < std::abs(params.type(b) - 0.5);
  });
  if (out.size() > limit) out.resize(limit);
  return out;
}

std::vector<std::size_t> by_moderation(const GameParams& params) {
  std::vector<std::size_t> order(params.n());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(params.type(a) - 0.5) < std::abs(params.type(b) - 0.5);
  });
  return order;
}

std::vector<std::size_t> sorted_unique(std::vector<std::size_t> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

struct Start {
  std::string name;
  std::optional<std::vector<std::size_t>> hubs;  // nullopt: start from isolation
  DynamicsConfig::Order order = DynamicsConfig::Order::RoundRobin;
  std::uint64_t seed = 0;
};

std::vector<Start> dynamic_starts(const GameParams& params, const WelfareMaxOptions& options) {
  const std::size_t n = params.n();
  const auto moderate = by_moderation(params);
  const auto demands = isolation_demands(params);
  std::size_t biggest = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (demands[i].total() > demands[biggest].total()) biggest = i;
  }

  std::vector<Start> starts;
  starts.push_back({"brd:isolation", std::nullopt});
  starts.push_back({"brd:corners", std::vector<std::size_t>{0, n - 1}});
  starts.push_back({"brd:corners+moderate", sorted_unique({0, n - 1, moderate[0]})});
  starts.push_back({"brd:corners+moderate2", sorted_unique({0, n - 1, moderate[1]})});
  starts.push_back({"brd:star-largest", std::vector<std::size_t>{biggest}});
  starts.push_back({"brd:star-moderate", std::vector<std::size_t>{moderate[0]}});

  Rng rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  for (int r = 0; r < 2; ++r) {
    const std::size_t size = 2 + static_cast<std::size_t>(rng.below(3));
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    rng.shuffle(pool);
    pool.resize(std::min(size, n));
    starts.push_back({"brd:random" + std::to_string(r), sorted_unique(pool),
                      DynamicsConfig::Order::RandomPermutation, options.seed + 1 + r});
  }
  if (starts.size() > options.dynamic_starts) starts.resize(options.dynamic_starts);
  return starts;
}

// Lower is better among welfare-tied candidates.
std::pair<int, std::size_t> tie_rank(const EquilibriumReport& r) {
  return {r.classification == Classification::Independent ? 0 : 1, r.contributors.size()};
}

}  // namespace

WelfareMaxResult welfare_max_equilibrium(const GameParams& params,
                                         const WelfareMaxOptions& options) {
  params.validate();
  const std::size_t n = params.n();
  const SearchMode mode = options.mode.value_or(default_mode(n));

  std::vector<Generator> gens;
  gens.push_back({"empty", [&] { return std::optional(isolation_profile(params)); }});
  gens.push_back({"independent", [&] { return std::optional(construct_independent(params)); }});

  const std::size_t limit = n > kPruneAbove ? options.moderate_per_side : n;
  const auto upper = side(params, true, limit);
  const auto lower = side(params, false, limit);
  for (std::size_t h : upper) {
    for (std::size_t l : lower) {
      const std::string tag = "(" + std::to_string(h) + "," + std::to_string(l) + ")";
      gens.push_back({"partially-collaborative" + tag,
                      [&, h, l] { return construct_partially_collaborative(params, h, l, mode); },
                      true});
      gens.push_back({"partially-collaborative" + tag + "'",
                      [&, h, l] { return construct_partially_collaborative(params, l, h, mode); },
                      true});
      gens.push_back({"collaborative" + tag,
                      [&, h, l] { return construct_collaborative(params, h, l, mode); }, true});
    }
  }

  for (const Start& st : dynamic_starts(params, options)) {
    gens.push_back({st.name, [&, st]() -> std::optional<StrategyProfile> {
                      const StrategyProfile start =
                          st.hubs ? hub_profile(params, *st.hubs) : isolation_profile(params);
                      DynamicsConfig cfg;
                      cfg.max_rounds = options.max_rounds;
                      cfg.order = st.order;
                      cfg.seed = st.seed;
                      cfg.mode = mode;
                      auto res = best_response_dynamics(start, params, cfg);
                      if (!res.converged) return std::nullopt;
                      return std::move(res.profile);
                    }});
  }

  std::vector<Outcome> outcomes(gens.size());
  parallel_for(
      gens.size(),
      [&](std::size_t g) {
        Outcome& o = outcomes[g];
        o.profile = gens[g].make();
        if (!o.profile) return;
        o.report = gens[g].verified ? classify(*o.profile) : verify_nash(*o.profile, params, mode);
        if (!o.report.is_equilibrium()) {
          o.profile.reset();
          return;
        }
        o.welfare = welfare(*o.profile, params).sum;
      },
      options.threads ? 0 : 1);

  WelfareMaxResult best;
  std::optional<std::size_t> pick;
  for (std::size_t g = 0; g < outcomes.size(); ++g) {
    const Outcome& o = outcomes[g];
    if (!o.profile) continue;
    ++best.candidates_verified;
    if (!pick) {
      pick = g;
      continue;
    }
    const Outcome& cur = outcomes[*pick];
    const double tol = 1e-9 * std::max(1.0, std::abs(cur.welfare));
    if (o.welfare > cur.welfare + tol ||
        (std::abs(o.welfare - cur.welfare) <= tol && tie_rank(o.report) < tie_rank(cur.report))) {
      pick = g;
    }
  }
  best.candidates_checked = gens.size();
  if (!pick) throw NonConvergence("no candidate passed Nash verification");

  best.profile = *outcomes[*pick].profile;
  best.report = outcomes[*pick].report;
  best.welfare_sum = outcomes[*pick].welfare;
  best.origin = gens[*pick].origin;
  return best;
}

}  // namespace netpublic
