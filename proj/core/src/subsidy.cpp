#include "netpublic/subsidy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "netpublic/metrics.hpp"
#include "netpublic/parallel.hpp"

namespace netpublic {

namespace {

constexpr double kBudgetSlack = 1e-9;

std::vector<double> levels(double c, const PlannerOptions& options) {
  const double hi = kMaxSubsidyShare * c;
  const double lo = std::min(options.min_level_share * c, hi);
  std::vector<double> out;
  if (options.level_grid == 0) return out;
  if (options.level_grid == 1) return {hi};
  const double ratio = std::log(hi / lo) / static_cast<double>(options.level_grid - 1);
  for (std::size_t l = 0; l < options.level_grid; ++l) {
    out.push_back(l + 1 == options.level_grid ? hi : lo * std::exp(ratio * static_cast<double>(l)));
  }
  return out;
}

// Current contributors first, then the players whose types are closest to
// the type mean.
std::vector<std::size_t> single_targets(const GameParams& params,
                                        const std::vector<std::size_t>& current,
                                        std::size_t target_grid) {
  std::vector<std::size_t> out = current;
  std::vector<std::size_t> order(params.n());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const double mean = params.types.mean();
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(params.type(a) - mean) < std::abs(params.type(b) - mean);
  });
  for (std::size_t r = 0; r < std::min(target_grid, order.size()); ++r) {
    if (std::find(out.begin(), out.end(), order[r]) == out.end()) out.push_back(order[r]);
  }
  return out;
}

struct Evaluated {
  bool feasible = false;
  SubsidyPlan plan;
  WelfareMaxResult eq;
};

}  // namespace

std::vector<std::size_t> SubsidyPlan::recipients() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] > 0.0) out.push_back(i);
  }
  return out;
}

std::string_view to_string(SubsidyRegime r) {
  switch (r) {
    case SubsidyRegime::ExistingContributors: return "ExistingContributors";
    case SubsidyRegime::NewModerateContributor: return "NewModerateContributor";
    case SubsidyRegime::Star: return "Star";
  }
  return "Unknown";
}

IsolationDemand subsidized_isolation_demand(double t, double c, double v, const BenefitSpec& spec) {
  if (v < 0.0) throw std::invalid_argument("subsidy must be non-negative");
  if (!(v < c)) throw std::invalid_argument("subsidy must stay below c");
  return isolation_demand(t, c - v, spec);
}

double budget_spent(const SubsidyPlan& plan, const StrategyProfile& profile) {
  if (plan.v.empty()) return 0.0;
  if (plan.v.size() != profile.size()) throw std::invalid_argument("plan size differs from n");
  double total = 0.0;
  for (std::size_t i = 0; i < plan.v.size(); ++i) total += plan.v[i] * (profile.x[i] + profile.y[i]);
  return total;
}

PlannerResult planner(const GameParams& params, double budget, const PlannerOptions& options) {
  if (budget < 0.0) throw std::invalid_argument("budget must be non-negative");
  params.validate();
  const std::size_t n = params.n();
  GameParams base = params;
  base.subsidy.clear();

  PlannerResult result;
  const WelfareMaxResult baseline = welfare_max_equilibrium(base, options.equilibrium);
  result.baseline = baseline.profile;
  result.baseline_report = baseline.report;
  result.baseline_welfare = baseline.welfare_sum;
  const auto& current = baseline.report.contributors;

  std::vector<SubsidyPlan> plans;
  plans.push_back({std::vector<double>(n, 0.0), budget, 0.0});
  if (budget > 0.0) {
    const auto grid = levels(params.c, options);
    for (std::size_t m : single_targets(base, current, options.target_grid)) {
      for (double v : grid) {
        SubsidyPlan p{std::vector<double>(n, 0.0), budget, 0.0};
        p.v[m] = v;
        plans.push_back(std::move(p));
      }
    }
    if (current.size() >= 2) {
      std::vector<std::size_t> pair(current);
      std::stable_sort(pair.begin(), pair.end(), [&](std::size_t a, std::size_t b) {
        return baseline.profile.x[a] + baseline.profile.y[a] >
               baseline.profile.x[b] + baseline.profile.y[b];
      });
      pair.resize(2);
      std::sort(pair.begin(), pair.end());
      for (double v : grid) {
        for (double share : {0.25, 0.5, 0.75}) {
          SubsidyPlan p{std::vector<double>(n, 0.0), budget, 0.0};
          p.v[pair[0]] = share * v;
          p.v[pair[1]] = (1.0 - share) * v;
          plans.push_back(std::move(p));
        }
      }
      if (current.size() > 2) {
        for (double v : grid) {
          SubsidyPlan p{std::vector<double>(n, 0.0), budget, 0.0};
          for (std::size_t m : current) p.v[m] = v;
          plans.push_back(std::move(p));
        }
      }
    }
  }

  WelfareMaxOptions inner = options.equilibrium;
  inner.threads = false;
  auto evaluate = [&](const std::vector<SubsidyPlan>& batch) {
    std::vector<Evaluated> out(batch.size());
    parallel_for(batch.size(), [&](std::size_t idx) {
      Evaluated& e = out[idx];
      e.plan = batch[idx];
      GameParams p = base;
      if (!e.plan.recipients().empty()) p.subsidy = e.plan.v;
      try {
        e.eq = welfare_max_equilibrium(p, inner);
      } catch (const NonConvergence&) {
        return;
      }
      e.plan.spent = budget_spent(e.plan, e.eq.profile);
      e.feasible = e.plan.spent <= budget + kBudgetSlack;
    });
    return out;
  };
  std::vector<Evaluated> evaluated = evaluate(plans);

  // A subsidy to someone nobody links to buys no spillover. Each such plan is
  // also tried without those subsidies.
  std::vector<SubsidyPlan> reduced;
  for (const Evaluated& e : evaluated) {
    if (!e.feasible) continue;
    SubsidyPlan r = e.plan;
    bool changed = false;
    for (std::size_t i : e.plan.recipients()) {
      if (e.eq.profile.g.in_degree(i) == 0) {
        r.v[i] = 0.0;
        changed = true;
      }
    }
    if (!changed) continue;
    const bool seen = std::any_of(plans.begin(), plans.end(),
                                  [&](const SubsidyPlan& q) { return q.v == r.v; }) ||
                      std::any_of(reduced.begin(), reduced.end(),
                                  [&](const SubsidyPlan& q) { return q.v == r.v; });
    if (!seen) reduced.push_back(std::move(r));
  }
  for (Evaluated& e : evaluate(reduced)) evaluated.push_back(std::move(e));

  // Welfare first; ties go to the cheaper plan, then the one with fewer and
  // lower-indexed recipients.
  const Evaluated* best = nullptr;
  for (const Evaluated& e : evaluated) {
    ++result.plans_evaluated;
    if (!e.feasible) continue;
    ++result.plans_feasible;
    if (!best) {
      best = &e;
      continue;
    }
    const double tol = 1e-9 * std::max(1.0, std::abs(best->eq.welfare_sum));
    const double dw = e.eq.welfare_sum - best->eq.welfare_sum;
    if (dw > tol) {
      best = &e;
    } else if (std::abs(dw) <= tol) {
      if (e.plan.spent < best->plan.spent - kBudgetSlack) {
        best = &e;
      } else if (std::abs(e.plan.spent - best->plan.spent) <= kBudgetSlack) {
        const auto ra = e.plan.recipients();
        const auto rb = best->plan.recipients();
        if (ra.size() < rb.size() || (ra.size() == rb.size() && ra < rb)) best = &e;
      }
    }
  }

  result.plan = best->plan;
  result.profile = best->eq.profile;
  result.report = best->eq.report;
  result.welfare_sum = best->eq.welfare_sum;

  const auto recips = result.plan.recipients();
  const auto& after = result.report.contributors;
  bool star = after.size() == 1;
  if (star) {
    const std::size_t m = after.front();
    for (std::size_t i = 0; i < n && star; ++i) {
      if (i != m && !result.profile.g(i, m)) star = false;
    }
  }
  const bool existing = std::all_of(recips.begin(), recips.end(), [&](std::size_t r) {
    return std::find(current.begin(), current.end(), r) != current.end();
  });
  if (star && std::find(recips.begin(), recips.end(), after.front()) != recips.end()) {
    result.regime = SubsidyRegime::Star;
  } else if (existing) {
    result.regime = SubsidyRegime::ExistingContributors;
  } else {
    result.regime = SubsidyRegime::NewModerateContributor;
  }
  return result;
}

}  // namespace netpublic
