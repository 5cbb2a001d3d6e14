#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "netpublic/equilibrium.hpp"
#include "netpublic/model.hpp"

namespace netpublic {

/// Per-player unit-cost reductions; player i pays c - v_i per unit.
struct SubsidyPlan {
  std::vector<double> v;
  double budget = 0.0;
  double spent = 0.0;

  std::vector<std::size_t> recipients() const;
};

enum class SubsidyRegime { ExistingContributors, NewModerateContributor, Star };
std::string_view to_string(SubsidyRegime r);

/// Largest admissible subsidy as a fraction of c.
inline constexpr double kMaxSubsidyShare = 0.95;

/// Isolation demand at unit cost c - v. Throws for v < 0 or v >= c.
IsolationDemand subsidized_isolation_demand(double t, double c, double v, const BenefitSpec& spec);

/// sum_i v_i (x_i + y_i) at realized contributions.
double budget_spent(const SubsidyPlan& plan, const StrategyProfile& profile);

struct PlannerOptions {
  std::size_t target_grid = 8;
  std::size_t level_grid = 20;
  double min_level_share = 1e-3;  // smallest level as a fraction of c
  WelfareMaxOptions equilibrium;
};

struct PlannerResult {
  SubsidyPlan plan;
  StrategyProfile profile;
  EquilibriumReport report;
  double welfare_sum = 0.0;
  SubsidyRegime regime = SubsidyRegime::ExistingContributors;

  StrategyProfile baseline;  // unsubsidized welfare-maximizing equilibrium
  EquilibriumReport baseline_report;
  double baseline_welfare = 0.0;
  std::size_t plans_evaluated = 0;
  std::size_t plans_feasible = 0;
};

/// Grid search over single-recipient, two-contributor split and
/// all-contributor plans, each also tried without subsidies to players left
/// unlinked. Welfare is measured with subsidized costs, budget feasibility is
/// checked at the resulting equilibrium, and ties go to the smaller spend,
/// then fewer recipients, then the lexicographically smaller recipient list.
PlannerResult planner(const GameParams& params, double budget, const PlannerOptions& options = {});

}  // namespace netpublic
