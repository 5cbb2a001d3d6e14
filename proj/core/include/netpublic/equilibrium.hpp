#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "netpublic/best_response.hpp"
#include "netpublic/model.hpp"

namespace netpublic {

enum class Classification {
  Empty,
  Independent,
  Collaborative,
  PartiallyCollaborative,
  NonEquilibrium,
  StructureViolation,
};

std::string_view to_string(Classification c);
Classification parse_classification(std::string_view name);

struct EquilibriumReport {
  Classification classification = Classification::Empty;
  std::vector<std::size_t> contributors;  // in-degree >= 1
  std::vector<std::size_t> periphery;     // sponsors with in-degree 0
  std::vector<std::size_t> isolated;
  std::vector<Deviation> violations;
  std::string detail;  // names the failed structural condition, if any

  bool is_equilibrium() const {
    return classification != Classification::NonEquilibrium;
  }
};

/// Thrown where an iterative solver gives up and the caller asked for a
/// result rather than a status.
class NonConvergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DynamicsConfig {
  enum class Order { RoundRobin, RandomPermutation };
  std::size_t max_rounds = 200;
  Order order = Order::RoundRobin;
  std::uint64_t seed = 0;
  SearchMode mode = SearchMode::Exact;
};

/// Exact for n <= 16, Structural beyond.
SearchMode default_mode(std::size_t n);

/// Largest gain from any single link on the empty network with everyone at
/// isolation demand. The empty network is the unique equilibrium iff k > k_tilde.
double k_tilde(const GameParams& params);

/// Constructive independent equilibrium: the two corner types first, then the
/// most extreme remaining isolated player, until no isolated player gains
/// from a link.
StrategyProfile construct_independent(const GameParams& params);

/// A at its isolation bundle without links, B linked to A and topping up to
/// its own demand, everyone else on the best subset of {A, B}. Returns the
/// profile only if it is a partially collaborative Nash equilibrium. A and B
/// must lie on opposite sides of 1/2.
std::optional<StrategyProfile> construct_partially_collaborative(const GameParams& params,
                                                                 std::size_t a, std::size_t b,
                                                                 SearchMode mode);

/// i at (x_hat_i, 0) and j at (0, y_hat_j) linked both ways, everyone else
/// on the best subset of {i, j}. Requires t_i > 1/2 > t_j.
std::optional<StrategyProfile> construct_collaborative(const GameParams& params, std::size_t i,
                                                       std::size_t j, SearchMode mode);

struct FixedPointResult {
  std::vector<double> x;
  std::vector<double> y;
  std::size_t sweeps = 0;
  bool converged = false;
};

/// Round-robin optimal contributions on a fixed graph, from isolation demands.
FixedPointResult contribution_fixed_point(const LinkMatrix& g, const GameParams& params);

/// C, P and I sets plus the structural label of the network alone.
EquilibriumReport classify(const StrategyProfile& profile);

EquilibriumReport verify_nash(const StrategyProfile& profile, const GameParams& params,
                              SearchMode mode);

struct DynamicsResult {
  StrategyProfile profile;
  std::size_t rounds = 0;
  bool converged = false;
};

/// Sequential best responses until a full pass changes nothing.
DynamicsResult best_response_dynamics(const StrategyProfile& start, const GameParams& params,
                                      const DynamicsConfig& config);

/// Hubs at their isolation bundles, every other player on its best subset of
/// hubs with best-reply contributions.
StrategyProfile hub_profile(const GameParams& params, const std::vector<std::size_t>& hubs);

struct WelfareMaxOptions {
  std::optional<SearchMode> mode;     // default_mode(n) when unset
  std::size_t moderate_per_side = 12;  // template pairs pruned when n > 25
  std::size_t dynamic_starts = 8;
  std::size_t max_rounds = 200;
  std::uint64_t seed = 0;
  bool threads = true;
};

struct WelfareMaxResult {
  StrategyProfile profile;
  EquilibriumReport report;
  double welfare_sum = 0.0;
  std::string origin;  // which candidate generator produced the winner
  std::size_t candidates_checked = 0;
  std::size_t candidates_verified = 0;
};

WelfareMaxResult welfare_max_equilibrium(const GameParams& params,
                                         const WelfareMaxOptions& options = {});

/// Every isolated contribution fixed point of g, found by solving the linear
/// system of each candidate active set per good. Singular active sets (a
/// continuum of splits) are skipped. n <= 12.
std::vector<std::pair<std::vector<double>, std::vector<double>>> all_contribution_fixed_points(
    const LinkMatrix& g, const GameParams& params);

/// Every pure equilibrium whose contributions are an isolated fixed point of
/// its digraph. n <= 4 only.
std::vector<StrategyProfile> brute_force_equilibria(const GameParams& params);

}  // namespace netpublic
