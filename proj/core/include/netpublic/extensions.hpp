#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "netpublic/model.hpp"

namespace netpublic {

// ---------------------------------------------------------------- two-way flow

/// Utility when spillovers travel along the undirected closure of g. Link
/// fees are still paid by sponsors only.
double utility_two_way(const StrategyProfile& profile, std::size_t i, const GameParams& params);

/// Exhaustive two-way equilibria for n <= 4: contribution fixed point on the
/// closure of every digraph, then an exact link-and-contribution deviation
/// check. Digraphs with the same closure and sponsor costs are kept separately.
std::vector<StrategyProfile> brute_force_two_way_equilibria(const GameParams& params);

// -------------------------------------------------------------- weighted links

struct WeightedProfile {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> w;  // row-major n x n, entries in [0, 1], zero diagonal

  WeightedProfile() = default;
  explicit WeightedProfile(std::size_t n) : x(n, 0.0), y(n, 0.0), w(n * n, 0.0) {}

  std::size_t size() const { return x.size(); }
  double weight(std::size_t i, std::size_t j) const { return w[i * size() + j]; }
  double& weight(std::size_t i, std::size_t j) { return w[i * size() + j]; }
  double in_weight(std::size_t j) const;
  void validate() const;
};

double utility_weighted(const WeightedProfile& wp, std::size_t i, const GameParams& params);

struct WeightedResponse {
  std::vector<double> weights;  // row i, length n, zero at i
  double x = 0.0;
  double y = 0.0;
  double utility = 0.0;
  std::size_t cycles = 0;
  bool stalled = false;  // hit the cycle cap before becoming stationary
};

/// Coordinate ascent over i's weights (golden-section search per entry) with
/// contributions re-optimized inside every evaluation. Starts from i's
/// current row, so utility never falls below the current strategy's value.
WeightedResponse best_response_weighted(std::size_t i, const WeightedProfile& wp,
                                        const GameParams& params);

struct WeightedEquilibrium {
  WeightedProfile profile;
  std::size_t rounds = 0;
  bool converged = false;
  std::vector<std::size_t> recipients;  // in-weight > 1e-6
};

/// Round-robin weighted best responses from isolation until stationary.
WeightedEquilibrium equilibrium_weighted(const GameParams& params, std::size_t max_rounds = 200);

// --------------------------------------------------------- perturbed utility

struct PerturbationParams {
  double eps1 = 0.0;  // complementarity, CES exponent 1 - eps1
  double eps2 = 0.0;  // decay of every spillover
  double eps3 = 0.0;  // discount per extra path step
  std::vector<double> eps4;  // per-player contribution-cost shifts
  std::vector<double> eps5;  // per-player linking-cost shifts

  void validate(std::size_t n) const;
};

/// Shortest directed path lengths from i following sponsored links; 0 for i
/// itself and for unreachable players.
std::vector<std::size_t> path_distances(const LinkMatrix& g, std::size_t i);

/// f applied to the CES aggregate of own and discounted neighbor provision,
/// minus shifted contribution and link costs. Reduces exactly to the baseline
/// utility when every shock is zero.
double utility_perturbed(const StrategyProfile& profile, std::size_t i, const GameParams& params,
                         const PerturbationParams& pert);

/// Re-solves contributions on the fixed network of `profile` under `pert`.
/// Returns false if the round-robin solver does not settle.
bool solve_perturbed_contributions(StrategyProfile& profile, const GameParams& params,
                                   const PerturbationParams& pert);

/// Whether no player gains more than kDeviationTol by changing links and
/// re-optimizing contributions under the perturbed utility. n <= 8.
bool perturbed_is_equilibrium(const StrategyProfile& profile, const GameParams& params,
                              const PerturbationParams& pert);

/// Fraction of random shocks with every |eps| <= eps_bound under which the
/// network of `profile` stays an equilibrium.
double perturbation_robustness(const StrategyProfile& profile, const GameParams& params,
                               double eps_bound, std::size_t trials, std::uint64_t seed = 1);

}  // namespace netpublic
