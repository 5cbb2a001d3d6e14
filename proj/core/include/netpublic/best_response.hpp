#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "netpublic/model.hpp"

namespace netpublic {

enum class SearchMode { Exact, Structural };

std::string_view to_string(SearchMode mode);
SearchMode parse_search_mode(std::string_view name);

/// Largest n for which Exact mode enumerates all 2^(n-1) link sets.
inline constexpr std::size_t kExactMaxPlayers = 16;
/// Structural mode: number of top providers added to the candidate targets.
inline constexpr std::size_t kStructuralTopProviders = 4;
/// Structural mode: largest link set examined.
inline constexpr std::size_t kStructuralMaxLinks = 3;

struct Contributions {
  double x = 0.0;
  double y = 0.0;
};

/// Witness of a profitable unilateral deviation.
struct Deviation {
  std::size_t player = 0;
  LinkSet new_links;
  double new_x = 0.0;
  double new_y = 0.0;
  double utility_gain = 0.0;
};

struct BestResponse {
  LinkSet links;
  double x = 0.0;
  double y = 0.0;
  double utility = 0.0;
};

enum class LinkAction { Add, Delete };

/// Optimal own contributions against the given spillovers:
/// x = max(x_hat - xbar, 0), y = max(y_hat - ybar, 0).
Contributions optimal_contributions(const GameParams& params, std::size_t i, Spillover received);

Contributions optimal_contributions(std::size_t i, std::span<const std::size_t> links,
                                    const StrategyProfile& others, const GameParams& params);

/// Benefit minus contribution cost at optimal contributions, link fees
/// excluded. GL values are differences of this quantity.
double link_set_value(const GameParams& params, std::size_t i, Spillover received);

/// Gains of i from adding (or from keeping, for Delete) the link to j, with
/// i's contributions re-optimized on both sides.
double gains_from_link(const StrategyProfile& profile, std::size_t i, std::size_t j,
                       LinkAction action, const GameParams& params);

/// Best link set and contributions for i against the rest of `profile`.
///
/// Exact enumerates every subset of the other players. Structural restricts
/// targets to current receivers plus the top providers by x + y, and to sets
/// of at most kStructuralMaxLinks. Among strategies within kDeviationTol of
/// the best utility, fewer links win, then the lexicographically smaller set.
BestResponse best_response(std::size_t i, const StrategyProfile& profile, const GameParams& params,
                           SearchMode mode);

/// Unrestricted maximum utility reachable by i (the value best_response ties
/// are measured against).
double best_response_utility(std::size_t i, const StrategyProfile& profile,
                             const GameParams& params, SearchMode mode);

/// Lowest-index player whose best response beats the current utility by more
/// than kDeviationTol.
std::optional<Deviation> find_profitable_deviation(const StrategyProfile& profile,
                                                   const GameParams& params, SearchMode mode);

/// Smallest margin by which any player's current strategy beats its best
/// alternative link set (contributions re-optimized). Positive values mean a
/// strict equilibrium. Exact mode only.
double min_deviation_gap(const StrategyProfile& profile, const GameParams& params);

}  // namespace netpublic
