#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "netpublic/equilibrium.hpp"
#include "netpublic/model.hpp"

namespace netpublic {

struct SweepRecord {
  double k = 0.0;
  Classification classification = Classification::Empty;
  std::size_t contributor_count = 0;
  double welfare_sum = 0.0;
  double welfare_avg = 0.0;
  double polarization = 0.0;
  std::vector<double> contributor_types;
  StrategyProfile profile;
};

/// Welfare-maximizing equilibrium and its metrics for one parameter set.
SweepRecord solve_record(const GameParams& params, const WelfareMaxOptions& options = {});

/// Same society (params.types) at every k of a strictly increasing grid;
/// params.k is ignored.
std::vector<SweepRecord> sweep_k(const GameParams& params, const std::vector<double>& k_grid,
                                 const WelfareMaxOptions& options = {});

enum class RegimeEvent { WelfareUpOnKUp, ContributorCountChange, PolarizationTrendFlip, EmptyOnset };
std::string_view to_string(RegimeEvent e);

struct RegimeChange {
  double k_lo = 0.0;
  double k_hi = 0.0;
  RegimeEvent event = RegimeEvent::WelfareUpOnKUp;
};

/// Events between adjacent records. A trend flip is reported on the interval
/// where the sign of the polarization change differs from the previous one.
std::vector<RegimeChange> detect_regime_changes(const std::vector<SweepRecord>& records);

struct LawOfFewPoint {
  std::size_t n = 0;
  std::size_t contributor_count = 0;
  double contributor_share = 0.0;
};

/// |C| of the constructive independent equilibrium on nested samples.
std::vector<LawOfFewPoint> law_of_few_scan(const std::vector<std::size_t>& n_list,
                                           const TypeDistribution& dist, const GameParams& params,
                                           std::uint64_t seed);

enum class Extremism { ALessExtreme, BLessExtreme, Incomparable };
std::string_view to_string(Extremism e);

/// Compares empirical CDFs of min(t, 1 - t). A is less extreme when its
/// folded CDF lies weakly below B's everywhere and strictly below somewhere.
Extremism folded_fosd(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace netpublic
