#pragma once

#include <cstddef>
#include <vector>

#include "netpublic/model.hpp"

namespace netpublic {

struct Welfare {
  double sum = 0.0;
  double avg = 0.0;
};

struct MetricsRecord {
  double welfare_sum = 0.0;
  double welfare_avg = 0.0;
  double polarization = 0.0;
  std::size_t contributor_count = 0;
  double contributor_share = 0.0;
};

/// Sum and mean of utilities; -infinity propagates.
Welfare welfare(const StrategyProfile& profile, const GameParams& params);

/// Consumption X_i = x_i + xbar_i and Y_i = y_i + ybar_i for every player.
struct Consumption {
  std::vector<double> x;
  std::vector<double> y;
};
Consumption consumption(const StrategyProfile& profile);

/// Sum over ordered pairs (i, j) of |X_i - X_j| + |Y_i - Y_j|.
double polarization(const Consumption& bundles);
double polarization(const StrategyProfile& profile);

/// Players with in-degree >= 1, in index order.
std::vector<std::size_t> contributors(const LinkMatrix& g);

MetricsRecord contributor_stats(const StrategyProfile& profile);
MetricsRecord metrics(const StrategyProfile& profile, const GameParams& params);

}  // namespace netpublic
