#include "netpublic/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace netpublic {

namespace {

// sum_{i,j} |v_i - v_j| in O(n log n): after sorting, element r appears with
// a plus sign r times and a minus sign (n - 1 - r) times per orientation.
double ordered_pair_spread(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const double n = static_cast<double>(v.size());
  double total = 0.0;
  for (std::size_t r = 0; r < v.size(); ++r) {
    total += v[r] * (2.0 * static_cast<double>(r) - (n - 1.0));
  }
  return 2.0 * total;
}

}  // namespace

Welfare welfare(const StrategyProfile& profile, const GameParams& params) {
  Welfare w;
  for (std::size_t i = 0; i < profile.size(); ++i) w.sum += utility(profile, i, params);
  w.avg = profile.size() ? w.sum / static_cast<double>(profile.size()) : 0.0;
  return w;
}

Consumption consumption(const StrategyProfile& profile) {
  const std::size_t n = profile.size();
  Consumption c{profile.x, profile.y};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (profile.g(i, j)) {
        c.x[i] += profile.x[j];
        c.y[i] += profile.y[j];
      }
    }
  }
  return c;
}

double polarization(const Consumption& bundles) {
  return ordered_pair_spread(bundles.x) + ordered_pair_spread(bundles.y);
}

double polarization(const StrategyProfile& profile) { return polarization(consumption(profile)); }

std::vector<std::size_t> contributors(const LinkMatrix& g) {
  const std::size_t n = g.size();
  std::vector<std::uint8_t> receives(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (g(i, j)) receives[j] = 1;
    }
  }
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n; ++j) {
    if (receives[j]) out.push_back(j);
  }
  return out;
}

MetricsRecord contributor_stats(const StrategyProfile& profile) {
  MetricsRecord r;
  r.contributor_count = contributors(profile.g).size();
  r.contributor_share = profile.size() ? static_cast<double>(r.contributor_count) /
                                             static_cast<double>(profile.size())
                                       : 0.0;
  return r;
}

MetricsRecord metrics(const StrategyProfile& profile, const GameParams& params) {
  MetricsRecord r = contributor_stats(profile);
  const Welfare w = welfare(profile, params);
  r.welfare_sum = w.sum;
  r.welfare_avg = w.avg;
  r.polarization = polarization(profile);
  return r;
}

}  // namespace netpublic
