#include "netpublic/sweep.hpp"

#include <algorithm>
#include <stdexcept>

#include "netpublic/metrics.hpp"

namespace netpublic {

namespace {

constexpr double kStrictGap = 1e-6;

std::vector<double> folded_sorted(const std::vector<double>& v) {
  std::vector<double> f;
  f.reserve(v.size());
  for (double t : v) f.push_back(std::min(t, 1.0 - t));
  std::sort(f.begin(), f.end());
  return f;
}

double ecdf(const std::vector<double>& sorted, double z) {
  const auto it = std::upper_bound(sorted.begin(), sorted.end(), z);
  return static_cast<double>(it - sorted.begin()) / static_cast<double>(sorted.size());
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

}  // namespace

SweepRecord solve_record(const GameParams& params, const WelfareMaxOptions& options) {
  const WelfareMaxResult eq = welfare_max_equilibrium(params, options);
  const MetricsRecord m = metrics(eq.profile, params);
  SweepRecord r;
  r.k = params.k;
  r.classification = eq.report.classification;
  r.contributor_count = m.contributor_count;
  r.welfare_sum = m.welfare_sum;
  r.welfare_avg = m.welfare_avg;
  r.polarization = m.polarization;
  for (std::size_t i : eq.report.contributors) r.contributor_types.push_back(params.type(i));
  r.profile = eq.profile;
  return r;
}

std::vector<SweepRecord> sweep_k(const GameParams& params, const std::vector<double>& k_grid,
                                 const WelfareMaxOptions& options) {
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    if (!(k_grid[i] > 0.0)) throw std::invalid_argument("k grid must be positive");
    if (i > 0 && !(k_grid[i] > k_grid[i - 1])) {
      throw std::invalid_argument("k grid must be strictly increasing");
    }
  }
  std::vector<SweepRecord> out;
  out.reserve(k_grid.size());
  for (double k : k_grid) {
    GameParams p = params;
    p.k = k;
    out.push_back(solve_record(p, options));
  }
  return out;
}

std::string_view to_string(RegimeEvent e) {
  switch (e) {
    case RegimeEvent::WelfareUpOnKUp: return "WelfareUpOnKUp";
    case RegimeEvent::ContributorCountChange: return "ContributorCountChange";
    case RegimeEvent::PolarizationTrendFlip: return "PolarizationTrendFlip";
    case RegimeEvent::EmptyOnset: return "EmptyOnset";
  }
  return "Unknown";
}

std::vector<RegimeChange> detect_regime_changes(const std::vector<SweepRecord>& records) {
  if (records.size() < 3) throw std::invalid_argument("regime detection needs >= 3 records");
  std::vector<RegimeChange> out;
  int prev_trend = 0;
  for (std::size_t i = 1; i < records.size(); ++i) {
    const SweepRecord& a = records[i - 1];
    const SweepRecord& b = records[i];
    const double tol = 1e-12 * std::max(1.0, std::abs(a.welfare_avg));
    if (b.welfare_avg > a.welfare_avg + tol) {
      out.push_back({a.k, b.k, RegimeEvent::WelfareUpOnKUp});
    }
    if (a.contributor_count != b.contributor_count) {
      out.push_back({a.k, b.k, RegimeEvent::ContributorCountChange});
    }
    const int trend = sign(b.polarization - a.polarization);
    if (trend != 0) {
      if (prev_trend != 0 && trend != prev_trend) {
        out.push_back({a.k, b.k, RegimeEvent::PolarizationTrendFlip});
      }
      prev_trend = trend;
    }
    if (a.classification != Classification::Empty && b.classification == Classification::Empty) {
      out.push_back({a.k, b.k, RegimeEvent::EmptyOnset});
    }
  }
  return out;
}

std::vector<LawOfFewPoint> law_of_few_scan(const std::vector<std::size_t>& n_list,
                                           const TypeDistribution& dist, const GameParams& params,
                                           std::uint64_t seed) {
  std::vector<LawOfFewPoint> out;
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (i > 0 && !(n_list[i] > n_list[i - 1])) {
      throw std::invalid_argument("n list must be increasing");
    }
    GameParams p = params;
    p.types = sample_types(dist, n_list[i], seed);
    p.subsidy.clear();
    const auto s = construct_independent(p);
    const auto stats = contributor_stats(s);
    out.push_back({n_list[i], stats.contributor_count, stats.contributor_share});
  }
  return out;
}

std::string_view to_string(Extremism e) {
  switch (e) {
    case Extremism::ALessExtreme: return "ALessExtreme";
    case Extremism::BLessExtreme: return "BLessExtreme";
    case Extremism::Incomparable: return "Incomparable";
  }
  return "Unknown";
}

Extremism folded_fosd(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 30 || b.size() < 30) throw std::invalid_argument("folded_fosd needs >= 30 samples");
  const auto fa = folded_sorted(a);
  const auto fb = folded_sorted(b);
  std::vector<double> grid(fa);
  grid.insert(grid.end(), fb.begin(), fb.end());

  bool a_below = true, b_below = true;
  double a_gap = 0.0, b_gap = 0.0;
  for (double z : grid) {
    const double da = ecdf(fa, z);
    const double db = ecdf(fb, z);
    if (da > db + 1e-12) a_below = false;
    if (db > da + 1e-12) b_below = false;
    a_gap = std::max(a_gap, db - da);
    b_gap = std::max(b_gap, da - db);
  }
  if (a_below && a_gap > kStrictGap) return Extremism::ALessExtreme;
  if (b_below && b_gap > kStrictGap) return Extremism::BLessExtreme;
  return Extremism::Incomparable;
}

}  // namespace netpublic
