#include "netpublic/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "netpublic/random.hpp"

namespace netpublic {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

std::string_view to_string(BenefitFamily family) {
  switch (family) {
    case BenefitFamily::Log: return "log";
    case BenefitFamily::Sqrt: return "sqrt";
    case BenefitFamily::Power: return "power";
  }
  return "unknown";
}

BenefitFamily parse_benefit_family(std::string_view name) {
  if (name == "log" || name == "ln") return BenefitFamily::Log;
  if (name == "sqrt") return BenefitFamily::Sqrt;
  if (name == "power") return BenefitFamily::Power;
  throw std::invalid_argument("unknown benefit family: " + std::string(name));
}

BenefitSpec BenefitSpec::power(double a) {
  BenefitSpec spec{BenefitFamily::Power, a};
  spec.validate();
  return spec;
}

void BenefitSpec::validate() const {
  if (family == BenefitFamily::Power && !(exponent > 0.0 && exponent < 1.0)) {
    throw std::invalid_argument("power benefit exponent must lie in (0, 1)");
  }
}

std::string BenefitSpec::describe() const {
  std::ostringstream os;
  os << to_string(family);
  if (family == BenefitFamily::Power) os << "(" << exponent << ")";
  return os.str();
}

double BenefitSpec::value(double z) const {
  switch (family) {
    case BenefitFamily::Log: return z > 0.0 ? std::log(z) : -kInf;
    case BenefitFamily::Sqrt: return std::sqrt(z);
    case BenefitFamily::Power: return std::pow(z, exponent);
  }
  return 0.0;
}

double BenefitSpec::deriv(double z) const {
  if (z <= 0.0) return kInf;
  switch (family) {
    case BenefitFamily::Log: return 1.0 / z;
    case BenefitFamily::Sqrt: return 0.5 / std::sqrt(z);
    case BenefitFamily::Power: return exponent * std::pow(z, exponent - 1.0);
  }
  return 0.0;
}

double BenefitSpec::deriv_inverse(double m) const {
  if (!(m > 0.0)) throw std::domain_error("f'^-1 requires a positive argument");
  switch (family) {
    case BenefitFamily::Log: return 1.0 / m;
    case BenefitFamily::Sqrt: return 1.0 / (4.0 * m * m);
    case BenefitFamily::Power: return std::pow(exponent / m, 1.0 / (1.0 - exponent));
  }
  return 0.0;
}

double evaluate_benefit(const BenefitSpec& spec, double z, BenefitMode mode) {
  switch (mode) {
    case BenefitMode::Value: return spec.value(z);
    case BenefitMode::Deriv: return spec.deriv(z);
    case BenefitMode::DerivInv: return spec.deriv_inverse(z);
  }
  return 0.0;
}

double weighted_benefit(const BenefitSpec& spec, double weight, double z) {
  if (weight == 0.0) return 0.0;
  return weight * spec.value(z);
}

TypeVector::TypeVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw std::invalid_argument("type vector needs at least two entries");
  if (values_.front() != 0.0 || values_.back() != 1.0) {
    throw std::invalid_argument("type vector must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < values_.size(); ++i) {
    if (!(values_[i] > values_[i - 1])) {
      throw std::invalid_argument("types must be strictly increasing");
    }
  }
}

double TypeVector::mean() const {
  if (values_.empty()) return 0.0;
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

void GameParams::validate() const {
  if (!(c > 0.0)) throw std::invalid_argument("contribution cost c must be positive");
  if (!(k > 0.0)) throw std::invalid_argument("linking cost k must be positive");
  if (types.size() < 2) throw std::invalid_argument("game needs a type vector");
  benefit.validate();
  if (!subsidy.empty()) {
    if (subsidy.size() != types.size()) throw std::invalid_argument("subsidy vector size mismatch");
    for (double v : subsidy) {
      if (v < 0.0 || !(v < c)) throw std::invalid_argument("subsidies must satisfy 0 <= v < c");
    }
  }
}

void LinkMatrix::set(std::size_t i, std::size_t j, bool on) {
  if (i == j) throw std::invalid_argument("self links are not allowed");
  cells_[i * n_ + j] = on ? 1 : 0;
}

void LinkMatrix::clear_row(std::size_t i) {
  std::fill_n(cells_.begin() + static_cast<std::ptrdiff_t>(i * n_), n_, std::uint8_t{0});
}

std::vector<std::size_t> LinkMatrix::out_links(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < n_; ++j) {
    if ((*this)(i, j)) out.push_back(j);
  }
  return out;
}

std::size_t LinkMatrix::out_degree(std::size_t i) const {
  std::size_t d = 0;
  for (std::size_t j = 0; j < n_; ++j) d += cells_[i * n_ + j];
  return d;
}

std::size_t LinkMatrix::in_degree(std::size_t j) const {
  std::size_t d = 0;
  for (std::size_t i = 0; i < n_; ++i) d += cells_[i * n_ + j];
  return d;
}

std::size_t LinkMatrix::link_count() const {
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), std::uint8_t{1}));
}

void StrategyProfile::validate() const {
  if (y.size() != x.size() || g.size() != x.size()) {
    throw std::invalid_argument("strategy profile dimensions disagree");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0 || y[i] < 0.0) throw std::invalid_argument("contributions must be non-negative");
  }
}

IsolationDemand isolation_demand(double t, double c, const BenefitSpec& spec) {
  IsolationDemand d;
  d.x_hat = t > 0.0 ? spec.deriv_inverse(c / t) : 0.0;
  d.y_hat = t < 1.0 ? spec.deriv_inverse(c / (1.0 - t)) : 0.0;
  return d;
}

IsolationDemand isolation_demand(const GameParams& params, std::size_t i) {
  return isolation_demand(params.type(i), params.cost(i), params.benefit);
}

std::vector<IsolationDemand> isolation_demands(const GameParams& params) {
  std::vector<IsolationDemand> out(params.n());
  for (std::size_t i = 0; i < params.n(); ++i) out[i] = isolation_demand(params, i);
  return out;
}

StrategyProfile isolation_profile(const GameParams& params) {
  StrategyProfile s(params.n());
  for (std::size_t i = 0; i < params.n(); ++i) {
    const auto d = isolation_demand(params, i);
    s.x[i] = d.x_hat;
    s.y[i] = d.y_hat;
  }
  return s;
}

Spillover spillovers(const StrategyProfile& profile, std::size_t i) {
  Spillover s;
  const std::size_t n = profile.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (profile.g(i, j)) {
      s.x += profile.x[j];
      s.y += profile.y[j];
    }
  }
  return s;
}

Spillover spillovers_over(const StrategyProfile& profile, std::span<const std::size_t> links) {
  Spillover s;
  for (std::size_t j : links) {
    s.x += profile.x[j];
    s.y += profile.y[j];
  }
  return s;
}

double consumption_benefit(const BenefitSpec& spec, double t, double consumed_x, double consumed_y) {
  return weighted_benefit(spec, t, consumed_x) + weighted_benefit(spec, 1.0 - t, consumed_y);
}

double utility(const StrategyProfile& profile, std::size_t i, const GameParams& params) {
  const Spillover s = spillovers(profile, i);
  const double xi = profile.x[i];
  const double yi = profile.y[i];
  return consumption_benefit(params.benefit, params.type(i), xi + s.x, yi + s.y) -
         params.cost(i) * (xi + yi) -
         static_cast<double>(profile.g.out_degree(i)) * params.k;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("normal_quantile requires p in (0, 1)");
  // Acklam's rational approximation.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00, 2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  constexpr double p_high = 1.0 - p_low;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= p_high) {
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  const double q = std::sqrt(-2.0 * std::log(1.0 - p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

TypeVector sample_types(const TypeDistribution& dist, std::size_t n, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("sample_types requires n >= 3");
  if (dist.kind == TypeDistribution::Kind::TruncNormal && !(dist.sd > 0.0)) {
    throw std::invalid_argument("truncated normal needs sd > 0");
  }
  Rng rng(seed);
  const double lo_p = dist.kind == TypeDistribution::Kind::TruncNormal
                          ? normal_cdf((0.0 - dist.mean) / dist.sd)
                          : 0.0;
  const double hi_p = dist.kind == TypeDistribution::Kind::TruncNormal
                          ? normal_cdf((1.0 - dist.mean) / dist.sd)
                          : 1.0;

  auto draw = [&]() {
    if (dist.kind == TypeDistribution::Kind::Uniform) return rng.uniform_open();
    const double u = lo_p + (hi_p - lo_p) * rng.uniform_open();
    return dist.mean + dist.sd * normal_quantile(u);
  };

  std::vector<double> values;
  values.reserve(n);
  std::unordered_set<double> seen;
  while (values.size() < n - 2) {
    const double t = draw();
    if (!(t > 0.0 && t < 1.0)) continue;
    if (!seen.insert(t).second) continue;  // collision: draw again
    values.push_back(t);
  }
  values.push_back(0.0);
  values.push_back(1.0);
  std::sort(values.begin(), values.end());
  return TypeVector(std::move(values));
}

}  // namespace netpublic
