#pragma once

// Game primitives: benefit families, types, parameters, strategy profiles,
// isolation demands and utilities of the two-good local public goods game
// with one-way, sponsor-paid links.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace netpublic {

/// Absolute tolerance for "consumption equals isolation demand" checks.
inline constexpr double kEqualityTol = 1e-9;
/// A deviation must improve utility by more than this to count as profitable.
inline constexpr double kDeviationTol = 1e-7;

enum class BenefitFamily { Log, Sqrt, Power };
enum class BenefitMode { Value, Deriv, DerivInv };

std::string_view to_string(BenefitFamily family);
BenefitFamily parse_benefit_family(std::string_view name);

/// Concave benefit f applied to the consumption of each good.
///
/// Log:  f = ln z,   f' = 1/z,          f'^-1(m) = 1/m
/// Sqrt: f = sqrt z, f' = 1/(2 sqrt z), f'^-1(m) = 1/(4 m^2)
/// Power(a): f = z^a, f' = a z^(a-1),   f'^-1(m) = (a/m)^(1/(1-a))
///
/// All three satisfy f'(0+) = inf and f'(inf) = 0, so isolation demands are
/// finite and positive for every c > 0.
struct BenefitSpec {
  BenefitFamily family = BenefitFamily::Log;
  double exponent = 0.5;  // used by Power only, in (0, 1)

  static BenefitSpec log() { return {BenefitFamily::Log, 0.5}; }
  static BenefitSpec sqrt() { return {BenefitFamily::Sqrt, 0.5}; }
  static BenefitSpec power(double a);

  /// f(z). Log at z = 0 returns -infinity.
  double value(double z) const;
  double deriv(double z) const;
  double deriv_inverse(double m) const;

  void validate() const;
  std::string describe() const;

  friend bool operator==(const BenefitSpec&, const BenefitSpec&) = default;
};

double evaluate_benefit(const BenefitSpec& spec, double z, BenefitMode mode);

/// weight * f(z) with the convention that a zero weight contributes exactly 0
/// (so corner types never see ln 0).
double weighted_benefit(const BenefitSpec& spec, double weight, double z);

/// Strictly increasing types in [0, 1] with 0 and 1 always present.
class TypeVector {
 public:
  TypeVector() = default;
  explicit TypeVector(std::vector<double> values);

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  double mean() const;

  friend bool operator==(const TypeVector&, const TypeVector&) = default;

 private:
  std::vector<double> values_;
};

struct IsolationDemand {
  double x_hat = 0.0;
  double y_hat = 0.0;

  double total() const { return x_hat + y_hat; }
};

struct GameParams {
  TypeVector types;
  double c = 1.0;  // contribution cost
  double k = 1.0;  // linking cost
  BenefitSpec benefit;
  /// Optional per-player cost reduction v_i; player i pays c - v_i per unit.
  std::vector<double> subsidy;

  std::size_t n() const { return types.size(); }
  double type(std::size_t i) const { return types[i]; }
  double cost(std::size_t i) const { return subsidy.empty() ? c : c - subsidy[i]; }

  /// Throws std::invalid_argument on c <= 0, k <= 0, a bad benefit spec or a
  /// subsidy that leaves a non-positive cost.
  void validate() const;
};

/// Row-major {0,1} adjacency with zero diagonal; (i, j) set means i sponsors a
/// link to j and receives j's contributions.
class LinkMatrix {
 public:
  explicit LinkMatrix(std::size_t n = 0) : n_(n), cells_(n * n, 0) {}

  std::size_t size() const { return n_; }
  bool operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j] != 0; }
  void set(std::size_t i, std::size_t j, bool on = true);
  void clear_row(std::size_t i);

  std::vector<std::size_t> out_links(std::size_t i) const;
  std::size_t out_degree(std::size_t i) const;
  std::size_t in_degree(std::size_t j) const;
  std::size_t link_count() const;
  bool has_links() const { return link_count() > 0; }

  friend bool operator==(const LinkMatrix&, const LinkMatrix&) = default;

 private:
  std::size_t n_;
  std::vector<std::uint8_t> cells_;
};

/// Sorted list of link targets.
using LinkSet = std::vector<std::size_t>;

struct StrategyProfile {
  std::vector<double> x;
  std::vector<double> y;
  LinkMatrix g;

  StrategyProfile() = default;
  explicit StrategyProfile(std::size_t n) : x(n, 0.0), y(n, 0.0), g(n) {}

  std::size_t size() const { return x.size(); }
  void validate() const;
};

struct Spillover {
  double x = 0.0;
  double y = 0.0;
};

IsolationDemand isolation_demand(double t, double c, const BenefitSpec& spec);
IsolationDemand isolation_demand(const GameParams& params, std::size_t i);
std::vector<IsolationDemand> isolation_demands(const GameParams& params);

/// Everyone isolated and contributing their isolation bundle.
StrategyProfile isolation_profile(const GameParams& params);

Spillover spillovers(const StrategyProfile& profile, std::size_t i);
Spillover spillovers_over(const StrategyProfile& profile, std::span<const std::size_t> links);

/// t f(X) + (1 - t) f(Y) under the zero-weight convention.
double consumption_benefit(const BenefitSpec& spec, double t, double consumed_x, double consumed_y);

/// U_i = t_i f(x_i + xbar_i) + (1 - t_i) f(y_i + ybar_i) - c_i (x_i + y_i) - eta_i k.
/// Returns -infinity when a positively weighted good is not consumed under Log.
double utility(const StrategyProfile& profile, std::size_t i, const GameParams& params);

struct TypeDistribution {
  enum class Kind { Uniform, TruncNormal };
  Kind kind = Kind::Uniform;
  double mean = 0.5;
  double sd = 1.0;

  static TypeDistribution uniform() { return {}; }
  static TypeDistribution trunc_normal(double mean, double sd) {
    return {Kind::TruncNormal, mean, sd};
  }
};

/// n - 2 distinct interior draws plus the corner types 0 and 1, sorted.
/// Draws are sequential, so the set for n is contained in the set for any
/// larger n with the same seed.
TypeVector sample_types(const TypeDistribution& dist, std::size_t n, std::uint64_t seed);

double normal_cdf(double z);
/// Rational approximation of the standard normal quantile, |rel err| < 1.2e-9.
double normal_quantile(double p);

}  // namespace netpublic
