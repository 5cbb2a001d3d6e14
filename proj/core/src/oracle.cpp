#include <cmath>
#include <stdexcept>

#include "netpublic/equilibrium.hpp"

namespace netpublic {

namespace {

constexpr double kActiveTol = 1e-12;

// Solutions of z = max(d - G z, 0) for one good.
std::vector<std::vector<double>> good_fixed_points(const LinkMatrix& g,
                                                   const std::vector<double>& d) {
  const std::size_t n = d.size();
  std::vector<std::vector<double>> out;
  for (std::uint32_t active = 0; active < (std::uint32_t{1} << n); ++active) {
    std::vector<std::size_t> a;
    for (std::size_t i = 0; i < n; ++i) {
      if (active & (std::uint32_t{1} << i)) a.push_back(i);
    }
    const std::size_t m = a.size();
    // (I + G_AA) z_A = d_A by Gaussian elimination with partial pivoting.
    std::vector<double> mat(m * (m + 1), 0.0);
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < m; ++c) {
        mat[r * (m + 1) + c] = r == c ? 1.0 : (g(a[r], a[c]) ? 1.0 : 0.0);
      }
      mat[r * (m + 1) + m] = d[a[r]];
    }
    bool singular = false;
    for (std::size_t col = 0; col < m && !singular; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < m; ++r) {
        if (std::abs(mat[r * (m + 1) + col]) > std::abs(mat[piv * (m + 1) + col])) piv = r;
      }
      if (std::abs(mat[piv * (m + 1) + col]) < 1e-12) {
        singular = true;
        break;
      }
      for (std::size_t c = 0; c <= m; ++c) std::swap(mat[col * (m + 1) + c], mat[piv * (m + 1) + c]);
      for (std::size_t r = 0; r < m; ++r) {
        if (r == col) continue;
        const double f = mat[r * (m + 1) + col] / mat[col * (m + 1) + col];
        for (std::size_t c = col; c <= m; ++c) mat[r * (m + 1) + c] -= f * mat[col * (m + 1) + c];
      }
    }
    if (singular) continue;

    std::vector<double> z(n, 0.0);
    bool ok = true;
    for (std::size_t r = 0; r < m && ok; ++r) {
      z[a[r]] = mat[r * (m + 1) + m] / mat[r * (m + 1) + r];
      ok = z[a[r]] > kActiveTol;
    }
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (active & (std::uint32_t{1} << i)) continue;
      double seen = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (g(i, j)) seen += z[j];
      }
      ok = seen >= d[i] - kActiveTol * std::max(1.0, d[i]);
    }
    if (ok) out.push_back(std::move(z));
  }
  return out;
}

}  // namespace

std::vector<std::pair<std::vector<double>, std::vector<double>>> all_contribution_fixed_points(
    const LinkMatrix& g, const GameParams& params) {
  const std::size_t n = params.n();
  if (g.size() != n) throw std::invalid_argument("graph size differs from n");
  if (n > 12) throw std::invalid_argument("all_contribution_fixed_points supports n <= 12");
  std::vector<double> dx(n), dy(n);
  for (std::size_t i = 0; i < n; ++i) {
    const IsolationDemand d = isolation_demand(params, i);
    dx[i] = d.x_hat;
    dy[i] = d.y_hat;
  }
  const auto xs = good_fixed_points(g, dx);
  const auto ys = good_fixed_points(g, dy);
  std::vector<std::pair<std::vector<double>, std::vector<double>>> out;
  for (const auto& x : xs) {
    for (const auto& y : ys) out.emplace_back(x, y);
  }
  return out;
}

std::vector<StrategyProfile> brute_force_equilibria(const GameParams& params) {
  const std::size_t n = params.n();
  if (n > 4) throw std::invalid_argument("brute_force_equilibria supports n <= 4");

  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) cells.emplace_back(i, j);
    }
  }

  std::vector<StrategyProfile> found;
  const std::uint32_t graphs = std::uint32_t{1} << cells.size();
  for (std::uint32_t code = 0; code < graphs; ++code) {
    LinkMatrix g(n);
    for (std::size_t b = 0; b < cells.size(); ++b) {
      if (code & (std::uint32_t{1} << b)) g.set(cells[b].first, cells[b].second);
    }
    for (auto& [x, y] : all_contribution_fixed_points(g, params)) {
      StrategyProfile s(n);
      s.g = g;
      s.x = std::move(x);
      s.y = std::move(y);
      if (verify_nash(s, params, SearchMode::Exact).is_equilibrium()) found.push_back(std::move(s));
    }
  }
  return found;
}

}  // namespace netpublic
