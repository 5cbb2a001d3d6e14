#include <stdexcept>
#include <string>

#include "netpublic/equilibrium.hpp"

namespace netpublic {

std::string_view to_string(Classification c) {
  switch (c) {
    case Classification::Empty: return "Empty";
    case Classification::Independent: return "Independent";
    case Classification::Collaborative: return "Collaborative";
    case Classification::PartiallyCollaborative: return "PartiallyCollaborative";
    case Classification::NonEquilibrium: return "NonEquilibrium";
    case Classification::StructureViolation: return "StructureViolation";
  }
  return "Unknown";
}

Classification parse_classification(std::string_view name) {
  for (auto c : {Classification::Empty, Classification::Independent,
                 Classification::Collaborative, Classification::PartiallyCollaborative,
                 Classification::NonEquilibrium, Classification::StructureViolation}) {
    if (to_string(c) == name) return c;
  }
  throw std::invalid_argument("unknown classification: " + std::string(name));
}

EquilibriumReport classify(const StrategyProfile& profile) {
  const std::size_t n = profile.size();
  const LinkMatrix& g = profile.g;
  std::vector<std::size_t> in(n, 0), out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (g(i, j)) {
        ++out[i];
        ++in[j];
      }
    }
  }

  EquilibriumReport r;
  for (std::size_t i = 0; i < n; ++i) {
    if (in[i] > 0) {
      r.contributors.push_back(i);
    } else if (out[i] > 0) {
      r.periphery.push_back(i);
    } else {
      r.isolated.push_back(i);
    }
  }
  if (r.contributors.empty()) {
    r.classification = Classification::Empty;
    return r;
  }

  std::size_t core_links = 0;
  for (std::size_t a : r.contributors) {
    for (std::size_t b : r.contributors) {
      if (a != b && g(a, b)) ++core_links;
    }
  }

  if (core_links > 0) {
    if (r.contributors.size() != 2) {
      r.classification = Classification::StructureViolation;
      r.detail = "links among contributors with |C| = " + std::to_string(r.contributors.size());
      return r;
    }
    r.classification = core_links == 2 ? Classification::Collaborative
                                       : Classification::PartiallyCollaborative;
    return r;
  }

  r.classification = Classification::Independent;
  if (r.contributors.size() >= 3) {
    for (std::size_t p : r.periphery) {
      if (out[p] > 1) {
        r.classification = Classification::StructureViolation;
        r.detail = "player " + std::to_string(p) + " sponsors " + std::to_string(out[p]) +
                   " links with |C| >= 3";
        return r;
      }
    }
  }
  return r;
}

EquilibriumReport verify_nash(const StrategyProfile& profile, const GameParams& params,
                              SearchMode mode) {
  profile.validate();
  if (profile.size() != params.n()) throw std::invalid_argument("profile size differs from n");
  if (mode == SearchMode::Exact && profile.size() > kExactMaxPlayers) {
    throw std::invalid_argument("exact verification supports n <= 16");
  }

  std::optional<Deviation> dev;
  // The restricted search is cheap and every deviation it finds is genuine.
  if (mode == SearchMode::Exact) dev = find_profitable_deviation(profile, params, SearchMode::Structural);
  if (!dev) dev = find_profitable_deviation(profile, params, mode);

  if (dev) {
    EquilibriumReport r = classify(profile);
    r.classification = Classification::NonEquilibrium;
    r.detail.clear();
    r.violations.push_back(*dev);
    return r;
  }
  return classify(profile);
}

}  // namespace netpublic
