#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "netpublic_cli/scenario.hpp"

namespace netpublic::cli {

using nlohmann::json;

namespace {

std::string squash(std::string s) {
  std::string out;
  for (char ch : s) {
    if (ch == '_' || ch == '-') continue;
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  }
  return out;
}

void only_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double positive(const json& v, const std::string& name) {
  if (!v.is_number()) throw ConfigError(name + " must be a number");
  const double d = v.get<double>();
  if (!(d > 0.0)) throw ConfigError(name + " must be positive");
  return d;
}

std::size_t count(const json& v, const std::string& name) {
  if (!v.is_number_unsigned()) throw ConfigError(name + " must be a non-negative integer");
  return v.get<std::size_t>();
}

Command parse_command(const std::string& s) {
  const std::string q = squash(s);
  if (q == "solve") return Command::Solve;
  if (q == "verify") return Command::Verify;
  if (q == "sweepk" || q == "sweep") return Command::SweepK;
  if (q == "subsidy") return Command::Subsidy;
  if (q == "lawoffew") return Command::LawOfFew;
  if (q == "extensions") return Command::Extensions;
  throw ConfigError("unknown command '" + s + "'");
}

ExtensionVariant parse_variant(const std::string& s) {
  const std::string q = squash(s);
  if (q == "twoway") return ExtensionVariant::TwoWay;
  if (q == "weighted") return ExtensionVariant::Weighted;
  if (q == "perturbed") return ExtensionVariant::Perturbed;
  throw ConfigError("unknown extension variant '" + s + "'");
}

StrategyProfile parse_profile(const json& j) {
  only_keys(j, {"x", "y", "links"}, "profile");
  if (!j.contains("x") || !j.contains("y")) throw ConfigError("profile needs x and y");
  const auto x = j.at("x").get<std::vector<double>>();
  const auto y = j.at("y").get<std::vector<double>>();
  if (x.size() != y.size()) throw ConfigError("profile x and y differ in length");
  StrategyProfile s(x.size());
  s.x = x;
  s.y = y;
  if (j.contains("links")) {
    for (const auto& e : j.at("links")) {
      const auto ij = e.get<std::vector<std::size_t>>();
      if (ij.size() != 2 || ij[0] >= s.size() || ij[1] >= s.size() || ij[0] == ij[1]) {
        throw ConfigError("profile links must be [sponsor, target] index pairs");
      }
      s.g.set(ij[0], ij[1]);
    }
  }
  return s;
}

void validate(const ScenarioConfig& c) {
  const bool single_k = c.command != Command::SweepK;
  if (single_k && !c.k) throw ConfigError("this command needs a single k");

  if (c.command == Command::LawOfFew) {
    if (!c.types.empty()) throw ConfigError("law_of_few samples its own nested types");
    if (c.n_list.empty()) throw ConfigError("law_of_few needs n_list");
    for (std::size_t i = 0; i < c.n_list.size(); ++i) {
      if (c.n_list[i] < 2) throw ConfigError("n_list entries must be >= 2");
      if (i > 0 && c.n_list[i] <= c.n_list[i - 1]) throw ConfigError("n_list must increase");
    }
    return;
  }

  const std::size_t n = c.types.empty() ? c.n : c.types.size();
  if (n < 2) throw ConfigError("need n >= 2 players");
  if (c.mode == SearchMode::Exact && n > kExactMaxPlayers) {
    throw ConfigError("exact mode supports n <= 16");
  }
  if (c.command == Command::Verify && !c.profile && c.profile_file.empty()) {
    throw ConfigError("verify needs profile or profile_file");
  }
  if (c.command == Command::Extensions) {
    const std::size_t cap = c.variant == ExtensionVariant::TwoWay    ? 4
                            : c.variant == ExtensionVariant::Perturbed ? 8
                                                                       : 12;
    if (n > cap) throw ConfigError("this extension variant supports n <= " + std::to_string(cap));
  }
  if (c.command == Command::Subsidy && c.budget < 0.0) {
    throw ConfigError("budget must be non-negative");
  }
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }

  ScenarioConfig c;
  try {
    only_keys(j,
              {"command", "benefit", "c", "k", "k_grid", "n", "dist", "types", "seed", "mode",
               "output", "subsidy", "law_of_few", "extensions", "profile", "profile_file",
               "record_index"},
              "config");
    if (!j.contains("command")) throw ConfigError("missing command");
    c.command = parse_command(j.at("command").get<std::string>());

    if (j.contains("benefit")) {
      const json& b = j.at("benefit");
      only_keys(b, {"family", "exponent"}, "benefit");
      c.benefit.family = parse_benefit_family(b.at("family").get<std::string>());
      if (b.contains("exponent")) c.benefit.exponent = b.at("exponent").get<double>();
      c.benefit.validate();
    }
    if (j.contains("c")) c.c = positive(j.at("c"), "c");

    if (j.contains("k") && j.contains("k_grid")) throw ConfigError("set exactly one of k and k_grid");
    if (j.contains("k")) c.k = positive(j.at("k"), "k");
    if (j.contains("k_grid")) {
      c.k_grid = j.at("k_grid").get<std::vector<double>>();
      if (c.k_grid.empty()) throw ConfigError("k_grid is empty");
      for (std::size_t i = 0; i < c.k_grid.size(); ++i) {
        if (!(c.k_grid[i] > 0.0)) throw ConfigError("k_grid entries must be positive");
        if (i > 0 && !(c.k_grid[i] > c.k_grid[i - 1])) {
          throw ConfigError("k_grid must be strictly increasing");
        }
      }
    }
    if (!c.k && c.k_grid.empty()) throw ConfigError("set exactly one of k and k_grid");

    if (j.contains("n")) c.n = count(j.at("n"), "n");
    if (j.contains("dist")) {
      const json& d = j.at("dist");
      only_keys(d, {"kind", "mean", "sd"}, "dist");
      const std::string kind = squash(d.at("kind").get<std::string>());
      if (kind == "uniform") {
        c.dist = TypeDistribution::uniform();
      } else if (kind == "truncnormal") {
        c.dist = TypeDistribution::trunc_normal(d.value("mean", 0.5),
                                                positive(d.value("sd", json(1.0)), "dist.sd"));
      } else {
        throw ConfigError("unknown distribution '" + kind + "'");
      }
    }
    if (j.contains("types")) {
      c.types = j.at("types").get<std::vector<double>>();
      TypeVector check(c.types);  // throws on a malformed society
      if (j.contains("n") && c.n != c.types.size()) throw ConfigError("n disagrees with types");
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("mode")) c.mode = parse_search_mode(j.at("mode").get<std::string>());

    if (j.contains("output")) {
      const json& o = j.at("output");
      only_keys(o, {"path", "format"}, "output");
      if (o.contains("path")) c.out_path = o.at("path").get<std::string>();
      if (o.contains("format")) {
        const std::string f = squash(o.at("format").get<std::string>());
        if (f == "csv") c.format = Format::Csv;
        else if (f == "json") c.format = Format::Json;
        else throw ConfigError("format must be csv or json");
      }
    }

    if (j.contains("subsidy")) {
      const json& s = j.at("subsidy");
      only_keys(s, {"budget", "target_grid", "level_grid"}, "subsidy");
      c.budget = s.value("budget", 0.0);
      if (s.contains("target_grid")) c.target_grid = count(s.at("target_grid"), "target_grid");
      if (s.contains("level_grid")) c.level_grid = count(s.at("level_grid"), "level_grid");
    }
    if (j.contains("law_of_few")) {
      const json& l = j.at("law_of_few");
      only_keys(l, {"n_list"}, "law_of_few");
      c.n_list = l.at("n_list").get<std::vector<std::size_t>>();
    }
    if (j.contains("extensions")) {
      const json& e = j.at("extensions");
      only_keys(e, {"variant", "eps_bound", "trials"}, "extensions");
      c.variant = parse_variant(e.at("variant").get<std::string>());
      if (e.contains("eps_bound")) c.eps_bound = e.at("eps_bound").get<double>();
      if (e.contains("trials")) c.trials = count(e.at("trials"), "trials");
      if (c.eps_bound < 0.0) throw ConfigError("eps_bound must be non-negative");
    }
    if (j.contains("profile")) c.profile = parse_profile(j.at("profile"));
    if (j.contains("profile_file")) c.profile_file = j.at("profile_file").get<std::string>();
    if (j.contains("record_index")) c.record_index = count(j.at("record_index"), "record_index");
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  validate(c);
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

TypeVector scenario_types(const ScenarioConfig& config) {
  if (!config.types.empty()) return TypeVector(config.types);
  return sample_types(config.dist, config.n, config.seed);
}

}  // namespace netpublic::cli
