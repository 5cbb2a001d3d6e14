#include "netpublic_cli/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "netpublic/equilibrium.hpp"
#include "netpublic/extensions.hpp"
#include "netpublic/metrics.hpp"
#include "netpublic/subsidy.hpp"

namespace netpublic::cli {

using ojson = nlohmann::ordered_json;

namespace {

std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

// Round-trips through 12 significant digits so the JSON writer, which prints
// the shortest exact form, never shows more.
double sig12(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(fmt("%.12g", v).c_str(), nullptr);
}

double dec6(double v) { return std::strtod(fmt("%.6f", v).c_str(), nullptr); }

const char* name(Command c) {
  switch (c) {
    case Command::Solve: return "solve";
    case Command::Verify: return "verify";
    case Command::SweepK: return "sweep_k";
    case Command::Subsidy: return "subsidy";
    case Command::LawOfFew: return "law_of_few";
    case Command::Extensions: return "extensions";
  }
  return "unknown";
}

ojson numbers(const std::vector<double>& v, double (*round)(double)) {
  ojson a = ojson::array();
  for (double d : v) a.push_back(round(d));
  return a;
}

ojson indices(const std::vector<std::size_t>& v) {
  ojson a = ojson::array();
  for (std::size_t i : v) a.push_back(i);
  return a;
}

ojson profile_json(const StrategyProfile& s) {
  ojson links = ojson::array();
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j : s.g.out_links(i)) links.push_back({i, j});
  }
  return {{"x", numbers(s.x, sig12)}, {"y", numbers(s.y, sig12)}, {"links", std::move(links)}};
}

SweepRecord record_for(const StrategyProfile& s, Classification cls, const GameParams& params) {
  const MetricsRecord m = metrics(s, params);
  SweepRecord r;
  r.k = params.k;
  r.classification = cls;
  r.contributor_count = m.contributor_count;
  r.welfare_sum = m.welfare_sum;
  r.welfare_avg = m.welfare_avg;
  r.polarization = m.polarization;
  for (std::size_t i : contributors(s.g)) r.contributor_types.push_back(params.type(i));
  r.profile = s;
  return r;
}

StrategyProfile load_profile(const ScenarioConfig& config) {
  if (config.profile) return *config.profile;
  std::ifstream in(config.profile_file);
  if (!in) throw IoError("cannot read profile file '" + config.profile_file + "'");
  std::ostringstream text;
  text << in.rdbuf();
  nlohmann::json report;
  try {
    report = nlohmann::json::parse(text.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("profile file is not JSON: ") + e.what());
  }
  const auto& recs = report.contains("records") ? report.at("records") : nlohmann::json();
  if (!recs.is_array() || config.record_index >= recs.size()) {
    throw ConfigError("profile file has no record " + std::to_string(config.record_index));
  }
  const auto& p = recs.at(config.record_index).at("profile");
  ScenarioConfig tmp = parse_config(
      nlohmann::json{{"command", "verify"}, {"k", 1.0}, {"n", 2}, {"profile", p}}.dump());
  return *tmp.profile;
}

}  // namespace

Report execute(const ScenarioConfig& config) {
  Report rep;
  rep.command = config.command;
  ojson extra = ojson::object();

  GameParams params;
  params.benefit = config.benefit;
  params.c = config.c;
  params.k = config.k.value_or(config.k_grid.empty() ? 1.0 : config.k_grid.front());

  if (config.command == Command::LawOfFew) {
    ojson points = ojson::array();
    for (std::size_t n : config.n_list) {
      GameParams p = params;
      p.types = sample_types(config.dist, n, config.seed);
      p.validate();
      const StrategyProfile s = construct_independent(p);
      SweepRecord r = record_for(s, classify(s).classification, p);
      points.push_back({{"n", n},
                        {"contributor_count", r.contributor_count},
                        {"contributor_share", sig12(static_cast<double>(r.contributor_count) /
                                                    static_cast<double>(n))}});
      rep.records.push_back(std::move(r));
    }
    extra["law_of_few"] = std::move(points);
  } else {
    params.types = scenario_types(config);
    params.validate();
    const std::size_t n = params.n();
    const SearchMode mode = config.mode.value_or(default_mode(n));
    if (mode == SearchMode::Exact && n > kExactMaxPlayers) {
      throw ConfigError("exact mode supports n <= 16");
    }
    WelfareMaxOptions opts;
    opts.mode = mode;
    opts.seed = config.seed;

    switch (config.command) {
      case Command::Solve:
        rep.records.push_back(solve_record(params, opts));
        break;
      case Command::SweepK: {
        const std::vector<double> grid = config.k_grid.empty() ? std::vector{*config.k} : config.k_grid;
        rep.records = sweep_k(params, grid, opts);
        if (rep.records.size() >= 3) {
          ojson events = ojson::array();
          for (const RegimeChange& e : detect_regime_changes(rep.records)) {
            events.push_back({{"k_lo", sig12(e.k_lo)},
                              {"k_hi", sig12(e.k_hi)},
                              {"event", std::string(to_string(e.event))}});
          }
          extra["regime_changes"] = std::move(events);
        }
        break;
      }
      case Command::Verify: {
        const StrategyProfile s = load_profile(config);
        if (s.size() != n) throw ConfigError("profile size differs from the society");
        const EquilibriumReport r = verify_nash(s, params, mode);
        rep.records.push_back(record_for(s, r.classification, params));
        ojson dev = nullptr;
        if (!r.violations.empty()) {
          const Deviation& d = r.violations.front();
          dev = {{"player", d.player},
                 {"gain", sig12(d.utility_gain)},
                 {"links", indices(d.new_links)}};
        }
        extra["verify"] = {{"mode", std::string(to_string(mode))},
                           {"detail", r.detail},
                           {"deviation", std::move(dev)}};
        break;
      }
      case Command::Subsidy: {
        PlannerOptions po;
        po.target_grid = config.target_grid;
        po.level_grid = config.level_grid;
        po.equilibrium = opts;
        const PlannerResult pr = planner(params, config.budget, po);
        GameParams sub = params;
        if (!pr.plan.recipients().empty()) sub.subsidy = pr.plan.v;
        rep.records.push_back(record_for(pr.profile, pr.report.classification, sub));
        ojson v = ojson::array();
        for (std::size_t i : pr.plan.recipients()) {
          v.push_back({{"player", i}, {"type", dec6(params.type(i))}, {"v", sig12(pr.plan.v[i])}});
        }
        extra["subsidy"] = {{"budget", sig12(config.budget)},
                            {"spent", sig12(pr.plan.spent)},
                            {"regime", std::string(to_string(pr.regime))},
                            {"recipients", std::move(v)},
                            {"baseline_welfare_sum", sig12(pr.baseline_welfare)},
                            {"baseline_contributors", indices(pr.baseline_report.contributors)},
                            {"plans_evaluated", pr.plans_evaluated},
                            {"plans_feasible", pr.plans_feasible}};
        break;
      }
      case Command::Extensions: {
        rep.records.push_back(solve_record(params, opts));
        if (config.variant == ExtensionVariant::TwoWay) {
          const auto eqs = brute_force_two_way_equilibria(params);
          bool dominance = true;
          for (const StrategyProfile& s : eqs) {
            for (std::size_t i = 0; i < n; ++i) {
              dominance = dominance && s.x[n - 1] >= s.x[i] - kEqualityTol &&
                          s.y[0] >= s.y[i] - kEqualityTol;
            }
          }
          extra["two_way"] = {{"equilibria", eqs.size()}, {"extremist_dominance", dominance}};
        } else if (config.variant == ExtensionVariant::Weighted) {
          const WeightedEquilibrium we = equilibrium_weighted(params);
          if (!we.converged) throw NonConvergence("weighted best responses did not settle");
          rep.structure_violation = we.recipients.size() != 0 && we.recipients.size() != 2;
          ojson w = ojson::array();
          for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
              if (we.profile.weight(i, j) > 0.0) {
                w.push_back({{"from", i}, {"to", j}, {"weight", sig12(we.profile.weight(i, j))}});
              }
            }
          }
          extra["weighted"] = {{"rounds", we.rounds},
                               {"recipients", indices(we.recipients)},
                               {"x", numbers(we.profile.x, sig12)},
                               {"y", numbers(we.profile.y, sig12)},
                               {"weights", std::move(w)}};
        } else {
          const double frac =
              perturbation_robustness(rep.records.front().profile, params, config.eps_bound,
                                      config.trials, config.seed);
          extra["perturbed"] = {{"eps_bound", sig12(config.eps_bound)},
                                {"trials", config.trials},
                                {"fraction_preserved", sig12(frac)}};
        }
        break;
      }
      case Command::LawOfFew:
        break;
    }
  }

  for (const SweepRecord& r : rep.records) {
    if (r.classification == Classification::StructureViolation) rep.structure_violation = true;
  }
  rep.extra_json = extra.dump();
  return rep;
}

void write_csv(const std::vector<SweepRecord>& records, std::ostream& out) {
  out << "k,classification,contributor_count,welfare_sum,welfare_avg,polarization,"
         "contributor_types\n";
  for (const SweepRecord& r : records) {
    out << fmt("%.12g", r.k) << ',' << to_string(r.classification) << ',' << r.contributor_count
        << ',' << fmt("%.12g", r.welfare_sum) << ',' << fmt("%.12g", r.welfare_avg) << ','
        << fmt("%.12g", r.polarization) << ',';
    for (std::size_t i = 0; i < r.contributor_types.size(); ++i) {
      if (i) out << ';';
      out << fmt("%.6f", r.contributor_types[i]);
    }
    out << '\n';
  }
}

void write_json(const Report& report, std::ostream& out) {
  ojson doc;
  doc["command"] = name(report.command);
  ojson recs = ojson::array();
  for (const SweepRecord& r : report.records) {
    recs.push_back({{"k", sig12(r.k)},
                    {"classification", std::string(to_string(r.classification))},
                    {"contributor_count", r.contributor_count},
                    {"welfare_sum", sig12(r.welfare_sum)},
                    {"welfare_avg", sig12(r.welfare_avg)},
                    {"polarization", sig12(r.polarization)},
                    {"contributor_types", numbers(r.contributor_types, dec6)},
                    {"profile", profile_json(r.profile)}});
  }
  doc["records"] = std::move(recs);
  const ojson extra = ojson::parse(report.extra_json);
  for (const auto& [key, value] : extra.items()) doc[key] = value;
  out << doc.dump(2) << '\n';
}

void emit_report(const Report& report, Format format, const std::string& path) {
  if (report.records.empty()) throw std::invalid_argument("report has no records");
  std::ostringstream buf;
  if (format == Format::Csv) write_csv(report.records, buf);
  else write_json(report, buf);

  if (path.empty()) {
    std::cout << buf.str();
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << buf.str();
  out.close();
  if (!out) throw IoError("write to '" + path + "' failed");
}

int run_scenario(const ScenarioConfig& config, std::ostream& err) {
  try {
    const Report rep = execute(config);
    emit_report(rep, config.format, config.out_path);
    if (rep.structure_violation) {
      err << "netpublic: structure violation in reported equilibrium\n";
      return kExitStructureViolation;
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "netpublic: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const IoError& e) {
    err << "netpublic: I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const NonConvergence& e) {
    err << "netpublic: no convergence: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const std::invalid_argument& e) {
    err << "netpublic: config error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace netpublic::cli
