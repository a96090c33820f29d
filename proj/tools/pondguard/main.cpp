// pondguard command line: check rule programs, verify them against temporal
// properties, run simulated episodes and Monte Carlo campaigns, and assemble
// the safety-case evidence report.
//
// Exit codes, stable for scripting:
//   0  success / all properties hold / within threshold
//   1  property violated, validation error, threshold breached, hash conflict
//   2  usage or configuration error
//   3  internal error (for example a counterexample that fails to replay)

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "pondguard/dsl/parser.hpp"
#include "pondguard/dsl/validate.hpp"
#include "pondguard/evidence/cae.hpp"
#include "pondguard/evidence/campaign.hpp"
#include "pondguard/sim/episode.hpp"
#include "pondguard/verify/checker.hpp"

namespace {

using namespace pondguard;

constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;
constexpr int kInternal = 3;

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write output file: " + path);
  out << content;
}

dsl::RuleSet load_rules_or_exit_code(const std::string& path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("rule file not found: " + path);
  }
  return dsl::parse_file(path);
}

int cmd_check(const std::string& rules_path) {
  if (!std::filesystem::exists(rules_path)) {
    std::cerr << "error: rule file not found: " << rules_path << "\n";
    return kUsage;
  }
  dsl::RuleSet rs = [&] {
    try {
      return dsl::parse_file(rules_path);
    } catch (const dsl::ParseError& e) {
      std::cerr << rules_path << ": " << e.what() << "\n";
      std::exit(kViolation);
    }
  }();
  const auto diags = dsl::validate(rs);
  for (const auto& d : diags) {
    std::cout << (d.severity == dsl::Diagnostic::Severity::kError ? "ERROR"
                                                                  : "WARN")
              << ": " << d.message << "\n";
  }
  if (dsl::has_errors(diags)) return kViolation;
  if (diags.empty()) std::cout << "OK\n";
  return kOk;
}

int cmd_verify(const std::string& rules_path, const std::string& props_path,
               const std::string& env_path, std::size_t max_states,
               std::size_t max_depth, const std::string& report_path) {
  const dsl::RuleSet rs = load_rules_or_exit_code(rules_path);
  const auto diags = dsl::validate(rs);
  if (dsl::has_errors(diags)) {
    for (const auto& d : diags) std::cerr << "ERROR: " << d.message << "\n";
    throw ConfigError("rule set fails validation");
  }
  if (!std::filesystem::exists(props_path)) {
    throw ConfigError("property file not found: " + props_path);
  }
  const auto properties = verify::parse_properties_file(props_path);
  if (properties.empty()) throw ConfigError("no properties in " + props_path);

  verify::EnvOptions env_options;
  if (!env_path.empty()) env_options = verify::EnvOptions::from_file(env_path);
  const auto env = verify::EnvAbstraction::for_ruleset(rs, env_options);

  verify::Limits limits;
  limits.max_states = max_states;
  limits.max_depth = max_depth;
  const auto graph = verify::build_state_space(rs, env, limits);
  if (!graph.complete()) {
    std::cerr << "warning: exploration truncated ("
              << (graph.truncation() == verify::StateGraph::Truncation::kStates
                      ? "max-states"
                      : "max-depth")
              << " reached); only violations are conclusive\n";
  }

  std::vector<std::pair<verify::Property, verify::Verdict>> results;
  bool all_hold = true;
  for (const auto& prop : properties) {
    verify::Verdict verdict = verify::check(graph, prop);
    if (verdict.counterexample) {
      const auto rep = verify::replay(*verdict.counterexample, rs);
      if (!rep.valid) {
        std::cerr << "internal error: counterexample for '" << prop.name
                  << "' failed replay at step " << rep.mismatch_index << ": "
                  << rep.detail << "\n";
        return kInternal;
      }
    }
    const char* status = verdict.holds() ? "holds" : "VIOLATED";
    if (verdict.outcome == verify::Verdict::Outcome::kInconclusive) {
      status = "inconclusive";
    }
    std::cout << prop.name << ": " << status
              << " (states=" << verdict.states_explored
              << ", transitions=" << verdict.transitions << ")\n";
    all_hold = all_hold && verdict.holds();
    results.emplace_back(prop, std::move(verdict));
  }
  if (!report_path.empty()) {
    write_file(report_path, verify::report_json(results, graph));
  }
  return all_hold ? kOk : kViolation;
}

int cmd_sim(const std::string& scenario_path, const std::string& rules_path,
            const std::string& trace_path) {
  const auto cfg = sim::ScenarioConfig::from_file(scenario_path);
  const dsl::RuleSet rs = load_rules_or_exit_code(rules_path);
  const auto diags = dsl::validate(rs);
  if (dsl::has_errors(diags)) throw ConfigError("rule set fails validation");

  const auto result = sim::run_episode(cfg, rs, /*keep_records=*/true);
  std::cout << "outcome=" << sim::outcome_name(result.outcome)
            << " ticks=" << result.ticks << " demands=" << result.demand_count
            << "\n";
  if (!trace_path.empty()) {
    std::ofstream out(trace_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write trace: " + trace_path);
    sim::write_trace_csv(out, result.records);
  }
  return result.outcome == sim::Outcome::kCollision ? kViolation : kOk;
}

int cmd_campaign(const std::string& scenario_path,
                 const std::string& rules_path, std::uint64_t episodes,
                 std::uint64_t seed, const std::string& report_path) {
  const auto cfg = sim::ScenarioConfig::from_file(scenario_path);
  const dsl::RuleSet rs = load_rules_or_exit_code(rules_path);
  const auto diags = dsl::validate(rs);
  if (dsl::has_errors(diags)) throw ConfigError("rule set fails validation");

  unsigned threads = 0;
  if (const char* env = std::getenv("PONDGUARD_THREADS")) {
    const long parsed = std::strtol(env, nullptr, 10);
    if (parsed < 1) throw ConfigError("PONDGUARD_THREADS must be >= 1");
    threads = static_cast<unsigned>(parsed);
  }

  const auto result = evidence::run_campaign(cfg, rs, episodes, seed, threads);
  const bool within =
      result.ci95.high <= cfg.p_collision_acceptance;
  std::printf(
      "episodes=%llu collisions=%llu p_hat=%.6f ci95=[%.6f,%.6f] "
      "demands=%llu escalations=%llu threshold=%.6f verdict=%s\n",
      static_cast<unsigned long long>(result.episodes),
      static_cast<unsigned long long>(result.collisions),
      result.p_collision_hat, result.ci95.low, result.ci95.high,
      static_cast<unsigned long long>(result.guard_demands),
      static_cast<unsigned long long>(result.wdt_escalations),
      cfg.p_collision_acceptance, within ? "pass" : "fail");
  if (!report_path.empty()) write_file(report_path, result.to_json());
  return within ? kOk : kViolation;
}

int cmd_report(const std::string& cae_path, bool init,
               const std::vector<std::string>& attachments, bool force,
               const std::string& out_path) {
  evidence::CaeGraph graph;
  if (init) {
    graph = evidence::CaeGraph::default_skeleton();
  } else {
    if (!std::filesystem::exists(cae_path)) {
      throw ConfigError("CAE file not found: " + cae_path);
    }
    graph = evidence::CaeGraph::from_file(cae_path);
  }

  for (const std::string& spec : attachments) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= spec.size()) {
      throw ConfigError("--attach expects node=path, got '" + spec + "'");
    }
    const std::string node = spec.substr(0, eq);
    const std::string path = spec.substr(eq + 1);
    if (!std::filesystem::exists(path)) {
      throw ConfigError("evidence file not found: " + path);
    }
    try {
      const bool revised =
          graph.attach_evidence(node, evidence::payload_for_file(path), force);
      if (revised) {
        std::cout << "note: evidence at " << node << " revised\n";
      }
    } catch (const evidence::HashConflict& e) {
      std::cerr << "error: " << e.what() << " (use --force to revise)\n";
      return kViolation;
    } catch (const evidence::NodeNotFound& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    } catch (const evidence::NotEvidenceNode& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kUsage;
    }
  }

  std::cout << graph.render_tree();
  if (!out_path.empty()) write_file(out_path, graph.to_json());
  return graph.all_evidence_attached() ? kOk : kViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pondguard: verifiable collision avoidance for the pond survey robot"};
  app.require_subcommand(1);

  std::string rules_path;
  std::string props_path;
  std::string env_path;
  std::string scenario_path;
  std::string trace_path;
  std::string report_path;
  std::string cae_path;
  std::string out_path;
  std::vector<std::string> attachments;
  std::size_t max_states = 1'000'000;
  std::size_t max_depth = 1'000'000;
  std::uint64_t episodes = 1000;
  std::uint64_t seed = 1;
  bool force = false;
  bool init = false;

  auto* check_cmd =
      app.add_subcommand("check", "Parse and validate a rule program");
  check_cmd->add_option("rules", rules_path, "Rule file (.rbr)")->required();

  auto* verify_cmd = app.add_subcommand(
      "verify", "Model-check a rule program against temporal properties");
  verify_cmd->add_option("rules", rules_path, "Rule file (.rbr)")->required();
  verify_cmd->add_option("props", props_path, "Property file (.prop)")->required();
  verify_cmd->add_option("env", env_path,
                     "Environment abstraction config (JSON, optional)");
  verify_cmd->add_option("--max-states", max_states, "State exploration limit");
  verify_cmd->add_option("--max-depth", max_depth, "Exploration depth limit");
  verify_cmd->add_option("--report", report_path, "Write verdict JSON here");

  auto* sim_cmd = app.add_subcommand("sim", "Run one simulated episode");
  sim_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required();
  sim_cmd->add_option("rules", rules_path, "Rule file (.rbr)")->required();
  sim_cmd->add_option("--trace", trace_path, "Write trace CSV here");

  auto* campaign_cmd =
      app.add_subcommand("campaign", "Run a Monte Carlo episode campaign");
  campaign_cmd->add_option("scenario", scenario_path, "Scenario JSON")->required();
  campaign_cmd->add_option("rules", rules_path, "Rule file (.rbr)")->required();
  campaign_cmd->add_option("--episodes", episodes, "Episode count (>= 1)");
  campaign_cmd->add_option("--seed", seed, "Campaign root seed");
  campaign_cmd->add_option("--report", report_path, "Write campaign JSON here");

  auto* report_cmd =
      app.add_subcommand("report", "Assemble the claims-arguments-evidence report");
  report_cmd->add_option("cae", cae_path, "CAE graph JSON")->required();
  report_cmd->add_flag("--init", init,
                   "Start from the built-in skeleton instead of loading");
  report_cmd->add_option("--attach", attachments,
                     "Attach evidence, node=path (repeatable)");
  report_cmd->add_flag("--force", force, "Allow revising attached evidence");
  report_cmd->add_option("--out", out_path, "Write the updated graph here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (app.got_subcommand(check_cmd)) return cmd_check(rules_path);
    if (app.got_subcommand(verify_cmd)) {
      return cmd_verify(rules_path, props_path, env_path, max_states,
                        max_depth, report_path);
    }
    if (app.got_subcommand(sim_cmd)) {
      return cmd_sim(scenario_path, rules_path, trace_path);
    }
    if (app.got_subcommand(campaign_cmd)) {
      if (episodes < 1) throw ConfigError("--episodes must be >= 1");
      return cmd_campaign(scenario_path, rules_path, episodes, seed,
                          report_path);
    }
    if (app.got_subcommand(report_cmd)) {
      return cmd_report(cae_path, init, attachments, force, out_path);
    }
  } catch (const dsl::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const verify::PropertyParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
