#include <json.hpp>

#include "pondguard/verify/checker.hpp"

namespace pondguard::verify {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json state_to_json(const StateGraph& graph, const ModelState& s) {
  ordered_json j;
  j["env_cell"] = s.env_cell;
  j["contact"] = graph.env().cell_contact(s.env_cell);
  j["voted_trip"] = graph.env().cell_voted(s.env_cell);
  j["distance"] = graph.env().percept_for_cell(s.env_cell).distance;
  j["trip_latched"] = s.trip_latched;
  j["ticks_since_trip"] = s.ticks_since_trip;
  j["last_action"] = std::string(s.last_action.kind_name());
  j["wdt"] = s.wdt_elapsed;
  return j;
}

ordered_json percept_to_json(const rbr::Percept& p) {
  ordered_json j;
  j["distance"] = p.distance;
  j["classifier_detect"] = p.classifier_detect;
  j["sonar_trip"] = p.sonar_trip;
  j["voted_trip"] = p.voted_trip;
  j["contact"] = p.contact;
  j["speed"] = p.speed;
  return j;
}

}  // namespace

std::string report_json(
    const std::vector<std::pair<Property, Verdict>>& results,
    const StateGraph& graph) {
  ordered_json out = ordered_json::array();
  for (const auto& [prop, verdict] : results) {
    ordered_json entry;
    entry["property"] = prop.name;
    entry["holds"] = verdict.holds();
    entry["states"] = verdict.states_explored;
    entry["transitions"] = verdict.transitions;
    ordered_json ce = ordered_json::array();
    if (verdict.counterexample) {
      for (const TraceStep& step : verdict.counterexample->path) {
        ordered_json el;
        el["state"] = state_to_json(graph, step.state);
        el["percept"] = percept_to_json(step.percept);
        el["action"] = std::string(step.step.action.kind_name());
        el["rule"] = step.step.fired_rule;
        ce.push_back(std::move(el));
      }
    }
    entry["counterexample"] = std::move(ce);
    if (verdict.outcome == Verdict::Outcome::kInconclusive) {
      entry["inconclusive"] = true;
    }
    out.push_back(std::move(entry));
  }
  return out.dump(2) + "\n";
}

}  // namespace pondguard::verify
