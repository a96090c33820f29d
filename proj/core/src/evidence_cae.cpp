#include "pondguard/evidence/cae.hpp"

#include <sys/stat.h>

#include <ctime>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "pondguard/util/hash.hpp"

namespace pondguard::evidence {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* kind_name(CaeNode::Kind k) {
  switch (k) {
    case CaeNode::Kind::kClaim: return "claim";
    case CaeNode::Kind::kArgument: return "argument";
    case CaeNode::Kind::kEvidence: return "evidence";
  }
  return "claim";
}

CaeNode::Kind kind_from_name(const std::string& name) {
  if (name == "claim") return CaeNode::Kind::kClaim;
  if (name == "argument") return CaeNode::Kind::kArgument;
  if (name == "evidence") return CaeNode::Kind::kEvidence;
  throw ConfigError("unknown CAE node kind '" + name + "'");
}

std::optional<HazardGroup> hazard_group_from_name(const std::string& name) {
  for (HazardGroup g :
       {HazardGroup::kNuclearRadiological, HazardGroup::kConventional,
        HazardGroup::kPhysical, HazardGroup::kCyberSecurity}) {
    if (name == hazard_group_name(g)) return g;
  }
  return std::nullopt;
}

}  // namespace

CaeGraph CaeGraph::default_skeleton() {
  CaeGraph g;
  g.root_ = "C1";
  auto add = [&g](CaeNode node) { g.nodes_.push_back(std::move(node)); };

  add({"C1", CaeNode::Kind::kClaim,
       "The survey robot is adequately safe to carry out its pond survey "
       "task.",
       std::nullopt,
       {"C-nuclear", "C-conventional", "C-physical", "C-cyber"},
       std::nullopt});
  add({"C-nuclear", CaeNode::Kind::kClaim,
       "Radiological hazards from robot operation are reduced ALARP.",
       HazardGroup::kNuclearRadiological,
       {},
       std::nullopt});
  add({"C-conventional", CaeNode::Kind::kClaim,
       "Conventional hazards from robot operation are reduced ALARP.",
       HazardGroup::kConventional,
       {},
       std::nullopt});
  add({"C-physical", CaeNode::Kind::kClaim,
       "Physical hazards from robot operation are reduced ALARP.",
       HazardGroup::kPhysical,
       {"C-collision", "H-splash", "H-irretrievable", "H-hydrogen"},
       std::nullopt});
  add({"C-cyber", CaeNode::Kind::kClaim,
       "Cyber security hazards affecting the robot are controlled.",
       HazardGroup::kCyberSecurity,
       {},
       std::nullopt});
  add({"C-collision", CaeNode::Kind::kClaim,
       "The risk of collision with the pond structure or its contents is "
       "mitigated and managed, keeping the consequence in the below-2-mSv "
       "band.",
       std::nullopt,
       {"A-method1", "A-method2"},
       std::nullopt});
  add({"H-splash", CaeNode::Kind::kClaim,
       "Propeller splash hazard (not expanded in this skeleton).",
       std::nullopt,
       {},
       std::nullopt});
  add({"H-irretrievable", CaeNode::Kind::kClaim,
       "Vehicle irretrievability hazard (not expanded in this skeleton).",
       std::nullopt,
       {},
       std::nullopt});
  add({"H-hydrogen", CaeNode::Kind::kClaim,
       "Hydrogen accumulation hazard (not expanded in this skeleton).",
       std::nullopt,
       {},
       std::nullopt});
  add({"A-method1", CaeNode::Kind::kArgument,
       "An engineered guard, diverse and segregated from the control system, "
       "removes propulsion power on whisker contact or watchdog escalation.",
       std::nullopt,
       {"E-guard-demands"},
       std::nullopt});
  add({"A-method2", CaeNode::Kind::kArgument,
       "The rules-based avoidance controller is model-checked against its "
       "collision-response requirements and statistically tested in "
       "simulation.",
       std::nullopt,
       {"E-verify-collision", "E-campaign-baseline"},
       std::nullopt});
  add({"E-guard-demands", CaeNode::Kind::kEvidence,
       "Guard demand statistics from the degraded-sensor fault-injection "
       "campaign.",
       std::nullopt,
       {},
       std::nullopt});
  add({"E-verify-collision", CaeNode::Kind::kEvidence,
       "Model-checking report: bounded collision-response properties hold "
       "for the controller rule set.",
       std::nullopt,
       {},
       std::nullopt});
  add({"E-campaign-baseline", CaeNode::Kind::kEvidence,
       "Monte Carlo campaign report: collision probability estimate with "
       "95% confidence bound under nominal sensing.",
       std::nullopt,
       {},
       std::nullopt});
  return g;
}

const CaeNode* CaeGraph::find(const std::string& id) const {
  for (const CaeNode& n : nodes_) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

CaeNode* CaeGraph::find_mutable(const std::string& id) {
  for (CaeNode& n : nodes_) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

bool CaeGraph::attach_evidence(const std::string& id, EvidencePayload payload,
                               bool force) {
  CaeNode* node = find_mutable(id);
  if (node == nullptr) throw NodeNotFound(id);
  if (node->kind != CaeNode::Kind::kEvidence) throw NotEvidenceNode(id);
  if (node->evidence && node->evidence->sha256 != payload.sha256 && !force) {
    throw HashConflict(id);
  }
  const bool replaced =
      node->evidence.has_value() && node->evidence->sha256 != payload.sha256;
  node->evidence = std::move(payload);
  return replaced;
}

bool CaeGraph::all_evidence_attached() const {
  for (const CaeNode& n : nodes_) {
    if (n.kind == CaeNode::Kind::kEvidence && !n.evidence) return false;
  }
  return true;
}

std::vector<std::string> CaeGraph::evidence_node_ids() const {
  std::vector<std::string> out;
  for (const CaeNode& n : nodes_) {
    if (n.kind == CaeNode::Kind::kEvidence) out.push_back(n.id);
  }
  return out;
}

void CaeGraph::check_well_formed() const {
  std::unordered_map<std::string, const CaeNode*> by_id;
  for (const CaeNode& n : nodes_) {
    if (!by_id.emplace(n.id, &n).second) {
      throw ConfigError("duplicate CAE node id: " + n.id);
    }
  }
  if (by_id.find(root_) == by_id.end()) {
    throw ConfigError("CAE root node missing: " + root_);
  }
  for (const CaeNode& n : nodes_) {
    if (n.kind == CaeNode::Kind::kEvidence && !n.children.empty()) {
      throw ConfigError("evidence node must be a leaf: " + n.id);
    }
    for (const std::string& child : n.children) {
      if (by_id.find(child) == by_id.end()) {
        throw ConfigError("CAE node " + n.id + " references missing child " + child);
      }
    }
  }
  // Acyclicity via DFS colouring from every node.
  std::unordered_map<std::string, int> colour;  // 0 new, 1 open, 2 done
  std::vector<const CaeNode*> stack;
  for (const CaeNode& start : nodes_) {
    if (colour[start.id] != 0) continue;
    // Iterative DFS with explicit exit markers.
    std::vector<std::pair<const CaeNode*, bool>> work{{&start, false}};
    while (!work.empty()) {
      auto [node, exiting] = work.back();
      work.pop_back();
      if (exiting) {
        colour[node->id] = 2;
        continue;
      }
      if (colour[node->id] == 1) throw ConfigError("CAE graph has a cycle");
      if (colour[node->id] == 2) continue;
      colour[node->id] = 1;
      work.push_back({node, true});
      for (const std::string& child : node->children) {
        const CaeNode* c = by_id.at(child);
        if (colour[c->id] == 1) throw ConfigError("CAE graph has a cycle");
        if (colour[c->id] == 0) work.push_back({c, false});
      }
    }
  }
}

bool CaeGraph::structurally_equal(const CaeGraph& other) const {
  if (root_ != other.root_ || nodes_.size() != other.nodes_.size()) {
    return false;
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const CaeNode& a = nodes_[i];
    const CaeNode& b = other.nodes_[i];
    if (a.id != b.id || a.kind != b.kind || a.text != b.text ||
        a.hazard_group != b.hazard_group || a.children != b.children ||
        a.evidence != b.evidence) {
      return false;
    }
  }
  return true;
}

std::string CaeGraph::to_json() const {
  ordered_json j;
  j["nodes"] = ordered_json::array();
  for (const CaeNode& n : nodes_) {
    ordered_json jn;
    jn["id"] = n.id;
    jn["kind"] = kind_name(n.kind);
    jn["text"] = n.text;
    if (n.hazard_group) {
      jn["hazard_group"] = hazard_group_name(*n.hazard_group);
    }
    jn["children"] = n.children;
    if (n.evidence) {
      jn["evidence"] = {{"path", n.evidence->path},
                        {"sha256", n.evidence->sha256},
                        {"timestamp", n.evidence->timestamp}};
    }
    j["nodes"].push_back(std::move(jn));
  }
  j["root"] = root_;
  return j.dump(2) + "\n";
}

CaeGraph CaeGraph::from_json_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("CAE file is not valid JSON: ") + e.what());
  }
  CaeGraph g;
  try {
    g.root_ = j.at("root").get<std::string>();
    for (const auto& jn : j.at("nodes")) {
      CaeNode n;
      n.id = jn.at("id").get<std::string>();
      n.kind = kind_from_name(jn.at("kind").get<std::string>());
      n.text = jn.value("text", std::string());
      if (jn.contains("hazard_group")) {
        const auto group =
            hazard_group_from_name(jn["hazard_group"].get<std::string>());
        if (!group) {
          throw ConfigError("unknown hazard_group on node " + n.id);
        }
        n.hazard_group = group;
      }
      if (jn.contains("children")) {
        n.children = jn["children"].get<std::vector<std::string>>();
      }
      if (jn.contains("evidence")) {
        EvidencePayload p;
        p.path = jn["evidence"].at("path").get<std::string>();
        p.sha256 = jn["evidence"].at("sha256").get<std::string>();
        p.timestamp = jn["evidence"].value("timestamp", std::string());
        n.evidence = std::move(p);
      }
      g.nodes_.push_back(std::move(n));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad CAE file: ") + e.what());
  }
  g.check_well_formed();
  return g;
}

CaeGraph CaeGraph::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open CAE file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

void CaeGraph::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write CAE file: " + path);
  out << to_json();
}

std::string CaeGraph::render_tree() const {
  std::string out;
  std::unordered_set<std::string> visited;

  const std::function<void(const std::string&, int)> walk =
      [&](const std::string& id, int depth) {
        const CaeNode* n = find(id);
        if (n == nullptr) return;
        out.append(static_cast<std::size_t>(depth) * 2, ' ');
        if (n->kind == CaeNode::Kind::kEvidence) {
          out += n->evidence ? "✔ " : "✘ ";
        }
        out += n->id;
        out += " [";
        out += kind_name(n->kind);
        out += "] ";
        out += n->text;
        if (n->evidence) {
          out += " (";
          out += n->evidence->path;
          out += ")";
        }
        out.push_back('\n');
        if (!visited.insert(id).second) return;
        for (const std::string& child : n->children) walk(child, depth + 1);
      };
  walk(root_, 0);
  return out;
}

EvidencePayload payload_for_file(const std::string& path) {
  EvidencePayload p;
  p.path = path;
  p.sha256 = util::sha256_file_hex(path);

  struct stat st {};
  if (::stat(path.c_str(), &st) != 0) {
    throw Error("cannot stat evidence file: " + path);
  }
  std::tm tm_utc{};
  const std::time_t mtime = st.st_mtime;
  gmtime_r(&mtime, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  p.timestamp = buf;
  return p;
}

}  // namespace pondguard::evidence
