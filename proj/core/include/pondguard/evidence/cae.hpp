#pragma once

// Claims-arguments-evidence graph for the survey robot's safety case. The
// built-in skeleton follows the top view: root claim C1, one claim per hazard
// group, and under the collision claim two argument branches (the engineered
// guard and the verified avoidance controller) whose evidence leaves take the
// verification report, the campaign report and the guard demand statistics.
// Evidence is identified by content hash so silently regenerated artifacts
// are detected.

#include <optional>
#include <string>
#include <vector>

#include "pondguard/evidence/alarp.hpp"
#include "pondguard/util/errors.hpp"

namespace pondguard::evidence {

class NodeNotFound : public Error {
 public:
  explicit NodeNotFound(const std::string& id)
      : Error("no such CAE node: " + id) {}
};

class NotEvidenceNode : public Error {
 public:
  explicit NotEvidenceNode(const std::string& id)
      : Error("CAE node is not an evidence leaf: " + id) {}
};

class HashConflict : public Error {
 public:
  explicit HashConflict(const std::string& id)
      : Error("evidence already attached with a different hash at " + id) {}
};

struct EvidencePayload {
  std::string path;
  std::string sha256;
  std::string timestamp;  // ISO-8601 UTC

  bool operator==(const EvidencePayload& o) const {
    return path == o.path && sha256 == o.sha256 && timestamp == o.timestamp;
  }
};

struct CaeNode {
  enum class Kind : unsigned char { kClaim, kArgument, kEvidence };

  std::string id;
  Kind kind = Kind::kClaim;
  std::string text;
  std::optional<HazardGroup> hazard_group;
  std::vector<std::string> children;
  std::optional<EvidencePayload> evidence;
};

class CaeGraph {
 public:
  static CaeGraph default_skeleton();

  const std::string& root() const { return root_; }
  const std::vector<CaeNode>& nodes() const { return nodes_; }
  const CaeNode* find(const std::string& id) const;

  // Records the payload on an evidence leaf. Re-attaching the same hash is
  // idempotent; a different hash needs force, and the revision is reported
  // through the return value (true = an existing payload was replaced).
  bool attach_evidence(const std::string& id, EvidencePayload payload,
                       bool force = false);

  bool all_evidence_attached() const;
  std::vector<std::string> evidence_node_ids() const;

  // Acyclicity, unique ids, resolvable children, evidence nodes are leaves.
  void check_well_formed() const;  // throws Error

  bool structurally_equal(const CaeGraph& other) const;

  std::string to_json() const;
  static CaeGraph from_json_text(const std::string& text);
  static CaeGraph from_file(const std::string& path);
  void save(const std::string& path) const;

  // Indented tree with a check (attached) or cross (missing) per evidence
  // leaf.
  std::string render_tree() const;

 private:
  CaeNode* find_mutable(const std::string& id);

  std::string root_ = "C1";
  std::vector<CaeNode> nodes_;
};

// Builds the payload for a file: content hash plus the file's modification
// time. Using the mtime keeps report generation idempotent for unchanged
// inputs.
EvidencePayload payload_for_file(const std::string& path);

}  // namespace pondguard::evidence
