#pragma once

// Nondeterministic environment abstraction the model checker explores the
// controller against. Cells are the cross product of:
//   - distance intervals cut at the rule set's distance thresholds plus the
//     latch clear threshold (plus speed intervals when rules use speed),
//   - free booleans for contact and the two raw channels,
//   - optional per-channel fault booleans (channel reports unhealthy).
// voted_trip is not a free coordinate: it is computed from the channel and
// fault coordinates through the real 1oo2 voter, so a cell can never show the
// controller a vote that the kernel could not have produced. Distances move
// at most one interval per tick unless free_numeric_transitions is set;
// booleans are unconstrained. Belief fields are never environment
// coordinates; they evolve inside the model state.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pondguard/dsl/ast.hpp"
#include "pondguard/rbr/engine.hpp"

namespace pondguard::verify {

struct EnvOptions {
  double clear_threshold = 3.0;
  std::uint32_t wdt_deadline = 8;
  bool include_fault_dims = true;
  bool free_numeric_transitions = false;
  // Overrides the derived distance cuts when set.
  std::optional<std::vector<double>> distance_thresholds;
  enum class Initial : std::uint8_t { kAllCells, kQuiet } initial = Initial::kAllCells;

  // Parses the optional JSON config given to the verify command. Unknown
  // keys are an error.
  static EnvOptions from_json_text(const std::string& text);
  static EnvOptions from_file(const std::string& path);
};

class EnvAbstraction {
 public:
  struct Dim {
    enum class Tag : std::uint8_t { kField, kFaultSonar, kFaultClassifier };
    Tag tag = Tag::kField;
    Field field = Field::kDistance;       // meaningful when tag == kField
    std::vector<double> thresholds;        // numeric field dims only
    bool boolean() const {
      return tag != Tag::kField || !field_is_numeric(field);
    }
    std::size_t size() const {
      return boolean() ? 2 : thresholds.size() + 1;
    }
  };

  static EnvAbstraction for_ruleset(const dsl::RuleSet& rs,
                                    const EnvOptions& options = {});

  // Fully custom cell structure, for fixtures and tests.
  static EnvAbstraction from_dims(std::vector<Dim> dims, EnvOptions options);

  std::size_t cell_count() const { return cell_count_; }
  const std::vector<Dim>& dims() const { return dims_; }
  const EnvOptions& options() const { return options_; }

  // Allowed next cells, ascending, always non-empty (self moves included).
  std::vector<std::size_t> successors(std::size_t cell) const;

  const std::vector<std::size_t>& initial_cells() const { return initial_; }

  // The representative percept the controller is shown in this cell. The
  // vote goes through kernel::vote_1oo2 with the fault coordinates mapped to
  // unhealthy channel readings.
  rbr::Percept percept_for_cell(std::size_t cell) const;

  bool cell_contact(std::size_t cell) const;
  bool cell_voted(std::size_t cell) const;

  std::vector<std::size_t> coords(std::size_t cell) const;

 private:
  std::vector<Dim> dims_;
  std::size_t cell_count_ = 1;
  std::vector<std::size_t> initial_;
  EnvOptions options_;

  void finish_init();
  double numeric_rep(const Dim& dim, std::size_t coord) const;
};

}  // namespace pondguard::verify
