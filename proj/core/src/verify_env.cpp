#include "pondguard/verify/env.hpp"

#include <algorithm>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pondguard/kernel/safety.hpp"

namespace pondguard::verify {

namespace {

using json = nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* context) {
  for (const auto& item : j.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end()) {
      throw ConfigError(std::string("unknown key '") + item.key() + "' in " +
                        context);
    }
  }
}

}  // namespace

EnvOptions EnvOptions::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("environment config is not valid JSON: ") +
                      e.what());
  }
  if (!j.is_object()) throw ConfigError("environment config must be an object");
  check_keys(j,
             {"clear_threshold", "wdt_deadline", "include_fault_dims",
              "free_numeric_transitions", "distance_thresholds", "initial"},
             "environment config");
  EnvOptions opts;
  try {
    if (j.contains("clear_threshold")) opts.clear_threshold = j["clear_threshold"];
    if (j.contains("wdt_deadline")) opts.wdt_deadline = j["wdt_deadline"];
    if (j.contains("include_fault_dims")) {
      opts.include_fault_dims = j["include_fault_dims"];
    }
    if (j.contains("free_numeric_transitions")) {
      opts.free_numeric_transitions = j["free_numeric_transitions"];
    }
    if (j.contains("distance_thresholds")) {
      opts.distance_thresholds = j["distance_thresholds"].get<std::vector<double>>();
    }
    if (j.contains("initial")) {
      const std::string v = j["initial"];
      if (v == "all") {
        opts.initial = Initial::kAllCells;
      } else if (v == "quiet") {
        opts.initial = Initial::kQuiet;
      } else {
        throw ConfigError("initial must be \"all\" or \"quiet\"");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad environment config value: ") + e.what());
  }
  if (opts.wdt_deadline < 1) throw ConfigError("wdt_deadline must be >= 1");
  if (!(opts.clear_threshold > 0.0)) {
    throw ConfigError("clear_threshold must be positive");
  }
  return opts;
}

EnvOptions EnvOptions::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open environment config: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

EnvAbstraction EnvAbstraction::for_ruleset(const dsl::RuleSet& rs,
                                           const EnvOptions& options) {
  std::vector<bool> seen(kFieldCount, false);
  std::array<std::vector<double>, kFieldCount> thresholds;
  for (const dsl::Rule& r : rs.rules()) {
    r.condition->collect_refs(seen, thresholds);
  }

  std::vector<Dim> dims;

  // Distance is always a coordinate: belief clearing and watchdog clearing
  // both read it. Cuts come from the rules plus the clear threshold.
  {
    Dim d;
    d.tag = Dim::Tag::kField;
    d.field = Field::kDistance;
    if (options.distance_thresholds) {
      d.thresholds = *options.distance_thresholds;
    } else {
      d.thresholds = thresholds[static_cast<std::size_t>(Field::kDistance)];
      d.thresholds.push_back(options.clear_threshold);
    }
    std::sort(d.thresholds.begin(), d.thresholds.end());
    d.thresholds.erase(std::unique(d.thresholds.begin(), d.thresholds.end()),
                       d.thresholds.end());
    dims.push_back(std::move(d));
  }

  if (seen[static_cast<std::size_t>(Field::kSpeed)]) {
    Dim d;
    d.tag = Dim::Tag::kField;
    d.field = Field::kSpeed;
    d.thresholds = thresholds[static_cast<std::size_t>(Field::kSpeed)];
    std::sort(d.thresholds.begin(), d.thresholds.end());
    d.thresholds.erase(std::unique(d.thresholds.begin(), d.thresholds.end()),
                       d.thresholds.end());
    dims.push_back(std::move(d));
  }

  for (Field f : {Field::kClassifierDetect, Field::kSonarTrip, Field::kContact}) {
    Dim d;
    d.tag = Dim::Tag::kField;
    d.field = f;
    dims.push_back(std::move(d));
  }
  if (options.include_fault_dims) {
    dims.push_back(Dim{Dim::Tag::kFaultSonar, Field::kDistance, {}});
    dims.push_back(Dim{Dim::Tag::kFaultClassifier, Field::kDistance, {}});
  }
  return from_dims(std::move(dims), options);
}

EnvAbstraction EnvAbstraction::from_dims(std::vector<Dim> dims,
                                         EnvOptions options) {
  EnvAbstraction env;
  env.dims_ = std::move(dims);
  env.options_ = std::move(options);
  env.finish_init();
  return env;
}

void EnvAbstraction::finish_init() {
  cell_count_ = 1;
  for (const Dim& d : dims_) cell_count_ *= d.size();

  initial_.clear();
  if (options_.initial == EnvOptions::Initial::kAllCells) {
    initial_.resize(cell_count_);
    for (std::size_t i = 0; i < cell_count_; ++i) initial_[i] = i;
    return;
  }
  // Quiet start: booleans false, numeric coordinates at the top interval.
  std::vector<std::size_t> coords(dims_.size(), 0);
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    coords[d] = dims_[d].boolean() ? 0 : dims_[d].size() - 1;
  }
  std::size_t cell = 0;
  for (std::size_t d = dims_.size(); d-- > 0;) {
    cell = cell * dims_[d].size() + coords[d];
  }
  initial_.push_back(cell);
}

std::vector<std::size_t> EnvAbstraction::coords(std::size_t cell) const {
  std::vector<std::size_t> out(dims_.size());
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    const std::size_t radix = dims_[i].size();
    out[i] = cell % radix;
    cell /= radix;
  }
  return out;
}

std::vector<std::size_t> EnvAbstraction::successors(std::size_t cell) const {
  const auto base = coords(cell);
  // Per-dimension candidate coordinate lists, then the cross product.
  std::vector<std::vector<std::size_t>> choices(dims_.size());
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    const std::size_t n = dims_[d].size();
    if (dims_[d].boolean() || options_.free_numeric_transitions) {
      choices[d].resize(n);
      for (std::size_t v = 0; v < n; ++v) choices[d][v] = v;
    } else {
      if (base[d] > 0) choices[d].push_back(base[d] - 1);
      choices[d].push_back(base[d]);
      if (base[d] + 1 < n) choices[d].push_back(base[d] + 1);
    }
  }
  std::vector<std::size_t> out;
  std::vector<std::size_t> pick(dims_.size(), 0);
  while (true) {
    std::size_t c = 0;
    for (std::size_t d = dims_.size(); d-- > 0;) {
      c = c * dims_[d].size() + choices[d][pick[d]];
    }
    out.push_back(c);
    std::size_t d = 0;
    for (; d < dims_.size(); ++d) {
      if (++pick[d] < choices[d].size()) break;
      pick[d] = 0;
    }
    if (d == dims_.size()) break;
    if (dims_.empty()) break;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double EnvAbstraction::numeric_rep(const Dim& dim, std::size_t coord) const {
  const auto& t = dim.thresholds;
  if (t.empty()) return 0.0;
  double rep;
  if (coord == 0) {
    rep = t.front() - 1.0;
  } else if (coord == t.size()) {
    rep = t.back() + 1.0;
  } else {
    rep = (t[coord - 1] + t[coord]) * 0.5;
  }
  // Distances are physical; keep the representative inside the cell but out
  // of the negative half-line when the interval allows it.
  if (dim.tag == Dim::Tag::kField && dim.field == Field::kDistance &&
      rep < 0.0) {
    const double hi = coord < t.size() ? t[coord] : rep + 2.0;
    if (hi > 0.0) rep = hi * 0.5;
  }
  return rep;
}

rbr::Percept EnvAbstraction::percept_for_cell(std::size_t cell) const {
  const auto c = coords(cell);
  rbr::Percept p;
  p.distance = 0.0;
  bool fault_sonar = false;
  bool fault_classifier = false;
  bool have_distance = false;
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    const Dim& dim = dims_[d];
    switch (dim.tag) {
      case Dim::Tag::kFaultSonar:
        fault_sonar = c[d] == 1;
        continue;
      case Dim::Tag::kFaultClassifier:
        fault_classifier = c[d] == 1;
        continue;
      case Dim::Tag::kField:
        break;
    }
    if (dim.boolean()) {
      const bool v = c[d] == 1;
      switch (dim.field) {
        case Field::kClassifierDetect: p.classifier_detect = v; break;
        case Field::kSonarTrip: p.sonar_trip = v; break;
        case Field::kContact: p.contact = v; break;
        default: break;  // belief fields never appear as env dims
      }
    } else if (dim.field == Field::kDistance) {
      p.distance = std::max(0.0, numeric_rep(dim, c[d]));
      have_distance = true;
    } else if (dim.field == Field::kSpeed) {
      p.speed = numeric_rep(dim, c[d]);
    }
  }
  if (!have_distance) p.distance = rbr::kDistanceSentinel;
  const kernel::ChannelReading sonar{p.sonar_trip, !fault_sonar, 0};
  const kernel::ChannelReading classifier{p.classifier_detect,
                                          !fault_classifier, 0};
  p.voted_trip = kernel::vote_1oo2(sonar, classifier);
  return p;
}

bool EnvAbstraction::cell_contact(std::size_t cell) const {
  const auto c = coords(cell);
  for (std::size_t d = 0; d < dims_.size(); ++d) {
    if (dims_[d].tag == Dim::Tag::kField &&
        dims_[d].field == Field::kContact) {
      return c[d] == 1;
    }
  }
  return false;
}

bool EnvAbstraction::cell_voted(std::size_t cell) const {
  return percept_for_cell(cell).voted_trip;
}

}  // namespace pondguard::verify
