#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "pondguard/dsl/parser.hpp"
#include "pondguard/evidence/cae.hpp"
#include "pondguard/evidence/campaign.hpp"
#include "pondguard/sim/episode.hpp"
#include "pondguard/util/hash.hpp"
#include "test_util.hpp"

using namespace pondguard;
using namespace testutil;
namespace ev = pondguard::evidence;

namespace {

std::string fixture(const char* rel) {
  return std::string(PONDGUARD_FIXTURES) + "/" + rel;
}

// Textbook Wilson interval, implemented independently of the library.
ev::WilsonInterval wilson_reference(std::uint64_t k, std::uint64_t n) {
  const double z = 1.959964;
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(k) / nn;
  const double q = z * z / nn;
  const double centre = (p + q / 2.0) / (1.0 + q);
  const double half = (z / (1.0 + q)) *
                      std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn));
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

std::filesystem::path scratch_dir() {
  auto dir = std::filesystem::path("evidence_scratch");
  std::filesystem::create_directories(dir);
  return dir;
}

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("alarp bands at the documented boundaries") {
  CHECK(ev::alarp_band(1.9) == ev::Band::kBelow2);
  CHECK(ev::alarp_band(1.999) == ev::Band::kBelow2);
  CHECK(ev::alarp_band(2.0) == ev::Band::kBand2To20);
  CHECK(ev::alarp_band(20.0) == ev::Band::kBand2To20);
  CHECK(ev::alarp_band(20.001) == ev::Band::kAbove20);
  CHECK(ev::alarp_band(20.01) == ev::Band::kAbove20);
  CHECK(ev::alarp_band(0.0) == ev::Band::kBelow2);
  CHECK_THROWS_AS(ev::alarp_band(-0.1), ev::NegativeDose);
}

TEST_CASE("consequence profile derives its band from the dose") {
  const ev::ConsequenceProfile p(1.2);
  CHECK(p.band == ev::Band::kBelow2);
  CHECK(ev::ConsequenceProfile(7.5).band == ev::Band::kBand2To20);
  CHECK_THROWS_AS(ev::ConsequenceProfile(-1.0), ev::NegativeDose);
}

TEST_CASE("wilson interval: frozen reference values") {
  // Values computed from the closed-form interval at z = 1.959964.
  const auto zero = ev::wilson95(0, 1000);
  CHECK(zero.low == 0.0);
  CHECK(zero.high == doctest::Approx(0.0038267).epsilon(1e-4));
  CHECK(zero.high <= 0.00383);

  const auto all = ev::wilson95(1000, 1000);
  CHECK(all.high == 1.0);
  CHECK(all.low == doctest::Approx(1.0 - 0.0038267).epsilon(1e-4));

  const auto ten = ev::wilson95(10, 1000);
  CHECK(ten.low == doctest::Approx(0.00544).epsilon(1e-3));
  CHECK(ten.high == doctest::Approx(0.01832).epsilon(1e-3));
}

TEST_CASE("wilson interval matches the reference on a grid") {
  for (std::uint64_t n : {1ULL, 10ULL, 50ULL, 200ULL, 1000ULL, 10000ULL}) {
    for (std::uint64_t k : {0ULL, 1ULL, 2ULL, 5ULL}) {
      if (k > n) continue;
      const auto got = ev::wilson95(k, n);
      const auto want = wilson_reference(k, n);
      CHECK(got.low == doctest::Approx(want.low).epsilon(1e-12));
      CHECK(got.high == doctest::Approx(want.high).epsilon(1e-12));
      CHECK(got.low <= static_cast<double>(k) / static_cast<double>(n));
      CHECK(got.high >= static_cast<double>(k) / static_cast<double>(n));
      CHECK(got.low >= 0.0);
      CHECK(got.high <= 1.0);
    }
  }
}

TEST_CASE("wilson width shrinks with more episodes at fixed p_hat") {
  for (double p : {0.0, 0.1, 0.5}) {
    double prev_width = 2.0;
    for (std::uint64_t n : {20ULL, 40ULL, 80ULL, 160ULL, 320ULL, 640ULL}) {
      const auto k = static_cast<std::uint64_t>(p * static_cast<double>(n));
      const auto ci = ev::wilson95(k, n);
      const double width = ci.high - ci.low;
      CHECK(width <= prev_width + 1e-12);
      prev_width = width;
    }
  }
}

TEST_CASE("campaign aggregates episode outcomes reproducibly") {
  const auto cfg = sim::ScenarioConfig::from_file(
      fixture("scenarios/degraded_channels.json"));
  const auto rs = dsl::parse_file(fixture("rules/baseline.rbr"));

  const auto a = ev::run_campaign(cfg, rs, 16, 99, 1);
  const auto b = ev::run_campaign(cfg, rs, 16, 99, 3);
  CHECK(a.to_json() == b.to_json());
  CHECK(a.episodes == 16);
  CHECK(a.guard_stops == 16);
  CHECK(a.collisions == 0);
  CHECK(a.guard_demands == 16);

  // Cross-check the aggregate against per-episode runs with derived seeds,
  // reading each episode's final demand count out of its trace CSV.
  std::uint64_t demands = 0;
  for (std::uint64_t i = 0; i < 16; ++i) {
    auto episode_cfg = cfg;
    episode_cfg.rng_seed = util::derive_seed(99, i);
    const auto episode = sim::run_episode(episode_cfg, rs, true);
    std::ostringstream csv;
    sim::write_trace_csv(csv, episode.records);
    const std::string text = csv.str();
    const auto last_line_start = text.rfind('\n', text.size() - 2);
    REQUIRE(last_line_start != std::string::npos);
    std::string last_line = text.substr(last_line_start + 1);
    // demand_count is the fourth column from the end.
    std::vector<std::string> fields;
    std::stringstream row(last_line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 21);
    demands += std::stoull(fields[18]);
  }
  CHECK(demands == a.guard_demands);
}

TEST_CASE("campaign rejects an empty episode count") {
  const auto cfg =
      sim::ScenarioConfig::from_file(fixture("scenarios/empty_pond.json"));
  const auto rs = dsl::parse_file(fixture("rules/adversarial_hold.rbr"));
  CHECK_THROWS_AS(ev::run_campaign(cfg, rs, 0, 1), ConfigError);
}

TEST_CASE("campaign json carries hashes and the interval") {
  const auto cfg =
      sim::ScenarioConfig::from_file(fixture("scenarios/empty_pond.json"));
  const auto rs = dsl::parse_file(fixture("rules/adversarial_hold.rbr"));
  const auto result = ev::run_campaign(cfg, rs, 4, 5);
  const auto text = result.to_json();
  CHECK(text.find("\"episodes\": 4") != std::string::npos);
  CHECK(text.find("\"ruleset_source_hash\": \"" +
                  util::hex_u64(rs.source_hash()) + "\"") != std::string::npos);
  CHECK(text.find("\"scenario_hash\": \"" +
                  util::hex_u64(cfg.content_hash()) + "\"") !=
        std::string::npos);
}

TEST_CASE("sha256 matches the standard test vectors") {
  CHECK(util::sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(util::sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(util::sha256_hex(
            "abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("default skeleton has the expected shape") {
  const auto g = ev::CaeGraph::default_skeleton();
  g.check_well_formed();
  CHECK(g.root() == "C1");

  const auto* root = g.find("C1");
  REQUIRE(root != nullptr);
  CHECK(root->children.size() == 4);  // one claim per hazard group

  const auto* collision = g.find("C-collision");
  REQUIRE(collision != nullptr);
  REQUIRE(collision->children.size() == 2);
  CHECK(collision->children[0] == "A-method1");
  CHECK(collision->children[1] == "A-method2");

  CHECK(g.evidence_node_ids().size() == 3);
  CHECK_FALSE(g.all_evidence_attached());

  // The four hazard groups appear exactly once each.
  int groups = 0;
  for (const auto& n : g.nodes()) {
    if (n.hazard_group) ++groups;
  }
  CHECK(groups == 4);
}

TEST_CASE("attach_evidence records payloads and detects conflicts") {
  const auto dir = scratch_dir();
  const auto file_a = dir / "report_a.json";
  const auto file_b = dir / "report_b.json";
  write_text(file_a, "{\"holds\": true}\n");
  write_text(file_b, "{\"holds\": false}\n");

  auto g = ev::CaeGraph::default_skeleton();
  const auto payload_a = ev::payload_for_file(file_a.string());
  CHECK(payload_a.sha256 == util::sha256_hex("{\"holds\": true}\n"));
  CHECK(payload_a.timestamp.size() == 20);  // ISO-8601 Zulu

  CHECK_FALSE(g.attach_evidence("E-verify-collision", payload_a));
  CHECK(g.find("E-verify-collision")->evidence.has_value());

  // Same hash again: idempotent.
  CHECK_FALSE(g.attach_evidence("E-verify-collision", payload_a));

  // Different content: conflict unless forced.
  const auto payload_b = ev::payload_for_file(file_b.string());
  CHECK_THROWS_AS(g.attach_evidence("E-verify-collision", payload_b),
                  ev::HashConflict);
  CHECK(g.attach_evidence("E-verify-collision", payload_b, true));

  CHECK_THROWS_AS(g.attach_evidence("C1", payload_a), ev::NotEvidenceNode);
  CHECK_THROWS_AS(g.attach_evidence("nope", payload_a), ev::NodeNotFound);
}

TEST_CASE("cae graph round-trips through json") {
  const auto dir = scratch_dir();
  const auto file_a = dir / "round.json";
  write_text(file_a, "evidence bytes\n");

  auto g = ev::CaeGraph::default_skeleton();
  g.attach_evidence("E-campaign-baseline",
                    ev::payload_for_file(file_a.string()));
  const auto text = g.to_json();
  const auto back = ev::CaeGraph::from_json_text(text);
  CHECK(g.structurally_equal(back));
  CHECK(back.to_json() == text);
}

TEST_CASE("well-formedness rejects cycles and evidence with children") {
  auto g = ev::CaeGraph::default_skeleton();
  auto text = g.to_json();
  // Introduce a cycle: point a leaf hazard claim back at the root.
  const std::string needle = "\"id\": \"H-splash\",\n      \"kind\": \"claim\",";
  REQUIRE(text.find(needle) != std::string::npos);
  auto broken = text;
  const auto pos = broken.find("\"children\": []", broken.find("H-splash"));
  REQUIRE(pos != std::string::npos);
  broken.replace(pos, std::string("\"children\": []").size(),
                 "\"children\": [\"C1\"]");
  CHECK_THROWS_AS(ev::CaeGraph::from_json_text(broken), Error);
}

TEST_CASE("render_tree marks attached and missing evidence") {
  const auto dir = scratch_dir();
  const auto file_a = dir / "mark.json";
  write_text(file_a, "x\n");
  auto g = ev::CaeGraph::default_skeleton();
  g.attach_evidence("E-verify-collision", ev::payload_for_file(file_a.string()));
  const auto tree = g.render_tree();
  CHECK(tree.find("✔ E-verify-collision") != std::string::npos);
  CHECK(tree.find("✘ E-campaign-baseline") != std::string::npos);
  CHECK(tree.find("✘ E-guard-demands") != std::string::npos);
}
