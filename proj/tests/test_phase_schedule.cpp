// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "mixguard/error.hpp"
#include "mixguard/phase_schedule.hpp"
#include "test_util.hpp"

using namespace mixguard;
using L = ClassLabel;

namespace {

ExpectedStateSchedule two_step() {
  return {{{0.5, 1.0, {L::kPre}}, {0.0, 0.5, {L::kEffect}}}};
}

ExpectedStateSchedule pouring() {
  return {{{0.55, 1.0, {L::kPre}}, {0.35, 0.55, {L::kPre, L::kEffect}}, {0.0, 0.35, {L::kEffect}}}};
}

}  // namespace

TEST_CASE("canonical phase") {
  CHECK(canonical_phase(0.0, {2.0, 3.0}) == 1.0);
  CHECK(canonical_phase(2.5, {2.5, 1.0}) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  CHECK(canonical_phase(2.5, {2.5, 1.0}) == doctest::Approx(0.3679).epsilon(1e-4));
  double prev = 1.0;
  for (int i = 1; i < 200; ++i) {
    const double s = canonical_phase(0.05 * i, {3.0, 3.0});
    CHECK(s < prev);
    CHECK(s > 0.0);
    prev = s;
  }
  CHECK_THROWS_AS(canonical_phase(-1.0, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(canonical_phase(1.0, {0.0, 1.0}), Error);
  CHECK_THROWS_AS(canonical_phase(1.0, {1.0, 0.0}), Error);
}

TEST_CASE("phase round trip through the closed-form inverse") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ut(0.0, 20.0), utau(0.1, 10.0), ua(0.1, 6.0);
  for (int i = 0; i < 2000; ++i) {
    const PhaseConfig cfg{utau(rng), ua(rng)};
    const double t = ut(rng);
    const double s = canonical_phase(t, cfg);
    if (s < 1e-200) continue;
    CHECK(std::abs(phase_to_time(s, cfg) - t) <= 1e-9 * std::max(1.0, t));
  }
  CHECK(phase_to_time(1.0, {1.0, 1.0}) == 0.0);
  CHECK_THROWS_AS(phase_to_time(0.0, {1.0, 1.0}), Error);
  CHECK_THROWS_AS(phase_to_time(1.5, {1.0, 1.0}), Error);
}

TEST_CASE("expected labels") {
  const auto s = two_step();
  CHECK(expected_labels(s, 0.9) == LabelSet{L::kPre});
  CHECK(expected_labels(s, 0.5) == LabelSet{L::kEffect});
  CHECK(expected_labels(s, 1.0) == LabelSet{L::kPre});
  CHECK(expected_labels(s, 1e-300) == LabelSet{L::kEffect});
  const auto p = pouring();
  const auto mid = expected_labels(p, 0.4);
  CHECK(mid.size() == 2);
  CHECK(mid.contains(L::kPre));
  CHECK(mid.contains(L::kEffect));
  CHECK_FALSE(mid.contains(L::kUnsatisfied));
  CHECK_THROWS_AS(expected_labels(s, 0.0), Error);
  CHECK_THROWS_AS(expected_labels(s, 1.01), Error);
  CHECK_THROWS_AS(expected_labels(s, std::nan("")), Error);
}

TEST_CASE("expected labels are total on valid schedules") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> cuts{0.0, 1.0};
    for (int i = 0; i < 1 + trial % 5; ++i) cuts.push_back(u(rng));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    ExpectedStateSchedule sched;
    for (std::size_t i = cuts.size() - 1; i > 0; --i)
      sched.intervals.push_back({cuts[i - 1], cuts[i], {static_cast<L>(i % 3)}});
    REQUIRE(validate_schedule(sched).empty());
    for (int q = 0; q < 200; ++q) {
      const double s = std::max(u(rng), 1e-12);
      const auto labels = expected_labels(sched, s);
      CHECK_FALSE(labels.empty());
    }
    for (double c : cuts)
      if (c > 0.0) CHECK_NOTHROW(expected_labels(sched, c));
  }
}

TEST_CASE("schedule validation") {
  CHECK(validate_schedule(two_step()).empty());
  CHECK(validate_schedule(pouring()).empty());
  SUBCASE("gap") {
    ExpectedStateSchedule s{{{0.5, 1.0, {L::kPre}}, {0.0, 0.4, {L::kEffect}}}};
    const auto d = validate_schedule(s);
    REQUIRE(d.size() == 1);
    CHECK(d[0].find("gap") != std::string::npos);
    CHECK(d[0].find("0.4") != std::string::npos);
    CHECK(d[0].find("0.5") != std::string::npos);
  }
  SUBCASE("overlap") {
    ExpectedStateSchedule s{{{0.4, 1.0, {L::kPre}}, {0.0, 0.5, {L::kEffect}}}};
    const auto d = validate_schedule(s);
    REQUIRE(d.size() == 1);
    CHECK(d[0].find("overlap") != std::string::npos);
  }
  SUBCASE("uncovered top and malformed intervals") {
    CHECK_FALSE(validate_schedule({{{0.0, 0.9, {L::kPre}}}}).empty());
    CHECK_FALSE(validate_schedule({{{0.0, 1.0, {}}}}).empty());
    CHECK_FALSE(validate_schedule({{{0.6, 0.6, {L::kPre}}, {0.0, 1.0, {L::kPre}}}}).empty());
    CHECK_FALSE(validate_schedule({{{-0.5, 1.0, {L::kPre}}}}).empty());
    CHECK_FALSE(validate_schedule({}).empty());
  }
}

TEST_CASE("schedule files") {
  SUBCASE("bare list") {
    const auto s = parse_schedule(R"([{"s_low":0.5,"s_high":1,"allowed":["pre"]},
                                      {"s_low":0,"s_high":0.5,"allowed":["effect","pre"]}])");
    REQUIRE(s.intervals.size() == 2);
    CHECK(s.intervals[1].allowed == LabelSet{L::kPre, L::kEffect});
  }
  SUBCASE("object keyed by skill, with provenance") {
    const std::string text = serialize_schedule(pouring(), "pouring", {{"seed", "3"}});
    CHECK(text.find("\"meta\"") != std::string::npos);
    const auto s = parse_schedule(text);
    CHECK(serialize_schedule(s) == serialize_schedule(pouring()));
    CHECK(parse_schedule(text, "pouring").intervals.size() == 3);
    CHECK_THROWS_AS(parse_schedule(text, "box"), Error);
  }
  SUBCASE("several skills require a choice") {
    const std::string text =
        R"({"a":[{"s_low":0,"s_high":1,"allowed":["pre"]}],"b":[{"s_low":0,"s_high":1,"allowed":["effect"]}]})";
    CHECK_THROWS_AS(parse_schedule(text), Error);
    CHECK(parse_schedule(text, "b").intervals[0].allowed == LabelSet{L::kEffect});
  }
  SUBCASE("malformed") {
    CHECK_THROWS_AS(parse_schedule("not json"), Error);
    CHECK_THROWS_AS(parse_schedule(R"([{"s_low":0,"s_high":1,"allowed":["bogus"]}])"), Error);
    CHECK_THROWS_AS(parse_schedule(R"([{"s_low":0,"s_high":1,"allowed":"pre"}])"), Error);
    CHECK_THROWS_AS(parse_schedule(R"([{"s_high":1,"allowed":["pre"]}])"), Error);
    CHECK_THROWS_AS(parse_schedule("42"), Error);
  }
  SUBCASE("load from disk") {
    testutil::TempDir dir;
    std::ofstream(dir / "s.json") << serialize_schedule(two_step());
    CHECK(load_schedule(dir / "s.json").intervals.size() == 2);
    try {
      load_schedule(dir / "missing.json");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kIo);
    }
  }
}
