// Copyright 2026 The mixguard Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <fstream>
#include <random>

#include "mixguard/classifier_expert.hpp"
#include "mixguard/error.hpp"
#include "test_util.hpp"

using namespace mixguard;
using L = ClassLabel;

namespace {

ClassProbs random_probs(std::mt19937_64& rng) {
  std::gamma_distribution<double> g(1.0, 1.0);
  ClassProbs p{g(rng), g(rng), g(rng)};
  const double s = p[0] + p[1] + p[2];
  for (auto& x : p) x /= s;
  return p;
}

std::vector<LabelSet> all_label_sets() {
  std::vector<LabelSet> out;
  for (unsigned mask = 1; mask < 8; ++mask) {
    LabelSet s;
    for (unsigned i = 0; i < 3; ++i)
      if (mask & (1u << i)) s.insert(static_cast<L>(i));
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("classifier verdict examples") {
  auto v = classifier_verdict({0.7, 0.2, 0.1}, LabelSet{L::kPre});
  CHECK(v.prediction == Prediction::kNoAnomaly);
  CHECK(v.confidence == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(v.expert == ExpertKind::kClassifier);
  CHECK(v.available);

  v = classifier_verdict({0.5, 0.3, 0.2}, LabelSet{L::kPre, L::kEffect});
  CHECK(v.prediction == Prediction::kNoAnomaly);
  CHECK(v.confidence == doctest::Approx(0.25).epsilon(1e-15));

  v = classifier_verdict({0.6, 0.3, 0.1}, LabelSet{L::kEffect});
  CHECK(v.prediction == Prediction::kAnomaly);
  CHECK(v.confidence == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("classifier verdict via a schedule and phase") {
  const ExpectedStateSchedule sched{{{0.5, 1.0, {L::kPre}}, {0.0, 0.5, {L::kEffect}}}};
  CHECK(classifier_verdict({0.9, 0.05, 0.05}, sched, 0.8).prediction == Prediction::kNoAnomaly);
  CHECK(classifier_verdict({0.9, 0.05, 0.05}, sched, 0.5).prediction == Prediction::kAnomaly);
  CHECK_THROWS_AS(classifier_verdict({0.9, 0.05, 0.05}, sched, 0.0), Error);
}

TEST_CASE("argmax ties follow the fixed label order") {
  CHECK(argmax_label({0.4, 0.4, 0.2}) == L::kPre);
  CHECK(argmax_label({0.2, 0.4, 0.4}) == L::kEffect);
  CHECK(argmax_label({0.4, 0.2, 0.4}) == L::kPre);
  CHECK(argmax_label({1.0 / 3, 1.0 / 3, 1.0 / 3}) == L::kPre);
  CHECK(argmax_label({0.1, 0.2, 0.7}) == L::kUnsatisfied);
  // With the tie on pre/effect and only effect expected, the argmax is pre.
  CHECK(classifier_verdict({0.4, 0.4, 0.2}, LabelSet{L::kEffect}).prediction == Prediction::kAnomaly);
}

TEST_CASE("invalid inputs") {
  CHECK_THROWS_AS(classifier_verdict({0.5, 0.5, 0.5}, LabelSet{L::kPre}), Error);
  CHECK_THROWS_AS(classifier_verdict({1.2, -0.2, 0.0}, LabelSet{L::kPre}), Error);
  CHECK_THROWS_AS(classifier_verdict({0.5, 0.5, 0.0}, LabelSet{}), Error);
}

TEST_CASE("classifier confidence properties") {
  std::mt19937_64 rng(11);
  const auto sets = all_label_sets();
  for (int i = 0; i < 3000; ++i) {
    const auto p = random_probs(rng);
    for (const auto& g : sets) {
      const auto v = classifier_verdict(p, g);
      const bool in = g.contains(argmax_label(p));
      CHECK((v.prediction == Prediction::kNoAnomaly) == in);
      CHECK(v.confidence > 0.0);
      if (in) {
        CHECK(v.confidence <= 1.0 / static_cast<double>(g.size()) + 1e-15);
      } else {
        CHECK(v.confidence <= 1.0 + 1e-12);
      }
    }
    // Enlarging the expected set around the argmax never raises confidence.
    const L top = argmax_label(p);
    LabelSet g{top};
    double prev = classifier_verdict(p, g).confidence;
    for (unsigned j = 0; j < 3; ++j) {
      g.insert(static_cast<L>(j));
      const double c = classifier_verdict(p, g).confidence;
      CHECK(c <= prev);
      prev = c;
    }
  }
}

TEST_CASE("missing classifier output") {
  const auto v = missing_classifier_verdict();
  CHECK_FALSE(v.available);
  CHECK(v.confidence == 0.0);
  CHECK(v.prediction == Prediction::kNoAnomaly);
}

TEST_CASE("probability streams") {
  SUBCASE("complete stream") {
    const auto s = parse_probability_stream(
        "{\"index\":0,\"probs\":[1,0,0]}\n{\"index\":1,\"probs\":[0.5,0.5,0]}\n{\"index\":2,\"probs\":[0,0,1]}\n");
    REQUIRE(s.size() == 3);
    CHECK(s[1].second[1] == 0.5);
  }
  SUBCASE("gap keeps alignment") {
    std::string text;
    for (int i = 0; i < 10; ++i)
      if (i != 5) text += "{\"index\":" + std::to_string(i) + ",\"probs\":[0.2,0.3,0.5]}\n";
    const auto s = parse_probability_stream(text);
    REQUIRE(s.size() == 9);
    CHECK(s[4].first == 4);
    CHECK(s[5].first == 6);
  }
  SUBCASE("errors") {
    try {
      parse_probability_stream("{\"index\":3,\"probs\":[0.5,0.5,0.5]}\n");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kValidation);
      CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_probability_stream("{\"index\":1,\"probs\":[1,0,0]}\n{\"index\":1,\"probs\":[1,0,0]}\n"),
                    Error);
    CHECK_THROWS_AS(parse_probability_stream("{\"index\":1,\"probs\":[1,0]}\n"), Error);
    CHECK_THROWS_AS(parse_probability_stream("{\"probs\":[1,0,0]}\n"), Error);
    CHECK_THROWS_AS(parse_probability_stream("{\"index\":1.5,\"probs\":[1,0,0]}\n"), Error);
    CHECK_THROWS_AS(parse_probability_stream("[1,2]\n"), Error);
  }
  SUBCASE("round trip with provenance line") {
    std::mt19937_64 rng(5);
    ProbabilityStream s;
    for (int i = 0; i < 50; i += 1 + i % 3) s.emplace_back(i, random_probs(rng));
    const std::string text = serialize_probability_stream(s, {{"seed", "5"}});
    CHECK(text.rfind("{\"meta\"", 0) == 0);
    const auto back = parse_probability_stream(text);
    REQUIRE(back.size() == s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
      CHECK(back[i].first == s[i].first);
      for (std::size_t j = 0; j < 3; ++j) CHECK(back[i].second[j] == s[i].second[j]);
    }
    CHECK(serialize_probability_stream(back, {{"seed", "5"}}) == text);
  }
  SUBCASE("load from disk") {
    testutil::TempDir dir;
    std::ofstream(dir / "p.jsonl") << "{\"index\":0,\"probs\":[1,0,0]}\n{\"index\":1,\"probs\":[0.9,0.2,0]}\n";
    try {
      load_probability_stream(dir / "p.jsonl");
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("p.jsonl") != std::string::npos);
    }
    CHECK_THROWS_AS(load_probability_stream(dir / "none.jsonl"), Error);
  }
}
