#include <doctest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "factcheck/core/canonical_json.hpp"
#include "factcheck/core/errors.hpp"
#include "factcheck/core/serialization.hpp"
#include "factcheck/scoring/credibility.hpp"
#include "test_support.hpp"

using namespace factcheck;
using nlohmann::json;

TEST_SUITE("core") {

TEST_CASE("to_fixed4 rounds half up") {
  CHECK(to_fixed4(Fraction(2, 3)) == "0.6667");
  CHECK(to_fixed4(Fraction(1, 3)) == "0.3333");
  CHECK(to_fixed4(Fraction(1, 20000)) == "0.0001");
  CHECK(to_fixed4(Fraction(1, 20001)) == "0.0000");
  CHECK(to_fixed4(Fraction(1)) == "1.0000");
  CHECK(to_fixed4(Fraction(0)) == "0.0000");
  CHECK(to_fixed4(Fraction(5, 6)) == "0.8333");
}

TEST_CASE("fraction_from_decimal quantizes to 1e-4") {
  CHECK(fraction_from_decimal(0.3) == Fraction(3, 10));
  CHECK(fraction_from_decimal(0.6) == Fraction(3, 5));
  CHECK(fraction_from_decimal(0.12345) == Fraction(1235, 10000));
  CHECK_THROWS_AS(fraction_from_decimal(std::nan("")), DomainError);
}

TEST_CASE("bucket boundaries are half open") {
  CHECK(assign_bucket(0.0) == Bucket::low);
  CHECK(assign_bucket(0.25) == Bucket::low);
  CHECK(assign_bucket(0.2999) == Bucket::low);
  CHECK(assign_bucket(0.3) == Bucket::medium);
  CHECK(assign_bucket(0.5999) == Bucket::medium);
  CHECK(assign_bucket(0.6) == Bucket::high);
  CHECK(assign_bucket(1.0) == Bucket::high);
  CHECK(assign_bucket(Fraction(3, 10)) == Bucket::medium);
  CHECK(assign_bucket(Fraction(3, 5)) == Bucket::high);
  CHECK(assign_bucket(Fraction(299999, 1000000)) == Bucket::low);
  CHECK_THROWS_AS(assign_bucket(1.01), DomainError);
  CHECK_THROWS_AS(assign_bucket(-0.01), DomainError);
  CHECK_THROWS_AS(assign_bucket(Fraction(11, 10)), DomainError);
}

TEST_CASE("enum names round trip") {
  for (auto c : kAllCategories) CHECK(parse_category(to_string(c)) == c);
  CHECK(parse_verdict_name("not_supported") == Verdict::not_supported);
  CHECK(parse_retrieval_mode("dense") == RetrievalMode::dense);
  CHECK_THROWS_AS(parse_category("forum"), DomainError);
  CHECK_THROWS_AS(parse_sentence_status("Verified"), DomainError);
}

TEST_CASE("canonical_dump sorts keys and fixes float precision") {
  const json j = {{"b", 1}, {"a", {{"z", 0.1}, {"y", 2.0 / 3.0}}}, {"s", "é\""}, {"n", nullptr}};
  CHECK(canonical_dump(j) == R"({"a":{"y":0.6667,"z":0.1000},"b":1,"n":null,"s":"é\""})");
  CHECK(canonical_dump(json(-0.0)) == "0.0000");
  CHECK(canonical_dump(json::array({true, 3, "x"})) == R"([true,3,"x"])");
}

TEST_CASE("canonical_dump replaces invalid UTF-8 instead of throwing") {
  const std::string bad = std::string("a") + static_cast<char>(0xFF) + "b";
  CHECK_NOTHROW(canonical_dump(json(bad)));
}

TEST_CASE("config defaults and validation") {
  PipelineConfig c;
  CHECK(c.retrieval_mode == RetrievalMode::sparse);
  CHECK(c.top_n_results == 3);
  CHECK(c.top_k_passages == 1);
  CHECK(c.context_window_m == 15);
  CHECK(c.threshold_t == Fraction(3, 10));
  CHECK(c.count_irrelevant_in_total);
  CHECK_NOTHROW(c.validate());

  SUBCASE("json round trip") {
    c.retrieval_mode = RetrievalMode::dense;
    c.threshold_t = Fraction(6, 10);
    CHECK(config_from_json(to_json(c)) == c);
  }
  SUBCASE("partial objects keep defaults") {
    CHECK(config_from_json(json{{"top_n_results", 5}}).top_n_results == 5);
    CHECK(config_from_json(json::object()) == PipelineConfig{});
  }
  SUBCASE("threshold is quantized") {
    CHECK(config_from_json(json{{"threshold_t", 0.30004}}).threshold_t == Fraction(3, 10));
  }
  SUBCASE("rejections") {
    CHECK_THROWS_AS(config_from_json(json{{"top_n", 3}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"top_n_results", 0}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"top_n_results", "3"}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"top_k_passages", 0}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"context_window_m", -1}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"threshold_t", 1.5}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"retrieval_mode", "hybrid"}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"count_irrelevant_in_total", 1}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json{{"parallelism", 0}}), ConfigError);
    CHECK_THROWS_AS(config_from_json(json::array()), ConfigError);
  }
}

TEST_CASE("golden report survives a serialization round trip") {
  const auto bytes = testing::read_text(testing::java_tea_dir() / "golden_report.json");
  const auto report = deserialize_report(bytes);
  CHECK(canonical_serialize(report) == bytes);
  CHECK(report_from_json(to_json(report)) == report);
  CHECK(validate_report(report).empty());
  CHECK(report.sentences.size() == 2);
  CHECK(report.judgments.size() == 15);
}

TEST_CASE("random reports round trip and validate") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    auto report = testing::random_report(rng);
    canonicalize(report);
    INFO("iteration " << i);
    CHECK(validate_report(report).empty());
    const auto again = deserialize_report(canonical_serialize(report));
    CHECK(canonical_serialize(again) == canonical_serialize(report));
    CHECK(again.scores == report.scores);
  }
}

TEST_CASE("validate_report finds broken references") {
  auto report = deserialize_report(testing::read_text(testing::java_tea_dir() / "golden_report.json"));
  SUBCASE("judgment to unknown evidence") {
    report.judgments[0].evidence_id = "nope";
    CHECK_FALSE(validate_report(report).empty());
  }
  SUBCASE("evidence to unknown claim") {
    report.evidence[0].claim_id = "s9c9";
    CHECK_FALSE(validate_report(report).empty());
  }
  SUBCASE("duplicate judgment") {
    report.judgments.push_back(report.judgments[0]);
    CHECK_FALSE(validate_report(report).empty());
  }
  SUBCASE("match index outside window") {
    report.evidence[0].match_sentence_index = report.evidence[0].window_end + 1;
    CHECK_FALSE(validate_report(report).empty());
  }
}

TEST_CASE("score breakdown json round trip") {
  const auto report = deserialize_report(testing::read_text(testing::java_tea_dir() / "golden_report.json"));
  CHECK(breakdown_from_json(to_json(report.scores)) == report.scores);
  const json j = to_json(report.scores);
  CHECK(j.at("overall").at("fraction") == "23/36");
  CHECK(j.at("overall").at("bucket") == "high");
}

TEST_CASE("canonicalize orders evidence by claim then rank") {
  std::mt19937_64 rng(11);
  auto report = testing::random_report(rng);
  while (report.evidence.size() < 3) report = testing::random_report(rng);
  auto shuffled = report;
  std::shuffle(shuffled.evidence.begin(), shuffled.evidence.end(), rng);
  std::shuffle(shuffled.judgments.begin(), shuffled.judgments.end(), rng);
  canonicalize(report);
  canonicalize(shuffled);
  CHECK(canonical_serialize(report) == canonical_serialize(shuffled));
}

}
