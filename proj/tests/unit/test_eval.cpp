#include <doctest.h>

#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "factcheck/core/canonical_json.hpp"
#include "factcheck/core/errors.hpp"
#include "factcheck/core/serialization.hpp"
#include "factcheck/eval/eval_harness.hpp"
#include "factcheck/eval/fava_convert.hpp"
#include "factcheck/eval/metrics.hpp"
#include "test_support.hpp"

using namespace factcheck;
using namespace factcheck::eval;
using nlohmann::json;

namespace {

std::string cli() { return testing::shell_quote(FACTCHECK_CLI); }
std::string q(const std::filesystem::path& p) { return testing::shell_quote(p.string()); }

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("binary F1 on hand-worked vectors") {
  auto m = compute_binary_f1({1, 1, 1, 0, 0}, {1, 1, 0, 1, 0});
  CHECK(m.tp == 2);
  CHECK(m.fp == 1);
  CHECK(m.fn == 1);
  CHECK(m.tn == 1);
  CHECK(m.f1 == Fraction(2, 3));
  CHECK(to_fixed4(m.f1) == "0.6667");

  m = compute_binary_f1({0, 0}, {0, 0});
  CHECK(m.precision == 0);
  CHECK(m.recall == 0);
  CHECK(m.f1 == 0);
  m = compute_binary_f1({1, 1}, {0, 0});
  CHECK(m.precision == 0);
  CHECK(m.f1 == 0);
  m = compute_binary_f1({1, 0, 1}, {1, 1, 1});
  CHECK(m.precision == 1);
  CHECK(m.recall == Fraction(2, 3));
  CHECK(m.f1 == Fraction(4, 5));
}

TEST_CASE("binary F1 input validation") {
  CHECK_THROWS_AS(compute_binary_f1({}, {}), DomainError);
  CHECK_THROWS_AS(compute_binary_f1({1}, {1, 0}), DomainError);
  CHECK_THROWS_AS(compute_binary_f1({2}, {1}), DomainError);
  CHECK_THROWS_AS(compute_binary_f1({1}, {-1}), DomainError);
}

TEST_CASE("metrics json uses four-decimal ratios") {
  const auto j = to_json(compute_binary_f1({1, 1, 1, 0, 0}, {1, 1, 0, 1, 0}));
  CHECK(canonical_dump(j) ==
        R"({"f1":0.6667,"fn":1,"fp":1,"precision":0.6667,"recall":0.6667,"sentences":5,"tn":1,"tp":2})");
}

}

TEST_SUITE("eval harness") {

TEST_CASE("sweep grid") {
  const auto points = parse_sweep("evidences=1,3 context=15,30", PipelineConfig{});
  REQUIRE(points.size() == 4);
  CHECK(points[0].label() == "evidences=1 context=15");
  CHECK(points[1].label() == "evidences=1 context=30");
  CHECK(points[3].config.top_n_results == 3);
  CHECK(points[3].config.context_window_m == 30);
  const auto base = parse_sweep("", PipelineConfig{});
  REQUIRE(base.size() == 1);
  CHECK(base[0].label() == "base");
  const auto misc = parse_sweep("retrieval=dense threshold=0.5 irrelevant=false passages=2 profile=alt",
                                PipelineConfig{});
  REQUIRE(misc.size() == 1);
  CHECK(misc[0].config.retrieval_mode == RetrievalMode::dense);
  CHECK(misc[0].config.threshold_t == Fraction(1, 2));
  CHECK_FALSE(misc[0].config.count_irrelevant_in_total);
  CHECK(misc[0].config.top_k_passages == 2);
  CHECK(misc[0].config.llm_profile == "alt");
  CHECK_THROWS_AS(parse_sweep("evidences", PipelineConfig{}), DomainError);
  CHECK_THROWS_AS(parse_sweep("colour=red", PipelineConfig{}), DomainError);
  CHECK_THROWS_AS(parse_sweep("evidences=1 evidences=2", PipelineConfig{}), DomainError);
  CHECK_THROWS_AS(parse_sweep("evidences=1,", PipelineConfig{}), DomainError);
  CHECK_THROWS_AS(parse_sweep("evidences=0", PipelineConfig{}), DomainError);
  CHECK_THROWS_AS(parse_sweep("threshold=2", PipelineConfig{}), DomainError);
}

TEST_CASE("dataset loading") {
  const auto records = load_dataset(testing::mini_eval_dir() / "dataset.jsonl");
  CHECK(records.size() == 6);
  CHECK(records[0].id == "cg-01");
  CHECK(records[0].subset == "chatgpt");
  CHECK(record_from_json(to_json(records[0])) == records[0]);

  testing::TempDir dir;
  std::ofstream(dir / "empty.jsonl") << "\n\n";
  CHECK_THROWS_AS(load_dataset(dir / "empty.jsonl"), DomainError);
  std::ofstream(dir / "bad.jsonl") << "{\"id\":\"x\",\"text\":\"T.\",\"gold_sentence_labels\":[2]}\n";
  CHECK_THROWS_AS(load_dataset(dir / "bad.jsonl"), DomainError);
  std::ofstream(dir / "torn.jsonl") << "{\"id\":\n";
  CHECK_THROWS_AS(load_dataset(dir / "torn.jsonl"), DomainError);
}

TEST_CASE("replay: base metrics equal the committed golden") {
  auto gateway = testing::replay_gateway(testing::mini_eval_dir() / "fixtures.jsonl");
  const auto records = load_dataset(testing::mini_eval_dir() / "dataset.jsonl");
  const auto rows = run_eval(records, parse_sweep("", PipelineConfig{}), *gateway);
  CHECK(canonical_dump(metrics_json(rows)) + "\n" ==
        testing::read_text(testing::mini_eval_dir() / "golden_metrics.json"));
  CHECK(rows[0].subsets.at("all").f1 == Fraction(4, 7));
  CHECK(format_table(rows).find("llama2-chat") != std::string::npos);
}

TEST_CASE("replay: sweep equals the committed golden and is order independent") {
  auto gateway = testing::replay_gateway(testing::mini_eval_dir() / "fixtures.jsonl");
  const auto records = load_dataset(testing::mini_eval_dir() / "dataset.jsonl");
  EvalOptions opts;
  opts.parallel = 3;
  const auto rows =
      run_eval(records, parse_sweep("evidences=1,3 context=15,30", PipelineConfig{}), *gateway, opts);
  CHECK(canonical_dump(metrics_json(rows)) + "\n" ==
        testing::read_text(testing::mini_eval_dir() / "golden_sweep_metrics.json"));
  CHECK(to_fixed4(rows[0].subsets.at("all").f1) == "0.6667");

  const auto swapped =
      run_eval(records, parse_sweep("context=30,15 evidences=3,1", PipelineConfig{}), *gateway);
  std::map<std::pair<int, int>, BinaryMetrics> a, b;
  for (const auto& r : rows) a[{r.point.config.top_n_results, r.point.config.context_window_m}] = r.subsets.at("all");
  for (const auto& r : swapped) b[{r.point.config.top_n_results, r.point.config.context_window_m}] = r.subsets.at("all");
  CHECK(a == b);
}

TEST_CASE("records whose labels do not line up are skipped") {
  testing::ScriptedProviders p;
  EvalRecord bad{"x", "One sentence. Two sentences.", {1}, "s"};
  const auto row = evaluate({bad}, parse_sweep("", PipelineConfig{})[0], p);
  CHECK(row.records_scored == 0);
  REQUIRE(row.skipped.size() == 1);
  CHECK(row.skipped[0].id == "x");
  CHECK(row.subsets.at("all").count() == 0);
  CHECK(p.chat_calls == 0);
}

TEST_CASE("predictions follow the classification") {
  const auto report =
      deserialize_report(testing::read_text(testing::java_tea_dir() / "golden_report.json"));
  CHECK(predict_sentences(report) == std::vector<int>{0, 0});
  auto strict = report;
  strict.config.threshold_t = Fraction(1, 2);
  strict.scores = scoring::compute_breakdown(strict);
  CHECK(predict_sentences(strict) == std::vector<int>{0, 1});
}

}

TEST_SUITE("fava conversion") {

TEST_CASE("tags are stripped and corrections dropped") {
  const auto a = strip_annotations(
      "The tower was completed in <entity><mark>1889</mark><delete>1925</delete></entity>. "
      "It is in Paris.");
  CHECK(a.plain == "The tower was completed in 1925. It is in Paris.");
  REQUIRE(a.error_spans.size() == 1);
  CHECK(a.plain.substr(a.error_spans[0].first, a.error_spans[0].second - a.error_spans[0].first) ==
        "1925");
}

TEST_CASE("sentence labels mark overlapping spans") {
  const auto r = convert_annotated(
      "f1", "Water boils at 100 C. <invented>Tea grows on the moon.</invented> Salt is salty.",
      "chatgpt");
  CHECK(r.text == "Water boils at 100 C. Tea grows on the moon. Salt is salty.");
  CHECK(r.gold_sentence_labels == std::vector<int>{0, 1, 0});
  CHECK(r.subset == "chatgpt");
}

TEST_CASE("file conversion") {
  testing::TempDir dir;
  std::ofstream(dir / "in.jsonl")
      << json{{"id", "a"}, {"annotated", "Fine. <entity><delete>Bad</delete></entity> claim."}}.dump()
      << "\n";
  CHECK(convert_fava_file(dir / "in.jsonl", dir / "out.jsonl") == 1);
  const auto records = load_dataset(dir / "out.jsonl");
  REQUIRE(records.size() == 1);
  CHECK(records[0].gold_sentence_labels == std::vector<int>{0, 1});
}

}

TEST_SUITE("cli") {

TEST_CASE("replay verify writes the golden report to stdout") {
  const auto jt = testing::java_tea_dir();
  const auto r = testing::run_command(cli() + " verify --input " + q(jt / "input.txt") +
                                      " --config " + q(jt / "config.json") + " --fixtures " +
                                      q(jt / "fixtures.jsonl") + " --output - 2>/dev/null");
  CHECK(r.exit_code == 0);
  CHECK(r.out == testing::read_text(jt / "golden_report.json"));
}

TEST_CASE("summary reports zero network calls in replay") {
  const auto jt = testing::java_tea_dir();
  testing::TempDir dir;
  const auto r = testing::run_command(cli() + " verify --input " + q(jt / "input.txt") +
                                      " --config " + q(jt / "config.json") + " --fixtures " +
                                      q(jt / "fixtures.jsonl") + " --output " +
                                      q(dir / "report.json"));
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("network calls: 0") != std::string::npos);
  CHECK(r.out.find("overall") != std::string::npos);
  CHECK(testing::read_text(dir / "report.json") == testing::read_text(jt / "golden_report.json"));
}

TEST_CASE("usage errors exit with 2") {
  const auto jt = testing::java_tea_dir();
  auto r = testing::run_command(cli() + " verify --input " + q(jt / "input.txt") +
                                " --fixtures /nonexistent/fixtures.jsonl 2>/dev/null");
  CHECK(r.exit_code == 2);
  r = testing::run_command("printf '  ' | " + cli() + " verify --fixtures " +
                           q(jt / "fixtures.jsonl") + " 2>/dev/null");
  CHECK(r.exit_code == 2);
  r = testing::run_command(cli() + " verify --bogus 2>/dev/null");
  CHECK(r.exit_code == 2);
  r = testing::run_command(cli() + " eval --dataset " + q(testing::mini_eval_dir() / "dataset.jsonl") +
                           " --mode live 2>/dev/null");
  CHECK(r.exit_code == 2);
}

TEST_CASE("eval subcommand writes metrics") {
  const auto me = testing::mini_eval_dir();
  const auto r = testing::run_command(cli() + " eval --dataset " + q(me / "dataset.jsonl") +
                                      " --fixtures " + q(me / "fixtures.jsonl") +
                                      " --output - 2>/dev/null");
  CHECK(r.exit_code == 0);
  CHECK(r.out == testing::read_text(me / "golden_metrics.json"));
}

}
