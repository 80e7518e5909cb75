// Copyright 2026 The VCC Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance run: one PASS/FAIL line per criterion with its runtime.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.h"
#include "gradcheck.h"
#include "vcc/analysis.h"
#include "vcc/dataset.h"
#include "vcc/evaluator.h"
#include "vcc/model.h"
#include "vcc/synthetic.h"
#include "vcc/trainer.h"
#include "vcc_tools/cli.h"
#include "vcc_tools/manifest.h"

namespace vcc {
namespace {

namespace fs = std::filesystem;
using testing::RandomEvent;
using testing::RandomObjects;
using testing::RandomParameters;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Format(const char *fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), fmt, args...);
  return buf;
}

// Synthetic protocol shared by criteria 3, 4 and 9.
struct SyntheticRun {
  Dataset data;
  std::vector<RankingQuery> test_queries;
  std::map<Variant, FitResult> fits;
  std::map<Variant, EvalReport> reports;
};

SyntheticRun RunSynthetic(std::uint64_t seed, std::vector<Variant> variants) {
  SyntheticConfig sc;
  sc.seed = seed;
  sc.contextual_fraction = 1.0;
  sc.detection_noise = 0.0;
  SyntheticRun run;
  run.data = Generate(sc);
  const Dataset train = SplitView(run.data, Split::kTrain);
  const Dataset dev = SplitView(run.data, Split::kDev);
  run.test_queries = BuildQueries(run.data, Split::kTest);
  for (Variant v : variants) {
    TrainConfig c;
    c.variant = v;
    c.learning_rate = 0.05;
    c.hidden = 16;
    c.width = 32;
    c.max_epochs = 10;
    c.seed = seed;
    run.fits[v] = Fit(c, train, dev);
    run.reports[v] = Evaluate(ModelScorer(run.fits[v].best), run.test_queries);
  }
  return run;
}

SyntheticRun &SeedOneRun() {
  static SyntheticRun run =
      RunSynthetic(1, {Variant::kVcc, Variant::kNoAttention, Variant::kNoContext});
  return run;
}

Outcome GradientFidelity() {
  Rng rng(2024);
  double worst = 0.0;
  for (Variant v : {Variant::kVcc, Variant::kNoContext, Variant::kNoAttention,
                    Variant::kFeatureContext}) {
    for (int i = 0; i < 100; ++i) {
      VccParameters p = RandomParameters(v, 2, 2, 6, v == Variant::kFeatureContext ? 3 : 0, 1.0, rng);
      const Event c = RandomEvent("c", 6, 3, rng);
      const Event e = RandomEvent("e", 6, 3, rng);
      const Event n = RandomEvent("n", 6, 3, rng);
      PairContext ctx{RandomObjects(6, 4, rng),
                      std::vector<double>{rng.Uniform(-1, 1), rng.Uniform(-1, 1), rng.Uniform(-1, 1)}};
      worst = std::max(worst, testing::ModelGradientCheck(p, c, e, n, ctx, 1e-5));
    }
  }
  return {worst < 1e-4, Format("max relative error %.3g over 4 x 100 instances", worst)};
}

Outcome RandomBaselineExpectation() {
  std::vector<RankingQuery> queries;
  for (int q = 0; q < 50; ++q) {
    RankingQuery query;
    query.id = "q" + std::to_string(q);
    query.category = "fixture";
    query.cause = Event::Make("cause", "a cause");
    for (int i = 0; i < 32; ++i) {
      char id[8];
      std::snprintf(id, sizeof(id), "c%02d", i);
      query.pool.push_back(Event::Make(id, std::string("candidate ") + id));
    }
    query.gold_id = query.pool[static_cast<std::size_t>(q % 32)].id;
    queries.push_back(query);
  }
  const RecallRow r = RandomBaseline(queries, 7, 10000).overall;
  const bool pass = std::abs(r.r1 - 1.0 / 32) <= 0.005 && std::abs(r.r5 - 0.15625) <= 0.01 &&
                    std::abs(r.r10 - 0.3125) <= 0.01;
  return {pass, Format("R@1 %.4f R@5 %.4f R@10 %.4f (N=32, 10000 trials)", r.r1, r.r5, r.r10)};
}

Outcome ContextualSeparation() {
  const SyntheticRun &run = SeedOneRun();
  const double vcc = run.reports.at(Variant::kVcc).overall.r1;
  const double blind = run.reports.at(Variant::kNoContext).overall.r1;
  const std::size_t queries = run.test_queries.size();
  const std::size_t train = BuildQueries(run.data, Split::kTrain).size();
  const std::size_t dev = BuildQueries(run.data, Split::kDev).size();
  const bool sized = train == 2000 && dev == 200 && queries == 200;
  return {sized && vcc >= 0.85 && blind <= 0.60,
          Format("test R@1 vcc %.3f no-context %.3f (%zu/%zu/%zu queries)", vcc, blind, train, dev,
                 queries)};
}

Outcome AblationOrdering() {
  int holds = 0;
  std::string detail;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    SyntheticRun local;
    const SyntheticRun *run = &SeedOneRun();
    if (seed != 1) {
      local = RunSynthetic(seed, {Variant::kVcc, Variant::kNoAttention, Variant::kNoContext});
      run = &local;
    }
    const RecallRow &a = run->reports.at(Variant::kVcc).overall;
    const RecallRow &b = run->reports.at(Variant::kNoAttention).overall;
    const RecallRow &c = run->reports.at(Variant::kNoContext).overall;
    const bool ok = a.r5 >= b.r5 && b.r5 >= c.r5;
    holds += ok;
    detail += Format("%sseed %d R@5 %.3f/%.3f/%.3f R@1 %.3f/%.3f/%.3f", seed == 1 ? "" : "; ",
                     static_cast<int>(seed), a.r5, b.r5, c.r5, a.r1, b.r1, c.r1);
  }
  return {holds >= 4, Format("ordering holds on %d of 5 seeds (", holds) + detail + ")"};
}

Outcome UniformAttentionReduction() {
  Rng rng(77);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    VccParameters p = RandomParameters(Variant::kVcc, 4, 5, 8, 0, 1.0, rng);
    for (double &x : p.nn_a.w1.data()) x = 0.0;
    for (double &x : p.nn_b.w1.data()) x = 0.0;
    const Event a = RandomEvent("a", 8, 5, rng);
    const Event b = RandomEvent("b", 8, 5, rng);
    const auto objs = RandomObjects(8, 6, rng);
    worst = std::max(worst, std::abs(PredictVcc(p, a, b, objs) - PredictNoAttention(p, a, b, objs)));
  }
  return {worst <= 1e-10, Format("max |vcc - no-attention| %.3g over 1000 instances", worst)};
}

Outcome VotingExactness() {
  bool ok = true;
  for (int k = 0; k <= 5; ++k) ok = ok && Plausibility(testing::Votes(k)) == k / 5.0;
  ok = ok && Plausibility(testing::Votes(4)) == 0.8;
  for (int k = 0; k <= 5; ++k) {
    ok = ok && IsPositive({"a", "b", testing::Votes(k), testing::Votes(5 - k)}) == (k >= 4);
  }
  const Dataset data = testing::CorpusFixture();
  const auto positives = SelectPositives(data);
  std::map<Split, std::size_t> by_split;
  for (const auto &v : data) {
    for (const auto &p : v.pairs) {
      for (const auto &c : p.candidates) by_split[v.split] += positives.count(CandidateId(v, p, c));
    }
  }
  const DatasetStats stats = ComputeStats(data);
  auto tenth = [](double x) { return std::round(x * 10) / 10; };
  ok = ok && by_split[Split::kTrain] == 2599 && by_split[Split::kDev] == 329 &&
       by_split[Split::kTest] == 282;
  ok = ok && stats.splits.at(Split::kTrain).positives == 2599 &&
       stats.splits.at(Split::kDev).positives == 329 && stats.splits.at(Split::kTest).positives == 282;
  ok = ok && tenth(stats.splits.at(Split::kTrain).mean_candidates) == 31.8 &&
       tenth(stats.splits.at(Split::kDev).mean_candidates) == 32.1 &&
       tenth(stats.splits.at(Split::kTest).mean_candidates) == 32.2;
  return {ok, Format("positives %zu/%zu/%zu, mean candidates %.1f/%.1f/%.1f", by_split[Split::kTrain],
                     by_split[Split::kDev], by_split[Split::kTest],
                     stats.splits.at(Split::kTrain).mean_candidates,
                     stats.splits.at(Split::kDev).mean_candidates,
                     stats.splits.at(Split::kTest).mean_candidates)};
}

Outcome AgreementFixtures() {
  const VoteLabel A = VoteLabel::kCausal, B = VoteLabel::kTemporal;
  const std::vector<std::vector<VoteLabel>> unanimous(20, std::vector<VoteLabel>(5, A));
  const std::vector<std::vector<VoteLabel>> deviant(20, {A, A, A, A, B});
  std::vector<std::vector<VoteLabel>> alternating;
  for (int i = 0; i < 20; ++i) alternating.push_back(i % 2 ? std::vector{A, B} : std::vector{B, A});
  const double u = InterAnnotatorAgreement(unanimous);
  const double d = InterAnnotatorAgreement(deviant);
  const double a = InterAnnotatorAgreement(alternating);
  return {u == 1.0 && d == 0.8 && a == 0.0,
          Format("unanimous %.17g, 4-vs-1 %.17g, alternating %.17g", u, d, a)};
}

int Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "vcc");
  std::ostringstream out, err;
  return tools::RunCli(args, out, err);
}

Outcome CliDeterminism() {
  const fs::path dir = testing::TempDir("acceptance_cli");
  const std::string data = (dir / "data.jsonl").string();
  if (Cli({"synth", "--out", data, "--seed", "5", "--train-videos", "80", "--dev-videos", "10",
           "--test-videos", "10"}) != 0) {
    return {false, "synth failed"};
  }
  std::vector<std::string> digests;
  for (const char *name : {"a", "b"}) {
    const std::string ckpt = (dir / (std::string(name) + ".json")).string();
    const std::string report = (dir / (std::string(name) + ".jsonl")).string();
    if (Cli({"train", "--data", data, "--variant", "vcc", "--seed", "9", "--epochs", "3", "--lr", "0.05",
             "--hidden", "16", "--width", "16", "--out", ckpt}) != 0) {
      return {false, "train failed"};
    }
    if (Cli({"eval", "--data", data, "--checkpoint", ckpt, "--out", report}) != 0) {
      return {false, "eval failed"};
    }
    digests.push_back(tools::Sha256File(ckpt));
    digests.push_back(tools::Sha256File(report));
  }
  const bool same_ckpt = digests[0] == digests[2];
  const bool same_report = digests[1] == digests[3];
  return {same_ckpt && same_report,
          Format("checkpoint sha256 %s %s, report sha256 %s %s", digests[0].substr(0, 12).c_str(),
                 same_ckpt ? "identical" : "differs", digests[1].substr(0, 12).c_str(),
                 same_report ? "identical" : "differs")};
}

Outcome ScoreFileEquivalence() {
  const SyntheticRun &run = SeedOneRun();
  bool ok = true;
  std::string detail;
  for (Variant v : {Variant::kVcc, Variant::kNoContext}) {
    const Scorer scorer = ModelScorer(run.fits.at(v).best);
    const EvalReport direct = Evaluate(scorer, run.test_queries);
    std::stringstream file;
    WriteScoreFile(file, run.test_queries, scorer);
    const EvalReport ranked = RankFromScoreFile(file, run.test_queries);
    ok = ok && ranked == direct;
    detail += Format("%s%s R@1 %.3f/%.3f", detail.empty() ? "" : ", ", std::string(VariantName(v)).c_str(),
                     direct.overall.r1, ranked.overall.r1);
  }
  return {ok, detail + " (direct/file)"};
}

}  // namespace
}  // namespace vcc

int main() {
  using Clock = std::chrono::steady_clock;
  struct Criterion {
    int number;
    const char *name;
    double budget_seconds;  // 0: no runtime bound
    std::function<vcc::Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {1, "gradient fidelity", 30, vcc::GradientFidelity},
      {2, "random baseline expectation", 60, vcc::RandomBaselineExpectation},
      {3, "contextual separation", 300, vcc::ContextualSeparation},
      {4, "ablation ordering", 0, vcc::AblationOrdering},
      {5, "uniform-attention reduction", 0, vcc::UniformAttentionReduction},
      {6, "voting and positive selection", 0, vcc::VotingExactness},
      {7, "agreement fixtures", 0, vcc::AgreementFixtures},
      {8, "cli determinism", 0, vcc::CliDeterminism},
      {9, "score-file equivalence", 0, vcc::ScoreFileEquivalence},
  };
  int failed = 0;
  for (const Criterion &c : criteria) {
    const auto start = Clock::now();
    vcc::Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception &e) {
      outcome = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (c.budget_seconds > 0 && seconds > c.budget_seconds) {
      outcome.pass = false;
      outcome.detail += vcc::Format(" [over the %.0f s budget]", c.budget_seconds);
    }
    failed += !outcome.pass;
    std::printf("%s %d %s: %s (%.2f s)\n", outcome.pass ? "PASS" : "FAIL", c.number, c.name,
                outcome.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
