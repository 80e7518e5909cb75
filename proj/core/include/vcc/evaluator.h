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

#ifndef VCC_EVALUATOR_H_
#define VCC_EVALUATOR_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vcc/dataset.h"
#include "vcc/model.h"

namespace vcc {

// One cause event with a single gold effect; a cause with several gold
// effects yields one query per effect.
struct RankingQuery {
  std::string id;  // "<video>/<pair>/<cause>/<gold>"
  std::string video_id;
  std::string pair_id;
  std::string category;
  Event cause;
  std::string gold_id;
  std::vector<Event> pool;  // every other event of the video, id order
  std::vector<Detection> detections;
  std::optional<std::vector<double>> feature;
};

// Queries for every with-context positive of `split`. Throws ValidationError
// when a gold effect is missing from its pool.
std::vector<RankingQuery> BuildQueries(std::span<const VideoRecord> records,
                                       Split split);

// Probability that `candidate` is caused by the query's cause. Must be safe
// to call concurrently.
using Scorer =
    std::function<double(const RankingQuery &query, const Event &candidate)>;

// Holds its own copy of `params`.
Scorer ModelScorer(const VccParameters &params);

struct ScoredCandidate {
  std::string event_id;
  double score;
};

// Candidates by descending score, ties by ascending event id. Throws if the
// scorer throws or returns a non-finite score.
std::vector<ScoredCandidate> RankCandidates(const Scorer &scorer,
                                            const RankingQuery &query);

// 1-based position of the gold event under the ranking order above.
std::size_t GoldRank(const RankingQuery &query, std::span<const double> scores);

// Fraction of gold ranks <= k.
double RecallAtK(std::span<const std::size_t> gold_ranks, std::size_t k);

struct RecallRow {
  std::string category;
  std::size_t queries = 0;
  double r1 = 0.0;
  double r5 = 0.0;
  double r10 = 0.0;
  friend bool operator==(const RecallRow &, const RecallRow &) = default;
};

struct EvalReport {
  std::vector<RecallRow> categories;  // sorted by name
  RecallRow overall;                  // category "overall"
  std::size_t excluded = 0;           // queries whose scoring failed
  friend bool operator==(const EvalReport &, const EvalReport &) = default;
};

// Aggregates per-query gold ranks (aligned with `queries`).
EvalReport MakeReport(std::span<const RankingQuery> queries,
                      std::span<const std::size_t> gold_ranks);

// Ranks every query. `jobs` > 1 scores queries on that many threads.
EvalReport Evaluate(const Scorer &scorer,
                    std::span<const RankingQuery> queries, int jobs = 1);

// One uniform [0,1) score per pool candidate for every query, drawn in query
// then pool order.
std::vector<std::vector<double>> RandomScores(
    std::span<const RankingQuery> queries, Rng &rng);

// Recall averaged over `trials` independent random rankings per query.
EvalReport RandomBaseline(std::span<const RankingQuery> queries,
                          std::uint64_t seed, int trials);

// "<cause text>, so <effect text>" with the effect's first letter lowercased.
std::string RenderCausalSentence(const Event &cause, const Event &effect);

// Score file: "query_id<TAB>candidate_event_id<TAB>score" per line.
void WriteScoreFile(std::ostream &out, std::span<const RankingQuery> queries,
                    std::span<const std::vector<double>> scores);
void WriteScoreFile(std::ostream &out, std::span<const RankingQuery> queries,
                    const Scorer &scorer);
// Ranks from external scores. Throws CoverageError listing missing
// (query, candidate) combinations.
EvalReport RankFromScoreFile(std::istream &in,
                             std::span<const RankingQuery> queries);
EvalReport RankFromScoreFile(const std::filesystem::path &path,
                             std::span<const RankingQuery> queries);

std::string FormatReportTable(const EvalReport &report);
// One JSON object per category row plus the overall row.
std::string FormatReportJsonl(const EvalReport &report);

}  // namespace vcc

#endif  // VCC_EVALUATOR_H_
