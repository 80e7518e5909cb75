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

#include "vcc/evaluator.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include "json.hpp"
#include "vcc/analysis.h"
#include "vcc/errors.h"
#include "vcc/text_util.h"

namespace vcc {
namespace {

// Strict weak order of the ranking: higher score first, then smaller id.
bool RanksBefore(double score_a, const std::string &id_a, double score_b,
                 const std::string &id_b) {
  if (score_a != score_b) return score_a > score_b;
  return id_a < id_b;
}

std::size_t GoldIndex(const RankingQuery &query) {
  for (std::size_t i = 0; i < query.pool.size(); ++i) {
    if (query.pool[i].id == query.gold_id) return i;
  }
  throw ValidationError("query " + query.id + ": gold " + query.gold_id +
                        " not in candidate pool");
}

std::vector<double> ScoreAll(const Scorer &scorer, const RankingQuery &query) {
  std::vector<double> scores;
  scores.reserve(query.pool.size());
  for (const Event &candidate : query.pool) {
    const double s = scorer(query, candidate);
    if (!std::isfinite(s)) {
      throw NumericError("query " + query.id + ": non-finite score for " +
                         candidate.id);
    }
    scores.push_back(s);
  }
  return scores;
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::vector<RankingQuery> BuildQueries(std::span<const VideoRecord> records,
                                       Split split) {
  std::vector<RankingQuery> queries;
  for (const VideoRecord &video : records) {
    if (video.split != split) continue;
    for (const ImagePair &pair : video.pairs) {
      for (const CandidatePair &c : pair.candidates) {
        if (!IsPositive(c)) continue;
        RankingQuery q;
        q.id = CandidateId(video, pair, c);
        q.video_id = video.id;
        q.pair_id = pair.id;
        q.category = video.category;
        const Event *cause = video.FindEvent(c.cause);
        if (cause == nullptr) {
          throw ValidationError("query " + q.id + ": cause not in video");
        }
        q.cause = *cause;
        q.gold_id = c.effect;
        q.pool = CandidatePool(video, c.cause);
        q.detections = pair.detections;
        q.feature = pair.image_feature;
        GoldIndex(q);
        queries.push_back(std::move(q));
      }
    }
  }
  return queries;
}

Scorer ModelScorer(const VccParameters &params) {
  auto shared = std::make_shared<const VccParameters>(params);
  return [shared](const RankingQuery &query, const Event &candidate) {
    PairContext ctx;
    for (const Detection &d : SelectObjects(query.detections, shared->max_objects)) {
      ctx.objects.push_back(d.word);
    }
    ctx.feature = query.feature;
    return Predict(*shared, query.cause, candidate, ctx);
  };
}

std::vector<ScoredCandidate> RankCandidates(const Scorer &scorer,
                                            const RankingQuery &query) {
  const std::vector<double> scores = ScoreAll(scorer, query);
  std::vector<ScoredCandidate> ranked;
  ranked.reserve(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    ranked.push_back({query.pool[i].id, scores[i]});
  }
  std::sort(ranked.begin(), ranked.end(),
            [](const ScoredCandidate &a, const ScoredCandidate &b) {
              return RanksBefore(a.score, a.event_id, b.score, b.event_id);
            });
  return ranked;
}

std::size_t GoldRank(const RankingQuery &query, std::span<const double> scores) {
  if (scores.size() != query.pool.size()) {
    throw DimensionError("query " + query.id + ": " +
                         std::to_string(scores.size()) + " scores for " +
                         std::to_string(query.pool.size()) + " candidates");
  }
  const std::size_t gold = GoldIndex(query);
  std::size_t rank = 1;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (i != gold && RanksBefore(scores[i], query.pool[i].id, scores[gold],
                                 query.pool[gold].id)) {
      ++rank;
    }
  }
  return rank;
}

double RecallAtK(std::span<const std::size_t> gold_ranks, std::size_t k) {
  if (gold_ranks.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t r : gold_ranks) {
    if (r <= k) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(gold_ranks.size());
}

EvalReport MakeReport(std::span<const RankingQuery> queries,
                      std::span<const std::size_t> gold_ranks) {
  if (queries.size() != gold_ranks.size()) {
    throw DimensionError("report: ranks and queries differ in length");
  }
  std::map<std::string, std::vector<std::size_t>> by_category;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    by_category[queries[i].category].push_back(gold_ranks[i]);
  }
  auto row = [](std::string name, std::span<const std::size_t> ranks) {
    return RecallRow{std::move(name), ranks.size(), RecallAtK(ranks, 1),
                     RecallAtK(ranks, 5), RecallAtK(ranks, 10)};
  };
  EvalReport report;
  for (const auto &[category, ranks] : by_category) {
    report.categories.push_back(row(category, ranks));
  }
  report.overall = row("overall", gold_ranks);
  return report;
}

EvalReport Evaluate(const Scorer &scorer,
                    std::span<const RankingQuery> queries, int jobs) {
  constexpr std::size_t kFailed = 0;
  std::vector<std::size_t> ranks(queries.size(), kFailed);
  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        ranks[i] = GoldRank(queries[i], ScoreAll(scorer, queries[i]));
      } catch (const Error &) {
        ranks[i] = kFailed;
      }
    }
  };
  const std::size_t workers = static_cast<std::size_t>(std::max(1, jobs));
  if (workers == 1 || queries.size() < 2) {
    work(0, queries.size());
  } else {
    std::vector<std::thread> threads;
    const std::size_t chunk = (queries.size() + workers - 1) / workers;
    for (std::size_t begin = 0; begin < queries.size(); begin += chunk) {
      threads.emplace_back(work, begin, std::min(queries.size(), begin + chunk));
    }
    for (std::thread &t : threads) t.join();
  }

  std::vector<RankingQuery> kept_queries;
  std::vector<std::size_t> kept_ranks;
  std::size_t excluded = 0;
  for (std::size_t i = 0; i < queries.size(); ++i) {
    if (ranks[i] == kFailed) {
      ++excluded;
      continue;
    }
    kept_queries.push_back(queries[i]);
    kept_ranks.push_back(ranks[i]);
  }
  EvalReport report = MakeReport(kept_queries, kept_ranks);
  report.excluded = excluded;
  return report;
}

std::vector<std::vector<double>> RandomScores(
    std::span<const RankingQuery> queries, Rng &rng) {
  std::vector<std::vector<double>> scores;
  scores.reserve(queries.size());
  for (const RankingQuery &q : queries) {
    std::vector<double> s(q.pool.size());
    for (double &v : s) v = rng.Uniform();
    scores.push_back(std::move(s));
  }
  return scores;
}

EvalReport RandomBaseline(std::span<const RankingQuery> queries,
                          std::uint64_t seed, int trials) {
  if (trials < 1) throw DomainError("random baseline needs at least one trial");
  Rng rng(seed);
  // hits[q] counts R@1, R@5, R@10 hits of query q
  std::vector<std::array<std::size_t, 3>> hits(queries.size(), {0, 0, 0});
  for (int t = 0; t < trials; ++t) {
    const auto scores = RandomScores(queries, rng);
    for (std::size_t q = 0; q < queries.size(); ++q) {
      const std::size_t rank = GoldRank(queries[q], scores[q]);
      hits[q][0] += rank <= 1;
      hits[q][1] += rank <= 5;
      hits[q][2] += rank <= 10;
    }
  }
  std::map<std::string, std::vector<std::size_t>> by_category;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    by_category[queries[q].category].push_back(q);
  }
  auto row = [&](std::string name, const std::vector<std::size_t> &members) {
    RecallRow r{std::move(name), members.size(), 0.0, 0.0, 0.0};
    if (members.empty()) return r;
    std::array<double, 3> sums{0.0, 0.0, 0.0};
    for (std::size_t q : members) {
      for (int k = 0; k < 3; ++k) sums[k] += static_cast<double>(hits[q][k]);
    }
    const double denom =
        static_cast<double>(members.size()) * static_cast<double>(trials);
    r.r1 = sums[0] / denom;
    r.r5 = sums[1] / denom;
    r.r10 = sums[2] / denom;
    return r;
  };
  EvalReport report;
  std::vector<std::size_t> all;
  for (const auto &[category, members] : by_category) {
    report.categories.push_back(row(category, members));
    all.insert(all.end(), members.begin(), members.end());
  }
  std::sort(all.begin(), all.end());
  report.overall = row("overall", all);
  return report;
}

std::string RenderCausalSentence(const Event &cause, const Event &effect) {
  const std::string first = Trim(cause.text);
  std::string second = Trim(effect.text);
  if (first.empty()) throw DomainError("cause event text is empty");
  if (second.empty()) throw DomainError("effect event text is empty");
  if (second[0] >= 'A' && second[0] <= 'Z') {
    second[0] = static_cast<char>(second[0] - 'A' + 'a');
  }
  return first + ", so " + second;
}

void WriteScoreFile(std::ostream &out, std::span<const RankingQuery> queries,
                    std::span<const std::vector<double>> scores) {
  if (scores.size() != queries.size()) {
    throw DimensionError("score file: one score vector per query required");
  }
  for (std::size_t q = 0; q < queries.size(); ++q) {
    if (scores[q].size() != queries[q].pool.size()) {
      throw DimensionError("score file: query " + queries[q].id +
                           " has the wrong number of scores");
    }
    for (std::size_t i = 0; i < scores[q].size(); ++i) {
      out << queries[q].id << '\t' << queries[q].pool[i].id << '\t'
          << FormatDouble(scores[q][i]) << '\n';
    }
  }
}

void WriteScoreFile(std::ostream &out, std::span<const RankingQuery> queries,
                    const Scorer &scorer) {
  std::vector<std::vector<double>> scores;
  scores.reserve(queries.size());
  for (const RankingQuery &q : queries) scores.push_back(ScoreAll(scorer, q));
  WriteScoreFile(out, queries, scores);
}

EvalReport RankFromScoreFile(std::istream &in,
                             std::span<const RankingQuery> queries) {
  std::unordered_map<std::string, std::unordered_map<std::string, double>> table;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (Trim(line).empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 =
        tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
    if (tab2 == std::string::npos || line.find('\t', tab2 + 1) != std::string::npos) {
      throw ParseError("expected query_id<TAB>candidate_id<TAB>score", line_no);
    }
    const std::string field = Trim(std::string_view(line).substr(tab2 + 1));
    double score = 0.0;
    auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), score);
    if (ec != std::errc() || ptr != field.data() + field.size() ||
        !std::isfinite(score)) {
      throw ParseError("bad score '" + field + "'", line_no);
    }
    table[line.substr(0, tab1)][line.substr(tab1 + 1, tab2 - tab1 - 1)] = score;
  }

  std::vector<std::string> gaps;
  std::size_t gap_count = 0;
  std::vector<std::size_t> ranks;
  ranks.reserve(queries.size());
  for (const RankingQuery &q : queries) {
    auto row = table.find(q.id);
    std::vector<double> scores(q.pool.size(), 0.0);
    bool complete = true;
    for (std::size_t i = 0; i < q.pool.size(); ++i) {
      const double *found = nullptr;
      if (row != table.end()) {
        auto it = row->second.find(q.pool[i].id);
        if (it != row->second.end()) found = &it->second;
      }
      if (found == nullptr) {
        complete = false;
        ++gap_count;
        if (gaps.size() < 10) gaps.push_back(q.id + " / " + q.pool[i].id);
        continue;
      }
      scores[i] = *found;
    }
    if (complete) ranks.push_back(GoldRank(q, scores));
  }
  if (gap_count > 0) {
    std::string message = "score file misses " + std::to_string(gap_count) +
                          " (query, candidate) scores:";
    for (const std::string &g : gaps) message += "\n  " + g;
    if (gap_count > gaps.size()) message += "\n  ...";
    throw CoverageError(message);
  }
  return MakeReport(queries, ranks);
}

EvalReport RankFromScoreFile(const std::filesystem::path &path,
                             std::span<const RankingQuery> queries) {
  std::ifstream in(path);
  if (!in) throw LookupError("cannot open score file " + path.string());
  return RankFromScoreFile(in, queries);
}

std::string FormatReportTable(const EvalReport &report) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-20s %8s %8s %8s %8s\n", "category",
                "queries", "R@1", "R@5", "R@10");
  out << buf;
  auto line = [&](const RecallRow &r) {
    std::snprintf(buf, sizeof(buf), "%-20s %8zu %8.2f %8.2f %8.2f\n",
                  r.category.c_str(), r.queries, 100.0 * r.r1, 100.0 * r.r5,
                  100.0 * r.r10);
    out << buf;
  };
  for (const RecallRow &r : report.categories) line(r);
  line(report.overall);
  if (report.excluded > 0) {
    out << "excluded queries (scoring failed): " << report.excluded << "\n";
  }
  return out.str();
}

std::string FormatReportJsonl(const EvalReport &report) {
  using nlohmann::json;
  std::string out;
  auto emit = [&](const RecallRow &r) {
    json j = {{"category", r.category}, {"queries", r.queries},
              {"r1", r.r1},             {"r5", r.r5},
              {"r10", r.r10},           {"excluded", report.excluded}};
    out += j.dump() + "\n";
  };
  for (const RecallRow &r : report.categories) emit(r);
  emit(report.overall);
  return out;
}

}  // namespace vcc
