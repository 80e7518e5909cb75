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

#include "vcc/analysis.h"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "vcc/errors.h"

namespace vcc {

int CausalVotes(std::span<const VoteLabel> votes) {
  if (votes.size() != kVotesPerSetting) {
    throw DomainError("plausibility needs exactly 5 votes, got " +
                      std::to_string(votes.size()));
  }
  return static_cast<int>(
      std::count(votes.begin(), votes.end(), VoteLabel::kCausal));
}

double Plausibility(std::span<const VoteLabel> votes) {
  return CausalVotes(votes) / 5.0;
}

bool IsPositive(const CandidatePair &candidate) {
  if (candidate.votes_ctx.empty()) return false;
  return CausalVotes(candidate.votes_ctx) >= kPositiveVotes;
}

std::string CandidateId(const VideoRecord &video, const ImagePair &pair,
                        const CandidatePair &candidate) {
  return video.id + "/" + pair.id + "/" + candidate.cause + "/" +
         candidate.effect;
}

std::set<std::string> SelectPositives(std::span<const VideoRecord> records) {
  std::set<std::string> ids;
  for (const VideoRecord &v : records) {
    for (const ImagePair &p : v.pairs) {
      for (const CandidatePair &c : p.candidates) {
        if (IsPositive(c)) ids.insert(CandidateId(v, p, c));
      }
    }
  }
  return ids;
}

std::vector<PlausibilityRecord> PlausibilityRecords(
    std::span<const VideoRecord> records) {
  std::vector<PlausibilityRecord> out;
  for (const VideoRecord &v : records) {
    for (const ImagePair &p : v.pairs) {
      for (const CandidatePair &c : p.candidates) {
        if (c.votes_ctx.empty() || c.votes_noctx.empty()) continue;
        out.push_back({CandidateId(v, p, c), CausalVotes(c.votes_ctx),
                       CausalVotes(c.votes_noctx)});
      }
    }
  }
  return out;
}

double InterAnnotatorAgreement(std::span<const std::vector<VoteLabel>> table) {
  if (table.empty()) throw DomainError("agreement of an empty vote table");
  const std::size_t annotators = table.front().size();
  if (annotators < 2) {
    throw DomainError("agreement needs at least two annotators");
  }
  double total = 0.0;
  for (const auto &item : table) {
    if (item.size() != annotators) {
      throw DomainError("vote table is not rectangular");
    }
    for (std::size_t a = 0; a < annotators; ++a) {
      std::map<VoteLabel, int> counts;
      for (std::size_t b = 0; b < annotators; ++b) {
        if (b != a) ++counts[item[b]];
      }
      int best = 0;
      int winners = 0;
      for (const auto &[label, n] : counts) {
        if (n > best) {
          best = n;
          winners = 1;
        } else if (n == best) {
          ++winners;
        }
      }
      const int mine = counts.count(item[a]) ? counts[item[a]] : 0;
      if (mine == best) total += winners == 1 ? 1.0 : 0.5;
    }
  }
  return total / static_cast<double>(table.size() * annotators);
}

std::vector<std::vector<VoteLabel>> VoteTable(
    std::span<const VideoRecord> records, VoteSetting setting) {
  std::vector<std::vector<VoteLabel>> table;
  for (const VideoRecord &v : records) {
    for (const ImagePair &p : v.pairs) {
      for (const CandidatePair &c : p.candidates) {
        const auto &votes =
            setting == VoteSetting::kWithContext ? c.votes_ctx : c.votes_noctx;
        if (!votes.empty()) table.push_back(votes);
      }
    }
  }
  return table;
}

std::size_t Histogram::total() const {
  std::size_t n = 0;
  for (std::size_t c : counts) n += c;
  return n;
}

double Histogram::FractionAtOrBelow(int threshold_votes) const {
  const std::size_t n = total();
  if (n == 0) return 0.0;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (lowest_votes + static_cast<int>(i) <= threshold_votes) hit += counts[i];
  }
  return static_cast<double>(hit) / static_cast<double>(n);
}

double Histogram::FractionAtOrAbove(int threshold_votes) const {
  const std::size_t n = total();
  if (n == 0) return 0.0;
  std::size_t hit = 0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (lowest_votes + static_cast<int>(i) >= threshold_votes) hit += counts[i];
  }
  return static_cast<double>(hit) / static_cast<double>(n);
}

std::string Histogram::ToCsv() const {
  std::string out = "bin,count\n";
  char buf[64];
  for (std::size_t i = 0; i < counts.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.1f,%zu\n", BinCenter(i), counts[i]);
    out += buf;
  }
  return out;
}

PlausibilityHistograms BuildHistograms(
    std::span<const PlausibilityRecord> records) {
  PlausibilityHistograms h;
  h.with_context.counts.assign(6, 0);
  h.without_context.counts.assign(6, 0);
  h.difference.lowest_votes = -5;
  h.difference.counts.assign(11, 0);
  for (const PlausibilityRecord &r : records) {
    ++h.with_context.counts[r.with_votes];
    ++h.without_context.counts[r.without_votes];
    ++h.difference.counts[r.with_votes - r.without_votes + 5];
  }
  return h;
}

AnalysisReport Analyze(std::span<const VideoRecord> records) {
  AnalysisReport report;
  for (Split s : {Split::kTrain, Split::kDev, Split::kTest}) {
    report.positives_by_split[s] = 0;
  }
  for (const VideoRecord &v : records) {
    for (const ImagePair &p : v.pairs) {
      for (const CandidatePair &c : p.candidates) {
        if (IsPositive(c)) {
          ++report.positives;
          ++report.positives_by_split[v.split];
        }
      }
    }
  }
  const auto plaus = PlausibilityRecords(records);
  report.candidates = plaus.size();
  report.histograms = BuildHistograms(plaus);
  // A shift of two votes (0.4) marks a clear change in plausibility.
  report.context_hurts_fraction = report.histograms.difference.FractionAtOrBelow(-2);
  report.context_helps_fraction = report.histograms.difference.FractionAtOrAbove(2);

  const auto with = VoteTable(records, VoteSetting::kWithContext);
  const auto without = VoteTable(records, VoteSetting::kWithoutContext);
  if (!with.empty()) report.iaa_with_context = InterAnnotatorAgreement(with);
  if (!without.empty()) {
    report.iaa_without_context = InterAnnotatorAgreement(without);
  }
  return report;
}

std::string FormatAnalysisText(const AnalysisReport &report) {
  std::ostringstream out;
  char buf[128];
  out << "candidates annotated in both settings: " << report.candidates << "\n";
  out << "positives (>= 4 of 5 causal with context): " << report.positives;
  out << " (train " << report.positives_by_split.at(Split::kTrain) << ", dev "
      << report.positives_by_split.at(Split::kDev) << ", test "
      << report.positives_by_split.at(Split::kTest) << ")\n";
  std::snprintf(buf, sizeof(buf), "IAA with context: %.4f\nIAA without context: %.4f\n",
                report.iaa_with_context, report.iaa_without_context);
  out << buf;
  std::snprintf(buf, sizeof(buf),
                "difference <= -0.4: %.4f\ndifference >= +0.4: %.4f\n",
                report.context_hurts_fraction, report.context_helps_fraction);
  out << buf;
  auto dump = [&](const char *name, const Histogram &h) {
    out << name << ":";
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      std::snprintf(buf, sizeof(buf), " %+.1f=%zu", h.BinCenter(i), h.counts[i]);
      out << buf;
    }
    out << "\n";
  };
  dump("with context", report.histograms.with_context);
  dump("without context", report.histograms.without_context);
  dump("difference", report.histograms.difference);
  return out.str();
}

std::string FormatAnalysisJsonl(const AnalysisReport &report) {
  using nlohmann::json;
  std::string out;
  json summary = {{"record", "summary"},
                  {"candidates", report.candidates},
                  {"positives", report.positives},
                  {"positives_train", report.positives_by_split.at(Split::kTrain)},
                  {"positives_dev", report.positives_by_split.at(Split::kDev)},
                  {"positives_test", report.positives_by_split.at(Split::kTest)},
                  {"iaa_with_context", report.iaa_with_context},
                  {"iaa_without_context", report.iaa_without_context},
                  {"context_hurts_fraction", report.context_hurts_fraction},
                  {"context_helps_fraction", report.context_helps_fraction}};
  out += summary.dump() + "\n";
  auto bins = [&](const char *name, const Histogram &h) {
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
      json row = {{"record", "histogram"},
                  {"histogram", name},
                  {"bin", h.BinCenter(i)},
                  {"count", h.counts[i]}};
      out += row.dump() + "\n";
    }
  };
  bins("with_context", report.histograms.with_context);
  bins("without_context", report.histograms.without_context);
  bins("difference", report.histograms.difference);
  return out;
}

}  // namespace vcc
