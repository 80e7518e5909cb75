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

#ifndef VCC_ANALYSIS_H_
#define VCC_ANALYSIS_H_

#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "vcc/dataset.h"

namespace vcc {

// A candidate is positive when at least this many of the five with-context
// votes say "causal" (plausibility >= 0.8).
inline constexpr int kPositiveVotes = 4;

// Number of "causal" votes. Requires exactly five votes.
int CausalVotes(std::span<const VoteLabel> votes);
// CausalVotes / 5, on the 0.2 grid.
double Plausibility(std::span<const VoteLabel> votes);

// Positive under the with-context setting. Unannotated candidates are never
// positive; without-context votes are ignored.
bool IsPositive(const CandidatePair &candidate);

// "<video>/<pair>/<cause>/<effect>".
std::string CandidateId(const VideoRecord &video, const ImagePair &pair,
                        const CandidatePair &candidate);

std::set<std::string> SelectPositives(std::span<const VideoRecord> records);

struct PlausibilityRecord {
  std::string candidate_id;
  int with_votes = 0;     // causal votes with context, 0..5
  int without_votes = 0;  // causal votes without context, 0..5

  double with_context() const { return with_votes / 5.0; }
  double without_context() const { return without_votes / 5.0; }
  double difference() const { return (with_votes - without_votes) / 5.0; }
};

// One record per candidate annotated under both settings.
std::vector<PlausibilityRecord> PlausibilityRecords(
    std::span<const VideoRecord> records);

// Average agreement of each annotator with the majority label of the other
// annotators on the same item; a tied majority scores 0.5. `table` is
// items x annotators and must be rectangular with at least two annotators.
double InterAnnotatorAgreement(
    std::span<const std::vector<VoteLabel>> table);

enum class VoteSetting { kWithContext, kWithoutContext };

// Items x annotators table of all candidates annotated in `setting`.
std::vector<std::vector<VoteLabel>> VoteTable(
    std::span<const VideoRecord> records, VoteSetting setting);

// Counts on the 0.2 grid. Bin i has centre `lowest + 0.2 i`.
struct Histogram {
  int lowest_votes = 0;  // -5 for differences, 0 otherwise
  std::vector<std::size_t> counts;

  double BinCenter(std::size_t i) const {
    return (lowest_votes + static_cast<int>(i)) / 5.0;
  }
  std::size_t total() const;
  // Fraction of mass in bins whose centre is <= / >= `threshold_votes`/5.
  double FractionAtOrBelow(int threshold_votes) const;
  double FractionAtOrAbove(int threshold_votes) const;
  // "bin,count" lines with a header row.
  std::string ToCsv() const;
};

struct PlausibilityHistograms {
  Histogram with_context;     // 6 bins over [0, 1]
  Histogram without_context;  // 6 bins over [0, 1]
  Histogram difference;       // 11 bins over [-1, 1]
};

PlausibilityHistograms BuildHistograms(
    std::span<const PlausibilityRecord> records);

struct AnalysisReport {
  std::size_t candidates = 0;   // annotated under both settings
  std::size_t positives = 0;
  std::map<Split, std::size_t> positives_by_split;
  double iaa_with_context = 0.0;
  double iaa_without_context = 0.0;
  // Fraction of pairs whose plausibility drops / rises by >= 0.4 with context.
  double context_hurts_fraction = 0.0;
  double context_helps_fraction = 0.0;
  PlausibilityHistograms histograms;
};

AnalysisReport Analyze(std::span<const VideoRecord> records);

std::string FormatAnalysisText(const AnalysisReport &report);
// One JSON object per line: summary, then each histogram bin.
std::string FormatAnalysisJsonl(const AnalysisReport &report);

}  // namespace vcc

#endif  // VCC_ANALYSIS_H_
