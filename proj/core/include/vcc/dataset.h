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

#ifndef VCC_DATASET_H_
#define VCC_DATASET_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vcc {

// First line of every dataset file.
inline constexpr std::string_view kDatasetHeader = "#vis-causal-format v1";

// Annotators see five votes per event pair and setting.
inline constexpr std::size_t kVotesPerSetting = 5;

enum class Split { kTrain, kDev, kTest };

std::string_view SplitName(Split split);
// Throws DomainError for anything other than train/dev/test.
Split ParseSplit(std::string_view name);

// Closed set of relation labels an annotator may assign to an event pair.
enum class VoteLabel { kCausal, kInference, kTemporal, kNone, kOther };

std::string_view VoteLabelName(VoteLabel label);
VoteLabel ParseVoteLabel(std::string_view name);

struct Event {
  std::string id;
  std::string text;                 // as written in the file
  std::vector<std::string> tokens;  // lowercased whitespace tokens, never empty

  static Event Make(std::string id, std::string text);
};

struct Detection {
  std::string word;
  double confidence = 0.0;  // [0, 1]
  int source = 1;           // image 1 or 2
};

struct CandidatePair {
  std::string cause;   // event id
  std::string effect;  // event id
  std::vector<VoteLabel> votes_ctx;    // empty or exactly five
  std::vector<VoteLabel> votes_noctx;  // empty or exactly five
};

// Two time-consecutive frames of one video.
struct ImagePair {
  std::string id;
  std::vector<Event> events;  // events annotated on this pair
  std::vector<Detection> detections;
  std::optional<std::vector<double>> image_feature;
  std::vector<CandidatePair> candidates;
};

struct VideoRecord {
  std::string id;
  std::string category;
  Split split = Split::kTrain;
  std::vector<ImagePair> pairs;  // temporal order
  // Deduplicated union of pair events sorted by id. Filled by Finalize().
  std::vector<Event> event_pool;

  const Event *FindEvent(std::string_view event_id) const;
  const ImagePair *FindPair(std::string_view pair_id) const;
};

using Dataset = std::vector<VideoRecord>;

// Canonicalizes event identity (events with the same normalized text share
// the id of their first occurrence), rebuilds the event pool and checks every
// record invariant. Throws ValidationError naming the record.
void Finalize(VideoRecord &video);

// Reads a line-delimited dataset. Malformed lines raise ParseError with the
// line number; invariant violations raise ValidationError.
Dataset ParseDataset(std::istream &in);
Dataset LoadDataset(const std::filesystem::path &path);

void WriteDataset(std::ostream &out, std::span<const VideoRecord> records);
void SaveDataset(const std::filesystem::path &path,
                 std::span<const VideoRecord> records);

// Records of one split, original order preserved.
Dataset SplitView(std::span<const VideoRecord> records, std::string_view split);
Dataset SplitView(std::span<const VideoRecord> records, Split split);

// Every event of the video except the query, in id order.
std::vector<Event> CandidatePool(const VideoRecord &video,
                                 std::string_view query_event_id);

struct SplitStats {
  std::size_t videos = 0;
  std::size_t images = 0;  // a video with k consecutive pairs has k+1 frames
  std::size_t pairs = 0;
  std::size_t positives = 0;
  // Mean over videos of the candidate-list length |pool| - 1.
  double mean_candidates = 0.0;

  friend bool operator==(const SplitStats &, const SplitStats &) = default;
};

struct DatasetStats {
  std::map<Split, SplitStats> splits;  // always holds all three splits
  friend bool operator==(const DatasetStats &, const DatasetStats &) = default;
};

DatasetStats ComputeStats(std::span<const VideoRecord> records);

}  // namespace vcc

#endif  // VCC_DATASET_H_
