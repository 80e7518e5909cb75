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

#include "vcc/dataset.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "vcc/analysis.h"
#include "vcc/errors.h"
#include "vcc/text_util.h"

namespace vcc {
namespace {

using nlohmann::json;

constexpr std::array<std::string_view, 5> kVoteNames = {
    "causal", "inference", "temporal", "none", "other"};

[[noreturn]] void Invalid(const VideoRecord &video, const std::string &what) {
  throw ValidationError("video " + video.id + ": " + what);
}

void CheckVotes(const VideoRecord &video, const ImagePair &pair,
                const std::vector<VoteLabel> &votes, const char *setting) {
  if (!votes.empty() && votes.size() != kVotesPerSetting) {
    Invalid(video, "pair " + pair.id + " has " + std::to_string(votes.size()) +
                       " " + setting + " votes, expected " +
                       std::to_string(kVotesPerSetting));
  }
}

std::string RequireString(const json &j, const char *key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw Error(std::string("missing string field '") + key + "'");
  }
  return j[key].get<std::string>();
}

const json &RequireArray(const json &j, const char *key) {
  if (!j.contains(key) || !j[key].is_array()) {
    throw Error(std::string("missing array field '") + key + "'");
  }
  return j[key];
}

std::vector<VoteLabel> ParseVotes(const json &j, const char *key) {
  std::vector<VoteLabel> votes;
  if (!j.contains(key)) return votes;
  for (const json &v : RequireArray(j, key)) {
    if (!v.is_string()) throw Error(std::string("non-string vote in ") + key);
    votes.push_back(ParseVoteLabel(v.get<std::string>()));
  }
  return votes;
}

VideoRecord ParseRecord(const json &j) {
  if (!j.is_object()) throw Error("record is not an object");
  VideoRecord video;
  video.id = RequireString(j, "video_id");
  video.category = RequireString(j, "category");
  video.split = ParseSplit(RequireString(j, "split"));
  for (const json &jp : RequireArray(j, "pairs")) {
    ImagePair pair;
    pair.id = RequireString(jp, "pair_id");
    for (const json &je : RequireArray(jp, "events")) {
      pair.events.push_back(
          Event::Make(RequireString(je, "event_id"), RequireString(je, "text")));
    }
    for (const json &jd : RequireArray(jp, "detections")) {
      Detection d;
      d.word = RequireString(jd, "word");
      if (!jd.contains("confidence") || !jd["confidence"].is_number()) {
        throw Error("detection without numeric confidence");
      }
      d.confidence = jd["confidence"].get<double>();
      if (!jd.contains("source") || !jd["source"].is_number_integer()) {
        throw Error("detection without integer source");
      }
      d.source = jd["source"].get<int>();
      pair.detections.push_back(std::move(d));
    }
    if (jp.contains("image_feature")) {
      std::vector<double> feature;
      for (const json &v : RequireArray(jp, "image_feature")) {
        if (!v.is_number()) throw Error("non-numeric image_feature entry");
        feature.push_back(v.get<double>());
      }
      pair.image_feature = std::move(feature);
    }
    for (const json &jc : RequireArray(jp, "candidates")) {
      CandidatePair c;
      c.cause = RequireString(jc, "cause");
      c.effect = RequireString(jc, "effect");
      c.votes_ctx = ParseVotes(jc, "votes_ctx");
      c.votes_noctx = ParseVotes(jc, "votes_noctx");
      pair.candidates.push_back(std::move(c));
    }
    video.pairs.push_back(std::move(pair));
  }
  return video;
}

json VotesJson(const std::vector<VoteLabel> &votes) {
  json out = json::array();
  for (VoteLabel v : votes) out.push_back(std::string(VoteLabelName(v)));
  return out;
}

json RecordJson(const VideoRecord &video) {
  json pairs = json::array();
  for (const ImagePair &pair : video.pairs) {
    json events = json::array();
    for (const Event &e : pair.events) {
      events.push_back({{"event_id", e.id}, {"text", e.text}});
    }
    json detections = json::array();
    for (const Detection &d : pair.detections) {
      detections.push_back(
          {{"word", d.word}, {"confidence", d.confidence}, {"source", d.source}});
    }
    json candidates = json::array();
    for (const CandidatePair &c : pair.candidates) {
      candidates.push_back({{"cause", c.cause},
                            {"effect", c.effect},
                            {"votes_ctx", VotesJson(c.votes_ctx)},
                            {"votes_noctx", VotesJson(c.votes_noctx)}});
    }
    json jp = {{"pair_id", pair.id},
               {"events", std::move(events)},
               {"detections", std::move(detections)}};
    if (pair.image_feature) jp["image_feature"] = *pair.image_feature;
    jp["candidates"] = std::move(candidates);
    pairs.push_back(std::move(jp));
  }
  return {{"video_id", video.id},
          {"category", video.category},
          {"split", std::string(SplitName(video.split))},
          {"pairs", std::move(pairs)}};
}

}  // namespace

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kDev:
      return "dev";
    case Split::kTest:
      return "test";
  }
  return "train";
}

Split ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "dev") return Split::kDev;
  if (name == "test") return Split::kTest;
  throw DomainError("unknown split '" + std::string(name) +
                    "' (expected train, dev or test)");
}

std::string_view VoteLabelName(VoteLabel label) {
  return kVoteNames[static_cast<std::size_t>(label)];
}

VoteLabel ParseVoteLabel(std::string_view name) {
  for (std::size_t i = 0; i < kVoteNames.size(); ++i) {
    if (kVoteNames[i] == name) return static_cast<VoteLabel>(i);
  }
  throw DomainError("unknown vote label '" + std::string(name) + "'");
}

Event Event::Make(std::string id, std::string text) {
  Event e{std::move(id), std::move(text), {}};
  e.tokens = Tokenize(e.text);
  return e;
}

const Event *VideoRecord::FindEvent(std::string_view event_id) const {
  auto it = std::lower_bound(
      event_pool.begin(), event_pool.end(), event_id,
      [](const Event &e, std::string_view id) { return e.id < id; });
  if (it == event_pool.end() || it->id != event_id) return nullptr;
  return &*it;
}

const ImagePair *VideoRecord::FindPair(std::string_view pair_id) const {
  for (const ImagePair &p : pairs) {
    if (p.id == pair_id) return &p;
  }
  return nullptr;
}

void Finalize(VideoRecord &video) {
  if (video.id.empty()) throw ValidationError("video with empty id");
  if (video.pairs.empty()) Invalid(video, "no image pairs");

  // id -> normalized text, normalized text -> canonical id.
  std::unordered_map<std::string, std::string> text_of;
  std::unordered_map<std::string, std::string> canonical;
  std::unordered_map<std::string, std::string> remap;
  std::set<std::string> pair_ids;
  std::vector<Event> pool;

  for (ImagePair &pair : video.pairs) {
    if (pair.id.empty()) Invalid(video, "pair with empty id");
    if (!pair_ids.insert(pair.id).second) {
      Invalid(video, "duplicate pair id " + pair.id);
    }
    for (Event &e : pair.events) {
      if (e.id.empty()) Invalid(video, "event with empty id in pair " + pair.id);
      if (e.tokens.empty()) Invalid(video, "event " + e.id + " has no tokens");
      const std::string norm = Join(e.tokens, " ");
      auto known = text_of.find(e.id);
      if (known != text_of.end() && known->second != norm) {
        Invalid(video, "event id " + e.id + " used for two different texts");
      }
      text_of[e.id] = norm;
      auto [it, inserted] = canonical.emplace(norm, e.id);
      remap[e.id] = it->second;
      if (inserted) pool.push_back(e);
      e.id = it->second;
    }
    for (const Detection &d : pair.detections) {
      if (d.word.empty() || Tokenize(d.word).empty()) {
        Invalid(video, "empty detection word in pair " + pair.id);
      }
      if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
        Invalid(video, "detection confidence outside [0,1] in pair " + pair.id);
      }
      if (d.source != 1 && d.source != 2) {
        Invalid(video, "detection source must be 1 or 2 in pair " + pair.id);
      }
    }
    if (pair.image_feature && pair.image_feature->empty()) {
      Invalid(video, "empty image_feature in pair " + pair.id);
    }
  }

  for (ImagePair &pair : video.pairs) {
    // Duplicate texts inside one pair collapse to one event.
    std::vector<Event> unique;
    std::set<std::string> seen;
    for (Event &e : pair.events) {
      if (seen.insert(e.id).second) unique.push_back(std::move(e));
    }
    pair.events = std::move(unique);

    for (CandidatePair &c : pair.candidates) {
      auto cause = remap.find(c.cause);
      auto effect = remap.find(c.effect);
      if (cause == remap.end()) {
        Invalid(video, "candidate cause " + c.cause + " is not an event");
      }
      if (effect == remap.end()) {
        Invalid(video, "candidate effect " + c.effect + " is not an event");
      }
      c.cause = cause->second;
      c.effect = effect->second;
      if (!seen.count(c.cause)) {
        Invalid(video, "candidate cause " + c.cause +
                           " does not appear in pair " + pair.id);
      }
      if (c.cause == c.effect) {
        Invalid(video, "candidate pairs event " + c.cause + " with itself");
      }
      CheckVotes(video, pair, c.votes_ctx, "with-context");
      CheckVotes(video, pair, c.votes_noctx, "without-context");
    }
  }

  std::sort(pool.begin(), pool.end(),
            [](const Event &a, const Event &b) { return a.id < b.id; });
  video.event_pool = std::move(pool);
}

Dataset ParseDataset(std::istream &in) {
  Dataset records;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  std::set<std::string> video_ids;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = Trim(line);
    if (trimmed.empty()) continue;
    if (!header_seen) {
      if (trimmed != kDatasetHeader) {
        throw ParseError("expected header '" + std::string(kDatasetHeader) +
                             "'",
                         line_no);
      }
      header_seen = true;
      continue;
    }
    VideoRecord video;
    try {
      video = ParseRecord(json::parse(trimmed));
    } catch (const json::exception &e) {
      throw ParseError(e.what(), line_no);
    } catch (const ValidationError &) {
      throw;
    } catch (const Error &e) {
      throw ParseError(e.what(), line_no);
    }
    Finalize(video);
    if (!video_ids.insert(video.id).second) {
      throw ValidationError("duplicate video id " + video.id);
    }
    records.push_back(std::move(video));
  }
  return records;
}

Dataset LoadDataset(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw LookupError("cannot open dataset " + path.string());
  return ParseDataset(in);
}

void WriteDataset(std::ostream &out, std::span<const VideoRecord> records) {
  out << kDatasetHeader << '\n';
  for (const VideoRecord &video : records) {
    out << RecordJson(video).dump() << '\n';
  }
}

void SaveDataset(const std::filesystem::path &path,
                 std::span<const VideoRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LookupError("cannot write dataset " + path.string());
  WriteDataset(out, records);
}

Dataset SplitView(std::span<const VideoRecord> records, Split split) {
  Dataset view;
  for (const VideoRecord &v : records) {
    if (v.split == split) view.push_back(v);
  }
  return view;
}

Dataset SplitView(std::span<const VideoRecord> records,
                  std::string_view split) {
  return SplitView(records, ParseSplit(split));
}

std::vector<Event> CandidatePool(const VideoRecord &video,
                                 std::string_view query_event_id) {
  if (video.FindEvent(query_event_id) == nullptr) {
    throw LookupError("event " + std::string(query_event_id) +
                      " is not part of video " + video.id);
  }
  std::vector<Event> pool;
  pool.reserve(video.event_pool.size() - 1);
  for (const Event &e : video.event_pool) {
    if (e.id != query_event_id) pool.push_back(e);
  }
  return pool;
}

DatasetStats ComputeStats(std::span<const VideoRecord> records) {
  DatasetStats stats;
  std::map<Split, double> candidate_sum;
  for (Split s : {Split::kTrain, Split::kDev, Split::kTest}) {
    stats.splits[s] = SplitStats{};
    candidate_sum[s] = 0.0;
  }
  for (const VideoRecord &v : records) {
    SplitStats &s = stats.splits[v.split];
    ++s.videos;
    s.pairs += v.pairs.size();
    s.images += v.pairs.size() + 1;
    for (const ImagePair &p : v.pairs) {
      for (const CandidatePair &c : p.candidates) {
        if (IsPositive(c)) ++s.positives;
      }
    }
    candidate_sum[v.split] +=
        static_cast<double>(v.event_pool.empty() ? 0 : v.event_pool.size() - 1);
  }
  for (auto &[split, s] : stats.splits) {
    if (s.videos > 0) {
      s.mean_candidates = candidate_sum[split] / static_cast<double>(s.videos);
    }
  }
  return stats;
}

}  // namespace vcc
