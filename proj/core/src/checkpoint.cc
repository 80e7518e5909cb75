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

#include "vcc/checkpoint.h"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "vcc/errors.h"

namespace vcc {

using nlohmann::json;

std::string SerializeCheckpoint(const VccParameters &params) {
  json tensors = json::array();
  for (const auto &[name, tensor] : params.Slots()) {
    tensors.push_back({{"name", name},
                       {"shape", tensor->shape()},
                       {"data", std::vector<double>(tensor->data().begin(),
                                                    tensor->data().end())}});
  }
  json doc = {{"format_version", kCheckpointFormatVersion},
              {"variant", std::string(VariantName(params.variant))},
              {"d", params.width()},
              {"h", params.hidden},
              {"m", params.max_objects},
              {"feature_width", params.feature_width},
              {"embedding_trainable", params.embedding.trainable},
              {"vocabulary", params.embedding.vocab.tokens()},
              {"parameters", std::move(tensors)}};
  return doc.dump(1) + "\n";
}

VccParameters DeserializeCheckpoint(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception &e) {
    throw ParseError(std::string("checkpoint: ") + e.what(), 0);
  }
  try {
    const int version = doc.at("format_version").get<int>();
    if (version != kCheckpointFormatVersion) {
      throw ValidationError("unsupported checkpoint format_version " +
                            std::to_string(version));
    }
    VccParameters p;
    p.variant = ParseVariant(doc.at("variant").get<std::string>());
    p.hidden = doc.at("h").get<std::size_t>();
    p.max_objects = doc.at("m").get<std::size_t>();
    p.feature_width = doc.at("feature_width").get<std::size_t>();
    const std::size_t d = doc.at("d").get<std::size_t>();
    p.embedding.vocab = Vocabulary::FromTokens(
        doc.at("vocabulary").get<std::vector<std::string>>());
    p.embedding.trainable = doc.at("embedding_trainable").get<bool>();

    std::map<std::string, Tensor> loaded;
    for (const json &t : doc.at("parameters")) {
      Tensor tensor(t.at("shape").get<Shape>(),
                    t.at("data").get<std::vector<double>>());
      loaded.emplace(t.at("name").get<std::string>(), std::move(tensor));
    }
    auto take = [&](const std::string &name) {
      auto it = loaded.find(name);
      if (it == loaded.end()) {
        throw ValidationError("checkpoint lacks tensor " + name);
      }
      Tensor t = std::move(it->second);
      loaded.erase(it);
      return t;
    };
    auto take_net = [&](const std::string &prefix) {
      FeedForward net;
      net.w1 = take(prefix + ".w1");
      net.b1 = take(prefix + ".b1");
      net.w2 = take(prefix + ".w2");
      net.b2 = take(prefix + ".b2");
      return net;
    };
    p.embedding.matrix = take("embedding");
    switch (p.variant) {
      case Variant::kVcc:
        p.nn_a = take_net("nn_a");
        p.nn_b = take_net("nn_b");
        p.nn_c = take_net("nn_c");
        break;
      case Variant::kNoContext:
      case Variant::kNoAttention:
        p.nn_c = take_net("nn_c");
        break;
      case Variant::kFeatureContext:
        p.nn_c = take_net("nn_c");
        p.proj_w = take("proj.w");
        p.proj_b = take("proj.b");
        break;
    }
    if (!loaded.empty()) {
      throw ValidationError("checkpoint has unexpected tensor " +
                            loaded.begin()->first);
    }
    if (p.embedding.matrix.rank() != 2 ||
        p.embedding.matrix.rows() != p.embedding.vocab.size() ||
        p.embedding.matrix.cols() != d) {
      throw ValidationError("embedding shape " +
                            ShapeString(p.embedding.matrix.shape()) +
                            " disagrees with vocabulary size and d");
    }
    const std::size_t c_in = p.variant == Variant::kNoContext ? 2 * d : 4 * d;
    if (p.nn_c.w1.shape() != Shape{p.hidden, c_in}) {
      throw ValidationError("nn_c.w1 has shape " +
                            ShapeString(p.nn_c.w1.shape()));
    }
    return p;
  } catch (const json::exception &e) {
    throw ValidationError(std::string("checkpoint: ") + e.what());
  }
}

void SaveCheckpoint(const std::filesystem::path &path,
                    const VccParameters &params) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LookupError("cannot write checkpoint " + path.string());
  out << SerializeCheckpoint(params);
}

VccParameters LoadCheckpoint(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LookupError("cannot open checkpoint " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return DeserializeCheckpoint(buf.str());
}

}  // namespace vcc
