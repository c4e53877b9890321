// Copyright 2026 The secslice Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "secslice/detect/model.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "secslice/common/error.hpp"

namespace secslice::detect {
namespace {

using nlohmann::json;

const json& field(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ModelError(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

std::vector<std::string> string_list(const json& v, const std::string& where) {
  if (!v.is_array()) throw ModelError(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& s : v) {
    if (!s.is_string()) throw ModelError(where + ": expected an array of strings");
    out.push_back(s.get<std::string>());
  }
  return out;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ModelError(where + ": expected a number");
  return v.get<double>();
}

std::int32_t index(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ModelError(where + ": expected an integer");
  return v.get<std::int32_t>();
}

FeatureSchema parse_schema(const json& s) {
  FeatureSchema out;
  const auto& version = field(s, "vocab_version", "schema");
  if (!version.is_string()) throw ModelError("schema.vocab_version: expected a string");
  out.vocab_version = version.get<std::string>();
  out.protocols = string_list(field(s, "protocol_type", "schema"), "schema.protocol_type");
  out.services = string_list(field(s, "service", "schema"), "schema.service");
  out.flags = string_list(field(s, "flag", "schema"), "schema.flag");
  const auto& numeric = field(s, "numeric", "schema");
  if (!numeric.is_array()) throw ModelError("schema.numeric: expected an array");
  for (std::size_t i = 0; i < numeric.size(); ++i) {
    const std::string where = "schema.numeric[" + std::to_string(i) + "]";
    NumericFeature f;
    f.name = field(numeric[i], "name", where).get<std::string>();
    const auto t = field(numeric[i], "transform", where).get<std::string>();
    if (t == "log1p") {
      f.transform = NumericTransform::kLog1p;
    } else if (t == "identity") {
      f.transform = NumericTransform::kIdentity;
    } else {
      throw ModelError(where + ".transform: unknown transform '" + t + "'");
    }
    if (f.name != "src_bytes" && f.name != "dst_bytes") {
      throw ModelError(where + ".name: unknown numeric feature '" + f.name + "'");
    }
    out.numeric.push_back(f);
  }
  out.feature_names = string_list(field(s, "features", "schema"), "schema.features");
  return out;
}

}  // namespace

void require_vocab(const FeatureSchema& schema, std::string_view vocab_version) {
  if (schema.feature_names.size() != schema.size()) {
    throw ModelError("schema lists " + std::to_string(schema.feature_names.size()) +
                     " feature names for a " + std::to_string(schema.size()) +
                     "-wide encoding");
  }
  if (schema.vocab_version != vocab_version) {
    throw ModelError("vocabulary version mismatch: model has '" +
                     schema.vocab_version + "', input uses '" +
                     std::string(vocab_version) + "'");
  }
}

void validate_model(const TreeEnsembleModel& model) {
  require_vocab(model.schema, model.schema.vocab_version);
  const auto width = static_cast<std::int32_t>(model.schema.size());
  if (!std::isfinite(model.bias)) throw ModelError("bias is not finite");
  for (std::size_t t = 0; t < model.trees.size(); ++t) {
    const auto& nodes = model.trees[t].nodes;
    const std::string where = "trees[" + std::to_string(t) + "]";
    if (nodes.empty()) throw ModelError(where + ": no nodes");
    const auto n = static_cast<std::int32_t>(nodes.size());
    std::vector<int> visits(nodes.size(), 0);
    std::function<void(std::int32_t, std::uint32_t)> walk = [&](std::int32_t i,
                                                               std::uint32_t depth) {
      if (i < 0 || i >= n) {
        throw ModelError(where + ": child index " + std::to_string(i) + " out of range");
      }
      if (++visits[static_cast<std::size_t>(i)] > 1) {
        throw ModelError(where + ": node " + std::to_string(i) + " reached twice");
      }
      const auto& node = nodes[static_cast<std::size_t>(i)];
      if (node.is_leaf()) {
        if (!std::isfinite(node.leaf)) {
          throw ModelError(where + ": leaf " + std::to_string(i) + " is not finite");
        }
        return;
      }
      if (node.feature >= width) {
        throw ModelError(where + ": node " + std::to_string(i) + " feature " +
                         std::to_string(node.feature) + " >= schema width " +
                         std::to_string(width));
      }
      if (depth + 1 > model.max_depth) {
        throw ModelError(where + ": deeper than declared max_depth " +
                         std::to_string(model.max_depth));
      }
      walk(node.left, depth + 1);
      walk(node.right, depth + 1);
    };
    walk(0, 0);
  }
}

TreeEnsembleModel parse_model(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("model is not valid JSON: ") + e.what());
  }
  const auto& fmt = field(doc, "format", "model");
  if (fmt != "secslice-gbdt") throw ModelError("model.format: expected 'secslice-gbdt'");
  if (field(doc, "format_version", "model") != 1) {
    throw ModelError("model.format_version: unsupported version");
  }
  if (field(doc, "output", "model") != "logistic") {
    throw ModelError("model.output: only 'logistic' is supported");
  }

  TreeEnsembleModel m;
  m.schema = parse_schema(field(doc, "schema", "model"));
  m.bias = number(field(doc, "bias", "model"), "model.bias");
  m.threshold = number(field(doc, "threshold", "model"), "model.threshold");
  m.max_depth = static_cast<std::uint32_t>(
      index(field(doc, "max_depth", "model"), "model.max_depth"));
  const auto& trees = field(doc, "trees", "model");
  if (!trees.is_array()) throw ModelError("model.trees: expected an array");
  m.trees.reserve(trees.size());
  for (std::size_t t = 0; t < trees.size(); ++t) {
    const std::string where = "trees[" + std::to_string(t) + "]";
    const auto& nodes = field(trees[t], "nodes", where);
    Tree tree;
    tree.nodes.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const std::string nw = where + ".nodes[" + std::to_string(i) + "]";
      const auto& jn = nodes[i];
      TreeNode node;
      if (jn.contains("leaf")) {
        node.leaf = number(jn.at("leaf"), nw + ".leaf");
      } else {
        node.feature = index(field(jn, "feature", nw), nw + ".feature");
        if (node.feature < 0) throw ModelError(nw + ".feature: negative index");
        node.threshold = number(field(jn, "threshold", nw), nw + ".threshold");
        node.left = index(field(jn, "left", nw), nw + ".left");
        node.right = index(field(jn, "right", nw), nw + ".right");
      }
      tree.nodes.push_back(node);
    }
    m.trees.push_back(std::move(tree));
  }
  if (doc.contains("metadata")) {
    const auto& md = doc.at("metadata");
    m.metadata.dataset = md.value("dataset", "");
    m.metadata.training_hash = md.value("training_hash", "");
  }
  validate_model(m);
  return m;
}

TreeEnsembleModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelError("cannot open model file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model(buf.str());
}

std::vector<double> encode(const PacketFeatures& features,
                           const FeatureSchema& schema) {
  if (schema.feature_names.size() != schema.size()) {
    throw ModelError("schema is inconsistent with its feature list");
  }
  std::vector<double> v;
  v.reserve(schema.size());
  auto one_hot = [&v](const std::vector<std::string>& vocab, const std::string& value) {
    for (const auto& cat : vocab) v.push_back(cat == value ? 1.0 : 0.0);
  };
  one_hot(schema.protocols, features.protocol_type);
  one_hot(schema.services, features.service);
  one_hot(schema.flags, features.flag);
  for (const auto& f : schema.numeric) {
    const auto raw = static_cast<double>(f.name == "src_bytes" ? features.src_bytes
                                                               : features.dst_bytes);
    v.push_back(f.transform == NumericTransform::kLog1p ? std::log1p(raw) : raw);
  }
  return v;
}

double predict(const TreeEnsembleModel& model, std::span<const double> vector) {
  if (vector.size() != model.schema.size()) {
    throw InputError("predict: vector has " + std::to_string(vector.size()) +
                     " entries, schema expects " + std::to_string(model.schema.size()));
  }
  double raw = model.bias;
  for (const auto& tree : model.trees) {
    std::size_t i = 0;
    while (!tree.nodes[i].is_leaf()) {
      const auto& n = tree.nodes[i];
      i = static_cast<std::size_t>(
          vector[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
    }
    raw += tree.nodes[i].leaf;
  }
  return logistic(raw);
}

}  // namespace secslice::detect
