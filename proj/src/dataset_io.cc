// Copyright 2026 The score-re Authors.
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

#include "score/dataset_io.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "score/error.h"

namespace score {

using nlohmann::json;
namespace fs = std::filesystem;

std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError(path.string(), "read failed");
  return ss.str();
}

void write_file(const fs::path &path, const std::string &contents) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

namespace {

template <typename Fn>
void for_each_json_line(const fs::path &path, Fn &&fn) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open for reading");
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    try {
      fn(json::parse(line), where);
    } catch (const json::exception &e) {
      throw ValidationError(where + ": " + e.what());
    }
  }
  if (in.bad()) throw IoError(path.string(), "read failed");
}

std::vector<int> int_list(const json &j, const char *field, const std::string &where) {
  if (!j.contains(field) || !j.at(field).is_array()) {
    throw ValidationError(where + ": missing array field '" + field + "'");
  }
  return j.at(field).get<std::vector<int>>();
}

}  // namespace

DatasetMeta read_manifest(const fs::path &path) {
  DatasetMeta meta;
  try {
    const json j = json::parse(read_file(path));
    const int version = j.at("format_version").get<int>();
    if (version != kFormatVersion) {
      throw ValidationError(path.string() + ": unsupported format_version " +
                            std::to_string(version));
    }
    meta.num_classes = j.at("num_classes").get<int>();
    meta.embedding_dim = j.at("embedding_dim").get<int>();
    meta.relation_names = j.at("relation_names").get<std::vector<std::string>>();
    if (j.contains("split_sizes")) {
      meta.split_sizes = j.at("split_sizes").get<std::map<std::string, std::size_t>>();
    }
  } catch (const json::exception &e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  try {
    meta.validate();
  } catch (const ValidationError &e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return meta;
}

void write_manifest(const fs::path &path, const DatasetMeta &meta) {
  json j;
  j["format_version"] = kFormatVersion;
  j["num_classes"] = meta.num_classes;
  j["embedding_dim"] = meta.embedding_dim;
  j["relation_names"] = meta.relation_names;
  if (!meta.split_sizes.empty()) j["split_sizes"] = meta.split_sizes;
  write_file(path, j.dump(2) + "\n");
}

std::vector<PairSample> read_pairs(const fs::path &path) {
  std::vector<PairSample> out;
  for_each_json_line(path, [&](const json &j, const std::string &where) {
    PairSample s;
    if (!j.contains("id") || !j.at("id").is_string()) {
      throw ValidationError(where + ": missing string field 'id'");
    }
    s.id = j.at("id").get<std::string>();
    if (!j.contains("x") || !j.at("x").is_array()) {
      throw ValidationError(where + ": missing array field 'x'");
    }
    s.x = j.at("x").get<std::vector<double>>();
    s.labels = int_list(j, "labels", where);
    out.push_back(std::move(s));
  });
  return out;
}

void write_pairs(const fs::path &path, const std::vector<PairSample> &samples) {
  std::string buf;
  for (const auto &s : samples) {
    json j;
    j["id"] = s.id;
    j["x"] = s.x;
    j["labels"] = s.labels;
    buf += j.dump();
    buf += '\n';
  }
  write_file(path, buf);
}

std::vector<TokenSentenceRecord> read_token_records(const fs::path &path) {
  std::vector<TokenSentenceRecord> out;
  for_each_json_line(path, [&](const json &j, const std::string &where) {
    TokenSentenceRecord r;
    r.sentence_id = j.at("sentence_id").get<std::string>();
    const int hidden = j.at("hidden_dim").get<int>();
    const auto rows = j.at("token_embeddings").get<std::vector<std::vector<double>>>();
    if (hidden <= 0) throw ValidationError(where + ": hidden_dim must be positive");
    r.token_embeddings = Matrix(rows.size(), static_cast<std::size_t>(hidden));
    for (std::size_t t = 0; t < rows.size(); ++t) {
      if (rows[t].size() != static_cast<std::size_t>(hidden)) {
        throw ValidationError(where + ": token " + std::to_string(t) + " has " +
                              std::to_string(rows[t].size()) +
                              " values, hidden_dim is " + std::to_string(hidden));
      }
      std::ranges::copy(rows[t], r.token_embeddings.row(t).begin());
    }
    for (const auto &m : j.at("mentions")) {
      r.mentions.push_back({int_list(m, "head", where), int_list(m, "tail", where),
                            int_list(m, "relations", where)});
    }
    out.push_back(std::move(r));
  });
  return out;
}

}  // namespace score
