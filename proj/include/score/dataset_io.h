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

#ifndef SCORE_DATASET_IO_H_
#define SCORE_DATASET_IO_H_

// On-disk dataset formats:
//   manifest.json   {"format_version":1, "num_classes":R, "embedding_dim":D,
//                    "relation_names":[...], "split_sizes":{...}}
//   <split>.jsonl   {"id":"...", "x":[D floats], "labels":[ints]} per line
//   tokens.jsonl    {"sentence_id":"...", "hidden_dim":h,
//                    "token_embeddings":[[floats]],
//                    "mentions":[{"head":[..],"tail":[..],"relations":[..]}]}

#include <filesystem>
#include <string>
#include <vector>

#include "score/data_model.h"

namespace score {

inline constexpr int kFormatVersion = 1;

DatasetMeta read_manifest(const std::filesystem::path &path);
void write_manifest(const std::filesystem::path &path, const DatasetMeta &meta);

std::vector<PairSample> read_pairs(const std::filesystem::path &path);
void write_pairs(const std::filesystem::path &path,
                 const std::vector<PairSample> &samples);

std::vector<TokenSentenceRecord> read_token_records(const std::filesystem::path &path);

// Reads a whole file; throws IoError if it cannot be opened.
std::string read_file(const std::filesystem::path &path);
// Writes a whole file, creating parent directories; throws IoError on failure.
void write_file(const std::filesystem::path &path, const std::string &contents);

}  // namespace score

#endif  // SCORE_DATASET_IO_H_
