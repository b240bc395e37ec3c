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

#ifndef SCORE_DATA_MODEL_H_
#define SCORE_DATA_MODEL_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "score/matrix.h"

namespace score {

// Label space and dimensions of a dataset, as stored in manifest.json.
struct DatasetMeta {
  int num_classes = 0;
  int embedding_dim = 0;
  std::vector<std::string> relation_names;
  std::map<std::string, std::size_t> split_sizes;

  // Throws ValidationError unless the invariants hold.
  void validate() const;
};

struct MentionAnnotation {
  std::vector<int> head;
  std::vector<int> tail;
  std::vector<int> relations;
};

// Token embeddings of one sentence plus its annotated mention pairs.
struct TokenSentenceRecord {
  std::string sentence_id;
  Matrix token_embeddings;  // T x h
  std::vector<MentionAnnotation> mentions;
};

// One head-tail mention pair: x = [mean(head tokens); mean(tail tokens)].
struct PairSample {
  std::string id;
  std::vector<double> x;
  std::vector<int> labels;  // sorted, distinct

  bool operator==(const PairSample &) const = default;
};

// Binary samples x classes matrix.
class LabelMatrix {
 public:
  LabelMatrix() = default;
  LabelMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  static LabelMatrix from_samples(std::span<const PairSample> samples,
                                  int num_classes);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::uint8_t &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::uint8_t operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }
  std::span<const std::uint8_t> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<std::uint8_t> row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }

  LabelMatrix select_rows(std::span<const std::size_t> rows) const;

  bool operator==(const LabelMatrix &) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> data_;
};

// Builds one PairSample per mention; ids are "<sentence_id>#<j>".
std::vector<PairSample> build_pair_vectors(const TokenSentenceRecord &record);

struct Violation {
  std::size_t record_index;
  std::string id;
  std::string message;
};

struct ValidationReport {
  bool ok = true;
  std::size_t num_records = 0;
  std::vector<Violation> violations;
  std::vector<std::size_t> class_counts;  // n_h
  double multilabel_fraction = 0.0;
};

ValidationReport validate_dataset(std::span<const PairSample> records,
                                  const DatasetMeta &meta);

// Clustered synthetic data for tests and desk-scale experiments.
struct SynthSpec {
  int num_classes = 0;
  int samples_per_cluster = 0;
  int input_dim = 0;
  int cluster_count = 0;
  std::vector<std::vector<int>> label_sets_per_cluster;
  double noise_scale = 0.0;
  // Probability that a sample of a multi-label cluster keeps its full set;
  // otherwise it keeps one label drawn uniformly from the set.
  double multilabel_fraction = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthDataset {
  DatasetMeta meta;
  std::vector<PairSample> train;
  std::vector<PairSample> test;
};

// Every fifth sample of each cluster (index % 5 == 4) goes to test. Samples
// are emitted sample-major so clusters interleave in both splits.
SynthDataset generate_synthetic(const SynthSpec &spec);

}  // namespace score

#endif  // SCORE_DATA_MODEL_H_
