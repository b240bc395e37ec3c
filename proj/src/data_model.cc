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

#include "score/data_model.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_set>

#include "score/error.h"
#include "score/rng.h"

namespace score {

void DatasetMeta::validate() const {
  if (num_classes <= 0) throw ValidationError("num_classes must be positive");
  if (embedding_dim <= 0) throw ValidationError("embedding_dim must be positive");
  if (relation_names.size() != static_cast<std::size_t>(num_classes)) {
    throw ValidationError("relation_names has " +
                          std::to_string(relation_names.size()) +
                          " entries but num_classes is " +
                          std::to_string(num_classes));
  }
  std::set<std::string> seen;
  for (const auto &name : relation_names) {
    if (name.empty()) throw ValidationError("relation_names contains an empty name");
    if (!seen.insert(name).second) {
      throw ValidationError("duplicate relation name '" + name + "'");
    }
  }
}

LabelMatrix LabelMatrix::from_samples(std::span<const PairSample> samples,
                                      int num_classes) {
  LabelMatrix m(samples.size(), static_cast<std::size_t>(num_classes));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (int h : samples[i].labels) {
      if (h < 0 || h >= num_classes) {
        throw ValidationError("sample '" + samples[i].id + "': label " +
                              std::to_string(h) + " out of range [0, " +
                              std::to_string(num_classes) + ")");
      }
      m(i, static_cast<std::size_t>(h)) = 1;
    }
  }
  return m;
}

LabelMatrix LabelMatrix::select_rows(std::span<const std::size_t> rows) const {
  LabelMatrix out(rows.size(), cols_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::ranges::copy(row(rows[i]), out.row(i).begin());
  }
  return out;
}

namespace {

std::vector<double> mean_of_rows(const Matrix &tokens, std::span<const int> idx) {
  std::vector<double> mean(tokens.cols(), 0.0);
  for (int t : idx) {
    const auto r = tokens.row(static_cast<std::size_t>(t));
    for (std::size_t c = 0; c < mean.size(); ++c) mean[c] += r[c];
  }
  const double inv = 1.0 / static_cast<double>(idx.size());
  for (double &v : mean) v *= inv;
  return mean;
}

std::vector<int> sorted_unique(std::vector<int> v) {
  std::ranges::sort(v);
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

std::vector<PairSample> build_pair_vectors(const TokenSentenceRecord &record) {
  const auto &tokens = record.token_embeddings;
  const auto num_tokens = static_cast<long>(tokens.rows());
  if (num_tokens < 1) {
    throw ValidationError("sentence '" + record.sentence_id + "' has no tokens");
  }
  std::vector<PairSample> out;
  out.reserve(record.mentions.size());
  for (std::size_t j = 0; j < record.mentions.size(); ++j) {
    const auto &m = record.mentions[j];
    const std::string where =
        "sentence '" + record.sentence_id + "' mention " + std::to_string(j);
    if (m.head.empty()) throw ValidationError(where + ": empty head token set");
    if (m.tail.empty()) throw ValidationError(where + ": empty tail token set");
    for (const auto *set : {&m.head, &m.tail}) {
      for (int t : *set) {
        if (t < 0 || t >= num_tokens) {
          throw ValidationError(where + ": token index " + std::to_string(t) +
                                " out of range [0, " + std::to_string(num_tokens) +
                                ")");
        }
      }
    }
    PairSample sample;
    sample.id = record.sentence_id + "#" + std::to_string(j);
    sample.x = mean_of_rows(tokens, m.head);
    const auto tail = mean_of_rows(tokens, m.tail);
    sample.x.insert(sample.x.end(), tail.begin(), tail.end());
    sample.labels = sorted_unique(m.relations);
    out.push_back(std::move(sample));
  }
  return out;
}

ValidationReport validate_dataset(std::span<const PairSample> records,
                                  const DatasetMeta &meta) {
  ValidationReport report;
  report.num_records = records.size();
  report.class_counts.assign(static_cast<std::size_t>(std::max(meta.num_classes, 0)), 0);
  std::unordered_set<std::string> ids;
  std::size_t multi = 0;
  auto flag = [&](std::size_t i, std::string msg) {
    report.violations.push_back({i, records[i].id, std::move(msg)});
  };
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto &r = records[i];
    if (!ids.insert(r.id).second) flag(i, "duplicate id");
    if (r.x.size() != static_cast<std::size_t>(meta.embedding_dim)) {
      flag(i, "dimension mismatch: x has " + std::to_string(r.x.size()) +
                  " entries, expected " + std::to_string(meta.embedding_dim));
    }
    if (std::ranges::any_of(r.x, [](double v) { return !std::isfinite(v); })) {
      flag(i, "non-finite value in x");
    }
    if (r.labels.empty()) flag(i, "empty labels");
    std::set<int> distinct;
    for (int h : r.labels) {
      if (h < 0 || h >= meta.num_classes) {
        flag(i, "label out of range: " + std::to_string(h));
        continue;
      }
      if (distinct.insert(h).second) ++report.class_counts[static_cast<std::size_t>(h)];
    }
    if (distinct.size() > 1) ++multi;
  }
  report.multilabel_fraction =
      records.empty() ? 0.0
                      : static_cast<double>(multi) / static_cast<double>(records.size());
  report.ok = report.violations.empty();
  return report;
}

void SynthSpec::validate() const {
  if (cluster_count <= 0) throw ConfigError("synth: cluster_count must be positive");
  if (label_sets_per_cluster.size() != static_cast<std::size_t>(cluster_count)) {
    throw ConfigError("synth: label_sets_per_cluster must have cluster_count entries");
  }
  if (num_classes <= 0) throw ConfigError("synth: num_classes must be positive");
  if (input_dim <= 0) throw ConfigError("synth: input_dim must be positive");
  if (samples_per_cluster <= 0) {
    throw ConfigError("synth: samples_per_cluster must be positive");
  }
  if (!(noise_scale >= 0.0)) throw ConfigError("synth: noise_scale must be >= 0");
  if (!(multilabel_fraction >= 0.0 && multilabel_fraction <= 1.0)) {
    throw ConfigError("synth: multilabel_fraction must lie in [0, 1]");
  }
  for (const auto &set : label_sets_per_cluster) {
    if (set.empty()) throw ConfigError("synth: empty label set");
    for (int h : set) {
      if (h < 0 || h >= num_classes) {
        throw ConfigError("synth: label " + std::to_string(h) + " out of range");
      }
    }
  }
}

SynthDataset generate_synthetic(const SynthSpec &spec) {
  spec.validate();
  Rng rng(spec.seed);
  const auto dim = static_cast<std::size_t>(spec.input_dim);

  // Centers: normalised Gaussian draws are uniform on the unit sphere.
  std::vector<std::vector<double>> centers;
  for (int c = 0; c < spec.cluster_count; ++c) {
    std::vector<double> v(dim);
    double norm = 0.0;
    do {
      for (double &e : v) e = rng.normal();
      norm = 0.0;
      for (double e : v) norm += e * e;
      norm = std::sqrt(norm);
    } while (norm < 1e-12);
    for (double &e : v) e /= norm;
    centers.push_back(std::move(v));
  }

  SynthDataset out;
  out.meta.num_classes = spec.num_classes;
  out.meta.embedding_dim = spec.input_dim;
  for (int h = 0; h < spec.num_classes; ++h) {
    out.meta.relation_names.push_back("rel_" + std::to_string(h));
  }

  for (int i = 0; i < spec.samples_per_cluster; ++i) {
    for (int c = 0; c < spec.cluster_count; ++c) {
      PairSample s;
      s.id = "c" + std::to_string(c) + "_s" + std::to_string(i);
      s.x = centers[static_cast<std::size_t>(c)];
      for (double &e : s.x) e += spec.noise_scale * rng.normal();
      auto labels = sorted_unique(spec.label_sets_per_cluster[static_cast<std::size_t>(c)]);
      if (labels.size() > 1 && spec.multilabel_fraction < 1.0 &&
          rng.uniform() >= spec.multilabel_fraction) {
        labels = {labels[rng.below(labels.size())]};
      }
      s.labels = std::move(labels);
      (i % 5 == 4 ? out.test : out.train).push_back(std::move(s));
    }
  }
  out.meta.split_sizes["train"] = out.train.size();
  out.meta.split_sizes["test"] = out.test.size();
  return out;
}

}  // namespace score
