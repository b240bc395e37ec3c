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

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "doctest.h"
#include "score/dataset_io.h"
#include "score/data_model.h"
#include "score/error.h"
#include "test_util.h"

using namespace score;

namespace {

TokenSentenceRecord make_record(const oracle::Rows &tokens,
                                std::vector<MentionAnnotation> mentions,
                                std::string id = "s1") {
  return {std::move(id), testutil::to_matrix(tokens), std::move(mentions)};
}

DatasetMeta meta_for(int r, int dim) {
  DatasetMeta m;
  m.num_classes = r;
  m.embedding_dim = dim;
  for (int h = 0; h < r; ++h) m.relation_names.push_back("r" + std::to_string(h));
  return m;
}

SynthSpec four_cluster_spec() {
  SynthSpec s;
  s.num_classes = 6;
  s.samples_per_cluster = 50;
  s.input_dim = 8;
  s.cluster_count = 4;
  s.label_sets_per_cluster = {{0}, {1}, {2, 3}, {4, 5}};
  s.noise_scale = 0.1;
  s.seed = 42;
  return s;
}

}  // namespace

TEST_CASE("build_pair_vectors averages head and tail tokens") {
  const auto rec = make_record({{1, 1}, {3, 3}, {5, 5}}, {{{0, 1}, {2}, {0}}});
  const auto pairs = build_pair_vectors(rec);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].id == "s1#0");
  CHECK(pairs[0].x == std::vector<double>{2, 2, 5, 5});
  CHECK(pairs[0].labels == std::vector<int>{0});
}

TEST_CASE("single-token mentions concatenate rows exactly") {
  const auto rec = make_record({{0.25, -1.5, 3.0}, {7.0, 0.125, -2.0}}, {{{0}, {1}, {2}}});
  const auto pairs = build_pair_vectors(rec);
  CHECK(pairs[0].x == std::vector<double>{0.25, -1.5, 3.0, 7.0, 0.125, -2.0});
}

TEST_CASE("pair vectors match the mean-and-concat oracle") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  oracle::Rows tokens(5, oracle::Vec(4));
  for (auto &row : tokens)
    for (auto &v : row) v = g(rng);
  const std::vector<int> head{1, 3}, tail{0, 2, 4};
  const auto pairs = build_pair_vectors(make_record(tokens, {{head, tail, {1}}}));
  const auto expected = oracle::pair_vector(tokens, head, tail);
  REQUIRE(pairs[0].x.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) CHECK(std::abs(pairs[0].x[i] - expected[i]) < 1e-12);
}

TEST_CASE("pair construction: one sample per mention, permutation-invariant token sets") {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t t = 2 + rng() % 8;
    oracle::Rows tokens(t, oracle::Vec(3));
    for (auto &row : tokens)
      for (auto &v : row) v = g(rng);
    std::vector<MentionAnnotation> mentions;
    const std::size_t m = 1 + rng() % 4;
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<int> idx(t);
      std::iota(idx.begin(), idx.end(), 0);
      std::shuffle(idx.begin(), idx.end(), rng);
      const std::size_t split = 1 + rng() % (t - 1);
      mentions.push_back({{idx.begin(), idx.begin() + split}, {idx.begin() + split, idx.end()}, {0}});
    }
    auto rec = make_record(tokens, mentions);
    const auto pairs = build_pair_vectors(rec);
    CHECK(pairs.size() == m);
    for (auto &mention : rec.mentions) {
      std::reverse(mention.head.begin(), mention.head.end());
      std::shuffle(mention.tail.begin(), mention.tail.end(), rng);
    }
    const auto permuted = build_pair_vectors(rec);
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < pairs[j].x.size(); ++i)
        CHECK(permuted[j].x[i] == doctest::Approx(pairs[j].x[i]).epsilon(1e-14));
  }
}

TEST_CASE("build_pair_vectors rejects bad token indices") {
  const auto bad_index = make_record({{1.0}, {2.0}}, {{{0}, {1}, {0}}, {{0}, {2}, {0}}}, "sent7");
  try {
    build_pair_vectors(bad_index);
    FAIL("expected ValidationError");
  } catch (const ValidationError &e) {
    const std::string msg = e.what();
    CHECK(msg.find("sent7") != std::string::npos);
    CHECK(msg.find("mention 1") != std::string::npos);
  }
  CHECK_THROWS_AS(build_pair_vectors(make_record({{1.0}}, {{{}, {0}, {0}}})), ValidationError);
  CHECK_THROWS_AS(build_pair_vectors(make_record({{1.0}}, {{{0}, {}, {0}}})), ValidationError);
}

TEST_CASE("validate_dataset reports counts and violations") {
  const auto meta = meta_for(3, 2);
  std::vector<PairSample> ok{{"a", {1, 2}, {0}}, {"b", {3, 4}, {0, 2}}, {"c", {5, 6}, {1}}};
  const auto report = validate_dataset(ok, meta);
  CHECK(report.ok);
  CHECK(report.class_counts == std::vector<std::size_t>{2, 1, 1});
  CHECK(report.multilabel_fraction == doctest::Approx(1.0 / 3.0));

  auto out_of_range = ok;
  out_of_range[1].labels = {3};
  auto r2 = validate_dataset(out_of_range, meta);
  CHECK_FALSE(r2.ok);
  CHECK(r2.violations[0].message.find("label out of range") != std::string::npos);

  auto dup = ok;
  dup[2].id = "a";
  auto r3 = validate_dataset(dup, meta);
  CHECK_FALSE(r3.ok);
  CHECK(r3.violations[0].message == "duplicate id");

  auto misc = ok;
  misc[0].x = {1};
  misc[2].labels.clear();
  auto r4 = validate_dataset(misc, meta);
  CHECK(r4.violations.size() == 2);
}

TEST_CASE("DatasetMeta invariants") {
  auto m = meta_for(2, 4);
  CHECK_NOTHROW(m.validate());
  m.relation_names[1] = "r0";
  CHECK_THROWS_AS(m.validate(), ValidationError);
  m = meta_for(2, 4);
  m.relation_names.pop_back();
  CHECK_THROWS_AS(m.validate(), ValidationError);
  m = meta_for(2, 0);
  CHECK_THROWS_AS(m.validate(), ValidationError);
}

TEST_CASE("zero-noise synthetic samples sit on their cluster centers") {
  SynthSpec s;
  s.num_classes = 3;
  s.samples_per_cluster = 10;
  s.input_dim = 5;
  s.cluster_count = 2;
  s.label_sets_per_cluster = {{0}, {1, 2}};
  s.noise_scale = 0.0;
  s.seed = 1;
  const auto data = generate_synthetic(s);
  CHECK(data.train.size() == 16);
  CHECK(data.test.size() == 4);
  std::map<std::string, std::vector<double>> center;
  for (const auto *split : {&data.train, &data.test}) {
    for (const auto &p : *split) {
      const std::string cluster = p.id.substr(0, p.id.find('_'));
      CHECK(p.labels == (cluster == "c0" ? std::vector<int>{0} : std::vector<int>{1, 2}));
      if (!center.contains(cluster)) center[cluster] = p.x;
      CHECK(p.x == center[cluster]);
      double norm = 0;
      for (double v : p.x) norm += v * v;
      CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("generate_synthetic is a pure function of its SynthSpec") {
  testutil::TempDir dir("synth");
  const auto a = generate_synthetic(four_cluster_spec());
  const auto b = generate_synthetic(four_cluster_spec());
  write_pairs(dir.path() / "a.jsonl", a.train);
  write_pairs(dir.path() / "b.jsonl", b.train);
  CHECK(read_file(dir.path() / "a.jsonl") == read_file(dir.path() / "b.jsonl"));
  CHECK(a.test == b.test);
  auto other = four_cluster_spec();
  other.seed = 43;
  CHECK_FALSE(generate_synthetic(other).train == a.train);
}

TEST_CASE("synthetic per-class counts match a brute-force count") {
  const auto spec = four_cluster_spec();
  const auto data = generate_synthetic(spec);
  // Oracle: every cluster contributes samples_per_cluster samples to each of
  // its classes; one in five lands in test.
  std::vector<std::size_t> expected_train(6, 0), expected_test(6, 0);
  for (const auto &set : spec.label_sets_per_cluster) {
    for (int h : set) {
      for (int i = 0; i < spec.samples_per_cluster; ++i) {
        (i % 5 == 4 ? expected_test : expected_train)[static_cast<std::size_t>(h)]++;
      }
    }
  }
  CHECK(validate_dataset(data.train, data.meta).class_counts == expected_train);
  CHECK(validate_dataset(data.test, data.meta).class_counts == expected_test);
}

TEST_CASE("synthetic spec errors and multilabel_fraction") {
  auto s = four_cluster_spec();
  s.cluster_count = 0;
  s.label_sets_per_cluster.clear();
  CHECK_THROWS_AS(generate_synthetic(s), ConfigError);
  s = four_cluster_spec();
  s.noise_scale = -1;
  CHECK_THROWS_AS(generate_synthetic(s), ConfigError);

  s = four_cluster_spec();
  s.multilabel_fraction = 0.0;
  for (const auto &p : generate_synthetic(s).train) CHECK(p.labels.size() == 1);
}

TEST_CASE("pair and manifest files round-trip exactly") {
  testutil::TempDir dir("io");
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0, 1e3);
  std::vector<PairSample> samples;
  for (int i = 0; i < 20; ++i) {
    PairSample p{"id" + std::to_string(i), {}, {i % 3}};
    for (int d = 0; d < 6; ++d) p.x.push_back(g(rng) * std::pow(10.0, (i % 7) - 3));
    samples.push_back(p);
  }
  write_pairs(dir.path() / "train.jsonl", samples);
  CHECK(read_pairs(dir.path() / "train.jsonl") == samples);

  auto meta = meta_for(3, 6);
  meta.split_sizes["train"] = 20;
  write_manifest(dir.path() / "manifest.json", meta);
  const auto back = read_manifest(dir.path() / "manifest.json");
  CHECK(back.relation_names == meta.relation_names);
  CHECK(back.split_sizes == meta.split_sizes);
}

TEST_CASE("dataset readers report missing files and malformed lines") {
  testutil::TempDir dir("ioerr");
  CHECK_THROWS_AS(read_pairs(dir.path() / "nope.jsonl"), IoError);
  write_file(dir.path() / "bad.jsonl", "{\"id\":\"a\",\"x\":[1],\"labels\":[0]}\n{oops\n");
  try {
    read_pairs(dir.path() / "bad.jsonl");
    FAIL("expected ValidationError");
  } catch (const ValidationError &e) {
    CHECK(std::string(e.what()).find("bad.jsonl:2") != std::string::npos);
  }
}

TEST_CASE("token records feed build_pair_vectors") {
  testutil::TempDir dir("tokens");
  write_file(dir.path() / "tokens.jsonl",
             R"({"sentence_id":"s","hidden_dim":2,"token_embeddings":[[1,1],[3,3],[5,5]],)"
             R"("mentions":[{"head":[0,1],"tail":[2],"relations":[0]}]})"
             "\n");
  const auto records = read_token_records(dir.path() / "tokens.jsonl");
  REQUIRE(records.size() == 1);
  CHECK(build_pair_vectors(records[0])[0].x == std::vector<double>{2, 2, 5, 5});
  write_file(dir.path() / "bad.jsonl",
             R"({"sentence_id":"s","hidden_dim":2,"token_embeddings":[[1]],"mentions":[]})"
             "\n");
  CHECK_THROWS_AS(read_token_records(dir.path() / "bad.jsonl"), ValidationError);
}
