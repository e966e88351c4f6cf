// Copyright 2026 The Nestrec Authors.
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

// Linear-chain conditional random field over per-token labels. Every token
// of a sentence is labeled; entity heads carry their entity type and all
// other tokens carry O.
//
// Inference runs in log space. The model scores a label sequence y for
// token features x as
//
//   score(x, y) = sum_t sum_{f in x_t} w[f, y_t] + sum_{t>0} T[y_{t-1}, y_t]
//
// and p(y | x) = exp(score(x, y)) / Z(x).

#ifndef NESTREC_CRF_H_
#define NESTREC_CRF_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nestrec/corpus.h"

namespace nestrec {

// Label 0 is O; labels 1..10 are the entity types in alphabetical order.
inline constexpr int kNumLabels = kNumEntityTypes + 1;
inline constexpr int kOutsideLabel = 0;

inline int LabelOf(EntityType type) { return static_cast<int>(type) + 1; }
inline EntityType TypeOfLabel(int label) {
  return static_cast<EntityType>(label - 1);
}
std::string_view LabelName(int label);
std::optional<int> ParseLabel(std::string_view name);

using FeatureVector = std::vector<std::string>;

// Features of token `index` (1-based). `tree` must come from AnalyzeTree on
// the same sentence.
FeatureVector ExtractFeatures(const Sentence &sentence, int index,
                              const TreeInfo &tree);
std::vector<FeatureVector> ExtractSentenceFeatures(const Sentence &sentence);

// Per-token labels (index 0 = token 1): the type of the span headed by the
// token, preferring the outermost span when several share a head.
std::vector<int> GoldLabels(const Sentence &sentence);

struct LabeledSequence {
  std::vector<FeatureVector> features;
  std::vector<int> labels;
};

struct TrainConfig {
  double l2 = 1.0;
  int max_iters = 200;
  double tol = 1e-5;
  uint64_t seed = 0;
  // Worker threads for gradient computation; 0 = hardware concurrency.
  // Results do not depend on this value.
  int threads = 0;
};

// A sentence's features mapped to model feature ids (unknown ids dropped).
using EncodedSequence = std::vector<std::vector<int>>;

// Row-major [position][label] table.
using ScoreTable = std::vector<std::vector<double>>;

class CrfModel {
 public:
  explicit CrfModel(int num_labels = kNumLabels);

  int num_labels() const { return num_labels_; }
  int num_features() const { return static_cast<int>(feature_names_.size()); }

  // -1 when unknown.
  int FeatureId(std::string_view feature) const;
  int AddFeature(std::string_view feature);
  const std::string &FeatureName(int id) const { return feature_names_[id]; }

  double transition(int prev, int cur) const {
    return params_[prev * num_labels_ + cur];
  }
  void set_transition(int prev, int cur, double w) {
    params_[prev * num_labels_ + cur] = w;
  }
  double weight(int feature, int label) const {
    return params_[TransitionCount() + feature * num_labels_ + label];
  }
  void set_weight(int feature, int label, double w) {
    params_[TransitionCount() + feature * num_labels_ + label] = w;
  }

  // Transitions first, then feature weights by feature id.
  std::span<const double> parameters() const { return params_; }
  std::span<double> mutable_parameters() { return params_; }
  size_t TransitionCount() const {
    return static_cast<size_t>(num_labels_) * num_labels_;
  }

  EncodedSequence Encode(std::span<const FeatureVector> features) const;
  ScoreTable Emissions(const EncodedSequence &seq) const;

  // Viterbi path; ties go to the lower label index.
  std::vector<int> Decode(std::span<const FeatureVector> features) const;
  std::vector<int> Decode(const EncodedSequence &seq) const;
  // Posterior label distribution per token.
  ScoreTable Marginals(std::span<const FeatureVector> features) const;
  ScoreTable Marginals(const EncodedSequence &seq) const;
  // Unnormalized score of a label sequence.
  double Score(const EncodedSequence &seq, std::span<const int> labels) const;
  double LogPartition(const EncodedSequence &seq) const;

  // Config echo, written to the model file.
  const TrainConfig &config() const { return config_; }
  void set_config(const TrainConfig &config) { config_ = config; }

  // "nestrec-crf v1" text format. Parse throws ParseError.
  std::string Serialize() const;
  static CrfModel Parse(std::string_view text);

 private:
  int num_labels_;
  std::vector<std::string> feature_names_;
  std::unordered_map<std::string, int> feature_ids_;
  std::vector<double> params_;
  TrainConfig config_;
};

// Sum of log p(y|x) over `data` minus l2 * |w|^2 / 2, with its exact
// gradient (same layout as CrfModel::parameters()). Throws NumericalError
// on a non-finite result.
struct ObjectiveValue {
  double value = 0;
  std::vector<double> gradient;
};

struct EncodedExample {
  EncodedSequence features;
  std::vector<int> labels;
};

ObjectiveValue LogLikelihoodAndGradient(const CrfModel &model,
                                        std::span<const EncodedExample> data,
                                        double l2, int threads = 1);

struct TrainReport {
  std::vector<double> objective;  // per accepted iteration
  int iterations = 0;
  bool converged = false;
};

// Builds the feature vocabulary from `data` (first-seen order) and fits the
// weights with L-BFGS. Throws std::invalid_argument on empty data.
CrfModel Train(std::span<const LabeledSequence> data, const TrainConfig &cfg,
               TrainReport *report = nullptr);

}  // namespace nestrec

#endif  // NESTREC_CRF_H_
