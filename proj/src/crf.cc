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

#include "nestrec/crf.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <thread>

#include "nestrec/io.h"
#include "nestrec/lbfgs.h"

namespace nestrec {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Gradient work is split into this many contiguous chunks regardless of the
// thread count, and chunk results are summed in chunk order.
constexpr size_t kGradientChunks = 8;

double LogSumExp(const double *values, int n) {
  double max = kNegInf;
  for (int i = 0; i < n; ++i) max = std::max(max, values[i]);
  if (max == kNegInf) return kNegInf;
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += std::exp(values[i] - max);
  return max + std::log(sum);
}

// Byte offsets of each code point start, plus the end offset.
std::vector<size_t> CodePointOffsets(std::string_view s) {
  std::vector<size_t> offsets;
  for (size_t i = 0; i < s.size(); ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) offsets.push_back(i);
  }
  offsets.push_back(s.size());
  return offsets;
}

std::string DescendantBin(int size) {
  if (size <= 3) return std::to_string(size);
  if (size <= 5) return "4-5";
  if (size <= 10) return "6-10";
  return "11+";
}

std::string SentenceLengthBin(int n) {
  if (n <= 5) return "1-5";
  if (n <= 10) return "6-10";
  if (n <= 20) return "11-20";
  if (n <= 40) return "21-40";
  return "41+";
}

struct Lattice {
  ScoreTable alpha;
  ScoreTable beta;
  double log_z = 0;
};

Lattice ForwardBackward(const CrfModel &model, const ScoreTable &emit) {
  const int n = static_cast<int>(emit.size());
  const int labels = model.num_labels();
  Lattice lat;
  lat.alpha.assign(n, std::vector<double>(labels, 0.0));
  lat.beta.assign(n, std::vector<double>(labels, 0.0));
  if (n == 0) return lat;
  std::vector<double> buf(labels);
  lat.alpha[0] = emit[0];
  for (int t = 1; t < n; ++t) {
    for (int c = 0; c < labels; ++c) {
      for (int p = 0; p < labels; ++p) {
        buf[p] = lat.alpha[t - 1][p] + model.transition(p, c);
      }
      lat.alpha[t][c] = LogSumExp(buf.data(), labels) + emit[t][c];
    }
  }
  for (int t = n - 2; t >= 0; --t) {
    for (int p = 0; p < labels; ++p) {
      for (int c = 0; c < labels; ++c) {
        buf[c] = model.transition(p, c) + emit[t + 1][c] + lat.beta[t + 1][c];
      }
      lat.beta[t][p] = LogSumExp(buf.data(), labels);
    }
  }
  lat.log_z = LogSumExp(lat.alpha[n - 1].data(), labels);
  return lat;
}

// Adds the gradient of log p(labels | seq) into `grad`; returns log p.
double AccumulateExample(const CrfModel &model, const EncodedExample &ex,
                         std::vector<double> &grad) {
  const int n = static_cast<int>(ex.features.size());
  if (n == 0) return 0.0;
  const int labels = model.num_labels();
  const size_t tcount = model.TransitionCount();
  ScoreTable emit = model.Emissions(ex.features);
  Lattice lat = ForwardBackward(model, emit);
  double log_p = model.Score(ex.features, ex.labels) - lat.log_z;

  for (int t = 0; t < n; ++t) {
    const int gold = ex.labels[t];
    for (int y = 0; y < labels; ++y) {
      double marginal = std::exp(lat.alpha[t][y] + lat.beta[t][y] - lat.log_z);
      double delta = (y == gold ? 1.0 : 0.0) - marginal;
      for (int f : ex.features[t]) {
        grad[tcount + static_cast<size_t>(f) * labels + y] += delta;
      }
    }
    if (t == 0) continue;
    grad[ex.labels[t - 1] * labels + gold] += 1.0;
    for (int p = 0; p < labels; ++p) {
      for (int c = 0; c < labels; ++c) {
        double pair = std::exp(lat.alpha[t - 1][p] + model.transition(p, c) +
                               emit[t][c] + lat.beta[t][c] - lat.log_z);
        grad[p * labels + c] -= pair;
      }
    }
  }
  return log_p;
}

}  // namespace

// ---------------------------------------------------------------------------
// Labels and features

std::string_view LabelName(int label) {
  if (label == kOutsideLabel) return "O";
  return EntityTypeName(TypeOfLabel(label));
}

std::optional<int> ParseLabel(std::string_view name) {
  if (name == "O") return kOutsideLabel;
  if (auto type = ParseEntityType(name)) return LabelOf(*type);
  return std::nullopt;
}

FeatureVector ExtractFeatures(const Sentence &sentence, int index,
                              const TreeInfo &tree) {
  const int n = sentence.size();
  const Token &tok = sentence.token(index);
  FeatureVector f;
  f.reserve(20);

  std::vector<size_t> cp = CodePointOffsets(tok.form);
  const size_t chars = cp.size() - 1;
  const std::string_view form = tok.form;
  for (size_t k : {size_t{2}, size_t{3}}) {
    if (chars < k) continue;
    std::string ks = std::to_string(k);
    f.push_back("pref" + ks + "=" + std::string(form.substr(0, cp[k])));
    f.push_back("suf" + ks + "=" +
                std::string(form.substr(cp[chars - k])));
  }

  f.push_back("pos=" + tok.upos);
  f.push_back("dep=" + tok.deprel);
  if (tok.head == 0) {
    f.push_back("parent_lemma=__ROOT__");
    f.push_back("parent_pos=__ROOT__");
  } else {
    const Token &parent = sentence.token(tok.head);
    f.push_back("parent_lemma=" + parent.lemma);
    f.push_back("parent_pos=" + parent.upos);
  }

  f.push_back("desc_bin=" + DescendantBin(tree.subtree_size[index]));
  int decile = std::min(9, (10 * index) / n);
  f.push_back("pos_pct_bin=" + std::to_string(decile));
  f.push_back("sentlen_bin=" + SentenceLengthBin(n));

  if (index > 1) {
    const Token &prev = sentence.token(index - 1);
    f.push_back("prev_form=" + prev.form);
    f.push_back("prev_pos=" + prev.upos);
    f.push_back("prev_dep=" + prev.deprel);
  } else {
    f.push_back("prev_form=__BOS__");
    f.push_back("prev_pos=__BOS__");
    f.push_back("prev_dep=__BOS__");
  }
  if (index < n) {
    const Token &next = sentence.token(index + 1);
    f.push_back("next_form=" + next.form);
    f.push_back("next_pos=" + next.upos);
    f.push_back("next_dep=" + next.deprel);
  } else {
    f.push_back("next_form=__EOS__");
    f.push_back("next_pos=__EOS__");
    f.push_back("next_dep=__EOS__");
  }
  f.push_back("bias");
  return f;
}

std::vector<FeatureVector> ExtractSentenceFeatures(const Sentence &sentence) {
  TreeInfo tree = AnalyzeTree(sentence);
  std::vector<FeatureVector> out;
  out.reserve(sentence.tokens.size());
  for (int i = 1; i <= sentence.size(); ++i) {
    out.push_back(ExtractFeatures(sentence, i, tree));
  }
  return out;
}

std::vector<int> GoldLabels(const Sentence &sentence) {
  std::vector<int> labels(sentence.tokens.size(), kOutsideLabel);
  std::vector<int> best_length(sentence.tokens.size(), 0);
  for (const EntitySpan &span : sentence.entities) {
    if (span.head < 1 || span.head > sentence.size()) continue;
    int &best = best_length[span.head - 1];
    if (span.length() > best) {
      best = span.length();
      labels[span.head - 1] = LabelOf(span.etype);
    }
  }
  return labels;
}

// ---------------------------------------------------------------------------
// CrfModel

CrfModel::CrfModel(int num_labels) : num_labels_(num_labels) {
  if (num_labels < 1 || num_labels > kNumLabels) {
    throw std::invalid_argument("label count must be in 1.." +
                                std::to_string(kNumLabels));
  }
  params_.assign(TransitionCount(), 0.0);
}

int CrfModel::FeatureId(std::string_view feature) const {
  auto it = feature_ids_.find(std::string(feature));
  return it == feature_ids_.end() ? -1 : it->second;
}

int CrfModel::AddFeature(std::string_view feature) {
  auto [it, inserted] = feature_ids_.emplace(
      std::string(feature), static_cast<int>(feature_names_.size()));
  if (inserted) {
    feature_names_.emplace_back(feature);
    params_.resize(params_.size() + num_labels_, 0.0);
  }
  return it->second;
}

EncodedSequence CrfModel::Encode(
    std::span<const FeatureVector> features) const {
  EncodedSequence seq(features.size());
  for (size_t t = 0; t < features.size(); ++t) {
    for (const std::string &name : features[t]) {
      int id = FeatureId(name);
      if (id >= 0) seq[t].push_back(id);
    }
  }
  return seq;
}

ScoreTable CrfModel::Emissions(const EncodedSequence &seq) const {
  ScoreTable emit(seq.size(), std::vector<double>(num_labels_, 0.0));
  const double *w = params_.data() + TransitionCount();
  for (size_t t = 0; t < seq.size(); ++t) {
    for (int f : seq[t]) {
      const double *row = w + static_cast<size_t>(f) * num_labels_;
      for (int y = 0; y < num_labels_; ++y) emit[t][y] += row[y];
    }
  }
  return emit;
}

std::vector<int> CrfModel::Decode(
    std::span<const FeatureVector> features) const {
  return Decode(Encode(features));
}

std::vector<int> CrfModel::Decode(const EncodedSequence &seq) const {
  const int n = static_cast<int>(seq.size());
  if (n == 0) return {};
  ScoreTable emit = Emissions(seq);
  ScoreTable best(n, std::vector<double>(num_labels_));
  std::vector<std::vector<int>> back(n, std::vector<int>(num_labels_, 0));
  best[0] = emit[0];
  for (int t = 1; t < n; ++t) {
    for (int c = 0; c < num_labels_; ++c) {
      int arg = 0;
      double top = best[t - 1][0] + transition(0, c);
      for (int p = 1; p < num_labels_; ++p) {
        double s = best[t - 1][p] + transition(p, c);
        if (s > top) {
          top = s;
          arg = p;
        }
      }
      best[t][c] = top + emit[t][c];
      back[t][c] = arg;
    }
  }
  std::vector<int> path(n);
  int arg = 0;
  for (int y = 1; y < num_labels_; ++y) {
    if (best[n - 1][y] > best[n - 1][arg]) arg = y;
  }
  path[n - 1] = arg;
  for (int t = n - 1; t > 0; --t) path[t - 1] = back[t][path[t]];
  return path;
}

ScoreTable CrfModel::Marginals(std::span<const FeatureVector> features) const {
  return Marginals(Encode(features));
}

ScoreTable CrfModel::Marginals(const EncodedSequence &seq) const {
  ScoreTable emit = Emissions(seq);
  Lattice lat = ForwardBackward(*this, emit);
  ScoreTable out(seq.size(), std::vector<double>(num_labels_));
  for (size_t t = 0; t < seq.size(); ++t) {
    for (int y = 0; y < num_labels_; ++y) {
      out[t][y] = std::exp(lat.alpha[t][y] + lat.beta[t][y] - lat.log_z);
    }
  }
  return out;
}

double CrfModel::Score(const EncodedSequence &seq,
                       std::span<const int> labels) const {
  double score = 0;
  const double *w = params_.data() + TransitionCount();
  for (size_t t = 0; t < seq.size(); ++t) {
    for (int f : seq[t]) {
      score += w[static_cast<size_t>(f) * num_labels_ + labels[t]];
    }
    if (t > 0) score += transition(labels[t - 1], labels[t]);
  }
  return score;
}

double CrfModel::LogPartition(const EncodedSequence &seq) const {
  return ForwardBackward(*this, Emissions(seq)).log_z;
}

std::string CrfModel::Serialize() const {
  char buf[64];
  std::string out = "nestrec-crf v1\n";
  std::snprintf(buf, sizeof(buf), "%.17g", config_.l2);
  out += "# labels=" + std::to_string(num_labels_) + " l2=" + buf +
         " max_iters=" + std::to_string(config_.max_iters);
  std::snprintf(buf, sizeof(buf), "%.17g", config_.tol);
  out += std::string(" tol=") + buf + " seed=" + std::to_string(config_.seed) +
         "\n";
  for (int p = 0; p < num_labels_; ++p) {
    for (int c = 0; c < num_labels_; ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", transition(p, c));
      out += "T ";
      out += LabelName(p);
      out += ' ';
      out += LabelName(c);
      out += ' ';
      out += buf;
      out += '\n';
    }
  }
  for (int f = 0; f < num_features(); ++f) {
    for (int y = 0; y < num_labels_; ++y) {
      double w = weight(f, y);
      if (w == 0.0) continue;
      std::snprintf(buf, sizeof(buf), "%.17g", w);
      out += "F ";
      out += LabelName(y);
      out += ' ';
      out += buf;
      out += ' ';
      out += feature_names_[f];
      out += '\n';
    }
  }
  return out;
}

CrfModel CrfModel::Parse(std::string_view text) {
  std::vector<std::string_view> lines = SplitLines(text);
  if (lines.empty() || lines[0] != "nestrec-crf v1") {
    throw ParseError(1, "missing 'nestrec-crf v1' header");
  }
  TrainConfig config;
  int labels = kNumLabels;
  size_t i = 1;
  for (; i < lines.size() && !lines[i].empty() && lines[i][0] == '#'; ++i) {
    for (std::string_view item : Split(lines[i].substr(1), ' ')) {
      size_t eq = item.find('=');
      if (eq == std::string_view::npos) continue;
      std::string key(item.substr(0, eq));
      std::string value(item.substr(eq + 1));
      if (key == "labels") labels = std::atoi(value.c_str());
      if (key == "l2") config.l2 = std::strtod(value.c_str(), nullptr);
      if (key == "max_iters") config.max_iters = std::atoi(value.c_str());
      if (key == "tol") config.tol = std::strtod(value.c_str(), nullptr);
      if (key == "seed") config.seed = std::strtoull(value.c_str(), nullptr, 10);
    }
  }
  CrfModel model(labels);
  model.config_ = config;
  auto label_at = [&](std::string_view name, int line) {
    std::optional<int> label = ParseLabel(name);
    if (!label || *label >= labels) {
      throw ParseError(line, "unknown label '" + std::string(name) + "'");
    }
    return *label;
  };
  for (; i < lines.size(); ++i) {
    const int line_no = static_cast<int>(i) + 1;
    std::string_view line = lines[i];
    if (line.empty()) continue;
    if (line.size() < 2 || line[1] != ' ') {
      throw ParseError(line_no, "malformed model line");
    }
    std::string_view rest = line.substr(2);
    size_t sp1 = rest.find(' ');
    size_t sp2 = sp1 == std::string_view::npos ? sp1 : rest.find(' ', sp1 + 1);
    if (sp2 == std::string_view::npos) {
      throw ParseError(line_no, "malformed model line");
    }
    if (line[0] == 'T') {
      int p = label_at(rest.substr(0, sp1), line_no);
      int c = label_at(rest.substr(sp1 + 1, sp2 - sp1 - 1), line_no);
      model.set_transition(p, c,
                           std::strtod(std::string(rest.substr(sp2 + 1)).c_str(),
                                       nullptr));
    } else if (line[0] == 'F') {
      int y = label_at(rest.substr(0, sp1), line_no);
      double w = std::strtod(
          std::string(rest.substr(sp1 + 1, sp2 - sp1 - 1)).c_str(), nullptr);
      int f = model.AddFeature(rest.substr(sp2 + 1));
      model.set_weight(f, y, w);
    } else {
      throw ParseError(line_no, "unknown record type");
    }
  }
  return model;
}

// ---------------------------------------------------------------------------
// Objective and training

ObjectiveValue LogLikelihoodAndGradient(const CrfModel &model,
                                        std::span<const EncodedExample> data,
                                        double l2, int threads) {
  const size_t nparams = model.parameters().size();
  const size_t chunks = std::max<size_t>(1, std::min(kGradientChunks,
                                                     data.size()));
  std::vector<double> values(chunks, 0.0);
  std::vector<std::vector<double>> grads(chunks,
                                         std::vector<double>(nparams, 0.0));
  auto run_chunk = [&](size_t c) {
    size_t begin = data.size() * c / chunks;
    size_t end = data.size() * (c + 1) / chunks;
    for (size_t i = begin; i < end; ++i) {
      values[c] += AccumulateExample(model, data[i], grads[c]);
    }
  };
  int workers = threads > 0 ? threads
                            : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, static_cast<int>(chunks));
  if (workers == 1) {
    for (size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (size_t c = w; c < chunks; c += workers) run_chunk(c);
      });
    }
    for (std::thread &t : pool) t.join();
  }

  ObjectiveValue out;
  out.gradient.assign(nparams, 0.0);
  for (size_t c = 0; c < chunks; ++c) {
    out.value += values[c];
    for (size_t k = 0; k < nparams; ++k) out.gradient[k] += grads[c][k];
  }
  std::span<const double> w = model.parameters();
  double norm = 0;
  for (size_t k = 0; k < nparams; ++k) {
    norm += w[k] * w[k];
    out.gradient[k] -= l2 * w[k];
  }
  out.value -= 0.5 * l2 * norm;
  if (!std::isfinite(out.value)) {
    throw NumericalError("non-finite CRF objective");
  }
  return out;
}

CrfModel Train(std::span<const LabeledSequence> data, const TrainConfig &cfg,
               TrainReport *report) {
  if (data.empty()) throw std::invalid_argument("no training sequences");
  CrfModel model;
  model.set_config(cfg);
  for (const LabeledSequence &seq : data) {
    if (seq.features.size() != seq.labels.size()) {
      throw std::invalid_argument("feature/label length mismatch");
    }
    for (const FeatureVector &fv : seq.features) {
      for (const std::string &f : fv) model.AddFeature(f);
    }
  }
  std::vector<EncodedExample> encoded;
  encoded.reserve(data.size());
  for (const LabeledSequence &seq : data) {
    encoded.push_back({model.Encode(seq.features), seq.labels});
  }

  std::vector<double> x(model.parameters().begin(), model.parameters().end());
  auto evaluate = [&](const std::vector<double> &params,
                      std::vector<double> &grad) {
    std::copy(params.begin(), params.end(),
              model.mutable_parameters().begin());
    ObjectiveValue v =
        LogLikelihoodAndGradient(model, encoded, cfg.l2, cfg.threads);
    grad = std::move(v.gradient);
    return v.value;
  };
  LbfgsOptions options;
  options.max_iters = cfg.max_iters;
  options.tol = cfg.tol;
  LbfgsResult result = MaximizeLbfgs(x, evaluate, options);
  std::copy(x.begin(), x.end(), model.mutable_parameters().begin());
  if (report != nullptr) {
    report->objective = std::move(result.objective);
    report->iterations = result.iterations;
    report->converged = result.converged;
  }
  return model;
}

}  // namespace nestrec
