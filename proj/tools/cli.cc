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

#include "cli.h"

#include <pthread.h>

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "nestrec/corpus.h"
#include "nestrec/crf.h"
#include "nestrec/distant.h"
#include "nestrec/errors.h"
#include "nestrec/io.h"
#include "nestrec/kb.h"
#include "nestrec/linker.h"
#include "nestrec/mentions.h"
#include "nestrec/metrics.h"
#include "nestrec/pipeline.h"
#include "nestrec/review_http.h"
#include "nestrec/review_service.h"

namespace nestrec::cli {

namespace {

using json = nlohmann::json;

// Bad flag values and other usage problems.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  uint64_t seed = 0;
  int threads = 0;

  std::string input;
  std::string output;
  std::string trees;
  std::string corpus_id;
  std::string partition = "unlabeled";

  std::string method;
  std::string inventory;
  std::string kb;
  std::string model;
  std::string links;
  double o_threshold = 0.95;
  bool discard_first = true;

  std::string train;
  std::string dev;
  double l2 = 1.0;
  int max_iters = 200;
  double tol = 1e-5;

  std::vector<std::string> sources;

  std::string task;
  std::string gold;
  std::string pred;
  std::string label;
  std::string tsv;
  std::string json_path;

  std::string kind;
  std::string lemma;
  std::string group = "document";

  std::string host = "127.0.0.1";
  int port = 8080;
  std::string decisions;
};

void RequireFile(const std::string &path, const std::string &what) {
  if (path.empty()) return;
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    throw IoError(what + " not found: " + path);
  }
}

void Emit(const std::string &path, std::string_view text, std::ostream &out) {
  if (path.empty()) {
    out << text;
  } else {
    WriteFileAtomic(path, text);
  }
}

Partition ParsePartitionName(const std::string &name) {
  for (Partition p : {Partition::kTrain, Partition::kDev, Partition::kTest,
                      Partition::kUnlabeled}) {
    if (PartitionName(p) == name) return p;
  }
  throw UsageError("unknown partition '" + name + "'");
}

Corpus Load(const std::string &path, const Options &o,
            Partition partition = Partition::kUnlabeled) {
  return ReadConlluFile(path, {.corpus_id = o.corpus_id, .partition = partition});
}

// Replaces trees with a predicted-parse file when one is given.
void MaybeOverlay(Corpus &corpus, const Options &o) {
  if (o.trees.empty()) return;
  OverlayTrees(corpus, Load(o.trees, o));
}

int CmdConvert(const Options &o, std::ostream &out) {
  RequireFile(o.input, "input");
  Corpus c = Load(o.input, o, ParsePartitionName(o.partition));
  std::vector<Violation> v = ValidateCorpus(c);
  if (!v.empty()) throw ValidationError(v.front().ToString());
  Emit(o.output, SerializeConllu(c), out);
  return kExitOk;
}

int CmdValidate(const Options &o, std::ostream &out) {
  RequireFile(o.input, "input");
  Corpus c = Load(o.input, o);
  std::vector<Violation> v = ValidateCorpus(c);
  for (const Violation &x : v) {
    out << json{{"doc_id", x.doc_id}, {"sent_id", x.sent_id}, {"rule", x.rule},
                {"detail", x.detail}}.dump()
        << "\n";
  }
  return v.empty() ? kExitOk : kExitValidation;
}

int CmdDetect(const Options &o, std::ostream &out) {
  std::optional<DetectMethod> method = ParseDetectMethod(o.method);
  if (!method) throw UsageError("unknown detection method '" + o.method + "'");
  RequireFile(o.input, "input");
  RequireFile(o.trees, "trees");
  if (*method == DetectMethod::kLookup) {
    if (o.inventory.empty()) throw IoError("lookup detection needs --inventory");
    RequireFile(o.inventory, "inventory");
  }
  Corpus c = Load(o.input, o);
  MaybeOverlay(c, o);
  std::optional<LookupInventory> inv;
  if (!o.inventory.empty()) inv = LookupInventory::Parse(ReadFile(o.inventory));
  Corpus pred = DetectCorpus(c, *method, inv ? &*inv : nullptr);
  Emit(o.output, SerializeConllu(pred), out);
  return kExitOk;
}

double DevLabelAccuracy(const CrfModel &model, const Corpus &dev) {
  long correct = 0;
  long total = 0;
  for (const LabeledSequence &seq : CrfTrainingData(dev)) {
    std::vector<int> pred = model.Decode(seq.features);
    for (size_t i = 0; i < pred.size(); ++i) {
      correct += pred[i] == seq.labels[i];
      ++total;
    }
  }
  return total > 0 ? static_cast<double>(correct) / total : 0.0;
}

int CmdTrain(const Options &o, std::ostream &out, std::ostream &err) {
  RequireFile(o.train, "train");
  RequireFile(o.dev, "dev");
  if (o.output.empty()) throw UsageError("train needs --out");
  Corpus train = Load(o.train, o, Partition::kTrain);
  std::vector<LabeledSequence> data = CrfTrainingData(train);
  size_t tokens = 0;
  for (const LabeledSequence &s : data) tokens += s.labels.size();
  if (tokens == 0) throw ValidationError("training data is empty");
  TrainConfig cfg{.l2 = o.l2, .max_iters = o.max_iters, .tol = o.tol,
                  .seed = o.seed, .threads = o.threads};
  TrainReport report;
  CrfModel model = Train(data, cfg, &report);
  for (size_t i = 0; i < report.objective.size(); ++i) {
    char line[96];
    std::snprintf(line, sizeof(line), "iter %zu objective %.6f\n", i + 1,
                  report.objective[i]);
    err << line;
  }
  WriteFileAtomic(o.output, model.Serialize());
  json summary = {{"iterations", report.iterations},
                  {"converged", report.converged},
                  {"objective", report.objective.empty()
                                    ? 0.0
                                    : report.objective.back()},
                  {"features", model.num_features()}};
  if (!o.dev.empty()) {
    summary["dev_label_accuracy"] =
        DevLabelAccuracy(model, Load(o.dev, o, Partition::kDev));
  }
  out << summary.dump() << "\n";
  return kExitOk;
}

int CmdClassify(const Options &o, std::ostream &out) {
  std::optional<ClassifyMethod> method = ParseClassifyMethod(o.method);
  if (!method) throw UsageError("unknown classification method '" + o.method + "'");
  const bool needs_kb =
      *method == ClassifyMethod::kKb || *method == ClassifyMethod::kHybrid;
  const bool needs_crf =
      *method == ClassifyMethod::kCrf || *method == ClassifyMethod::kHybrid;
  RequireFile(o.input, "input");
  RequireFile(o.trees, "trees");
  if (needs_kb && o.kb.empty()) throw IoError("method needs --kb");
  if (needs_crf && o.model.empty()) throw IoError("method needs --model");
  RequireFile(o.kb, "kb");
  RequireFile(o.model, "model");
  if (o.o_threshold < 0 || o.o_threshold > 1) {
    throw UsageError("--o-threshold must lie in [0, 1]");
  }
  Corpus mentions = Load(o.input, o);
  MaybeOverlay(mentions, o);
  std::optional<KnowledgeBase> kb;
  std::optional<CrfModel> crf;
  if (needs_kb) kb = KnowledgeBase::Parse(ReadFile(o.kb));
  if (needs_crf) crf = CrfModel::Parse(ReadFile(o.model));
  ClassifyResources res;
  res.kb = kb ? &*kb : nullptr;
  res.crf = crf ? &*crf : nullptr;
  res.hybrid = {o.o_threshold, o.discard_first};
  res.threads = o.threads;
  Emit(o.output, SerializeConllu(ClassifyCorpus(mentions, *method, res)), out);
  return kExitOk;
}

int CmdBuild(const std::string &what, const Options &o, std::ostream &out) {
  if (what == "links") {
    if (o.sources.empty()) throw UsageError("build-links needs --input");
    for (const std::string &p : o.sources) RequireFile(p, "input");
    std::vector<Corpus> corpora;
    for (const std::string &p : o.sources) corpora.push_back(Load(p, o));
    Emit(o.output, BuildLinkTable(corpora).Serialize(), out);
    return kExitOk;
  }
  RequireFile(o.train, "train");
  Corpus train = Load(o.train, o, Partition::kTrain);
  if (what == "kb") {
    Emit(o.output, BuildKbFromTraining(train).Serialize(), out);
  } else {
    Emit(o.output, BuildLookupInventory(train).Serialize(), out);
  }
  return kExitOk;
}

int CmdLink(const Options &o, std::ostream &out) {
  std::optional<LinkMethod> method = ParseLinkMethod(o.method);
  if (!method) throw UsageError("unknown link method '" + o.method + "'");
  RequireFile(o.input, "input");
  RequireFile(o.links, "links");
  Corpus c = Load(o.input, o);
  LinkTable table = LinkTable::Parse(ReadFile(o.links));
  std::vector<LinkMention> mentions = CollectLinkMentions(c, false);
  std::vector<std::optional<std::string>> answers =
      PredictLinks(mentions, table, *method);
  std::map<std::string, std::optional<std::string>> by_key;
  for (size_t i = 0; i < mentions.size(); ++i) {
    by_key[mentions[i].locator.Key()] = answers[i];
  }
  for (Document &d : c.documents) {
    for (Sentence &s : d.sentences) {
      for (EntitySpan &e : s.entities) {
        auto it = by_key.find(MentionLocator{d.doc_id, s.sent_id, e.start, e.end}.Key());
        if (it != by_key.end()) e.identity = it->second;
      }
    }
  }
  Emit(o.output, SerializeConllu(c), out);
  return kExitOk;
}

int CmdEvaluate(const Options &o, std::ostream &out) {
  RequireFile(o.gold, "gold");
  RequireFile(o.pred, "pred");
  Corpus gold = Load(o.gold, o);
  Corpus pred = Load(o.pred, o);
  const std::string label = o.label.empty() ? "pred" : o.label;
  ReportTable table;
  table.name = o.task;
  if (o.task == "mentions") {
    table.columns = MentionColumns();
    table.Add(label, MentionRow(gold, pred));
  } else if (o.task == "classification") {
    table.columns = ClassificationColumns();
    table.Add(label, ClassificationRow(gold, pred));
  } else if (o.task == "linking") {
    if (gold.NumSentences() != pred.NumSentences()) {
      throw ValidationError("gold and pred sentence counts differ");
    }
    std::vector<LinkMention> g = CollectLinkMentions(gold, true);
    std::map<std::string, std::optional<std::string>> answers;
    for (const LinkMention &m : CollectLinkMentions(pred, false)) {
      answers[m.locator.Key()] = m.identity;
    }
    std::vector<std::optional<std::string>> p;
    for (const LinkMention &m : g) {
      auto it = answers.find(m.locator.Key());
      p.push_back(it == answers.end() ? std::nullopt : it->second);
    }
    table.columns = LinkingColumns();
    table.Add(label, LinkingRow(EvaluateLinking(g, p)));
  } else if (o.task == "agreement") {
    Agreement a = CorpusAgreement(gold, pred);
    table.columns = AgreementColumns();
    table.Add(label, {a.kappa, a.head_accuracy, a.exact_typed.f1,
                      a.exact_untyped.f1, a.fuzzy_typed.f1});
  } else {
    throw UsageError("unknown task '" + o.task + "'");
  }
  Emit(o.tsv, table.ToTsv(), out);
  if (!o.json_path.empty()) WriteFileAtomic(o.json_path, table.ToJson() + "\n");
  return kExitOk;
}

int CmdExport(const Options &o, std::ostream &out) {
  RequireFile(o.input, "input");
  Corpus c = Load(o.input, o);
  if (o.kind == "network") {
    if (o.lemma.empty()) throw UsageError("network export needs --lemma");
    Emit(o.output, BuildTermNetwork(c, o.lemma).ToJson() + "\n", out);
  } else if (o.kind == "treemap") {
    Emit(o.output, BuildTreeMap(c).ToJson() + "\n", out);
  } else if (o.kind == "proportions") {
    ProportionGroup g;
    if (o.group == "document") {
      g = ProportionGroup::kDocument;
    } else if (o.group == "corpus") {
      g = ProportionGroup::kCorpus;
    } else {
      throw UsageError("--group must be document or corpus");
    }
    Emit(o.output, ProportionsToTsv(BuildTypeProportions(c, g)), out);
  } else {
    throw UsageError("unknown export kind '" + o.kind + "'");
  }
  return kExitOk;
}

int CmdServe(const Options &o, std::ostream &out, std::ostream &err) {
  RequireFile(o.input, "corpus");
  RequireFile(o.links, "links");
  if (o.decisions.empty()) throw UsageError("serve needs --decisions");
  if (o.port < 0 || o.port > 65535) throw UsageError("--port out of range");
  ReviewService service(Load(o.input, o), LinkTable::Parse(ReadFile(o.links)),
                        o.decisions);
  ReviewHttpServer server(service);
  const int port = server.Bind(o.host, o.port);
  if (port < 0) {
    throw IoError("cannot bind " + o.host + ":" + std::to_string(o.port));
  }

  // SIGINT and SIGTERM stop the server from a waiting thread.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  sigaddset(&set, SIGUSR1);
  sigset_t old;
  pthread_sigmask(SIG_BLOCK, &set, &old);
  std::thread waiter([&server, set] {
    int sig = 0;
    sigwait(&set, &sig);
    server.Stop();
  });

  out << json{{"host", o.host}, {"port", port}, {"items", service.size()}}.dump()
      << std::endl;
  const bool ok = server.Listen();
  pthread_kill(waiter.native_handle(), SIGUSR1);
  waiter.join();
  pthread_sigmask(SIG_SETMASK, &old, nullptr);
  if (!ok) err << json{{"error", "io"}, {"message", "server failed"}}.dump() << "\n";
  return ok ? kExitOk : kExitIo;
}

void ApplySeedOverride(Options &o) {
  const char *env = std::getenv("NESTREC_SEED");
  if (env == nullptr || *env == '\0') return;
  try {
    size_t used = 0;
    unsigned long long v = std::stoull(env, &used);
    if (used != std::strlen(env)) throw std::invalid_argument("trailing");
    o.seed = v;
  } catch (const std::exception &) {
    throw UsageError(std::string("NESTREC_SEED is not an integer: ") + env);
  }
}

int Fail(std::ostream &err, const char *kind, const std::string &message,
         int code) {
  err << json{{"error", kind}, {"message", message}, {"exit", code}}.dump()
      << "\n";
  return code;
}

}  // namespace

int Run(int argc, const char *const *argv, std::ostream &out,
        std::ostream &err) {
  Options o;
  CLI::App app{"Nested entity recognition and linking over CoNLL-U", "nestrec"};
  app.require_subcommand(1);
  app.add_option("--seed", o.seed, "Random seed (NESTREC_SEED overrides)");
  app.add_option("--threads", o.threads, "Worker threads; 0 = all cores");

  auto input = [&](CLI::App *c, bool required = true) {
    auto *opt = c->add_option("--input,-i", o.input, "CoNLL-U input");
    if (required) opt->required();
    c->add_option("--corpus-id", o.corpus_id, "Corpus id for documents without one");
  };
  auto output = [&](CLI::App *c) {
    c->add_option("--output,-o", o.output, "Output path (default stdout)");
  };

  CLI::App *convert = app.add_subcommand("convert", "Parse, validate and re-serialize a corpus");
  input(convert);
  output(convert);
  convert->add_option("--partition", o.partition, "train|dev|test|unlabeled");

  CLI::App *validate = app.add_subcommand("validate", "List validation violations as JSON lines");
  input(validate);

  CLI::App *detect = app.add_subcommand("detect", "Replace entities with detected mentions");
  input(detect);
  output(detect);
  detect->add_option("--method", o.method, "noun|lookup|parse")->required();
  detect->add_option("--inventory", o.inventory, "Lookup inventory");
  detect->add_option("--trees", o.trees, "Predicted trees (CoNLL-U)");

  CLI::App *train = app.add_subcommand("train", "Train the CRF");
  train->add_option("--train", o.train, "Training corpus")->required();
  train->add_option("--dev", o.dev, "Development corpus");
  train->add_option("--out", o.output, "Model path")->required();
  train->add_option("--l2", o.l2, "L2 penalty");
  train->add_option("--max-iters", o.max_iters, "Iteration cap");
  train->add_option("--tol", o.tol, "Relative objective tolerance");
  train->add_option("--corpus-id", o.corpus_id);

  CLI::App *classify = app.add_subcommand("classify", "Type the spans of a mention file");
  input(classify);
  output(classify);
  classify->add_option("--method", o.method, "majority|kb|crf|crf+kb")->required();
  classify->add_option("--kb", o.kb, "Knowledge base TSV");
  classify->add_option("--model", o.model, "CRF model");
  classify->add_option("--trees", o.trees, "Predicted trees (CoNLL-U)");
  classify->add_option("--o-threshold", o.o_threshold, "Discard threshold on P(O)");
  classify->add_flag("--discard-first,!--kb-first", o.discard_first,
                     "Apply the P(O) discard before the KB");

  CLI::App *build_inv = app.add_subcommand("build-inventory", "Lookup inventory from training spans");
  CLI::App *build_kb = app.add_subcommand("build-kb", "Knowledge base from training heads");
  for (CLI::App *c : {build_inv, build_kb}) {
    c->add_option("--train", o.train, "Training corpus")->required();
    c->add_option("--corpus-id", o.corpus_id);
    output(c);
  }
  CLI::App *build_links = app.add_subcommand("build-links", "Link table from linked corpora");
  build_links->add_option("--input,-i", o.sources, "Linked corpora")->required();
  build_links->add_option("--corpus-id", o.corpus_id);
  output(build_links);

  CLI::App *link = app.add_subcommand("link", "Write predicted identities into named mentions");
  input(link);
  output(link);
  link->add_option("--links", o.links, "Link table")->required();
  link->add_option("--method", o.method, "exact|head|cascade")->default_val("cascade");

  CLI::App *evaluate = app.add_subcommand("evaluate", "Score predictions against gold");
  evaluate->add_option("--task", o.task, "mentions|classification|linking|agreement")->required();
  evaluate->add_option("--gold", o.gold, "Gold corpus")->required();
  evaluate->add_option("--pred", o.pred, "Predicted corpus")->required();
  evaluate->add_option("--label", o.label, "Row label");
  evaluate->add_option("--tsv", o.tsv, "TSV report path (default stdout)");
  evaluate->add_option("--json", o.json_path, "JSON report path");
  evaluate->add_option("--corpus-id", o.corpus_id);

  CLI::App *exp = app.add_subcommand("export", "Distant-reading views");
  input(exp);
  output(exp);
  exp->add_option("--kind", o.kind, "network|treemap|proportions")->required();
  exp->add_option("--lemma", o.lemma, "Focus lemma for network");
  exp->add_option("--group", o.group, "document|corpus for proportions");

  CLI::App *serve = app.add_subcommand("serve", "Run the link review service");
  serve->add_option("--corpus", o.input, "Corpus to review")->required();
  serve->add_option("--links", o.links, "Link table")->required();
  serve->add_option("--decisions", o.decisions, "Decision log (JSONL)")->required();
  serve->add_option("--port", o.port, "Port; 0 picks a free one");
  serve->add_option("--host", o.host, "Bind address");
  serve->add_option("--corpus-id", o.corpus_id);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    return Fail(err, "usage", e.what(), kExitValidation);
  }

  try {
    ApplySeedOverride(o);
    if (*convert) return CmdConvert(o, out);
    if (*validate) return CmdValidate(o, out);
    if (*detect) return CmdDetect(o, out);
    if (*train) return CmdTrain(o, out, err);
    if (*classify) return CmdClassify(o, out);
    if (*build_inv) return CmdBuild("inventory", o, out);
    if (*build_kb) return CmdBuild("kb", o, out);
    if (*build_links) return CmdBuild("links", o, out);
    if (*link) return CmdLink(o, out);
    if (*evaluate) return CmdEvaluate(o, out);
    if (*exp) return CmdExport(o, out);
    if (*serve) return CmdServe(o, out, err);
  } catch (const IoError &e) {
    return Fail(err, "io", e.what(), kExitIo);
  } catch (const Error &e) {
    return Fail(err, "validation", e.what(), kExitValidation);
  } catch (const std::invalid_argument &e) {
    return Fail(err, "validation", e.what(), kExitValidation);
  }
  return kExitValidation;
}

}  // namespace nestrec::cli
