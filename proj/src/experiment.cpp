#include "profiler/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <unordered_map>

#include "profiler/error.hpp"
#include "profiler/io.hpp"
#include "profiler/parallel.hpp"

namespace profiler::experiment {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

corpus::StratifyBy stratify_for(Task task) {
  switch (task) {
    case Task::kGender: return corpus::StratifyBy::kGender;
    case Task::kAge: return corpus::StratifyBy::kAgeBand;
    case Task::kTraits: return corpus::StratifyBy::kNone;
  }
  return corpus::StratifyBy::kNone;
}

std::string join_traits(const TraitVector& t) {
  std::string out;
  for (size_t k = 0; k < kNumTraits; ++k) out += (k ? "," : "") + io::format_double(t[k]);
  return out;
}

}  // namespace

pipeline::PipelineOptions make_options(Language language,
                                       const std::optional<std::filesystem::path>& rules,
                                       const std::optional<std::filesystem::path>& lexicon,
                                       int n_min, int n_max) {
  pipeline::PipelineOptions opts;
  opts.rules = rules ? normalizer::load_rules(*rules) : normalizer::default_rules(language);
  if (lexicon) opts.lexicon = pos::load_lexicon(*lexicon);
  features::check_order_range(n_min, n_max);
  opts.n_min = n_min;
  opts.n_max = n_max;
  return opts;
}

pipeline::PipelineOptions make_options(const config::ExperimentConfig& c) {
  return make_options(c.train.language, c.rules, c.lexicon, c.n_min, c.n_max);
}

std::string class_of(const Sample& s, Task task) {
  switch (task) {
    case Task::kGender:
      if (!s.labels.gender) throw DataError("sample " + s.id + " has no gender label");
      return std::string(to_string(*s.labels.gender));
    case Task::kAge:
      if (!s.labels.age_band) throw DataError("sample " + s.id + " has no age label");
      return std::string(to_string(*s.labels.age_band));
    case Task::kTraits:
      break;
  }
  throw InvariantError("class_of called for a regression task");
}

std::vector<std::string> canonical_classes(Task task) {
  if (task == Task::kGender) return {"F", "M"};
  if (task == Task::kAge) {
    std::vector<std::string> out;
    for (AgeBand a : kAgeBands) out.emplace_back(to_string(a));
    return out;
  }
  return {};
}

std::string display_class(Task task, const std::string& id) {
  if (task == Task::kGender) return id == "F" ? "Female" : id == "M" ? "Male" : id;
  if (task == Task::kAge) {
    if (auto a = parse_age_band(id)) return std::string(display_name(*a));
  }
  return id;
}

Trained train(std::span<const pipeline::SampleFeatures> feats,
              std::span<const Sample> samples, Task task,
              const features::ScalingPolicy& policy, int min_df,
              const learner::TrainConfig& cfg) {
  if (feats.size() != samples.size())
    throw InvariantError("feature/sample count mismatch");
  Trained t;
  t.vocab = features::Vocabulary::build(pipeline::bags_of(feats), min_df);
  if (t.vocab.empty())
    throw DataError("vocabulary is empty: no gram occurs in min_df=" +
                    std::to_string(min_df) + " training samples");
  const auto x = pipeline::vectorize_all(feats, t.vocab, policy);
  t.model.task = task;
  t.model.vocab_hash = t.vocab.hash();
  t.model.scaling = policy;
  t.model.config = cfg;
  if (task == Task::kTraits) {
    std::vector<TraitVector> targets;
    targets.reserve(samples.size());
    for (const auto& s : samples) {
      if (!s.labels.traits) throw DataError("sample " + s.id + " has no trait labels");
      targets.push_back(*s.labels.traits);
    }
    t.model.model = learner::train_traits(x, targets, cfg);
    return t;
  }
  std::vector<std::string> y;
  y.reserve(samples.size());
  for (const auto& s : samples) y.push_back(class_of(s, task));
  if (task == Task::kGender) t.model.model = learner::train_binary(x, y, "F", "M", cfg);
  else t.model.model = learner::train_ovr(x, y, cfg);
  return t;
}

std::vector<SamplePrediction> predict(const Trained& t,
                                      std::span<const pipeline::SampleFeatures> feats,
                                      std::span<const Sample> samples) {
  if (feats.size() != samples.size())
    throw InvariantError("feature/sample count mismatch");
  model_io::check_vocabulary(t.model, t.vocab);
  const auto x = pipeline::vectorize_all(feats, t.vocab, t.model.scaling);
  std::vector<SamplePrediction> out(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    SamplePrediction& p = out[i];
    p.id = samples[i].id;
    if (const auto* b = std::get_if<learner::LinearModel>(&t.model.model)) {
      const auto r = learner::predict_binary(*b, x[i]);
      p.label = r.label;
      p.margin = r.margin;
    } else if (const auto* o = std::get_if<learner::OneVsRestModel>(&t.model.model)) {
      const auto r = learner::predict_ovr(*o, x[i]);
      p.label = r.label;
      p.margin = r.margin;
    } else {
      p.traits = learner::predict_traits(std::get<learner::TraitRegressor>(t.model.model), x[i]);
      p.label = join_traits(p.traits);
    }
  }
  return out;
}

std::string format_predictions(Task task, std::span<const SamplePrediction> preds) {
  std::string out;
  for (const auto& p : preds) {
    out += p.id + '\t' + p.label;
    if (task != Task::kTraits) out += '\t' + io::format_double(p.margin);
    out += '\n';
  }
  return out;
}

std::vector<SamplePrediction> parse_predictions(std::string_view text, Task task,
                                                std::string_view source) {
  std::vector<SamplePrediction> out;
  std::set<std::string, std::less<>> seen;
  const auto lines = io::split_lines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    if (io::trim(lines[i]).empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(i + 1) + ": ";
    const auto f = io::split(lines[i], "\t");
    if (f.size() < 2 || f.size() > 3 || f[0].empty())
      throw DataError(where + "expected sample_id<TAB>label[<TAB>margin]");
    if (!seen.insert(f[0]).second) throw DataError(where + "duplicate sample id '" + f[0] + "'");
    SamplePrediction p;
    p.id = f[0];
    p.label = f[1];
    try {
      if (f.size() == 3) p.margin = io::parse_double(f[2], "margin");
      if (task == Task::kTraits) {
        const auto parts = io::split(f[1], ",");
        if (parts.size() != kNumTraits) throw DataError("expected five comma-separated traits");
        for (size_t k = 0; k < kNumTraits; ++k) p.traits[k] = io::parse_double(parts[k], "trait");
      } else if (task == Task::kGender) {
        const auto g = parse_gender(f[1]);
        if (!g) throw DataError("unknown gender '" + f[1] + "'");
        p.label = std::string(to_string(*g));
      } else {
        const auto a = parse_age_band(f[1]);
        if (!a) throw DataError("unknown age band '" + f[1] + "'");
        p.label = std::string(to_string(*a));
      }
    } catch (const DataError& e) {
      throw DataError(where + e.what());
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<SamplePrediction> truth_of(std::span<const Sample> samples, Task task) {
  std::vector<SamplePrediction> out;
  out.reserve(samples.size());
  for (const auto& s : samples) {
    SamplePrediction p;
    p.id = s.id;
    if (task == Task::kTraits) {
      if (!s.labels.traits) throw DataError("sample " + s.id + " has no trait labels");
      p.traits = *s.labels.traits;
      p.label = join_traits(p.traits);
    } else {
      p.label = class_of(s, task);
    }
    out.push_back(std::move(p));
  }
  return out;
}

Evaluation evaluate(Task task, std::span<const SamplePrediction> preds,
                    std::span<const SamplePrediction> truth) {
  std::unordered_map<std::string, const SamplePrediction*> by_id;
  for (const auto& p : preds)
    if (!by_id.emplace(p.id, &p).second) throw DataError("duplicate prediction for " + p.id);
  if (truth.empty()) throw DataError("no truth entries to evaluate against");
  Evaluation e;
  if (task == Task::kTraits) {
    std::vector<TraitVector> pv, tv;
    for (const auto& t : truth) {
      auto it = by_id.find(t.id);
      if (it == by_id.end()) throw DataError("no prediction for sample " + t.id);
      pv.push_back(it->second->traits);
      tv.push_back(t.traits);
    }
    e.traits = metrics::trait_rmse(pv, tv);
    return e;
  }
  std::vector<std::string> yt, yp;
  std::set<std::string> present;
  for (const auto& t : truth) {
    auto it = by_id.find(t.id);
    if (it == by_id.end()) throw DataError("no prediction for sample " + t.id);
    yt.push_back(t.label);
    yp.push_back(it->second->label);
    present.insert(t.label);
    present.insert(it->second->label);
  }
  std::vector<std::string> classes;
  for (const auto& c : canonical_classes(task))
    if (present.contains(c)) classes.push_back(c);
  for (const auto& c : classes) e.display.push_back(display_class(task, c));
  e.classes = metrics::report(metrics::confusion(yt, yp, classes));
  return e;
}

std::string format_evaluation(const Evaluation& e) {
  if (e.traits) return metrics::format_traits(*e.traits);
  if (e.classes) return metrics::format_report(*e.classes, e.display);
  return {};
}

std::string format_metrics(const Evaluation& e) {
  std::string out;
  if (e.traits) {
    for (size_t k = 0; k < kNumTraits; ++k)
      out += "rmse_" + std::string(kTraitNames[k]) + " = " + io::format_double(e.traits->rmse[k]) + '\n';
    out += "rmse_mean = " + io::format_double(e.traits->mean) + '\n';
  }
  if (e.classes) {
    out += "accuracy = " + io::format_double(e.classes->accuracy) + '\n';
    for (const auto& s : e.classes->classes) {
      out += "precision_" + s.label + " = " + io::format_double(s.precision) + '\n';
      out += "recall_" + s.label + " = " + io::format_double(s.recall) + '\n';
      out += "f_" + s.label + " = " + io::format_double(s.f_score) + '\n';
    }
  }
  return out;
}

namespace {

struct Fold {
  Evaluation eval;
  features::Vocabulary vocab;
  size_t fallback = 0;
  size_t documents = 0;
};

size_t count_documents(std::span<const Sample> samples) {
  size_t n = 0;
  for (const auto& s : samples) n += s.documents.size();
  return n;
}

Fold fit_and_score(const std::vector<Sample>& train_set, const std::vector<Sample>& test_set,
                   const config::ExperimentConfig& c, const pipeline::PipelineOptions& opts,
                   const features::ScalingPolicy& policy, std::map<std::string, double>* timings,
                   bool parallel) {
  auto t0 = Clock::now();
  const auto ftrain = parallel ? pipeline::extract_all(train_set, opts)
                               : pipeline::extract_all_serial(train_set, opts);
  const auto ftest = parallel ? pipeline::extract_all(test_set, opts)
                              : pipeline::extract_all_serial(test_set, opts);
  if (timings) (*timings)["featurize"] = seconds_since(t0);
  t0 = Clock::now();
  Trained t = train(ftrain, train_set, c.task, policy, c.min_df, c.learner);
  if (timings) (*timings)["train"] = seconds_since(t0);
  t0 = Clock::now();
  const auto preds = predict(t, ftest, test_set);
  Fold f;
  f.eval = evaluate(c.task, preds, truth_of(test_set, c.task));
  if (timings) (*timings)["predict"] = seconds_since(t0);
  f.vocab = std::move(t.vocab);
  f.fallback = pipeline::count_fallback(ftrain) + pipeline::count_fallback(ftest);
  f.documents = count_documents(train_set) + count_documents(test_set);
  return f;
}

Result run_impl(const config::ExperimentConfig& c, bool parallel) {
  const auto start = Clock::now();
  Result r;
  r.config = c;
  r.scaling = config::resolve_scaling(c);
  r.config_hash = io::fnv1a(config::canonical(c));
  r.train_fingerprint = corpus::fingerprint(c.train);
  if (c.test) r.test_fingerprint = corpus::fingerprint(*c.test);
  const auto opts = make_options(c);

  if (!c.grouping_sweep.empty()) {
    r.mode = "sweep";
    auto t0 = Clock::now();
    const auto docs = corpus::load_flat_csv(c.train);
    r.timings["load"] = seconds_since(t0);
    t0 = Clock::now();
    const size_t n = c.grouping_sweep.size();
    r.sweep.resize(n);
    std::vector<Fold> folds(n);
    auto one = [&](size_t i) {
      const int k = c.grouping_sweep[i];
      const auto samples = corpus::group_into_samples(docs, k);
      const auto split = corpus::stratified_split(samples, c.split_fraction, c.split_seed,
                                                  stratify_for(c.task));
      folds[i] = fit_and_score(split.train, split.test, c, opts, r.scaling, nullptr, false);
      r.sweep[i] = {k, samples.size(), split.train.size(), split.test.size(), folds[i].eval};
    };
    if (parallel) {
      ParallelErrors errors;
#pragma omp parallel for schedule(dynamic)
      for (size_t i = 0; i < n; ++i) errors.capture(i, [&] { one(i); });
      errors.rethrow();
    } else {
      for (size_t i = 0; i < n; ++i) one(i);
    }
    for (const auto& f : folds) {
      r.fallback_documents += f.fallback;
      r.documents += f.documents;
    }
    r.timings["sweep"] = seconds_since(t0);
    r.timings["total"] = seconds_since(start);
    return r;
  }

  auto t0 = Clock::now();
  std::vector<Sample> train_set, test_set;
  if (c.test) {
    r.mode = "external";
    train_set = corpus::load_samples(c.train);
    test_set = corpus::load_samples(*c.test);
  } else {
    r.mode = "split";
    auto split = corpus::stratified_split(corpus::load_samples(c.train), c.split_fraction,
                                          c.split_seed, stratify_for(c.task));
    train_set = std::move(split.train);
    test_set = std::move(split.test);
  }
  if (test_set.empty()) throw DataError("test set is empty");
  r.timings["load"] = seconds_since(t0);
  r.train_samples = train_set.size();
  r.test_samples = test_set.size();
  Fold f = fit_and_score(train_set, test_set, c, opts, r.scaling, &r.timings, parallel);
  r.eval = std::move(f.eval);
  r.vocab_hash = f.vocab.hash();
  r.fallback_documents = f.fallback;
  r.documents = f.documents;
  r.timings["total"] = seconds_since(start);
  return r;
}

}  // namespace

Result run(const config::ExperimentConfig& c) { return run_impl(c, true); }
Result run_serial(const config::ExperimentConfig& c) { return run_impl(c, false); }

std::string format_result(const Result& r) {
  std::string out = "# author_profiler result; re-run with: author_profiler run <this file>\n";
  out += config::canonical(r.config);
  out += "[provenance]\n";
  out += "mode = " + r.mode + '\n';
  out += "config_hash = " + io::hex64(r.config_hash) + '\n';
  out += "train_fingerprint = " + io::hex64(r.train_fingerprint) + '\n';
  if (r.test_fingerprint) out += "test_fingerprint = " + io::hex64(*r.test_fingerprint) + '\n';
  out += "split_seed = " + std::to_string(r.config.split_seed) + '\n';
  out += "learner_seed = " + std::to_string(r.config.learner.seed) + '\n';
  out += "scaling = " + std::string(features::to_string(r.scaling.char_scale)) + ',' +
         std::string(features::to_string(r.scaling.pos_scale)) + '\n';
  if (r.vocab_hash) out += "vocab_hash = " + io::hex64(*r.vocab_hash) + '\n';
  if (r.mode != "sweep") {
    out += "train_samples = " + std::to_string(r.train_samples) + '\n';
    out += "test_samples = " + std::to_string(r.test_samples) + '\n';
  }
  out += "[warnings]\n";
  if (r.fallback_documents > 0)
    out += "fallback_tagger = " + std::to_string(r.fallback_documents) + " of " +
           std::to_string(r.documents) +
           " documents had no POS sidecar and were tagged by the fallback tagger\n";
  if (r.eval && r.eval->classes && r.eval->classes->warning)
    out += "zero_denominator = some scores were set to 0\n";
  for (const auto& row : r.sweep)
    if (row.eval.classes && row.eval.classes->warning)
      out += "zero_denominator_k" + std::to_string(row.k) + " = some scores were set to 0\n";
  if (r.eval) {
    out += "[metrics]\n" + format_metrics(*r.eval);
    out += "[report]\n" + format_evaluation(*r.eval);
  }
  if (!r.sweep.empty()) {
    out += "[sweep]\n";
    std::vector<std::string> classes = canonical_classes(r.config.task);
    out += "k\tsamples\ttrain\ttest\tA";
    for (const auto& c : classes)
      out += "\tP_" + c + "\tR_" + c + "\tF_" + c;
    out += '\n';
    for (const auto& row : r.sweep) {
      out += std::to_string(row.k) + '\t' + std::to_string(row.samples) + '\t' +
             std::to_string(row.train) + '\t' + std::to_string(row.test) + '\t' +
             io::format_double(row.eval.classes->accuracy);
      for (const auto& c : classes) {
        const metrics::ClassScores* s = nullptr;
        for (const auto& cs : row.eval.classes->classes)
          if (cs.label == c) s = &cs;
        if (s) out += '\t' + io::format_double(s->precision) + '\t' + io::format_double(s->recall) + '\t' + io::format_double(s->f_score);
        else out += "\t0\t0\t0";
      }
      out += '\n';
    }
  }
  out += "[timings]\n";
  for (const auto& [name, secs] : r.timings) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", secs);
    out += name + "_s = " + buf + '\n';
  }
  return out;
}

}  // namespace profiler::experiment
