#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "profiler/config.hpp"
#include "profiler/corpus.hpp"
#include "profiler/error.hpp"
#include "profiler/experiment.hpp"
#include "profiler/io.hpp"
#include "profiler/model_io.hpp"
#include "profiler/normalizer.hpp"
#include "profiler/pipeline.hpp"
#include "profiler/synthetic.hpp"

namespace fs = std::filesystem;
using namespace profiler;

namespace {

struct CorpusArgs {
  std::string path;
  std::string format = "pan";
  std::string language = "es";
  int grouping_k = 0;
  std::string delimiter = ",";

  void add(CLI::App* app) {
    app->add_option("--corpus", path, "Corpus directory (pan) or file (csv)")->required();
    app->add_option("--format", format, "pan | csv")->capture_default_str();
    app->add_option("--language", language, "es | en | it | nl")->capture_default_str();
    app->add_option("--grouping-k", grouping_k, "Comments per sample for csv corpora");
    app->add_option("--delimiter", delimiter, "csv field delimiter ('tab' for TSV)")
        ->capture_default_str();
  }

  corpus::CorpusSpec spec() const {
    corpus::CorpusSpec s;
    s.format = corpus::parse_format(format);
    s.path = path;
    s.language = parse_language(language);
    if (grouping_k != 0) {
      if (grouping_k < 0) throw ConfigError("--grouping-k must be positive");
      s.grouping_k = grouping_k;
    }
    if (delimiter == "tab" || delimiter == "\\t") s.delimiter = '\t';
    else if (delimiter.size() == 1) s.delimiter = delimiter[0];
    else throw ConfigError("--delimiter must be one character or 'tab'");
    return s;
  }
};

struct PipelineArgs {
  std::string rules;
  std::string lexicon;

  void add(CLI::App* app) {
    app->add_option("--rules", rules, "Normalization rule file (default: built-in rules)");
    app->add_option("--lexicon", lexicon, "Fallback tagger lexicon");
  }

  pipeline::PipelineOptions options(Language lang) const {
    std::optional<fs::path> r, l;
    if (!rules.empty()) r = rules;
    if (!lexicon.empty()) l = lexicon;
    return experiment::make_options(lang, r, l);
  }
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") std::cout << text;
  else io::write_file(path, text);
}

void warn_fallback(std::span<const pipeline::SampleFeatures> feats) {
  if (const size_t n = pipeline::count_fallback(feats))
    std::cerr << "warning: " << n << " documents had no POS sidecar; fallback tagger used\n";
}

int cmd_normalize(const std::string& input, const std::string& output, std::string rewrites,
                  const std::string& language, const std::string& rules_path) {
  const normalizer::RuleSet rules =
      rules_path.empty() ? normalizer::default_rules(language) : normalizer::load_rules(rules_path);
  const std::string text = io::read_file(input);
  std::string out, log = "line\trule\toriginal_begin\toriginal_end\toutput_begin\toutput_end\toriginal\n";
  const auto lines = io::split_lines(text);
  for (size_t i = 0; i < lines.size(); ++i) {
    const auto n = normalizer::normalize(lines[i], rules);
    out += n.text + '\n';
    for (const auto& r : n.rewrites)
      log += std::to_string(i + 1) + '\t' + r.rule + '\t' + std::to_string(r.original_begin) +
             '\t' + std::to_string(r.original_end) + '\t' + std::to_string(r.output_begin) +
             '\t' + std::to_string(r.output_end) + '\t' +
             lines[i].substr(r.original_begin, r.original_end - r.original_begin) + '\n';
  }
  write_output(output, out);
  if (rewrites.empty() && !output.empty() && output != "-") rewrites = output + ".rewrites.tsv";
  if (!rewrites.empty()) io::write_file(rewrites, log);
  return 0;
}

int cmd_tag(const std::string& input, const std::string& output, const PipelineArgs& pa,
            const std::string& language) {
  const auto opts = pa.options(parse_language(language));
  std::vector<std::vector<TaggedToken>> docs;
  for (const auto& line : io::split_lines(io::read_file(input))) {
    const auto n = normalizer::normalize(line, opts.rules);
    docs.push_back(pos::fallback_tag(pos::tokenize(n.text), opts.lexicon));
  }
  write_output(output, pos::format_tagged(docs));
  return 0;
}

int cmd_featurize(const CorpusArgs& ca, const PipelineArgs& pa, int min_df,
                  const std::string& vocab_out, const std::string& output,
                  const std::string& scaling, const std::string& task) {
  const auto spec = ca.spec();
  const auto samples = corpus::load_samples(spec);
  const auto feats = pipeline::extract_all(samples, pa.options(spec.language));
  warn_fallback(feats);
  features::Vocabulary vocab;
  if (fs::exists(vocab_out) && min_df == 0) {
    vocab = features::Vocabulary::load(vocab_out);
  } else {
    vocab = features::Vocabulary::build(pipeline::bags_of(feats), min_df == 0 ? 2 : min_df);
    vocab.save(vocab_out);
  }
  features::ScalingPolicy policy = features::default_policy(spec.language, parse_task(task));
  if (scaling != "auto") {
    const auto p = io::split(scaling, ",");
    if (p.size() != 2) throw ConfigError("--scaling expects 'auto' or '<char>,<pos>'");
    policy = {features::parse_scale(p[0]), features::parse_scale(p[1])};
  }
  const auto x = pipeline::vectorize_all(feats, vocab, policy);
  std::string out;
  for (size_t i = 0; i < samples.size(); ++i) {
    out += samples[i].id;
    for (const auto& [col, v] : x[i].entries) out += '\t' + std::to_string(col) + ':' + io::format_double(v);
    out += '\n';
  }
  write_output(output, out);
  return 0;
}

int cmd_train(const CorpusArgs& ca, const PipelineArgs& pa, const std::string& task_name,
              const std::string& scaling, int min_df, const learner::TrainConfig& cfg,
              const std::string& model_out, const std::string& vocab_out) {
  learner::validate(cfg);
  const auto spec = ca.spec();
  const Task task = parse_task(task_name);
  features::ScalingPolicy policy = features::default_policy(spec.language, task);
  if (scaling != "auto") {
    const auto p = io::split(scaling, ",");
    if (p.size() != 2) throw ConfigError("--scaling expects 'auto' or '<char>,<pos>'");
    policy = {features::parse_scale(p[0]), features::parse_scale(p[1])};
  }
  const auto samples = corpus::load_samples(spec);
  const auto feats = pipeline::extract_all(samples, pa.options(spec.language));
  warn_fallback(feats);
  const auto t = experiment::train(feats, samples, task, policy, min_df, cfg);
  model_io::save_model(model_out, t.model);
  t.vocab.save(vocab_out.empty() ? model_out + ".vocab" : vocab_out);
  return 0;
}

int cmd_predict(const CorpusArgs& ca, const PipelineArgs& pa, const std::string& model_path,
                std::string vocab_path, const std::string& output) {
  const auto spec = ca.spec();
  if (vocab_path.empty()) vocab_path = model_path + ".vocab";
  experiment::Trained t{features::Vocabulary::load(vocab_path), model_io::load_model(model_path)};
  model_io::check_vocabulary(t.model, t.vocab);
  const auto samples = corpus::load_samples(spec);
  const auto feats = pipeline::extract_all(samples, pa.options(spec.language));
  warn_fallback(feats);
  const auto preds = experiment::predict(t, feats, samples);
  write_output(output, experiment::format_predictions(t.model.task, preds));
  return 0;
}

int cmd_evaluate(const std::string& predictions, const std::string& truth,
                 const std::optional<CorpusArgs>& truth_corpus, const std::string& task_name,
                 const std::string& output) {
  const Task task = parse_task(task_name);
  const auto preds =
      experiment::parse_predictions(io::read_file(predictions), task, predictions);
  std::vector<experiment::SamplePrediction> gold;
  if (truth_corpus) {
    gold = experiment::truth_of(corpus::load_samples(truth_corpus->spec()), task);
  } else {
    gold = experiment::parse_predictions(io::read_file(truth), task, truth);
  }
  const auto e = experiment::evaluate(task, preds, gold);
  write_output(output, experiment::format_evaluation(e));
  return 0;
}

int cmd_run(const std::string& config_path, std::string output) {
  const auto cfg = config::load_experiment(config_path);
  const auto r = experiment::run(cfg);
  if (output.empty() && cfg.result) output = cfg.result->string();
  write_output(output, experiment::format_result(r));
  if (r.fallback_documents > 0)
    std::cerr << "warning: fallback tagger used for " << r.fallback_documents << " documents\n";
  return 0;
}

int cmd_synth(const std::string& kind, const std::string& output, size_t samples, size_t docs,
              double marker_rate, std::uint64_t seed) {
  if (kind == "pan") {
    synthetic::PanOptions o;
    o.samples = samples;
    o.documents_per_sample = docs;
    o.marker_rate = marker_rate;
    o.seed = seed;
    corpus::write_pan_truth_dir(output, synthetic::pan_samples(o));
  } else if (kind == "csv") {
    synthetic::FlatOptions o;
    o.documents_per_class = samples;
    o.marker_rate = marker_rate;
    o.seed = seed;
    corpus::write_flat_csv(output, synthetic::flat_documents(o));
  } else {
    throw ConfigError("--kind must be pan or csv");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Author profiling from character and POS n-grams"};
  app.require_subcommand(1);

  std::string in, out, rewrites, language = "es", rules_path;
  auto* norm = app.add_subcommand("normalize", "Rewrite mentions and links to marker tokens");
  norm->add_option("input", in, "Text file, one document per line")->required();
  norm->add_option("output", out, "Output file ('-' for stdout)")->required();
  norm->add_option("--rewrites", rewrites, "Rewrite log (default <output>.rewrites.tsv)");
  norm->add_option("--language", language)->capture_default_str();
  norm->add_option("--rules", rules_path, "Rule file");

  PipelineArgs tag_pa;
  auto* tag = app.add_subcommand("tag", "Tag documents with the fallback tagger");
  tag->add_option("input", in, "Text file, one document per line")->required();
  tag->add_option("output", out, "Tagged-token output ('-' for stdout)")->required();
  tag->add_option("--language", language)->capture_default_str();
  tag_pa.add(tag);

  CorpusArgs ca;
  PipelineArgs pa;
  int min_df = 2;
  std::string vocab_path, model_path, task = "gender", scaling = "auto";

  auto* feat = app.add_subcommand("featurize", "Build a vocabulary and write sparse vectors");
  ca.add(feat);
  pa.add(feat);
  int feat_min_df = 0;
  feat->add_option("--vocab", vocab_path, "Vocabulary file; reused if it exists and --min-df is unset")
      ->required();
  feat->add_option("--min-df", feat_min_df, "Minimum document frequency (default 2)");
  feat->add_option("--task", task)->capture_default_str();
  feat->add_option("--scaling", scaling, "auto | <char>,<pos> with linear|log2")
      ->capture_default_str();
  feat->add_option("--output", out, "Vectors: sample_id then col:value fields");

  learner::TrainConfig cfg;
  auto* train = app.add_subcommand("train", "Train and save a model");
  ca.add(train);
  pa.add(train);
  train->add_option("--task", task)->capture_default_str();
  train->add_option("--scaling", scaling)->capture_default_str();
  train->add_option("--min-df", min_df)->capture_default_str();
  train->add_option("--c", cfg.c_param)->capture_default_str();
  train->add_option("--epochs", cfg.epochs)->capture_default_str();
  train->add_option("--tolerance", cfg.tolerance)->capture_default_str();
  train->add_option("--epsilon", cfg.epsilon)->capture_default_str();
  train->add_option("--seed", cfg.seed)->capture_default_str();
  train->add_option("--model", model_path, "Model output")->required();
  train->add_option("--vocab", vocab_path, "Vocabulary output (default <model>.vocab)");

  auto* predict = app.add_subcommand("predict", "Predict one label per sample");
  ca.add(predict);
  pa.add(predict);
  predict->add_option("--model", model_path)->required();
  predict->add_option("--vocab", vocab_path, "Vocabulary (default <model>.vocab)");
  predict->add_option("--output", out, "Predictions (default stdout)");

  std::string predictions, truth;
  CorpusArgs truth_ca;
  auto* eval = app.add_subcommand("evaluate", "Score predictions against truth");
  eval->add_option("--predictions", predictions)->required();
  auto* truth_opt = eval->add_option("--truth", truth, "Truth in the prediction format");
  auto* truth_dir = eval->add_option("--truth-corpus", truth_ca.path, "Corpus holding the truth");
  truth_opt->excludes(truth_dir);
  eval->add_option("--format", truth_ca.format)->capture_default_str();
  eval->add_option("--language", truth_ca.language)->capture_default_str();
  eval->add_option("--grouping-k", truth_ca.grouping_k);
  eval->add_option("--task", task)->capture_default_str();
  eval->add_option("--output", out);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run an experiment described by a config file");
  run->add_option("config", config_path)->required();
  run->add_option("--output", out, "Result file (default: [output] result, else stdout)");

  std::string kind = "pan";
  size_t samples = 400, docs = 8;
  double marker_rate = 0.5;
  std::uint64_t seed = 2016;
  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus with planted markers");
  synth->add_option("--kind", kind, "pan | csv")->capture_default_str();
  synth->add_option("--output", out)->required();
  synth->add_option("--samples", samples, "Samples (pan) or comments per class (csv)")
      ->capture_default_str();
  synth->add_option("--documents", docs, "Documents per sample (pan)")->capture_default_str();
  synth->add_option("--marker-rate", marker_rate)->capture_default_str();
  synth->add_option("--seed", seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*norm) return cmd_normalize(in, out, rewrites, language, rules_path);
    if (*tag) return cmd_tag(in, out, tag_pa, language);
    if (*feat) return cmd_featurize(ca, pa, feat_min_df, vocab_path, out, scaling, task);
    if (*train) return cmd_train(ca, pa, task, scaling, min_df, cfg, model_path, vocab_path);
    if (*predict) return cmd_predict(ca, pa, model_path, vocab_path, out);
    if (*eval) {
      if (truth.empty() == truth_ca.path.empty())
        throw ConfigError("evaluate needs exactly one of --truth or --truth-corpus");
      std::optional<CorpusArgs> tc;
      if (!truth_ca.path.empty()) tc = truth_ca;
      return cmd_evaluate(predictions, truth, tc, task, out);
    }
    if (*run) return cmd_run(config_path, out);
    if (*synth) return cmd_synth(kind, out, samples, docs, marker_rate, seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 3;
  } catch (const InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 4;
  }
  return 4;
}
