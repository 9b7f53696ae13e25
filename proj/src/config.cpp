#include "profiler/config.hpp"

#include <functional>
#include <map>

#include "profiler/error.hpp"
#include "profiler/io.hpp"

namespace profiler::config {

namespace fs = std::filesystem;

std::vector<IniSection> parse_ini(std::string_view text, std::string_view source,
                                  const std::set<std::string, std::less<>>& known) {
  std::vector<IniSection> sections;
  const auto lines = io::split_lines(text);
  bool skipping = false;
  IniSection* current = nullptr;
  for (size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = io::trim(lines[i]);
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    const std::string where = std::string(source) + ":" + std::to_string(i + 1);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": malformed section header");
      std::string name(io::trim(line.substr(1, line.size() - 2)));
      skipping = !known.contains(name);
      current = nullptr;
      if (!skipping) {
        for (const auto& s : sections)
          if (s.name == name) throw ConfigError(where + ": duplicate section [" + name + "]");
        sections.push_back({name, i + 1, {}});
        current = &sections.back();
      }
      continue;
    }
    if (skipping) continue;
    if (current == nullptr) throw ConfigError(where + ": key outside any section");
    const size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    std::string key(io::trim(line.substr(0, eq)));
    std::string value(io::trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError(where + ": empty key");
    for (const auto& e : current->entries)
      if (e.key == key) throw ConfigError(where + ": duplicate key '" + key + "'");
    current->entries.push_back({std::move(key), std::move(value), i + 1});
  }
  return sections;
}

namespace {

const std::set<std::string, std::less<>> kSections = {"train", "test", "experiment",
                                                      "learner", "pipeline", "output"};

class Validator {
 public:
  Validator(std::string source, fs::path base) : source_(std::move(source)), base_(std::move(base)) {}

  void error(size_t line, const std::string& msg) {
    errors_.push_back(source_ + ":" + std::to_string(line) + ": " + msg);
  }
  void error(const std::string& msg) { errors_.push_back(source_ + ": " + msg); }

  // Runs `parse`, turning exceptions into collected errors.
  template <typename F>
  void field(const IniEntry& e, F&& parse) {
    try {
      parse(e.value);
    } catch (const std::exception& ex) {
      error(e.line, e.key + ": " + ex.what());
    }
  }

  fs::path path(const std::string& value) const {
    fs::path p(value);
    if (p.is_relative()) p = base_ / p;
    return p.lexically_normal();
  }

  void finish() const {
    if (errors_.empty()) return;
    std::string msg = std::to_string(errors_.size()) + " configuration error(s):";
    for (const auto& e : errors_) msg += "\n  " + e;
    throw ConfigError(msg);
  }

 private:
  std::string source_;
  fs::path base_;
  std::vector<std::string> errors_;
};

long long positive_int(std::string_view v, std::string_view what) {
  const long long n = io::parse_int(v, what);
  if (n < 1) throw ConfigError(std::string(what) + " must be >= 1");
  return n;
}

std::optional<features::ScalingPolicy> parse_scaling(std::string_view v) {
  if (v == "auto") return std::nullopt;
  const auto parts = io::split(v, ",");
  if (parts.size() != 2)
    throw ConfigError("expected 'auto' or '<char>,<pos>' with linear|log2");
  return features::ScalingPolicy{features::parse_scale(io::trim(parts[0])),
                                 features::parse_scale(io::trim(parts[1]))};
}

void parse_corpus(const IniSection& s, corpus::CorpusSpec& spec, Validator& v) {
  bool has_path = false;
  bool has_format = false;
  bool has_language = false;
  for (const auto& e : s.entries) {
    if (e.key == "format") {
      has_format = true;
      v.field(e, [&](const std::string& x) { spec.format = corpus::parse_format(x); });
    } else if (e.key == "path") {
      has_path = true;
      spec.path = v.path(e.value);
    } else if (e.key == "language") {
      has_language = true;
      v.field(e, [&](const std::string& x) { spec.language = parse_language(x); });
    } else if (e.key == "grouping_k") {
      v.field(e, [&](const std::string& x) {
        spec.grouping_k = static_cast<int>(positive_int(x, "grouping_k"));
      });
    } else if (e.key == "delimiter") {
      v.field(e, [&](const std::string& x) {
        if (x == "\\t" || x == "tab") spec.delimiter = '\t';
        else if (x.size() == 1) spec.delimiter = x[0];
        else throw ConfigError("delimiter must be a single character or 'tab'");
      });
    } else {
      v.error(e.line, "unknown key '" + e.key + "' in [" + s.name + "]");
    }
  }
  if (!has_format) v.error(s.line, "[" + s.name + "] needs 'format'");
  if (!has_language) v.error(s.line, "[" + s.name + "] needs 'language'");
  if (!has_path) {
    v.error(s.line, "[" + s.name + "] needs 'path'");
    return;
  }
  std::error_code ec;
  if (!fs::exists(spec.path, ec))
    v.error(s.line, "[" + s.name + "] path does not exist: " + spec.path.string());
  if (spec.grouping_k && spec.format == corpus::Format::kPanTruthDir)
    v.error(s.line, "[" + s.name + "] grouping_k applies only to csv corpora");
}

}  // namespace

ExperimentConfig parse_experiment(std::string_view text, std::string_view source,
                                  const fs::path& base_dir) {
  ExperimentConfig c;
  Validator v(std::string(source), base_dir);
  std::vector<IniSection> sections;
  try {
    sections = parse_ini(text, source, kSections);
  } catch (const ConfigError& e) {
    v.error(e.what());
    v.finish();
  }
  std::map<std::string, const IniSection*> by_name;
  for (const auto& s : sections) by_name[s.name] = &s;

  if (!by_name.contains("train")) v.error("missing [train] section");
  else parse_corpus(*by_name["train"], c.train, v);
  if (by_name.contains("test")) {
    c.test.emplace();
    parse_corpus(*by_name["test"], *c.test, v);
  }

  bool has_task = false;
  if (by_name.contains("experiment")) {
    for (const auto& e : by_name["experiment"]->entries) {
      if (e.key == "task") {
        has_task = true;
        v.field(e, [&](const std::string& x) { c.task = parse_task(x); });
      } else if (e.key == "n_min") {
        v.field(e, [&](const std::string& x) { c.n_min = static_cast<int>(io::parse_int(x, "n_min")); });
      } else if (e.key == "n_max") {
        v.field(e, [&](const std::string& x) { c.n_max = static_cast<int>(io::parse_int(x, "n_max")); });
      } else if (e.key == "scaling") {
        v.field(e, [&](const std::string& x) { c.scaling = parse_scaling(x); });
      } else if (e.key == "split_fraction") {
        v.field(e, [&](const std::string& x) {
          c.split_fraction = io::parse_double(x, "split_fraction");
          if (!(c.split_fraction > 0.0 && c.split_fraction < 1.0))
            throw ConfigError("must lie in (0, 1)");
        });
      } else if (e.key == "seed") {
        v.field(e, [&](const std::string& x) {
          const long long s = io::parse_int(x, "seed");
          if (s < 0) throw ConfigError("must be non-negative");
          c.split_seed = static_cast<std::uint64_t>(s);
        });
      } else if (e.key == "grouping_sweep") {
        v.field(e, [&](const std::string& x) {
          c.grouping_sweep.clear();
          for (const auto& part : io::split(x, ","))
            c.grouping_sweep.push_back(static_cast<int>(positive_int(part, "sweep entry")));
        });
      } else if (e.key == "min_df") {
        v.field(e, [&](const std::string& x) { c.min_df = static_cast<int>(positive_int(x, "min_df")); });
      } else {
        v.error(e.line, "unknown key '" + e.key + "' in [experiment]");
      }
    }
  }
  if (!has_task) v.error("[experiment] needs 'task'");
  try {
    features::check_order_range(c.n_min, c.n_max);
  } catch (const ConfigError& e) {
    v.error(e.what());
  }

  if (by_name.contains("learner")) {
    for (const auto& e : by_name["learner"]->entries) {
      auto& l = c.learner;
      if (e.key == "c") v.field(e, [&](const std::string& x) { l.c_param = io::parse_double(x, "c"); });
      else if (e.key == "epochs") v.field(e, [&](const std::string& x) { l.epochs = static_cast<int>(positive_int(x, "epochs")); });
      else if (e.key == "tolerance") v.field(e, [&](const std::string& x) { l.tolerance = io::parse_double(x, "tolerance"); });
      else if (e.key == "epsilon") v.field(e, [&](const std::string& x) { l.epsilon = io::parse_double(x, "epsilon"); });
      else if (e.key == "seed") v.field(e, [&](const std::string& x) {
        const long long s = io::parse_int(x, "seed");
        if (s < 0) throw ConfigError("must be non-negative");
        l.seed = static_cast<std::uint64_t>(s);
      });
      else v.error(e.line, "unknown key '" + e.key + "' in [learner]");
    }
  }
  try {
    learner::validate(c.learner);
  } catch (const ConfigError& e) {
    v.error(std::string("[learner] ") + e.what());
  }

  if (by_name.contains("pipeline")) {
    for (const auto& e : by_name["pipeline"]->entries) {
      std::error_code ec;
      if (e.key == "rules" || e.key == "lexicon") {
        const fs::path p = v.path(e.value);
        if (!fs::is_regular_file(p, ec)) v.error(e.line, e.key + ": file not found: " + p.string());
        (e.key == "rules" ? c.rules : c.lexicon) = p;
      } else {
        v.error(e.line, "unknown key '" + e.key + "' in [pipeline]");
      }
    }
  }
  if (by_name.contains("output")) {
    for (const auto& e : by_name["output"]->entries) {
      if (e.key == "result") c.result = v.path(e.value);
      else v.error(e.line, "unknown key '" + e.key + "' in [output]");
    }
  }

  if (!c.grouping_sweep.empty()) {
    if (c.train.format != corpus::Format::kFlatCsv)
      v.error("grouping_sweep needs a csv training corpus");
    if (c.test) v.error("grouping_sweep cannot be combined with a [test] corpus");
    if (c.train.grouping_k) v.error("grouping_sweep and [train] grouping_k are exclusive");
  }
  if ((c.task == Task::kAge || c.task == Task::kTraits) &&
      c.train.format == corpus::Format::kFlatCsv)
    v.error("task '" + std::string(to_string(c.task)) +
            "' needs a pan corpus; csv corpora carry gender only");
  v.finish();
  return c;
}

ExperimentConfig load_experiment(const fs::path& path) {
  std::string text;
  try {
    text = io::read_file(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  return parse_experiment(text, path.string(), path.parent_path());
}

namespace {

void write_corpus(std::string& out, std::string_view name, const corpus::CorpusSpec& s) {
  out += "[" + std::string(name) + "]\n";
  out += "format = " + std::string(corpus::to_string(s.format)) + "\n";
  out += "path = " + fs::absolute(s.path).lexically_normal().string() + "\n";
  out += "language = " + std::string(to_string(s.language)) + "\n";
  if (s.grouping_k) out += "grouping_k = " + std::to_string(*s.grouping_k) + "\n";
  if (s.delimiter != ',')
    out += std::string("delimiter = ") + (s.delimiter == '\t' ? std::string("tab") : std::string(1, s.delimiter)) + "\n";
}

}  // namespace

std::string canonical(const ExperimentConfig& c) {
  std::string out;
  write_corpus(out, "train", c.train);
  if (c.test) write_corpus(out, "test", *c.test);
  out += "[experiment]\n";
  out += "task = " + std::string(to_string(c.task)) + "\n";
  out += "n_min = " + std::to_string(c.n_min) + "\n";
  out += "n_max = " + std::to_string(c.n_max) + "\n";
  out += "scaling = " +
         (c.scaling ? std::string(features::to_string(c.scaling->char_scale)) + "," +
                          std::string(features::to_string(c.scaling->pos_scale))
                    : std::string("auto")) +
         "\n";
  out += "split_fraction = " + io::format_double(c.split_fraction) + "\n";
  out += "seed = " + std::to_string(c.split_seed) + "\n";
  if (!c.grouping_sweep.empty()) {
    out += "grouping_sweep = ";
    for (size_t i = 0; i < c.grouping_sweep.size(); ++i)
      out += (i ? "," : "") + std::to_string(c.grouping_sweep[i]);
    out += "\n";
  }
  out += "min_df = " + std::to_string(c.min_df) + "\n";
  out += "[learner]\n";
  out += "c = " + io::format_double(c.learner.c_param) + "\n";
  out += "epochs = " + std::to_string(c.learner.epochs) + "\n";
  out += "tolerance = " + io::format_double(c.learner.tolerance) + "\n";
  out += "epsilon = " + io::format_double(c.learner.epsilon) + "\n";
  out += "seed = " + std::to_string(c.learner.seed) + "\n";
  if (c.rules || c.lexicon) {
    out += "[pipeline]\n";
    if (c.rules) out += "rules = " + fs::absolute(*c.rules).lexically_normal().string() + "\n";
    if (c.lexicon) out += "lexicon = " + fs::absolute(*c.lexicon).lexically_normal().string() + "\n";
  }
  return out;
}

features::ScalingPolicy resolve_scaling(const ExperimentConfig& c) {
  return c.scaling ? *c.scaling : features::default_policy(c.train.language, c.task);
}

}  // namespace profiler::config
