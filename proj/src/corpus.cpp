#include "profiler/corpus.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "profiler/error.hpp"
#include "profiler/random.hpp"
#include "profiler/io.hpp"
#include "profiler/pos.hpp"
#include "profiler/unicode.hpp"

namespace profiler {

Language parse_language(std::string_view code) {
  if (code == "es") return Language::kEs;
  if (code == "en") return Language::kEn;
  if (code == "it") return Language::kIt;
  if (code == "nl") return Language::kNl;
  throw ConfigError("unsupported language '" + std::string(code) + "'");
}

std::string_view to_string(Language lang) {
  switch (lang) {
    case Language::kEs: return "es";
    case Language::kEn: return "en";
    case Language::kIt: return "it";
    case Language::kNl: return "nl";
  }
  return "?";
}

Task parse_task(std::string_view name) {
  if (name == "gender") return Task::kGender;
  if (name == "age") return Task::kAge;
  if (name == "traits") return Task::kTraits;
  throw ConfigError("unknown task '" + std::string(name) + "'");
}

std::string_view to_string(Task t) {
  switch (t) {
    case Task::kGender: return "gender";
    case Task::kAge: return "age";
    case Task::kTraits: return "traits";
  }
  return "?";
}

std::optional<Gender> parse_gender(std::string_view token) {
  const std::string t = unicode::to_lower(io::trim(token));
  if (t == "f" || t == "female") return Gender::kFemale;
  if (t == "m" || t == "male") return Gender::kMale;
  return std::nullopt;
}

std::string_view to_string(Gender g) {
  return g == Gender::kFemale ? "F" : "M";
}

std::optional<AgeBand> parse_age_band(std::string_view token) {
  const std::string t = unicode::to_lower(io::trim(token));
  if (t == "18-24") return AgeBand::k18_24;
  if (t == "25-34") return AgeBand::k25_34;
  if (t == "35-49") return AgeBand::k35_49;
  if (t == "50-xx" || t == ">50" || t == "50+") return AgeBand::k50_XX;
  return std::nullopt;
}

std::string_view to_string(AgeBand a) {
  switch (a) {
    case AgeBand::k18_24: return "18-24";
    case AgeBand::k25_34: return "25-34";
    case AgeBand::k35_49: return "35-49";
    case AgeBand::k50_XX: return "50-XX";
  }
  return "?";
}

std::string_view display_name(AgeBand a) {
  return a == AgeBand::k50_XX ? ">50" : to_string(a);
}

}  // namespace profiler

namespace profiler::corpus {

namespace fs = std::filesystem;

Format parse_format(std::string_view name) {
  if (name == "pan" || name == "PanTruthDir") return Format::kPanTruthDir;
  if (name == "csv" || name == "flat" || name == "FlatCsv") return Format::kFlatCsv;
  throw ConfigError("unknown corpus format '" + std::string(name) + "'");
}

std::string_view to_string(Format f) {
  return f == Format::kPanTruthDir ? "pan" : "csv";
}

namespace {

std::string require_utf8(std::string text, const fs::path& path) {
  if (!unicode::is_valid_utf8(text))
    throw DataError(path.string() + ": not valid UTF-8");
  return text;
}

std::string err_at(const fs::path& path, size_t line, const std::string& msg) {
  return path.string() + ":" + std::to_string(line) + ": " + msg;
}

LabelSet parse_truth_fields(const std::vector<std::string>& f,
                            const fs::path& path, size_t line) {
  LabelSet labels;
  if (f.size() != 3 && f.size() != 8)
    throw DataError(err_at(path, line, "expected 3 or 8 ':::'-separated fields"));
  labels.gender = parse_gender(f[1]);
  if (!labels.gender)
    throw DataError(err_at(path, line, "unknown gender '" + f[1] + "'"));
  // XX-XX is the PAN marker for an unlabeled age.
  const std::string age = std::string(io::trim(f[2]));
  if (age != "XX-XX" && age != "xx-xx") {
    labels.age_band = parse_age_band(age);
    if (!labels.age_band)
      throw DataError(err_at(path, line, "age band '" + age + "' is not one of "
                                         "18-24, 25-34, 35-49, 50-XX"));
  }
  if (f.size() == 8) {
    TraitVector traits{};
    for (size_t t = 0; t < kNumTraits; ++t) {
      double v = 0.0;
      try {
        v = io::parse_double(f[3 + t], kTraitNames[t]);
      } catch (const DataError& e) {
        throw DataError(err_at(path, line, e.what()));
      }
      if (!(v >= kTraitMin && v <= kTraitMax))
        throw DataError(err_at(path, line, "trait " + std::string(kTraitNames[t]) +
                                           " outside [-0.5, 0.5]"));
      traits[t] = v;
    }
    labels.traits = traits;
  }
  return labels;
}

// Minimal RFC 4180 reader. Each record carries the 1-based line it starts on.
struct CsvRecord {
  std::vector<std::string> fields;
  size_t line = 0;
};

std::vector<CsvRecord> parse_csv(std::string_view text, char delim,
                                 const fs::path& path) {
  std::vector<CsvRecord> records;
  CsvRecord rec;
  std::string field;
  size_t line = 1;
  rec.line = 1;
  bool in_quotes = false;
  bool field_started = false;
  bool at_record_start = true;
  for (size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
      at_record_start = false;
    } else if (c == delim) {
      rec.fields.push_back(std::move(field));
      field.clear();
      field_started = false;
      at_record_start = false;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      if (!at_record_start) {
        rec.fields.push_back(std::move(field));
        records.push_back(std::move(rec));
      }
      field.clear();
      rec = CsvRecord{};
      ++line;
      rec.line = line;
      field_started = false;
      at_record_start = true;
    } else {
      field += c;
      field_started = true;
      at_record_start = false;
    }
  }
  if (in_quotes)
    throw DataError(err_at(path, rec.line, "unterminated quoted field"));
  if (!at_record_start) {
    rec.fields.push_back(std::move(field));
    records.push_back(std::move(rec));
  }
  return records;
}

std::string csv_quote(std::string_view s, char delim) {
  const bool needs = s.find_first_of(std::string("\"\r\n") + delim) !=
                         std::string_view::npos ||
                     s.empty();
  if (!needs) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

fs::path sidecar_for(const fs::path& file_base) {
  fs::path p = file_base;
  p += ".pos";
  return io::resolve_maybe_gz(p);
}

void attach_sidecar(std::vector<Document>& docs, const fs::path& sidecar) {
  if (sidecar.empty()) return;
  auto groups = pos::ingest_tagged_file(sidecar);
  if (groups.size() != docs.size())
    throw DataError(sidecar.string() + ": " + std::to_string(groups.size()) +
                    " tagged documents for " + std::to_string(docs.size()) +
                    " text documents");
  for (size_t i = 0; i < docs.size(); ++i) docs[i].pos_tokens = std::move(groups[i]);
}

}  // namespace

std::vector<Sample> load_pan_truth_dir(const CorpusSpec& spec) {
  const fs::path truth = io::resolve_maybe_gz(spec.path / "truth.txt");
  if (truth.empty())
    throw DataError("missing truth.txt in " + spec.path.string());
  const auto lines = io::split_lines(require_utf8(io::read_file(truth), truth));
  std::vector<Sample> samples;
  for (size_t i = 0; i < lines.size(); ++i) {
    if (io::trim(lines[i]).empty()) continue;
    const auto fields = io::split(lines[i], ":::");
    Sample s;
    s.id = std::string(io::trim(fields[0]));
    if (s.id.empty()) throw DataError(err_at(truth, i + 1, "empty author id"));
    s.labels = parse_truth_fields(fields, truth, i + 1);
    const fs::path text_file = io::resolve_maybe_gz(spec.path / (s.id + ".txt"));
    if (text_file.empty())
      throw DataError(err_at(truth, i + 1, "author file for '" + s.id +
                                           "' not found"));
    const auto doc_lines =
        io::split_lines(require_utf8(io::read_file(text_file), text_file));
    for (size_t d = 0; d < doc_lines.size(); ++d)
      s.documents.push_back({s.id + "#" + std::to_string(d + 1), doc_lines[d], {}});
    if (s.documents.empty())
      throw DataError(text_file.string() + ": author has no documents");
    attach_sidecar(s.documents, sidecar_for(spec.path / s.id));
    samples.push_back(std::move(s));
  }
  return samples;
}

std::vector<LabeledDocument> load_flat_csv(const CorpusSpec& spec) {
  const std::string text = require_utf8(io::read_file(spec.path), spec.path);
  const auto records = parse_csv(text, spec.delimiter, spec.path);
  if (records.empty()) throw DataError(spec.path.string() + ": missing header");
  const auto& header = records[0].fields;
  auto column = [&](std::string_view name) -> size_t {
    for (size_t i = 0; i < header.size(); ++i)
      if (io::trim(header[i]) == name) return i;
    throw DataError(spec.path.string() + ": missing required column '" +
                    std::string(name) + "'");
  };
  const size_t id_col = column("id");
  const size_t gender_col = column("gender");
  const size_t text_col = column("text");
  const size_t width = std::max({id_col, gender_col, text_col}) + 1;

  std::vector<LabeledDocument> docs;
  for (size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    const std::string where = "row " + std::to_string(r);
    if (rec.fields.size() < width)
      throw DataError(err_at(spec.path, rec.line, where + ": too few fields"));
    const std::string& g = rec.fields[gender_col];
    if (io::trim(g).empty())
      throw DataError(err_at(spec.path, rec.line, where + ": empty gender"));
    LabeledDocument ld;
    ld.labels.gender = parse_gender(g);
    if (!ld.labels.gender)
      throw DataError(err_at(spec.path, rec.line, where + ": unknown gender '" + g + "'"));
    ld.document.id = rec.fields[id_col];
    ld.document.text = rec.fields[text_col];
    docs.push_back(std::move(ld));
  }

  const fs::path sidecar = sidecar_for(spec.path);
  if (!sidecar.empty()) {
    std::vector<Document> plain;
    plain.reserve(docs.size());
    for (auto& d : docs) plain.push_back(std::move(d.document));
    attach_sidecar(plain, sidecar);
    for (size_t i = 0; i < docs.size(); ++i) docs[i].document = std::move(plain[i]);
  }
  return docs;
}

void write_pan_truth_dir(const fs::path& dir, const std::vector<Sample>& samples) {
  fs::create_directories(dir);
  std::string truth;
  for (const auto& s : samples) {
    truth += s.id + ":::";
    truth += s.labels.gender ? std::string(to_string(*s.labels.gender)) : "F";
    truth += ":::";
    truth += s.labels.age_band ? std::string(to_string(*s.labels.age_band)) : "XX-XX";
    if (s.labels.traits) {
      for (double v : *s.labels.traits) truth += ":::" + io::format_double(v);
    }
    truth += '\n';
    std::string text;
    bool tagged = false;
    std::vector<std::vector<TaggedToken>> groups;
    for (const auto& d : s.documents) {
      if (d.text.find('\n') != std::string::npos)
        throw DataError("document " + d.id + " contains a newline");
      text += d.text + '\n';
      tagged = tagged || !d.pos_tokens.empty();
      groups.push_back(d.pos_tokens);
    }
    io::write_file(dir / (s.id + ".txt"), text);
    if (tagged) io::write_file(dir / (s.id + ".pos"), pos::format_tagged(groups));
  }
  io::write_file(dir / "truth.txt", truth);
}

void write_flat_csv(const fs::path& path, const std::vector<LabeledDocument>& docs,
                    char delimiter) {
  std::string out = std::string("id") + delimiter + "gender" + delimiter + "text\n";
  bool tagged = false;
  std::vector<std::vector<TaggedToken>> groups;
  for (const auto& ld : docs) {
    if (!ld.labels.gender) throw DataError("document " + ld.document.id + " has no gender");
    out += csv_quote(ld.document.id, delimiter) + delimiter +
           std::string(to_string(*ld.labels.gender)) + delimiter +
           csv_quote(ld.document.text, delimiter) + '\n';
    tagged = tagged || !ld.document.pos_tokens.empty();
    groups.push_back(ld.document.pos_tokens);
  }
  io::write_file(path, out);
  if (tagged) {
    fs::path sidecar = path;
    sidecar += ".pos";
    io::write_file(sidecar, pos::format_tagged(groups));
  }
}

std::vector<Sample> group_into_samples(const std::vector<LabeledDocument>& docs,
                                       int k) {
  if (k < 1) throw ConfigError("group size must be >= 1");
  if (docs.empty()) throw DataError("cannot group an empty document list");

  // Classes keyed by full label set, in order of first appearance.
  std::vector<LabelSet> classes;
  std::vector<std::vector<const Document*>> members;
  for (const auto& ld : docs) {
    if (ld.labels.empty()) throw DataError("document " + ld.document.id + " has no labels");
    auto it = std::find(classes.begin(), classes.end(), ld.labels);
    size_t c = static_cast<size_t>(it - classes.begin());
    if (it == classes.end()) {
      classes.push_back(ld.labels);
      members.emplace_back();
    }
    members[c].push_back(&ld.document);
  }

  std::vector<Sample> samples;
  const size_t chunk = static_cast<size_t>(k);
  for (size_t c = 0; c < classes.size(); ++c) {
    const auto& m = members[c];
    for (size_t start = 0; start < m.size(); start += chunk) {
      Sample s;
      s.labels = classes[c];
      const size_t end = std::min(m.size(), start + chunk);
      for (size_t i = start; i < end; ++i) s.documents.push_back(*m[i]);
      s.id = "g" + std::to_string(c) + "_" + std::to_string(start / chunk) + "_" +
             s.documents.front().id;
      samples.push_back(std::move(s));
    }
  }
  return samples;
}

std::vector<Sample> load_samples(const CorpusSpec& spec) {
  if (spec.format == Format::kPanTruthDir) {
    if (spec.grouping_k)
      throw ConfigError("grouping_k applies only to flat corpora");
    return load_pan_truth_dir(spec);
  }
  auto docs = load_flat_csv(spec);
  if (docs.empty()) throw DataError(spec.path.string() + ": no documents");
  return group_into_samples(docs, spec.grouping_k.value_or(1));
}

std::uint64_t fingerprint(const CorpusSpec& spec) {
  std::uint64_t h = io::fnv1a(to_string(spec.format));
  auto mix_file = [&h](const fs::path& p) {
    if (p.empty()) return;
    h = io::fnv1a(p.filename().string(), h);
    h = io::fnv1a(io::read_file(p), h);
  };
  if (spec.format == Format::kFlatCsv) {
    mix_file(spec.path);
    mix_file(sidecar_for(spec.path));
    return h;
  }
  std::vector<fs::path> files;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(spec.path, ec))
    if (entry.is_regular_file()) files.push_back(entry.path());
  if (ec) throw DataError("cannot list " + spec.path.string());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) mix_file(f);
  return h;
}

std::string stratum_of(const Sample& s, StratifyBy by) {
  switch (by) {
    case StratifyBy::kGender:
      if (!s.labels.gender) throw DataError("sample " + s.id + " has no gender label");
      return std::string(to_string(*s.labels.gender));
    case StratifyBy::kAgeBand:
      if (!s.labels.age_band) throw DataError("sample " + s.id + " has no age label");
      return std::string(to_string(*s.labels.age_band));
    case StratifyBy::kNone:
      return "*";
  }
  return "*";
}

Split stratified_split(const std::vector<Sample>& samples, double train_fraction,
                       std::uint64_t seed, StratifyBy by) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ConfigError("train fraction must lie in (0, 1)");
  if (samples.empty()) throw DataError("cannot split an empty sample list");

  std::vector<std::string> keys;
  std::map<std::string, std::vector<size_t>> by_class;
  for (size_t i = 0; i < samples.size(); ++i) {
    std::string key = stratum_of(samples[i], by);
    if (!by_class.contains(key)) keys.push_back(key);
    by_class[key].push_back(i);
  }

  std::mt19937_64 rng(seed);
  std::vector<bool> in_train(samples.size(), false);
  for (const auto& key : keys) {
    auto idx = by_class[key];
    seeded_shuffle(idx, rng);
    const size_t n = idx.size();
    size_t n_train = static_cast<size_t>(train_fraction * static_cast<double>(n) + 1e-9);
    if (n >= 2) n_train = std::clamp<size_t>(n_train, 1, n - 1);
    else n_train = 0;
    for (size_t i = 0; i < n_train; ++i) in_train[idx[i]] = true;
  }

  Split out;
  for (size_t i = 0; i < samples.size(); ++i)
    (in_train[i] ? out.train : out.test).push_back(samples[i]);
  return out;
}

}  // namespace profiler::corpus
