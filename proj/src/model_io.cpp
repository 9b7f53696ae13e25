#include "profiler/model_io.hpp"

#include "profiler/error.hpp"
#include "profiler/io.hpp"

namespace profiler::model_io {

namespace {

constexpr std::string_view kMagic = "profiler-model";
constexpr std::string_view kVersion = "v1";

using learner::LinearModel;
using learner::OneVsRestModel;
using learner::TraitRegressor;

void write_submodel(std::string& out, const std::string& pos, const std::string& neg,
                    double bias, double c, const std::vector<double>& w) {
  size_t nnz = 0;
  for (double v : w) nnz += v != 0.0;
  out += "submodel\t" + pos + '\t' + neg + '\t' + io::format_double(bias) + '\t' +
         io::format_double(c) + '\t' + std::to_string(nnz) + '\n';
  for (size_t i = 0; i < w.size(); ++i)
    if (w[i] != 0.0) out += std::to_string(i) + '\t' + io::format_double(w[i]) + '\n';
}

class LineReader {
 public:
  explicit LineReader(std::string_view text) : lines_(io::split_lines(text)) {}

  std::vector<std::string> next(std::string_view expect_tag, size_t n_fields) {
    if (pos_ >= lines_.size()) throw DataError("model file truncated");
    auto f = io::split(lines_[pos_], "\t");
    ++pos_;
    if (!expect_tag.empty() && (f.empty() || f[0] != expect_tag))
      throw DataError("model file line " + std::to_string(pos_) + ": expected '" +
                      std::string(expect_tag) + "'");
    if (n_fields != 0 && f.size() != n_fields)
      throw DataError("model file line " + std::to_string(pos_) + ": expected " +
                      std::to_string(n_fields) + " fields");
    return f;
  }

  bool exhausted() const { return pos_ >= lines_.size(); }

 private:
  std::vector<std::string> lines_;
  size_t pos_ = 0;
};

struct Submodel {
  std::string pos, neg;
  double bias = 0.0;
  double c = 1.0;
  std::vector<double> weights;
};

Submodel read_submodel(LineReader& r, size_t dim) {
  auto f = r.next("submodel", 6);
  Submodel s;
  s.pos = f[1];
  s.neg = f[2];
  s.bias = io::parse_double(f[3], "bias");
  s.c = io::parse_double(f[4], "C");
  const long long nnz = io::parse_int(f[5], "nnz");
  if (nnz < 0 || static_cast<size_t>(nnz) > dim) throw DataError("model file: bad nnz");
  s.weights.assign(dim, 0.0);
  for (long long k = 0; k < nnz; ++k) {
    auto wf = r.next("", 2);
    const long long col = io::parse_int(wf[0], "column");
    if (col < 0 || static_cast<size_t>(col) >= dim)
      throw DataError("model file: weight column out of range");
    s.weights[static_cast<size_t>(col)] = io::parse_double(wf[1], "weight");
  }
  return s;
}

}  // namespace

size_t dimension(const ModelFile& m) {
  return std::visit([](const auto& model) { return model.dimension(); }, m.model);
}

std::string serialize(const ModelFile& m) {
  std::string out;
  out += std::string(kMagic) + '\t' + std::string(kVersion) + '\n';
  out += "task\t" + std::string(to_string(m.task)) + '\n';
  const char* kind = std::holds_alternative<LinearModel>(m.model)      ? "binary"
                     : std::holds_alternative<OneVsRestModel>(m.model) ? "ovr"
                                                                       : "traits";
  out += std::string("kind\t") + kind + '\n';
  out += "vocab_hash\t" + io::hex64(m.vocab_hash) + '\n';
  out += "dimension\t" + std::to_string(dimension(m)) + '\n';
  out += "scaling\t" + std::string(features::to_string(m.scaling.char_scale)) + '\t' +
         std::string(features::to_string(m.scaling.pos_scale)) + '\n';
  const auto& c = m.config;
  out += "config\t" + io::format_double(c.c_param) + '\t' + std::to_string(c.epochs) +
         '\t' + io::format_double(c.tolerance) + '\t' + std::to_string(c.seed) + '\t' +
         io::format_double(c.epsilon) + '\n';
  if (const auto* b = std::get_if<LinearModel>(&m.model)) {
    out += "submodels\t1\n";
    write_submodel(out, b->label_positive, b->label_negative, b->bias, b->c_param, b->weights);
  } else if (const auto* o = std::get_if<OneVsRestModel>(&m.model)) {
    out += "submodels\t" + std::to_string(o->models.size()) + '\n';
    for (const auto& sm : o->models)
      write_submodel(out, sm.label_positive, sm.label_negative, sm.bias, sm.c_param,
                     sm.weights);
  } else {
    const auto& t = std::get<TraitRegressor>(m.model);
    out += "submodels\t" + std::to_string(kNumTraits) + '\n';
    for (size_t i = 0; i < kNumTraits; ++i)
      write_submodel(out, std::string(kTraitNames[i]), "-", t.bias[i], t.c_param,
                     t.weights[i]);
  }
  out += "end\n";
  return out;
}

ModelFile parse(std::string_view text) {
  LineReader r(text);
  auto header = r.next(kMagic, 2);
  if (header[1] != kVersion)
    throw DataError("model file version '" + header[1] + "' is not supported (expected " +
                    std::string(kVersion) + ")");
  ModelFile m;
  try {
    m.task = parse_task(r.next("task", 2)[1]);
  } catch (const ConfigError& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
  const std::string kind = r.next("kind", 2)[1];
  const std::string hash_hex = r.next("vocab_hash", 2)[1];
  if (hash_hex.size() != 16) throw DataError("model file: bad vocab hash");
  m.vocab_hash = std::stoull(hash_hex, nullptr, 16);
  const long long dim_ll = io::parse_int(r.next("dimension", 2)[1], "dimension");
  if (dim_ll < 0) throw DataError("model file: bad dimension");
  const size_t dim = static_cast<size_t>(dim_ll);
  auto sc = r.next("scaling", 3);
  try {
    m.scaling = {features::parse_scale(sc[1]), features::parse_scale(sc[2])};
  } catch (const ConfigError& e) {
    throw DataError(std::string("model file: ") + e.what());
  }
  auto cf = r.next("config", 6);
  m.config.c_param = io::parse_double(cf[1], "C");
  m.config.epochs = static_cast<int>(io::parse_int(cf[2], "epochs"));
  m.config.tolerance = io::parse_double(cf[3], "tolerance");
  m.config.seed = std::stoull(cf[4]);
  m.config.epsilon = io::parse_double(cf[5], "epsilon");
  const long long k = io::parse_int(r.next("submodels", 2)[1], "submodels");

  if (kind == "binary") {
    if (k != 1) throw DataError("model file: binary model needs one submodel");
    Submodel s = read_submodel(r, dim);
    m.model = LinearModel{std::move(s.weights), s.bias, s.c, s.pos, s.neg};
  } else if (kind == "ovr") {
    if (k < 2) throw DataError("model file: one-vs-rest needs >= 2 submodels");
    OneVsRestModel o;
    for (long long i = 0; i < k; ++i) {
      Submodel s = read_submodel(r, dim);
      o.classes.push_back(s.pos);
      o.models.push_back(LinearModel{std::move(s.weights), s.bias, s.c, s.pos, s.neg});
    }
    m.model = std::move(o);
  } else if (kind == "traits") {
    if (k != static_cast<long long>(kNumTraits))
      throw DataError("model file: trait model needs five submodels");
    TraitRegressor t;
    t.epsilon = m.config.epsilon;
    for (size_t i = 0; i < kNumTraits; ++i) {
      Submodel s = read_submodel(r, dim);
      if (s.pos != kTraitNames[i]) throw DataError("model file: traits out of order");
      t.weights[i] = std::move(s.weights);
      t.bias[i] = s.bias;
      t.c_param = s.c;
    }
    m.model = std::move(t);
  } else {
    throw DataError("model file: unknown kind '" + kind + "'");
  }
  r.next("end", 1);
  if (!r.exhausted()) throw DataError("model file: trailing content after 'end'");
  return m;
}

void save_model(const std::filesystem::path& path, const ModelFile& m) {
  io::write_file(path, serialize(m));
}

ModelFile load_model(const std::filesystem::path& path) {
  try {
    return parse(io::read_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  } catch (const std::invalid_argument&) {
    throw DataError(path.string() + ": malformed number");
  } catch (const std::out_of_range&) {
    throw DataError(path.string() + ": number out of range");
  }
}

void check_vocabulary(const ModelFile& m, const features::Vocabulary& vocab) {
  if (m.vocab_hash != vocab.hash())
    throw DataError("vocabulary hash " + io::hex64(vocab.hash()) +
                    " does not match the model's " + io::hex64(m.vocab_hash));
  if (dimension(m) != vocab.size())
    throw DataError("vocabulary size does not match the model dimension");
}

}  // namespace profiler::model_io
