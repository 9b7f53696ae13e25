#include <gtest/gtest.h>

#include <filesystem>
#include <functional>
#include <numeric>
#include <set>

#include "profiler/corpus.hpp"
#include "profiler/error.hpp"
#include "profiler/io.hpp"

using namespace profiler;
using corpus::CorpusSpec;
using corpus::Format;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("profiler_corpus_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

CorpusSpec pan(const fs::path& p) { return {Format::kPanTruthDir, p, Language::kEs, {}, ','}; }
CorpusSpec csv(const fs::path& p) { return {Format::kFlatCsv, p, Language::kEs, {}, ','}; }

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

std::vector<LabeledDocument> docs_of(size_t n, Gender g, const std::string& prefix) {
  std::vector<LabeledDocument> out;
  for (size_t i = 0; i < n; ++i) {
    LabeledDocument d;
    d.document = {prefix + std::to_string(i), "text " + std::to_string(i), {}};
    d.labels.gender = g;
    out.push_back(d);
  }
  return out;
}

std::vector<Sample> samples_of(size_t f, size_t m) {
  std::vector<Sample> out;
  for (size_t i = 0; i < f + m; ++i) {
    Sample s;
    s.id = "s" + std::to_string(i);
    s.documents = {{s.id + "#1", "x", {}}};
    s.labels.gender = i < f ? Gender::kFemale : Gender::kMale;
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST(PanLoader, TwoDocumentAuthor) {
  TempDir d;
  io::write_file(d.path() / "truth.txt", "u1:::F:::18-24\n");
  io::write_file(d.path() / "u1.txt", "first tweet\nsecond tweet\n");
  const auto s = corpus::load_pan_truth_dir(pan(d.path()));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].id, "u1");
  ASSERT_EQ(s[0].documents.size(), 2u);
  EXPECT_EQ(s[0].documents[1].text, "second tweet");
  EXPECT_EQ(s[0].labels.gender, Gender::kFemale);
  EXPECT_EQ(s[0].labels.age_band, AgeBand::k18_24);
  EXPECT_FALSE(s[0].labels.traits.has_value());
}

TEST(PanLoader, AllFiveTraits) {
  TempDir d;
  io::write_file(d.path() / "truth.txt", "u2:::M:::25-34:::0.1:::-0.2:::0.0:::0.3:::0.5\n");
  io::write_file(d.path() / "u2.txt", "hola\n");
  const auto s = corpus::load_pan_truth_dir(pan(d.path()));
  ASSERT_TRUE(s[0].labels.traits.has_value());
  EXPECT_EQ(*s[0].labels.traits, (TraitVector{0.1, -0.2, 0.0, 0.3, 0.5}));
  EXPECT_EQ(s[0].labels.gender, Gender::kMale);
}

TEST(PanLoader, GenderTokensCaseInsensitive) {
  TempDir d;
  io::write_file(d.path() / "truth.txt", "a:::female:::35-49\nb:::MALE:::50-XX\nc:::f:::>50\n");
  for (const char* id : {"a", "b", "c"}) io::write_file(d.path() / (std::string(id) + ".txt"), "t\n");
  const auto s = corpus::load_pan_truth_dir(pan(d.path()));
  EXPECT_EQ(s[0].labels.gender, Gender::kFemale);
  EXPECT_EQ(s[1].labels.gender, Gender::kMale);
  EXPECT_EQ(s[1].labels.age_band, AgeBand::k50_XX);
  EXPECT_EQ(s[2].labels.age_band, AgeBand::k50_XX);
  EXPECT_EQ(display_name(AgeBand::k50_XX), ">50");
}

TEST(PanLoader, Errors) {
  TempDir d;
  EXPECT_NE(error_of([&] { corpus::load_pan_truth_dir(pan(d.path())); }).find("truth.txt"),
            std::string::npos);
  io::write_file(d.path() / "u1.txt", "x\n");
  io::write_file(d.path() / "truth.txt", "u1:::F:::18-24\nu3:::M:::18-24\n");
  EXPECT_NE(error_of([&] { corpus::load_pan_truth_dir(pan(d.path())); }).find("u3"),
            std::string::npos);
  io::write_file(d.path() / "truth.txt", "u1:::F:::18-24:::0.1:::abc:::0:::0:::0\n");
  EXPECT_NE(error_of([&] { corpus::load_pan_truth_dir(pan(d.path())); }).find(":1:"),
            std::string::npos);
  io::write_file(d.path() / "truth.txt", "u1:::F:::18-24\nu1b:::F:::17-20\n");
  io::write_file(d.path() / "u1b.txt", "x\n");
  const std::string age_err = error_of([&] { corpus::load_pan_truth_dir(pan(d.path())); });
  EXPECT_NE(age_err.find(":2:"), std::string::npos);
  EXPECT_NE(age_err.find("17-20"), std::string::npos);
  io::write_file(d.path() / "truth.txt", "u1:::F:::18-24:::0.9:::0:::0:::0:::0\n");
  EXPECT_THROW(corpus::load_pan_truth_dir(pan(d.path())), DataError);
  io::write_file(d.path() / "truth.txt", "u1:::X:::18-24\n");
  EXPECT_THROW(corpus::load_pan_truth_dir(pan(d.path())), DataError);
}

TEST(PanLoader, UnlabeledAgeMarker) {
  TempDir d;
  io::write_file(d.path() / "truth.txt", "u1:::F:::XX-XX:::0.1:::0.1:::0.1:::0.1:::0.1\n");
  io::write_file(d.path() / "u1.txt", "x\n");
  const auto s = corpus::load_pan_truth_dir(pan(d.path()));
  EXPECT_FALSE(s[0].labels.age_band.has_value());
  EXPECT_TRUE(s[0].labels.traits.has_value());
}

TEST(PanLoader, GzipAndSidecar) {
  TempDir d;
  io::write_file(d.path() / "truth.txt.gz", "u1:::M:::18-24\n");
  io::write_file(d.path() / "u1.txt.gz", "I run\nyes\n");
  io::write_file(d.path() / "u1.pos", "I\tPP1CSN00\nrun\tVMIP1S0\n\nyes\tRG\n");
  const auto s = corpus::load_pan_truth_dir(pan(d.path()));
  ASSERT_EQ(s[0].documents.size(), 2u);
  ASSERT_EQ(s[0].documents[0].pos_tokens.size(), 2u);
  EXPECT_EQ(s[0].documents[0].pos_tokens[1].fine_tag, "VMIP1S0");
  EXPECT_EQ(s[0].documents[1].pos_tokens[0].surface, "yes");
}

TEST(PanLoader, SidecarDocumentCountMustMatch) {
  TempDir d;
  io::write_file(d.path() / "truth.txt", "u1:::M:::18-24\n");
  io::write_file(d.path() / "u1.txt", "a\nb\n");
  io::write_file(d.path() / "u1.pos", "a\tNC\n");
  EXPECT_THROW(corpus::load_pan_truth_dir(pan(d.path())), DataError);
}

TEST(PanLoader, RoundTrip) {
  TempDir d;
  std::vector<Sample> in(2);
  in[0].id = "a";
  in[0].documents = {{"a#1", "héllo @x", {{"héllo", "NC"}, {"@x", "NP"}}}, {"a#2", "", {}}};
  in[0].labels = {Gender::kFemale, AgeBand::k35_49, TraitVector{0.1, 0.2, -0.3, 0.4, -0.5}};
  in[1].id = "b";
  in[1].documents = {{"b#1", "one", {}}};
  in[1].labels = {Gender::kMale, {}, {}};
  corpus::write_pan_truth_dir(d.path(), in);
  const auto out = corpus::load_pan_truth_dir(pan(d.path()));
  ASSERT_EQ(out.size(), 2u);
  for (size_t i = 0; i < 2; ++i) {
    EXPECT_EQ(out[i].id, in[i].id);
    EXPECT_EQ(out[i].documents, in[i].documents);
    EXPECT_EQ(out[i].labels, in[i].labels);
  }
}

TEST(CsvLoader, ThreeRows) {
  TempDir d;
  io::write_file(d.path() / "c.csv", "id,gender,text\n1,F,hola\n2,M,adiós\n3,F,qué tal\n");
  const auto docs = corpus::load_flat_csv(csv(d.path() / "c.csv"));
  ASSERT_EQ(docs.size(), 3u);
  EXPECT_EQ(docs[0].labels.gender, Gender::kFemale);
  EXPECT_EQ(docs[1].labels.gender, Gender::kMale);
  EXPECT_EQ(docs[2].labels.gender, Gender::kFemale);
  EXPECT_EQ(docs[2].document.text, "qué tal");
}

TEST(CsvLoader, QuotedFields) {
  TempDir d;
  io::write_file(d.path() / "c.csv",
                 "text,id,gender\n\"hola, amigo\",1,F\n\"dijo \"\"sí\"\"\nluego\",2,M\n");
  const auto docs = corpus::load_flat_csv(csv(d.path() / "c.csv"));
  ASSERT_EQ(docs.size(), 2u);
  EXPECT_EQ(docs[0].document.text, "hola, amigo");
  EXPECT_EQ(docs[1].document.text, "dijo \"sí\"\nluego");
}

TEST(CsvLoader, HeaderOnlyIsEmpty) {
  TempDir d;
  io::write_file(d.path() / "c.csv", "id,gender,text\n");
  EXPECT_TRUE(corpus::load_flat_csv(csv(d.path() / "c.csv")).empty());
}

TEST(CsvLoader, Errors) {
  TempDir d;
  io::write_file(d.path() / "c.csv", "id,text\n1,hola\n");
  EXPECT_NE(error_of([&] { corpus::load_flat_csv(csv(d.path() / "c.csv")); }).find("gender"),
            std::string::npos);
  io::write_file(d.path() / "c.csv", "id,gender,text\n1,F,a\n2,,b\n");
  EXPECT_NE(error_of([&] { corpus::load_flat_csv(csv(d.path() / "c.csv")); }).find("row 2"),
            std::string::npos);
}

TEST(CsvLoader, TabDelimiterAndRoundTrip) {
  TempDir d;
  std::vector<LabeledDocument> in = docs_of(3, Gender::kMale, "m");
  in[1].document.text = "con\ttab, \"comillas\"\ny salto";
  in[2].document.pos_tokens = {{"text", "NC"}, {"2", "Z"}};
  corpus::write_flat_csv(d.path() / "t.tsv", in, '\t');
  CorpusSpec spec = csv(d.path() / "t.tsv");
  spec.delimiter = '\t';
  const auto out = corpus::load_flat_csv(spec);
  ASSERT_EQ(out.size(), 3u);
  for (size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(out[i].document, in[i].document);
    EXPECT_EQ(out[i].labels, in[i].labels);
  }
}

TEST(Grouping, ResidualKept) {
  const auto s = corpus::group_into_samples(docs_of(103, Gender::kFemale, "f"), 50);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].documents.size(), 50u);
  EXPECT_EQ(s[1].documents.size(), 50u);
  EXPECT_EQ(s[2].documents.size(), 3u);
  EXPECT_EQ(s[2].documents.front().id, "f100");
}

TEST(Grouping, CorpusOf5979CommentsGives121Samples) {
  auto docs = docs_of(2573, Gender::kFemale, "f");
  auto m = docs_of(3406, Gender::kMale, "m");
  docs.insert(docs.end(), m.begin(), m.end());
  const auto s = corpus::group_into_samples(docs, 50);
  EXPECT_EQ(s.size(), 121u);
  size_t f = 0, total = 0;
  for (const auto& x : s) {
    f += x.labels.gender == Gender::kFemale;
    total += x.documents.size();
  }
  EXPECT_EQ(f, 52u);
  EXPECT_EQ(total, 5979u);
}

TEST(Grouping, IdentityAtK1AndNoLabelMixing) {
  auto docs = docs_of(4, Gender::kFemale, "f");
  auto m = docs_of(3, Gender::kMale, "m");
  for (size_t i = 0; i < m.size(); ++i) docs.insert(docs.begin() + static_cast<long>(2 * i + 1), m[i]);
  EXPECT_EQ(corpus::group_into_samples(docs, 1).size(), 7u);
  for (int k : {2, 3, 5}) {
    size_t total = 0;
    for (const auto& s : corpus::group_into_samples(docs, k)) {
      total += s.documents.size();
      for (const auto& d : s.documents) EXPECT_EQ(d.id[0], s.labels.gender == Gender::kFemale ? 'f' : 'm');
    }
    EXPECT_EQ(total, docs.size());
  }
}

TEST(Grouping, Errors) {
  EXPECT_THROW(corpus::group_into_samples(docs_of(3, Gender::kMale, "m"), 0), ConfigError);
  EXPECT_THROW(corpus::group_into_samples({}, 3), DataError);
}

TEST(Split, FloorPerClass) {
  for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
    const auto sp = corpus::stratified_split(samples_of(5, 5), 0.7, seed);
    EXPECT_EQ(sp.train.size(), 6u);
    EXPECT_EQ(sp.test.size(), 4u);
  }
  const auto sp = corpus::stratified_split(samples_of(50, 50), 0.7, 7);
  EXPECT_EQ(sp.train.size(), 70u);
  EXPECT_EQ(sp.test.size(), 30u);
}

TEST(Split, DeterministicDisjointComplete) {
  const auto in = samples_of(13, 8);
  const auto a = corpus::stratified_split(in, 0.7, 11);
  const auto b = corpus::stratified_split(in, 0.7, 11);
  std::vector<std::string> ia, ib;
  for (const auto& s : a.train) ia.push_back(s.id);
  for (const auto& s : b.train) ib.push_back(s.id);
  EXPECT_EQ(ia, ib);
  std::set<std::string> all;
  for (const auto& s : a.train) all.insert(s.id);
  for (const auto& s : a.test) EXPECT_TRUE(all.insert(s.id).second);
  EXPECT_EQ(all.size(), in.size());
  const auto c = corpus::stratified_split(in, 0.7, 12);
  std::vector<std::string> ic;
  for (const auto& s : c.train) ic.push_back(s.id);
  EXPECT_NE(ia, ic);
}

TEST(Split, ProportionWithinOneOverN) {
  for (size_t f = 2; f < 30; f += 3) {
    const auto sp = corpus::stratified_split(samples_of(f, 9), 0.7, f);
    size_t ftrain = 0;
    for (const auto& s : sp.train) ftrain += s.labels.gender == Gender::kFemale;
    EXPECT_LT(std::abs(double(ftrain) / double(f) - 0.7), 1.0 / double(f));
  }
}

TEST(Split, Errors) {
  EXPECT_THROW(corpus::stratified_split(samples_of(3, 3), 1.0, 1), ConfigError);
  EXPECT_THROW(corpus::stratified_split(samples_of(3, 3), 0.0, 1), ConfigError);
  EXPECT_THROW(corpus::stratified_split({}, 0.5, 1), DataError);
  auto s = samples_of(2, 2);
  s[0].labels.gender.reset();
  s[0].labels.age_band = AgeBand::k18_24;
  EXPECT_THROW(corpus::stratified_split(s, 0.5, 1), DataError);
}

TEST(Fingerprint, ChangesWithContent) {
  TempDir d;
  io::write_file(d.path() / "c.csv", "id,gender,text\n1,F,a\n");
  const auto h1 = corpus::fingerprint(csv(d.path() / "c.csv"));
  EXPECT_EQ(h1, corpus::fingerprint(csv(d.path() / "c.csv")));
  io::write_file(d.path() / "c.csv", "id,gender,text\n1,F,b\n");
  EXPECT_NE(h1, corpus::fingerprint(csv(d.path() / "c.csv")));
}

TEST(LoadSamples, GroupingOnlyForCsv) {
  TempDir d;
  io::write_file(d.path() / "c.csv", "id,gender,text\n1,F,a\n2,F,b\n3,M,c\n");
  CorpusSpec spec = csv(d.path() / "c.csv");
  spec.grouping_k = 2;
  EXPECT_EQ(corpus::load_samples(spec).size(), 2u);
  CorpusSpec p = pan(d.path());
  p.grouping_k = 2;
  EXPECT_THROW(corpus::load_samples(p), ConfigError);
}
