#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "profiler/corpus.hpp"
#include "profiler/io.hpp"
#include "profiler/synthetic.hpp"

using namespace profiler;
namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "profiler_cli_test";

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

Outcome cli(const std::string& args) {
  const fs::path out = kDir / "stdout.txt", err = kDir / "stderr.txt";
  const std::string cmd = std::string("'") + PROFILER_CLI + "' " + args + " >'" + out.string() +
                          "' 2>'" + err.string() + "'";
  const int status = std::system(cmd.c_str());
  Outcome o;
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  o.out = io::read_file(out);
  o.err = io::read_file(err);
  return o;
}

std::string p(const fs::path& f) { return "'" + f.string() + "'"; }

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    fs::remove_all(kDir);
    fs::create_directories(kDir);
    synthetic::PanOptions o;
    o.samples = 80;
    corpus::write_pan_truth_dir(kDir / "train", synthetic::pan_samples(o));
    o.samples = 30;
    o.seed = 3;
    corpus::write_pan_truth_dir(kDir / "test", synthetic::pan_samples(o));
  }
  static void TearDownTestSuite() { fs::remove_all(kDir); }
};

}  // namespace

TEST_F(Cli, NormalizeWritesTextAndRewriteLog) {
  io::write_file(kDir / "tweet.txt", "I was just watching ``update 10.'' @MKBHD http://t.co/P9Dn7t8zSl\n");
  const auto o = cli("normalize " + p(kDir / "tweet.txt") + " " + p(kDir / "tweet.norm"));
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(io::read_file(kDir / "tweet.norm"), "I was just watching ``update 10.'' @us htt\n");
  const auto log = io::read_file(kDir / "tweet.norm.rewrites.tsv");
  EXPECT_NE(log.find("1\tmentions\t35\t41\t35\t38\t@MKBHD\n"), std::string::npos) << log;
  EXPECT_NE(log.find("\turls\t"), std::string::npos);
  EXPECT_NE(log.find("http://t.co/P9Dn7t8zSl\n"), std::string::npos);
}

TEST_F(Cli, NormalizeEdgeCases) {
  io::write_file(kDir / "empty.txt", "");
  const auto e = cli("normalize " + p(kDir / "empty.txt") + " -");
  EXPECT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(e.out, "");
  const auto missing = cli("normalize " + p(kDir / "nope.txt") + " -");
  EXPECT_EQ(missing.code, 3);
  EXPECT_NE(missing.err.find("nope.txt"), std::string::npos) << missing.err;
  EXPECT_EQ(cli("normalize").code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
  EXPECT_EQ(cli("--help").code, 0);
}

TEST_F(Cli, TagUsesFallbackTagger) {
  io::write_file(kDir / "doc.txt", "hola @ana 12 !\n");
  const auto o = cli("tag " + p(kDir / "doc.txt") + " -");
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out, "hola\tN\n@us\tN\n12\tZ\n!\tF\n\n");
}

TEST_F(Cli, TrainPredictEvaluate) {
  const auto model = kDir / "gender.model";
  auto o = cli("train --corpus " + p(kDir / "train") + " --task gender --model " + p(model));
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_TRUE(fs::exists(model.string() + ".vocab"));
  EXPECT_NE(o.err.find("fallback"), std::string::npos);
  o = cli("predict --corpus " + p(kDir / "test") + " --model " + p(model) + " --output " +
          p(kDir / "pred.tsv"));
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(io::split_lines(io::read_file(kDir / "pred.tsv")).size(), 30u);
  o = cli("evaluate --predictions " + p(kDir / "pred.tsv") + " --truth-corpus " + p(kDir / "test"));
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("Female\t"), std::string::npos) << o.out;
  EXPECT_NE(o.out.find("accuracy\t"), std::string::npos) << o.out;

  o = cli("train --corpus " + p(kDir / "train") + " --task traits --model " + p(kDir / "t.model"));
  ASSERT_EQ(o.code, 0) << o.err;
  o = cli("predict --corpus " + p(kDir / "test") + " --model " + p(kDir / "t.model") +
          " --output " + p(kDir / "tpred.tsv"));
  ASSERT_EQ(o.code, 0) << o.err;
  o = cli("evaluate --task traits --predictions " + p(kDir / "tpred.tsv") + " --truth-corpus " +
          p(kDir / "test"));
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("Mean\t"), std::string::npos) << o.out;
}

TEST_F(Cli, MismatchedVocabularyIsDataError) {
  ASSERT_EQ(cli("train --corpus " + p(kDir / "train") + " --model " + p(kDir / "a.model")).code, 0);
  ASSERT_EQ(cli("train --corpus " + p(kDir / "test") + " --model " + p(kDir / "b.model")).code, 0);
  const auto o = cli("predict --corpus " + p(kDir / "test") + " --model " + p(kDir / "a.model") +
                     " --vocab " + p(kDir / "b.model.vocab"));
  EXPECT_EQ(o.code, 3);
  EXPECT_NE(o.err.find("vocab"), std::string::npos) << o.err;
}

TEST_F(Cli, ConfigErrorsExitTwo) {
  io::write_file(kDir / "bad.ini", "[train]\nformat = pan\npath = nowhere\nlanguage = es\n");
  const auto o = cli("run " + p(kDir / "bad.ini"));
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("needs 'task'"), std::string::npos) << o.err;
  EXPECT_NE(o.err.find("path does not exist"), std::string::npos) << o.err;
  EXPECT_EQ(cli("train --corpus " + p(kDir / "train") + " --c -1 --model " + p(kDir / "x")).code, 2);
  EXPECT_EQ(cli("train --corpus " + p(kDir / "train") + " --format xml --model " + p(kDir / "x")).code, 2);
}

TEST_F(Cli, RunWritesResultThatRerunsIdentically) {
  io::write_file(kDir / "exp.ini", "[train]\nformat = pan\npath = train\nlanguage = es\n"
                                   "[test]\nformat = pan\npath = test\nlanguage = es\n"
                                   "[experiment]\ntask = gender\n[output]\nresult = result.txt\n");
  auto o = cli("run " + p(kDir / "exp.ini"));
  ASSERT_EQ(o.code, 0) << o.err;
  const std::string first = io::read_file(kDir / "result.txt");
  EXPECT_NE(first.find("mode = external"), std::string::npos);
  o = cli("run " + p(kDir / "result.txt") + " --output -");
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_EQ(o.out.substr(0, o.out.find("[timings]")), first.substr(0, first.find("[timings]")));
}

TEST_F(Cli, SynthWritesLoadableCorpora) {
  ASSERT_EQ(cli("synth --kind csv --samples 10 --output " + p(kDir / "c.csv")).code, 0);
  corpus::CorpusSpec spec;
  spec.format = corpus::Format::kFlatCsv;
  spec.path = kDir / "c.csv";
  EXPECT_EQ(corpus::load_flat_csv(spec).size(), 20u);
  EXPECT_EQ(cli("synth --kind xml --output " + p(kDir / "z")).code, 2);
}
