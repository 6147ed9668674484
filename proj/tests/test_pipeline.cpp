#include <cstdlib>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "sememe/error.hpp"
#include "sememe/io.hpp"
#include "sememe/pipeline.hpp"

using namespace sememe;
namespace fs = std::filesystem;

namespace {

PipelineConfig fixture_config(const std::string& name) {
  auto config = load_config(fs::path(SEMEME_SOURCE_DIR) / "data/fixture/fixture.cfg");
  config.output_dir = fs::temp_directory_path() / ("sememe_pipeline_" + name);
  fs::remove_all(config.output_dir);
  return config;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<double> losses(const fs::path& path) {
  std::vector<double> out;
  std::istringstream in(slurp(path));
  int epoch;
  std::string value;
  while (in >> epoch >> value) {
    double v;
    parse_real(value, v);
    out.push_back(v);
  }
  return out;
}

PipelineConfig trained(const std::string& name) {
  auto config = fixture_config(name);
  std::ostringstream log;
  cmd_prepare(config, log);
  cmd_train(config, TrainTarget::Spse, log);
  cmd_train(config, TrainTarget::Spcse, log);
  return config;
}

}  // namespace

TEST(Prepare, ManifestIsReproducible) {
  auto config = fixture_config("prepare");
  std::ostringstream log;
  cmd_prepare(config, log);
  const auto first = slurp(config.output_dir / artifact::kManifest);
  cmd_prepare(config, log);
  EXPECT_EQ(slurp(config.output_dir / artifact::kManifest), first);
  EXPECT_NE(first.find("split.train\t14\n"), std::string::npos) << first;
  EXPECT_NE(first.find("split.test\t5\n"), std::string::npos);
  EXPECT_EQ(first.find(config.output_dir.string()), std::string::npos);
  EXPECT_EQ(sha256_file(config.output_dir / artifact::kTrain).size(), 64u);
}

TEST(Prepare, MissingAnnotationFileNamesTheField) {
  auto config = fixture_config("missing");
  config.annotations = "/nonexistent/annotations.tsv";
  std::ostringstream log;
  try {
    cmd_prepare(config, log);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::Config);
    EXPECT_NE(std::string(e.what()).find("annotations"), std::string::npos);
  }
}

TEST(Train, NeedsPreparedArtifacts) {
  auto config = fixture_config("unprepared");
  std::ostringstream log;
  EXPECT_THROW(cmd_train(config, TrainTarget::Spse, log), Error);
}

TEST(Train, ZeroEpochsWritesInitialization) {
  auto config = fixture_config("zero_epochs");
  config.spse.epochs = 0;
  std::ostringstream log;
  cmd_prepare(config, log);
  cmd_train(config, TrainTarget::Spse, log);
  EXPECT_EQ(losses(config.output_dir / "spse.loss.tsv").size(), 1u);
  const auto model = load_spse(config.output_dir / artifact::kSpse);
  EXPECT_TRUE(model.params.row_bias.isZero(0.0));
  EXPECT_TRUE(model.params.sememe_bias.isZero(0.0));
}

TEST(Train, FixtureLossDecreases) {
  const auto config = trained("train");
  for (const char* log : {"spse.loss.tsv", "spse_csp.loss.tsv", "spcse.loss.tsv"}) {
    const auto l = losses(config.output_dir / log);
    ASSERT_EQ(l.size(), 51u) << log;
    EXPECT_LT(l.back(), l.front()) << log;
  }
}

TEST(Predict, RecordsAndFailures) {
  const auto config = trained("predict");
  const auto predictor = load_predictor(config);
  std::ostringstream out;
  const std::vector<std::string> words = {"火车", "车山", "xyz"};
  EXPECT_EQ(predict_words(predictor, words, 5, out), 1u);

  std::istringstream lines(out.str());
  std::string line;
  std::vector<nlohmann::json> records;
  while (std::getline(lines, line)) records.push_back(nlohmann::json::parse(line));
  ASSERT_EQ(records.size(), 3u);
  EXPECT_EQ(records[0]["status"], "ok");
  EXPECT_EQ(records[0]["sources"], "both");
  EXPECT_EQ(records[0]["sememes"].size(), 5u);
  EXPECT_EQ(records[1]["sources"], "internal");
  EXPECT_EQ(records[1]["fallback"], true);
  EXPECT_EQ(records[2]["status"], "Unpredictable");

  std::ostringstream none;
  EXPECT_EQ(predict_words(predictor, {"xyz", "abc"}, 5, none), 2u);
}

TEST(Predict, TrainWordsRankGoldFirst) {
  const auto config = trained("gold");
  const auto predictor = load_predictor(config);
  const auto& train = predictor.train();
  for (Index i = 0; i < train.word_count(); ++i) {
    const auto gold = train.sememes_of(i);
    const auto top = static_cast<std::ptrdiff_t>(gold.size());
    const auto spwcf = rank_scores(predictor.spwcf(train.word(i)));
    std::vector<Index> head(spwcf.order.begin(), spwcf.order.begin() + top);
    std::sort(head.begin(), head.end());
    EXPECT_EQ(head, std::vector<Index>(gold.begin(), gold.end())) << train.word(i);

    const auto csp = predictor.csp(train.word(i)).ranking.order;
    for (auto j : gold) {
      EXPECT_NE(std::find(csp.begin(), csp.begin() + 5, j), csp.begin() + 5) << train.word(i);
    }
  }
}

TEST(Evaluate, SevenMethodsAndSevenBuckets) {
  const auto config = trained("evaluate");
  std::ostringstream out;
  const auto reports = cmd_evaluate(config, "test", out);
  ASSERT_EQ(reports.size(), 7u);
  for (const auto& r : reports) {
    ASSERT_TRUE(r.buckets);
    EXPECT_EQ(r.buckets->buckets.size(), 7u);
  }
  EXPECT_EQ(slurp(config.output_dir / artifact::kReport), out.str());
  for (const char* row : {"\nSPWE\t", "\nSPSE\t", "\nSPWE+SPSE\t", "\nSPWCF\t", "\nSPCSE\t", "\nSPWCF+SPCSE\t",
                          "\nCSP\t"}) {
    EXPECT_NE(out.str().find(row), std::string::npos) << row;
  }
  EXPECT_NE(out.str().find("<=50\t51-100\t101-1000\t1001-5000\t5001-10000\t10001-30000\t>30000"),
            std::string::npos);
}

TEST(Environment, OutputDirOverride) {
  PipelineConfig config;
  ::setenv("SEMEME_OUTPUT_DIR", "/tmp/elsewhere", 1);
  apply_environment(config);
  ::unsetenv("SEMEME_OUTPUT_DIR");
  EXPECT_EQ(config.output_dir, fs::path("/tmp/elsewhere"));
}
