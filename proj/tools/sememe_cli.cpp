// sememe: prepare data, train models, predict and evaluate sememes.
//
//   sememe prepare  --config run.cfg
//   sememe train    --config run.cfg spse|spcse
//   sememe predict  --config run.cfg -k 5 WORD... [--words-file FILE]
//   sememe evaluate --config run.cfg [--split test|dev]
//
// Exit codes: 0 ok, 1 usage, 2 config, 3 data, 4 numeric, 5 every prediction failed.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sememe/config.hpp"
#include "sememe/error.hpp"
#include "sememe/io.hpp"
#include "sememe/pipeline.hpp"

namespace {

int exit_code(sememe::ErrorCategory category) {
  switch (category) {
    case sememe::ErrorCategory::Config: return 2;
    case sememe::ErrorCategory::Data: return 3;
    case sememe::ErrorCategory::Numeric: return 4;
  }
  return 3;
}

sememe::PipelineConfig resolve_config(const std::string& path, const std::vector<std::string>& overrides) {
  auto config = path.empty() ? sememe::PipelineConfig{} : sememe::load_config(path);
  sememe::apply_environment(config);
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw sememe::Error(sememe::Errc::Config, "--set expects key=value, got '" + item + "'");
    sememe::set_config_value(config, sememe::trim(std::string_view(item).substr(0, eq)),
                             std::string_view(item).substr(eq + 1), std::filesystem::current_path());
  }
  config.validate();
  return config;
}

std::vector<std::string> read_word_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw sememe::Error(sememe::Errc::Io, "cannot read word list '" + path + "'");
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    const auto word = sememe::trim(line);
    if (!word.empty()) words.emplace_back(word);
  }
  return words;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sememe prediction from word embeddings and characters"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("-c,--config", config_path, "Configuration file (key = value lines)");
  app.add_option("-s,--set", overrides, "Override a config key, e.g. --set spse.epochs=5");
  bool dump_config = false;
  app.add_flag("--dump-config", dump_config, "Print the effective configuration to stderr");

  auto* prepare = app.add_subcommand("prepare", "Filter, split, and index the annotations");

  auto* train = app.add_subcommand("train", "Train SPSE or SPCSE from prepared artifacts");
  std::string target;
  train->add_option("model", target, "spse or spcse")->required()->check(CLI::IsMember({"spse", "spcse"}));

  auto* predict = app.add_subcommand("predict", "Rank sememes for words with the full ensemble");
  std::vector<std::string> words;
  std::string words_file;
  sememe::Index top_k = 5;
  predict->add_option("words", words, "Words to predict");
  predict->add_option("--words-file", words_file, "File with one word per line");
  predict->add_option("-k,--top-k", top_k, "Sememes per word")->check(CLI::PositiveNumber);

  auto* evaluate = app.add_subcommand("evaluate", "MAP of every method on a held-out split");
  std::string split = "test";
  evaluate->add_option("--split", split, "test or dev")->check(CLI::IsMember({"test", "dev"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    const auto config = resolve_config(config_path, overrides);
    if (dump_config) sememe::write_config(std::cerr, config);

    if (prepare->parsed()) {
      sememe::cmd_prepare(config, std::cerr);
    } else if (train->parsed()) {
      sememe::cmd_train(config, target == "spse" ? sememe::TrainTarget::Spse : sememe::TrainTarget::Spcse,
                        std::cerr);
    } else if (predict->parsed()) {
      if (!words_file.empty()) {
        auto more = read_word_list(words_file);
        words.insert(words.end(), more.begin(), more.end());
      }
      if (words.empty()) throw sememe::Error(sememe::Errc::Config, "predict needs at least one word");
      const auto failed = sememe::cmd_predict(config, words, top_k, std::cout);
      if (failed == words.size()) return 5;
    } else if (evaluate->parsed()) {
      sememe::cmd_evaluate(config, split, std::cout);
    }
  } catch (const sememe::Error& e) {
    std::cerr << "error [" << sememe::errc_name(e.code()) << "]: " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
