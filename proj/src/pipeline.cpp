#include "sememe/pipeline.hpp"

#include <array>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <openssl/evp.h>

#include "json.hpp"
#include "sememe/error.hpp"
#include "sememe/io.hpp"

namespace sememe {

namespace fs = std::filesystem;

namespace {

void require_input(std::string_view field, const fs::path& path) {
  if (path.empty()) throw Error(Errc::Config, std::string(field) + ": no path configured");
  if (!fs::is_regular_file(path)) {
    throw Error(Errc::Config, std::string(field) + ": file '" + path.string() + "' does not exist");
  }
}

fs::path prepared(const PipelineConfig& config, const char* name) {
  const auto path = config.output_dir / name;
  if (!fs::is_regular_file(path)) {
    throw Error(Errc::Io, "missing prepared artifact '" + path.string() + "'; run prepare first");
  }
  return path;
}

std::vector<std::string> load_inventory(const fs::path& path) {
  auto in = open_input(path);
  std::vector<std::string> inventory;
  std::string line;
  while (std::getline(in, line)) {
    if (!trim(line).empty()) inventory.emplace_back(trim(line));
  }
  if (inventory.empty()) throw Error(Errc::EmptyDataset, path.string() + ": empty sememe inventory");
  return inventory;
}

// Split files may be empty (a zero-sized dev set).
AnnotationSet load_split(const fs::path& path, const std::vector<std::string>& inventory) {
  auto in = open_input(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  if (trim(buffer.str()).empty()) return AnnotationSet({}, inventory, {});
  return align_to_inventory(read_annotations(buffer, path.string()), inventory);
}

template <typename Writer>
void write_artifact(const fs::path& path, Writer&& writer) {
  auto out = open_output(path);
  writer(out);
  out.flush();
  if (!out) throw Error(Errc::Io, "failed writing '" + path.string() + "'");
}

EpochObserver loss_logger(std::ostream& file, std::ostream& log, const std::string& model) {
  return [&file, &log, model](int epoch, double loss) {
    file << epoch << '\t' << format_real(loss) << '\n';
    log << model << " epoch " << epoch << " loss " << format_real(loss) << '\n';
  };
}

const char* split_file(std::string_view split) {
  if (split == "test") return artifact::kTest;
  if (split == "dev") return artifact::kDev;
  throw Error(Errc::Config, "unknown split '" + std::string(split) + "' (expected test or dev)");
}

}  // namespace

void apply_environment(PipelineConfig& config) {
  if (const char* dir = std::getenv("SEMEME_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
    config.output_dir = fs::path(dir).lexically_normal();
  }
}

std::string sha256_file(const fs::path& path) {
  auto in = open_input(path);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::Io, "SHA-256 unavailable");
  }
  std::array<char, 1 << 16> buffer{};
  while (in) {
    in.read(buffer.data(), buffer.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &length);
  std::ostringstream hex;
  for (unsigned int n = 0; n < length; ++n) hex << std::hex << std::setw(2) << std::setfill('0') << int{digest[n]};
  return hex.str();
}

void cmd_prepare(const PipelineConfig& config, std::ostream& log) {
  config.validate();
  require_input("annotations", config.annotations);

  const auto all = load_annotations(config.annotations);
  const auto filtered = filter_sememes(all, config.min_count);
  log << "annotations: " << all.word_count() << " words, " << all.sememe_count() << " sememes; after min_count "
      << config.min_count << ": " << filtered.word_count() << " words, " << filtered.sememe_count() << " sememes\n";

  const auto split = split_dataset(filtered, config.split, config.seed);
  const auto pmi = compute_pmi(split.train);
  const auto position = build_position_index(split.train);

  fs::create_directories(config.output_dir);
  const auto& dir = config.output_dir;
  write_artifact(dir / artifact::kSememes, [&](std::ostream& out) {
    for (const auto& s : filtered.sememes()) out << s << '\n';
  });
  write_artifact(dir / artifact::kTrain, [&](std::ostream& out) { write_annotations(out, split.train); });
  write_artifact(dir / artifact::kDev, [&](std::ostream& out) { write_annotations(out, split.dev); });
  write_artifact(dir / artifact::kTest, [&](std::ostream& out) { write_annotations(out, split.test); });
  write_artifact(dir / artifact::kPmi, [&](std::ostream& out) { write_correlation(out, pmi); });
  write_artifact(dir / artifact::kPositionIndex, [&](std::ostream& out) { write_position_index(out, position); });

  write_artifact(dir / artifact::kManifest, [&](std::ostream& out) {
    out << "seed\t" << config.seed << '\n';
    out << "min_count\t" << config.min_count << '\n';
    out << "words\t" << filtered.word_count() << '\n';
    out << "sememes\t" << filtered.sememe_count() << '\n';
    out << "split.train\t" << split.train.word_count() << '\n';
    out << "split.dev\t" << split.dev.word_count() << '\n';
    out << "split.test\t" << split.test.word_count() << '\n';
    out << "pmi_pairs\t" << pmi.entries().size() << '\n';
    for (const char* name : {artifact::kSememes, artifact::kTrain, artifact::kDev, artifact::kTest, artifact::kPmi,
                             artifact::kPositionIndex}) {
      out << "sha256\t" << name << '\t' << sha256_file(dir / name) << '\n';
    }
  });
  log << "split: " << split.train.word_count() << " train, " << split.dev.word_count() << " dev, "
      << split.test.word_count() << " test\n";
  log << "wrote " << (dir / artifact::kManifest).string() << '\n';
}

void cmd_train(const PipelineConfig& config, TrainTarget which, std::ostream& log) {
  config.validate();
  const auto inventory = load_inventory(prepared(config, artifact::kSememes));
  const auto train = load_split(prepared(config, artifact::kTrain), inventory);
  auto pmi_in = open_input(prepared(config, artifact::kPmi));
  const auto pmi = read_correlation(pmi_in, static_cast<Index>(inventory.size()), artifact::kPmi);
  const auto& dir = config.output_dir;

  if (which == TrainTarget::Spse) {
    require_input("word_embeddings", config.word_embeddings);
    const auto emb = load_word_embeddings(config.word_embeddings, config.word_dim);

    SpseModel model;
    write_artifact(dir / "spse.loss.tsv", [&](std::ostream& out) {
      model = train_spse(train, pmi, emb, config.spse, loss_logger(out, log, "SPSE"));
    });
    save_spse(dir / artifact::kSpse, model);
    log << "wrote " << (dir / artifact::kSpse).string() << '\n';

    if (config.ensemble.csp_lambda != config.spse.lambda) {
      auto hyper = config.spse;
      hyper.lambda = config.ensemble.csp_lambda;
      write_artifact(dir / "spse_csp.loss.tsv", [&](std::ostream& out) {
        model = train_spse(train, pmi, emb, hyper, loss_logger(out, log, "SPSE(csp)"));
      });
    }
    save_spse(dir / artifact::kSpseCsp, model);
    log << "wrote " << (dir / artifact::kSpseCsp).string() << '\n';
    return;
  }

  require_input("char_embeddings", config.char_embeddings);
  const auto chars = load_char_embeddings(config.char_embeddings, config.char_dim, config.n_prototypes);
  SpcseModel model;
  write_artifact(dir / "spcse.loss.tsv", [&](std::ostream& out) {
    model = train_spcse(train, pmi, chars, config.spcse, loss_logger(out, log, "SPCSE"));
  });
  save_spcse(dir / artifact::kSpcse, model);
  log << "wrote " << (dir / artifact::kSpcse).string() << '\n';
}

SememePredictor load_predictor(const PipelineConfig& config) {
  config.validate();
  require_input("word_embeddings", config.word_embeddings);
  require_input("char_embeddings", config.char_embeddings);

  const auto inventory = load_inventory(prepared(config, artifact::kSememes));
  auto position_in = open_input(prepared(config, artifact::kPositionIndex));

  SememePredictor::Models models;
  models.train = load_split(prepared(config, artifact::kTrain), inventory);
  models.words = load_word_embeddings(config.word_embeddings, config.word_dim);
  models.chars = load_char_embeddings(config.char_embeddings, config.char_dim, config.n_prototypes);
  models.spwe = config.spwe;
  models.spse = load_spse(prepared(config, artifact::kSpse));
  models.spse_csp = load_spse(prepared(config, artifact::kSpseCsp));
  models.position = read_position_index(position_in, static_cast<Index>(inventory.size()), artifact::kPositionIndex);
  models.spcse = load_spcse(prepared(config, artifact::kSpcse));
  models.weights = config.ensemble;

  for (const auto* model : {&models.spse.sememes, &models.spse_csp.sememes, &models.spcse.sememes}) {
    if (*model != inventory) {
      throw Error(Errc::IndexMismatch, "checkpoint sememe inventory differs from the prepared one; retrain");
    }
  }
  return SememePredictor(std::move(models));
}

std::size_t predict_words(const SememePredictor& predictor, const std::vector<std::string>& words, Index top_k,
                          std::ostream& out) {
  if (top_k < 1) throw Error(Errc::Config, "top-k must be >= 1");
  std::size_t failed = 0;
  for (const auto& word : words) {
    nlohmann::ordered_json record;
    record["word"] = word;
    try {
      const auto prediction = predictor.csp(word);
      record["status"] = "ok";
      record["sources"] = sources_name(prediction.sources);
      record["fallback"] = prediction.fallback;
      auto sememes = nlohmann::ordered_json::array();
      const auto n = std::min<std::size_t>(static_cast<std::size_t>(top_k), prediction.ranking.order.size());
      for (std::size_t r = 0; r < n; ++r) {
        const auto j = prediction.ranking.order[r];
        sememes.push_back({{"sememe", predictor.train().sememe(j)}, {"score", prediction.ranking.scores[j]}});
      }
      record["sememes"] = std::move(sememes);
    } catch (const Error& e) {
      if (e.category() != ErrorCategory::Data) throw;
      ++failed;
      record["status"] = errc_name(e.code());
      record["message"] = e.what();
    }
    out << record.dump() << '\n';
  }
  return failed;
}

std::size_t cmd_predict(const PipelineConfig& config, const std::vector<std::string>& words, Index top_k,
                        std::ostream& out) {
  return predict_words(load_predictor(config), words, top_k, out);
}

std::vector<MethodReport> cmd_evaluate(const PipelineConfig& config, std::string_view split, std::ostream& out) {
  const char* split_name = split_file(split);
  const auto predictor = load_predictor(config);
  const auto test = load_split(prepared(config, split_name), predictor.train().sememes());
  if (test.empty()) throw Error(Errc::EvaluationEmpty, "the " + std::string(split) + " split has no words");

  std::optional<CorpusFrequencies> freqs;
  if (!config.corpus.empty()) {
    require_input("corpus", config.corpus);
    freqs = load_corpus_frequencies(config.corpus);
  }

  std::vector<MethodReport> reports;
  for (const auto method : kAllMethods) {
    const Predictor predict = [&predictor, method](std::string_view word) { return predictor.predict(method, word); };
    MethodReport report;
    report.method = method_name(method);
    report.overall = summarize(score_words(predict, test, config.threads));
    if (freqs) {
      report.buckets =
          evaluate_buckets(predict, test, *freqs, config.bucket_bounds, config.exclusions, config.threads);
    }
    reports.push_back(std::move(report));
  }

  const auto report_path =
      config.output_dir / (split == "test" ? std::string(artifact::kReport) : "report." + std::string(split) + ".txt");
  write_artifact(report_path, [&](std::ostream& file) { write_report(file, reports); });
  write_report(out, reports);
  return reports;
}

}  // namespace sememe
