#ifndef SEMEME_PIPELINE_HPP
#define SEMEME_PIPELINE_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sememe/config.hpp"
#include "sememe/ensemble.hpp"
#include "sememe/evaluation.hpp"

namespace sememe {

/// Artifact names inside the output directory.
namespace artifact {
inline constexpr const char* kSememes = "sememes.txt";
inline constexpr const char* kTrain = "train.tsv";
inline constexpr const char* kDev = "dev.tsv";
inline constexpr const char* kTest = "test.tsv";
inline constexpr const char* kPmi = "pmi.tsv";
inline constexpr const char* kPositionIndex = "position_index.tsv";
inline constexpr const char* kManifest = "manifest.tsv";
inline constexpr const char* kSpse = "spse.ckpt";
inline constexpr const char* kSpseCsp = "spse_csp.ckpt";
inline constexpr const char* kSpcse = "spcse.ckpt";
inline constexpr const char* kReport = "report.txt";
}  // namespace artifact

/// Applies SEMEME_OUTPUT_DIR when set.
void apply_environment(PipelineConfig& config);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Filter, split, PMI and position index, plus a manifest of digests.
void cmd_prepare(const PipelineConfig& config, std::ostream& log);

enum class TrainTarget { Spse, Spcse };

/// Trains from prepared artifacts; per-epoch losses go to `<model>.loss.tsv`
/// and `log`. Training SPSE also produces the CSP variant.
void cmd_train(const PipelineConfig& config, TrainTarget which, std::ostream& log);

/// Loads every prepared artifact and checkpoint.
SememePredictor load_predictor(const PipelineConfig& config);

/// One JSON record per word. Returns the number of words that failed.
std::size_t cmd_predict(const PipelineConfig& config, const std::vector<std::string>& words, Index top_k,
                        std::ostream& out);
/// Same, on an already loaded predictor.
std::size_t predict_words(const SememePredictor& predictor, const std::vector<std::string>& words, Index top_k,
                          std::ostream& out);

/// MAP for all seven methods on the chosen split ("test" or "dev"), plus
/// the frequency table when a corpus is configured. The report is written
/// to the output directory and to `out`.
std::vector<MethodReport> cmd_evaluate(const PipelineConfig& config, std::string_view split, std::ostream& out);

}  // namespace sememe

#endif  // SEMEME_PIPELINE_HPP
