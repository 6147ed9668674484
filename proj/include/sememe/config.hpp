#ifndef SEMEME_CONFIG_HPP
#define SEMEME_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "sememe/ensemble.hpp"
#include "sememe/evaluation.hpp"
#include "sememe/external.hpp"
#include "sememe/internal.hpp"
#include "sememe/kb.hpp"

namespace sememe {

/// Every setting of the prepare/train/predict/evaluate pipeline. Defaults
/// reproduce the published experimental setup.
struct PipelineConfig {
  std::filesystem::path annotations;
  std::filesystem::path word_embeddings;
  std::filesystem::path char_embeddings;
  std::filesystem::path corpus;  // optional; enables the frequency table
  std::filesystem::path output_dir = "out";

  Index word_dim = 200;
  Index char_dim = 200;
  int n_prototypes = 3;

  Index min_count = 5;
  SplitSizes split{48000, 6000, 6000};
  std::uint64_t seed = 1;

  SpweConfig spwe;
  SpseHyper spse;
  SpcseHyper spcse;
  EnsembleWeights ensemble;

  std::vector<std::uint64_t> bucket_bounds = default_bucket_bounds();
  ExclusionRules exclusions;
  int threads = 1;

  /// Range checks on every hyperparameter.
  void validate() const;
};

bool operator==(const PipelineConfig& a, const PipelineConfig& b);

/// Names of all recognized keys, in serialization order.
std::vector<std::string> config_keys();

/// Sets one key from its text form. Relative paths are resolved against
/// `base_dir`. Unknown keys and unparsable values throw Error(Config).
void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value,
                      const std::filesystem::path& base_dir = {});
std::string get_config_value(const PipelineConfig& config, std::string_view key);

/// `key = value` lines; `#` starts a comment.
PipelineConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {},
                            const std::string& source = "<config>");
PipelineConfig load_config(const std::filesystem::path& path);
void write_config(std::ostream& out, const PipelineConfig& config);

}  // namespace sememe

#endif  // SEMEME_CONFIG_HPP
