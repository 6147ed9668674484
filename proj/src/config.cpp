#include "sememe/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>

#include "sememe/error.hpp"
#include "sememe/io.hpp"

namespace sememe {

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(Errc::Config, "invalid value '" + std::string(value) + "' for key '" + std::string(key) + "'");
}

double as_real(std::string_view key, std::string_view value) {
  double v;
  if (!parse_real(value, v)) bad_value(key, value);
  return v;
}

long long as_integer(std::string_view key, std::string_view value) {
  long long v;
  if (!parse_integer(value, v)) bad_value(key, value);
  return v;
}

std::uint64_t as_unsigned(std::string_view key, std::string_view value) {
  std::uint64_t v = 0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || end != value.data() + value.size()) bad_value(key, value);
  return v;
}

bool as_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  bad_value(key, value);
}

std::filesystem::path as_path(std::string_view value, const std::filesystem::path& base_dir) {
  if (value.empty()) return {};
  std::filesystem::path p{std::string(value)};
  if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
  return p.lexically_normal();
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

struct Field {
  const char* key;
  std::function<void(PipelineConfig&, std::string_view, const std::filesystem::path&)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

template <typename T>
Field real_field(const char* key, T PipelineConfig::*group, double T::*member) {
  return {key, [=](PipelineConfig& c, std::string_view v, const auto&) { (c.*group).*member = as_real(key, v); },
          [=](const PipelineConfig& c) { return format_real((c.*group).*member); }};
}

Field path_field(const char* key, std::filesystem::path PipelineConfig::*member) {
  return {key, [=](PipelineConfig& c, std::string_view v, const auto& base) { c.*member = as_path(v, base); },
          [=](const PipelineConfig& c) { return (c.*member).string(); }};
}

Field bool_field(const char* key, bool ExclusionRules::*member) {
  return {key, [=](PipelineConfig& c, std::string_view v, const auto&) { c.exclusions.*member = as_bool(key, v); },
          [=](const PipelineConfig& c) { return bool_text(c.exclusions.*member); }};
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      path_field("annotations", &PipelineConfig::annotations),
      path_field("word_embeddings", &PipelineConfig::word_embeddings),
      path_field("char_embeddings", &PipelineConfig::char_embeddings),
      path_field("corpus", &PipelineConfig::corpus),
      path_field("output_dir", &PipelineConfig::output_dir),
      {"word_dim", [](PipelineConfig& c, std::string_view v, const auto&) { c.word_dim = as_integer("word_dim", v); },
       [](const PipelineConfig& c) { return std::to_string(c.word_dim); }},
      {"char_dim", [](PipelineConfig& c, std::string_view v, const auto&) { c.char_dim = as_integer("char_dim", v); },
       [](const PipelineConfig& c) { return std::to_string(c.char_dim); }},
      {"n_prototypes",
       [](PipelineConfig& c, std::string_view v, const auto&) {
         c.n_prototypes = static_cast<int>(as_integer("n_prototypes", v));
       },
       [](const PipelineConfig& c) { return std::to_string(c.n_prototypes); }},
      {"min_count",
       [](PipelineConfig& c, std::string_view v, const auto&) { c.min_count = as_integer("min_count", v); },
       [](const PipelineConfig& c) { return std::to_string(c.min_count); }},
      {"split.train",
       [](PipelineConfig& c, std::string_view v, const auto&) { c.split.train = as_integer("split.train", v); },
       [](const PipelineConfig& c) { return std::to_string(c.split.train); }},
      {"split.dev", [](PipelineConfig& c, std::string_view v, const auto&) { c.split.dev = as_integer("split.dev", v); },
       [](const PipelineConfig& c) { return std::to_string(c.split.dev); }},
      {"split.test",
       [](PipelineConfig& c, std::string_view v, const auto&) { c.split.test = as_integer("split.test", v); },
       [](const PipelineConfig& c) { return std::to_string(c.split.test); }},
      {"seed", [](PipelineConfig& c, std::string_view v, const auto&) { c.seed = as_unsigned("seed", v); },
       [](const PipelineConfig& c) { return std::to_string(c.seed); }},
      real_field("spwe.c", &PipelineConfig::spwe, &SpweConfig::c),
      {"spwe.k", [](PipelineConfig& c, std::string_view v, const auto&) { c.spwe.k = as_integer("spwe.k", v); },
       [](const PipelineConfig& c) { return std::to_string(c.spwe.k); }},
      real_field("spse.lambda", &PipelineConfig::spse, &SpseHyper::lambda),
      real_field("spse.zero_prob", &PipelineConfig::spse, &SpseHyper::zero_sample_prob),
      {"spse.epochs",
       [](PipelineConfig& c, std::string_view v, const auto&) {
         c.spse.epochs = static_cast<int>(as_integer("spse.epochs", v));
       },
       [](const PipelineConfig& c) { return std::to_string(c.spse.epochs); }},
      real_field("spse.lr", &PipelineConfig::spse, &SpseHyper::lr0),
      {"spse.seed", [](PipelineConfig& c, std::string_view v, const auto&) { c.spse.seed = as_unsigned("spse.seed", v); },
       [](const PipelineConfig& c) { return std::to_string(c.spse.seed); }},
      real_field("spcse.lambda", &PipelineConfig::spcse, &SpcseHyper::lambda),
      real_field("spcse.zero_prob", &PipelineConfig::spcse, &SpcseHyper::zero_sample_prob),
      {"spcse.epochs",
       [](PipelineConfig& c, std::string_view v, const auto&) {
         c.spcse.epochs = static_cast<int>(as_integer("spcse.epochs", v));
       },
       [](const PipelineConfig& c) { return std::to_string(c.spcse.epochs); }},
      real_field("spcse.lr", &PipelineConfig::spcse, &SpcseHyper::lr0),
      {"spcse.seed",
       [](PipelineConfig& c, std::string_view v, const auto&) { c.spcse.seed = as_unsigned("spcse.seed", v); },
       [](const PipelineConfig& c) { return std::to_string(c.spcse.seed); }},
      real_field("ensemble.spwe_spse", &PipelineConfig::ensemble, &EnsembleWeights::spwe_spse),
      real_field("ensemble.csp_spwe_spse", &PipelineConfig::ensemble, &EnsembleWeights::csp_spwe_spse),
      real_field("ensemble.spwcf_spcse", &PipelineConfig::ensemble, &EnsembleWeights::spwcf_spcse),
      real_field("ensemble.internal_external", &PipelineConfig::ensemble, &EnsembleWeights::internal_external),
      real_field("ensemble.csp_lambda", &PipelineConfig::ensemble, &EnsembleWeights::csp_lambda),
      {"buckets",
       [](PipelineConfig& c, std::string_view v, const auto&) {
         std::vector<std::uint64_t> bounds;
         for (auto item : split_on(v, ',')) {
           item = trim(item);
           if (!item.empty()) bounds.push_back(as_unsigned("buckets", item));
         }
         c.bucket_bounds = std::move(bounds);
       },
       [](const PipelineConfig& c) {
         std::string text;
         for (std::size_t n = 0; n < c.bucket_bounds.size(); ++n) {
           if (n) text += ',';
           text += std::to_string(c.bucket_bounds[n]);
         }
         return text;
       }},
      bool_field("exclude.numerals", &ExclusionRules::numerals),
      bool_field("exclude.punctuation", &ExclusionRules::punctuation),
      bool_field("exclude.single_character", &ExclusionRules::single_character),
      bool_field("exclude.zero_frequency", &ExclusionRules::zero_frequency),
      bool_field("exclude.foreign_abbreviations", &ExclusionRules::foreign_abbreviations),
      {"threads",
       [](PipelineConfig& c, std::string_view v, const auto&) { c.threads = static_cast<int>(as_integer("threads", v)); },
       [](const PipelineConfig& c) { return std::to_string(c.threads); }},
  };
  return table;
}

const Field& field(std::string_view key) {
  for (const auto& f : fields()) {
    if (key == f.key) return f;
  }
  throw Error(Errc::Config, "unknown config key '" + std::string(key) + "'");
}

}  // namespace

void PipelineConfig::validate() const {
  if (word_dim < 1 || char_dim < 1) throw Error(Errc::Config, "embedding dimensions must be positive");
  if (n_prototypes < 1) throw Error(Errc::Config, "n_prototypes must be positive");
  if (min_count < 1) throw Error(Errc::Config, "min_count must be >= 1");
  if (split.train < 1 || split.dev < 0 || split.test < 1) {
    throw Error(Errc::Config, "split sizes need train >= 1, dev >= 0, test >= 1");
  }
  if (threads < 1) throw Error(Errc::Config, "threads must be >= 1");
  for (std::size_t n = 1; n < bucket_bounds.size(); ++n) {
    if (bucket_bounds[n] <= bucket_bounds[n - 1]) throw Error(Errc::Config, "buckets must be strictly increasing");
  }
  spwe.validate();
  spse.validate();
  spcse.validate();
  ensemble.validate();
}

bool operator==(const PipelineConfig& a, const PipelineConfig& b) {
  for (const auto& f : fields()) {
    if (f.get(a) != f.get(b)) return false;
  }
  return true;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& f : fields()) keys.emplace_back(f.key);
  return keys;
}

void set_config_value(PipelineConfig& config, std::string_view key, std::string_view value,
                      const std::filesystem::path& base_dir) {
  field(key).set(config, trim(value), base_dir);
}

std::string get_config_value(const PipelineConfig& config, std::string_view key) { return field(key).get(config); }

PipelineConfig parse_config(std::istream& in, const std::filesystem::path& base_dir, const std::string& source) {
  PipelineConfig config;
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view text = line;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) text = text.substr(0, hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw Error(Errc::Config, source + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      set_config_value(config, trim(text.substr(0, eq)), trim(text.substr(eq + 1)), base_dir);
    } catch (const Error& e) {
      throw Error(Errc::Config, source + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return config;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Config, "cannot read config file '" + path.string() + "'");
  return parse_config(in, path.parent_path(), path.string());
}

void write_config(std::ostream& out, const PipelineConfig& config) {
  for (const auto& f : fields()) out << f.key << " = " << f.get(config) << '\n';
}

}  // namespace sememe
