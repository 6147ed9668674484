#ifndef SEMEME_SCORE_HPP
#define SEMEME_SCORE_HPP

#include <string>

#include "sememe/types.hpp"

namespace sememe {

/// Relevance of every candidate sememe to one word; indexed like the
/// sememe inventory of the annotation set the model was built from.
struct ScoreVector {
  std::string word;
  Vector scores;
};

}  // namespace sememe

#endif  // SEMEME_SCORE_HPP
