#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "groundnav/map.hpp"

namespace groundnav {

/// Word lists of the restricted command grammar. Multi-word entries such as
/// "close to" are matched as a unit.
struct LexiconConfig {
  /// Prefixes stripped in front of the destination, e.g. "go to".
  std::vector<std::string> motion_verbs = {
      "go to", "navigate to", "head to", "move to", "take me to", "walk to"};
  /// Verbs of the form "<verb> <object> to <destination>".
  std::vector<std::string> carry_verbs = {"bring", "deliver", "take", "carry"};
  std::vector<std::string> dummy_words = {"to", "of"};
  std::vector<std::string> proximity_words = {"near", "besides", "close to"};
  std::vector<std::string> articles = {"the", "a", "an"};
  /// Spatial words with no update type; chains containing them are rejected.
  std::vector<std::string> unsupported_words = {"between"};

  /// Dummy and proximity words.
  std::vector<std::string> prepositions() const;

  nlohmann::json to_json() const;
  static LexiconConfig from_json(const nlohmann::json& j);
};

struct Token {
  std::string text;
  std::size_t vocab_index = 0;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Closed vocabulary plus the frozen match-embedding table.
///
/// Match rows are unit-norm random directions whose pairwise absolute dot
/// products stay below the match threshold, so thresholded dot products
/// decide exact word identity. Index 0 is the out-of-vocabulary token.
class Lexicon {
 public:
  static constexpr std::size_t kOov = 0;
  static constexpr const char* kOovText = "<unk>";

  Lexicon(std::vector<std::string> vocabulary, Eigen::MatrixXd match_embeddings,
          LexiconConfig config);

  /// Vocabulary = area attribute words, compass words, grammar words.
  static Lexicon build(const AreaMap& map, const LexiconConfig& config,
                       double match_threshold, std::size_t match_width = 128,
                       std::uint64_t seed = 7);

  std::size_t size() const { return vocabulary_.size(); }
  std::size_t index(std::string_view word) const;
  const std::string& word(std::size_t index) const { return vocabulary_.at(index); }
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }
  const LexiconConfig& config() const { return config_; }

  std::vector<Token> tokenize(std::string_view text) const;
  std::vector<Token> encode(const std::vector<std::string>& words) const;

  /// One unit-norm row per token.
  Eigen::MatrixXd embed_match(const std::vector<Token>& tokens) const;
  const Eigen::MatrixXd& match_embeddings() const { return match_; }

  /// Largest |dot| between match rows of distinct vocabulary entries.
  double max_cross_similarity() const;

  nlohmann::json to_json() const;
  static Lexicon from_json(const nlohmann::json& j);

 private:
  std::vector<std::string> vocabulary_;
  std::unordered_map<std::string, std::size_t> lookup_;
  Eigen::MatrixXd match_;
  LexiconConfig config_;
};

}  // namespace groundnav
