#include "groundnav/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "groundnav/compass.hpp"
#include "groundnav/text.hpp"

namespace groundnav {

using nlohmann::json;

std::vector<std::string> LexiconConfig::prepositions() const {
  std::vector<std::string> out = dummy_words;
  out.insert(out.end(), proximity_words.begin(), proximity_words.end());
  return out;
}

json LexiconConfig::to_json() const {
  return json{{"motion_verbs", motion_verbs},     {"carry_verbs", carry_verbs},
              {"dummy_words", dummy_words},       {"proximity_words", proximity_words},
              {"articles", articles},             {"unsupported_words", unsupported_words}};
}

LexiconConfig LexiconConfig::from_json(const json& j) {
  LexiconConfig c;
  auto read = [&](const char* key, std::vector<std::string>& into) {
    if (j.contains(key)) into = j.at(key).get<std::vector<std::string>>();
  };
  read("motion_verbs", c.motion_verbs);
  read("carry_verbs", c.carry_verbs);
  read("dummy_words", c.dummy_words);
  read("proximity_words", c.proximity_words);
  read("articles", c.articles);
  read("unsupported_words", c.unsupported_words);
  return c;
}

Lexicon::Lexicon(std::vector<std::string> vocabulary,
                 Eigen::MatrixXd match_embeddings, LexiconConfig config)
    : vocabulary_(std::move(vocabulary)),
      match_(std::move(match_embeddings)),
      config_(std::move(config)) {
  if (vocabulary_.empty() || vocabulary_[kOov] != kOovText) {
    throw std::invalid_argument("vocabulary must start with the OOV token");
  }
  if (static_cast<std::size_t>(match_.rows()) != vocabulary_.size()) {
    throw std::invalid_argument("match table does not cover the vocabulary");
  }
  for (std::size_t i = 0; i < vocabulary_.size(); ++i) {
    if (!lookup_.emplace(vocabulary_[i], i).second) {
      throw std::invalid_argument("duplicate vocabulary word '" + vocabulary_[i] + "'");
    }
  }
}

Lexicon Lexicon::build(const AreaMap& map, const LexiconConfig& config,
                       double match_threshold, std::size_t match_width,
                       std::uint64_t seed) {
  std::set<std::string> words;
  for (const Area& a : map.areas()) {
    for (auto& w : a.attribute_tokens()) words.insert(std::move(w));
  }
  for (int i = 0; i < kCompassCount; ++i) {
    for (auto& w : split_words(compass_phrase(i))) words.insert(std::move(w));
  }
  for (const auto* list : {&config.motion_verbs, &config.carry_verbs,
                           &config.dummy_words, &config.proximity_words,
                           &config.articles, &config.unsupported_words}) {
    for (const auto& entry : *list) {
      for (auto& w : split_words(entry)) words.insert(std::move(w));
    }
  }
  words.erase(kOovText);
  std::vector<std::string> vocabulary{kOovText};
  vocabulary.insert(vocabulary.end(), words.begin(), words.end());

  const auto rows = static_cast<Eigen::Index>(vocabulary.size());
  const auto cols = static_cast<Eigen::Index>(match_width);
  Eigen::MatrixXd match(rows, cols);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw_row = [&](Eigen::Index r) {
    for (Eigen::Index c = 0; c < cols; ++c) match(r, c) = normal(rng);
    match.row(r).normalize();
  };
  constexpr int kMaxAttempts = 1000;
  for (Eigen::Index r = 0; r < rows; ++r) {
    int attempt = 0;
    for (;; ++attempt) {
      if (attempt == kMaxAttempts) {
        throw std::runtime_error(
            "cannot draw near-orthogonal match embeddings; raise match_width");
      }
      draw_row(r);
      bool ok = true;
      for (Eigen::Index q = 0; q < r && ok; ++q) {
        ok = std::abs(match.row(r).dot(match.row(q))) < match_threshold;
      }
      if (ok) break;
    }
  }
  return Lexicon(std::move(vocabulary), std::move(match), config);
}

std::size_t Lexicon::index(std::string_view word) const {
  const auto it = lookup_.find(std::string(word));
  return it == lookup_.end() ? kOov : it->second;
}

std::vector<Token> Lexicon::encode(const std::vector<std::string>& words) const {
  std::vector<Token> tokens;
  tokens.reserve(words.size());
  for (const auto& w : words) tokens.push_back(Token{w, index(w)});
  return tokens;
}

std::vector<Token> Lexicon::tokenize(std::string_view text) const {
  return encode(split_words(text));
}

Eigen::MatrixXd Lexicon::embed_match(const std::vector<Token>& tokens) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(tokens.size()), match_.cols());
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    out.row(static_cast<Eigen::Index>(t)) =
        match_.row(static_cast<Eigen::Index>(tokens[t].vocab_index));
  }
  return out;
}

double Lexicon::max_cross_similarity() const {
  const Eigen::MatrixXd gram = match_ * match_.transpose();
  double worst = 0.0;
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < gram.cols(); ++j) {
      worst = std::max(worst, std::abs(gram(i, j)));
    }
  }
  return worst;
}

json Lexicon::to_json() const {
  json rows = json::array();
  for (Eigen::Index r = 0; r < match_.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(match_.cols()));
    for (Eigen::Index c = 0; c < match_.cols(); ++c) {
      row[static_cast<std::size_t>(c)] = match_(r, c);
    }
    rows.push_back(std::move(row));
  }
  return json{{"vocabulary", vocabulary_},
              {"match_embeddings", std::move(rows)},
              {"config", config_.to_json()}};
}

Lexicon Lexicon::from_json(const json& j) {
  auto vocabulary = j.at("vocabulary").get<std::vector<std::string>>();
  const json& rows = j.at("match_embeddings");
  if (rows.size() != vocabulary.size() || rows.empty()) {
    throw std::invalid_argument("match table does not cover the vocabulary");
  }
  const auto width = static_cast<Eigen::Index>(rows.at(0).size());
  Eigen::MatrixXd match(static_cast<Eigen::Index>(rows.size()), width);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto row = rows[r].get<std::vector<double>>();
    if (static_cast<Eigen::Index>(row.size()) != width) {
      throw std::invalid_argument("ragged match table");
    }
    for (Eigen::Index c = 0; c < width; ++c) {
      match(static_cast<Eigen::Index>(r), c) = row[static_cast<std::size_t>(c)];
    }
  }
  return Lexicon(std::move(vocabulary), std::move(match),
                 LexiconConfig::from_json(j.at("config")));
}

}  // namespace groundnav
