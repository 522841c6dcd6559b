#include "groundnav/parser.hpp"

#include <algorithm>

#include "groundnav/error.hpp"
#include "groundnav/text.hpp"

namespace groundnav {

std::vector<std::string> Modifier::words() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.text);
  return out;
}

Modifier make_modifier(const Lexicon& lexicon, std::string_view text,
                       bool preposition) {
  Modifier m;
  m.tokens = lexicon.tokenize(text);
  std::vector<std::string> words;
  for (const Token& t : m.tokens) words.push_back(t.text);
  m.raw = join_words(words);
  m.preposition = preposition;
  return m;
}

namespace {

using Words = std::vector<std::string>;

bool starts_with(const Words& words, std::size_t at, const Words& phrase) {
  if (phrase.empty() || at + phrase.size() > words.size()) return false;
  return std::equal(phrase.begin(), phrase.end(), words.begin() + static_cast<long>(at));
}

}  // namespace

std::string extract_destination(std::string_view instruction,
                                const LexiconConfig& config) {
  const Words words = split_words(instruction);
  if (words.empty()) throw ParseError("empty instruction");

  // Longest motion-verb prefix wins ("take me to" over a carry "take").
  std::size_t best = 0;
  for (const auto& verb : config.motion_verbs) {
    const Words v = split_words(verb);
    if (v.size() > best && starts_with(words, 0, v)) best = v.size();
  }
  if (best > 0) {
    if (best == words.size()) {
      throw ParseError("instruction has a verb but no destination");
    }
    return join_words(words, best, words.size());
  }

  for (const auto& verb : config.carry_verbs) {
    const Words v = split_words(verb);
    if (!starts_with(words, 0, v)) continue;
    // "<verb> <object> to <destination>": the object takes at least one word.
    for (std::size_t i = v.size() + 1; i < words.size(); ++i) {
      if (words[i] == "to") {
        if (i + 1 == words.size()) break;
        return join_words(words, i + 1, words.size());
      }
    }
    throw ParseError("'" + verb + "' needs the form '" + verb +
                     " <object> to <destination>'");
  }

  // A bare verb that did not match any full prefix ("go the kitchen").
  auto first_word_of = [&](const std::vector<std::string>& list) {
    return std::any_of(list.begin(), list.end(), [&](const std::string& v) {
      const Words vw = split_words(v);
      return !vw.empty() && vw.front() == words.front();
    });
  };
  if (first_word_of(config.motion_verbs) || first_word_of(config.carry_verbs)) {
    throw ParseError("unrecognized verb phrase at '" + words.front() + "'");
  }
  return join_words(words);
}

std::vector<Modifier> parse_modifier_chain(std::string_view noun_phrase,
                                           const Lexicon& lexicon,
                                           std::size_t token_cap) {
  const Words words = split_words(noun_phrase);
  if (words.empty()) throw ParseError("empty destination phrase");
  const LexiconConfig& config = lexicon.config();

  for (const auto& w : words) {
    for (const auto& bad : config.unsupported_words) {
      if (w == bad) {
        throw ParseError("'" + bad + "' has no supported update type");
      }
    }
  }

  std::vector<Words> prepositions;
  for (const auto& p : config.prepositions()) prepositions.push_back(split_words(p));
  std::sort(prepositions.begin(), prepositions.end(),
            [](const Words& a, const Words& b) { return a.size() > b.size(); });

  // Alternating segments in reading order: head, prep, head, ...
  std::vector<std::pair<Words, bool>> segments;
  Words head;
  std::size_t i = 0;
  while (i < words.size()) {
    const Words* matched = nullptr;
    for (const Words& p : prepositions) {
      if (starts_with(words, i, p)) {
        matched = &p;
        break;
      }
    }
    if (matched == nullptr) {
      head.push_back(words[i]);
      ++i;
      continue;
    }
    if (head.empty()) {
      throw ParseError("preposition '" + join_words(*matched) +
                       "' is not preceded by a head phrase");
    }
    segments.emplace_back(std::move(head), false);
    head.clear();
    segments.emplace_back(*matched, true);
    i += matched->size();
  }
  if (head.empty()) {
    throw ParseError("destination phrase ends with a preposition");
  }
  segments.emplace_back(std::move(head), false);

  std::vector<Modifier> chain;
  chain.reserve(segments.size());
  for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
    if (it->first.size() > token_cap) {
      throw ParseError("modifier '" + join_words(it->first) + "' has more than " +
                       std::to_string(token_cap) + " words");
    }
    Modifier m;
    m.tokens = lexicon.encode(it->first);
    m.raw = join_words(it->first);
    m.preposition = it->second;
    chain.push_back(std::move(m));
  }
  return chain;
}

}  // namespace groundnav
