#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "groundnav/lexicon.hpp"

namespace groundnav {

/// One segment of a destination noun phrase: a head phrase or a preposition.
struct Modifier {
  std::vector<Token> tokens;
  std::string raw;  // space-joined lowercase words
  bool preposition = false;

  std::vector<std::string> words() const;
};

/// Builds a modifier from free text (tokenized with the lexicon).
Modifier make_modifier(const Lexicon& lexicon, std::string_view text,
                       bool preposition = false);

/// Strips the leading motion-verb phrase ("go to", "bring X to", ...) and
/// returns the normalized destination noun phrase. Text without a verb is
/// taken to be the noun phrase itself. Throws ParseError when nothing is
/// left or a verb is not followed by its preposition.
std::string extract_destination(std::string_view instruction,
                                const LexiconConfig& config);

/// Splits a noun phrase at prepositions and orders the segments bottom-up:
/// the innermost preposition object first, the outermost head phrase last.
/// "the meeting room near the north exit" ->
///   ["the north exit", "near", "the meeting room"].
///
/// Throws ParseError on an empty phrase, an unsupported spatial word
/// ("between"), a missing head phrase around a preposition, or a segment
/// longer than `token_cap` words.
std::vector<Modifier> parse_modifier_chain(std::string_view noun_phrase,
                                           const Lexicon& lexicon,
                                           std::size_t token_cap = 8);

}  // namespace groundnav
