#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace polisim {

// One word of input text: [begin, end) span in the original string plus a
// lowercased copy. Word characters are alphanumerics and apostrophes; every
// other character is a boundary.
struct WordToken {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string lower;
};

// [begin, end) span of one sentence. Sentences end at '.', '!', '?' or '\n'.
struct SentenceSpan {
    std::size_t begin = 0;
    std::size_t end = 0;
};

std::vector<WordToken> tokenize_words(const std::string& text, std::size_t begin,
                                      std::size_t end);
std::vector<WordToken> tokenize_words(const std::string& text);
std::vector<SentenceSpan> split_sentences(const std::string& text);

// Splits a lowercase phrase pattern on single spaces. "*" entries match any
// one word.
std::vector<std::string> split_phrase(const std::string& phrase);

// True when `phrase_words` matches `words` starting at `pos`.
bool phrase_matches_at(const std::vector<WordToken>& words, std::size_t pos,
                       const std::vector<std::string>& phrase_words);

// Case-insensitive, word-boundary occurrence test of a phrase in free text.
// With `word_boundary` off the phrase is matched as a plain case-insensitive
// substring instead ("betrayal" then matches inside "betrayals").
bool phrase_occurs(const std::string& text, const std::string& phrase,
                   bool word_boundary = true);

std::string to_lower(const std::string& text);

} // namespace polisim
