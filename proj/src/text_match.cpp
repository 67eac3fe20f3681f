#include "polisim/text_match.hpp"

#include <algorithm>
#include <cctype>

namespace polisim {

namespace {

bool is_word_char(unsigned char c) {
    return std::isalnum(c) != 0 || c == '\'';
}

} // namespace

std::string to_lower(const std::string& text) {
    std::string out = text;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<WordToken> tokenize_words(const std::string& text, std::size_t begin,
                                      std::size_t end) {
    std::vector<WordToken> words;
    std::size_t i = begin;
    while (i < end) {
        if (!is_word_char(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < end && is_word_char(static_cast<unsigned char>(text[i]))) ++i;
        WordToken tok;
        tok.begin = start;
        tok.end = i;
        tok.lower.reserve(i - start);
        for (std::size_t k = start; k < i; ++k) {
            tok.lower.push_back(
                static_cast<char>(std::tolower(static_cast<unsigned char>(text[k]))));
        }
        words.push_back(std::move(tok));
    }
    return words;
}

std::vector<WordToken> tokenize_words(const std::string& text) {
    return tokenize_words(text, 0, text.size());
}

std::vector<SentenceSpan> split_sentences(const std::string& text) {
    std::vector<SentenceSpan> spans;
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '.' || c == '!' || c == '?' || c == '\n') {
            if (i > start) spans.push_back({start, i});
            start = i + 1;
        }
    }
    if (start < text.size()) spans.push_back({start, text.size()});
    return spans;
}

std::vector<std::string> split_phrase(const std::string& phrase) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < phrase.size()) {
        if (phrase[i] == ' ') {
            ++i;
            continue;
        }
        std::size_t start = i;
        while (i < phrase.size() && phrase[i] != ' ') ++i;
        words.push_back(phrase.substr(start, i - start));
    }
    // Pattern words carry no punctuation; strip any so "funds," still lines up
    // with a tokenized word.
    for (auto& w : words) {
        std::string cleaned;
        for (char c : w) {
            if (is_word_char(static_cast<unsigned char>(c)) || c == '*') cleaned.push_back(c);
        }
        w = cleaned;
    }
    std::erase_if(words, [](const std::string& w) { return w.empty(); });
    return words;
}

bool phrase_matches_at(const std::vector<WordToken>& words, std::size_t pos,
                       const std::vector<std::string>& phrase_words) {
    if (phrase_words.empty() || pos + phrase_words.size() > words.size()) return false;
    for (std::size_t k = 0; k < phrase_words.size(); ++k) {
        if (phrase_words[k] == "*") continue;
        if (words[pos + k].lower != phrase_words[k]) return false;
    }
    return true;
}

bool phrase_occurs(const std::string& text, const std::string& phrase,
                   bool word_boundary) {
    if (phrase.empty()) return false;
    if (!word_boundary) {
        const std::string haystack = to_lower(text);
        const std::string needle = to_lower(phrase);
        return haystack.find(needle) != std::string::npos;
    }
    const auto words = tokenize_words(text);
    const auto phrase_words = split_phrase(to_lower(phrase));
    if (phrase_words.empty()) return false;
    for (std::size_t pos = 0; pos + phrase_words.size() <= words.size(); ++pos) {
        if (phrase_matches_at(words, pos, phrase_words)) return true;
    }
    return false;
}

} // namespace polisim
