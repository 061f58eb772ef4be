#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "factcheck/core/types.hpp"

namespace factcheck::text {

inline constexpr int kDefaultMaxParagraphSentences = 10;

/// Byte range [begin, end) into the segmented source text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Span&) const = default;
};

struct Paragraph {
  int index = 0;
  int first_sentence = 0;
  int last_sentence = 0;  // inclusive
};

struct SegmentedText {
  std::string source;
  std::vector<Paragraph> paragraphs;
  std::vector<SentenceUnit> sentences;  // claims empty, status unverified
  std::vector<Span> spans;              // one per sentence, into `source`

  const Paragraph& paragraph_of(int sentence_index) const;
  /// The paragraph's sentences joined by single spaces.
  std::string paragraph_text(int paragraph_index) const;
};

/// Sentence boundaries inside `text`. Terminal punctuation (. ! ?) plus any
/// trailing closing quotes or brackets ends a sentence when followed by
/// whitespace and a non-lowercase character, unless the token is a known
/// abbreviation. Spans are trimmed; text without a terminator is one span.
std::vector<Span> sentence_spans(std::string_view text);

std::vector<std::string> split_sentences(std::string_view paragraph);

/// Splits on blank lines, then cuts paragraphs longer than `max_sentences`
/// into consecutive chunks. Throws EmptyInput for blank text.
std::vector<std::string> split_paragraphs(std::string_view text,
                                          int max_sentences = kDefaultMaxParagraphSentences);

SegmentedText segment(std::string_view text, int max_sentences = kDefaultMaxParagraphSentences);

/// Replaces every run of ASCII whitespace with one space and trims the ends.
std::string collapse_whitespace(std::string_view s);

bool is_blank(std::string_view s);

}  // namespace factcheck::text
