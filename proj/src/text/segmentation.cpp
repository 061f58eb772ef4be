#include "factcheck/text/segmentation.hpp"

#include <algorithm>
#include <iterator>
#include <cctype>
#include <stdexcept>

#include "factcheck/core/errors.hpp"

namespace factcheck::text {

namespace {

constexpr std::string_view kAbbreviations[] = {
    "mr",   "mrs",  "ms",   "dr",   "prof", "sr",   "jr",   "st",   "vs",   "e.g",  "i.e",
    "u.s",  "u.k",  "u.n",  "a.m",  "p.m",  "inc",  "ltd",  "co",   "corp", "no",   "fig",
    "al",   "approx", "est", "dept", "gen",  "gov",  "sen",  "rep",  "mt",   "jan",  "feb",
    "apr",  "jun",  "jul",  "aug",  "sep",  "sept", "oct",  "nov",  "dec",  "vol",  "ed",
    "eds",  "cf",   "ca",   "pp",   "op",   "ph.d", "b.c",  "a.d",
};

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_terminator(char c) { return c == '.' || c == '!' || c == '?'; }

// Length of a closing quote/bracket at `pos`, 0 if none. Handles the UTF-8
// right single and double quotation marks.
std::size_t closer_length(std::string_view s, std::size_t pos) {
  const char c = s[pos];
  if (c == '"' || c == '\'' || c == ')' || c == ']') return 1;
  if (s.substr(pos, 3) == "\xE2\x80\x99" || s.substr(pos, 3) == "\xE2\x80\x9D") return 3;
  return 0;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

// Token ending right before the period at `dot`, without leading openers.
std::string_view token_before(std::string_view s, std::size_t dot) {
  std::size_t start = dot;
  while (start > 0 && !is_space(s[start - 1])) --start;
  std::string_view tok = s.substr(start, dot - start);
  while (!tok.empty() && (tok.front() == '(' || tok.front() == '"' || tok.front() == '\'' ||
                          tok.front() == '[')) {
    tok.remove_prefix(1);
  }
  return tok;
}

bool is_abbreviation(std::string_view token) {
  const std::string t = lower(token);
  return std::find(std::begin(kAbbreviations), std::end(kAbbreviations), t) !=
         std::end(kAbbreviations);
}

Span trimmed(std::string_view s, std::size_t begin, std::size_t end) {
  while (begin < end && is_space(s[begin])) ++begin;
  while (end > begin && is_space(s[end - 1])) --end;
  return {begin, end};
}

struct Block {
  std::size_t begin;
  std::size_t end;
};

// Paragraph ranges separated by lines that contain only whitespace.
std::vector<Block> blank_line_blocks(std::string_view text) {
  std::vector<Block> blocks;
  std::size_t block_start = std::string_view::npos;
  std::size_t block_end = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    if (is_blank(line)) {
      if (block_start != std::string_view::npos) {
        blocks.push_back({block_start, block_end});
        block_start = std::string_view::npos;
      }
    } else {
      if (block_start == std::string_view::npos) block_start = pos;
      block_end = eol;
    }
    if (eol == text.size()) break;
    pos = eol + 1;
  }
  if (block_start != std::string_view::npos) blocks.push_back({block_start, block_end});
  return blocks;
}

}  // namespace

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return is_space(c); });
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
    } else {
      if (pending_space) out += ' ';
      pending_space = false;
      out += c;
    }
  }
  return out;
}

std::vector<Span> sentence_spans(std::string_view text) {
  std::vector<Span> spans;
  std::size_t start = 0;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (!is_terminator(text[i])) {
      ++i;
      continue;
    }
    const std::size_t first_term = i;
    while (i < n && is_terminator(text[i])) ++i;
    const bool single_period = (i - first_term == 1) && text[first_term] == '.';
    while (i < n) {
      const std::size_t len = closer_length(text, i);
      if (len == 0) break;
      i += len;
    }
    if (i < n && !is_space(text[i])) continue;  // "3.14", "e.g.x", "?!abc"

    std::size_t next = i;
    while (next < n && is_space(text[next])) ++next;
    if (next < n) {
      if (single_period && is_abbreviation(token_before(text, first_term))) continue;
      if (std::islower(static_cast<unsigned char>(text[next]))) continue;
    }
    Span span = trimmed(text, start, i);
    if (span.begin < span.end) spans.push_back(span);
    start = i;
  }
  Span tail = trimmed(text, start, n);
  if (tail.begin < tail.end) spans.push_back(tail);
  return spans;
}

std::vector<std::string> split_sentences(std::string_view paragraph) {
  std::vector<std::string> out;
  for (const auto& span : sentence_spans(paragraph)) {
    out.emplace_back(paragraph.substr(span.begin, span.end - span.begin));
  }
  return out;
}

SegmentedText segment(std::string_view text, int max_sentences) {
  if (max_sentences < 1) throw DomainError("max_sentences must be >= 1");
  if (is_blank(text)) throw EmptyInput();

  SegmentedText result;
  result.source = std::string(text);
  int paragraph_index = 0;
  for (const auto& block : blank_line_blocks(text)) {
    const std::string_view body = text.substr(block.begin, block.end - block.begin);
    std::vector<Span> spans = sentence_spans(body);
    for (std::size_t chunk = 0; chunk < spans.size();
         chunk += static_cast<std::size_t>(max_sentences)) {
      const std::size_t chunk_end =
          std::min(spans.size(), chunk + static_cast<std::size_t>(max_sentences));
      Paragraph p;
      p.index = paragraph_index;
      p.first_sentence = static_cast<int>(result.sentences.size());
      for (std::size_t k = chunk; k < chunk_end; ++k) {
        const Span absolute{block.begin + spans[k].begin, block.begin + spans[k].end};
        SentenceUnit unit;
        unit.index = static_cast<int>(result.sentences.size());
        unit.paragraph_index = paragraph_index;
        unit.text = std::string(text.substr(absolute.begin, absolute.end - absolute.begin));
        result.sentences.push_back(std::move(unit));
        result.spans.push_back(absolute);
      }
      p.last_sentence = static_cast<int>(result.sentences.size()) - 1;
      result.paragraphs.push_back(p);
      ++paragraph_index;
    }
  }
  return result;
}

std::vector<std::string> split_paragraphs(std::string_view text, int max_sentences) {
  const SegmentedText seg = segment(text, max_sentences);
  std::vector<std::string> out;
  for (const auto& p : seg.paragraphs) {
    const std::size_t begin = seg.spans[p.first_sentence].begin;
    const std::size_t end = seg.spans[p.last_sentence].end;
    out.emplace_back(seg.source.substr(begin, end - begin));
  }
  return out;
}

const Paragraph& SegmentedText::paragraph_of(int sentence_index) const {
  if (sentence_index < 0 || sentence_index >= static_cast<int>(sentences.size())) {
    throw DomainError("sentence index out of range: " + std::to_string(sentence_index));
  }
  return paragraphs.at(sentences[sentence_index].paragraph_index);
}

std::string SegmentedText::paragraph_text(int paragraph_index) const {
  const Paragraph& p = paragraphs.at(paragraph_index);
  std::string out;
  for (int i = p.first_sentence; i <= p.last_sentence; ++i) {
    if (!out.empty()) out += ' ';
    out += collapse_whitespace(sentences[i].text);
  }
  return out;
}

}  // namespace factcheck::text
