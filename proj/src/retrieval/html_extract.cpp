#include "factcheck/retrieval/html_extract.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <set>

#include "factcheck/core/errors.hpp"
#include "factcheck/text/segmentation.hpp"

namespace factcheck::retrieval {

namespace {

const std::set<std::string, std::less<>> kSkipElements = {
    "script", "style", "noscript", "template", "svg",  "nav",    "header", "footer", "aside",
    "form",   "head",  "menu",     "button",   "select", "iframe", "canvas", "object", "textarea",
};

// Elements whose content is never parsed as markup.
const std::set<std::string, std::less<>> kRawTextElements = {"script", "style", "textarea"};

const std::set<std::string, std::less<>> kVoidElements = {
    "area", "base", "br", "col", "embed", "hr", "img", "input", "link", "meta", "source",
    "track", "wbr",
};

const std::set<std::string, std::less<>> kBlockElements = {
    "address", "article", "blockquote", "body", "caption", "dd", "details", "div", "dl", "dt",
    "figcaption", "figure", "h1", "h2", "h3", "h4", "h5", "h6", "hr", "html", "li", "main",
    "ol", "p", "pre", "section", "summary", "table", "tbody", "td", "tfoot", "th", "thead",
    "tr", "ul", "title",
};

const std::set<std::string, std::less<>> kParagraphLike = {"p", "blockquote", "pre", "dd",
                                                           "figcaption"};

const std::set<std::string, std::less<>> kBoilerplateWords = {
    "nav",      "navbar",   "navigation", "menu",    "footer",  "header",     "sidebar",
    "cookie",   "cookies",  "consent",    "comment", "comments", "share",     "sharing",
    "social",   "advert",   "advertisement", "ads",  "ad",      "promo",      "breadcrumb",
    "breadcrumbs", "related", "subscribe", "newsletter", "banner", "popup",   "modal",
    "masthead", "widget",   "sponsored",  "byline",  "toolbar", "signup",
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::size_t ifind(std::string_view hay, std::string_view needle, std::size_t from) {
  if (needle.empty()) return from;
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < needle.size() && match; ++j) {
      match = std::tolower(static_cast<unsigned char>(hay[i + j])) ==
              std::tolower(static_cast<unsigned char>(needle[j]));
    }
    if (match) return i;
  }
  return std::string_view::npos;
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

struct Tag {
  std::string name;  // lowercase, empty for comments and declarations
  bool closing = false;
  bool self_closing = false;
  std::string class_and_id;  // lowercase, space separated
  std::size_t end = 0;       // one past '>'
};

// Parses the tag starting at html[pos] == '<'. Returns nullopt when the '<'
// does not start markup (it is then literal text).
std::optional<Tag> parse_tag(std::string_view html, std::size_t pos) {
  Tag tag;
  std::size_t i = pos + 1;
  if (i >= html.size()) return std::nullopt;
  if (html.substr(i, 3) == "!--") {
    const auto close = html.find("-->", i + 3);
    tag.end = close == std::string_view::npos ? html.size() : close + 3;
    return tag;
  }
  if (html[i] == '!' || html[i] == '?') {
    const auto close = html.find('>', i);
    tag.end = close == std::string_view::npos ? html.size() : close + 1;
    return tag;
  }
  if (html[i] == '/') {
    tag.closing = true;
    ++i;
  }
  if (i >= html.size() || !std::isalpha(static_cast<unsigned char>(html[i]))) return std::nullopt;
  const std::size_t name_start = i;
  while (i < html.size() &&
         (std::isalnum(static_cast<unsigned char>(html[i])) || html[i] == '-' || html[i] == ':')) {
    ++i;
  }
  tag.name = lower(html.substr(name_start, i - name_start));

  // Attributes.
  while (i < html.size() && html[i] != '>') {
    if (is_space(html[i])) {
      ++i;
      continue;
    }
    if (html[i] == '/') {
      tag.self_closing = true;
      ++i;
      continue;
    }
    const std::size_t attr_start = i;
    while (i < html.size() && !is_space(html[i]) && html[i] != '=' && html[i] != '>' &&
           html[i] != '/') {
      ++i;
    }
    const std::string attr = lower(html.substr(attr_start, i - attr_start));
    while (i < html.size() && is_space(html[i])) ++i;
    std::string value;
    if (i < html.size() && html[i] == '=') {
      ++i;
      while (i < html.size() && is_space(html[i])) ++i;
      if (i < html.size() && (html[i] == '"' || html[i] == '\'')) {
        const char quote = html[i++];
        const auto close = html.find(quote, i);
        const std::size_t stop = close == std::string_view::npos ? html.size() : close;
        value = std::string(html.substr(i, stop - i));
        i = stop == html.size() ? stop : stop + 1;
      } else {
        const std::size_t v_start = i;
        while (i < html.size() && !is_space(html[i]) && html[i] != '>') ++i;
        value = std::string(html.substr(v_start, i - v_start));
      }
    }
    if (attr == "class" || attr == "id") {
      tag.class_and_id += ' ';
      tag.class_and_id += lower(value);
    }
    if (i == attr_start) ++i;  // guarantee progress on stray characters
  }
  if (i > pos + 1 && html[i - 1] == '/') tag.self_closing = true;
  tag.end = i < html.size() ? i + 1 : html.size();
  return tag;
}

bool has_boilerplate_hint(const std::string& class_and_id) {
  std::string word;
  auto check = [&]() {
    const bool hit = !word.empty() && kBoilerplateWords.count(word) > 0;
    word.clear();
    return hit;
  };
  for (char c : class_and_id) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      word += c;
    } else if (check()) {
      return true;
    }
  }
  return check();
}

bool is_heading(std::string_view name) {
  return name.size() == 2 && name[0] == 'h' && name[1] >= '1' && name[1] <= '6';
}

bool ends_with_terminal(std::string_view s) {
  while (!s.empty()) {
    const char c = s.back();
    if (c == '"' || c == '\'' || c == ')' || c == ']') {
      s.remove_suffix(1);
    } else if (s.size() >= 3 && (s.substr(s.size() - 3) == "\xE2\x80\x9D" ||
                                 s.substr(s.size() - 3) == "\xE2\x80\x99")) {
      s.remove_suffix(3);
    } else {
      return c == '.' || c == '!' || c == '?';
    }
  }
  return false;
}

std::size_t count_words(std::string_view s) {
  std::size_t words = 0;
  bool in_word = false;
  for (char c : s) {
    if (is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++words;
    }
  }
  return words;
}

std::size_t visible_chars(std::string_view s) {
  return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return !is_space(c); }));
}

class BlockCollector {
 public:
  void text(std::string_view raw, bool in_link) {
    const std::string decoded = decode_entities(raw);
    if (kind_.empty() && !text::is_blank(decoded)) kind_ = current_kind();
    buffer_ += decoded;
    if (in_link) link_chars_ += visible_chars(decoded);
  }

  void open_block(const std::string& name) {
    flush();
    stack_.push_back(name);
  }

  void close_block(const std::string& name) {
    flush();
    // Pop up to and including the matching element; tolerate stray closers.
    auto it = std::find(stack_.rbegin(), stack_.rend(), name);
    if (it != stack_.rend()) stack_.erase(std::next(it).base(), stack_.end());
  }

  void flush() {
    const std::string block = text::collapse_whitespace(buffer_);
    const std::size_t total = visible_chars(block);
    if (total > 0 && keep(block, total)) blocks_.push_back(block);
    buffer_.clear();
    kind_.clear();
    link_chars_ = 0;
  }

  std::vector<std::string> take() {
    flush();
    return std::move(blocks_);
  }

 private:
  std::string current_kind() const { return stack_.empty() ? std::string() : stack_.back(); }

  bool keep(const std::string& block, std::size_t total) const {
    if (is_heading(kind_) || kind_ == "title") return false;
    const double link_density = static_cast<double>(link_chars_) / static_cast<double>(total);
    if (kParagraphLike.count(kind_)) return link_density < 0.5;
    return count_words(block) >= 10 && link_density < 0.33 && ends_with_terminal(block);
  }

  std::vector<std::string> stack_;
  std::string buffer_;
  std::string kind_;
  std::size_t link_chars_ = 0;
  std::vector<std::string> blocks_;
};

bool looks_like_markup(std::string_view s) {
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] != '<') continue;
    const char n = s[i + 1];
    if (std::isalpha(static_cast<unsigned char>(n)) || n == '/' || n == '!') return true;
  }
  return false;
}

}  // namespace

std::string decode_entities(std::string_view s) {
  static const std::pair<std::string_view, unsigned long> kNamed[] = {
      {"amp", '&'},      {"lt", '<'},       {"gt", '>'},       {"quot", '"'},
      {"apos", '\''},    {"nbsp", ' '},     {"ndash", 0x2013}, {"mdash", 0x2014},
      {"hellip", 0x2026}, {"lsquo", 0x2018}, {"rsquo", 0x2019}, {"ldquo", 0x201C},
      {"rdquo", 0x201D}, {"copy", 0xA9},    {"reg", 0xAE},     {"deg", 0xB0},
      {"middot", 0xB7},  {"trade", 0x2122}, {"eacute", 0xE9},  {"times", 0xD7},
  };
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out += s[i];
      continue;
    }
    const auto semi = s.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out += '&';
      continue;
    }
    const std::string_view ref = s.substr(i + 1, semi - i - 1);
    bool decoded = false;
    if (ref.size() > 1 && ref[0] == '#') {
      const bool hex = ref[1] == 'x' || ref[1] == 'X';
      const std::string_view digits = ref.substr(hex ? 2 : 1);
      if (!digits.empty() && std::all_of(digits.begin(), digits.end(), [&](char c) {
            return hex ? std::isxdigit(static_cast<unsigned char>(c)) != 0
                       : std::isdigit(static_cast<unsigned char>(c)) != 0;
          })) {
        const unsigned long cp = std::stoul(std::string(digits), nullptr, hex ? 16 : 10);
        append_utf8(out, cp == 0xA0 ? ' ' : cp);
        decoded = true;
      }
    } else {
      for (const auto& [name, cp] : kNamed) {
        if (ref == name) {
          append_utf8(out, cp);
          decoded = true;
          break;
        }
      }
    }
    if (decoded) {
      i = semi;
    } else {
      out += '&';
    }
  }
  return out;
}

std::vector<std::string> extract_text_blocks(std::string_view html) {
  BlockCollector blocks;
  std::string skip_name;  // element being skipped, with nesting depth below
  int skip_depth = 0;
  int link_depth = 0;
  std::size_t i = 0;
  while (i < html.size()) {
    if (html[i] != '<') {
      const auto next = html.find('<', i);
      const std::size_t stop = next == std::string_view::npos ? html.size() : next;
      if (skip_depth == 0) blocks.text(html.substr(i, stop - i), link_depth > 0);
      i = stop;
      continue;
    }
    auto tag = parse_tag(html, i);
    if (!tag) {
      if (skip_depth == 0) blocks.text("<", link_depth > 0);
      ++i;
      continue;
    }
    i = tag->end;
    if (tag->name.empty()) continue;  // comment or declaration

    const bool is_void = kVoidElements.count(tag->name) > 0 || tag->self_closing;
    if (!tag->closing && kRawTextElements.count(tag->name)) {
      const auto close = ifind(html, "</" + tag->name, i);
      if (close == std::string_view::npos) break;
      const auto gt = html.find('>', close);
      i = gt == std::string_view::npos ? html.size() : gt + 1;
      continue;
    }

    if (skip_depth > 0) {
      if (tag->name == skip_name && !is_void) skip_depth += tag->closing ? -1 : 1;
      continue;
    }

    if (!tag->closing && !is_void &&
        (kSkipElements.count(tag->name) || has_boilerplate_hint(tag->class_and_id))) {
      skip_name = tag->name;
      skip_depth = 1;
      continue;
    }

    if (tag->name == "a") {
      if (tag->closing) {
        link_depth = std::max(0, link_depth - 1);
      } else if (!is_void) {
        ++link_depth;
      }
      continue;
    }
    if (tag->name == "br") {
      blocks.text(" ", false);
      continue;
    }
    if (kBlockElements.count(tag->name)) {
      if (tag->closing) {
        blocks.close_block(tag->name);
      } else if (is_void) {
        blocks.flush();
      } else {
        blocks.open_block(tag->name);
      }
    }
  }
  return blocks.take();
}

std::string extract_title(std::string_view html) {
  const auto open = ifind(html, "<title", 0);
  if (open == std::string_view::npos) return {};
  const auto gt = html.find('>', open);
  if (gt == std::string_view::npos) return {};
  const auto close = ifind(html, "</title", gt);
  const std::size_t stop = close == std::string_view::npos ? html.size() : close;
  return text::collapse_whitespace(decode_entities(html.substr(gt + 1, stop - gt - 1)));
}

CleanDocument extract_document(std::string_view raw, std::string url) {
  CleanDocument doc;
  doc.url = std::move(url);
  std::vector<std::string> blocks;
  if (looks_like_markup(raw)) {
    doc.title = extract_title(raw);
    blocks = extract_text_blocks(raw);
  } else if (!text::is_blank(raw)) {
    // Plain text: blank lines separate blocks.
    std::string current;
    std::size_t pos = 0;
    while (pos <= raw.size()) {
      std::size_t eol = raw.find('\n', pos);
      if (eol == std::string_view::npos) eol = raw.size();
      const std::string_view line = raw.substr(pos, eol - pos);
      if (text::is_blank(line)) {
        if (!text::is_blank(current)) blocks.push_back(text::collapse_whitespace(current));
        current.clear();
      } else {
        current += ' ';
        current += line;
      }
      pos = eol + 1;
    }
    if (!text::is_blank(current)) blocks.push_back(text::collapse_whitespace(current));
  }
  for (const auto& block : blocks) {
    for (auto& sentence : text::split_sentences(block)) doc.sentences.push_back(std::move(sentence));
  }
  if (doc.sentences.empty()) {
    throw EmptyDocument("no extractable text" + (doc.url.empty() ? "" : " in " + doc.url));
  }
  return doc;
}

}  // namespace factcheck::retrieval
