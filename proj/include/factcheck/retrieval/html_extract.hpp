#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace factcheck::retrieval {

/// Main text of a fetched page, already split into sentences.
struct CleanDocument {
  std::string url;
  std::string title;
  std::vector<std::string> sentences;
  bool from_snippet = false;
};

/// Text blocks that survive boilerplate removal, whitespace-collapsed and
/// entity-decoded, in document order.
///
/// Skipped outright: script, style, head, nav, header, footer, aside, form
/// and similar chrome, plus any element whose class or id names a chrome
/// role (sidebar, cookie, share, ...). Headings are dropped. Paragraph-like
/// blocks (p, blockquote, pre, dd, figcaption) are kept unless mostly link
/// text; other blocks must look like prose: at least 10 words, little link
/// text, ending in terminal punctuation.
std::vector<std::string> extract_text_blocks(std::string_view html);

/// Contents of the first <title> element, or empty.
std::string extract_title(std::string_view html);

/// Decodes named (common subset) and numeric character references.
std::string decode_entities(std::string_view s);

/// Cleans `raw` (HTML, or plain text when it contains no markup) and splits
/// it into sentences. Throws EmptyDocument when nothing remains.
CleanDocument extract_document(std::string_view raw, std::string url = {});

}  // namespace factcheck::retrieval
