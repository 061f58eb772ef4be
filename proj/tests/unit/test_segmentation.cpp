#include <doctest.h>

#include <random>

#include "factcheck/core/errors.hpp"
#include "factcheck/text/segmentation.hpp"
#include "test_support.hpp"

using namespace factcheck;
using namespace factcheck::text;

TEST_SUITE("segmentation") {

TEST_CASE("java tea passage splits into two sentences") {
  const auto s = split_sentences(
      "Java tea is commonly used as a diuretic, meaning it may increase urine production. The "
      "property has led to its traditional use in managing conditions such as edema (swelling) "
      "and UTIs.");
  REQUIRE(s.size() == 2);
  CHECK(s[0] == "Java tea is commonly used as a diuretic, meaning it may increase urine production.");
  CHECK(s[1].rfind("The property", 0) == 0);
}

TEST_CASE("abbreviations do not end sentences") {
  CHECK(split_sentences("Dr. Smith met Mr. Jones at 5 p.m. on Friday. They talked.").size() == 2);
  CHECK(split_sentences("Compare e.g. approx. 3 cups with the text. Done.").size() == 2);
  CHECK(split_sentences("It rose to 3.5 percent. Then it fell.").size() == 2);
}

TEST_CASE("lowercase continuation does not split") {
  CHECK(split_sentences("He said no. and left").size() == 1);
}

TEST_CASE("closing quotes and brackets stay with their sentence") {
  const auto s = split_sentences("She said \"stop.\" Then silence (mostly.) Next one!");
  REQUIRE(s.size() == 3);
  CHECK(s[0] == "She said \"stop.\"");
  CHECK(s[1] == "Then silence (mostly.)");
}

TEST_CASE("question and exclamation marks end sentences") {
  CHECK(split_sentences("Is it true? Yes! It is.").size() == 3);
}

TEST_CASE("text without terminator is one sentence") {
  CHECK(split_sentences("no terminator here") == std::vector<std::string>{"no terminator here"});
}

TEST_CASE("blank input is rejected") {
  CHECK_THROWS_AS(segment(""), EmptyInput);
  CHECK_THROWS_AS(segment("  \n\t "), EmptyInput);
}

TEST_CASE("paragraphs split on blank lines and long ones are chunked") {
  const auto seg = segment("One. Two.\n\nThree.\n\n\n Four. Five. Six.", 2);
  REQUIRE(seg.sentences.size() == 6);
  REQUIRE(seg.paragraphs.size() == 4);
  CHECK(seg.paragraphs[0].first_sentence == 0);
  CHECK(seg.paragraphs[0].last_sentence == 1);
  CHECK(seg.paragraphs[1].first_sentence == 2);
  CHECK(seg.paragraphs[2].last_sentence == 4);
  CHECK(seg.paragraphs[3].first_sentence == 5);
  CHECK(seg.paragraph_of(4).index == 2);
  CHECK(seg.paragraph_text(2) == "Four. Five.");
  for (std::size_t i = 0; i < seg.sentences.size(); ++i) {
    CHECK(seg.sentences[i].index == static_cast<int>(i));
    CHECK(seg.sentences[i].status == SentenceStatus::unverified);
  }
}

TEST_CASE("spans point back into the source") {
  const std::string text = "  Alpha beta.   Gamma delta!\n\nEpsilon? ";
  const auto seg = segment(text);
  REQUIRE(seg.spans.size() == seg.sentences.size());
  for (std::size_t i = 0; i < seg.spans.size(); ++i) {
    const auto& sp = seg.spans[i];
    CHECK(collapse_whitespace(text.substr(sp.begin, sp.end - sp.begin)) == seg.sentences[i].text);
  }
}

TEST_CASE("property: spans are ordered, disjoint and cover all non-space text") {
  std::mt19937_64 rng(3);
  const std::vector<std::string> pieces = {"Word", "word", " ", "  ", ".", "!", "?", "\n\n",
                                           "Dr.", "3.5", "\"", ")", "e.g.", "U.S.", "x"};
  for (int iter = 0; iter < 500; ++iter) {
    std::string text;
    const int n = std::uniform_int_distribution<int>(1, 40)(rng);
    for (int i = 0; i < n; ++i) {
      text += pieces[std::uniform_int_distribution<std::size_t>(0, pieces.size() - 1)(rng)];
    }
    const auto spans = sentence_spans(text);
    std::size_t covered_nonspace = 0;
    std::size_t prev_end = 0;
    for (const auto& sp : spans) {
      CHECK(sp.begin >= prev_end);
      CHECK(sp.begin < sp.end);
      prev_end = sp.end;
      for (std::size_t k = sp.begin; k < sp.end; ++k) {
        if (!std::isspace(static_cast<unsigned char>(text[k]))) ++covered_nonspace;
      }
    }
    std::size_t total_nonspace = 0;
    for (char c : text) {
      if (!std::isspace(static_cast<unsigned char>(c))) ++total_nonspace;
    }
    CHECK(covered_nonspace == total_nonspace);
  }
}

TEST_CASE("collapse_whitespace") {
  CHECK(collapse_whitespace("  a \t b\n\nc  ") == "a b c");
  CHECK(collapse_whitespace("") == "");
  CHECK(is_blank(" \n"));
  CHECK_FALSE(is_blank(" x "));
}

}
