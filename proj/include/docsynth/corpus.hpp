#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "random.hpp"
#include "utf8.hpp"

namespace docsynth {

class CorpusError : public std::runtime_error {
 public:
  CorpusError(std::filesystem::path path, std::size_t line, const std::string& what)
      : std::runtime_error(path.string() + (line ? ":" + std::to_string(line) : std::string()) + ": " + what),
        path_(std::move(path)),
        line_(line) {}

  const std::filesystem::path& path() const { return path_; }
  /// 1-based line number; 0 when the error is not tied to a line.
  std::size_t line() const { return line_; }

 private:
  std::filesystem::path path_;
  std::size_t line_;
};

struct TextCorpus {
  std::vector<std::string> sentences;
  std::string languageTag;
};

/// Collapses whitespace and control characters into single spaces and trims.
inline std::string normalize_sentence(std::u32string_view cps) {
  std::string out;
  bool pendingSpace = false;
  for (char32_t cp : cps) {
    if (utf8::is_space(cp) || utf8::is_control(cp)) {
      pendingSpace = !out.empty();
      continue;
    }
    if (pendingSpace) out.push_back(' ');
    pendingSpace = false;
    utf8::append(out, cp);
  }
  return out;
}

/// One sentence per line. Blank lines are dropped, order is kept.
inline TextCorpus load_corpus(const std::filesystem::path& path, std::string languageTag = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError(path, 0, "cannot open corpus file");
  TextCorpus corpus;
  corpus.languageTag = languageTag.empty() ? path.stem().string() : std::move(languageTag);
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (lineNo == 1 && line.starts_with("\xEF\xBB\xBF")) line.erase(0, 3);
    auto cps = utf8::decode(line);
    if (!cps) throw CorpusError(path, lineNo, "invalid UTF-8");
    auto sentence = normalize_sentence(*cps);
    if (!sentence.empty()) corpus.sentences.push_back(std::move(sentence));
  }
  if (corpus.sentences.empty()) throw CorpusError(path, 0, "no usable lines");
  return corpus;
}

/// Draws a random starting sentence and takes whole words from it and the
/// sentences that follow (wrapping at the end of the corpus) until the result
/// holds at least `targetChars` codepoints. Never cuts inside a word, so the
/// result exceeds the target by less than one word plus a space.
inline std::string sample_text(const TextCorpus& corpus, Rng& rng, std::size_t targetChars) {
  if (corpus.sentences.empty()) throw std::invalid_argument("sample_text: empty corpus");
  if (targetChars < 1) targetChars = 1;
  std::size_t sentence = rng.index(corpus.sentences.size());
  std::string out;
  std::size_t len = 0;
  while (len < targetChars) {
    for (auto& word : utf8::split_words(corpus.sentences[sentence])) {
      if (!out.empty()) {
        out.push_back(' ');
        ++len;
      }
      len += utf8::length(word);
      out += word;
      if (len >= targetChars) return out;
    }
    sentence = (sentence + 1) % corpus.sentences.size();
  }
  return out;
}

}  // namespace docsynth
