// Copyright 2026 The BiVert Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relation.hpp"

#include <algorithm>
#include <fstream>

#include "errors.hpp"

namespace bivert {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename Fn>
void for_each_line(const std::filesystem::path& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kMissingResource, "cannot open '" + path.string() + "'");
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    fn(line, n);
  }
}

std::pair<std::string, std::string> split_two(const std::string& line, std::size_t n,
                                              const std::filesystem::path& path) {
  const auto tab = line.find('\t');
  if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
    throw ParseError(n, path.filename().string() + ": expected two tab-separated columns");
  std::string a = trim(line.substr(0, tab));
  std::string b = trim(line.substr(tab + 1));
  if (a.empty() || b.empty())
    throw ParseError(n, path.filename().string() + ": empty column");
  return {std::move(a), std::move(b)};
}

// Suffix stripping for the optional derivation fallback.
std::string crude_stem(std::string w) {
  static constexpr std::string_view kSuffixes[] = {
      "ation", "ness", "ment", "ity", "ful", "less", "able", "ible",
      "tion",  "ive",  "ous",  "ical", "ic",  "al",   "ly",   "er",
  };
  for (std::string_view s : kSuffixes) {
    if (w.size() > s.size() + 2 && w.ends_with(s)) {
      w.resize(w.size() - s.size());
      break;
    }
  }
  if (!w.empty() && w.back() == 'i') w.back() = 'y';
  if (!w.empty() && w.back() == 'e') w.pop_back();
  return w;
}

}  // namespace

std::string_view category_name(RelationCategory c) {
  switch (c) {
    case RelationCategory::kSame: return "same";
    case RelationCategory::kExtra: return "extra";
    case RelationCategory::kMissing: return "missing";
    case RelationCategory::kStopword: return "stopword";
    case RelationCategory::kInflection: return "inflection";
    case RelationCategory::kDerivation: return "derivation";
    case RelationCategory::kSense: return "sense";
  }
  return "unknown";
}

LexiconBundle LexiconBundle::load(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir))
    throw Error(ErrorKind::kMissingResource, "lexicon directory '" + dir.string() + "' not found");
  LexiconBundle bundle;
  auto each_file = [&](const char* sub, const char* ext, auto&& fn) {
    const fs::path d = dir / sub;
    if (!fs::is_directory(d)) return;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(d))
      if (e.is_regular_file() && e.path().extension() == ext) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& f : files) fn(f, f.stem().string());
  };
  each_file("stopwords", ".txt", [&](const fs::path& f, const std::string& lang) {
    for_each_line(f, [&](const std::string& line, std::size_t) {
      bundle.add_stopword(lang, trim(line));
    });
  });
  each_file("lemmas", ".tsv", [&](const fs::path& f, const std::string& lang) {
    for_each_line(f, [&](const std::string& line, std::size_t n) {
      auto [surface, lemma] = split_two(line, n, f);
      bundle.add_lemma(lang, surface, lemma);
    });
  });
  each_file("derivations", ".tsv", [&](const fs::path& f, const std::string& lang) {
    for_each_line(f, [&](const std::string& line, std::size_t n) {
      auto [a, b] = split_two(line, n, f);
      bundle.add_derivation(lang, a, b);
    });
  });
  return bundle;
}

void LexiconBundle::add_stopword(const std::string& lang, const std::string& word) {
  langs_[lang].stopwords.insert(word);
}

void LexiconBundle::add_lemma(const std::string& lang, const std::string& surface,
                              const std::string& lemma) {
  langs_[lang].lemmas[surface] = lemma;
}

void LexiconBundle::add_derivation(const std::string& lang, const std::string& a,
                                   const std::string& b) {
  const auto [lo, hi] = std::minmax(a, b);
  langs_[lang].derivations.emplace(lo, hi);
}

const LexiconBundle::PerLanguage* LexiconBundle::find(std::string_view lang) const {
  auto it = langs_.find(lang);
  return it == langs_.end() ? nullptr : &it->second;
}

bool LexiconBundle::is_stopword(std::string_view lang, std::string_view word) const {
  const PerLanguage* p = find(lang);
  return p && p->stopwords.contains(std::string(word));
}

std::string LexiconBundle::lemmatize(std::string_view word, std::string_view lang) const {
  const PerLanguage* p = find(lang);
  if (!p) return std::string(word);
  auto it = p->lemmas.find(std::string(word));
  return it == p->lemmas.end() ? std::string(word) : it->second;
}

bool LexiconBundle::is_derivation(std::string_view lang, std::string_view lemma_a,
                                  std::string_view lemma_b) const {
  const PerLanguage* p = find(lang);
  if (p) {
    std::pair<std::string, std::string> key(lemma_a, lemma_b);
    if (key.second < key.first) std::swap(key.first, key.second);
    if (p->derivations.contains(key)) return true;
  }
  if (!stem_fallback || lemma_a == lemma_b) return false;
  const std::string sa = crude_stem(std::string(lemma_a));
  return sa.size() >= 3 && sa == crude_stem(std::string(lemma_b));
}

std::size_t LexiconBundle::stopword_count(std::string_view lang) const {
  const PerLanguage* p = find(lang);
  return p ? p->stopwords.size() : 0;
}

std::size_t LexiconBundle::lemma_count(std::string_view lang) const {
  const PerLanguage* p = find(lang);
  return p ? p->lemmas.size() : 0;
}

RelationRecord classify_pair(std::optional<std::string_view> src_word,
                             std::optional<std::string_view> back_word, std::size_t src_len,
                             double similarity, std::string_view lang,
                             const LexiconBundle& lexicon, const SenseCostFn& sense_cost) {
  if (!src_word && !back_word)
    throw Error(ErrorKind::kInvalidArgument, "classify_pair needs at least one word");
  if (src_len == 0) throw Error(ErrorKind::kInvalidArgument, "source length must be positive");

  const double unit = 1.0 / static_cast<double>(src_len);
  auto opt = [](std::optional<std::string_view> w) -> std::optional<std::string> {
    if (!w) return std::nullopt;
    return std::string(*w);
  };
  RelationRecord rec{RelationCategory::kSame, opt(src_word), opt(back_word), 0.0};

  if (!back_word) {
    rec.category = RelationCategory::kMissing;
    rec.cost = unit;
    return rec;
  }
  if (!src_word) {
    rec.category = RelationCategory::kExtra;
    rec.cost = unit;
    return rec;
  }
  if (*src_word == *back_word) return rec;
  if (lexicon.is_stopword(lang, *src_word) && lexicon.is_stopword(lang, *back_word)) {
    rec.category = RelationCategory::kStopword;
    rec.cost = unit;
    return rec;
  }
  const double embedding_cost = std::clamp(1.0 - similarity, 0.0, 2.0);
  const std::string lemma_src = lexicon.lemmatize(*src_word, lang);
  const std::string lemma_back = lexicon.lemmatize(*back_word, lang);
  if (lemma_src == lemma_back) {
    rec.category = RelationCategory::kInflection;
    rec.cost = embedding_cost;
    return rec;
  }
  if (lexicon.is_derivation(lang, lemma_src, lemma_back)) {
    rec.category = RelationCategory::kDerivation;
    rec.cost = embedding_cost;
    return rec;
  }
  rec.category = RelationCategory::kSense;
  rec.cost = std::clamp(sense_cost(*src_word, *back_word, similarity), 0.0, 1.0);
  return rec;
}

}  // namespace bivert
