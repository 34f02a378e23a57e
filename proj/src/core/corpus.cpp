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

#include "corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <utility>

#include <json.hpp>

#include "errors.hpp"
#include "utf8.hpp"

namespace bivert {

namespace {

using json = nlohmann::json;

// Sorted by key for binary search.
constexpr std::pair<std::string_view, std::string_view> kContractions[] = {
    {"ain't", "am not"},
    {"aren't", "are not"},
    {"can't", "cannot"},
    {"can't've", "cannot have"},
    {"could've", "could have"},
    {"couldn't", "could not"},
    {"couldn't've", "could not have"},
    {"daren't", "dare not"},
    {"didn't", "did not"},
    {"doesn't", "does not"},
    {"don't", "do not"},
    {"e'er", "ever"},
    {"everybody's", "everybody is"},
    {"everyone's", "everyone is"},
    {"finna", "fixing to"},
    {"gimme", "give me"},
    {"gonna", "going to"},
    {"gotta", "got to"},
    {"hadn't", "had not"},
    {"hadn't've", "had not have"},
    {"hasn't", "has not"},
    {"haven't", "have not"},
    {"he'd", "he would"},
    {"he'd've", "he would have"},
    {"he'll", "he will"},
    {"he'll've", "he will have"},
    {"he's", "he is"},
    {"here's", "here is"},
    {"how'd", "how did"},
    {"how'd'y", "how do you"},
    {"how'll", "how will"},
    {"how're", "how are"},
    {"how's", "how is"},
    {"i'd", "i would"},
    {"i'd've", "i would have"},
    {"i'll", "i will"},
    {"i'll've", "i will have"},
    {"i'm", "i am"},
    {"i've", "i have"},
    {"isn't", "is not"},
    {"it'd", "it would"},
    {"it'd've", "it would have"},
    {"it'll", "it will"},
    {"it'll've", "it will have"},
    {"it's", "it is"},
    {"let's", "let us"},
    {"ma'am", "madam"},
    {"mayn't", "may not"},
    {"might've", "might have"},
    {"mightn't", "might not"},
    {"mightn't've", "might not have"},
    {"must've", "must have"},
    {"mustn't", "must not"},
    {"mustn't've", "must not have"},
    {"needn't", "need not"},
    {"needn't've", "need not have"},
    {"ne'er", "never"},
    {"nobody's", "nobody is"},
    {"o'er", "over"},
    {"oughtn't", "ought not"},
    {"oughtn't've", "ought not have"},
    {"shan't", "shall not"},
    {"sha'n't", "shall not"},
    {"shan't've", "shall not have"},
    {"she'd", "she would"},
    {"she'd've", "she would have"},
    {"she'll", "she will"},
    {"she'll've", "she will have"},
    {"she's", "she is"},
    {"should've", "should have"},
    {"shouldn't", "should not"},
    {"shouldn't've", "should not have"},
    {"so's", "so is"},
    {"so've", "so have"},
    {"somebody's", "somebody is"},
    {"someone's", "someone is"},
    {"something's", "something is"},
    {"that'd", "that would"},
    {"that'd've", "that would have"},
    {"that'll", "that will"},
    {"that're", "that are"},
    {"that's", "that is"},
    {"there'd", "there would"},
    {"there'd've", "there would have"},
    {"there'll", "there will"},
    {"there're", "there are"},
    {"there's", "there is"},
    {"these're", "these are"},
    {"they'd", "they would"},
    {"they'd've", "they would have"},
    {"they'll", "they will"},
    {"they'll've", "they will have"},
    {"they're", "they are"},
    {"they've", "they have"},
    {"this's", "this is"},
    {"those're", "those are"},
    {"'tis", "it is"},
    {"to've", "to have"},
    {"'twas", "it was"},
    {"wanna", "want to"},
    {"wasn't", "was not"},
    {"we'd", "we would"},
    {"we'd've", "we would have"},
    {"we'll", "we will"},
    {"we'll've", "we will have"},
    {"we're", "we are"},
    {"we've", "we have"},
    {"weren't", "were not"},
    {"what'd", "what did"},
    {"what'll", "what will"},
    {"what'll've", "what will have"},
    {"what're", "what are"},
    {"what's", "what is"},
    {"what've", "what have"},
    {"when's", "when is"},
    {"when've", "when have"},
    {"where'd", "where did"},
    {"where're", "where are"},
    {"where's", "where is"},
    {"where've", "where have"},
    {"which's", "which is"},
    {"who'd", "who would"},
    {"who'd've", "who would have"},
    {"who'll", "who will"},
    {"who'll've", "who will have"},
    {"who're", "who are"},
    {"who's", "who is"},
    {"who've", "who have"},
    {"why'd", "why did"},
    {"why's", "why is"},
    {"why've", "why have"},
    {"will've", "will have"},
    {"won't", "will not"},
    {"won't've", "will not have"},
    {"would've", "would have"},
    {"wouldn't", "would not"},
    {"wouldn't've", "would not have"},
    {"y'all", "you all"},
    {"y'all'd", "you all would"},
    {"y'all'd've", "you all would have"},
    {"y'all're", "you all are"},
    {"y'all've", "you all have"},
    {"you'd", "you would"},
    {"you'd've", "you would have"},
    {"you'll", "you will"},
    {"you'll've", "you will have"},
    {"you're", "you are"},
    {"you've", "you have"},
};

const std::vector<std::pair<std::string_view, std::string_view>>& contraction_index() {
  static const auto index = [] {
    std::vector<std::pair<std::string_view, std::string_view>> v(
        std::begin(kContractions), std::end(kContractions));
    std::sort(v.begin(), v.end());
    return v;
  }();
  return index;
}

bool is_word_char(char32_t cp) {
  return cp == '\'' || (cp >= 'a' && cp <= 'z') || (cp >= '0' && cp <= '9') ||
         cp >= 0xC0;
}

// Expands contractions inside one whitespace-delimited chunk, leaving any
// surrounding punctuation in place.
std::string expand_chunk(std::u32string_view chunk) {
  std::size_t b = 0, e = chunk.size();
  while (b < e && !is_word_char(chunk[b])) ++b;
  while (e > b && !is_word_char(chunk[e - 1])) --e;
  const std::string core = utf8::encode(chunk.substr(b, e - b));
  auto expanded = expand_contraction(core);
  if (!expanded) return utf8::encode(chunk);
  return utf8::encode(chunk.substr(0, b)) + std::string(*expanded) +
         utf8::encode(chunk.substr(e));
}

std::string preprocess_english(std::string_view text) {
  std::u32string cps = utf8::decode(text);
  for (char32_t& cp : cps) {
    cp = utf8::to_lower(cp);
    if (cp == 0x2019 || cp == 0x2018) cp = '\'';
  }
  std::string out;
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && utf8::is_space(cps[i])) ++i;
    std::size_t j = i;
    while (j < cps.size() && !utf8::is_space(cps[j])) ++j;
    if (j > i) {
      if (!out.empty()) out.push_back(' ');
      out += expand_chunk(std::u32string_view(cps).substr(i, j - i));
    }
    i = j;
  }
  return out;
}

std::string preprocess_chinese(std::string_view text) {
  std::u32string kept;
  for (char32_t cp : utf8::decode(text))
    if (utf8::is_han(cp)) kept.push_back(cp);
  return utf8::encode(kept);
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw ParseError(line, what);
}

const json& require(const json& obj, const char* key, std::size_t line) {
  auto it = obj.find(key);
  if (it == obj.end()) parse_fail(line, std::string("missing key '") + key + "'");
  return *it;
}

std::string require_string(const json& obj, const char* key, std::size_t line) {
  const json& v = require(obj, key, line);
  if (!v.is_string()) parse_fail(line, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

struct ParsedSide {
  TokenizedSentence sentence;
  std::vector<std::vector<double>> rows;
};

ParsedSide parse_side(const json& side, const std::string& lang, std::size_t line) {
  if (!side.is_object()) parse_fail(line, "sentence must be an object");
  ParsedSide out;
  out.sentence.lang = lang;
  out.sentence.raw_text = require_string(side, "text", line);
  const json& words = require(side, "words", line);
  if (!words.is_array()) parse_fail(line, "'words' must be an array");
  for (const json& w : words) {
    if (!w.is_object()) parse_fail(line, "word must be an object");
    Word word;
    word.surface = require_string(w, "surface", line);
    const json& toks = require(w, "tokens", line);
    if (!toks.is_array()) parse_fail(line, "'tokens' must be an array");
    for (const json& t : toks) {
      if (!t.is_number_integer() || t.get<long long>() < 0)
        parse_fail(line, "token index must be a non-negative integer");
      word.token_indices.push_back(t.get<std::size_t>());
    }
    out.sentence.words.push_back(std::move(word));
  }
  const json& emb = require(side, "emb", line);
  if (!emb.is_array()) parse_fail(line, "'emb' must be an array");
  for (const json& row : emb) {
    if (!row.is_array()) parse_fail(line, "embedding row must be an array");
    std::vector<double> v;
    v.reserve(row.size());
    for (const json& x : row) {
      if (!x.is_number()) parse_fail(line, "embedding value must be a number");
      v.push_back(x.get<double>());
    }
    out.rows.push_back(std::move(v));
  }
  return out;
}

EmbeddingTable to_table(const std::vector<std::vector<double>>& rows,
                        std::size_t& file_dim, std::size_t line) {
  for (const auto& r : rows) {
    if (r.empty()) throw SchemaError(line, "empty embedding vector");
    if (file_dim == 0) file_dim = r.size();
    if (r.size() != file_dim)
      throw SchemaError(line, "embedding dim " + std::to_string(r.size()) +
                                  " does not match file dim " +
                                  std::to_string(file_dim));
  }
  if (rows.empty()) return EmbeddingTable(file_dim, {});
  return EmbeddingTable::from_rows(rows);
}

json side_to_json(const TokenizedSentence& s, const EmbeddingTable& emb) {
  json words = json::array();
  for (const Word& w : s.words)
    words.push_back({{"surface", w.surface}, {"tokens", w.token_indices}});
  json rows = json::array();
  for (std::size_t i = 0; i < emb.size(); ++i) {
    auto r = emb.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return {{"text", s.raw_text}, {"words", std::move(words)}, {"emb", std::move(rows)}};
}

}  // namespace

std::size_t TokenizedSentence::token_count() const {
  std::size_t n = 0;
  for (const Word& w : words) n += w.token_indices.size();
  return n;
}

std::vector<std::size_t> TokenizedSentence::token_owners() const {
  std::vector<std::size_t> owners(token_count());
  for (std::size_t w = 0; w < words.size(); ++w)
    for (std::size_t t : words[w].token_indices) owners.at(t) = w;
  return owners;
}

EmbeddingTable::EmbeddingTable(std::size_t dim, std::vector<double> data)
    : dim_(dim), data_(std::move(data)) {
  if (dim_ == 0 && !data_.empty())
    throw SchemaError("embedding dim must be positive");
  if (dim_ != 0 && data_.size() % dim_ != 0)
    throw SchemaError("embedding data is not a multiple of dim");
  for (double x : data_)
    if (!std::isfinite(x)) throw SchemaError("non-finite embedding value");
}

EmbeddingTable EmbeddingTable::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  const std::size_t dim = rows.front().size();
  std::vector<double> data;
  data.reserve(dim * rows.size());
  for (const auto& r : rows) {
    if (r.size() != dim) throw SchemaError("ragged embedding rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return EmbeddingTable(dim, std::move(data));
}

std::optional<std::string_view> expand_contraction(std::string_view word) {
  const auto& index = contraction_index();
  auto it = std::lower_bound(index.begin(), index.end(), word,
                             [](const auto& entry, std::string_view w) { return entry.first < w; });
  if (it == index.end() || it->first != word) return std::nullopt;
  return it->second;
}

std::string preprocess(std::string_view text, std::string_view lang) {
  if (text.empty()) throw Error(ErrorKind::kInvalidArgument, "empty text");
  std::string out;
  if (lang == "eng")
    out = preprocess_english(text);
  else if (lang == "zho")
    out = preprocess_chinese(text);
  else
    out = utf8::to_lower(text);
  if (out.empty() || std::all_of(out.begin(), out.end(), [](char c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r';
      }))
    throw Error(ErrorKind::kDegenerateSentence,
                "sentence is empty after preprocessing: '" + std::string(text) + "'");
  return out;
}

void validate_sentence(const TokenizedSentence& sentence, const EmbeddingTable& emb,
                       std::size_t line) {
  if (sentence.words.empty()) throw SchemaError(line, "sentence has no words");
  std::size_t next = 0;
  for (const Word& w : sentence.words) {
    if (w.surface.empty()) throw SchemaError(line, "empty word surface");
    if (w.token_indices.empty())
      throw SchemaError(line, "word '" + w.surface + "' has no tokens");
    for (std::size_t t : w.token_indices) {
      if (t != next)
        throw SchemaError(line, "token indices must cover 0..T-1 in order (word '" +
                                    w.surface + "')");
      ++next;
    }
  }
  if (emb.size() != next)
    throw SchemaError(line, "embedding count " + std::to_string(emb.size()) +
                                " does not match token count " + std::to_string(next));
}

std::vector<SentencePairRecord> parse_dataset(std::istream& in) {
  std::vector<SentencePairRecord> records;
  std::size_t file_dim = 0;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (std::all_of(text.begin(), text.end(), [](unsigned char c) { return std::isspace(c); }))
      continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      parse_fail(line, e.what());
    }
    if (!obj.is_object()) parse_fail(line, "record must be an object");

    SentencePairRecord rec;
    rec.id = require_string(obj, "id", line);
    rec.system = require_string(obj, "system", line);
    const std::string lang = require_string(obj, "lang", line);
    ParsedSide src = parse_side(require(obj, "src", line), lang, line);
    ParsedSide back = parse_side(require(obj, "back", line), lang, line);
    if (auto it = obj.find("human_score"); it != obj.end() && !it->is_null()) {
      if (!it->is_number()) parse_fail(line, "'human_score' must be a number");
      rec.human_score = it->get<double>();
    }

    rec.source_emb = to_table(src.rows, file_dim, line);
    rec.back_emb = to_table(back.rows, file_dim, line);
    rec.source = std::move(src.sentence);
    rec.back = std::move(back.sentence);
    validate_sentence(rec.source, rec.source_emb, line);
    validate_sentence(rec.back, rec.back_emb, line);
    for (const TokenizedSentence* s : {&rec.source, &rec.back}) {
      for (const Word& w : s->words) {
        std::string normalized;
        try {
          normalized = preprocess(w.surface, lang);
        } catch (const Error&) {
          throw SchemaError(line, "word '" + w.surface + "' does not survive preprocessing");
        }
        if (normalized != w.surface)
          throw SchemaError(line, "word '" + w.surface + "' is not preprocessed");
      }
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<SentencePairRecord> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::kMissingResource, "cannot open dataset '" + path.string() + "'");
  return parse_dataset(in);
}

void write_dataset(std::ostream& out, std::span<const SentencePairRecord> records) {
  for (const SentencePairRecord& r : records) {
    json obj = {{"id", r.id},
                {"system", r.system},
                {"lang", r.source.lang},
                {"src", side_to_json(r.source, r.source_emb)},
                {"back", side_to_json(r.back, r.back_emb)}};
    if (r.human_score) obj["human_score"] = *r.human_score;
    out << obj.dump() << '\n';
  }
}

}  // namespace bivert
