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


#include <doctest.h>

#include <random>
#include <sstream>

#include "core/corpus.hpp"
#include "core/errors.hpp"
#include "core/utf8.hpp"
#include "support.hpp"

using namespace bivert;
using bivert::testing::data_path;

TEST_CASE("preprocess examples") {
  CHECK(preprocess("Don't go", "eng") == "do not go");
  CHECK(preprocess("hello", "eng") == "hello");
  CHECK(preprocess("你好ABC123", "zho") == "你好");
}

TEST_CASE("preprocess english") {
  CHECK(preprocess("  The   CAT\tsat ", "eng") == "the cat sat");
  CHECK(preprocess("I’m sure it won't", "eng") == "i am sure it will not");
  CHECK(preprocess("(Can't) stop", "eng") == "(cannot) stop");
  CHECK(preprocess("Rock'n'roll isn't dead", "eng") == "rock'n'roll is not dead");
  CHECK(preprocess("ÉCOLE", "eng") == "école");
}

TEST_CASE("preprocess chinese drops punctuation and latin") {
  CHECK(preprocess("我爱，北京！OK", "zho") == "我爱北京");
  CHECK(preprocess("  中 文  ", "zho") == "中文");
}

TEST_CASE("preprocess other languages lowercase only") {
  CHECK(preprocess("Der Hund Don't", "deu") == "der hund don't");
  CHECK(preprocess("ПРИВЕТ мир", "rus") == "привет мир");
  CHECK(preprocess("ΑΘΗΝΑ", "ell") == "αθηνα");
}

TEST_CASE("preprocess errors") {
  CHECK_THROWS_AS(preprocess("", "eng"), Error);
  try {
    preprocess("ABC 123", "zho");
    FAIL("expected DegenerateSentence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDegenerateSentence);
  }
  try {
    preprocess("   ", "eng");
    FAIL("expected DegenerateSentence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kDegenerateSentence);
  }
}

TEST_CASE("contraction table") {
  CHECK(expand_contraction("don't") == "do not");
  CHECK(expand_contraction("can't") == "cannot");
  CHECK(expand_contraction("y'all") == "you all");
  CHECK_FALSE(expand_contraction("rock'n'roll").has_value());
}

TEST_CASE("property: preprocess is idempotent") {
  std::mt19937_64 rng(7);
  const std::vector<std::string> pieces = {
      "Don't", "WON'T", "it’s", " ", "  ", "\t", "Hello", "ÄÖÜ", "世界", "，", "!",
      "Мир",   "y'all", "o'clock", "'tis", "abc123", "I'd", "日本語", "x", "'", "’"};
  for (const char* lang : {"eng", "zho", "deu", "rus"}) {
    for (int trial = 0; trial < 300; ++trial) {
      std::string text;
      const int n = 1 + static_cast<int>(rng() % 8);
      for (int i = 0; i < n; ++i) text += pieces[rng() % pieces.size()];
      std::string once;
      try {
        once = preprocess(text, lang);
      } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::kDegenerateSentence);
        continue;
      }
      INFO(lang << " '" << text << "'");
      CHECK(preprocess(once, lang) == once);
    }
  }
}

TEST_CASE("utf8 round trip and validation") {
  const std::string s = "añ中😀";
  const auto cps = utf8::decode(s);
  REQUIRE(cps.size() == 4);
  CHECK(utf8::encode(cps) == s);
  CHECK_THROWS_AS(utf8::decode("\xff\xfe"), Error);
  CHECK(utf8::is_han(U'中'));
  CHECK_FALSE(utf8::is_han(U'，'));
}

TEST_CASE("load_dataset examples") {
  SUBCASE("well formed") {
    const auto recs = load_dataset(data_path("identity.jsonl"));
    REQUIRE(recs.size() == 3);
    CHECK(recs[0].id == "id0");
    CHECK(recs[1].id == "id1");
    CHECK(recs[2].id == "id2");
    CHECK(recs[0].source.len() == 3);
    CHECK(recs[0].source_emb.dim() == 3);
    CHECK(recs[0].human_score == doctest::Approx(7.5));
  }
  SUBCASE("wrong dim on line 2") {
    try {
      load_dataset(data_path("bad_dim.jsonl"));
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("empty file") { CHECK(load_dataset(data_path("empty.jsonl")).empty()); }
  SUBCASE("malformed line") {
    try {
      load_dataset(data_path("malformed.jsonl"));
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line() == 2);
    }
  }
  SUBCASE("missing file") {
    try {
      load_dataset(data_path("nope.jsonl"));
      FAIL("expected MissingResource");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kMissingResource);
    }
  }
}

namespace {

std::string record_line(const std::string& src_side) {
  const std::string ok =
      R"({"text":"hi there","words":[{"surface":"hi","tokens":[0]},{"surface":"there","tokens":[1]}],"emb":[[1,0],[0,1]]})";
  return R"({"id":"r","system":"s","lang":"eng","src":)" + src_side + R"(,"back":)" + ok + "}";
}

ErrorKind parse_kind(const std::string& text, std::size_t* line = nullptr) {
  std::istringstream in(text);
  try {
    parse_dataset(in);
  } catch (const LineError& e) {
    if (line) *line = e.line();
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::kInvalidArgument;
}

}  // namespace

TEST_CASE("dataset schema violations") {
  // Token gap.
  CHECK(parse_kind(record_line(
            R"({"text":"hi there","words":[{"surface":"hi","tokens":[0]},{"surface":"there","tokens":[2]}],"emb":[[1,0],[0,1],[1,1]]})")) ==
        ErrorKind::kSchema);
  // Embedding count differs from token count.
  CHECK(parse_kind(record_line(
            R"({"text":"hi there","words":[{"surface":"hi","tokens":[0]},{"surface":"there","tokens":[1]}],"emb":[[1,0]]})")) ==
        ErrorKind::kSchema);
  // Surface not normalized.
  CHECK(parse_kind(record_line(
            R"({"text":"Hi there","words":[{"surface":"Hi","tokens":[0]},{"surface":"there","tokens":[1]}],"emb":[[1,0],[0,1]]})")) ==
        ErrorKind::kSchema);
  // No words.
  CHECK(parse_kind(record_line(R"({"text":"hi","words":[],"emb":[]})")) == ErrorKind::kSchema);
  // Non-numeric embedding.
  CHECK(parse_kind(record_line(
            R"({"text":"hi there","words":[{"surface":"hi","tokens":[0]},{"surface":"there","tokens":[1]}],"emb":[[1,"x"],[0,1]]})")) ==
        ErrorKind::kParse);
  // Missing key.
  std::size_t line = 0;
  CHECK(parse_kind("\n" + std::string(R"({"id":"r","lang":"eng"})") + "\n", &line) ==
        ErrorKind::kParse);
  CHECK(line == 2);
}

TEST_CASE("property: dataset write/load round trip") {
  std::mt19937_64 rng(11);
  const std::vector<std::string> vocab = {"the", "cat", "sat", "on", "mat", "dog", "über"};
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<SentencePairRecord> recs;
    const std::size_t dim = 1 + rng() % 5;
    const std::size_t n = rng() % 4;
    for (std::size_t i = 0; i < n; ++i) {
      auto side = [&] {
        std::vector<std::pair<std::string, std::size_t>> ws;
        const std::size_t k = 1 + rng() % 5;
        for (std::size_t j = 0; j < k; ++j) ws.emplace_back(vocab[rng() % vocab.size()], 1 + rng() % 3);
        return bivert::testing::subword_sentence("deu", ws);
      };
      SentencePairRecord r;
      r.id = "r" + std::to_string(i);
      r.system = "sys" + std::to_string(rng() % 3);
      r.source = side();
      r.back = side();
      r.source_emb = bivert::testing::random_embeddings(rng, r.source.token_count(), dim);
      r.back_emb = bivert::testing::random_embeddings(rng, r.back.token_count(), dim);
      if (rng() % 2) r.human_score = std::uniform_real_distribution<double>(-5, 10)(rng);
      recs.push_back(std::move(r));
    }
    std::stringstream buf;
    write_dataset(buf, recs);
    const auto back = parse_dataset(buf);
    CHECK(back == recs);
  }
}

TEST_CASE("token owners") {
  const auto s = bivert::testing::subword_sentence("eng", {{"in", 3}, {"a", 1}});
  CHECK(s.token_count() == 4);
  CHECK(s.token_owners() == std::vector<std::size_t>{0, 0, 0, 1});
}
