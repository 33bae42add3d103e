#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "toi/corpus.hpp"

namespace fs = std::filesystem;
using namespace toi;

namespace {

fs::path temp_file(const std::string& name, const std::string& contents) {
  const fs::path dir = fs::temp_directory_path() / "toi_corpus_tests";
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream(path, std::ios::binary) << contents;
  return path;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("whitespace tokens are numbered by first appearance") {
  const TokenStream stream = tokenize_text("A B C A", TextMode::Whitespace);
  CHECK(stream.tokens == std::vector<TokenId>{0, 1, 2, 0});
  REQUIRE(stream.vocab);
  CHECK(stream.vocab->size() == 3);
  CHECK(stream.vocab->token(2) == "C");
}

TEST_CASE("empty text gives an empty stream") {
  CHECK(tokenize_text("", TextMode::Whitespace).size() == 0);
  CHECK(tokenize_text(" \n\t ", TextMode::Whitespace).size() == 0);
  CHECK(ingest_text(temp_file("empty.txt", ""), TextMode::Whitespace).empty());
}

TEST_CASE("a thirteen word line has thirteen tokens") {
  const auto path =
      temp_file("thirteen.txt", "a b c d e f g h i j k l m\n");
  CHECK(ingest_text(path, TextMode::Whitespace).size() == 13);
}

TEST_CASE("whitespace splitting honours Unicode spaces") {
  // U+00A0 no-break space and U+3000 ideographic space separate words.
  const TokenStream stream =
      tokenize_text("x\xC2\xA0y\xE3\x80\x80z  x", TextMode::Whitespace);
  CHECK(stream.tokens == std::vector<TokenId>{0, 1, 2, 0});
}

TEST_CASE("character mode keeps code points and skips line breaks") {
  CHECK(tokenize_text("ab", TextMode::Character).size() == 2);
  const TokenStream stream =
      tokenize_text("h\xC3\xA9 h\r\n", TextMode::Character);
  CHECK(stream.tokens == std::vector<TokenId>{0, 1, 2, 0});
  CHECK(stream.vocab->token(1) == "\xC3\xA9");
}

TEST_CASE("invalid UTF-8 is rejected") {
  CHECK_THROWS_AS(tokenize_text("a \xFF b", TextMode::Whitespace), CorpusError);
  CHECK_THROWS_AS(tokenize_text("\xC3", TextMode::Character), CorpusError);
  CHECK_THROWS_AS(tokenize_text("\xC0\x80", TextMode::Character), CorpusError);
}

TEST_CASE("text ingestion is deterministic") {
  const auto path = temp_file("det.txt", "the cat sat on the mat the end\n");
  CHECK(ingest_text(path, TextMode::Whitespace) ==
        ingest_text(path, TextMode::Whitespace));
}

TEST_CASE("missing file is an error") {
  CHECK_THROWS_AS(ingest_text("/nonexistent/toi.txt", TextMode::Whitespace),
                  CorpusError);
  CHECK_THROWS_AS(ingest_ids("/nonexistent/toi.bin"), CorpusError);
}

TEST_CASE("text id files") {
  CHECK(parse_ids("5\n7\n5").tokens == std::vector<TokenId>{5, 7, 5});
  CHECK(parse_ids("5\r\n7\r\n\n").tokens == std::vector<TokenId>{5, 7});
  CHECK(parse_ids("").empty());
  CHECK(ingest_ids(temp_file("empty.ids", "")).empty());
  CHECK(parse_ids("4294967295").tokens.front() == 4294967295u);

  CHECK_THROWS_AS(parse_ids("4294967296"), CorpusError);
  CHECK_THROWS_AS(parse_ids("99999999999999999999999"), CorpusError);
  CHECK_THROWS_AS(parse_ids("12x"), CorpusError);
  CHECK_THROWS_AS(parse_ids("-3"), CorpusError);
  CHECK_THROWS_AS(parse_ids("1 2"), CorpusError);
}

TEST_CASE("binary id format layout") {
  TokenStream stream;
  stream.tokens = {5, 7, 5};
  std::ostringstream out;
  write_ids(stream, out);
  const std::string bytes = out.str();
  REQUIRE(bytes.size() == 8 + 4 + 3 * 4);
  CHECK(bytes.substr(0, 8) == "TOITOK01");
  CHECK(bytes.substr(8, 4) == std::string("\x03\x00\x00\x00", 4));
  CHECK(bytes.substr(12, 4) == std::string("\x05\x00\x00\x00", 4));

  std::ostringstream empty;
  write_ids(TokenStream{}, empty);
  CHECK(empty.str() == std::string("TOITOK01\0\0\0\0", 12));
  CHECK(parse_ids(empty.str()).empty());
}

TEST_CASE("truncated or oversized binary files are rejected") {
  CHECK_THROWS_AS(parse_ids("TOITOK01\x01"), CorpusError);
  CHECK_THROWS_AS(parse_ids(std::string("TOITOK01\x02\0\0\0\x01\0\0\0", 16)),
                  CorpusError);
  CHECK_THROWS_AS(
      parse_ids(std::string("TOITOK01\x00\0\0\0\x01\0\0\0", 16)), CorpusError);
}

TEST_CASE("write_ids and ingest_ids are inverse (property)") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    TokenStream stream;
    stream.tokens.resize(gen() % 200);
    for (auto& id : stream.tokens) id = static_cast<TokenId>(gen());
    const auto path = temp_file("roundtrip.bin", "");
    write_ids(stream, path);
    const std::string first = slurp(path);
    const TokenStream back = ingest_ids(path);
    CHECK(back == stream);
    write_ids(back, path);
    CHECK(slurp(path) == first);
  }
}

TEST_CASE("vocabulary sidecar round trip") {
  const TokenStream stream =
      tokenize_text("der die das die \xE2\x82\xAC", TextMode::Whitespace);
  const auto path = temp_file("v.vocab", "");
  write_vocab(*stream.vocab, path);
  CHECK(slurp(path) == "der\ndie\ndas\n\xE2\x82\xAC\n");
  CHECK(read_vocab(path) == *stream.vocab);
  CHECK_THROWS_AS(read_vocab(temp_file("dup.vocab", "a\na\n")), CorpusError);
}

TEST_CASE("token ids stay below vocabulary size") {
  const TokenStream stream =
      tokenize_text("q w e r t y q w e r z", TextMode::Whitespace);
  for (const TokenId id : stream.tokens) CHECK(id < stream.vocab->size());
  for (TokenId id = 0; id < stream.vocab->size(); ++id) {
    CHECK(stream.vocab->find(stream.vocab->token(id)) == id);
  }
}
