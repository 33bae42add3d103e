#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace toi {

using TokenId = std::uint32_t;

/// Raised for unreadable, malformed or unwritable corpus files.
class CorpusError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bidirectional token-string <-> id map. Ids are dense and assigned in
/// insertion order.
class Vocabulary {
 public:
  /// Returns the id of `token`, inserting it with the next free id if new.
  TokenId intern(std::string_view token);

  std::optional<TokenId> find(std::string_view token) const;
  const std::string& token(TokenId id) const { return strings_.at(id); }
  std::size_t size() const { return strings_.size(); }
  const std::vector<std::string>& strings() const { return strings_; }

  bool operator==(const Vocabulary& other) const {
    return strings_ == other.strings_;
  }

 private:
  std::vector<std::string> strings_;
  std::unordered_map<std::string, TokenId> ids_;
};

/// A contiguous token sequence. Immutable once built.
struct TokenStream {
  std::vector<TokenId> tokens;
  std::optional<Vocabulary> vocab;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }

  bool operator==(const TokenStream&) const = default;
};

enum class TextMode { Whitespace, Character };

/// Parses "whitespace" / "character" (also "ws", "char").
TextMode parse_text_mode(std::string_view name);

/// Tokenizes UTF-8 text, numbering tokens by first appearance.
///
/// Whitespace mode splits on runs of Unicode white space. Character mode
/// makes every code point a token except CR and LF, which would not survive
/// the line-oriented vocabulary sidecar.
TokenStream tokenize_text(std::string_view text, TextMode mode);

TokenStream ingest_text(const std::filesystem::path& path, TextMode mode);

/// Reads either the binary id format (detected by its magic) or a text file
/// holding one non-negative integer per line. Blank lines are skipped.
TokenStream ingest_ids(const std::filesystem::path& path);
TokenStream parse_ids(std::string_view bytes);

/// Binary id format: "TOITOK01", u32 LE count, count x u32 LE ids.
inline constexpr std::string_view kTokenMagic = "TOITOK01";

void write_ids(const TokenStream& stream, std::ostream& out);
void write_ids(const TokenStream& stream, const std::filesystem::path& path);

/// Sidecar: line k holds the string for id k.
void write_vocab(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary read_vocab(const std::filesystem::path& path);

}  // namespace toi
