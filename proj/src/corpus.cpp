#include "toi/corpus.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <limits>
#include <sstream>

namespace toi {

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CorpusError("cannot open '" + path.string() + "' for reading");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) {
    throw CorpusError("read error on '" + path.string() + "'");
  }
  return std::move(buffer).str();
}

// Decodes one UTF-8 code point starting at `pos`, advancing `pos`.
char32_t decode_utf8(std::string_view text, std::size_t& pos) {
  const auto lead = static_cast<unsigned char>(text[pos]);
  std::size_t extra = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    ++pos;
    return lead;
  } else if ((lead & 0xE0) == 0xC0) {
    extra = 1;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    extra = 2;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    extra = 3;
    cp = lead & 0x07;
  } else {
    throw CorpusError("invalid UTF-8 lead byte at offset " +
                      std::to_string(pos));
  }
  if (pos + extra >= text.size()) {
    throw CorpusError("truncated UTF-8 sequence at offset " +
                      std::to_string(pos));
  }
  for (std::size_t i = 1; i <= extra; ++i) {
    const auto byte = static_cast<unsigned char>(text[pos + i]);
    if ((byte & 0xC0) != 0x80) {
      throw CorpusError("invalid UTF-8 continuation byte at offset " +
                        std::to_string(pos + i));
    }
    cp = (cp << 6) | (byte & 0x3F);
  }
  static constexpr std::array<char32_t, 4> kMinForLength{0, 0x80, 0x800,
                                                         0x10000};
  if (cp < kMinForLength[extra] || cp > 0x10FFFF ||
      (cp >= 0xD800 && cp <= 0xDFFF)) {
    throw CorpusError("invalid UTF-8 code point at offset " +
                      std::to_string(pos));
  }
  pos += extra + 1;
  return cp;
}

bool is_unicode_space(char32_t cp) {
  return (cp >= 0x09 && cp <= 0x0D) || cp == 0x20 || cp == 0x85 ||
         cp == 0xA0 || cp == 0x1680 || (cp >= 0x2000 && cp <= 0x200A) ||
         cp == 0x2028 || cp == 0x2029 || cp == 0x202F || cp == 0x205F ||
         cp == 0x3000;
}

void put_u32_le(std::ostream& out, std::uint32_t value) {
  const std::array<char, 4> bytes{
      static_cast<char>(value & 0xFF), static_cast<char>((value >> 8) & 0xFF),
      static_cast<char>((value >> 16) & 0xFF),
      static_cast<char>((value >> 24) & 0xFF)};
  out.write(bytes.data(), bytes.size());
}

std::uint32_t get_u32_le(std::string_view bytes, std::size_t pos) {
  std::uint32_t value = 0;
  for (std::size_t i = 0; i < 4; ++i) {
    value |= static_cast<std::uint32_t>(
                 static_cast<unsigned char>(bytes[pos + i]))
             << (8 * i);
  }
  return value;
}

TokenStream parse_binary_ids(std::string_view bytes) {
  const std::size_t header = kTokenMagic.size() + 4;
  if (bytes.size() < header) {
    throw CorpusError("binary id file truncated before count");
  }
  const std::uint64_t count = get_u32_le(bytes, kTokenMagic.size());
  if (bytes.size() != header + 4 * count) {
    throw CorpusError("binary id file size does not match count " +
                      std::to_string(count));
  }
  TokenStream stream;
  stream.tokens.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    stream.tokens.push_back(get_u32_le(bytes, header + 4 * i));
  }
  return stream;
}

TokenStream parse_text_ids(std::string_view text) {
  TokenStream stream;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    ++line_no;
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;

    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);

    std::uint64_t value = 0;
    const auto [ptr, ec] =
        std::from_chars(line.data(), line.data() + line.size(), value);
    if (ec == std::errc::result_out_of_range ||
        (ec == std::errc{} && value > std::numeric_limits<TokenId>::max())) {
      throw CorpusError("line " + std::to_string(line_no) + ": id '" +
                        std::string(line) + "' overflows 32 bits");
    }
    if (ec != std::errc{} || ptr != line.data() + line.size()) {
      throw CorpusError("line " + std::to_string(line_no) +
                        ": malformed id '" + std::string(line) + "'");
    }
    stream.tokens.push_back(static_cast<TokenId>(value));
  }
  return stream;
}

}  // namespace

TokenId Vocabulary::intern(std::string_view token) {
  const std::string key(token);
  if (auto it = ids_.find(key); it != ids_.end()) return it->second;
  if (strings_.size() > std::numeric_limits<TokenId>::max()) {
    throw CorpusError("vocabulary exceeds 32-bit id space");
  }
  const auto id = static_cast<TokenId>(strings_.size());
  strings_.push_back(key);
  ids_.emplace(key, id);
  return id;
}

std::optional<TokenId> Vocabulary::find(std::string_view token) const {
  if (auto it = ids_.find(std::string(token)); it != ids_.end()) {
    return it->second;
  }
  return std::nullopt;
}

TextMode parse_text_mode(std::string_view name) {
  if (name == "whitespace" || name == "ws") return TextMode::Whitespace;
  if (name == "character" || name == "char") return TextMode::Character;
  throw std::invalid_argument("unknown tokenization mode '" +
                              std::string(name) + "'");
}

TokenStream tokenize_text(std::string_view text, TextMode mode) {
  TokenStream stream;
  Vocabulary vocab;
  std::size_t pos = 0;
  std::size_t word_begin = std::string_view::npos;

  while (pos < text.size()) {
    const std::size_t cp_begin = pos;
    const char32_t cp = decode_utf8(text, pos);
    if (mode == TextMode::Character) {
      if (cp == U'\n' || cp == U'\r') continue;
      stream.tokens.push_back(
          vocab.intern(text.substr(cp_begin, pos - cp_begin)));
      continue;
    }
    if (is_unicode_space(cp)) {
      if (word_begin != std::string_view::npos) {
        stream.tokens.push_back(
            vocab.intern(text.substr(word_begin, cp_begin - word_begin)));
        word_begin = std::string_view::npos;
      }
    } else if (word_begin == std::string_view::npos) {
      word_begin = cp_begin;
    }
  }
  if (word_begin != std::string_view::npos) {
    stream.tokens.push_back(vocab.intern(text.substr(word_begin)));
  }
  if (stream.tokens.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw CorpusError("stream exceeds 2^32-1 tokens");
  }
  stream.vocab = std::move(vocab);
  return stream;
}

TokenStream ingest_text(const std::filesystem::path& path, TextMode mode) {
  return tokenize_text(read_file(path), mode);
}

TokenStream parse_ids(std::string_view bytes) {
  if (bytes.substr(0, kTokenMagic.size()) == kTokenMagic) {
    return parse_binary_ids(bytes);
  }
  return parse_text_ids(bytes);
}

TokenStream ingest_ids(const std::filesystem::path& path) {
  return parse_ids(read_file(path));
}

void write_ids(const TokenStream& stream, std::ostream& out) {
  if (stream.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw CorpusError("stream exceeds 2^32-1 tokens");
  }
  out.write(kTokenMagic.data(), kTokenMagic.size());
  put_u32_le(out, static_cast<std::uint32_t>(stream.size()));
  for (const TokenId id : stream.tokens) put_u32_le(out, id);
}

void write_ids(const TokenStream& stream, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw CorpusError("cannot open '" + path.string() + "' for writing");
  }
  write_ids(stream, out);
  out.flush();
  if (!out) throw CorpusError("write error on '" + path.string() + "'");
}

void write_vocab(const Vocabulary& vocab, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw CorpusError("cannot open '" + path.string() + "' for writing");
  }
  for (const auto& token : vocab.strings()) out << token << '\n';
  out.flush();
  if (!out) throw CorpusError("write error on '" + path.string() + "'");
}

Vocabulary read_vocab(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  Vocabulary vocab;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    const std::string_view line(text.data() + pos, end - pos);
    const auto before = vocab.size();
    vocab.intern(line);
    if (vocab.size() == before) {
      throw CorpusError("duplicate vocabulary entry '" + std::string(line) +
                        "'");
    }
    pos = end + 1;
  }
  return vocab;
}

}  // namespace toi
