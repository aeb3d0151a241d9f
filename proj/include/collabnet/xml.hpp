#pragma once

// Streaming XML plumbing shared by the corpus reader and the GraphML reader.
// Tokenization is delegated to expat; this header adds byte sources with
// transparent gzip detection and DBLP's Latin-1 character entities.

#include <expat.h>
#include <zlib.h>

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "collabnet/error.hpp"

namespace collabnet::xml {

class ByteSource {
 public:
  virtual ~ByteSource() = default;
  // Fills up to `capacity` bytes; returns 0 at end of input.
  virtual std::size_t read(char* buffer, std::size_t capacity) = 0;
};

class StringSource final : public ByteSource {
 public:
  explicit StringSource(std::string data) : data_(std::move(data)) {}
  std::size_t read(char* buffer, std::size_t capacity) override {
    const std::size_t n = std::min(capacity, data_.size() - pos_);
    std::memcpy(buffer, data_.data() + pos_, n);
    pos_ += n;
    return n;
  }

 private:
  std::string data_;
  std::size_t pos_ = 0;
};

class StreamSource final : public ByteSource {
 public:
  explicit StreamSource(std::istream& in) : in_(in) {}
  std::size_t read(char* buffer, std::size_t capacity) override {
    in_.read(buffer, static_cast<std::streamsize>(capacity));
    return static_cast<std::size_t>(in_.gcount());
  }

 private:
  std::istream& in_;
};

class FileSource final : public ByteSource {
 public:
  explicit FileSource(const std::string& path) : in_(path, std::ios::binary) {
    if (!in_) throw IoError("io", "open", "cannot open " + path);
  }
  std::size_t read(char* buffer, std::size_t capacity) override {
    in_.read(buffer, static_cast<std::streamsize>(capacity));
    if (in_.bad()) throw IoError("io", "read", "read failure");
    return static_cast<std::size_t>(in_.gcount());
  }

 private:
  std::ifstream in_;
};

// Wraps another source. If the first two bytes are the gzip magic (1f 8b)
// the stream is inflated, otherwise bytes pass through unchanged.
class AutoDecompressSource final : public ByteSource {
 public:
  explicit AutoDecompressSource(std::unique_ptr<ByteSource> inner) : inner_(std::move(inner)) {
    head_len_ = fill(head_.data(), head_.size());
    gzip_ = head_len_ >= 2 && static_cast<unsigned char>(head_[0]) == 0x1f &&
            static_cast<unsigned char>(head_[1]) == 0x8b;
    if (gzip_) {
      zs_ = std::make_unique<z_stream>();
      std::memset(zs_.get(), 0, sizeof(z_stream));
      if (inflateInit2(zs_.get(), 15 + 32) != Z_OK)
        throw IoError("io", "inflate", "zlib initialisation failed");
      in_buf_.assign(head_.begin(), head_.begin() + static_cast<std::ptrdiff_t>(head_len_));
      zs_->next_in = reinterpret_cast<Bytef*>(in_buf_.data());
      zs_->avail_in = static_cast<uInt>(in_buf_.size());
    }
  }
  ~AutoDecompressSource() override {
    if (zs_) inflateEnd(zs_.get());
  }
  AutoDecompressSource(const AutoDecompressSource&) = delete;
  AutoDecompressSource& operator=(const AutoDecompressSource&) = delete;

  bool compressed() const noexcept { return gzip_; }

  std::size_t read(char* buffer, std::size_t capacity) override {
    if (!gzip_) {
      if (head_pos_ < head_len_) {
        const std::size_t n = std::min(capacity, head_len_ - head_pos_);
        std::memcpy(buffer, head_.data() + head_pos_, n);
        head_pos_ += n;
        return n;
      }
      return inner_->read(buffer, capacity);
    }
    if (finished_) return 0;
    zs_->next_out = reinterpret_cast<Bytef*>(buffer);
    zs_->avail_out = static_cast<uInt>(capacity);
    while (zs_->avail_out == capacity) {
      if (zs_->avail_in == 0) {
        in_buf_.resize(1 << 16);
        const std::size_t n = inner_->read(in_buf_.data(), in_buf_.size());
        if (n == 0) {
          throw IoError("io", "inflate", "truncated gzip stream");
        }
        zs_->next_in = reinterpret_cast<Bytef*>(in_buf_.data());
        zs_->avail_in = static_cast<uInt>(n);
      }
      const int rc = inflate(zs_.get(), Z_NO_FLUSH);
      if (rc == Z_STREAM_END) {
        finished_ = true;
        break;
      }
      if (rc != Z_OK && rc != Z_BUF_ERROR)
        throw IoError("io", "inflate", std::string("corrupt gzip stream: ") +
                                           (zs_->msg ? zs_->msg : "unknown"));
    }
    return capacity - zs_->avail_out;
  }

 private:
  std::size_t fill(char* out, std::size_t cap) {
    std::size_t got = 0;
    while (got < cap) {
      const std::size_t n = inner_->read(out + got, cap - got);
      if (n == 0) break;
      got += n;
    }
    return got;
  }

  std::unique_ptr<ByteSource> inner_;
  std::array<char, 2> head_{};
  std::size_t head_len_ = 0;
  std::size_t head_pos_ = 0;
  bool gzip_ = false;
  bool finished_ = false;
  std::unique_ptr<z_stream> zs_;
  std::vector<char> in_buf_;
};

inline std::unique_ptr<ByteSource> open_file(const std::string& path) {
  return std::make_unique<AutoDecompressSource>(std::make_unique<FileSource>(path));
}

inline std::unique_ptr<ByteSource> from_string(std::string data) {
  return std::make_unique<AutoDecompressSource>(std::make_unique<StringSource>(std::move(data)));
}

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// ISO 8859-1 entity names as declared by the DBLP DTD (code points 160..255).
inline bool resolve_latin1_entity(std::string_view name, std::string& out) {
  static constexpr std::array<std::string_view, 96> kNames = {
      "nbsp",   "iexcl",  "cent",   "pound",  "curren", "yen",    "brvbar", "sect",
      "uml",    "copy",   "ordf",   "laquo",  "not",    "shy",    "reg",    "macr",
      "deg",    "plusmn", "sup2",   "sup3",   "acute",  "micro",  "para",   "middot",
      "cedil",  "sup1",   "ordm",   "raquo",  "frac14", "frac12", "frac34", "iquest",
      "Agrave", "Aacute", "Acirc",  "Atilde", "Auml",   "Aring",  "AElig",  "Ccedil",
      "Egrave", "Eacute", "Ecirc",  "Euml",   "Igrave", "Iacute", "Icirc",  "Iuml",
      "ETH",    "Ntilde", "Ograve", "Oacute", "Ocirc",  "Otilde", "Ouml",   "times",
      "Oslash", "Ugrave", "Uacute", "Ucirc",  "Uuml",   "Yacute", "THORN",  "szlig",
      "agrave", "aacute", "acirc",  "atilde", "auml",   "aring",  "aelig",  "ccedil",
      "egrave", "eacute", "ecirc",  "euml",   "igrave", "iacute", "icirc",  "iuml",
      "eth",    "ntilde", "ograve", "oacute", "ocirc",  "otilde", "ouml",   "divide",
      "oslash", "ugrave", "uacute", "ucirc",  "uuml",   "yacute", "thorn",  "yuml"};
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) {
      append_utf8(out, static_cast<char32_t>(160 + i));
      return true;
    }
  }
  return false;
}

// SAX-style callbacks. Attribute arrays are expat's null-terminated
// name/value pairs.
class Handler {
 public:
  virtual ~Handler() = default;
  virtual void start_element(std::string_view name, const XML_Char** attrs) = 0;
  virtual void end_element(std::string_view name) = 0;
  virtual void characters(std::string_view text) = 0;
};

inline const char* find_attribute(const XML_Char** attrs, std::string_view name) {
  for (int i = 0; attrs && attrs[i]; i += 2)
    if (name == attrs[i]) return attrs[i + 1];
  return nullptr;
}

// Drives expat over a ByteSource in fixed-size chunks, so memory use does
// not depend on the input size.
class StreamingParser {
 public:
  StreamingParser(std::string module, std::string operation)
      : module_(std::move(module)), operation_(std::move(operation)) {
    parser_ = XML_ParserCreate("UTF-8");
    if (!parser_) throw Error(module_, operation_, "cannot allocate XML parser");
  }
  ~StreamingParser() {
    if (parser_) XML_ParserFree(parser_);
  }
  StreamingParser(const StreamingParser&) = delete;
  StreamingParser& operator=(const StreamingParser&) = delete;

  void run(ByteSource& source, Handler& handler) {
    handler_ = &handler;
    XML_SetUserData(parser_, this);
    XML_SetElementHandler(parser_, &StreamingParser::on_start, &StreamingParser::on_end);
    XML_SetCharacterDataHandler(parser_, &StreamingParser::on_chars);
    XML_SetSkippedEntityHandler(parser_, &StreamingParser::on_skipped);
    std::vector<char> buffer(1 << 16);
    for (;;) {
      const std::size_t n = source.read(buffer.data(), buffer.size());
      const bool last = n == 0;
      if (XML_Parse(parser_, buffer.data(), static_cast<int>(n), last) == XML_STATUS_ERROR) {
        throw ParseError(module_, operation_,
                         std::string("malformed XML: ") + XML_ErrorString(XML_GetErrorCode(parser_)),
                         static_cast<std::int64_t>(XML_GetCurrentByteIndex(parser_)));
      }
      if (last) break;
    }
  }

  std::int64_t byte_offset() const { return XML_GetCurrentByteIndex(parser_); }

 private:
  static void on_start(void* self, const XML_Char* name, const XML_Char** attrs) {
    static_cast<StreamingParser*>(self)->handler_->start_element(name, attrs);
  }
  static void on_end(void* self, const XML_Char* name) {
    static_cast<StreamingParser*>(self)->handler_->end_element(name);
  }
  static void on_chars(void* self, const XML_Char* s, int len) {
    static_cast<StreamingParser*>(self)->handler_->characters(
        std::string_view(s, static_cast<std::size_t>(len)));
  }
  static void on_skipped(void* self, const XML_Char* name, int is_parameter_entity) {
    if (is_parameter_entity) return;
    std::string text;
    if (!resolve_latin1_entity(name, text)) text = std::string("&") + name + ";";
    static_cast<StreamingParser*>(self)->handler_->characters(text);
  }

  std::string module_;
  std::string operation_;
  XML_Parser parser_ = nullptr;
  Handler* handler_ = nullptr;
};

// Escapes text for element content and attribute values.
inline std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace collabnet::xml
