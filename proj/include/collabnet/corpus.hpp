#pragma once

#include <charconv>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "collabnet/error.hpp"
#include "collabnet/xml.hpp"

namespace collabnet {

enum class PublicationClass : std::uint8_t { Conference = 0, Journal = 1, Other = 2 };

inline std::string_view to_string(PublicationClass c) {
  switch (c) {
    case PublicationClass::Conference: return "conference";
    case PublicationClass::Journal: return "journal";
    case PublicationClass::Other: return "other";
  }
  return "other";
}

inline PublicationClass publication_class_from_string(std::string_view s) {
  if (s == "conference") return PublicationClass::Conference;
  if (s == "journal") return PublicationClass::Journal;
  if (s == "other") return PublicationClass::Other;
  throw ArgumentError("corpus_ingest", "classify_publication",
                      "unknown publication class '" + std::string(s) + "'");
}

// Small bitset over PublicationClass.
class ClassSet {
 public:
  constexpr ClassSet() = default;
  constexpr ClassSet(std::initializer_list<PublicationClass> classes) {
    for (auto c : classes) insert(c);
  }
  static constexpr ClassSet all() {
    return {PublicationClass::Conference, PublicationClass::Journal, PublicationClass::Other};
  }

  constexpr void insert(PublicationClass c) { bits_ |= bit(c); }
  constexpr bool contains(PublicationClass c) const { return (bits_ & bit(c)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool operator==(const ClassSet&) const = default;

 private:
  static constexpr std::uint8_t bit(PublicationClass c) {
    return static_cast<std::uint8_t>(1u << static_cast<unsigned>(c));
  }
  std::uint8_t bits_ = 0;
};

struct PublicationRecord {
  std::string key;
  PublicationClass publication_class = PublicationClass::Other;
  int year = 0;
  std::vector<std::string> authors;  // distinct, in document order
};

// Element-name to class mapping. Defaults follow the DBLP DTD:
// inproceedings is a conference paper, article a journal paper.
class ClassMapping {
 public:
  ClassMapping() : overrides_{{"inproceedings", PublicationClass::Conference},
                              {"article", PublicationClass::Journal}} {}

  void set(std::string element, PublicationClass c) { overrides_[std::move(element)] = c; }

  PublicationClass classify(std::string_view element_name) const {
    const auto it = overrides_.find(std::string(element_name));
    return it == overrides_.end() ? PublicationClass::Other : it->second;
  }

  const std::map<std::string, PublicationClass>& entries() const { return overrides_; }

 private:
  std::map<std::string, PublicationClass> overrides_;
};

inline PublicationClass classify_publication(std::string_view element_name,
                                             const ClassMapping& mapping = {}) {
  return mapping.classify(element_name);
}

struct CorpusFilter {
  int year_min = 1936;
  int year_max = 2008;
  ClassSet classes = ClassSet::all();
  // Element names dropped before classification. DBLP catalogues author
  // home pages as <www> records; they list name variants, not co-authors.
  std::set<std::string> excluded_elements = {"www"};

  void validate() const {
    if (year_min > year_max)
      throw ArgumentError("corpus_ingest", "parse_corpus",
                          "year_min (" + std::to_string(year_min) + ") > year_max (" +
                              std::to_string(year_max) + ")");
    if (classes.empty())
      throw ArgumentError("corpus_ingest", "parse_corpus", "class filter is empty");
  }
};

struct CorpusSummary {
  std::uint64_t seen = 0;
  std::uint64_t kept = 0;
  std::uint64_t skipped_by_year = 0;
  std::uint64_t skipped_by_class = 0;
  std::uint64_t malformed = 0;
  std::uint64_t kept_conference = 0;
  std::uint64_t kept_journal = 0;
  std::uint64_t kept_other = 0;
  std::uint64_t kept_without_authors = 0;

  friend bool operator==(const CorpusSummary&, const CorpusSummary&) = default;
};

inline void to_json(nlohmann::json& j, const CorpusSummary& s) {
  j = nlohmann::json{{"seen", s.seen},
                     {"kept", s.kept},
                     {"skipped_by_year", s.skipped_by_year},
                     {"skipped_by_class", s.skipped_by_class},
                     {"malformed", s.malformed},
                     {"kept_by_class",
                      {{"conference", s.kept_conference},
                       {"journal", s.kept_journal},
                       {"other", s.kept_other}}},
                     {"kept_without_authors", s.kept_without_authors}};
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return s;
}

class CorpusHandler final : public xml::Handler {
 public:
  using Sink = std::function<void(PublicationRecord&&)>;

  CorpusHandler(const CorpusFilter& filter, const ClassMapping& mapping, Sink sink)
      : filter_(filter), mapping_(mapping), sink_(std::move(sink)) {}

  void start_element(std::string_view name, const XML_Char** attrs) override {
    ++depth_;
    if (depth_ == 2) {
      in_record_ = true;
      element_ = std::string(name);
      current_ = PublicationRecord{};
      if (const char* key = xml::find_attribute(attrs, "key")) current_.key = key;
      year_text_.reset();
      seen_names_.clear();
    } else if (depth_ == 3 && in_record_) {
      if (name == "author") {
        field_ = Field::Author;
        text_.clear();
      } else if (name == "year") {
        field_ = Field::Year;
        text_.clear();
      } else {
        field_ = Field::None;
      }
    }
  }

  void end_element(std::string_view) override {
    if (depth_ == 3 && in_record_) {
      if (field_ == Field::Author) {
        const auto name = trim(text_);
        if (!name.empty() && seen_names_.insert(std::string(name)).second)
          current_.authors.emplace_back(name);
      } else if (field_ == Field::Year) {
        year_text_ = std::string(trim(text_));
      }
      field_ = Field::None;
    } else if (depth_ == 2 && in_record_) {
      finish_record();
      in_record_ = false;
    }
    --depth_;
  }

  void characters(std::string_view text) override {
    if (in_record_ && depth_ >= 3 && field_ != Field::None) text_.append(text);
  }

  const CorpusSummary& summary() const { return summary_; }

 private:
  enum class Field { None, Author, Year };

  void finish_record() {
    ++summary_.seen;
    if (filter_.excluded_elements.count(element_)) {
      ++summary_.skipped_by_class;
      return;
    }
    int year = 0;
    bool year_ok = false;
    if (year_text_) {
      const auto& t = *year_text_;
      const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), year);
      year_ok = ec == std::errc{} && ptr == t.data() + t.size() && year >= 1900 && year <= 2100;
    }
    if (current_.key.empty() || !year_ok) {
      ++summary_.malformed;
      return;
    }
    current_.year = year;
    if (year < filter_.year_min || year > filter_.year_max) {
      ++summary_.skipped_by_year;
      return;
    }
    current_.publication_class = mapping_.classify(element_);
    if (!filter_.classes.contains(current_.publication_class)) {
      ++summary_.skipped_by_class;
      return;
    }
    ++summary_.kept;
    switch (current_.publication_class) {
      case PublicationClass::Conference: ++summary_.kept_conference; break;
      case PublicationClass::Journal: ++summary_.kept_journal; break;
      case PublicationClass::Other: ++summary_.kept_other; break;
    }
    if (current_.authors.empty()) ++summary_.kept_without_authors;
    sink_(std::move(current_));
  }

  const CorpusFilter& filter_;
  const ClassMapping& mapping_;
  Sink sink_;
  CorpusSummary summary_;
  int depth_ = 0;
  bool in_record_ = false;
  Field field_ = Field::None;
  std::string element_;
  std::string text_;
  std::optional<std::string> year_text_;
  std::unordered_set<std::string> seen_names_;
  PublicationRecord current_;
};

}  // namespace detail

// Streams publication records to `sink` in document order. Only one record
// is held in memory at a time.
inline CorpusSummary parse_corpus(xml::ByteSource& source, const CorpusFilter& filter,
                                  const std::function<void(PublicationRecord&&)>& sink,
                                  const ClassMapping& mapping = {}) {
  filter.validate();
  detail::CorpusHandler handler(filter, mapping, sink);
  xml::StreamingParser parser("corpus_ingest", "parse_corpus");
  parser.run(source, handler);
  return handler.summary();
}

inline std::vector<PublicationRecord> read_corpus(xml::ByteSource& source,
                                                  const CorpusFilter& filter = {},
                                                  CorpusSummary* summary = nullptr,
                                                  const ClassMapping& mapping = {}) {
  std::vector<PublicationRecord> records;
  const auto s = parse_corpus(
      source, filter, [&](PublicationRecord&& r) { records.push_back(std::move(r)); }, mapping);
  if (summary) *summary = s;
  return records;
}

inline std::vector<PublicationRecord> read_corpus_string(std::string xml_text,
                                                         const CorpusFilter& filter = {},
                                                         CorpusSummary* summary = nullptr) {
  auto src = xml::from_string(std::move(xml_text));
  return read_corpus(*src, filter, summary);
}

}  // namespace collabnet
