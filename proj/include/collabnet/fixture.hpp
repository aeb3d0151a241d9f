#pragma once

// Synthetic corpora in the DBLP XML dialect read by parse_corpus.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include <fmt/format.h>

#include "collabnet/error.hpp"
#include "collabnet/xml.hpp"

namespace collabnet {

struct FixtureParams {
  std::uint64_t seed = 1;
  std::size_t n_authors = 100;
  std::size_t n_papers = 100;
  double mean_authors_per_paper = 2.5;
  int year_first = 1980;
  int year_last = 2008;
};

namespace detail {

// Mean of the geometric distribution on {1, ..., cap} with success probability p.
inline double truncated_geometric_mean(double p, std::size_t cap) {
  if (p >= 1.0) return 1.0;
  double num = 0.0, den = 0.0, w = 1.0;
  for (std::size_t k = 1; k <= cap; ++k) {
    num += static_cast<double>(k) * w;
    den += w;
    w *= 1.0 - p;
    if (w < 1e-300) break;
  }
  return num / den;
}

// Success probability giving the requested truncated mean (bisection; the
// mean is decreasing in p).
inline double solve_truncated_geometric(double mean, std::size_t cap) {
  if (mean <= 1.0) return 1.0;
  double lo = 1e-12, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (truncated_geometric_mean(mid, cap) > mean)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

// Produces the fixture one record at a time. Memory is O(n_authors).
class FixtureWriter {
 public:
  explicit FixtureWriter(const FixtureParams& params) : params_(params), rng_(params.seed) {
    if (params.n_authors < 1)
      throw ArgumentError("corpus_ingest", "generate_fixture", "n_authors must be >= 1");
    if (!(params.mean_authors_per_paper >= 1.0))
      throw ArgumentError("corpus_ingest", "generate_fixture",
                          "mean_authors_per_paper must be >= 1");
    const double reachable = (static_cast<double>(params.n_authors) + 1.0) / 2.0;
    if (params.n_authors > 1 && params.mean_authors_per_paper >= reachable)
      throw ArgumentError("corpus_ingest", "generate_fixture",
                          "mean_authors_per_paper too large for n_authors");
    if (params.n_authors == 1 && params.mean_authors_per_paper > 1.0)
      throw ArgumentError("corpus_ingest", "generate_fixture",
                          "a single author cannot give a mean above 1");
    if (params.year_first > params.year_last)
      throw ArgumentError("corpus_ingest", "generate_fixture", "empty year range");
    success_ = detail::solve_truncated_geometric(params.mean_authors_per_paper, params.n_authors);
    // Skewed author popularity so that productivity has a long tail.
    std::vector<double> weights(params.n_authors);
    for (std::size_t i = 0; i < weights.size(); ++i)
      weights[i] = 1.0 / std::pow(static_cast<double>(i) + 2.0, 0.8);
    popularity_ = std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
  }

  // Appends the next chunk of XML to `out`; returns false once exhausted.
  bool next(std::string& out) {
    if (stage_ == Stage::Header) {
      out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
             "<!DOCTYPE dblp SYSTEM \"dblp.dtd\">\n<dblp>\n";
      stage_ = params_.n_papers > 0 ? Stage::Records : Stage::Footer;
      return true;
    }
    if (stage_ == Stage::Records) {
      emit_record(out);
      if (++emitted_ == params_.n_papers) stage_ = Stage::Footer;
      return true;
    }
    if (stage_ == Stage::Footer) {
      out += "</dblp>\n";
      stage_ = Stage::Done;
      return true;
    }
    return false;
  }

  static std::string author_name(std::size_t id) {
    // Every seventh author carries a non-ASCII name to exercise entity handling.
    if (id % 7 == 3) return fmt::format("J&#252;rgen M&#252;ller-{}", id);
    return fmt::format("Author Name {}", id);
  }

 private:
  enum class Stage { Header, Records, Footer, Done };

  std::size_t draw_author_count() {
    if (success_ >= 1.0) return 1;
    std::geometric_distribution<std::size_t> geo(success_);
    for (;;) {
      const std::size_t k = geo(rng_) + 1;
      if (k <= params_.n_authors) return k;
    }
  }

  void emit_record(std::string& out) {
    const std::size_t k = draw_author_count();
    std::vector<std::size_t> authors;
    authors.reserve(k);
    if (2 * k > params_.n_authors) {
      std::vector<std::size_t> all(params_.n_authors);
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
      for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, all.size() - 1);
        std::swap(all[i], all[pick(rng_)]);
        authors.push_back(all[i]);
      }
    } else {
      std::unordered_set<std::size_t> used;
      while (authors.size() < k) {
        const std::size_t a = popularity_(rng_);
        if (used.insert(a).second) authors.push_back(a);
      }
    }
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(rng_);
    const char* element;
    const char* prefix;
    if (u < 0.60) {
      element = "inproceedings";
      prefix = "conf";
    } else if (u < 0.97) {
      element = "article";
      prefix = "journals";
    } else {
      static constexpr const char* kOther[] = {"incollection", "book", "phdthesis"};
      element = kOther[emitted_ % 3];
      prefix = "books";
    }
    std::uniform_int_distribution<int> year(params_.year_first, params_.year_last);
    out += fmt::format("<{} key=\"{}/fx/{}\" mdate=\"2010-01-01\">\n", element, prefix, emitted_);
    for (const auto a : authors) out += fmt::format("<author>{}</author>\n", author_name(a));
    out += fmt::format("<title>Synthetic paper {}.</title>\n<year>{}</year>\n</{}>\n", emitted_,
                       year(rng_), element);
  }

  FixtureParams params_;
  std::mt19937_64 rng_;
  double success_ = 1.0;
  std::discrete_distribution<std::size_t> popularity_;
  Stage stage_ = Stage::Header;
  std::size_t emitted_ = 0;
};

inline void generate_fixture(const FixtureParams& params, std::ostream& out) {
  FixtureWriter writer(params);
  std::string chunk;
  while (writer.next(chunk)) {
    out << chunk;
    chunk.clear();
  }
}

inline std::string generate_fixture(const FixtureParams& params) {
  FixtureWriter writer(params);
  std::string all;
  while (writer.next(all)) {
  }
  return all;
}

// A ByteSource that generates the fixture lazily; used to feed large corpora
// to the parser without materializing them.
class FixtureSource final : public xml::ByteSource {
 public:
  explicit FixtureSource(const FixtureParams& params) : writer_(params) {}

  std::size_t read(char* buffer, std::size_t capacity) override {
    while (pending_.size() - pos_ < capacity) {
      if (pos_ > 0) {
        pending_.erase(0, pos_);
        pos_ = 0;
      }
      if (!writer_.next(pending_)) break;
    }
    const std::size_t n = std::min(capacity, pending_.size() - pos_);
    std::copy_n(pending_.data() + pos_, n, buffer);
    pos_ += n;
    return n;
  }

 private:
  FixtureWriter writer_;
  std::string pending_;
  std::size_t pos_ = 0;
};

}  // namespace collabnet
