#pragma once

// Discrete power-law tail fitting: exact maximum-likelihood exponent with
// Hurwitz-zeta normalization, KS-optimal choice of the tail start, and a
// semiparametric bootstrap goodness-of-fit p-value.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "collabnet/error.hpp"
#include "collabnet/parallel.hpp"
#include "collabnet/zeta.hpp"

namespace collabnet {

// Samples as sorted (value, count) pairs. Every operation below depends
// on the multiset only, never on sample order.
class SampleHistogram {
 public:
  SampleHistogram() = default;

  template <typename Int>
  static SampleHistogram from_samples(std::span<const Int> samples) {
    std::map<std::uint64_t, std::uint64_t> counts;
    for (const auto x : samples) {
      if (x < 1) throw ArgumentError("powerlaw_fit", "histogram", "samples must be positive integers");
      ++counts[static_cast<std::uint64_t>(x)];
    }
    return from_counts(counts);
  }

  template <typename Int>
  static SampleHistogram from_samples(const std::vector<Int>& samples) {
    return from_samples(std::span<const Int>(samples));
  }

  static SampleHistogram from_counts(const std::map<std::uint64_t, std::uint64_t>& counts) {
    SampleHistogram h;
    for (const auto& [v, c] : counts) {
      if (c == 0) continue;
      if (v < 1) throw ArgumentError("powerlaw_fit", "histogram", "samples must be positive integers");
      h.values_.push_back(v);
      h.counts_.push_back(c);
      h.total_ += c;
    }
    return h;
  }

  std::size_t distinct() const { return values_.size(); }
  std::uint64_t total() const { return total_; }
  std::uint64_t value(std::size_t i) const { return values_[i]; }
  std::uint64_t count(std::size_t i) const { return counts_[i]; }
  const std::vector<std::uint64_t>& values() const { return values_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  std::uint64_t count_at_least(std::uint64_t x) const {
    std::uint64_t c = 0;
    for (std::size_t i = distinct(); i-- > 0 && values_[i] >= x;) c += counts_[i];
    return c;
  }

 private:
  std::vector<std::uint64_t> values_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

struct CcdfPoint {
  std::uint64_t degree;
  double ccdf;  // P(X >= degree)
};

inline std::vector<CcdfPoint> ccdf(const SampleHistogram& h) {
  if (h.total() == 0) throw ArgumentError("powerlaw_fit", "ccdf", "empty sample");
  std::vector<CcdfPoint> pts(h.distinct());
  std::uint64_t above = h.total();
  for (std::size_t i = 0; i < h.distinct(); ++i) {
    pts[i] = {h.value(i), static_cast<double>(above) / static_cast<double>(h.total())};
    above -= h.count(i);
  }
  return pts;
}

struct AlphaFit {
  double alpha = 0.0;
  double ks_statistic = 0.0;
  std::uint64_t tail_size = 0;
};

struct PowerLawCandidate {
  std::uint64_t xmin = 0;
  double alpha = 0.0;
  double ks_statistic = 0.0;
  std::uint64_t tail_size = 0;
};

struct PowerLawFit {
  std::uint64_t xmin = 0;
  double alpha = 0.0;
  std::uint64_t tail_size = 0;
  double tail_share = 0.0;
  double ks_statistic = 0.0;
  double p_value = 0.0;
  std::size_t bootstrap_count = 0;
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
  bool plausible = false;              // p_value >= 0.1
  bool low_bootstrap_warning = false;  // bootstrap_count < 100
  // Other local minima of the KS scan within 5% of the optimum.
  std::vector<PowerLawCandidate> near_optimal;
};

struct TailFitOptions {
  std::size_t bootstrap_count = 1000;
  std::uint64_t seed = 1;
  std::size_t min_tail = 10;
  // Fast mode: skip the scan and fit at this tail start. Never used for
  // reported p-values.
  std::optional<std::uint64_t> fixed_xmin;
  double near_optimal_tolerance = 0.05;
  unsigned threads = 0;
};

namespace powerlaw_detail {

inline constexpr double kAlphaLow = 1.01;
inline constexpr double kAlphaHigh = 20.0;

// Expected ln X under the tail model minus the observed mean log, and its
// derivative (minus the variance of ln X). Decreasing in alpha.
struct Score {
  double value;
  double slope;
};

inline Score score(double alpha, double xmin, double mean_log) {
  const auto z = zeta::hurwitz_with_derivatives(alpha, xmin);
  const double ratio = z.d1 / z.value;
  return {-ratio - mean_log, -(z.d2 / z.value - ratio * ratio)};
}

// Root of the likelihood equation by safeguarded Newton iteration inside
// (kAlphaLow, kAlphaHigh). Throws when the maximum is not interior.
inline double solve_alpha(double xmin, double mean_log, double start) {
  double lo = kAlphaLow, hi = kAlphaHigh;
  if (!(mean_log > std::log(xmin)) || score(hi, xmin, mean_log).value > 0.0)
    throw UnboundedFitError("powerlaw_fit", "fit_alpha", "likelihood increases without bound in alpha");
  if (score(lo, xmin, mean_log).value < 0.0)
    throw UnboundedFitError("powerlaw_fit", "fit_alpha", "likelihood maximum below alpha = 1.01");
  double a = std::clamp(start, lo + 1e-9, hi - 1e-9);
  for (int it = 0; it < 200; ++it) {
    const auto sc = score(a, xmin, mean_log);
    if (sc.value == 0.0) return a;
    if (sc.value > 0.0)
      lo = a;
    else
      hi = a;
    double next = a - sc.value / sc.slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - a) <= 1e-12 * a || hi - lo <= 1e-12 * a) return next;
    a = next;
  }
  return a;
}

// Precomputed suffix statistics over a histogram.
struct Prepared {
  const SampleHistogram* h;
  std::vector<double> log_value;
  std::vector<std::uint64_t> suffix_count;
  std::vector<double> suffix_log;

  explicit Prepared(const SampleHistogram& hist) : h(&hist) {
    const std::size_t D = hist.distinct();
    log_value.resize(D);
    suffix_count.assign(D + 1, 0);
    suffix_log.assign(D + 1, 0.0);
    for (std::size_t i = 0; i < D; ++i) log_value[i] = std::log(static_cast<double>(hist.value(i)));
    for (std::size_t i = D; i-- > 0;) {
      suffix_count[i] = suffix_count[i + 1] + hist.count(i);
      suffix_log[i] = suffix_log[i + 1] + static_cast<double>(hist.count(i)) * log_value[i];
    }
  }

  double zeta_at(double alpha, std::size_t i) const {
    const double v = static_cast<double>(h->value(i));
    return v >= 10.0 ? zeta::hurwitz_large(alpha, v, log_value[i]) : zeta::hurwitz(alpha, v);
  }

  double fit_alpha(std::size_t j) const {
    const double xmin = static_cast<double>(h->value(j));
    const double mean_log = suffix_log[j] / static_cast<double>(suffix_count[j]);
    const double start = 1.0 + 1.0 / std::max(1e-12, mean_log - std::log(xmin - 0.5));
    return solve_alpha(xmin, mean_log, start);
  }

  // KS distance between the tail starting at distinct index j and the fitted
  // model, evaluated at both ends of every flat stretch of the empirical CDF.
  // Returns nullopt as soon as the running maximum reaches `abort_at`.
  std::optional<double> ks(std::size_t j, double alpha, double abort_at) const {
    const std::size_t D = h->distinct();
    const double nt = static_cast<double>(suffix_count[j]);
    const double z0 = zeta_at(alpha, j);
    double worst = 0.0;
    for (std::size_t k = j; k < D; ++k) {
      const double s_here = zeta_at(alpha, k);
      const double s_next = s_here - std::exp(-alpha * log_value[k]);
      // Empirical survival just below and at v_k.
      const double above_prev = static_cast<double>(suffix_count[k]) / nt;
      const double above_here = static_cast<double>(suffix_count[k + 1]) / nt;
      worst = std::max({worst, std::fabs(s_here / z0 - above_prev), std::fabs(s_next / z0 - above_here)});
      if (worst >= abort_at) return std::nullopt;
    }
    return worst;
  }
};

struct ScanPoint {
  std::size_t index;
  double alpha;
  std::optional<double> ks;  // empty when abandoned above the running bound
};

struct ScanResult {
  std::size_t best = 0;
  double alpha = 0.0;
  double ks = std::numeric_limits<double>::infinity();
  std::vector<ScanPoint> points;
  bool found = false;
};

// Scans every distinct value with at least `min_tail` samples at or above it.
// `slack` >= 1 widens the abandonment bound so that near-optimal points are
// evaluated in full.
inline ScanResult scan(const Prepared& p, std::size_t min_tail, double slack, bool keep_points) {
  ScanResult r;
  const std::size_t D = p.h->distinct();
  for (std::size_t j = 0; j < D; ++j) {
    if (p.suffix_count[j] < min_tail) break;
    if (j + 1 == D) break;  // single-valued tail: unbounded exponent
    double alpha;
    try {
      alpha = p.fit_alpha(j);
    } catch (const UnboundedFitError&) {
      if (keep_points) r.points.push_back({j, 0.0, std::nullopt});
      continue;
    }
    const auto d = p.ks(j, alpha, r.found ? r.ks * slack : std::numeric_limits<double>::infinity());
    if (keep_points) r.points.push_back({j, alpha, d});
    if (d && (!r.found || *d < r.ks)) {
      r.found = true;
      r.best = j;
      r.alpha = alpha;
      r.ks = *d;
    }
  }
  return r;
}

// Histogram of n i.i.d. draws from the model "with probability tail_share
// from the fitted power law on [xmin, inf), otherwise uniformly from the
// empirical samples below xmin". Counts are produced by sequential
// conditional binomials; once few draws remain they are drawn one by one by
// inversion of the tail survival function.
inline SampleHistogram synthetic_dataset(const SampleHistogram& observed, std::size_t xmin_index, double alpha,
                                         std::mt19937_64& rng) {
  const std::uint64_t n = observed.total();
  std::uint64_t below = 0;
  for (std::size_t i = 0; i < xmin_index; ++i) below += observed.count(i);
  const std::uint64_t tail_obs = n - below;
  std::map<std::uint64_t, std::uint64_t> counts;
  std::binomial_distribution<std::uint64_t> split(n, static_cast<double>(tail_obs) / static_cast<double>(n));
  std::uint64_t tail = split(rng);
  std::uint64_t body = n - tail;
  // Body: multinomial over the empirical values below xmin.
  std::uint64_t mass = below;
  for (std::size_t i = 0; i < xmin_index && body > 0; ++i) {
    const std::uint64_t c = observed.count(i);
    std::uint64_t k = body;
    if (i + 1 < xmin_index) {
      std::binomial_distribution<std::uint64_t> b(body, static_cast<double>(c) / static_cast<double>(mass));
      k = b(rng);
    }
    if (k) counts[observed.value(i)] += k;
    body -= k;
    mass -= c;
  }
  // Tail.
  const double x0 = static_cast<double>(observed.value(xmin_index));
  double x = x0;
  double S = zeta::hurwitz(alpha, x);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  constexpr std::uint64_t kIndividual = 32;
  int since_refresh = 0;
  while (tail >= kIndividual) {
    const double px = std::exp(-alpha * std::log(x));
    const double q = std::min(1.0, px / S);
    std::binomial_distribution<std::uint64_t> b(tail, q);
    const std::uint64_t k = b(rng);
    if (k) counts[static_cast<std::uint64_t>(x)] += k;
    tail -= k;
    x += 1.0;
    if (++since_refresh == 64) {
      S = zeta::hurwitz(alpha, x);
      since_refresh = 0;
    } else {
      S -= px;
    }
  }
  // Remaining draws conditional on X >= x.
  for (; tail > 0; --tail) {
    const double u = 1.0 - unit(rng);  // (0, 1]
    const double target = u * S;
    double guess = 0.5 + (x - 0.5) * std::pow(u, -1.0 / (alpha - 1.0));
    guess = std::clamp(std::floor(guess), x, 1e15);
    // Find y with S(y + 1) < target <= S(y).
    double y = guess;
    while (y > x && zeta::hurwitz(alpha, y) < target) y = std::max(x, std::floor(x + (y - x) / 2.0));
    while (zeta::hurwitz(alpha, y + 1.0) >= target) y += 1.0;
    while (y > x && zeta::hurwitz(alpha, y) < target) y -= 1.0;
    counts[static_cast<std::uint64_t>(y)] += 1;
  }
  return SampleHistogram::from_counts(counts);
}

}  // namespace powerlaw_detail

// Maximum-likelihood exponent of the tail x >= xmin and its KS distance.
inline AlphaFit fit_alpha(const SampleHistogram& h, std::uint64_t xmin, std::size_t min_tail = 10) {
  const powerlaw_detail::Prepared p(h);
  const auto it = std::lower_bound(h.values().begin(), h.values().end(), xmin);
  const auto j = static_cast<std::size_t>(it - h.values().begin());
  if (j == h.distinct() || p.suffix_count[j] < min_tail)
    throw InsufficientSamplesError("powerlaw_fit", "fit_alpha",
                                   "fewer than " + std::to_string(min_tail) + " samples at or above xmin");
  // The tail start must be a sample value for the KS bookkeeping; an xmin
  // between sample values has the same tail as the next sample value, but a
  // different normalization, so reject it.
  if (h.value(j) != xmin)
    throw ArgumentError("powerlaw_fit", "fit_alpha", "xmin must be one of the sample values");
  if (j + 1 == h.distinct())
    throw UnboundedFitError("powerlaw_fit", "fit_alpha", "all tail samples equal xmin; exponent diverges");
  AlphaFit r;
  r.alpha = p.fit_alpha(j);
  r.ks_statistic = *p.ks(j, r.alpha, std::numeric_limits<double>::infinity());
  r.tail_size = p.suffix_count[j];
  return r;
}

// Continuous-approximation estimate 1 + n / sum ln(x / (xmin - 1/2)), kept as
// a cross-check of the exact estimator.
inline double approximate_alpha(const SampleHistogram& h, std::uint64_t xmin) {
  double n = 0.0, s = 0.0;
  for (std::size_t i = 0; i < h.distinct(); ++i) {
    if (h.value(i) < xmin) continue;
    n += static_cast<double>(h.count(i));
    s += static_cast<double>(h.count(i)) *
         std::log(static_cast<double>(h.value(i)) / (static_cast<double>(xmin) - 0.5));
  }
  return 1.0 + n / s;
}

inline PowerLawFit fit_tail(const SampleHistogram& h, const TailFitOptions& options = {}) {
  using namespace powerlaw_detail;
  if (h.total() < 50)
    throw InsufficientSamplesError("powerlaw_fit", "fit_tail", "at least 50 samples are required");
  const Prepared prepared(h);
  PowerLawFit fit;
  fit.n = h.total();
  fit.seed = options.seed;
  fit.bootstrap_count = options.bootstrap_count;
  fit.low_bootstrap_warning = options.bootstrap_count < 100;

  std::size_t best_index;
  if (options.fixed_xmin) {
    const auto a = fit_alpha(h, *options.fixed_xmin, options.min_tail);
    best_index = static_cast<std::size_t>(
        std::lower_bound(h.values().begin(), h.values().end(), *options.fixed_xmin) - h.values().begin());
    fit.alpha = a.alpha;
    fit.ks_statistic = a.ks_statistic;
  } else {
    const double slack = 1.0 + options.near_optimal_tolerance;
    const auto r = scan(prepared, options.min_tail, slack, true);
    if (!r.found)
      throw InsufficientSamplesError("powerlaw_fit", "fit_tail", "no admissible tail start in the sample");
    best_index = r.best;
    fit.alpha = r.alpha;
    fit.ks_statistic = r.ks;
    // Local minima of the KS curve within tolerance of the optimum;
    // abandoned points count as above the bound.
    const auto ks_or_inf = [&](std::size_t i) {
      return r.points[i].ks.value_or(std::numeric_limits<double>::infinity());
    };
    for (std::size_t i = 0; i < r.points.size(); ++i) {
      const auto& pt = r.points[i];
      if (!pt.ks || pt.index == r.best || *pt.ks > r.ks * slack) continue;
      const bool left_ok = i == 0 || ks_or_inf(i - 1) > *pt.ks;
      const bool right_ok = i + 1 == r.points.size() || ks_or_inf(i + 1) > *pt.ks;
      if (left_ok && right_ok)
        fit.near_optimal.push_back({h.value(pt.index), pt.alpha, *pt.ks, prepared.suffix_count[pt.index]});
    }
  }
  fit.xmin = h.value(best_index);
  fit.tail_size = prepared.suffix_count[best_index];
  fit.tail_share = static_cast<double>(fit.tail_size) / static_cast<double>(h.total());

  // Semiparametric bootstrap; replicate r draws from its own substream
  // seeded by (seed, r), so the p-value does not depend on scheduling.
  std::vector<char> exceeds(options.bootstrap_count, 0);
  parallel_for(options.bootstrap_count, options.threads, [&](std::size_t rep) {
    std::seed_seq seq{options.seed, static_cast<std::uint64_t>(rep)};
    std::mt19937_64 rng(seq);
    const auto synth = synthetic_dataset(h, best_index, fit.alpha, rng);
    const Prepared sp(synth);
    double ks;
    if (options.fixed_xmin) {
      const auto it = std::lower_bound(synth.values().begin(), synth.values().end(), fit.xmin);
      const auto j = static_cast<std::size_t>(it - synth.values().begin());
      try {
        if (j + 1 >= synth.distinct() || sp.suffix_count[j] < options.min_tail) throw UnboundedFitError("", "", "");
        ks = *sp.ks(j, sp.fit_alpha(j), std::numeric_limits<double>::infinity());
      } catch (const UnboundedFitError&) {
        ks = std::numeric_limits<double>::infinity();
      }
    } else {
      const auto r = scan(sp, options.min_tail, 1.0, false);
      ks = r.found ? r.ks : std::numeric_limits<double>::infinity();
    }
    exceeds[rep] = ks >= fit.ks_statistic ? 1 : 0;
  });
  std::size_t hits = 0;
  for (const char e : exceeds) hits += static_cast<std::size_t>(e);
  fit.p_value = options.bootstrap_count == 0
                    ? 0.0
                    : static_cast<double>(hits) / static_cast<double>(options.bootstrap_count);
  fit.plausible = options.bootstrap_count > 0 && fit.p_value >= 0.1;
  return fit;
}

// Probability mass of the tail model x^(-alpha) / zeta(alpha, xmin).
inline double power_law_pmf(double alpha, std::uint64_t xmin, std::uint64_t x) {
  if (x < xmin) return 0.0;
  return std::pow(static_cast<double>(x), -alpha) / zeta::hurwitz(alpha, static_cast<double>(xmin));
}

}  // namespace collabnet
