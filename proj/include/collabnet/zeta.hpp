#pragma once

// Hurwitz zeta function zeta(s, a) = sum_{k>=0} (a + k)^(-s) for s > 1,
// a > 0, with first and second derivatives in s. Euler-Maclaurin summation:
// terms are summed directly until a + N >= kShift, the remainder is the
// integral, the half-term and Bernoulli corrections. The shift grows with s
// so that twelve correction terms suffice over the fitting range.

#include <algorithm>
#include <array>
#include <cmath>

namespace collabnet::zeta {

struct ZetaValue {
  double value = 0.0;
  double d1 = 0.0;  // d/ds
  double d2 = 0.0;  // d^2/ds^2
};

namespace detail {

inline constexpr double kShift = 10.0;

inline double shift_for(double s) { return std::max(kShift, s + 5.0); }

// B_{2j} / (2j)! for j = 1..12
inline constexpr std::array<double, 12> kBernoulliCoeff = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
    77683.0 / 14101100039391805440000.0,
    -236364091.0 / 1693824136731743669452800000.0,
};

// Tail sum_{k>=0} (y + k)^(-s) for y >= shift_for(s), given y^(-s).
inline double tail_value(double s, double y, double y_neg_s) {
  const double inv_y = 1.0 / y;
  const double inv_y2 = inv_y * inv_y;
  double sum = y * y_neg_s / (s - 1.0) + 0.5 * y_neg_s;
  double rising = s;               // s (s+1) ... (s+2j-2)
  double power = y_neg_s * inv_y;  // y^(-s-2j+1)
  for (std::size_t j = 0; j < kBernoulliCoeff.size(); ++j) {
    const double term = kBernoulliCoeff[j] * rising * power;
    sum += term;
    if (std::fabs(term) <= 1e-17 * std::fabs(sum)) break;
    const double base = s + 2.0 * static_cast<double>(j) + 1.0;
    rising *= base * (base + 1.0);
    power *= inv_y2;
  }
  return sum;
}

}  // namespace detail

inline double hurwitz(double s, double a) {
  double sum = 0.0;
  double y = a;
  const double shift = detail::shift_for(s);
  while (y < shift) {
    sum += std::pow(y, -s);
    y += 1.0;
  }
  return sum + detail::tail_value(s, y, std::exp(-s * std::log(y)));
}

// Same as hurwitz(s, a), skipping a logarithm when a is past the shift.
inline double hurwitz_large(double s, double a, double log_a) {
  if (a < detail::shift_for(s)) return hurwitz(s, a);
  return detail::tail_value(s, a, std::exp(-s * log_a));
}

inline ZetaValue hurwitz_with_derivatives(double s, double a) {
  ZetaValue z;
  double y = a;
  const double shift = detail::shift_for(s);
  while (y < shift) {
    const double L = std::log(y);
    const double t = std::exp(-s * L);
    z.value += t;
    z.d1 -= L * t;
    z.d2 += L * L * t;
    y += 1.0;
  }
  const double Ly = std::log(y);
  const double E0 = std::exp(-s * Ly);  // y^(-s)
  const double u = s - 1.0;
  // Integral term y^(1-s) / (s-1).
  const double I = y * E0 / u;
  const double g = Ly + 1.0 / u;
  z.value += I;
  z.d1 += -I * g;
  z.d2 += I * (g * g + 1.0 / (u * u));
  // Half term.
  z.value += 0.5 * E0;
  z.d1 += -0.5 * Ly * E0;
  z.d2 += 0.5 * Ly * Ly * E0;
  // Bernoulli corrections c_j P_j(s) y^(-s-2j+1), P_j = s (s+1) ... (s+2j-2).
  const double inv_y2 = 1.0 / (y * y);
  double P = s, P1 = 1.0, P2 = 0.0;
  double E = E0 / y;
  for (std::size_t j = 0; j < detail::kBernoulliCoeff.size(); ++j) {
    const double c = detail::kBernoulliCoeff[j];
    const double E1 = -Ly * E, E2 = Ly * Ly * E;
    const double term = c * P * E;
    z.value += term;
    z.d1 += c * (P1 * E + P * E1);
    z.d2 += c * (P2 * E + 2.0 * P1 * E1 + P * E2);
    if (std::fabs(term) <= 1e-17 * std::fabs(z.value)) break;
    for (const double q : {s + 2.0 * static_cast<double>(j) + 1.0, s + 2.0 * static_cast<double>(j) + 2.0}) {
      P2 = P2 * q + 2.0 * P1;
      P1 = P1 * q + P;
      P = P * q;
    }
    E *= inv_y2;
  }
  return z;
}

}  // namespace collabnet::zeta
