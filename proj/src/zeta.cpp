#include <cmath>

#include "tractlab/spectra.hpp"

namespace tractlab {

namespace {
constexpr int kTerms = 1000;
// B_{2j} / (2j)! for j = 1..4
constexpr double kBernoulli[4] = {1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0};
}  // namespace

double hurwitz_zeta(double s, double q) {
  if (!(s > 1.0)) throw InvalidParameter("zeta: s must exceed 1");
  if (!(q > 0.0)) throw InvalidParameter("hurwitz_zeta: q must be positive");
  // explicit part summed smallest-first
  double head = 0.0;
  for (int k = kTerms - 1; k >= 0; --k) head += std::pow(q + k, -s);
  const double x = q + kTerms;
  double tail = std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
  double rising = s;  // s(s+1)...(s+2j-2)
  double xpow = std::pow(x, -s - 1.0);
  for (int j = 0; j < 4; ++j) {
    tail += kBernoulli[j] * rising * xpow;
    rising *= (s + 2 * j + 1) * (s + 2 * j + 2);
    xpow /= x * x;
  }
  return head + tail;
}

double zeta(double s) { return hurwitz_zeta(s, 1.0); }

}  // namespace tractlab
