#pragma once
// Brute-force references. Deliberately independent of the enumeration and
// counting code in spectra: values come straight from the model formulas.

#include <cstdint>
#include <vector>

#include "tractlab/complexity.hpp"
#include "tractlab/spectra.hpp"

namespace tractlab::oracle {

struct BruteBox {
  int radius = 1;  // |h_j| <= radius (Korobov families) or 1 <= n_j <= radius (tensor/explicit)
  int d = 1;
  bool completeness_certificate = false;
  double outside_bound = 0.0;  // every omitted eigenvalue is <= this
};

struct BruteEigen {
  double lambda = 0.0;
  std::vector<std::int64_t> witness;
};

struct BruteResult {
  BruteBox box;
  std::vector<BruteEigen> values;  // sorted, non-increasing, zigzag-lex ties
};

struct CertificateUnavailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

BruteResult brute_eigenvalues(const SpectrumModel& model, int d, int radius,
                              std::uint64_t budget = 20'000'000);

// Refuses with CertificateUnavailable when the box cannot decide the threshold.
std::uint64_t brute_n(const SpectrumModel& model, int d, double eps, ErrorCriterion criterion, int radius,
                      std::uint64_t budget = 20'000'000);

// #{h in Z^d : sum_j a_j |h_j|^{b_j} < ell + 1}
std::uint64_t brute_count_lattice(const std::vector<double>& a, const std::vector<double>& b, double ell, int d,
                                  std::uint64_t budget = 50'000'000);

}  // namespace tractlab::oracle
