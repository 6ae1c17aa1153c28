#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace tractlab {

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Enumeration or counting exceeded a configured budget.
struct ResourceLimit : std::runtime_error {
  ResourceLimit(const std::string& what, std::uint64_t completed)
      : std::runtime_error(what), completed_rank(completed) {}
  std::uint64_t completed_rank;
};

// An infinite series that does not converge. Carries the partial sum reached.
struct Divergence : std::runtime_error {
  Divergence(const std::string& what, double partial)
      : std::runtime_error(what), partial_sum(partial) {}
  double partial_sum;
};

// A decision whose certified bracket still straddles the threshold.
struct Inconclusive : std::runtime_error {
  Inconclusive(const std::string& what, std::uint64_t lo, std::uint64_t hi)
      : std::runtime_error(what), n_lo(lo), n_hi(hi) {}
  std::uint64_t n_lo;
  std::uint64_t n_hi;
};

}  // namespace tractlab
