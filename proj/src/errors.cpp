#include "qpcnoise/errors.hpp"

#include <cstdio>

namespace qpcnoise {

namespace {
std::string degenerate_message(double second, double smallest, double largest) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "degenerate steady state: two smallest singular values %.6e and %.6e "
                "(largest %.6e, threshold 1e-10 relative)",
                second, smallest, largest);
  return buf;
}
}  // namespace

DegenerateSteadyState::DegenerateSteadyState(double second_smallest, double smallest, double largest)
    : NumericalError(degenerate_message(second_smallest, smallest, largest)),
      second_smallest_(second_smallest),
      smallest_(smallest),
      largest_(largest) {}

}  // namespace qpcnoise
