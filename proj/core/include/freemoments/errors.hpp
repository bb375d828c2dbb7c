#pragma once

#include <stdexcept>

namespace fm {

// Base class for every failure raised by the library, so callers that do not
// care about the flavor can catch a single type.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed argument values: non-finite numbers, size mismatches, orders out
// of range, unphysical moments where physical ones are required.
struct invalid_input : error {
  using error::error;
};

// The top moment y_n is zero: reference time and invariants are undefined and
// the caller must drop to the degenerate (quadratic) analysis.
struct degenerate_top_moment : error {
  using error::error;
};

// A family parameter lies outside the existence domain of the requested
// quantity (e.g. fourth momentum moments need c > 3/2).
struct domain_error : error {
  using error::error;
};

// The grid is too coarse for the state: the spectral tail carries more
// energy than the monitor tolerates.
struct resolution_error : error {
  using error::error;
};

// A moment integral has not converged (position tail still carries weight at
// the grid edge, or the adaptive quadrature failed to settle).
struct convergence_error : error {
  using error::error;
};

// A propagated packet reached the edge of the grid.
struct boundary_overflow : error {
  using error::error;
};

// The linear system fixing the truncation junction polynomial is singular.
struct singular_matching : error {
  using error::error;
};

}  // namespace fm
