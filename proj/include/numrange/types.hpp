// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace numrange {

using cx = std::complex<double>;

// Error taxonomy. The CLI maps each class onto a distinct exit code.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite or otherwise malformed values.
struct invalid_input : error {
  using error::error;
};

// A documented precondition was violated by the caller.
struct contract_violation : error {
  using error::error;
};

// Size constraints (n > d, mismatched dimensions, ...).
struct dimension_error : error {
  using error::error;
};

// Rank-deficient input; carries the offending 0-based index.
struct degenerate_input : error {
  degenerate_input(const std::string& msg, int index)
      : error(msg), index(index) {}
  int index;
};

// A point cloud is too sparse to answer the query; caller must densify.
struct insufficient_sampling : error {
  using error::error;
};

// <u,v> = sum_i u_i * conj(v_i), linear in the first argument.
inline cx inner(const std::vector<cx>& u, const std::vector<cx>& v) {
  cx s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * std::conj(v[i]);
  return s;
}

// Real pairing Re<u,v>; the Euclidean dot product of C^n read as R^{2n}.
inline double re_inner(const std::vector<cx>& u, const std::vector<cx>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    s += u[i].real() * v[i].real() + u[i].imag() * v[i].imag();
  return s;
}

inline double norm(const std::vector<cx>& u) {
  double s = 0.0;
  for (const cx& z : u) s += std::norm(z);
  return std::sqrt(s);
}

inline double distance(const std::vector<cx>& u, const std::vector<cx>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::norm(u[i] - v[i]);
  return std::sqrt(s);
}

inline void scale(std::vector<cx>& u, cx a) {
  for (cx& z : u) z *= a;
}

// u += a*v
inline void axpy(std::vector<cx>& u, cx a, const std::vector<cx>& v) {
  for (std::size_t i = 0; i < u.size(); ++i) u[i] += a * v[i];
}

inline bool all_finite(const std::vector<cx>& u) {
  for (const cx& z : u)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace numrange
