// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>

#include "numrange/numerics.hpp"
#include "numrange/rng.hpp"
#include "numrange/types.hpp"

namespace numrange {

// An orthonormal n-frame in C^d: a point on the complex Stiefel manifold.
// Columns stored contiguously (column-major).
struct Frame {
  int d = 0;
  int n = 0;
  std::vector<cx> cols;  // d*n, column j at [j*d, (j+1)*d)

  cx& at(int i, int j) { return cols[static_cast<std::size_t>(j) * d + i]; }
  const cx& at(int i, int j) const {
    return cols[static_cast<std::size_t>(j) * d + i];
  }

  std::vector<cx> col(int j) const {
    const auto* base = &cols[static_cast<std::size_t>(j) * d];
    return std::vector<cx>(base, base + d);
  }

  void set_col(int j, const std::vector<cx>& v) {
    for (int i = 0; i < d; ++i) at(i, j) = v[i];
  }
};

// ||F^*F - I|| (Frobenius)
inline double gram_residual(const Frame& f) {
  double s = 0.0;
  for (int a = 0; a < f.n; ++a)
    for (int b = 0; b < f.n; ++b) {
      cx g = 0.0;
      for (int i = 0; i < f.d; ++i) g += std::conj(f.at(i, a)) * f.at(i, b);
      if (a == b) g -= 1.0;
      s += std::norm(g);
    }
  return std::sqrt(s);
}

inline void validate_frame(const Frame& f, double tol = 1e-10) {
  if (f.n < 1 || f.n > f.d)
    throw dimension_error("frame size must satisfy 1 <= n <= d");
  if (f.cols.size() != static_cast<std::size_t>(f.d) * f.n)
    throw dimension_error("frame storage does not match d*n");
  if (!all_finite(f.cols)) throw invalid_input("frame has non-finite entries");
  if (gram_residual(f) > tol)
    throw contract_violation("frame columns are not orthonormal");
}

// The two explicit perturbation path families used by the corner analysis:
// mixing a column with an exterior unit vector, and rotating two columns
// inside their own plane with a fixed phase.
struct PathProbe {
  enum class Kind { exterior_mix, planar_rotation };
  Kind kind = Kind::exterior_mix;
  int j = 0;           // target column
  int k = 0;           // partner column (planar_rotation)
  std::vector<cx> u;   // exterior unit vector (exterior_mix)
  double alpha = 0.0;  // phase in [0, 2pi) (planar_rotation)
};

inline void validate_probe(const Frame& f, const PathProbe& p) {
  if (p.j < 0 || p.j >= f.n)
    throw contract_violation("probe target index out of range");
  if (p.kind == PathProbe::Kind::exterior_mix) {
    if (static_cast<int>(p.u.size()) != f.d)
      throw dimension_error("probe vector dimension mismatch");
    if (std::abs(norm(p.u) - 1.0) > 1e-10)
      throw contract_violation("probe exterior vector is not unit");
    for (int l = 0; l < f.n; ++l)
      if (std::abs(inner(p.u, f.col(l))) > 1e-10)
        throw contract_violation(
            "probe exterior vector is not orthogonal to the frame span");
  } else {
    if (f.n < 2) throw dimension_error("planar rotation needs n >= 2");
    if (p.k < 0 || p.k >= f.n || p.k == p.j)
      throw contract_violation("planar rotation needs distinct columns");
  }
}

// Haar-uniform n-frame: i.i.d. standard complex Gaussian d x n matrix,
// drawn column-major from a splitmix64 stream, then Gram-Schmidt.
// Deterministic per (d, n, seed); a degenerate draw (probability ~0)
// falls through to fresh entries from the same stream.
inline Frame haar_frame(int d, int n, std::uint64_t seed) {
  if (n < 1 || n > d)
    throw dimension_error(
        "haar_frame: need 1 <= n <= d (the range is empty when dim < n)");
  SplitMix64 rng(seed);
  for (;;) {
    std::vector<std::vector<cx>> raw(n, std::vector<cx>(d));
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < d; ++i) raw[j][i] = rng.next_complex_gaussian();
    try {
      const auto q = gram_schmidt(raw);
      Frame f;
      f.d = d;
      f.n = n;
      f.cols.resize(static_cast<std::size_t>(d) * n);
      for (int j = 0; j < n; ++j) f.set_col(j, q[j]);
      return f;
    } catch (const degenerate_input&) {
      continue;
    }
  }
}

// Draws a unit vector orthogonal to the frame span: Gaussian draw, span
// projected out twice, redrawn while the remainder is below 1e-8.
inline PathProbe make_exterior_probe(const Frame& f, int j, SplitMix64& rng) {
  if (f.n >= f.d)
    throw dimension_error("exterior probe: the span has no orthocomplement");
  for (;;) {
    std::vector<cx> u(f.d);
    for (int i = 0; i < f.d; ++i) u[i] = rng.next_complex_gaussian();
    for (int pass = 0; pass < 2; ++pass)
      for (int l = 0; l < f.n; ++l) {
        const auto el = f.col(l);
        axpy(u, -inner(u, el), el);
      }
    const double r = norm(u);
    if (r < 1e-8) continue;
    scale(u, cx(1.0 / r, 0.0));
    PathProbe p;
    p.kind = PathProbe::Kind::exterior_mix;
    p.j = j;
    p.u = std::move(u);
    return p;
  }
}

// eps_j(t) = t*u + (1-t^2)^{1/2} e_j, other columns unchanged.
inline Frame exterior_mix_point(const Frame& f, const PathProbe& probe,
                                double t) {
  if (probe.kind != PathProbe::Kind::exterior_mix)
    throw contract_violation("exterior_mix_point: wrong probe kind");
  validate_probe(f, probe);
  if (std::abs(t) > 0.5)
    throw contract_violation("path parameter must satisfy |t| <= 1/2");
  Frame out = f;
  const double c = std::sqrt(1.0 - t * t);
  for (int i = 0; i < f.d; ++i)
    out.at(i, probe.j) = t * probe.u[i] + c * f.at(i, probe.j);
  return out;
}

// Column j <- (1-t^2)^{1/2} e_j + e^{i alpha} t e_k,
// column k <- (1-t^2)^{1/2} e_k - e^{-i alpha} t e_j.
inline Frame planar_rotation_point(const Frame& f, const PathProbe& probe,
                                   double t) {
  if (probe.kind != PathProbe::Kind::planar_rotation)
    throw contract_violation("planar_rotation_point: wrong probe kind");
  validate_probe(f, probe);
  if (std::abs(t) > 0.5)
    throw contract_violation("path parameter must satisfy |t| <= 1/2");
  Frame out = f;
  const double c = std::sqrt(1.0 - t * t);
  const cx ph(std::cos(probe.alpha), std::sin(probe.alpha));
  for (int i = 0; i < f.d; ++i) {
    const cx ej = f.at(i, probe.j), ek = f.at(i, probe.k);
    out.at(i, probe.j) = c * ej + ph * t * ek;
    out.at(i, probe.k) = c * ek - std::conj(ph) * t * ej;
  }
  return out;
}

// ||x - P_L x|| where P_L projects onto the column span.
inline double distance_to_span(const std::vector<cx>& x, const Frame& f) {
  if (static_cast<int>(x.size()) != f.d)
    throw dimension_error("distance_to_span: dimension mismatch");
  std::vector<cx> r = x;
  for (int l = 0; l < f.n; ++l) {
    const auto el = f.col(l);
    axpy(r, -inner(x, el), el);
  }
  return norm(r);
}

}  // namespace numrange
