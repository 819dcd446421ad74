// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstring>
#include <numeric>
#include <utility>

#include "numrange/types.hpp"

namespace numrange {

// Dense d x d complex matrix, row-major.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  explicit ComplexMatrix(int d) : d_(d), a_(static_cast<std::size_t>(d) * d) {
    if (d < 1) throw invalid_input("matrix dimension must be >= 1");
  }

  static ComplexMatrix identity(int d) {
    ComplexMatrix m(d);
    for (int i = 0; i < d; ++i) m.at(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(const std::vector<cx>& diag) {
    ComplexMatrix m(static_cast<int>(diag.size()));
    for (int i = 0; i < m.d_; ++i) m.at(i, i) = diag[i];
    return m;
  }

  // Validating factory for externally supplied entries (row-major, d*d).
  static ComplexMatrix from_entries(int d, std::vector<cx> entries) {
    if (d < 1) throw invalid_input("matrix dimension must be >= 1");
    if (entries.size() != static_cast<std::size_t>(d) * d)
      throw dimension_error("entry count does not match dimension");
    if (!all_finite(entries))
      throw invalid_input("matrix has non-finite entries");
    ComplexMatrix m(d);
    m.a_ = std::move(entries);
    return m;
  }

  int dim() const { return d_; }

  cx& at(int i, int j) { return a_[static_cast<std::size_t>(i) * d_ + j]; }
  const cx& at(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * d_ + j];
  }

  const std::vector<cx>& entries() const { return a_; }

  std::vector<cx> apply(const std::vector<cx>& x) const {
    if (static_cast<int>(x.size()) != d_)
      throw dimension_error("matrix/vector dimension mismatch");
    std::vector<cx> y(d_, 0.0);
    for (int i = 0; i < d_; ++i) {
      cx s = 0.0;
      const cx* row = &a_[static_cast<std::size_t>(i) * d_];
      for (int j = 0; j < d_; ++j) s += row[j] * x[j];
      y[i] = s;
    }
    return y;
  }

  ComplexMatrix adjoint() const {
    ComplexMatrix m(d_);
    for (int i = 0; i < d_; ++i)
      for (int j = 0; j < d_; ++j) m.at(j, i) = std::conj(at(i, j));
    return m;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const cx& z : a_) s += std::norm(z);
    return std::sqrt(s);
  }

  bool finite() const { return all_finite(a_); }

  // FNV-1a over the raw bytes of the entries (row-major, re then im).
  // Together with the dimension this identifies the operator a cloud or
  // certificate was computed from.
  std::uint64_t content_hash() const {
    std::uint64_t h = 0xCBF29CE484222325ull;
    auto feed = [&h](double x) {
      std::uint64_t bits;
      std::memcpy(&bits, &x, sizeof bits);
      for (int b = 0; b < 8; ++b) {
        h ^= (bits >> (8 * b)) & 0xFFull;
        h *= 0x100000001B3ull;
      }
    };
    for (const cx& z : a_) {
      feed(z.real());
      feed(z.imag());
    }
    return h;
  }

  friend ComplexMatrix operator+(const ComplexMatrix& a,
                                 const ComplexMatrix& b) {
    if (a.d_ != b.d_) throw dimension_error("matrix dimension mismatch");
    ComplexMatrix c(a.d_);
    for (std::size_t i = 0; i < a.a_.size(); ++i) c.a_[i] = a.a_[i] + b.a_[i];
    return c;
  }

  friend ComplexMatrix operator-(const ComplexMatrix& a,
                                 const ComplexMatrix& b) {
    if (a.d_ != b.d_) throw dimension_error("matrix dimension mismatch");
    ComplexMatrix c(a.d_);
    for (std::size_t i = 0; i < a.a_.size(); ++i) c.a_[i] = a.a_[i] - b.a_[i];
    return c;
  }

  friend ComplexMatrix operator*(cx s, const ComplexMatrix& a) {
    ComplexMatrix c(a.d_);
    for (std::size_t i = 0; i < a.a_.size(); ++i) c.a_[i] = s * a.a_[i];
    return c;
  }

  friend ComplexMatrix operator*(const ComplexMatrix& a,
                                 const ComplexMatrix& b) {
    if (a.d_ != b.d_) throw dimension_error("matrix dimension mismatch");
    const int d = a.d_;
    ComplexMatrix c(d);
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        const cx aik = a.at(i, k);
        if (aik == cx(0.0)) continue;
        for (int j = 0; j < d; ++j) c.at(i, j) += aik * b.at(k, j);
      }
    return c;
  }

 private:
  int d_ = 0;
  std::vector<cx> a_;
};

struct HermitianEigenSystem {
  std::vector<double> values;  // sorted descending
  ComplexMatrix vectors;       // columns are orthonormal eigenvectors
};

// H = (conj(w)*T + w*T^*)/2, so that <Hx,x> = Re(conj(w) <Tx,x>).
inline ComplexMatrix hermitian_part(const ComplexMatrix& T, cx w) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
    throw invalid_input("hermitian_part: non-finite weight");
  if (!T.finite()) throw invalid_input("hermitian_part: non-finite matrix");
  const int d = T.dim();
  ComplexMatrix h(d);
  const cx wc = std::conj(w);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      h.at(i, j) = 0.5 * (wc * T.at(i, j) + w * std::conj(T.at(j, i)));
  return h;
}

namespace detail {

inline double off_diagonal_mass(const ComplexMatrix& h) {
  const int d = h.dim();
  double s = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) s += std::norm(h.at(i, j));
  return std::sqrt(s);
}

}  // namespace detail

// Cyclic Jacobi rotations for a Hermitian matrix. Sweeps until the
// off-diagonal Frobenius mass falls below 1e-14*||H|| or 60 sweeps.
inline HermitianEigenSystem hermitian_eigensystem(const ComplexMatrix& H) {
  const int d = H.dim();
  if (d < 1) throw invalid_input("empty matrix");
  const double scale = H.frobenius_norm();
  {
    const ComplexMatrix asym = H - H.adjoint();
    if (asym.frobenius_norm() > 1e-10 * std::max(scale, 1e-300) &&
        asym.frobenius_norm() > 0.0)
      throw contract_violation("hermitian_eigensystem: input is not Hermitian");
  }

  // work on the symmetrized copy; rounding asymmetry only
  ComplexMatrix a(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      a.at(i, j) = 0.5 * (H.at(i, j) + std::conj(H.at(j, i)));
  ComplexMatrix v = ComplexMatrix::identity(d);

  const double stop = 1e-14 * scale;
  for (int sweep = 0; sweep < 60 && d > 1; ++sweep) {
    if (detail::off_diagonal_mass(a) <= stop) break;
    for (int p = 0; p < d - 1; ++p) {
      for (int q = p + 1; q < d; ++q) {
        const cx h = a.at(p, q);
        const double habs = std::abs(h);
        if (habs <= 1e-300) {
          a.at(p, q) = 0.0;
          a.at(q, p) = 0.0;
          continue;
        }
        const double alpha = a.at(p, p).real();
        const double beta = a.at(q, q).real();
        const cx phase = h / habs;  // e^{i theta}
        const double tau = (beta - alpha) / (2.0 * habs);
        const double t =
            (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // unitary block [[c, s], [-conj(phase)*s, conj(phase)*c]] on (p,q)
        const cx upp = c, upq = s;
        const cx uqp = -std::conj(phase) * s, uqq = std::conj(phase) * c;

        for (int i = 0; i < d; ++i) {  // A <- A U
          const cx aip = a.at(i, p), aiq = a.at(i, q);
          a.at(i, p) = aip * upp + aiq * uqp;
          a.at(i, q) = aip * upq + aiq * uqq;
        }
        for (int j = 0; j < d; ++j) {  // A <- U^* A
          const cx apj = a.at(p, j), aqj = a.at(q, j);
          a.at(p, j) = std::conj(upp) * apj + std::conj(uqp) * aqj;
          a.at(q, j) = std::conj(upq) * apj + std::conj(uqq) * aqj;
        }
        a.at(p, q) = 0.0;
        a.at(q, p) = 0.0;
        for (int i = 0; i < d; ++i) {  // V <- V U
          const cx vip = v.at(i, p), viq = v.at(i, q);
          v.at(i, p) = vip * upp + viq * uqp;
          v.at(i, q) = vip * upq + viq * uqq;
        }
      }
    }
  }

  std::vector<int> order(d);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(d);
  for (int i = 0; i < d; ++i) diag[i] = a.at(i, i).real();
  std::stable_sort(order.begin(), order.end(),
                   [&diag](int i, int j) { return diag[i] > diag[j]; });

  HermitianEigenSystem sys;
  sys.values.resize(d);
  sys.vectors = ComplexMatrix(d);
  for (int k = 0; k < d; ++k) {
    sys.values[k] = diag[order[k]];
    for (int i = 0; i < d; ++i) sys.vectors.at(i, k) = v.at(i, order[k]);
  }
  return sys;
}

// Modified Gram-Schmidt with a re-orthogonalization pass. Keeps the span,
// normalizes input[0] first (deterministic orientation), and reports the
// index of the first dependent vector.
inline std::vector<std::vector<cx>> gram_schmidt(
    const std::vector<std::vector<cx>>& input) {
  std::vector<std::vector<cx>> q;
  q.reserve(input.size());
  for (std::size_t k = 0; k < input.size(); ++k) {
    std::vector<cx> vk = input[k];
    if (k > 0 && vk.size() != input[0].size())
      throw dimension_error("gram_schmidt: inconsistent vector lengths");
    const double n0 = norm(vk);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& qj : q) axpy(vk, -inner(vk, qj), qj);
    const double r = norm(vk);
    if (!(r > 1e-12 * std::max(n0, 1e-300)) || n0 == 0.0)
      throw degenerate_input(
          "gram_schmidt: vector " + std::to_string(k) +
              " is linearly dependent on its predecessors",
          static_cast<int>(k));
    scale(vk, cx(1.0 / r, 0.0));
    q.push_back(std::move(vk));
  }
  return q;
}

// Smallest singular value of T - lambda*I, via the Hermitian eigensystem
// of (T-lambda I)^*(T-lambda I). Squaring puts an ~sqrt(machine eps)*||T||
// floor on resolvable values; adequate at desk scale.
inline double min_singular_value(const ComplexMatrix& T, cx lambda) {
  const int d = T.dim();
  ComplexMatrix a = T - (lambda * ComplexMatrix::identity(d));
  const ComplexMatrix m = a.adjoint() * a;
  const HermitianEigenSystem sys = hermitian_eigensystem(m);
  const double low = sys.values.back();
  return std::sqrt(std::max(low, 0.0));
}

}  // namespace numrange
