// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>

#include "numrange/frames.hpp"
#include "numrange/numerics.hpp"
#include "numrange/rng.hpp"

namespace numrange {

// tau(T,e) = (<Te_1,e_1>, ..., <Te_n,e_n>)
inline std::vector<cx> tau(const ComplexMatrix& T, const Frame& f) {
  if (f.d != T.dim()) throw dimension_error("tau: frame/matrix mismatch");
  std::vector<cx> v(f.n);
  for (int j = 0; j < f.n; ++j) {
    const auto ej = f.col(j);
    v[j] = inner(T.apply(ej), ej);
  }
  return v;
}

// A range point together with the orthonormal system that realizes it.
struct RangePoint {
  std::vector<cx> value;
  Frame witness;
};

// Identifies the operator a cloud was generated from.
struct MatrixFingerprint {
  int d = 0;
  std::uint64_t hash = 0;

  bool operator==(const MatrixFingerprint&) const = default;
};

inline MatrixFingerprint fingerprint(const ComplexMatrix& T) {
  return MatrixFingerprint{T.dim(), T.content_hash()};
}

struct CloudMeta {
  MatrixFingerprint matrix;
  std::string sampler;
  std::uint64_t seed = 0;
  int count = 0;
};

struct PointCloud {
  int n = 0;
  std::vector<RangePoint> points;
  CloudMeta meta;
};

// |value_j - <T e_j, e_j>| <= tol * ||T|| for every component.
inline bool point_consistent(const ComplexMatrix& T, const RangePoint& p,
                             double tol = 1e-10) {
  const auto v = tau(T, p.witness);
  const double scale = std::max(T.frobenius_norm(), 1e-300);
  for (std::size_t j = 0; j < v.size(); ++j)
    if (std::abs(v[j] - p.value[j]) > tol * scale) return false;
  return true;
}

// Monte-Carlo cloud: count independent Haar frames, sample i drawn with
// sub-seed mix_seed(seed, i).
inline PointCloud sample_cloud(const ComplexMatrix& T, int n, int count,
                               std::uint64_t seed) {
  if (n < 1 || n > T.dim())
    throw dimension_error(
        "sample_cloud: need 1 <= n <= d (the range is empty when dim < n)");
  if (count < 1) throw invalid_input("sample_cloud: count must be >= 1");
  PointCloud c;
  c.n = n;
  c.meta = CloudMeta{fingerprint(T), "haar", seed, count};
  c.points.reserve(count);
  for (int i = 0; i < count; ++i) {
    Frame f = haar_frame(T.dim(), n, mix_seed(seed, static_cast<std::uint64_t>(i)));
    std::vector<cx> v = tau(T, f);
    c.points.push_back(RangePoint{std::move(v), std::move(f)});
  }
  return c;
}

// Closed-form 1-d support: sup over unit e of Re(e^{-i theta} <Te,e>)
// equals the top eigenvalue of hermitian_part(T, e^{i theta}).
struct Support1D {
  double value = 0.0;
  std::vector<cx> maximizer;
};

inline Support1D support_exact_1d(const ComplexMatrix& T, double theta) {
  const cx w(std::cos(theta), std::sin(theta));
  const auto sys = hermitian_eigensystem(hermitian_part(T, w));
  Support1D s;
  s.value = sys.values.front();
  s.maximizer.resize(T.dim());
  for (int i = 0; i < T.dim(); ++i) s.maximizer[i] = sys.vectors.at(i, 0);
  return s;
}

struct SupportResult {
  std::vector<cx> direction;
  double value = 0.0;
  Frame maximizer;
  int restarts_used = 0;
  bool converged = false;
};

struct AscentOptions {
  int max_iters = 2000;
  double grad_tol_rel = 1e-8;    // scaled by ||T||
  double armijo_slope = 1e-4;
  double armijo_factor = 0.5;
  double min_step = 1e-14;
};

struct AscentResult {
  double value = 0.0;
  Frame frame;
  double grad_norm = 0.0;
  int iters = 0;
  bool converged = false;
};

namespace detail {

// objective: sum_j Re(conj(w_j) <T e_j, e_j>)
inline double support_objective(const ComplexMatrix& T, const Frame& f,
                                const std::vector<cx>& w) {
  double s = 0.0;
  for (int j = 0; j < f.n; ++j) {
    const auto ej = f.col(j);
    s += (std::conj(w[j]) * inner(T.apply(ej), ej)).real();
  }
  return s;
}

// Euclidean gradient column j: 2 H_j e_j with H_j = hermitian_part(T, w_j),
// i.e. (conj(w_j) T + w_j T^*) e_j.
inline Frame euclidean_gradient(const ComplexMatrix& T,
                                const ComplexMatrix& Tadj, const Frame& f,
                                const std::vector<cx>& w) {
  Frame g = f;
  for (int j = 0; j < f.n; ++j) {
    const auto ej = f.col(j);
    const auto te = T.apply(ej);
    const auto tae = Tadj.apply(ej);
    for (int i = 0; i < f.d; ++i)
      g.at(i, j) = std::conj(w[j]) * te[i] + w[j] * tae[i];
  }
  return g;
}

// tangent projection G - F herm(F^*G), herm(A) = (A + A^*)/2
inline Frame tangent_project(const Frame& f, const Frame& g) {
  const int n = f.n, d = f.d;
  std::vector<cx> ftg(static_cast<std::size_t>(n) * n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      cx s = 0.0;
      for (int i = 0; i < d; ++i) s += std::conj(f.at(i, a)) * g.at(i, b);
      ftg[static_cast<std::size_t>(a) * n + b] = s;
    }
  Frame t = g;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      const cx herm =
          0.5 * (ftg[static_cast<std::size_t>(a) * n + b] +
                 std::conj(ftg[static_cast<std::size_t>(b) * n + a]));
      for (int i = 0; i < d; ++i) t.at(i, b) -= f.at(i, a) * herm;
    }
  return t;
}

inline double frame_norm(const Frame& f) {
  double s = 0.0;
  for (const cx& z : f.cols) s += std::norm(z);
  return std::sqrt(s);
}

inline Frame retract(const Frame& f, const Frame& dir, double step) {
  std::vector<std::vector<cx>> cols(f.n, std::vector<cx>(f.d));
  for (int j = 0; j < f.n; ++j)
    for (int i = 0; i < f.d; ++i)
      cols[j][i] = f.at(i, j) + step * dir.at(i, j);
  const auto q = gram_schmidt(cols);
  Frame out = f;
  for (int j = 0; j < f.n; ++j) out.set_col(j, q[j]);
  return out;
}

}  // namespace detail

// Riemannian gradient ascent with Armijo backtracking and Gram-Schmidt
// retraction, warm-started from f0.
inline AscentResult ascend(const ComplexMatrix& T, const std::vector<cx>& w,
                           Frame f0, const AscentOptions& opts = {}) {
  const ComplexMatrix Tadj = T.adjoint();
  const double grad_tol =
      opts.grad_tol_rel * std::max(T.frobenius_norm(), 1e-300);

  AscentResult res;
  res.frame = std::move(f0);
  res.value = detail::support_objective(T, res.frame, w);
  for (int it = 0; it < opts.max_iters; ++it) {
    const Frame g = detail::euclidean_gradient(T, Tadj, res.frame, w);
    const Frame gt = detail::tangent_project(res.frame, g);
    res.grad_norm = detail::frame_norm(gt);
    res.iters = it;
    if (res.grad_norm <= grad_tol) {
      res.converged = true;
      return res;
    }
    const double slope = opts.armijo_slope * res.grad_norm * res.grad_norm;
    double step = 1.0;
    bool accepted = false;
    while (step >= opts.min_step) {
      const Frame cand = detail::retract(res.frame, gt, step);
      const double val = detail::support_objective(T, cand, w);
      if (val >= res.value + step * slope) {
        res.frame = cand;
        res.value = val;
        accepted = true;
        break;
      }
      step *= opts.armijo_factor;
    }
    if (!accepted) {
      // no ascent step exists at this resolution; report the gradient as is
      res.converged = res.grad_norm <= grad_tol;
      return res;
    }
  }
  res.converged = res.grad_norm <=
                  opts.grad_tol_rel * std::max(T.frobenius_norm(), 1e-300);
  return res;
}

// Multi-restart support estimation for direction w (unit vector in C^n).
// The value is attained by the returned maximizer, hence a certified lower
// bound of the true support. Among equal values the lowest restart wins.
inline SupportResult support_stiefel(const ComplexMatrix& T, int n,
                                     const std::vector<cx>& w, int restarts,
                                     std::uint64_t seed,
                                     const AscentOptions& opts = {}) {
  if (n < 1 || n > T.dim())
    throw dimension_error("support_stiefel: need 1 <= n <= d");
  if (static_cast<int>(w.size()) != n)
    throw dimension_error("support_stiefel: direction size mismatch");
  if (std::abs(norm(w) - 1.0) > 1e-10)
    throw contract_violation("support_stiefel: direction must be unit");
  if (restarts < 1) throw invalid_input("support_stiefel: restarts >= 1");

  SupportResult best;
  best.direction = w;
  best.restarts_used = restarts;
  bool have = false;
  for (int r = 0; r < restarts; ++r) {
    Frame f0 = haar_frame(T.dim(), n, mix_seed(seed, 0x5375505250ull + r));
    AscentResult a = ascend(T, w, std::move(f0), opts);
    if (!have || a.value > best.value + 1e-12) {
      best.value = a.value;
      best.maximizer = a.frame;
      best.converged = a.converged;
      have = true;
    }
  }
  return best;
}

// Compression of T to the column span: entries t_{jk} = <T e_k, e_j>,
// i.e. the n x n matrix F^* T F. Its diagonal is tau(T, F).
inline ComplexMatrix compress(const ComplexMatrix& T, const Frame& f) {
  if (f.d != T.dim()) throw dimension_error("compress: frame/matrix mismatch");
  ComplexMatrix c(f.n);
  for (int k = 0; k < f.n; ++k) {
    const auto tek = T.apply(f.col(k));
    for (int j = 0; j < f.n; ++j) c.at(j, k) = inner(tek, f.col(j));
  }
  return c;
}

// pi_k: drop trailing coordinates and witness columns.
inline PointCloud project_cloud(const PointCloud& c, int k) {
  if (k < 1 || k > c.n) throw dimension_error("project_cloud: need 1 <= k <= n");
  PointCloud out;
  out.n = k;
  out.meta = c.meta;
  out.points.reserve(c.points.size());
  for (const RangePoint& p : c.points) {
    RangePoint q;
    q.value.assign(p.value.begin(), p.value.begin() + k);
    q.witness.d = p.witness.d;
    q.witness.n = k;
    q.witness.cols.assign(p.witness.cols.begin(),
                          p.witness.cols.begin() +
                              static_cast<std::size_t>(k) * p.witness.d);
    out.points.push_back(std::move(q));
  }
  return out;
}

// Relabeling by a permutation pi of {0..n-1}: slot pi[j] takes component j.
inline RangePoint permute_point(const RangePoint& p,
                                const std::vector<int>& pi) {
  const int n = static_cast<int>(p.value.size());
  if (static_cast<int>(pi.size()) != n)
    throw invalid_input("permute_point: permutation size mismatch");
  std::vector<bool> seen(n, false);
  for (int v : pi) {
    if (v < 0 || v >= n || seen[v])
      throw invalid_input("permute_point: not a permutation");
    seen[v] = true;
  }
  RangePoint out;
  out.value.resize(n);
  out.witness.d = p.witness.d;
  out.witness.n = n;
  out.witness.cols.resize(p.witness.cols.size());
  for (int j = 0; j < n; ++j) {
    out.value[pi[j]] = p.value[j];
    out.witness.set_col(pi[j], p.witness.col(j));
  }
  return out;
}

// Empirical support of a sampled cloud: max over points of Re<value, w>.
inline double cloud_support(const PointCloud& c, const std::vector<cx>& w) {
  if (c.points.empty()) throw invalid_input("cloud_support: empty cloud");
  double best = -1e308;
  for (const RangePoint& p : c.points)
    best = std::max(best, re_inner(p.value, w));
  return best;
}

}  // namespace numrange
