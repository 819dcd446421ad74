// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <optional>
#include <utility>

#include "numrange/range.hpp"

namespace numrange {

// Candidate corner lambda with its separating direction and the evidence
// collected for it: achieved cone constant, first-order path derivatives,
// and per-component eigen residuals ||T e_j - lambda_j e_j||.
struct CornerCertificate {
  RangePoint point;
  std::vector<cx> direction;  // unit w
  double delta = 0.0;         // min over neighbors of Re<v-u,w>/|v-u|
  double epsilon = 0.0;
  int neighbor_count = 0;
  double probe_max_derivative = -1.0;  // < 0 until probes are evaluated
  std::vector<double> eigen_residuals; // empty until evaluated
};

struct ProbeReport {
  std::vector<std::pair<PathProbe, cx>> probes;
  double max_abs = 0.0;
  bool exterior_skipped = false;  // d == n, span has no orthocomplement
};

struct ConeResult {
  std::vector<cx> direction;
  double delta = 0.0;
  int neighbor_count = 0;
};

// 5x the median nearest-neighbour distance; the median is estimated from
// <=512 evenly strided points scanned against the whole cloud (the exact
// all-pairs median is quadratic in the cloud size). Never returns 0.
inline double default_epsilon(const PointCloud& c) {
  const int n = static_cast<int>(c.points.size());
  if (n < 2) return 1e-12;
  const int probes = std::min(n, 512);
  const int stride = n / probes;
  std::vector<double> nn;
  nn.reserve(probes);
  for (int s = 0; s < probes; ++s) {
    const int i = s * stride;
    double best = 1e308;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      best = std::min(best, distance(c.points[i].value, c.points[j].value));
    }
    nn.push_back(best);
  }
  std::nth_element(nn.begin(), nn.begin() + nn.size() / 2, nn.end());
  return std::max(5.0 * nn[nn.size() / 2], 1e-12);
}

// Direction search for the cone condition at u: initialize w as the
// normalized mean of the unit chords, then 100 projected subgradient
// steps (step 1/k) on delta(w) = min_v Re<v-u,w>/|v-u|. Keeps the best
// (w, delta) visited. delta <= 0 means no cone separates u.
inline ConeResult cone_test(const PointCloud& c, const std::vector<cx>& u,
                            double epsilon) {
  if (epsilon <= 0.0) throw invalid_input("cone_test: epsilon must be > 0");
  std::vector<std::vector<cx>> chords;
  for (const RangePoint& p : c.points) {
    const double dist = distance(p.value, u);
    if (dist > 0.0 && dist < epsilon) {
      std::vector<cx> ch = p.value;
      for (std::size_t i = 0; i < ch.size(); ++i)
        ch[i] = (ch[i] - u[i]) / dist;
      chords.push_back(std::move(ch));
    }
  }
  if (chords.empty())
    throw insufficient_sampling(
        "cone_test: no cloud points inside the epsilon neighborhood");

  const std::size_t m = u.size();
  auto delta_of = [&chords](const std::vector<cx>& w) {
    double worst = 1e308;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < chords.size(); ++i) {
      const double v = re_inner(chords[i], w);
      if (v < worst) {
        worst = v;
        arg = i;
      }
    }
    return std::pair<double, std::size_t>(worst, arg);
  };

  std::vector<cx> w(m, 0.0);
  for (const auto& ch : chords) axpy(w, 1.0, ch);
  double wn = norm(w);
  if (wn < 1e-14) {
    w = chords.front();
  } else {
    scale(w, cx(1.0 / wn, 0.0));
  }

  ConeResult best;
  best.neighbor_count = static_cast<int>(chords.size());
  {
    const auto [d0, a0] = delta_of(w);
    best.direction = w;
    best.delta = d0;
  }
  for (int k = 1; k <= 100; ++k) {
    const auto [dk, arg] = delta_of(w);
    axpy(w, cx(1.0 / k, 0.0), chords[arg]);
    wn = norm(w);
    if (wn < 1e-14) {
      w = chords[arg];
      wn = 1.0;
    } else {
      scale(w, cx(1.0 / wn, 0.0));
    }
    const auto [dn, argn] = delta_of(w);
    if (dn > best.delta) {
      best.delta = dn;
      best.direction = w;
    }
  }
  return best;
}

namespace detail {

// Shared convention for singleton clouds (e.g. T = c*I): the single value
// is vacuously a corner, delta = 1 with the first standard direction.
inline std::optional<ConeResult> singleton_cone(const PointCloud& c,
                                                const std::vector<cx>& u) {
  for (const RangePoint& p : c.points)
    if (distance(p.value, u) > 1e-8) return std::nullopt;
  ConeResult r;
  r.direction.assign(u.size(), 0.0);
  r.direction[0] = 1.0;
  r.delta = 1.0;
  r.neighbor_count = 0;
  return r;
}

inline ConeResult cone_or_singleton(const PointCloud& c,
                                    const std::vector<cx>& u, double epsilon) {
  try {
    return cone_test(c, u, epsilon);
  } catch (const insufficient_sampling&) {
    if (auto s = singleton_cone(c, u)) return *s;
    throw;
  }
}

// 64 deterministic probe directions: uniform angles for n = 1, fixed-seed
// unit vectors in C^n otherwise.
inline std::vector<std::vector<cx>> scan_directions(int n) {
  std::vector<std::vector<cx>> dirs;
  dirs.reserve(64);
  if (n == 1) {
    for (int k = 0; k < 64; ++k) {
      const double th = 2.0 * 3.14159265358979323846 * k / 64.0;
      dirs.push_back({cx(std::cos(th), std::sin(th))});
    }
  } else {
    SplitMix64 rng(0x434F524E45525344ull);
    for (int k = 0; k < 64; ++k) {
      std::vector<cx> w(n);
      for (int i = 0; i < n; ++i) w[i] = rng.next_complex_gaussian();
      const double wn = norm(w);
      for (cx& z : w) z /= wn;
      dirs.push_back(std::move(w));
    }
  }
  return dirs;
}

}  // namespace detail

// Boundary candidates are the argmax points of Re<., w> over 64 probe
// directions, deduplicated at distance 1e-8; each candidate gets a cone
// test and survives when delta >= delta_min. Probe derivatives and eigen
// residuals are left unevaluated (see certify_corner).
inline std::vector<CornerCertificate> corner_scan(const PointCloud& c,
                                                  double delta_min,
                                                  double epsilon) {
  if (!(delta_min > 0.0) || delta_min > 1.0)
    throw invalid_input("corner_scan: delta_min must lie in (0,1]");
  if (c.points.empty()) throw invalid_input("corner_scan: empty cloud");

  std::vector<std::size_t> candidates;
  for (const auto& w : detail::scan_directions(c.n)) {
    std::size_t arg = 0;
    double best = -1e308;
    for (std::size_t i = 0; i < c.points.size(); ++i) {
      const double v = re_inner(c.points[i].value, w);
      if (v > best) {
        best = v;
        arg = i;
      }
    }
    bool dup = false;
    for (std::size_t prev : candidates)
      if (distance(c.points[prev].value, c.points[arg].value) <= 1e-8) {
        dup = true;
        break;
      }
    if (!dup) candidates.push_back(arg);
  }

  std::vector<CornerCertificate> certs;
  for (std::size_t idx : candidates) {
    const RangePoint& p = c.points[idx];
    const ConeResult cone = detail::cone_or_singleton(c, p.value, epsilon);
    if (cone.delta >= delta_min) {
      CornerCertificate cert;
      cert.point = p;
      cert.direction = cone.direction;
      cert.delta = cone.delta;
      cert.epsilon = epsilon;
      cert.neighbor_count = cone.neighbor_count;
      certs.push_back(std::move(cert));
    }
  }
  std::stable_sort(certs.begin(), certs.end(),
                   [](const CornerCertificate& a, const CornerCertificate& b) {
                     return a.delta > b.delta;
                   });
  return certs;
}

// First-order path derivatives at the frame: for every column j,
// exterior-mix probes phi'_j(0) = <Tu,e_j> + <Te_j,u> for exterior_count
// seeded draws of u together with the i*u variant, and for every pair
// j < k the planar rotations with alpha in {0, pi/2},
// phi'_j(0) = e^{-i alpha}<Te_j,e_k> + e^{i alpha}<Te_k,e_j>.
// All of them must vanish at a pseudocorner witness.
inline ProbeReport probe_derivatives(const ComplexMatrix& T, const Frame& f,
                                     int exterior_count, std::uint64_t seed) {
  if (f.d != T.dim())
    throw dimension_error("probe_derivatives: frame/matrix mismatch");
  validate_frame(f);
  ProbeReport report;

  std::vector<std::vector<cx>> te(f.n);
  for (int j = 0; j < f.n; ++j) te[j] = T.apply(f.col(j));

  if (exterior_count > 0) {
    if (f.d == f.n) {
      report.exterior_skipped = true;
    } else {
      for (int j = 0; j < f.n; ++j) {
        SplitMix64 rng(mix_seed(seed, 0x45585400ull + j));
        for (int s = 0; s < exterior_count; ++s) {
          PathProbe p = make_exterior_probe(f, j, rng);
          const auto tu = T.apply(p.u);
          const cx der = inner(tu, f.col(j)) + inner(te[j], p.u);
          report.probes.emplace_back(p, der);
          // i*u variant isolates the antisymmetric combination
          PathProbe q = p;
          for (cx& z : q.u) z *= cx(0.0, 1.0);
          const cx der2 = cx(0.0, 1.0) * (inner(tu, f.col(j)) - inner(te[j], p.u));
          report.probes.emplace_back(std::move(q), der2);
        }
      }
    }
  }

  for (int j = 0; j < f.n; ++j)
    for (int k = j + 1; k < f.n; ++k)
      for (const double alpha : {0.0, 1.5707963267948966}) {
        PathProbe p;
        p.kind = PathProbe::Kind::planar_rotation;
        p.j = j;
        p.k = k;
        p.alpha = alpha;
        const cx ph(std::cos(alpha), std::sin(alpha));
        const cx der = std::conj(ph) * inner(te[j], f.col(k)) +
                       ph * inner(te[k], f.col(j));
        report.probes.emplace_back(std::move(p), der);
      }

  for (const auto& [probe, der] : report.probes)
    report.max_abs = std::max(report.max_abs, std::abs(der));
  return report;
}

// Full certificate for a candidate point: cone geometry against the cloud,
// probe derivatives at the witness, and eigen residuals. Interpretation is
// the caller's: delta >= delta_min plus vanishing probes is the hypothesis
// under which the residuals must vanish.
inline CornerCertificate certify_corner(const ComplexMatrix& T,
                                        const PointCloud& c,
                                        const RangePoint& u, double epsilon,
                                        double delta_min, std::uint64_t seed,
                                        int exterior_count = 8) {
  if (!(delta_min > 0.0) || delta_min > 1.0)
    throw invalid_input("certify_corner: delta_min must lie in (0,1]");
  if (fingerprint(T) != c.meta.matrix)
    throw contract_violation(
        "certify_corner: cloud was generated from a different matrix");
  const ConeResult cone = detail::cone_or_singleton(c, u.value, epsilon);
  const ProbeReport probes = probe_derivatives(T, u.witness, exterior_count, seed);

  CornerCertificate cert;
  cert.point = u;
  cert.direction = cone.direction;
  cert.delta = cone.delta;
  cert.epsilon = epsilon;
  cert.neighbor_count = cone.neighbor_count;
  cert.probe_max_derivative = probes.max_abs;
  cert.eigen_residuals.resize(u.witness.n);
  for (int j = 0; j < u.witness.n; ++j) {
    auto r = T.apply(u.witness.col(j));
    axpy(r, -u.value[j], u.witness.col(j));
    cert.eigen_residuals[j] = norm(r);
  }
  return cert;
}

}  // namespace numrange
