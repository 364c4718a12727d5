#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>

#include "denfg/complex_tensor.hpp"

namespace denfg {

/// Non-owning square-matrix view of a rank-2 tensor, used wherever a
/// Hermitian/PSD interpretation of the data is required.
struct HermitianView {
  const ComplexTensor* m;
  int n;

  static HermitianView over(const ComplexTensor& t) {
    if (t.rank() != 2 || t.shape()[0] != t.shape()[1])
      throw Error("HermitianView: tensor is not a square matrix");
    return HermitianView{&t, t.shape()[0]};
  }

  cdouble at(int i, int j) const {
    return (*m)[static_cast<size_t>(i) * n + j];
  }

  /// Max |M(i,j) - conj(M(j,i))| over all entries.
  double hermiticity_defect() const {
    double d = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        d = std::max(d, std::abs(at(i, j) - std::conj(at(j, i))));
    return d;
  }

  bool is_hermitian(double tol = 1e-9) const {
    return hermiticity_defect() <= tol * std::max(1.0, m->max_abs());
  }
};

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // descending
  ComplexTensor eigenvectors;       // [n, n], columns orthonormal
};

namespace linalg {

inline ComplexTensor matmul(const ComplexTensor& a, const ComplexTensor& b) {
  return contract(a, b, {{1, 0}});
}

inline ComplexTensor adjoint(const ComplexTensor& m) {
  if (m.rank() != 2) throw Error("adjoint: rank-2 tensor required");
  const int r = m.shape()[0], c = m.shape()[1];
  ComplexTensor out({c, r});
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      out[static_cast<size_t>(j) * r + i] = std::conj(m[static_cast<size_t>(i) * c + j]);
  return out;
}

inline cdouble trace(const ComplexTensor& m) {
  if (m.rank() != 2 || m.shape()[0] != m.shape()[1])
    throw Error("trace: square matrix required");
  cdouble t{0.0, 0.0};
  const int n = m.shape()[0];
  for (int i = 0; i < n; ++i) t += m[static_cast<size_t>(i) * n + i];
  return t;
}

inline double frobenius_norm(const ComplexTensor& m) {
  double s = 0.0;
  for (const auto& v : m.values()) s += std::norm(v);
  return std::sqrt(s);
}

/// (M + M^dagger) / 2. Restores exact Hermiticity after float drift.
inline ComplexTensor hermitize(const ComplexTensor& m) {
  if (m.rank() != 2 || m.shape()[0] != m.shape()[1])
    throw Error("hermitize: square matrix required");
  const int n = m.shape()[0];
  ComplexTensor out({n, n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[static_cast<size_t>(i) * n + j] =
          0.5 * (m[static_cast<size_t>(i) * n + j] +
                 std::conj(m[static_cast<size_t>(j) * n + i]));
  return out;
}

}  // namespace linalg

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations,
/// bounded at 100 sweeps. Eigenvalues are returned in descending order with
/// matching orthonormal eigenvector columns.
inline EigenDecomposition hermitian_eig(const HermitianView& m, double tol = 1e-9) {
  if (!m.is_hermitian(tol)) throw Error("hermitian_eig: input is not Hermitian");
  const int n = m.n;

  // Work on the exactly-Hermitian average; keep only the upper triangle live.
  ComplexTensor a = linalg::hermitize(*m.m);
  ComplexTensor v = ComplexTensor::identity(n);
  auto A = [&](int i, int j) -> cdouble& { return a[static_cast<size_t>(i) * n + j]; };
  auto V = [&](int i, int j) -> cdouble& { return v[static_cast<size_t>(i) * n + j]; };

  const double scale = std::max(a.max_abs(), 1e-300);
  const int max_sweeps = 100;
  bool converged = n <= 1;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(A(p, q));
    if (std::sqrt(off) <= 1e-15 * scale * n) {
      converged = true;
      break;
    }
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cdouble apq = A(p, q);
        const double az = std::abs(apq);
        if (az <= 1e-18 * scale) continue;
        // Phase-adjusted Jacobi rotation: with u = apq/|apq|, the unitary
        // J = [[c, s*u], [-s*conj(u), c]] (identity elsewhere) zeroes A(p,q)
        // under A <- J^dagger A J when t = tan(theta) solves
        // t^2 + 2*tau*t - 1 = 0 with tau = (A(q,q) - A(p,p)) / (2|apq|).
        const cdouble u = apq / az;
        const double app = A(p, p).real();
        const double aqq = A(q, q).real();
        const double tau = (aqq - app) / (2.0 * az);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const cdouble su = s * u;

        for (int i = 0; i < n; ++i) {
          if (i == p || i == q) continue;
          const cdouble aip = A(i, p);
          const cdouble aiq = A(i, q);
          const cdouble nip = c * aip - std::conj(su) * aiq;
          const cdouble niq = su * aip + c * aiq;
          A(i, p) = nip;
          A(p, i) = std::conj(nip);
          A(i, q) = niq;
          A(q, i) = std::conj(niq);
        }
        A(p, p) = app - t * az;
        A(q, q) = aqq + t * az;
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        // Accumulate eigenvectors: V <- V * J.
        for (int i = 0; i < n; ++i) {
          const cdouble vip = V(i, p);
          const cdouble viq = V(i, q);
          V(i, p) = c * vip - std::conj(su) * viq;
          V(i, q) = su * vip + c * viq;
        }
      }
    }
  }
  if (!converged) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += std::norm(A(p, q));
    if (std::sqrt(off) > 1e-12 * scale * n)
      throw Error("hermitian_eig: Jacobi iteration failed to converge in 100 sweeps");
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = A(i, i).real();
  std::sort(order.begin(), order.end(), [&](int x, int y) { return diag[x] > diag[y]; });

  EigenDecomposition res;
  res.eigenvalues.resize(n);
  res.eigenvectors = ComplexTensor({n, n});
  for (int k = 0; k < n; ++k) {
    res.eigenvalues[k] = diag[order[k]];
    for (int i = 0; i < n; ++i)
      res.eigenvectors[static_cast<size_t>(i) * n + k] = V(i, order[k]);
  }
  return res;
}

/// True iff the matrix is Hermitian within tol and its minimum eigenvalue is
/// >= -tol * max(1, max |eigenvalue|).
inline bool psd_check(const HermitianView& m, double tol = 1e-9) {
  if (m.m->rank() != 2 || m.m->shape()[0] != m.m->shape()[1])
    throw Error("psd_check: square matrix required");
  if (!m.is_hermitian(tol)) return false;
  const auto eig = hermitian_eig(m, tol);
  double max_abs_eig = 0.0;
  for (double l : eig.eigenvalues) max_abs_eig = std::max(max_abs_eig, std::abs(l));
  const double lmin = eig.eigenvalues.back();
  return lmin >= -tol * std::max(1.0, max_abs_eig);
}

inline bool psd_check(const ComplexTensor& m, double tol = 1e-9) {
  return psd_check(HermitianView::over(m), tol);
}

/// Rank-revealing factorization of a PSD matrix: returns vectors b_k with
/// M(x, x') = sum_k conj(b_k(x)) * b_k(x'). Eigenvalues in [-tol, 0) are
/// clamped to zero; anything below -tol fails the PSD precondition.
inline std::vector<std::vector<cdouble>> psd_factorize(const HermitianView& m, double tol = 1e-9) {
  if (!psd_check(m, tol)) throw Error("psd_factorize: input fails psd_check");
  const auto eig = hermitian_eig(m, tol);
  const int n = m.n;
  double max_abs_eig = 0.0;
  for (double l : eig.eigenvalues) max_abs_eig = std::max(max_abs_eig, std::abs(l));
  const double keep = tol * std::max(1.0, max_abs_eig);

  std::vector<std::vector<cdouble>> factors;
  for (int k = 0; k < n; ++k) {
    double lambda = eig.eigenvalues[k];
    if (lambda <= keep) continue;  // clamped or negligible
    const double w = std::sqrt(lambda);
    std::vector<cdouble> b(n);
    for (int x = 0; x < n; ++x)
      b[x] = w * std::conj(eig.eigenvectors[static_cast<size_t>(x) * n + k]);
    factors.push_back(std::move(b));
  }
  return factors;
}

struct PowerIterationResult {
  double lambda0;
  int iterations;
};

/// Dominant-eigenvalue estimate for a general square matrix by power
/// iteration with rescaling. Stops when the Rayleigh quotient stabilizes;
/// errors out if it does not, or if the dominant eigenvalue shows a
/// non-negligible imaginary part.
inline PowerIterationResult power_iteration(const ComplexTensor& m, int max_iters = 100000,
                                            double tol = 1e-13) {
  if (m.rank() != 2 || m.shape()[0] != m.shape()[1])
    throw Error("power_iteration: square matrix required");
  if (!m.is_finite()) throw Error("power_iteration: non-finite input");
  const int n = m.shape()[0];

  // Deterministic pseudo-random start: overlap with the dominant eigenvector
  // is nonzero for any input we care about.
  std::vector<cdouble> v(n);
  uint64_t state = 0x9e3779b97f4a7c15ULL;
  auto next = [&state]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return static_cast<double>(state >> 11) * 0x1.0p-53 - 0.5;
  };
  for (int i = 0; i < n; ++i) v[i] = cdouble(1.0 + 0.25 * next(), 0.25 * next());

  const cdouble* md = m.values().data();
  std::vector<cdouble> w(n);
  cdouble rayleigh_prev{0.0, 0.0};
  for (int it = 1; it <= max_iters; ++it) {
    for (int i = 0; i < n; ++i) {
      cdouble acc{0.0, 0.0};
      for (int j = 0; j < n; ++j) acc += md[static_cast<size_t>(i) * n + j] * v[j];
      w[i] = acc;
    }
    double vv = 0.0;
    cdouble vw{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
      vv += std::norm(v[i]);
      vw += std::conj(v[i]) * w[i];
    }
    const cdouble rayleigh = vw / vv;
    double wn = 0.0;
    for (int i = 0; i < n; ++i) wn += std::norm(w[i]);
    wn = std::sqrt(wn);
    if (wn <= 1e-300) throw Error("power_iteration: iterate collapsed to zero");
    for (int i = 0; i < n; ++i) v[i] = w[i] / wn;

    if (it > 1 && std::abs(rayleigh - rayleigh_prev) <= tol * std::max(1.0, std::abs(rayleigh))) {
      if (std::abs(rayleigh.imag()) > tol * std::max(1.0, std::abs(rayleigh)) * 10.0)
        throw Error("power_iteration: dominant eigenvalue has non-negligible imaginary part");
      return {rayleigh.real(), it};
    }
    rayleigh_prev = rayleigh;
  }
  throw Error("power_iteration: no convergence within max_iters");
}

/// trace(m^p) by repeated matrix multiplication, p >= 1.
inline cdouble matrix_power_trace(const ComplexTensor& m, int p) {
  if (m.rank() != 2 || m.shape()[0] != m.shape()[1])
    throw Error("matrix_power_trace: square matrix required");
  if (p < 1) throw Error("matrix_power_trace: power must be >= 1");
  ComplexTensor acc = m;
  for (int k = 1; k < p; ++k) acc = linalg::matmul(acc, m);
  return linalg::trace(acc);
}

}  // namespace denfg
