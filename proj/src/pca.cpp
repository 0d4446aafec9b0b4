#include "coastpca/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "coastpca/errors.hpp"
#include "coastpca/parallel.hpp"

namespace coastpca {

namespace {

double frobenius_norm(const Matrix& m) {
  double acc = 0.0;
  for (double v : m.storage()) acc += v * v;
  return std::sqrt(acc);
}

double offdiag_norm(const Matrix& m) {
  double acc = 0.0;
  const std::size_t n = m.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) acc += m(i, j) * m(i, j);
  return std::sqrt(acc);
}

}  // namespace

SampleMatrix center_columns(const Matrix& raw) {
  const std::size_t n = raw.rows();
  const std::size_t m = raw.cols();
  if (n < 1 || m < 1)
    throw invalid_argument_error("center_columns: empty input matrix");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (!std::isfinite(raw(i, j)))
        throw invalid_argument_error("center_columns: non-finite entry at row " +
                                     std::to_string(i) + ", column " +
                                     std::to_string(j));

  SampleMatrix s;
  s.data = Matrix(n, m);
  s.means.resize(m);
  for (std::size_t j = 0; j < m; ++j) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += raw(i, j);
    const double mean = sum / static_cast<double>(n);
    s.means[j] = mean;
    for (std::size_t i = 0; i < n; ++i) s.data(i, j) = raw(i, j) - mean;
  }
  return s;
}

Matrix covariance(const SampleMatrix& s, int workers) {
  const std::size_t n = s.n();
  const std::size_t m = s.m();
  if (n == 0 || m == 0)
    throw invalid_argument_error("covariance: empty sample matrix");

  Matrix c(n, n);
  const double inv_m = 1.0 / static_cast<double>(m);
  // Upper triangle only; mirrored afterwards so C is exactly symmetric.
  parallel_for(n, workers, [&](std::size_t i) {
    for (std::size_t l = i; l < n; ++l) {
      double acc = 0.0;
      for (std::size_t j = 0; j < m; ++j) acc += s.data(i, j) * s.data(l, j);
      c(i, l) = acc * inv_m;
    }
  });
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < i; ++l) c(i, l) = c(l, i);
  return c;
}

EigenSystem eigendecompose_symmetric(const Matrix& c, int max_sweeps) {
  const std::size_t n = c.rows();
  if (n == 0 || c.cols() != n)
    throw invalid_argument_error("eigendecompose_symmetric: matrix must be square");

  // Work on the symmetrized copy.
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (c(i, j) + c(j, i));

  Matrix v = Matrix::identity(n);
  const double norm = frobenius_norm(a);
  const double tol = 1e-12 * norm;

  bool converged = (n == 1) || offdiag_norm(a) <= tol;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double theta = 0.5 * (aqq - app) / apq;
        double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double cs = 1.0 / std::sqrt(t * t + 1.0);
        const double sn = t * cs;
        const double tau = sn / (1.0 + cs);

        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const double arp = a(r, p);
          const double arq = a(r, q);
          a(r, p) = arp - sn * (arq + tau * arp);
          a(p, r) = a(r, p);
          a(r, q) = arq + sn * (arp - tau * arq);
          a(q, r) = a(r, q);
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double vrp = v(r, p);
          const double vrq = v(r, q);
          v(r, p) = vrp - sn * (vrq + tau * vrp);
          v(r, q) = vrq + sn * (vrp - tau * vrq);
        }
      }
    }
    converged = offdiag_norm(a) <= tol;
  }
  if (!converged) {
    const double residual = offdiag_norm(a);
    throw numerical_error(
        "eigendecompose_symmetric: Jacobi did not converge after " +
            std::to_string(max_sweeps) + " sweeps; off-diagonal norm " +
            std::to_string(residual),
        residual);
  }

  // Stable descending sort keeps Jacobi output order on ties.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x) > a(y, y);
  });

  EigenSystem e;
  e.eigenvalues.resize(n);
  e.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t src = order[k];
    e.eigenvalues[k] = a(src, src);
    // Sign convention: largest-magnitude entry positive.
    std::size_t imax = 0;
    double vmax = std::abs(v(0, src));
    for (std::size_t r = 1; r < n; ++r) {
      const double mag = std::abs(v(r, src));
      if (mag > vmax) {
        vmax = mag;
        imax = r;
      }
    }
    const double sign = v(imax, src) < 0.0 ? -1.0 : 1.0;
    for (std::size_t r = 0; r < n; ++r) e.eigenvectors(r, k) = sign * v(r, src);
  }
  return e;
}

ModeSet compute_modes(const SampleMatrix& s, const EigenSystem& e,
                      int workers) {
  const std::size_t n = s.n();
  const std::size_t m = s.m();
  if (e.eigenvectors.rows() != n || e.eigenvectors.cols() != n)
    throw invalid_argument_error(
        "compute_modes: eigenvector matrix does not match sample dimension");

  ModeSet phi;
  phi.modes = Matrix(m, n);
  parallel_for(m, workers, [&](std::size_t j) {
    for (std::size_t k = 0; k < n; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        acc += s.data(i, j) * e.eigenvectors(i, k);
      phi.modes(j, k) = acc;
    }
  });
  return phi;
}

Matrix reconstruct(const SampleMatrix& s, const EigenSystem& e,
                   const ModeSet& phi, std::size_t k, int workers) {
  const std::size_t n = s.n();
  const std::size_t m = s.m();
  if (k > n)
    throw invalid_argument_error("reconstruct: mode count " +
                                 std::to_string(k) + " exceeds dimension " +
                                 std::to_string(n));
  if (e.eigenvectors.rows() != n || phi.modes.rows() != m ||
      phi.modes.cols() != n)
    throw invalid_argument_error("reconstruct: dimension mismatch");

  Matrix out(n, m);
  parallel_for(m, workers, [&](std::size_t j) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t t = 0; t < k; ++t)
        acc += e.eigenvectors(i, t) * phi.modes(j, t);
      out(i, j) = acc + s.means[j];
    }
  });
  return out;
}

double variance_fraction(const EigenSystem& e, std::size_t k) {
  const std::size_t n = e.eigenvalues.size();
  if (k > n)
    throw invalid_argument_error("variance_fraction: mode count out of range");
  double total = 0.0;
  double head = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lam = std::max(e.eigenvalues[i], 0.0);
    total += lam;
    if (i < k) head += lam;
  }
  if (total <= 0.0) return 1.0;
  return std::clamp(head / total, 0.0, 1.0);
}

}  // namespace coastpca
