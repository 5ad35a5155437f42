#pragma once

// Dense symmetric linear algebra on HPReal: Cholesky factorization/solves
// and a Jacobi eigensolver for the generalized pencil (A, S). Loops run in
// fixed ascending index order and are single-threaded, so results are
// bit-for-bit reproducible.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "precision.hpp"

namespace zexp {

using HPVector = std::vector<HPReal>;

inline HPReal dot(const HPVector& a, const HPVector& b) {
  if (a.size() != b.size()) throw DomainError("dot: size mismatch");
  if (a.empty()) throw DomainError("dot: empty vectors");
  HPReal acc = a[0] * b[0];
  for (std::size_t t = 1; t < a.size(); ++t) acc.add_product(a[t], b[t]);
  return acc;
}

class HPMatrix {
 public:
  HPMatrix(std::size_t rows, std::size_t cols, const PrecisionConfig& cfg)
      : rows_(rows), cols_(cols), cfg_(cfg) {
    if (rows == 0 || cols == 0) throw DomainError("HPMatrix: empty dimensions");
    data_.reserve(rows * cols);
    for (std::size_t t = 0; t < rows * cols; ++t) data_.emplace_back(cfg);
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const PrecisionConfig& config() const noexcept { return cfg_; }

  HPReal& at(std::size_t r, std::size_t c) {
    check_index(r, c);
    return data_[r * cols_ + c];
  }
  const HPReal& at(std::size_t r, std::size_t c) const {
    check_index(r, c);
    return data_[r * cols_ + c];
  }

  HPReal max_abs() const {
    HPReal m(cfg_);
    for (const HPReal& e : data_) {
      if (e.cmpabs(m) > 0) m = abs(e);
    }
    return m;
  }

 private:
  void check_index(std::size_t r, std::size_t c) const {
    if (r >= rows_ || c >= cols_) {
      throw DomainError("HPMatrix: index (" + std::to_string(r) + "," +
                        std::to_string(c) + ") out of range");
    }
  }

  std::size_t rows_, cols_;
  PrecisionConfig cfg_;
  std::vector<HPReal> data_;
};

inline HPVector matvec(const HPMatrix& A, const HPVector& x) {
  if (A.cols() != x.size()) throw DomainError("matvec: size mismatch");
  HPVector y;
  y.reserve(A.rows());
  for (std::size_t r = 0; r < A.rows(); ++r) {
    HPReal acc = A.at(r, 0) * x[0];
    for (std::size_t c = 1; c < A.cols(); ++c) acc.add_product(A.at(r, c), x[c]);
    y.push_back(std::move(acc));
  }
  return y;
}

// LL^T factorization of a symmetric positive definite matrix. A pivot that
// fails to stay strictly positive aborts with the pivot index attached.
class CholeskyFactor {
 public:
  explicit CholeskyFactor(const HPMatrix& A)
      : n_(A.rows()), l_(A.rows(), A.cols(), A.config()) {
    if (A.rows() != A.cols()) throw DomainError("cholesky: matrix must be square");
    for (std::size_t j = 0; j < n_; ++j) {
      HPReal d = A.at(j, j);
      for (std::size_t k = 0; k < j; ++k) d.sub_product(l_.at(j, k), l_.at(j, k));
      if (d.sign() <= 0) {
        throw NotPositiveDefiniteError(
            "matrix is not positive definite (pivot " + std::to_string(j) + ")", j);
      }
      l_.at(j, j) = sqrt(d);
      for (std::size_t i = j + 1; i < n_; ++i) {
        HPReal s = A.at(i, j);
        for (std::size_t k = 0; k < j; ++k) s.sub_product(l_.at(i, k), l_.at(j, k));
        l_.at(i, j) = s / l_.at(j, j);
      }
    }
  }

  std::size_t size() const noexcept { return n_; }
  const HPMatrix& lower() const noexcept { return l_; }

  HPVector forward(const HPVector& b) const {
    if (b.size() != n_) throw DomainError("cholesky forward: size mismatch");
    HPVector y;
    y.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      HPReal s = b[i];
      for (std::size_t k = 0; k < i; ++k) s.sub_product(l_.at(i, k), y[k]);
      y.push_back(s / l_.at(i, i));
    }
    return y;
  }

  HPVector backward(const HPVector& y) const {
    if (y.size() != n_) throw DomainError("cholesky backward: size mismatch");
    HPVector x(y);
    for (std::size_t ii = n_; ii-- > 0;) {
      HPReal s = y[ii];
      for (std::size_t k = ii + 1; k < n_; ++k) s.sub_product(l_.at(k, ii), x[k]);
      x[ii] = s / l_.at(ii, ii);
    }
    return x;
  }

  HPVector solve(const HPVector& b) const { return backward(forward(b)); }

 private:
  std::size_t n_;
  HPMatrix l_;
};

inline HPVector cholesky_solve(const HPMatrix& A, const HPVector& b) {
  return CholeskyFactor(A).solve(b);
}

// Smallest eigenvalue of the pencil A x = lambda S x with S positive
// definite: transform to C = L^-1 A L^-T and run cyclic Jacobi sweeps.
inline HPReal pencil_min_eigenvalue(const HPMatrix& A, const HPMatrix& S,
                                    int max_sweeps = 80) {
  if (A.rows() != A.cols() || S.rows() != S.cols() || A.rows() != S.rows()) {
    throw DomainError("pencil_min_eigenvalue: dimension mismatch");
  }
  const std::size_t n = A.rows();
  const PrecisionConfig& cfg = A.config();
  CholeskyFactor chol(S);

  HPMatrix X(n, n, cfg);
  for (std::size_t j = 0; j < n; ++j) {
    HPVector col;
    col.reserve(n);
    for (std::size_t i = 0; i < n; ++i) col.push_back(A.at(i, j));
    HPVector w = chol.forward(col);
    for (std::size_t i = 0; i < n; ++i) X.at(i, j) = std::move(w[i]);
  }
  HPMatrix C(n, n, cfg);
  for (std::size_t i = 0; i < n; ++i) {
    HPVector row;
    row.reserve(n);
    for (std::size_t j = 0; j < n; ++j) row.push_back(X.at(i, j));
    HPVector w = chol.forward(row);
    for (std::size_t j = 0; j < n; ++j) C.at(i, j) = std::move(w[j]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      HPReal avg = (C.at(i, j) + C.at(j, i)).div_si(2);
      C.at(i, j) = avg;
      C.at(j, i) = std::move(avg);
    }
  }

  const HPReal one(1, cfg);
  HPReal tol = C.max_abs() * pow_si(HPReal(10, cfg), -(cfg.digits() - 6));
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    HPReal off(cfg);
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (C.at(p, q).cmpabs(off) > 0) off = abs(C.at(p, q));
      }
    }
    if (off <= tol) break;
    if (sweep == max_sweeps - 1) {
      throw DomainError("pencil_min_eigenvalue: Jacobi sweeps did not converge");
    }
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (C.at(p, q).cmpabs(tol) <= 0) continue;
        HPReal apq = C.at(p, q);
        HPReal tau = (C.at(q, q) - C.at(p, p)) / (apq + apq);
        HPReal t = one / (abs(tau) + sqrt(one + tau * tau));
        if (tau.sign() < 0) t = -t;
        HPReal c = one / sqrt(one + t * t);
        HPReal s = t * c;
        HPReal app = C.at(p, p);
        HPReal aqq = C.at(q, q);
        C.at(p, p) = app - t * apq;
        C.at(q, q) = aqq + t * apq;
        C.at(p, q) = HPReal(cfg);
        C.at(q, p) = HPReal(cfg);
        for (std::size_t r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          HPReal arp = C.at(r, p);
          HPReal arq = C.at(r, q);
          HPReal nrp = c * arp - s * arq;
          HPReal nrq = s * arp + c * arq;
          C.at(r, p) = nrp;
          C.at(p, r) = std::move(nrp);
          C.at(r, q) = nrq;
          C.at(q, r) = std::move(nrq);
        }
      }
    }
  }

  HPReal mn = C.at(0, 0);
  for (std::size_t i = 1; i < n; ++i) {
    if (C.at(i, i) < mn) mn = C.at(i, i);
  }
  return mn;
}

}  // namespace zexp
