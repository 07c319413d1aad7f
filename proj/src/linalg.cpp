#include "cobandit/linalg.hpp"

#include <cmath>
#include <string>

namespace cobandit {

double dot(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) throw DimensionMismatch("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

void axpy(double alpha, const Vec& x, Vec& y) {
  if (x.size() != y.size()) throw DimensionMismatch("axpy: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vec Matrix::col(std::size_t j) const {
  Vec out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
  return out;
}

Vec Matrix::row(std::size_t i) const {
  Vec out(cols_);
  for (std::size_t j = 0; j < cols_; ++j) out[j] = (*this)(i, j);
  return out;
}

Vec Matrix::mul(const Vec& x) const {
  if (x.size() != cols_) throw DimensionMismatch("Matrix::mul: size mismatch");
  Vec out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    const double* r = data_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) s += r[j] * x[j];
    out[i] = s;
  }
  return out;
}

Matrix self_outer(const Vec& x) {
  const std::size_t n = x.size();
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = x[i] * x[j];
  return m;
}

Vec kron_vec(const Vec& w, const Vec& x) {
  Vec out(w.size() * x.size());
  std::size_t p = 0;
  for (double wi : w)
    for (double xi : x) out[p++] = wi * xi;
  return out;
}

Vec pad_vector(const Vec& x, std::size_t block_index, std::size_t num_blocks) {
  if (block_index >= num_blocks) throw DimensionMismatch("pad_vector: block out of range");
  Vec out(x.size() * num_blocks, 0.0);
  std::copy(x.begin(), x.end(), out.begin() + block_index * x.size());
  return out;
}

Matrix reshape_mat(const Vec& x, std::size_t r, std::size_t c) {
  if (x.size() != r * c)
    throw DimensionMismatch("reshape_mat: " + std::to_string(x.size()) + " != " +
                            std::to_string(r) + "*" + std::to_string(c));
  Matrix m(r, c);
  for (std::size_t j = 0; j < c; ++j)
    for (std::size_t i = 0; i < r; ++i) m(i, j) = x[j * r + i];
  return m;
}

Vec flatten_mat(const Matrix& m) {
  Vec out(m.rows() * m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) out[j * m.rows() + i] = m(i, j);
  return out;
}

InverseState InverseState::from_matrix(Matrix m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw DimensionMismatch("InverseState::from_matrix: not square");
  double max_abs = 0.0, max_asym = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      max_abs = std::max(max_abs, std::abs(m(i, j)));
      max_asym = std::max(max_asym, std::abs(m(i, j) - m(j, i)));
    }
  if (max_asym > 1e-9 * std::max(1.0, max_abs))
    throw DimensionMismatch("InverseState::from_matrix: not symmetric");
  InverseState s(m.rows());
  s.inv_ = std::move(m);
  return s;
}

void InverseState::sm_update(const Vec& u, const Vec& v) {
  const std::size_t n = dim();
  if (u.size() != n || v.size() != n) throw DimensionMismatch("sm_update: size mismatch");
  const Vec iu = inv_.mul(u);
  // vᵀ inv, as a vector
  Vec vi(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double vIi = v[i];
    if (vIi == 0.0) continue;
    const double* r = inv_.data().data() + i * n;
    for (std::size_t j = 0; j < n; ++j) vi[j] += vIi * r[j];
  }
  const double denom = 1.0 + dot(v, iu);
  if (std::abs(denom) < 1e-12) throw DegenerateUpdate("sm_update: singular rank-one update");
  const double scale = 1.0 / denom;
  for (std::size_t i = 0; i < n; ++i) {
    const double ui = iu[i] * scale;
    if (ui == 0.0) continue;
    double* r = inv_.data().data() + i * n;
    for (std::size_t j = 0; j < n; ++j) r[j] -= ui * vi[j];
  }
}

double InverseState::quad_form(const Vec& z) const {
  if (z.size() != dim()) throw DimensionMismatch("quad_form: size mismatch");
  return dot(z, inv_.mul(z));
}

}  // namespace cobandit
