#pragma once

#include <cstddef>
#include <vector>

#include "cobandit/errors.hpp"

namespace cobandit {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
void axpy(double alpha, const Vec& x, Vec& y);  // y += alpha * x

/// Dense row-major matrix.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  Vec col(std::size_t j) const;
  Vec row(std::size_t i) const;

  /// Matrix * x.
  Vec mul(const Vec& x) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// x xᵀ, symmetric rank-<=1.
Matrix self_outer(const Vec& x);

/// Block vector of dim w.size()*x.size(); block j equals w[j]*x.
Vec kron_vec(const Vec& w, const Vec& x);

/// Zero-padded block vector: x placed in block `block_index` of `num_blocks`.
Vec pad_vector(const Vec& x, std::size_t block_index, std::size_t num_blocks);

/// Column-major unstacking of x into an r x c matrix: column j is x[j*r .. (j+1)*r).
Matrix reshape_mat(const Vec& x, std::size_t r, std::size_t c);

/// Column-major flattening, the inverse of reshape_mat.
Vec flatten_mat(const Matrix& m);

/// Incrementally maintained inverse of A = I + sum of rank-one terms.
/// All in-discipline updates are self-outer-products, so the inverse stays
/// symmetric positive definite and the Sherman-Morrison denominator stays >= 1.
class InverseState {
 public:
  explicit InverseState(std::size_t dim) : inv_(Matrix::identity(dim)) {}

  /// Restores a previously maintained inverse (snapshot load); the matrix must
  /// be square and symmetric within 1e-9 relative tolerance.
  static InverseState from_matrix(Matrix m);

  std::size_t dim() const { return inv_.rows(); }
  const Matrix& inv() const { return inv_; }

  /// Replaces inv with (A + u vᵀ)⁻¹ where A is the current implicit matrix.
  /// O(dim²); throws DegenerateUpdate when the update is numerically singular.
  void sm_update(const Vec& u, const Vec& v);

  /// zᵀ inv z.
  double quad_form(const Vec& z) const;

  /// inv * z.
  Vec apply(const Vec& z) const { return inv_.mul(z); }

 private:
  Matrix inv_;
};

}  // namespace cobandit
