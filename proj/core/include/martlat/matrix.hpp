#ifndef MARTLAT_MATRIX_HPP
#define MARTLAT_MATRIX_HPP

#include <cstddef>
#include <vector>

#include "martlat/rational.hpp"

namespace martlat {

/// Dense row-major rational matrix. Products skip zero entries, which keeps
/// the block-diagonal operators used here cheap to compose.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

  static Matrix identity(std::size_t n);
  /// Throws PreconditionError on ragged input.
  static Matrix from_rows(const std::vector<std::vector<Rational>>& rows);
  /// Block-diagonal matrix with `copies` copies of `block`.
  static Matrix repeat_diagonal(const Matrix& block, std::size_t copies);
  /// diag(a, b).
  static Matrix direct_sum(const Matrix& a, const Matrix& b);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<std::vector<Rational>> to_rows() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

}  // namespace martlat

#endif  // MARTLAT_MATRIX_HPP
