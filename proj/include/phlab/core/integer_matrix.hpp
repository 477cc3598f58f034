#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace phlab {

/// Exact determinant of an n x n integer matrix (fraction-free Bareiss
/// elimination). Throws std::overflow_error if an intermediate leaves int64.
std::int64_t integer_determinant(int n, std::span<const std::int64_t> row_major);

/// Square integer matrix with determinant +-1, i.e. an automorphism of Z^n.
class IntegerMatrix {
 public:
  /// Throws std::invalid_argument unless the matrix is n x n with |det| = 1.
  IntegerMatrix(int n, std::vector<std::int64_t> row_major);
  IntegerMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);

  static IntegerMatrix identity(int n);

  int size() const { return n_; }
  std::int64_t operator()(int r, int c) const { return entries_[r * n_ + c]; }
  std::int64_t det() const { return det_; }
  std::span<const std::int64_t> entries() const { return entries_; }

  /// Exact inverse (adjugate times det, since det = +-1).
  IntegerMatrix inverse() const;
  IntegerMatrix operator*(const IntegerMatrix& rhs) const;
  bool operator==(const IntegerMatrix& rhs) const = default;

  Eigen::MatrixXd to_real() const;
  std::vector<std::vector<std::int64_t>> rows() const;
  std::string to_string() const;

 private:
  int n_;
  std::vector<std::int64_t> entries_;
  std::int64_t det_;
};

/// Block-diagonal sum a (+) b.
IntegerMatrix direct_sum(const IntegerMatrix& a, const IntegerMatrix& b);

}  // namespace phlab
