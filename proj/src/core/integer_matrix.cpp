#include "phlab/core/integer_matrix.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace phlab {
namespace {

__extension__ using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < std::numeric_limits<std::int64_t>::min()) {
    throw std::overflow_error("integer matrix arithmetic overflowed int64");
  }
  return static_cast<std::int64_t>(v);
}

std::vector<std::int64_t> flatten(std::initializer_list<std::initializer_list<std::int64_t>> rows,
                                  int& n) {
  n = static_cast<int>(rows.size());
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(n) * n);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n) throw std::invalid_argument("integer matrix must be square");
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

}  // namespace

std::int64_t integer_determinant(int n, std::span<const std::int64_t> row_major) {
  if (n == 0) return 1;
  std::vector<std::int64_t> a(row_major.begin(), row_major.end());
  auto at = [&](int r, int c) -> std::int64_t& { return a[r * n + c]; };
  std::int64_t prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (at(k, k) == 0) {
      int swap = -1;
      for (int r = k + 1; r < n; ++r) {
        if (at(r, k) != 0) {
          swap = r;
          break;
        }
      }
      if (swap < 0) return 0;
      for (int c = 0; c < n; ++c) std::swap(at(k, c), at(swap, c));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        i128 v = static_cast<i128>(at(i, j)) * at(k, k) -
                     static_cast<i128>(at(i, k)) * at(k, j);
        at(i, j) = narrow(v / prev);
      }
    }
    prev = at(k, k);
  }
  return sign * at(n - 1, n - 1);
}

IntegerMatrix::IntegerMatrix(int n, std::vector<std::int64_t> row_major)
    : n_(n), entries_(std::move(row_major)), det_(0) {
  if (n_ <= 0 || entries_.size() != static_cast<std::size_t>(n_) * n_) {
    throw std::invalid_argument("integer matrix must be square and non-empty");
  }
  det_ = integer_determinant(n_, entries_);
  if (det_ != 1 && det_ != -1) {
    throw std::invalid_argument("integer matrix must have determinant +-1, got " + std::to_string(det_));
  }
}

IntegerMatrix::IntegerMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows)
    : IntegerMatrix(static_cast<int>(rows.size()), [&] {
        int n = 0;
        return flatten(rows, n);
      }()) {}

IntegerMatrix IntegerMatrix::identity(int n) {
  std::vector<std::int64_t> e(static_cast<std::size_t>(n) * n, 0);
  for (int i = 0; i < n; ++i) e[i * n + i] = 1;
  return IntegerMatrix(n, std::move(e));
}

IntegerMatrix IntegerMatrix::inverse() const {
  // inverse = adj / det = det * adj, adj(j, i) = (-1)^(i+j) * minor(i, j).
  std::vector<std::int64_t> inv(entries_.size());
  if (n_ == 1) {
    inv[0] = det_;
    return IntegerMatrix(1, std::move(inv));
  }
  std::vector<std::int64_t> minor(static_cast<std::size_t>(n_ - 1) * (n_ - 1));
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      std::size_t m = 0;
      for (int r = 0; r < n_; ++r) {
        if (r == i) continue;
        for (int c = 0; c < n_; ++c) {
          if (c == j) continue;
          minor[m++] = (*this)(r, c);
        }
      }
      std::int64_t cof = integer_determinant(n_ - 1, minor);
      if ((i + j) % 2 == 1) cof = -cof;
      inv[j * n_ + i] = det_ * cof;
    }
  }
  return IntegerMatrix(n_, std::move(inv));
}

IntegerMatrix IntegerMatrix::operator*(const IntegerMatrix& rhs) const {
  if (rhs.n_ != n_) throw std::invalid_argument("integer matrix size mismatch");
  std::vector<std::int64_t> out(entries_.size());
  for (int r = 0; r < n_; ++r) {
    for (int c = 0; c < n_; ++c) {
      i128 s = 0;
      for (int k = 0; k < n_; ++k) s += static_cast<i128>((*this)(r, k)) * rhs(k, c);
      out[r * n_ + c] = narrow(s);
    }
  }
  return IntegerMatrix(n_, std::move(out));
}

Eigen::MatrixXd IntegerMatrix::to_real() const {
  Eigen::MatrixXd m(n_, n_);
  for (int r = 0; r < n_; ++r)
    for (int c = 0; c < n_; ++c) m(r, c) = static_cast<double>((*this)(r, c));
  return m;
}

std::vector<std::vector<std::int64_t>> IntegerMatrix::rows() const {
  std::vector<std::vector<std::int64_t>> out(n_);
  for (int r = 0; r < n_; ++r) out[r].assign(entries_.begin() + r * n_, entries_.begin() + (r + 1) * n_);
  return out;
}

std::string IntegerMatrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (int r = 0; r < n_; ++r) {
    os << (r ? ",[" : "[");
    for (int c = 0; c < n_; ++c) os << (c ? "," : "") << (*this)(r, c);
    os << ']';
  }
  os << ']';
  return os.str();
}

IntegerMatrix direct_sum(const IntegerMatrix& a, const IntegerMatrix& b) {
  const int n = a.size() + b.size();
  std::vector<std::int64_t> e(static_cast<std::size_t>(n) * n, 0);
  for (int r = 0; r < a.size(); ++r)
    for (int c = 0; c < a.size(); ++c) e[r * n + c] = a(r, c);
  for (int r = 0; r < b.size(); ++r)
    for (int c = 0; c < b.size(); ++c) e[(r + a.size()) * n + c + a.size()] = b(r, c);
  return IntegerMatrix(n, std::move(e));
}

}  // namespace phlab
