#pragma once

// Coordinatewise Riesz-space operations on R^n and on the grid spaces
// l_inf^N(l_1^{M_1}, ..., l_1^{M_N}). Every routine is exact; lengths must agree
// or a StructuralError is thrown.

#include <cstddef>
#include <string>
#include <vector>

#include "fbl/rational.hpp"

namespace fbl {

Vec zeros(std::size_t n);
Vec unit_vector(std::size_t n, std::size_t i, const Rational& value = Rational(1));

Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Rational& r, const Vec& a);
Vec meet(const Vec& a, const Vec& b);
Vec join(const Vec& a, const Vec& b);
Vec abs(const Vec& a);
Vec pos_part(const Vec& a);
Vec neg_part(const Vec& a);  // a^- = (-a) v 0, so a = a^+ - a^-
Rational dot(const Vec& a, const Vec& b);

bool is_zero(const Vec& a);
bool is_nonnegative(const Vec& a);
bool leq(const Vec& a, const Vec& b);  // coordinatewise order
bool disjoint(const Vec& a, const Vec& b);  // |a| ^ |b| = 0
std::vector<std::size_t> support(const Vec& a);
Rational max_abs(const Vec& a);

// Row widths of l_inf^N(l_1^{M_1}, ..., l_1^{M_N}); cells are laid out row-major.
class GridShape {
 public:
  GridShape() = default;
  explicit GridShape(std::vector<std::size_t> widths);
  static GridShape uniform(std::size_t rows, std::size_t width);

  std::size_t rows() const { return widths_.size(); }
  std::size_t width(std::size_t row) const { return widths_.at(row); }
  std::size_t cells() const { return offsets_.back(); }
  std::size_t offset(std::size_t row) const { return offsets_.at(row); }
  std::size_t index(std::size_t row, std::size_t col) const;
  std::size_t row_of(std::size_t cell) const;
  const std::vector<std::size_t>& widths() const { return widths_; }
  std::string str() const;

  friend bool operator==(const GridShape& a, const GridShape& b) { return a.widths_ == b.widths_; }

 private:
  std::vector<std::size_t> widths_;
  std::vector<std::size_t> offsets_{0};
};

// ||x|| = max_k sum_j |x(k, j)|.
Rational grid_norm(const GridShape& shape, const Vec& x);

// Rows of the grid as 0/1 functionals; the norm is the max of these against |x|.
std::vector<Vec> grid_row_functionals(const GridShape& shape);

// One cell from each row, all weights 1: the order extreme points of the unit ball.
std::vector<Vec> grid_row_selections(const GridShape& shape);

// A grid-shaped element; thin wrapper used where the row structure matters.
class GridVector {
 public:
  GridVector(GridShape shape, Vec entries);
  explicit GridVector(GridShape shape);

  const GridShape& shape() const { return shape_; }
  const Vec& entries() const { return entries_; }
  const Rational& at(std::size_t row, std::size_t col) const { return entries_[shape_.index(row, col)]; }
  Rational& at(std::size_t row, std::size_t col) { return entries_[shape_.index(row, col)]; }
  Rational norm() const { return grid_norm(shape_, entries_); }

  friend GridVector operator+(const GridVector& a, const GridVector& b);
  friend GridVector operator-(const GridVector& a, const GridVector& b);
  friend GridVector operator*(const Rational& r, const GridVector& a);
  friend GridVector meet(const GridVector& a, const GridVector& b);
  friend GridVector join(const GridVector& a, const GridVector& b);
  friend GridVector abs(const GridVector& a);
  friend bool operator==(const GridVector& a, const GridVector& b) = default;

 private:
  GridShape shape_;
  Vec entries_;
};

}  // namespace fbl
