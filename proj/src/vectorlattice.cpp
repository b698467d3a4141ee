#include "fbl/vectorlattice.hpp"

#include <algorithm>

#include "fbl/errors.hpp"

namespace fbl {
namespace {

void same_length(const Vec& a, const Vec& b, const char* op) {
  if (a.size() != b.size())
    throw StructuralError(std::string(op) + ": length " + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()));
}

template <class F>
Vec zip(const Vec& a, const Vec& b, const char* op, F f) {
  same_length(a, b, op);
  Vec r;
  r.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r.push_back(f(a[i], b[i]));
  return r;
}

}  // namespace

Vec zeros(std::size_t n) { return Vec(n); }

Vec unit_vector(std::size_t n, std::size_t i, const Rational& value) {
  if (i >= n) throw StructuralError("unit_vector index out of range");
  Vec v(n);
  v[i] = value;
  return v;
}

Vec add(const Vec& a, const Vec& b) {
  return zip(a, b, "add", [](const Rational& x, const Rational& y) { return x + y; });
}
Vec sub(const Vec& a, const Vec& b) {
  return zip(a, b, "sub", [](const Rational& x, const Rational& y) { return x - y; });
}
Vec meet(const Vec& a, const Vec& b) {
  return zip(a, b, "meet", [](const Rational& x, const Rational& y) { return min(x, y); });
}
Vec join(const Vec& a, const Vec& b) {
  return zip(a, b, "join", [](const Rational& x, const Rational& y) { return max(x, y); });
}

Vec scale(const Rational& r, const Vec& a) {
  Vec v;
  v.reserve(a.size());
  for (const auto& x : a) v.push_back(r * x);
  return v;
}

Vec abs(const Vec& a) {
  Vec v;
  v.reserve(a.size());
  for (const auto& x : a) v.push_back(fbl::abs(x));
  return v;
}

Vec pos_part(const Vec& a) {
  Vec v;
  v.reserve(a.size());
  for (const auto& x : a) v.push_back(x.sign() > 0 ? x : Rational(0));
  return v;
}

Vec neg_part(const Vec& a) {
  Vec v;
  v.reserve(a.size());
  for (const auto& x : a) v.push_back(x.sign() < 0 ? -x : Rational(0));
  return v;
}

Rational dot(const Vec& a, const Vec& b) {
  same_length(a, b, "dot");
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) s += a[i] * b[i];
  return s;
}

bool is_zero(const Vec& a) {
  return std::all_of(a.begin(), a.end(), [](const Rational& x) { return x.is_zero(); });
}

bool is_nonnegative(const Vec& a) {
  return std::all_of(a.begin(), a.end(), [](const Rational& x) { return x.sign() >= 0; });
}

bool leq(const Vec& a, const Vec& b) {
  same_length(a, b, "leq");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (b[i] < a[i]) return false;
  return true;
}

bool disjoint(const Vec& a, const Vec& b) {
  same_length(a, b, "disjoint");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) return false;
  return true;
}

std::vector<std::size_t> support(const Vec& a) {
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero()) s.push_back(i);
  return s;
}

Rational max_abs(const Vec& a) {
  Rational m;
  for (const auto& x : a) m = max(m, fbl::abs(x));
  return m;
}

GridShape::GridShape(std::vector<std::size_t> widths) : widths_(std::move(widths)) {
  offsets_.assign(1, 0);
  for (std::size_t w : widths_) {
    if (w == 0) throw StructuralError("grid row of width 0");
    offsets_.push_back(offsets_.back() + w);
  }
}

GridShape GridShape::uniform(std::size_t rows, std::size_t width) {
  return GridShape(std::vector<std::size_t>(rows, width));
}

std::size_t GridShape::index(std::size_t row, std::size_t col) const {
  if (row >= rows() || col >= widths_[row]) throw StructuralError("grid cell out of range");
  return offsets_[row] + col;
}

std::size_t GridShape::row_of(std::size_t cell) const {
  if (cell >= cells()) throw StructuralError("grid cell out of range");
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), cell);
  return std::size_t(it - offsets_.begin()) - 1;
}

std::string GridShape::str() const {
  std::string s = "[";
  for (std::size_t k = 0; k < widths_.size(); ++k) s += (k ? "," : "") + std::to_string(widths_[k]);
  return s + "]";
}

Rational grid_norm(const GridShape& shape, const Vec& x) {
  if (x.size() != shape.cells()) throw StructuralError("grid_norm: vector does not match grid");
  Rational best;
  for (std::size_t k = 0; k < shape.rows(); ++k) {
    Rational row;
    for (std::size_t j = 0; j < shape.width(k); ++j) row += fbl::abs(x[shape.offset(k) + j]);
    best = max(best, row);
  }
  return best;
}

std::vector<Vec> grid_row_functionals(const GridShape& shape) {
  std::vector<Vec> out;
  for (std::size_t k = 0; k < shape.rows(); ++k) {
    Vec f(shape.cells());
    for (std::size_t j = 0; j < shape.width(k); ++j) f[shape.offset(k) + j] = 1;
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Vec> grid_row_selections(const GridShape& shape) {
  std::vector<Vec> out;
  std::vector<std::size_t> pick(shape.rows(), 0);
  if (shape.rows() == 0) return out;
  while (true) {
    Vec v(shape.cells());
    for (std::size_t k = 0; k < shape.rows(); ++k) v[shape.offset(k) + pick[k]] = 1;
    out.push_back(std::move(v));
    std::size_t k = shape.rows();
    while (k > 0) {
      --k;
      if (++pick[k] < shape.width(k)) break;
      pick[k] = 0;
      if (k == 0) return out;
    }
  }
}

GridVector::GridVector(GridShape shape, Vec entries) : shape_(std::move(shape)), entries_(std::move(entries)) {
  if (entries_.size() != shape_.cells()) throw StructuralError("grid vector does not match its shape");
}

GridVector::GridVector(GridShape shape) : shape_(std::move(shape)), entries_(shape_.cells()) {}

namespace {
void same_shape(const GridVector& a, const GridVector& b) {
  if (!(a.shape() == b.shape())) throw StructuralError("grid shapes differ: " + a.shape().str() + " vs " + b.shape().str());
}
}  // namespace

GridVector operator+(const GridVector& a, const GridVector& b) {
  same_shape(a, b);
  return GridVector(a.shape_, add(a.entries_, b.entries_));
}
GridVector operator-(const GridVector& a, const GridVector& b) {
  same_shape(a, b);
  return GridVector(a.shape_, sub(a.entries_, b.entries_));
}
GridVector operator*(const Rational& r, const GridVector& a) { return GridVector(a.shape_, scale(r, a.entries_)); }
GridVector meet(const GridVector& a, const GridVector& b) {
  same_shape(a, b);
  return GridVector(a.shape_, meet(a.entries_, b.entries_));
}
GridVector join(const GridVector& a, const GridVector& b) {
  same_shape(a, b);
  return GridVector(a.shape_, join(a.entries_, b.entries_));
}
GridVector abs(const GridVector& a) { return GridVector(a.shape_, abs(a.entries_)); }

}  // namespace fbl
