#pragma once

// Exact integer and rational linear algebra: dense matrices over GMP numbers,
// Smith normal form, finitely generated abelian groups and lattices in Q^d.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace vclose {

using Integer = mpz_class;
using Rational = mpq_class;
using IntegerVector = std::vector<Integer>;
using RationalVector = std::vector<Rational>;

/// Dense row-major matrix. Vectors are treated as columns when multiplied on
/// the right.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<long>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols);
  static Matrix from_columns(const std::vector<std::vector<T>>& columns, std::size_t rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  std::vector<T> row(std::size_t r) const;
  std::vector<T> column(std::size_t c) const;
  Matrix transpose() const;
  bool is_zero() const;

  void swap_rows(std::size_t a, std::size_t b);
  void swap_cols(std::size_t a, std::size_t b);
  // row[dst] += factor * row[src]
  void add_row_multiple(std::size_t dst, std::size_t src, const T& factor);
  void add_col_multiple(std::size_t dst, std::size_t src, const T& factor);
  void negate_row(std::size_t r);

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

  std::string to_string() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> entries_;
};

using IntegerMatrix = Matrix<Integer>;
using RationalMatrix = Matrix<Rational>;

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b);
template <class T>
Matrix<T> operator+(const Matrix<T>& a, const Matrix<T>& b);
template <class T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b);
template <class T>
std::vector<T> operator*(const Matrix<T>& a, const std::vector<T>& v);

RationalMatrix to_rational(const IntegerMatrix& m);
RationalVector to_rational(const IntegerVector& v);

/// Determinant by fraction-free (Bareiss) elimination.
Integer determinant(const IntegerMatrix& m);

/// U * M * V = D with U, V unimodular, D diagonal, d_1 | d_2 | ... and d_i >= 0.
/// The inverses of U and V are carried along because callers need both.
struct SmithForm {
  IntegerMatrix u;
  IntegerMatrix d;
  IntegerMatrix v;
  IntegerMatrix u_inverse;
  IntegerMatrix v_inverse;
  std::size_t rank = 0;

  /// min(rows, cols) diagonal entries of d.
  IntegerVector diagonal() const;
};

SmithForm smith_normal_form(const IntegerMatrix& m);

/// Integer kernel {x : M x = 0}, returned as the columns of a matrix. The
/// kernel lattice is saturated (primitive) in Z^cols.
IntegerMatrix integer_kernel(const IntegerMatrix& m);

struct TorsionData {
  Integer torsion_order{1};
  IntegerVector invariant_factors;  // diagonal entries > 1, in divisibility order
  std::size_t free_rank = 0;
};

/// Z^rank_ambient modulo the row span of `relations`.
class AbelianPresentation {
 public:
  AbelianPresentation() : AbelianPresentation(0) {}
  explicit AbelianPresentation(std::size_t rank_ambient);
  AbelianPresentation(std::size_t rank_ambient, IntegerMatrix relations);

  std::size_t rank_ambient() const noexcept { return rank_ambient_; }
  const IntegerMatrix& relations() const noexcept { return relations_; }
  const IntegerVector& snf_diagonal() const noexcept { return diagonal_; }
  const Integer& torsion_order() const noexcept { return torsion_.torsion_order; }
  std::size_t free_rank() const noexcept { return torsion_.free_rank; }
  const TorsionData& torsion() const noexcept { return torsion_; }

  /// f x n matrix sending ambient coordinates to the image of q in Z^f = Q/T(Q).
  const IntegerMatrix& free_projection() const noexcept { return free_projection_; }
  /// n x f matrix with free_projection * free_section = I.
  const IntegerMatrix& free_section() const noexcept { return free_section_; }

  IntegerVector to_free(const IntegerVector& q) const;
  IntegerVector lift_free(const IntegerVector& x) const;

  /// Normal form of q in the Smith basis: torsion coordinates reduced into [0, d_i).
  IntegerVector canonical(const IntegerVector& q) const;
  bool equal(const IntegerVector& p, const IntegerVector& q) const;
  bool is_zero(const IntegerVector& q) const;
  /// Whether v lies in the relation lattice.
  bool is_relation(const IntegerVector& v) const;

  /// Ambient coordinates -> Smith coordinates (V^T) and back.
  const IntegerMatrix& to_smith() const noexcept { return smith_v_t_; }
  const IntegerMatrix& from_smith() const noexcept { return smith_v_inv_t_; }
  /// Reduces Smith coordinates in place into canonical form.
  void reduce_smith(IntegerVector& y) const;

 private:
  std::size_t rank_ambient_;
  IntegerMatrix relations_;
  IntegerVector diagonal_;   // length rank_ambient, zeros for free coordinates
  IntegerMatrix smith_v_t_;  // V^T: q -> Smith coordinates
  IntegerMatrix smith_v_inv_t_;
  IntegerMatrix free_projection_;
  IntegerMatrix free_section_;
  TorsionData torsion_;
};

TorsionData torsion_data(const AbelianPresentation& p);

/// A Z-basis of a subgroup of Q^dimension.
class Lattice {
 public:
  explicit Lattice(std::size_t dimension = 0) : dimension_(dimension) {}
  /// Throws InvalidArgument if the basis is not linearly independent.
  Lattice(std::size_t dimension, std::vector<RationalVector> basis);

  /// The lattice generated by an arbitrary (possibly dependent) family.
  static Lattice generated_by(std::size_t dimension, std::span<const RationalVector> generators);
  static Lattice standard(std::size_t dimension);

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t rank() const noexcept { return basis_.size(); }
  const std::vector<RationalVector>& basis() const noexcept { return basis_; }

  RationalVector combine(std::span<const Integer> coefficients) const;

 private:
  std::size_t dimension_;
  std::vector<RationalVector> basis_;
};

/// Integer c with sum c_i g_i = v, for an arbitrary generating family g.
std::optional<IntegerVector> solve_integer_combination(std::span<const RationalVector> generators,
                                                       const RationalVector& v);

std::optional<IntegerVector> membership_solve(const Lattice& lattice, const RationalVector& v);

struct ContentDecomposition {
  Integer content;            // k >= 0
  RationalVector primitive;   // u, with v = k u
  IntegerVector coordinates;  // coordinates of u in the lattice basis
};

/// v = k u with u primitive in the lattice (k = 0, u = 0 for v = 0).
/// Throws NotInLattice when v is not an integral combination of the basis.
ContentDecomposition content_and_primitive_part(const RationalVector& v, const Lattice& lattice);

/// Unimodular matrix whose first row is the primitive integer vector c.
IntegerMatrix extend_to_unimodular(const IntegerVector& c);

/// Inverse of a square integer matrix with determinant +-1.
IntegerMatrix unimodular_inverse(const IntegerMatrix& m);

Integer gcd_of(std::span<const Integer> values);
bool is_zero(std::span<const Rational> v);
bool is_zero(std::span<const Integer> v);
std::string to_string(std::span<const Integer> v);
std::string to_string(std::span<const Rational> v);

}  // namespace vclose
