#include "vclose/lattice.hpp"

#include <algorithm>
#include <sstream>

#include "vclose/error.hpp"

namespace vclose {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NotInLattice: return "NotInLattice";
    case ErrorCode::InvalidModule: return "InvalidModule";
    case ErrorCode::NotEpimorphism: return "NotEpimorphism";
    case ErrorCode::NotDecomposable: return "NotDecomposable";
    case ErrorCode::NotSimple: return "NotSimple";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::UnboundGenerator: return "UnboundGenerator";
    case ErrorCode::NotAWitness: return "NotAWitness";
    case ErrorCode::InvalidEquation: return "InvalidEquation";
    case ErrorCode::NotAnInvolution: return "NotAnInvolution";
    case ErrorCode::NotInfiniteOrder: return "NotInfiniteOrder";
    case ErrorCode::NotInverted: return "NotInverted";
    case ErrorCode::NotInQ: return "NotInQ";
    case ErrorCode::NoSquareRoot: return "NoSquareRoot";
    case ErrorCode::NormalizationFailure: return "NormalizationFailure";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Matrix

template <class T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<long>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  entries_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorCode::InvalidArgument, "ragged matrix literal");
    for (long x : r) entries_.emplace_back(x);
  }
}

template <class T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

template <class T>
Matrix<T> Matrix<T>::from_rows(const std::vector<std::vector<T>>& rows, std::size_t cols) {
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw Error(ErrorCode::InvalidArgument, "row length mismatch");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

template <class T>
Matrix<T> Matrix<T>::from_columns(const std::vector<std::vector<T>>& columns, std::size_t rows) {
  Matrix m(rows, columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].size() != rows) throw Error(ErrorCode::InvalidArgument, "column length mismatch");
    for (std::size_t r = 0; r < rows; ++r) m(r, c) = columns[c][r];
  }
  return m;
}

template <class T>
std::vector<T> Matrix<T>::row(std::size_t r) const {
  return std::vector<T>(entries_.begin() + r * cols_, entries_.begin() + (r + 1) * cols_);
}

template <class T>
std::vector<T> Matrix<T>::column(std::size_t c) const {
  std::vector<T> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

template <class T>
Matrix<T> Matrix<T>::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

template <class T>
bool Matrix<T>::is_zero() const {
  return std::all_of(entries_.begin(), entries_.end(), [](const T& x) { return x == 0; });
}

template <class T>
void Matrix<T>::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(a, c), (*this)(b, c));
}

template <class T>
void Matrix<T>::swap_cols(std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t r = 0; r < rows_; ++r) std::swap((*this)(r, a), (*this)(r, b));
}

template <class T>
void Matrix<T>::add_row_multiple(std::size_t dst, std::size_t src, const T& factor) {
  if (factor == 0) return;
  for (std::size_t c = 0; c < cols_; ++c) (*this)(dst, c) += factor * (*this)(src, c);
}

template <class T>
void Matrix<T>::add_col_multiple(std::size_t dst, std::size_t src, const T& factor) {
  if (factor == 0) return;
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, dst) += factor * (*this)(r, src);
}

template <class T>
void Matrix<T>::negate_row(std::size_t r) {
  for (std::size_t c = 0; c < cols_; ++c) (*this)(r, c) = -(*this)(r, c);
}

template <class T>
std::string Matrix<T>::to_string() const {
  std::ostringstream out;
  out << '[';
  for (std::size_t r = 0; r < rows_; ++r) {
    out << (r ? "; " : "");
    for (std::size_t c = 0; c < cols_; ++c) out << (c ? " " : "") << (*this)(r, c);
  }
  out << ']';
  return out.str();
}

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw Error(ErrorCode::InvalidArgument, "matrix shape mismatch in product");
  Matrix<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

template <class T>
Matrix<T> operator+(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::InvalidArgument, "matrix shape mismatch in sum");
  Matrix<T> out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

template <class T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::InvalidArgument, "matrix shape mismatch in difference");
  Matrix<T> out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

template <class T>
std::vector<T> operator*(const Matrix<T>& a, const std::vector<T>& v) {
  if (a.cols() != v.size()) throw Error(ErrorCode::InvalidArgument, "matrix/vector shape mismatch");
  std::vector<T> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (v[k] != 0) out[i] += a(i, k) * v[k];
  return out;
}

template class Matrix<Integer>;
template class Matrix<Rational>;
template IntegerMatrix operator*(const IntegerMatrix&, const IntegerMatrix&);
template RationalMatrix operator*(const RationalMatrix&, const RationalMatrix&);
template IntegerMatrix operator+(const IntegerMatrix&, const IntegerMatrix&);
template RationalMatrix operator+(const RationalMatrix&, const RationalMatrix&);
template IntegerMatrix operator-(const IntegerMatrix&, const IntegerMatrix&);
template RationalMatrix operator-(const RationalMatrix&, const RationalMatrix&);
template IntegerVector operator*(const IntegerMatrix&, const IntegerVector&);
template RationalVector operator*(const RationalMatrix&, const RationalVector&);

RationalMatrix to_rational(const IntegerMatrix& m) {
  RationalMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
  return out;
}

RationalVector to_rational(const IntegerVector& v) {
  RationalVector out;
  out.reserve(v.size());
  for (const auto& x : v) out.emplace_back(x);
  return out;
}

Integer determinant(const IntegerMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidArgument, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntegerMatrix a = m;
  Integer sign = 1;
  Integer previous = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && a(p, k) == 0) ++p;
      if (p == n) return 0;
      a.swap_rows(k, p);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) {
        Integer t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), previous.get_mpz_t());
        a(i, j) = t;
      }
    previous = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

// ---------------------------------------------------------------------------
// Smith normal form

namespace {

struct SmithWork {
  IntegerMatrix a, u, v, u_inv, v_inv;

  // Row and column operations on `a`, mirrored into the transforms.
  void row_add(std::size_t dst, std::size_t src, const Integer& f) {
    a.add_row_multiple(dst, src, f);
    u.add_row_multiple(dst, src, f);
    u_inv.add_col_multiple(src, dst, -f);
  }
  void col_add(std::size_t dst, std::size_t src, const Integer& f) {
    a.add_col_multiple(dst, src, f);
    v.add_col_multiple(dst, src, f);
    v_inv.add_row_multiple(src, dst, -f);
  }
  void row_swap(std::size_t i, std::size_t j) {
    a.swap_rows(i, j);
    u.swap_rows(i, j);
    u_inv.swap_cols(i, j);
  }
  void col_swap(std::size_t i, std::size_t j) {
    a.swap_cols(i, j);
    v.swap_cols(i, j);
    v_inv.swap_rows(i, j);
  }
  void row_negate(std::size_t i) {
    a.negate_row(i);
    u.negate_row(i);
    for (std::size_t r = 0; r < u_inv.rows(); ++r) u_inv(r, i) = -u_inv(r, i);
  }
};

}  // namespace

SmithForm smith_normal_form(const IntegerMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  SmithWork w{m, IntegerMatrix::identity(rows), IntegerMatrix::identity(cols), IntegerMatrix::identity(rows),
              IntegerMatrix::identity(cols)};
  IntegerMatrix& a = w.a;

  std::size_t t = 0;
  for (; t < std::min(rows, cols); ++t) {
    // Smallest nonzero |entry| in the trailing block becomes the pivot.
    bool found = false;
    std::size_t pr = t, pc = t;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (a(i, j) != 0 && (!found || abs(a(i, j)) < abs(a(pr, pc)))) {
          found = true;
          pr = i;
          pc = j;
        }
    if (!found) break;
    w.row_swap(t, pr);
    w.col_swap(t, pc);

    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (a(i, t) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
        w.row_add(i, t, -q);
        if (a(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (a(t, j) == 0) continue;
        Integer q;
        mpz_tdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
        w.col_add(j, t, -q);
        if (a(t, j) != 0) clean = false;
      }
      if (!clean) {
        // A remainder is now smaller than the pivot; move it into place.
        std::size_t best_r = t, best_c = t;
        for (std::size_t i = t + 1; i < rows; ++i)
          if (a(i, t) != 0 && abs(a(i, t)) < abs(a(best_r, best_c))) best_r = i, best_c = t;
        for (std::size_t j = t + 1; j < cols; ++j)
          if (a(t, j) != 0 && abs(a(t, j)) < abs(a(best_r, best_c))) best_r = t, best_c = j;
        w.row_swap(t, best_r);
        w.col_swap(t, best_c);
        continue;
      }
      // Row and column are clear; enforce the divisibility chain.
      bool divides = true;
      for (std::size_t i = t + 1; i < rows && divides; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (!mpz_divisible_p(a(i, j).get_mpz_t(), a(t, t).get_mpz_t())) {
            w.row_add(t, i, 1);
            divides = false;
            break;
          }
      if (divides) break;
    }
    if (a(t, t) < 0) w.row_negate(t);
  }

  SmithForm out;
  out.rank = t;
  out.d = std::move(w.a);
  out.u = std::move(w.u);
  out.v = std::move(w.v);
  out.u_inverse = std::move(w.u_inv);
  out.v_inverse = std::move(w.v_inv);
  return out;
}

IntegerVector SmithForm::diagonal() const {
  IntegerVector out;
  for (std::size_t i = 0; i < std::min(d.rows(), d.cols()); ++i) out.push_back(d(i, i));
  return out;
}

IntegerMatrix integer_kernel(const IntegerMatrix& m) {
  SmithForm s = smith_normal_form(m);
  IntegerMatrix k(m.cols(), m.cols() - s.rank);
  for (std::size_t j = s.rank; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.cols(); ++i) k(i, j - s.rank) = s.v(i, j);
  return k;
}

// ---------------------------------------------------------------------------
// Finitely generated abelian groups

AbelianPresentation::AbelianPresentation(std::size_t rank_ambient)
    : AbelianPresentation(rank_ambient, IntegerMatrix(0, rank_ambient)) {}

AbelianPresentation::AbelianPresentation(std::size_t rank_ambient, IntegerMatrix relations)
    : rank_ambient_(rank_ambient), relations_(std::move(relations)) {
  if (relations_.cols() != rank_ambient_)
    throw Error(ErrorCode::InvalidArgument, "relation matrix is not conformal with the ambient rank");
  SmithForm s = smith_normal_form(relations_);
  const std::size_t n = rank_ambient_;
  const std::size_t r = s.rank;

  diagonal_.assign(n, 0);
  for (std::size_t i = 0; i < r; ++i) diagonal_[i] = s.d(i, i);
  smith_v_t_ = s.v.transpose();
  smith_v_inv_t_ = s.v_inverse.transpose();

  free_projection_ = IntegerMatrix(n - r, n);
  free_section_ = IntegerMatrix(n, n - r);
  for (std::size_t i = r; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      free_projection_(i - r, j) = s.v(j, i);
      free_section_(j, i - r) = s.v_inverse(i, j);
    }

  torsion_.free_rank = n - r;
  torsion_.torsion_order = 1;
  for (std::size_t i = 0; i < r; ++i) {
    torsion_.torsion_order *= diagonal_[i];
    if (diagonal_[i] > 1) torsion_.invariant_factors.push_back(diagonal_[i]);
  }
}

IntegerVector AbelianPresentation::to_free(const IntegerVector& q) const { return free_projection_ * q; }

IntegerVector AbelianPresentation::lift_free(const IntegerVector& x) const { return free_section_ * x; }

IntegerVector AbelianPresentation::canonical(const IntegerVector& q) const {
  if (q.size() != rank_ambient_) throw Error(ErrorCode::InvalidArgument, "vector length does not match module rank");
  IntegerVector y = smith_v_t_ * q;
  reduce_smith(y);
  return y;
}

void AbelianPresentation::reduce_smith(IntegerVector& y) const {
  for (std::size_t i = 0; i < rank_ambient_; ++i)
    if (diagonal_[i] != 0) mpz_fdiv_r(y[i].get_mpz_t(), y[i].get_mpz_t(), diagonal_[i].get_mpz_t());
}

bool AbelianPresentation::equal(const IntegerVector& p, const IntegerVector& q) const {
  IntegerVector d(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) d[i] = p[i] - q[i];
  return is_zero(d);
}

bool AbelianPresentation::is_zero(const IntegerVector& q) const {
  const IntegerVector c = canonical(q);
  return vclose::is_zero(std::span<const Integer>(c));
}

bool AbelianPresentation::is_relation(const IntegerVector& v) const { return is_zero(v); }

TorsionData torsion_data(const AbelianPresentation& p) { return p.torsion(); }

// ---------------------------------------------------------------------------
// Lattices

namespace {

Integer common_denominator(std::span<const RationalVector> vectors, const RationalVector* extra) {
  Integer n = 1;
  auto absorb = [&](const RationalVector& v) {
    for (const auto& x : v) mpz_lcm(n.get_mpz_t(), n.get_mpz_t(), x.get_den_mpz_t());
  };
  for (const auto& v : vectors) absorb(v);
  if (extra) absorb(*extra);
  return n;
}

IntegerVector scaled(const RationalVector& v, const Integer& n) {
  IntegerVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    Rational x = v[i] * n;
    out[i] = x.get_num();
  }
  return out;
}

IntegerMatrix scaled_rows(std::span<const RationalVector> rows, std::size_t dim, const Integer& n) {
  IntegerMatrix m(rows.size(), dim);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != dim) throw Error(ErrorCode::InvalidArgument, "vector dimension mismatch");
    IntegerVector s = scaled(rows[r], n);
    for (std::size_t c = 0; c < dim; ++c) m(r, c) = s[c];
  }
  return m;
}

}  // namespace

Lattice::Lattice(std::size_t dimension, std::vector<RationalVector> basis)
    : dimension_(dimension), basis_(std::move(basis)) {
  Integer n = common_denominator(basis_, nullptr);
  SmithForm s = smith_normal_form(scaled_rows(basis_, dimension_, n));
  if (s.rank != basis_.size()) throw Error(ErrorCode::InvalidArgument, "lattice basis is linearly dependent");
}

Lattice Lattice::generated_by(std::size_t dimension, std::span<const RationalVector> generators) {
  Integer n = common_denominator(generators, nullptr);
  SmithForm s = smith_normal_form(scaled_rows(generators, dimension, n));
  Lattice out(dimension);
  for (std::size_t i = 0; i < s.rank; ++i) {
    RationalVector b(dimension);
    for (std::size_t j = 0; j < dimension; ++j) {
      b[j] = Rational(s.d(i, i) * s.v_inverse(i, j), n);
      b[j].canonicalize();
    }
    out.basis_.push_back(std::move(b));
  }
  return out;
}

Lattice Lattice::standard(std::size_t dimension) {
  std::vector<RationalVector> basis(dimension, RationalVector(dimension));
  for (std::size_t i = 0; i < dimension; ++i) basis[i][i] = 1;
  return Lattice(dimension, std::move(basis));
}

RationalVector Lattice::combine(std::span<const Integer> coefficients) const {
  if (coefficients.size() != basis_.size()) throw Error(ErrorCode::InvalidArgument, "coefficient count mismatch");
  RationalVector out(dimension_);
  for (std::size_t i = 0; i < basis_.size(); ++i)
    for (std::size_t j = 0; j < dimension_; ++j) out[j] += coefficients[i] * basis_[i][j];
  return out;
}

std::optional<IntegerVector> solve_integer_combination(std::span<const RationalVector> generators,
                                                       const RationalVector& v) {
  const std::size_t dim = v.size();
  const Integer n = common_denominator(generators, &v);
  const IntegerMatrix g = scaled_rows(generators, dim, n);
  const IntegerVector target = scaled(v, n);

  // c G = v  <=>  (c U^-1) D = v V.
  SmithForm s = smith_normal_form(g);
  IntegerVector w(dim);
  for (std::size_t j = 0; j < dim; ++j)
    for (std::size_t i = 0; i < dim; ++i)
      if (target[i] != 0) w[j] += target[i] * s.v(i, j);

  IntegerVector z(generators.size());
  for (std::size_t j = 0; j < dim; ++j) {
    if (j < s.rank) {
      if (!mpz_divisible_p(w[j].get_mpz_t(), s.d(j, j).get_mpz_t())) return std::nullopt;
      mpz_divexact(z[j].get_mpz_t(), w[j].get_mpz_t(), s.d(j, j).get_mpz_t());
    } else if (w[j] != 0) {
      return std::nullopt;
    }
  }
  IntegerVector c(generators.size());
  for (std::size_t j = 0; j < generators.size(); ++j)
    for (std::size_t i = 0; i < generators.size(); ++i)
      if (z[i] != 0) c[j] += z[i] * s.u(i, j);
  return c;
}

std::optional<IntegerVector> membership_solve(const Lattice& lattice, const RationalVector& v) {
  if (v.size() != lattice.dimension()) throw Error(ErrorCode::InvalidArgument, "vector dimension mismatch");
  return solve_integer_combination(lattice.basis(), v);
}

ContentDecomposition content_and_primitive_part(const RationalVector& v, const Lattice& lattice) {
  auto coords = membership_solve(lattice, v);
  if (!coords) throw Error(ErrorCode::NotInLattice, to_string(std::span(v)) + " is not in the lattice");
  ContentDecomposition out;
  out.content = gcd_of(*coords);
  if (out.content == 0) {
    out.primitive.assign(v.size(), Rational(0));
    out.coordinates.assign(coords->size(), Integer(0));
    return out;
  }
  out.coordinates = *coords;
  for (auto& c : out.coordinates) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), out.content.get_mpz_t());
  out.primitive = lattice.combine(out.coordinates);
  return out;
}

IntegerMatrix extend_to_unimodular(const IntegerVector& c) {
  IntegerMatrix row(1, c.size());
  for (std::size_t j = 0; j < c.size(); ++j) row(0, j) = c[j];
  SmithForm s = smith_normal_form(row);
  if (s.rank != 1 || s.d(0, 0) != 1) throw Error(ErrorCode::InvalidArgument, "vector is not primitive");
  // c = u^-1 * e_1 * V^-1 with u = +-1.
  IntegerMatrix out = s.v_inverse;
  if (s.u(0, 0) < 0) out.negate_row(0);
  return out;
}

IntegerMatrix unimodular_inverse(const IntegerMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidArgument, "inverse of non-square matrix");
  SmithForm s = smith_normal_form(m);
  for (std::size_t i = 0; i < m.rows(); ++i)
    if (i >= s.rank || s.d(i, i) != 1) throw Error(ErrorCode::InvalidArgument, "matrix is not unimodular");
  // m = U^-1 V^-1 when D = I.
  return s.v * s.u;
}

Integer gcd_of(std::span<const Integer> values) {
  Integer g = 0;
  for (const auto& x : values) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  return g;
}

bool is_zero(std::span<const Rational> v) {
  return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

bool is_zero(std::span<const Integer> v) {
  return std::all_of(v.begin(), v.end(), [](const Integer& x) { return x == 0; });
}

std::string to_string(std::span<const Integer> v) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << ')';
  return out.str();
}

std::string to_string(std::span<const Rational> v) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? ", " : "") << v[i];
  out << ')';
  return out.str();
}

}  // namespace vclose
