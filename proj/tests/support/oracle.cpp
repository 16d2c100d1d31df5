#include "oracle.hpp"

namespace oracle {

Integer cofactor_determinant(const IntegerMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  if (n == 1) return m(0, 0);
  Integer det = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (m(0, c) == 0) continue;
    IntegerMatrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t k = 0, j = 0; k < n; ++k)
        if (k != c) minor(r - 1, j++) = m(r, k);
    const Integer term = m(0, c) * cofactor_determinant(minor);
    det += (c % 2 == 0) ? term : Integer(-term);
  }
  return det;
}

IntegerMatrix multiply(const IntegerMatrix& a, const IntegerMatrix& b) {
  IntegerMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j)
      for (std::size_t k = 0; k < a.cols(); ++k) out(i, j) += a(i, k) * b(k, j);
  return out;
}

std::string check_smith(const IntegerMatrix& m, const IntegerMatrix& u, const IntegerMatrix& d,
                        const IntegerMatrix& v) {
  if (u.rows() != m.rows() || u.cols() != m.rows()) return "U has the wrong shape";
  if (v.rows() != m.cols() || v.cols() != m.cols()) return "V has the wrong shape";
  if (abs(cofactor_determinant(u)) != 1) return "U is not unimodular";
  if (abs(cofactor_determinant(v)) != 1) return "V is not unimodular";
  const IntegerMatrix umv = multiply(multiply(u, m), v);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (umv(i, j) != d(i, j)) return "U M V != D";
      if (i != j && d(i, j) != 0) return "D is not diagonal";
    }
  const std::size_t k = std::min(m.rows(), m.cols());
  for (std::size_t i = 0; i < k; ++i) {
    if (d(i, i) < 0) return "negative diagonal entry";
    if (i + 1 < k) {
      if (d(i, i) == 0 && d(i + 1, i + 1) != 0) return "zero before a nonzero diagonal entry";
      if (d(i, i) != 0 && d(i + 1, i + 1) % d(i, i) != 0) return "divisibility chain broken";
    }
  }
  return {};
}

RationalVector project_by_average(const vclose::InvolutionModule& module, const IntegerVector& q,
                                  const vclose::Character& chi) {
  const IntegerVector v = module.group().to_free(q);
  const std::size_t f = v.size();
  RationalVector sum(f);
  for (vclose::GroupMask c = 0; c < module.c_order(); ++c) {
    const IntegerMatrix a = module.free_action_of(c);
    for (std::size_t i = 0; i < f; ++i) {
      Integer row = 0;
      for (std::size_t j = 0; j < f; ++j) row += a(i, j) * v[j];
      sum[i] += chi(c) * Rational(row);
    }
  }
  for (auto& x : sum) x /= Rational(Integer(module.c_order()));
  return sum;
}

bool swap_simple(long x, long y) { return std::abs(x + y) == 1 || std::abs(x - y) == 1; }

bool worked_family_retract(long p, long q) { return std::abs(p) == 1 || std::abs(q) == 1; }

Affine affine_a(const Integer& k) { return Affine{1, k}; }
Affine affine_b() { return Affine{-1, 0}; }
Affine compose(const Affine& f, const Affine& g) { return Affine{f.s * g.s, f.s * g.t + f.t}; }
Affine affine_inverse(const Affine& f) { return Affine{f.s, -(f.s * f.t)}; }

namespace {

void expand(const vclose::SLWord& w, int sign, vclose::FlatWord& out) {
  using vclose::WordKind;
  switch (w.kind()) {
    case WordKind::Generator:
      out.push_back({w.name(), sign});
      break;
    case WordKind::Inverse:
      expand(w.children()[0], -sign, out);
      break;
    case WordKind::Concat:
      if (sign > 0)
        for (const auto& c : w.children()) expand(c, 1, out);
      else
        for (auto it = w.children().rbegin(); it != w.children().rend(); ++it) expand(*it, -1, out);
      break;
    case WordKind::Power: {
      const int s = w.exponent() < 0 ? -sign : sign;
      for (Integer i = 0; i < abs(w.exponent()); ++i) expand(w.children()[0], s, out);
      break;
    }
  }
}

}  // namespace

vclose::FlatWord flatten_and_reduce(const vclose::SLWord& w) {
  vclose::FlatWord letters;
  expand(w, 1, letters);
  vclose::FlatWord stack;
  for (const auto& l : letters) {
    if (!stack.empty() && stack.back().generator == l.generator && stack.back().sign == -l.sign)
      stack.pop_back();
    else
      stack.push_back(l);
  }
  return stack;
}

}  // namespace oracle
