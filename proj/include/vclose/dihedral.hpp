#pragma once

// The infinite dihedral group H = <b>_2 x| <a>, elements in the normal form
// a^k b^e, and the no-solution argument for witness equations over H.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vclose/action.hpp"
#include "vclose/equation.hpp"
#include "vclose/lattice.hpp"

namespace vclose {

struct DihedralElement {
  Integer translation;  // k
  bool flip = false;    // e

  static DihedralElement identity() { return {}; }
  static DihedralElement a(const Integer& k = 1) { return {k, false}; }
  static DihedralElement b() { return {Integer(0), true}; }
  /// b^e a^k rewritten as a^{(-1)^e k} b^e.
  static DihedralElement from_b_first(bool e, const Integer& k) { return {e ? Integer(-k) : k, e}; }

  bool is_identity() const { return !flip && translation == 0; }
  bool has_infinite_order() const { return !flip && translation != 0; }

  friend bool operator==(const DihedralElement&, const DihedralElement&) = default;
  std::string to_string() const;
};

class DihedralGroup {
 public:
  using Element = DihedralElement;
  Element identity() const { return {}; }
  Element multiply(const Element& g, const Element& h) const;
  Element inverse(const Element& g) const;
  Element power(const Element& g, const Integer& n) const;
};

inline DihedralElement multiply(const DihedralElement& g, const DihedralElement& h) {
  return DihedralGroup{}.multiply(g, h);
}

/// chi' with chi'(d_j) = (-1)^{delta_j}: the character C -> {+-1} through
/// which a substitution x_j = a^{k_j} b^{delta_j} acts on <a^2>.
Character character_of_substitution(std::span<const std::uint8_t> delta);
std::vector<std::uint8_t> delta_from_mask(GroupMask mask, std::size_t m);

/// v_chi(a^{k_1} b^{delta_1}, ..., a^{y_exponent}) for even y_exponent:
/// a^{y_exponent * 2^{|C|}} when chi matches the substitution, 1 otherwise.
DihedralElement evaluate_v_closed_form(const Character& chi, std::span<const std::uint8_t> delta,
                                       const Integer& y_exponent);

struct CertificateRow {
  GroupMask delta = 0;
  Character matched;         // chi'
  Integer exponent;          // exponent on the matched block (k_chi' or the filler)
  bool filler = false;
  Integer subgroup_generator;  // the LHS lies in <a^N> for every substitution
  Integer target;            // RHS exponent
  bool obstruction = false;  // target not in N * Z
};

struct NoSolutionCertificate {
  std::size_t c_rank = 0;
  std::vector<CertificateRow> rows;  // lexicographic in delta

  bool valid() const;
  /// Human-readable table: delta -> <a^N> -> obstruction.
  std::string table() const;
};

/// Throws InvalidEquation if the equation is not a canonical witness equation
/// or if some applied exponent is +-1.
NoSolutionCertificate certify_no_solution(const Equation& eq);

/// Randomized corroboration: evaluates the LHS over H for `trials` random
/// substitutions (|k|, |l| <= bound) and every delta in {0,1}^m. True iff the
/// RHS is never hit. Not a proof.
bool spot_check_no_solution(const Equation& eq, long bound, std::size_t trials, std::uint64_t seed = 1);

}  // namespace vclose
