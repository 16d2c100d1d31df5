#pragma once

// Ambient groups G: direct products of D-infinity, Z and Z/k factors, with an
// embedded dihedral subgroup H = <h_b, h_a>. Extraction of Q = <g^2> and
// C = G/Q as an involution module, and the G-side solution of witness equations.

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "vclose/action.hpp"
#include "vclose/dihedral.hpp"
#include "vclose/equation.hpp"
#include "vclose/words.hpp"

namespace vclose {

enum class FactorKind { DInf, Zed, ZedMod };

struct Factor {
  FactorKind kind = FactorKind::DInf;
  Integer modulus{0};  // ZedMod only, >= 1

  static Factor dinf() { return {FactorKind::DInf, Integer(0)}; }
  static Factor zed() { return {FactorKind::Zed, Integer(0)}; }
  static Factor zed_mod(const Integer& k) { return {FactorKind::ZedMod, k}; }
  std::string to_string() const;
  friend bool operator==(const Factor&, const Factor&) = default;
};

/// Factors plus the words (over factor generators) for h_b and h_a.
/// Generators are numbered per kind: DInf i gives a_i, b_i; Zed i gives t_i;
/// ZedMod i gives c_i (all 1-based).
struct GroupSpec {
  std::vector<Factor> factors;
  std::string h_b;
  std::string h_a;
};

/// One coordinate per factor, stored as (k, e). For Zed factors e = 0; for
/// ZedMod factors k is reduced into [0, modulus).
struct AmbientElement {
  std::vector<DihedralElement> coordinates;
  friend bool operator==(const AmbientElement&, const AmbientElement&) = default;
};

class AmbientGroup {
 public:
  using Element = AmbientElement;
  explicit AmbientGroup(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const noexcept { return factors_; }

  Element identity() const;
  Element multiply(const Element& g, const Element& h) const;
  Element inverse(const Element& g) const;
  Element power(const Element& g, const Integer& n) const;

  /// Factor generators in canonical order (factor order, a before b).
  const std::vector<std::string>& generator_names() const noexcept { return names_; }
  /// Throws ParseError for an unknown name.
  Element generator(const std::string& name) const;
  bool has_generator(const std::string& name) const { return index_.count(name) != 0; }

  bool has_infinite_order(const Element& g) const;
  std::string to_string(const Element& g) const;

 private:
  std::vector<Factor> factors_;
  std::vector<std::string> names_;
  std::map<std::string, Element> index_;
};

/// term ('*' term)*, term = atom ['^' integer], atom = name | '1' | '(' word ')'.
/// Names are checked against the group's generators. Throws ParseError.
SLWord parse_word(const std::string& text, const AmbientGroup& group);

AmbientElement evaluate_in(const AmbientGroup& group, const SLWord& w);

struct SpecViolation {
  ErrorCode code;
  std::string message;
};

/// All violated hypotheses on H (empty when the spec is valid). Word syntax
/// errors are reported as ParseError entries.
std::vector<SpecViolation> spec_violations(const GroupSpec& spec);

/// Throws the first violation as an Error (message lists all of them).
void validate_spec(const GroupSpec& spec);

/// Q = <squares> in coordinates (one per factor: a_i^2, t_i^2, c_i^2) and
/// C = G/Q with coset representatives d_1..d_m.
class SquareData {
 public:
  SquareData() : group_({}) {}
  explicit SquareData(const GroupSpec& spec);

  const GroupSpec& spec() const noexcept { return spec_; }
  const AmbientGroup& group() const noexcept { return group_; }
  const InvolutionModule& module() const noexcept { return module_; }
  /// Names of d_1..d_m among the factor generators.
  const std::vector<std::string>& c_generators() const noexcept { return c_generators_; }
  std::size_t c_rank() const noexcept { return c_generators_.size(); }

  /// Coordinates of g in Q. Throws NotInQ.
  IntegerVector q_coordinates(const AmbientElement& g) const;
  /// The element of G with Q-coordinates q.
  AmbientElement q_element(const IntegerVector& q) const;
  /// Image of g in C as a mask over d_1..d_m.
  GroupMask c_coordinates(const AmbientElement& g) const;
  /// d_{j1} d_{j2} ... for the bits of `mask`, in increasing j.
  AmbientElement coset_representative(GroupMask mask) const;
  const AmbientElement& c_generator(std::size_t j) const { return c_elements_.at(j); }
  /// An element whose square is the i-th Q generator.
  AmbientElement square_root_of_generator(std::size_t i) const;

 private:
  std::vector<std::uint8_t> c_signature(const AmbientElement& g) const;

  GroupSpec spec_;
  AmbientGroup group_;
  InvolutionModule module_;
  std::vector<std::string> c_generators_;
  std::vector<AmbientElement> c_elements_;
  std::vector<std::size_t> c_offset_;  // first C-signature slot of each factor
  std::size_t c_dimension_ = 0;
  /// Row-reduced signatures of d_1..d_m with the combination of d's producing each row.
  std::vector<std::vector<std::uint8_t>> echelon_;
  std::vector<GroupMask> echelon_masks_;
  std::vector<std::size_t> pivots_;
};

SquareData square_data(const GroupSpec& spec);

/// Q-coordinates of h_a^2.
IntegerVector image_of_a_squared(const GroupSpec& spec, const SquareData& data);

using Assignment = std::map<std::string, AmbientElement>;

/// x_j -> d_j, y_{chi,i} -> elements with prod_i y_{chi,i}^2 = q(chi).
Assignment g_solution(const Equation& eq, const SquareData& data, const SimplicityReport& report);

/// LHS evaluated over G equals h_a^{rhs exponent}.
bool verify_solution_in_G(const Equation& eq, const Assignment& assignment, const GroupSpec& spec);

/// Uniform coordinates: |k| <= bound, random flips, random residues.
AmbientElement random_element(const AmbientGroup& group, long bound, std::mt19937_64& rng);

}  // namespace vclose
