#pragma once

// Modules over a finite elementary abelian 2-group C = (Z/2)^m acting on a
// finitely generated abelian group Q: characters, rational eigenprojections,
// eigenlattices, the simple-element test and invariant complements.

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "vclose/lattice.hpp"

namespace vclose {

/// Elements of C are bit masks over the m generators; generator j (0-based)
/// is bit (m - 1 - j), so numeric order is lexicographic order of epsilon-tuples.
using GroupMask = std::uint64_t;

inline bool mask_bit(GroupMask mask, std::size_t j, std::size_t m) { return (mask >> (m - 1 - j)) & 1u; }
inline GroupMask unit_mask(std::size_t j, std::size_t m) { return GroupMask{1} << (m - 1 - j); }

/// A homomorphism C -> {+1, -1}, given by its values on the generators.
class Character {
 public:
  Character() = default;
  explicit Character(std::vector<int> signs);
  static Character from_index(std::uint64_t index, std::size_t m);

  std::size_t rank() const noexcept { return signs_.size(); }
  const std::vector<int>& signs() const noexcept { return signs_; }
  int sign(std::size_t generator) const { return signs_.at(generator); }
  int operator()(GroupMask element) const;
  /// Position in enumerate_characters(m).
  std::uint64_t index() const;
  bool is_trivial() const;
  /// "+-++" style rendering.
  std::string to_string() const;

  friend bool operator==(const Character&, const Character&) = default;

 private:
  std::vector<int> signs_;
};

/// All 2^m characters, lexicographic on sign vectors with +1 < -1.
std::vector<Character> enumerate_characters(std::size_t m);

/// Q given by an abelian presentation together with commuting involutive
/// actions of the m generators of C (matrices on ambient coordinates).
class InvolutionModule {
 public:
  InvolutionModule() = default;
  /// Validates: each action is well defined on Q, squares to the identity
  /// on Q, and the actions commute on Q. Throws InvalidModule otherwise.
  InvolutionModule(AbelianPresentation group, std::vector<IntegerMatrix> actions);

  const AbelianPresentation& group() const noexcept { return group_; }
  const std::vector<IntegerMatrix>& actions() const noexcept { return actions_; }
  std::size_t c_rank() const noexcept { return actions_.size(); }
  /// |C| = 2^m.
  std::uint64_t c_order() const noexcept { return std::uint64_t{1} << c_rank(); }
  std::size_t ambient_rank() const noexcept { return group_.rank_ambient(); }
  std::size_t free_rank() const noexcept { return group_.free_rank(); }

  /// Ambient-coordinate matrix of the element `c` of C.
  IntegerMatrix action_of(GroupMask c) const;
  /// Induced action of generator j on Q/T(Q) = Z^f.
  const IntegerMatrix& free_action(std::size_t j) const { return free_actions_.at(j); }
  IntegerMatrix free_action_of(GroupMask c) const;

  IntegerVector apply(GroupMask c, const IntegerVector& q) const;

 private:
  AbelianPresentation group_;
  std::vector<IntegerMatrix> actions_;
  std::vector<IntegerMatrix> free_actions_;
};

/// prod_{c in C} (I + chi(c) A_c) acting on Q/T(Q), as an integer matrix.
IntegerMatrix character_product(const InvolutionModule& module, const Character& chi);

/// p_chi(1 (x) q) in free coordinates, computed as 2^{-|C|} prod (I + chi(c) A_c) q.
RationalVector project(const InvolutionModule& module, const IntegerVector& q, const Character& chi);

/// 2^{-|C|} prod_{c in C} (1 + chi(c) phi(c)) q for a module over C-hat, where
/// phi sends the generators of C to elements of C-hat. The target module must
/// be decomposable; phi must be onto.
RationalVector project_via_epimorphism(const InvolutionModule& target, std::span<const GroupMask> phi,
                                       const IntegerVector& q, const Character& chi);

/// Z-basis of p_chi(1 (x) Q).
Lattice eigenlattice(const InvolutionModule& module, const Character& chi);

/// The chi-eigenvectors of Q/T(Q): kernel of the stacked A_c - chi(c) I.
Lattice fixed_sublattice(const InvolutionModule& module, const Character& chi);

/// 1 (x) Q equals the direct sum of its chi-components.
bool is_decomposable(const InvolutionModule& module);

/// Sum over chi of prod (I + chi(c) A_c) q equals 2^{|C|} q modulo torsion.
bool verify_component_identity(const InvolutionModule& module, const IntegerVector& q);

struct CharacterComponent {
  Character character;
  RationalVector component;  // p_chi(1 (x) q)
  Integer content;           // k_chi >= 0
  RationalVector primitive;  // u_chi, component = k_chi u_chi
  IntegerVector lift;        // q(chi) in ambient coordinates, p_chi(1 (x) q(chi)) = u_chi
};

struct SimpleWitness {
  Character character;
  RationalVector primitive_direction;
};

struct NonSimpleWitness {
  // One entry per character in enumeration order; k_chi not in {+1, -1}.
  std::vector<Integer> contents;
  std::vector<IntegerVector> lifts;
};

struct SimplicityReport {
  std::vector<CharacterComponent> components;  // every character, enumeration order
  std::variant<SimpleWitness, NonSimpleWitness> payload;

  bool simple() const noexcept { return std::holds_alternative<SimpleWitness>(payload); }
  const SimpleWitness& witness() const { return std::get<SimpleWitness>(payload); }
  const NonSimpleWitness& non_simple() const { return std::get<NonSimpleWitness>(payload); }
};

SimplicityReport is_simple(const InvolutionModule& module, const IntegerVector& q);

/// Q = <q> (+) M with M a C-submodule containing T(Q).
struct Complement {
  Character character;
  IntegerVector q;
  /// Integer functional on ambient coordinates with kernel M and functional(q) = 1.
  IntegerVector functional;
  /// Generators of M in ambient coordinates (relations included).
  std::vector<IntegerVector> generators;
};

/// Throws NotSimple if the chi-component of q is not primitive.
Complement complement(const InvolutionModule& module, const IntegerVector& q, const Character& chi);

/// Checks Q = <q> (+) M and A_c M within M for a complement.
bool verify_complement(const InvolutionModule& module, const Complement& m);

}  // namespace vclose
