#pragma once

#include <string>
#include <vector>

#include "vclose/action.hpp"
#include "vclose/words.hpp"

namespace vclose {

/// prod_chi v_chi(x, (prod_i y_{chi,i}^2)^{|T(Q)|})^{e_chi} = a^{rhs_exponent}.
struct Equation {
  SLWord lhs;
  std::string rhs_generator = "a";
  Integer rhs_exponent;

  std::size_t c_rank = 0;
  Integer torsion_order{1};
  std::size_t squares = 1;  // n: squares per character block
  Integer filler{0};
  /// k_chi per character in enumeration order; 0 marks a zero component.
  std::vector<Integer> contents;

  /// Exponent actually applied to the chi block.
  Integer exponent(std::size_t character_index) const {
    return contents.at(character_index) == 0 ? filler : contents.at(character_index);
  }
};

struct WitnessOptions {
  std::size_t squares = 1;
  Integer filler{0};
  std::string rhs_generator = "a";
};

/// "y<character index>_<i>" (i is 1-based).
std::string y_variable(std::size_t character_index, std::size_t i);

/// Builds the witness equation from a non-simple report. Throws NotAWitness
/// for a simple report and InvalidArgument for squares == 0 or filler = +-1.
Equation build_witness_equation(const SimplicityReport& report, const Integer& torsion_order, std::size_t c_rank,
                                const WitnessOptions& options);

/// Same as above, from raw contents (used for hand-built and perturbed equations).
Equation build_witness_equation(std::span<const Integer> contents, const Integer& torsion_order,
                                std::size_t c_rank, const WitnessOptions& options);

/// 2 * 2^{|C|} * |T(Q)|.
Integer witness_rhs_exponent(std::size_t c_rank, const Integer& torsion_order);

/// Deterministic S-expression with explicit node sharing.
std::string serialize(const Equation& eq);
std::string serialize(const SLWord& w);
Equation parse_equation(const std::string& text);

}  // namespace vclose
