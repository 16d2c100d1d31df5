#pragma once

// Random valid involution modules for property checks: direct sums of sign
// lines, swap planes and small torsion blocks, disguised by a random
// unimodular change of basis.

#include <optional>
#include <random>
#include <vector>

#include "vclose/action.hpp"
#include "vclose/error.hpp"

namespace vclose {

struct RandomModuleOptions {
  std::optional<std::size_t> c_rank;  // default: uniform in [0, max_c_rank]
  std::size_t max_c_rank = 2;
  std::size_t max_rank = 3;
  std::vector<int> torsion_orders{1, 2, 3, 4};
  /// Only sign lines (every eigenlattice is a coordinate sublattice before the basis change).
  bool decomposable = false;
  bool change_basis = true;
};

IntegerMatrix random_unimodular(std::size_t n, std::mt19937_64& rng, int steps = 6);

InvolutionModule random_module(std::mt19937_64& rng, const RandomModuleOptions& options = {});

/// Conjugates a module by a unimodular U: coordinates q -> U q.
InvolutionModule change_basis(const InvolutionModule& module, const IntegerMatrix& u);

IntegerVector random_vector(std::size_t n, long bound, std::mt19937_64& rng);

/// Images of the generators of a rank-`from` group onto a rank-`to` group, spanning.
std::vector<GroupMask> random_epimorphism(std::size_t from, std::size_t to, std::mt19937_64& rng);

/// The character chi-hat o phi of the source group.
Character pull_back(const Character& chi_hat, std::span<const GroupMask> phi);

}  // namespace vclose
