#include "vclose/generators.hpp"

#include <algorithm>

namespace vclose {

namespace {

std::size_t gf2_rank(std::vector<GroupMask> rows) {
  std::size_t rank = 0;
  for (int bit = 63; bit >= 0; --bit) {
    const GroupMask b = GroupMask{1} << bit;
    auto it = std::find_if(rows.begin() + static_cast<long>(rank), rows.end(), [&](GroupMask r) { return r & b; });
    if (it == rows.end()) continue;
    std::iter_swap(rows.begin() + static_cast<long>(rank), it);
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (i != rank && (rows[i] & b)) rows[i] ^= rows[rank];
    ++rank;
  }
  return rank;
}

}  // namespace

IntegerMatrix random_unimodular(std::size_t n, std::mt19937_64& rng, int steps) {
  IntegerMatrix u = IntegerMatrix::identity(n);
  if (n < 2) {
    if (n == 1 && std::bernoulli_distribution(0.5)(rng)) u(0, 0) = -1;
    return u;
  }
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::uniform_int_distribution<long> factor(-2, 2);
  for (int s = 0; s < steps; ++s) {
    const std::size_t i = pick(rng), j = pick(rng);
    if (i == j) continue;
    u.add_row_multiple(i, j, Integer(factor(rng)));
  }
  if (std::bernoulli_distribution(0.5)(rng)) u.swap_rows(0, n - 1);
  return u;
}

InvolutionModule change_basis(const InvolutionModule& module, const IntegerMatrix& u) {
  const IntegerMatrix u_inv = unimodular_inverse(u);
  const auto& rel = module.group().relations();
  IntegerMatrix relations = rel.rows() ? rel * u.transpose() : IntegerMatrix(0, u.rows());
  std::vector<IntegerMatrix> actions;
  for (const auto& a : module.actions()) actions.push_back(u * a * u_inv);
  AbelianPresentation q = rel.rows() ? AbelianPresentation(u.rows(), std::move(relations))
                                     : AbelianPresentation(u.rows());
  return InvolutionModule(std::move(q), std::move(actions));
}

InvolutionModule random_module(std::mt19937_64& rng, const RandomModuleOptions& options) {
  const std::size_t m =
      options.c_rank ? *options.c_rank : std::uniform_int_distribution<std::size_t>(0, options.max_c_rank)(rng);
  const int t = options.torsion_orders.at(
      std::uniform_int_distribution<std::size_t>(0, options.torsion_orders.size() - 1)(rng));

  // Blocks: kind 0 = sign line, 1 = swap plane, 2 = torsion Z/k.
  struct Block {
    int kind;
    int modulus;
  };
  std::vector<Block> blocks;
  std::size_t used = 0;
  if (t == 4 && options.max_rank >= 3 && std::bernoulli_distribution(0.5)(rng)) {
    blocks.push_back({2, 2});
    blocks.push_back({2, 2});
    used = 2;
  } else if (t > 1) {
    blocks.push_back({2, t});
    used = 1;
  }
  const std::size_t room = options.max_rank > used ? options.max_rank - used : 0;
  std::size_t free = room ? std::uniform_int_distribution<std::size_t>(1, room)(rng) : 0;
  while (free > 0) {
    if (!options.decomposable && free >= 2 && std::bernoulli_distribution(0.5)(rng)) {
      blocks.push_back({1, 0});
      free -= 2;
    } else {
      blocks.push_back({0, 0});
      free -= 1;
    }
  }
  std::shuffle(blocks.begin(), blocks.end(), rng);

  std::size_t n = 0;
  for (const auto& b : blocks) n += b.kind == 1 ? 2 : 1;
  std::vector<IntegerVector> relations;
  std::vector<IntegerMatrix> actions(m, IntegerMatrix(n, n));
  std::bernoulli_distribution coin(0.5);
  std::uniform_int_distribution<int> four(0, 3);
  std::size_t at = 0;
  for (const auto& b : blocks) {
    if (b.kind == 1) {
      for (auto& a : actions) {
        const int choice = four(rng);
        const long s = choice & 1 ? -1 : 1;
        if (choice < 2) {
          a(at, at) = s;
          a(at + 1, at + 1) = s;
        } else {
          a(at, at + 1) = s;
          a(at + 1, at) = s;
        }
      }
      at += 2;
      continue;
    }
    for (auto& a : actions) a(at, at) = coin(rng) ? -1 : 1;
    if (b.kind == 2) {
      IntegerVector row(n);
      row[at] = b.modulus;
      relations.push_back(std::move(row));
    }
    ++at;
  }
  AbelianPresentation q = relations.empty() ? AbelianPresentation(n)
                                            : AbelianPresentation(n, IntegerMatrix::from_rows(relations, n));
  InvolutionModule module(std::move(q), std::move(actions));
  if (!options.change_basis) return module;
  return change_basis(module, random_unimodular(n, rng));
}

IntegerVector random_vector(std::size_t n, long bound, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> d(-bound, bound);
  IntegerVector v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

std::vector<GroupMask> random_epimorphism(std::size_t from, std::size_t to, std::mt19937_64& rng) {
  if (to > from || to >= 63) throw Error(ErrorCode::InvalidArgument, "no epimorphism between these ranks");
  std::uniform_int_distribution<GroupMask> pick(0, (GroupMask{1} << to) - 1);
  for (;;) {
    std::vector<GroupMask> phi(from);
    for (auto& x : phi) x = pick(rng);
    if (gf2_rank(phi) == to) return phi;
  }
}

Character pull_back(const Character& chi_hat, std::span<const GroupMask> phi) {
  std::vector<int> signs;
  for (auto x : phi) signs.push_back(chi_hat(x));
  return Character(std::move(signs));
}

}  // namespace vclose
