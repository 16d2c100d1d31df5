#include "vclose/action.hpp"

#include <bit>

#include "vclose/error.hpp"

namespace vclose {

// ---------------------------------------------------------------------------
// Characters

Character::Character(std::vector<int> signs) : signs_(std::move(signs)) {
  for (int s : signs_)
    if (s != 1 && s != -1) throw Error(ErrorCode::InvalidArgument, "character values must be +1 or -1");
}

Character Character::from_index(std::uint64_t index, std::size_t m) {
  std::vector<int> signs(m);
  for (std::size_t j = 0; j < m; ++j) signs[j] = mask_bit(index, j, m) ? -1 : 1;
  return Character(std::move(signs));
}

int Character::operator()(GroupMask element) const {
  int value = 1;
  for (std::size_t j = 0; j < signs_.size(); ++j)
    if (mask_bit(element, j, signs_.size())) value *= signs_[j];
  return value;
}

std::uint64_t Character::index() const {
  std::uint64_t index = 0;
  for (std::size_t j = 0; j < signs_.size(); ++j)
    if (signs_[j] < 0) index |= unit_mask(j, signs_.size());
  return index;
}

bool Character::is_trivial() const {
  for (int s : signs_)
    if (s < 0) return false;
  return true;
}

std::string Character::to_string() const {
  if (signs_.empty()) return "1";
  std::string out;
  for (int s : signs_) out += s > 0 ? '+' : '-';
  return out;
}

std::vector<Character> enumerate_characters(std::size_t m) {
  if (m >= 63) throw Error(ErrorCode::InvalidArgument, "elementary abelian 2-group rank too large");
  std::vector<Character> out;
  out.reserve(std::size_t{1} << m);
  for (std::uint64_t i = 0; i < (std::uint64_t{1} << m); ++i) out.push_back(Character::from_index(i, m));
  return out;
}

// ---------------------------------------------------------------------------
// Modules

namespace {

bool columns_are_relations(const AbelianPresentation& group, const IntegerMatrix& m) {
  for (std::size_t c = 0; c < m.cols(); ++c)
    if (!group.is_relation(m.column(c))) return false;
  return true;
}

}  // namespace

InvolutionModule::InvolutionModule(AbelianPresentation group, std::vector<IntegerMatrix> actions)
    : group_(std::move(group)), actions_(std::move(actions)) {
  const std::size_t n = group_.rank_ambient();
  if (actions_.size() >= 20) throw Error(ErrorCode::InvalidModule, "too many involutions");
  const IntegerMatrix identity = IntegerMatrix::identity(n);
  const IntegerMatrix relations_t = group_.relations().transpose();
  for (std::size_t j = 0; j < actions_.size(); ++j) {
    const IntegerMatrix& a = actions_[j];
    if (a.rows() != n || a.cols() != n)
      throw Error(ErrorCode::InvalidModule, "action matrix " + std::to_string(j) + " has the wrong shape");
    if (!columns_are_relations(group_, a * relations_t))
      throw Error(ErrorCode::InvalidModule, "action " + std::to_string(j) + " does not preserve the relations");
    if (!columns_are_relations(group_, a * a - identity))
      throw Error(ErrorCode::InvalidModule, "action " + std::to_string(j) + " is not an involution on Q");
    for (std::size_t k = 0; k < j; ++k)
      if (!columns_are_relations(group_, a * actions_[k] - actions_[k] * a))
        throw Error(ErrorCode::InvalidModule,
                    "actions " + std::to_string(k) + " and " + std::to_string(j) + " do not commute");
  }
  for (const auto& a : actions_)
    free_actions_.push_back(group_.free_projection() * a * group_.free_section());
}

IntegerMatrix InvolutionModule::action_of(GroupMask c) const {
  IntegerMatrix out = IntegerMatrix::identity(ambient_rank());
  for (std::size_t j = 0; j < c_rank(); ++j)
    if (mask_bit(c, j, c_rank())) out = out * actions_[j];
  return out;
}

IntegerMatrix InvolutionModule::free_action_of(GroupMask c) const {
  IntegerMatrix out = IntegerMatrix::identity(free_rank());
  for (std::size_t j = 0; j < c_rank(); ++j)
    if (mask_bit(c, j, c_rank())) out = out * free_actions_[j];
  return out;
}

IntegerVector InvolutionModule::apply(GroupMask c, const IntegerVector& q) const { return action_of(c) * q; }

// ---------------------------------------------------------------------------
// Projections

namespace {

// Free-coordinate matrices of every element of C, indexed by mask.
std::vector<IntegerMatrix> element_actions(const InvolutionModule& module) {
  const std::size_t m = module.c_rank();
  std::vector<IntegerMatrix> out(std::size_t{1} << m);
  out[0] = IntegerMatrix::identity(module.free_rank());
  for (GroupMask c = 1; c < out.size(); ++c) {
    const unsigned low = std::countr_zero(c);
    const std::size_t generator = m - 1 - low;
    out[c] = out[c & (c - 1)] * module.free_action(generator);
  }
  return out;
}

IntegerMatrix product_over(const std::vector<IntegerMatrix>& elements, std::size_t f, auto&& coefficient) {
  IntegerMatrix out = IntegerMatrix::identity(f);
  for (GroupMask c = 0; c < elements.size(); ++c) {
    IntegerMatrix factor = elements[c];
    if (coefficient(c) < 0)
      for (std::size_t i = 0; i < f; ++i) factor.negate_row(i);
    for (std::size_t i = 0; i < f; ++i) factor(i, i) += 1;
    out = out * factor;
  }
  return out;
}

Rational inverse_power_of_two(std::uint64_t exponent) {
  Integer denominator;
  mpz_ui_pow_ui(denominator.get_mpz_t(), 2, exponent);
  return Rational(Integer(1), denominator);
}

RationalVector scale(const IntegerVector& v, const Rational& factor) {
  RationalVector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = factor * v[i];
    out[i].canonicalize();
  }
  return out;
}

// Columns of the projector p_chi on Z^f; they generate p_chi(1 (x) Q).
std::vector<RationalVector> projector_columns(const IntegerMatrix& product, std::uint64_t c_order) {
  const Rational factor = inverse_power_of_two(c_order);
  std::vector<RationalVector> columns;
  for (std::size_t j = 0; j < product.cols(); ++j) columns.push_back(scale(product.column(j), factor));
  return columns;
}

}  // namespace

IntegerMatrix character_product(const InvolutionModule& module, const Character& chi) {
  if (chi.rank() != module.c_rank()) throw Error(ErrorCode::InvalidArgument, "character rank mismatch");
  const auto elements = element_actions(module);
  return product_over(elements, module.free_rank(), [&](GroupMask c) { return chi(c); });
}

RationalVector project(const InvolutionModule& module, const IntegerVector& q, const Character& chi) {
  const IntegerVector v = module.group().to_free(q);
  return scale(character_product(module, chi) * v, inverse_power_of_two(module.c_order()));
}

RationalVector project_via_epimorphism(const InvolutionModule& target, std::span<const GroupMask> phi,
                                       const IntegerVector& q, const Character& chi) {
  const std::size_t m = phi.size();
  const std::size_t target_rank = target.c_rank();
  if (chi.rank() != m) throw Error(ErrorCode::InvalidArgument, "character rank does not match the source group");
  if (m >= 20) throw Error(ErrorCode::InvalidArgument, "source group rank too large");

  // Rank of the image over GF(2).
  std::vector<GroupMask> basis;
  for (GroupMask image : phi) {
    if (image >> target_rank) throw Error(ErrorCode::InvalidArgument, "image outside the target group");
    for (GroupMask b : basis) image = std::min(image, image ^ b);
    if (image) basis.push_back(image);
  }
  if (basis.size() != target_rank) throw Error(ErrorCode::NotEpimorphism, "images do not generate the target group");
  if (!is_decomposable(target)) throw Error(ErrorCode::NotDecomposable, "target module is not decomposable");

  const auto target_elements = element_actions(target);
  std::vector<IntegerMatrix> images(std::size_t{1} << m);
  for (GroupMask c = 0; c < images.size(); ++c) {
    GroupMask image = 0;
    for (std::size_t j = 0; j < m; ++j)
      if (mask_bit(c, j, m)) image ^= phi[j];
    images[c] = target_elements[image];
  }
  const IntegerMatrix product = product_over(images, target.free_rank(), [&](GroupMask c) { return chi(c); });
  return scale(product * target.group().to_free(q), inverse_power_of_two(images.size()));
}

Lattice eigenlattice(const InvolutionModule& module, const Character& chi) {
  const auto columns = projector_columns(character_product(module, chi), module.c_order());
  return Lattice::generated_by(module.free_rank(), columns);
}

Lattice fixed_sublattice(const InvolutionModule& module, const Character& chi) {
  const std::size_t f = module.free_rank();
  const std::size_t m = module.c_rank();
  IntegerMatrix stacked(m * f, f);
  for (std::size_t j = 0; j < m; ++j) {
    const IntegerMatrix& a = module.free_action(j);
    for (std::size_t r = 0; r < f; ++r)
      for (std::size_t c = 0; c < f; ++c) stacked(j * f + r, c) = a(r, c) - (r == c ? chi.sign(j) : 0);
  }
  const IntegerMatrix kernel = integer_kernel(stacked);
  std::vector<RationalVector> basis;
  for (std::size_t c = 0; c < kernel.cols(); ++c) basis.push_back(to_rational(kernel.column(c)));
  return Lattice(f, std::move(basis));
}

bool is_decomposable(const InvolutionModule& module) {
  for (const auto& chi : enumerate_characters(module.c_rank())) {
    const Lattice lattice = eigenlattice(module, chi);
    for (const auto& b : lattice.basis())
      for (const auto& x : b)
        if (x.get_den() != 1) return false;
  }
  return true;
}

bool verify_component_identity(const InvolutionModule& module, const IntegerVector& q) {
  const IntegerVector v = module.group().to_free(q);
  const auto elements = element_actions(module);
  IntegerVector sum(v.size());
  for (const auto& chi : enumerate_characters(module.c_rank())) {
    const IntegerVector term =
        product_over(elements, module.free_rank(), [&](GroupMask c) { return chi(c); }) * v;
    for (std::size_t i = 0; i < v.size(); ++i) sum[i] += term[i];
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    Integer expected;
    mpz_mul_2exp(expected.get_mpz_t(), v[i].get_mpz_t(), module.c_order());
    if (sum[i] != expected) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Simple elements

SimplicityReport is_simple(const InvolutionModule& module, const IntegerVector& q) {
  if (q.size() != module.ambient_rank()) throw Error(ErrorCode::InvalidArgument, "element has the wrong length");
  const std::size_t f = module.free_rank();
  const IntegerVector v = module.group().to_free(q);
  const auto elements = element_actions(module);
  const Rational factor = inverse_power_of_two(module.c_order());

  SimplicityReport report;
  std::optional<SimpleWitness> witness;
  NonSimpleWitness non_simple;
  for (const auto& chi : enumerate_characters(module.c_rank())) {
    const IntegerMatrix product = product_over(elements, f, [&](GroupMask c) { return chi(c); });
    CharacterComponent entry;
    entry.character = chi;
    entry.component = scale(product * v, factor);
    entry.lift.assign(module.ambient_rank(), Integer(0));
    if (is_zero(std::span<const Rational>(entry.component))) {
      entry.content = 0;
      entry.primitive.assign(f, Rational(0));
    } else {
      const auto columns = projector_columns(product, module.c_order());
      const Lattice lattice = Lattice::generated_by(f, columns);
      ContentDecomposition split = content_and_primitive_part(entry.component, lattice);
      entry.content = split.content;
      entry.primitive = split.primitive;
      auto preimage = solve_integer_combination(columns, entry.primitive);
      if (!preimage) throw Error(ErrorCode::NotInLattice, "primitive direction has no preimage in Q");
      entry.lift = module.group().lift_free(*preimage);
      if (entry.content == 1 && !witness) witness = SimpleWitness{chi, entry.primitive};
    }
    non_simple.contents.push_back(entry.content);
    non_simple.lifts.push_back(entry.lift);
    report.components.push_back(std::move(entry));
  }
  if (witness)
    report.payload = std::move(*witness);
  else
    report.payload = std::move(non_simple);
  return report;
}

Complement complement(const InvolutionModule& module, const IntegerVector& q, const Character& chi) {
  const std::size_t n = module.ambient_rank();
  const std::size_t f = module.free_rank();
  const IntegerMatrix product = character_product(module, chi);
  const auto columns = projector_columns(product, module.c_order());
  const Lattice lattice = Lattice::generated_by(f, columns);
  const Rational factor = inverse_power_of_two(module.c_order());

  const RationalVector component = scale(product * module.group().to_free(q), factor);
  if (is_zero(std::span<const Rational>(component)))
    throw Error(ErrorCode::NotSimple, "chi-component is zero");
  ContentDecomposition split = content_and_primitive_part(component, lattice);
  if (split.content != 1)
    throw Error(ErrorCode::NotSimple, "chi-component has content " + split.content.get_str());

  // Extend the component to a lattice basis; the first coordinate in that
  // basis is the functional with kernel M.
  const IntegerMatrix change = unimodular_inverse(extend_to_unimodular(split.coordinates));
  const IntegerMatrix to_free = module.group().free_projection();

  Complement out;
  out.character = chi;
  out.q = q;
  out.functional.assign(n, Integer(0));
  for (std::size_t i = 0; i < n; ++i) {
    const RationalVector image = scale(product * to_free.column(i), factor);
    auto coords = membership_solve(lattice, image);
    if (!coords) throw Error(ErrorCode::NotInLattice, "projection of a generator left the eigenlattice");
    for (std::size_t k = 0; k < coords->size(); ++k) out.functional[i] += (*coords)[k] * change(k, 0);
  }
  IntegerMatrix row(1, n);
  for (std::size_t i = 0; i < n; ++i) row(0, i) = out.functional[i];
  const IntegerMatrix kernel = integer_kernel(row);
  for (std::size_t c = 0; c < kernel.cols(); ++c) out.generators.push_back(kernel.column(c));
  return out;
}

bool verify_complement(const InvolutionModule& module, const Complement& m) {
  const std::size_t n = module.ambient_rank();
  auto evaluate = [&](const IntegerVector& x) {
    Integer s = 0;
    for (std::size_t i = 0; i < n; ++i) s += m.functional[i] * x[i];
    return s;
  };
  if (evaluate(m.q) != 1) return false;
  for (const auto& g : m.generators) {
    if (evaluate(g) != 0) return false;
    for (const auto& a : module.actions())
      if (evaluate(a * g) != 0) return false;
  }
  // The functional must vanish on the relations for M to be a subgroup of Q.
  const IntegerMatrix& relations = module.group().relations();
  for (std::size_t r = 0; r < relations.rows(); ++r)
    if (evaluate(relations.row(r)) != 0) return false;

  // q, M and the relations generate Z^n.
  std::vector<std::vector<Integer>> rows{m.q};
  for (const auto& g : m.generators) rows.push_back(g);
  for (std::size_t r = 0; r < relations.rows(); ++r) rows.push_back(relations.row(r));
  const SmithForm s = smith_normal_form(IntegerMatrix::from_rows(rows, n));
  if (s.rank != n) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (s.d(i, i) != 1) return false;
  return true;
}

}  // namespace vclose
