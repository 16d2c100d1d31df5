#include <gtest/gtest.h>

#include <random>

#include "oracle.hpp"
#include "vclose/action.hpp"
#include "vclose/generators.hpp"

using namespace vclose;

namespace {

InvolutionModule swap_module() { return InvolutionModule(AbelianPresentation(2), {IntegerMatrix{{0, 1}, {1, 0}}}); }

// Q = Z^2 acted on by a1, b1, a2, b2: b_i negates coordinate i.
InvolutionModule worked_module() {
  const IntegerMatrix id = IntegerMatrix::identity(2);
  return InvolutionModule(AbelianPresentation(2), {id, IntegerMatrix{{-1, 0}, {0, 1}}, id, IntegerMatrix{{1, 0}, {0, -1}}});
}

const Character kAlpha({1, -1, 1, 1});
const Character kBeta({1, 1, 1, -1});

bool same_line(const Lattice& l, const RationalVector& v) {
  if (l.rank() != 1) return false;
  RationalVector neg = v;
  for (auto& x : neg) x = -x;
  return l.basis()[0] == v || l.basis()[0] == neg;
}

bool in_span(const std::vector<IntegerVector>& gens, std::size_t n, const IntegerVector& v) {
  std::vector<RationalVector> rat;
  for (const auto& g : gens) rat.push_back(to_rational(g));
  if (rat.empty()) return vclose::is_zero(std::span<const Integer>(v));
  return membership_solve(Lattice::generated_by(n, rat), to_rational(v)).has_value();
}

}  // namespace

TEST(Characters, Enumeration) {
  EXPECT_EQ(enumerate_characters(0).size(), 1u);
  EXPECT_TRUE(enumerate_characters(0)[0].is_trivial());
  const auto one = enumerate_characters(1);
  ASSERT_EQ(one.size(), 2u);
  EXPECT_EQ(one[0], Character({1}));
  EXPECT_EQ(one[1], Character({-1}));
  const auto four = enumerate_characters(4);
  ASSERT_EQ(four.size(), 16u);
  EXPECT_EQ(four[4], kAlpha);
  EXPECT_EQ(four[1], kBeta);
  for (std::size_t i = 0; i < four.size(); ++i) EXPECT_EQ(four[i].index(), i);
}

TEST(Characters, Homomorphism) {
  for (const auto& chi : enumerate_characters(3))
    for (GroupMask x = 0; x < 8; ++x)
      for (GroupMask y = 0; y < 8; ++y) EXPECT_EQ(chi(x ^ y), chi(x) * chi(y));
}

TEST(Module, RejectsNonInvolution) {
  try {
    InvolutionModule(AbelianPresentation(1), {IntegerMatrix{{2}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidModule);
  }
}

TEST(Module, RejectsNonCommutingActions) {
  EXPECT_THROW(InvolutionModule(AbelianPresentation(2), {IntegerMatrix{{0, 1}, {1, 0}}, IntegerMatrix{{-1, 0}, {0, 1}}}),
               Error);
}

TEST(Project, SwapExamples) {
  const auto m = swap_module();
  const Character plus({1}), minus({-1});
  EXPECT_EQ(project(m, {2, 5}, plus), (RationalVector{Rational(7, 2), Rational(7, 2)}));
  EXPECT_EQ(project(m, {1, 1}, plus), (RationalVector{1, 1}));
  EXPECT_EQ(project(m, {1, 1}, minus), (RationalVector{0, 0}));
}

TEST(Project, AgreesWithAveragingIdempotent) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 150; ++t) {
    const auto module = random_module(rng);
    const auto q = random_vector(module.ambient_rank(), 25, rng);
    for (const auto& chi : enumerate_characters(module.c_rank()))
      ASSERT_EQ(project(module, q, chi), oracle::project_by_average(module, q, chi));
  }
}

TEST(Project, ComponentsSumToQ) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 150; ++t) {
    const auto module = random_module(rng);
    const auto q = random_vector(module.ambient_rank(), 25, rng);
    RationalVector sum(module.free_rank());
    for (const auto& chi : enumerate_characters(module.c_rank())) {
      const auto p = project(module, q, chi);
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += p[i];
    }
    EXPECT_EQ(sum, to_rational(module.group().to_free(q)));
  }
}

TEST(Project, ComponentsAreEigenvectors) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 150; ++t) {
    const auto module = random_module(rng);
    const auto q = random_vector(module.ambient_rank(), 25, rng);
    for (const auto& chi : enumerate_characters(module.c_rank())) {
      const auto p = project(module, q, chi);
      for (std::size_t j = 0; j < module.c_rank(); ++j) {
        RationalVector expected = p;
        for (auto& x : expected) x *= chi.sign(j);
        EXPECT_EQ(to_rational(module.free_action(j)) * p, expected);
      }
    }
  }
}

TEST(ComponentIdentity, Holds) {
  EXPECT_TRUE(verify_component_identity(swap_module(), {2, 5}));
  EXPECT_TRUE(verify_component_identity(swap_module(), {0, 0}));
  std::mt19937_64 rng(24);
  for (int t = 0; t < 100; ++t) {
    const auto module = random_module(rng);
    EXPECT_TRUE(verify_component_identity(module, random_vector(module.ambient_rank(), 25, rng)));
  }
}

TEST(ProjectViaEpimorphism, IdentityMapMatchesProject) {
  const auto m = worked_module();
  const std::vector<GroupMask> phi{8, 4, 2, 1};
  for (const auto& chi : enumerate_characters(4))
    EXPECT_EQ(project_via_epimorphism(m, phi, {3, 5}, chi), project(m, {3, 5}, chi));
}

TEST(ProjectViaEpimorphism, NonFactoringCharacterVanishes) {
  const InvolutionModule target(AbelianPresentation(2), {IntegerMatrix{{1, 0}, {0, -1}}});
  const std::vector<GroupMask> phi{1, 1};
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t)
    EXPECT_EQ(project_via_epimorphism(target, phi, random_vector(2, 9, rng), Character({1, -1})), (RationalVector{0, 0}));
}

TEST(ProjectViaEpimorphism, FactoringCharacterKeepsEigenvector) {
  const InvolutionModule target(AbelianPresentation(2), {IntegerMatrix{{1, 0}, {0, -1}}});
  const std::vector<GroupMask> phi{1, 1};
  // (0, 4) is a (-1)-eigenvector; chi = (-1, -1) is the sign character pulled back.
  EXPECT_EQ(project_via_epimorphism(target, phi, {0, 4}, Character({-1, -1})), (RationalVector{0, 4}));
  EXPECT_EQ(project_via_epimorphism(target, phi, {7, 4}, Character({1, 1})), (RationalVector{7, 0}));
}

TEST(ProjectViaEpimorphism, Errors) {
  const InvolutionModule target(AbelianPresentation(2), {IntegerMatrix{{1, 0}, {0, -1}}, IntegerMatrix{{-1, 0}, {0, 1}}});
  const std::vector<GroupMask> not_onto{2, 2};
  try {
    project_via_epimorphism(target, not_onto, {1, 1}, Character({1, 1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotEpimorphism);
  }
  const std::vector<GroupMask> phi{1};
  try {
    project_via_epimorphism(swap_module(), phi, {1, 1}, Character({1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotDecomposable);
  }
}

TEST(Eigenlattice, SwapModule) {
  EXPECT_TRUE(same_line(eigenlattice(swap_module(), Character({1})), {Rational(1, 2), Rational(1, 2)}));
  EXPECT_TRUE(same_line(eigenlattice(swap_module(), Character({-1})), {Rational(1, 2), Rational(-1, 2)}));
  EXPECT_FALSE(is_decomposable(swap_module()));
  EXPECT_TRUE(is_decomposable(worked_module()));
}

TEST(Eigenlattice, TrivialGroupGivesStandardLattice) {
  const InvolutionModule m(AbelianPresentation(2), {});
  const Lattice l = eigenlattice(m, enumerate_characters(0)[0]);
  EXPECT_EQ(l.rank(), 2u);
  EXPECT_TRUE(membership_solve(l, {1, 0}).has_value());
  EXPECT_TRUE(membership_solve(l, {0, 1}).has_value());
  EXPECT_FALSE(membership_solve(l, {Rational(1, 2), 0}).has_value());
}

TEST(FixedSublattice, SwapModule) {
  EXPECT_TRUE(same_line(fixed_sublattice(swap_module(), Character({1})), {1, 1}));
  EXPECT_TRUE(same_line(fixed_sublattice(swap_module(), Character({-1})), {1, -1}));
}

TEST(FixedSublattice, WorkedModuleHasTwoNontrivialCharacters) {
  const auto m = worked_module();
  std::vector<std::string> nontrivial;
  for (const auto& chi : enumerate_characters(4))
    if (fixed_sublattice(m, chi).rank() > 0) nontrivial.push_back(chi.to_string());
  EXPECT_EQ(nontrivial, (std::vector<std::string>{kBeta.to_string(), kAlpha.to_string()}));
}

TEST(IsSimple, SwapTwoFive) {
  const auto r = is_simple(swap_module(), {2, 5});
  ASSERT_FALSE(r.simple());
  EXPECT_EQ(r.non_simple().contents, (std::vector<Integer>{7, 3}));
  EXPECT_TRUE(is_simple(swap_module(), {1, 0}).simple());
  EXPECT_EQ(is_simple(swap_module(), {1, 0}).witness().character, Character({1}));
}

TEST(IsSimple, SwapCharacterization) {
  for (long x = -10; x <= 10; ++x)
    for (long y = -10; y <= 10; ++y)
      EXPECT_EQ(is_simple(swap_module(), {x, y}).simple(), oracle::swap_simple(x, y)) << x << "," << y;
}

TEST(IsSimple, WorkedModuleContents) {
  const auto r = is_simple(worked_module(), {3, 5});
  ASSERT_FALSE(r.simple());
  for (std::size_t i = 0; i < 16; ++i) EXPECT_EQ(r.non_simple().contents[i], i == 4 ? 3 : i == 1 ? 5 : 0);
}

TEST(IsSimple, LiftsRecoverPrimitiveDirection) {
  std::mt19937_64 rng(30);
  for (int t = 0; t < 100; ++t) {
    const auto module = random_module(rng);
    const auto q = random_vector(module.ambient_rank(), 25, rng);
    const auto r = is_simple(module, q);
    for (const auto& c : r.components) {
      EXPECT_EQ(oracle::project_by_average(module, c.lift, c.character), c.primitive);
      RationalVector scaled = c.primitive;
      for (auto& x : scaled) x *= Rational(c.content);
      EXPECT_EQ(scaled, c.component);
      if (!r.simple()) EXPECT_NE(abs(c.content), 1);
    }
  }
}

TEST(IsSimple, TorsionElementIsNotSimple) {
  const InvolutionModule m(AbelianPresentation(2, IntegerMatrix{{3, 0}}), {IntegerMatrix{{1, 0}, {0, -1}}});
  const auto r = is_simple(m, {1, 0});
  ASSERT_FALSE(r.simple());
  for (const auto& k : r.non_simple().contents) EXPECT_EQ(k, 0);
}

TEST(IsSimple, InvariantUnderChangeOfBasis) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 100; ++t) {
    const auto module = random_module(rng);
    const IntegerMatrix u = random_unimodular(module.ambient_rank(), rng);
    const auto moved = change_basis(module, u);
    for (int s = 0; s < 5; ++s) {
      const auto q = random_vector(module.ambient_rank(), 4, rng);
      EXPECT_EQ(is_simple(module, q).simple(), is_simple(moved, u * q).simple());
    }
  }
}

TEST(IsSimple, HandBuiltDecompositionGivesSimpleElement) {
  // A basis vector of a sign-line decomposition splits off with an invariant
  // complement, so it must be simple whatever basis it is written in.
  std::mt19937_64 rng(32);
  RandomModuleOptions opts;
  opts.decomposable = true;
  opts.change_basis = false;
  opts.torsion_orders = {1};
  for (int t = 0; t < 100; ++t) {
    const auto module = random_module(rng, opts);
    if (module.ambient_rank() == 0) continue;
    const IntegerMatrix u = random_unimodular(module.ambient_rank(), rng);
    const auto moved = change_basis(module, u);
    const std::size_t i = rng() % module.ambient_rank();
    EXPECT_TRUE(is_simple(moved, u.column(i)).simple());
  }
}

TEST(Complement, SwapExample) {
  const auto m = swap_module();
  const auto c = complement(m, {1, 0}, Character({1}));
  EXPECT_TRUE(verify_complement(m, c));
  EXPECT_TRUE(in_span(c.generators, 2, {1, -1}));
  EXPECT_FALSE(in_span(c.generators, 2, {1, 0}));
}

TEST(Complement, TrivialGroup) {
  const InvolutionModule m(AbelianPresentation(1), {});
  const auto c = complement(m, {1}, enumerate_characters(0)[0]);
  EXPECT_TRUE(verify_complement(m, c));
  for (const auto& g : c.generators) EXPECT_EQ(g, IntegerVector{0});
}

TEST(Complement, WorkedModuleWithSimpleSquare) {
  const auto m = worked_module();
  const IntegerVector q{1, 5};
  const auto r = is_simple(m, q);
  ASSERT_TRUE(r.simple());
  const auto c = complement(m, q, r.witness().character);
  EXPECT_TRUE(verify_complement(m, c));
  ASSERT_EQ(c.generators.size(), 1u);
  IntegerMatrix stacked{{1, 5}, {0, 0}};
  stacked(1, 0) = c.generators[0][0];
  stacked(1, 1) = c.generators[0][1];
  EXPECT_EQ(abs(oracle::cofactor_determinant(stacked)), 1);
  for (const auto& a : m.actions()) EXPECT_TRUE(in_span(c.generators, 2, a * c.generators[0]));
}

TEST(Complement, RandomSimpleElements) {
  std::mt19937_64 rng(33);
  int checked = 0;
  for (int t = 0; t < 400 && checked < 60; ++t) {
    const auto module = random_module(rng);
    const auto q = random_vector(module.ambient_rank(), 3, rng);
    const auto r = is_simple(module, q);
    if (!r.simple()) continue;
    ++checked;
    const auto c = complement(module, q, r.witness().character);
    EXPECT_TRUE(verify_complement(module, c));
    const std::size_t n = module.ambient_rank();
    // Every basis vector splits as (functional) q + element of M.
    for (std::size_t i = 0; i < n; ++i) {
      IntegerVector e(n);
      e[i] = 1;
      IntegerVector rest = e;
      for (std::size_t j = 0; j < n; ++j) rest[j] -= c.functional[i] * q[j];
      EXPECT_TRUE(in_span(c.generators, n, rest));
    }
    for (const auto& g : c.generators)
      for (const auto& a : module.actions()) EXPECT_TRUE(in_span(c.generators, n, a * g));
    // Relations lie in M.
    for (std::size_t k = 0; k < module.group().relations().rows(); ++k)
      EXPECT_TRUE(in_span(c.generators, n, module.group().relations().row(k)));
  }
  EXPECT_GE(checked, 20);
}

TEST(Complement, NonSimpleThrows) {
  try {
    complement(swap_module(), {2, 5}, Character({1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSimple);
  }
}
