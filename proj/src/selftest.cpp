#include "vclose/selftest.hpp"

#include <functional>
#include <random>

#include "vclose/analyze.hpp"
#include "vclose/generators.hpp"

namespace vclose {

bool SelftestResult::passed() const { return first_failure() == nullptr; }

const SelftestCheck* SelftestResult::first_failure() const {
  for (const auto& c : checks)
    if (!c.passed) return &c;
  return nullptr;
}

namespace {

using Projector = std::function<RationalVector(const InvolutionModule&, const IntegerVector&, const Character&)>;

constexpr int kModules = 100;

InvolutionModule swap_module() {
  return InvolutionModule(AbelianPresentation(2), {IntegerMatrix{{0, 1}, {1, 0}}});
}

RationalVector free_image(const InvolutionModule& module, const IntegerVector& ambient) {
  return to_rational(module.group().to_free(ambient));
}

// Ambient coordinates of a ModuleGroup element.
IntegerVector ambient_of(const InvolutionModule& module, const ModuleGroup::Element& e) {
  return module.group().from_smith() * e.q;
}

struct WordKit {
  std::vector<SLWord> cosets;
  SLWord y = SLWord::generator("y");
  std::map<std::string, ModuleGroup::Element> assignment;

  WordKit(const ModuleGroup& g, std::size_t m) {
    std::vector<SLWord> xs;
    for (std::size_t j = 0; j < m; ++j) {
      xs.push_back(SLWord::generator(x_variable(j + 1)));
      assignment[x_variable(j + 1)] = g.from_c(unit_mask(j, m));
    }
    cosets = coset_words(xs);
  }
};

std::string check_component_sum(const Projector& proj, std::mt19937_64& rng) {
  for (int t = 0; t < kModules; ++t) {
    const InvolutionModule module = random_module(rng);
    const IntegerVector q = random_vector(module.ambient_rank(), 20, rng);
    RationalVector sum(module.free_rank());
    for (const auto& chi : enumerate_characters(module.c_rank())) {
      const auto p = proj(module, q, chi);
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += p[i];
    }
    if (sum != free_image(module, q)) return "sum of components differs from q for q = " + to_string(std::span<const Integer>(q));
    if (!verify_component_identity(module, q)) return "integer identity failed";
  }
  return {};
}

std::string check_eigenvectors(const Projector& proj, std::mt19937_64& rng) {
  for (int t = 0; t < kModules; ++t) {
    const InvolutionModule module = random_module(rng);
    const IntegerVector q = random_vector(module.ambient_rank(), 20, rng);
    for (const auto& chi : enumerate_characters(module.c_rank())) {
      const auto p = proj(module, q, chi);
      for (std::size_t j = 0; j < module.c_rank(); ++j) {
        auto image = to_rational(module.free_action(j)) * p;
        RationalVector expected = p;
        for (auto& x : expected) x *= chi.sign(j);
        if (image != expected) return "component is not a " + chi.to_string() + " eigenvector";
      }
    }
  }
  return {};
}

std::string check_skew_words(const Projector& proj, std::mt19937_64& rng) {
  for (int t = 0; t < kModules; ++t) {
    const InvolutionModule module = random_module(rng);
    const ModuleGroup g(module);
    WordKit kit(g, module.c_rank());
    const IntegerVector q = random_vector(module.ambient_rank(), 20, rng);
    IntegerVector q_tilde = q;
    for (auto& x : q_tilde) x *= module.group().torsion_order();
    kit.assignment["y"] = g.from_module(q_tilde);

    Integer scale_factor;
    mpz_ui_pow_ui(scale_factor.get_mpz_t(), 2, module.c_order());
    ModuleGroup::Element product = g.identity();
    for (const auto& chi : enumerate_characters(module.c_rank())) {
      const SLWord w = build_w_chi(chi, kit.cosets, kit.y);
      const auto value = evaluate(w, kit.assignment, g);
      if (value.c != 0) return "w_chi left the module";
      RationalVector expected = proj(module, q_tilde, chi);
      for (auto& x : expected) x *= scale_factor;
      if (free_image(module, ambient_of(module, value)) != expected)
        return "w_chi(q~) is not the " + chi.to_string() + "-component of q~^(2^|C|)";
      product = g.multiply(product, value);
    }
    if (!(product == g.power(g.from_module(q_tilde), scale_factor)))
      return "product of w_chi(q~) differs from q~^(2^|C|)";
  }
  return {};
}

std::string check_epimorphisms(const Projector& proj, std::mt19937_64& rng) {
  const std::pair<std::size_t, std::size_t> shapes[] = {{2, 1}, {3, 2}};
  for (const auto& [from, to] : shapes)
    for (int t = 0; t < kModules / 2; ++t) {
      RandomModuleOptions opts;
      opts.c_rank = to;
      opts.decomposable = true;
      const InvolutionModule target = random_module(rng, opts);
      const auto phi = random_epimorphism(from, to, rng);
      const IntegerVector q = random_vector(target.ambient_rank(), 20, rng);
      for (const auto& chi : enumerate_characters(from)) {
        const auto got = project_via_epimorphism(target, phi, q, chi);
        RationalVector expected(target.free_rank());
        for (const auto& chi_hat : enumerate_characters(to))
          if (pull_back(chi_hat, phi) == chi) expected = proj(target, q, chi_hat);
        if (got != expected) return "pulled-back projection wrong for " + chi.to_string();
      }
    }
  return {};
}

std::string check_swap_example(const Projector& proj) {
  const InvolutionModule module = swap_module();
  const Character plus({1}), minus({-1});
  if (proj(module, {2, 5}, plus) != RationalVector{Rational(7, 2), Rational(7, 2)}) return "p+(2,5) != (7/2,7/2)";
  const Lattice closure(2, {{Rational(1, 2), Rational(1, 2)}, {Rational(1, 2), Rational(-1, 2)}});
  if (membership_solve(closure, {2, 5}) != IntegerVector{7, -3}) return "(2,5) is not 7 u+ - 3 u-";
  if (is_simple(module, {2, 5}).simple()) return "(2,5) reported simple";
  for (long x = -4; x <= 4; ++x)
    for (long y = -4; y <= 4; ++y) {
      const bool expected = std::abs(x + y) == 1 || std::abs(x - y) == 1;
      if (is_simple(module, {x, y}).simple() != expected)
        return "simplicity of (" + std::to_string(x) + "," + std::to_string(y) + ")";
    }
  return {};
}

std::string check_worked_example() {
  const GroupSpec spec{{Factor::dinf(), Factor::dinf()}, "b1*b2", "a1^3*a2^5"};
  const Verdict v = analyze(spec);
  if (v.is_retract()) return "reported Retract";
  const auto& nc = v.not_closed();
  Integer rhs;
  mpz_ui_pow_ui(rhs.get_mpz_t(), 2, 17);
  if (nc.equation.contents.size() != 16) return "expected 16 characters";
  for (std::size_t i = 0; i < 16; ++i) {
    const long want = i == 4 ? 3 : i == 1 ? 5 : 0;
    if (nc.equation.contents[i] != want) return "wrong exponent for " + Character::from_index(i, 4).to_string();
  }
  if (nc.equation.rhs_exponent != rhs) return "RHS exponent is not 2^17";
  if (!verify_solution_in_G(nc.equation, nc.solution, spec)) return "G-solution does not verify";
  if (!nc.certificate.valid()) return "certificate invalid";
  if (nc.certificate.rows[4].subgroup_generator != rhs * 3 || nc.certificate.rows[1].subgroup_generator != rhs * 5)
    return "certificate subgroups wrong";
  return {};
}

std::string check_dihedral_closed_form(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> k(-50, 50);
  const DihedralGroup h;
  for (std::size_t m = 1; m <= 4; ++m) {
    std::vector<SLWord> xs;
    for (std::size_t j = 1; j <= m; ++j) xs.push_back(SLWord::generator(x_variable(j)));
    const auto cosets = coset_words(xs);
    const SLWord y = SLWord::generator("y");
    const auto characters = enumerate_characters(m);
    for (int t = 0; t < 50; ++t) {
      const Character& chi = characters[std::uniform_int_distribution<std::size_t>(0, characters.size() - 1)(rng)];
      const GroupMask delta = std::uniform_int_distribution<GroupMask>(0, (GroupMask{1} << m) - 1)(rng);
      std::map<std::string, DihedralElement> values;
      for (std::size_t j = 0; j < m; ++j)
        values[x_variable(j + 1)] = DihedralElement{Integer(k(rng)), mask_bit(delta, j, m)};
      const Integer l = 2 * k(rng);
      values["y"] = DihedralElement::a(l);
      const auto direct = evaluate(build_v_chi(chi, cosets, y), values, h);
      if (!(direct == evaluate_v_closed_form(chi, delta_from_mask(delta, m), l)))
        return "v_" + chi.to_string() + " disagrees with the closed form";
    }
  }
  return {};
}

std::string check_retraction() {
  const GroupSpec spec{{Factor::dinf(), Factor::dinf()}, "b1*b2", "a1*a2^5"};
  const Verdict v = analyze(spec);
  if (!v.is_retract()) return "a1*a2^5 not reported Retract";
  if (!verify_retraction(v.retraction(), 500, 100)) return "retraction fails verification";
  return {};
}

}  // namespace

SelftestResult run_selftest(Fault fault, std::uint64_t seed) {
  Projector proj = [fault](const InvolutionModule& m, const IntegerVector& q, const Character& chi) {
    RationalVector p = project(m, q, chi);
    if (fault == Fault::ProjectSign && !chi.is_trivial())
      for (auto& x : p) x = -x;
    return p;
  };
  std::mt19937_64 rng(seed);
  const std::pair<const char*, std::function<std::string()>> suite[] = {
      {"component-sum identity", [&] { return check_component_sum(proj, rng); }},
      {"eigenvector property", [&] { return check_eigenvectors(proj, rng); }},
      {"skew-commutator word identities", [&] { return check_skew_words(proj, rng); }},
      {"pulled-back projection", [&] { return check_epimorphisms(proj, rng); }},
      {"swap example", [&] { return check_swap_example(proj); }},
      {"worked example D-inf x D-inf", [] { return check_worked_example(); }},
      {"dihedral closed form", [&] { return check_dihedral_closed_form(rng); }},
      {"retraction a1*a2^5", [] { return check_retraction(); }},
  };
  SelftestResult result;
  for (const auto& [name, run] : suite) {
    SelftestCheck check{name, false, {}};
    try {
      check.detail = run();
      check.passed = check.detail.empty();
    } catch (const std::exception& e) {
      check.detail = std::string("exception: ") + e.what();
    }
    result.checks.push_back(std::move(check));
  }
  return result;
}

}  // namespace vclose
