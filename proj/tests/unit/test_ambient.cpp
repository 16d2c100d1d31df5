#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "oracle.hpp"
#include "vclose/analyze.hpp"
#include "vclose/spec_format.hpp"

using namespace vclose;

namespace {

const GroupSpec kWorked{{Factor::dinf(), Factor::dinf()}, "b1*b2", "a1^3*a2^5"};

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

// Coordinate-wise reference product: affine maps for D-inf, integers for Z,
// residues for Z/k.
AmbientElement reference_multiply(const std::vector<Factor>& factors, const AmbientElement& g, const AmbientElement& h) {
  AmbientElement out;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& x = g.coordinates[i];
    const auto& y = h.coordinates[i];
    if (factors[i].kind == FactorKind::DInf) {
      const oracle::Affine fx{x.flip ? -1 : 1, x.translation}, fy{y.flip ? -1 : 1, y.translation};
      const auto p = oracle::compose(fx, fy);
      out.coordinates.push_back(DihedralElement{p.t, p.s < 0});
    } else if (factors[i].kind == FactorKind::Zed) {
      out.coordinates.push_back(DihedralElement::a(x.translation + y.translation));
    } else {
      Integer r = (x.translation + y.translation) % factors[i].modulus;
      if (r < 0) r += factors[i].modulus;
      out.coordinates.push_back(DihedralElement::a(r));
    }
  }
  return out;
}

AmbientElement element(const AmbientGroup& g, const std::string& word) { return evaluate_in(g, parse_word(word, g)); }

std::vector<GroupSpec> simple_specs() {
  return {
      {{Factor::dinf(), Factor::dinf()}, "b1*b2", "a1*a2^5"},
      {{Factor::dinf()}, "b1", "a1"},
      {{Factor::dinf(), Factor::dinf()}, "b1", "a1"},
      {{Factor::dinf(), Factor::zed()}, "b1", "a1"},
      {{Factor::dinf(), Factor::zed_mod(3)}, "b1", "a1"},
      {{Factor::dinf(), Factor::zed_mod(4)}, "b1", "a1*c1^2"},
      {{Factor::dinf(), Factor::dinf(), Factor::zed()}, "b1*b2", "a1^-1*a2^3"},
      {{Factor::dinf(), Factor::dinf(), Factor::zed_mod(3)}, "b1*b2", "a1^4*a2"},
  };
}

}  // namespace

TEST(AmbientGroup, GeneratorNamesPerKind) {
  const AmbientGroup g({Factor::dinf(), Factor::zed(), Factor::zed_mod(3), Factor::dinf(), Factor::zed()});
  EXPECT_EQ(g.generator_names(), (std::vector<std::string>{"a1", "b1", "t1", "c1", "a2", "b2", "t2"}));
  EXPECT_TRUE(g.has_generator("t2"));
  EXPECT_FALSE(g.has_generator("c2"));
  EXPECT_EQ(code_of([&] { g.generator("z"); }), ErrorCode::ParseError);
}

TEST(AmbientGroup, ArithmeticMatchesReference) {
  const std::vector<Factor> factors{Factor::dinf(), Factor::zed(), Factor::zed_mod(6), Factor::dinf()};
  const AmbientGroup g(factors);
  std::mt19937_64 rng(60);
  for (int t = 0; t < 1000; ++t) {
    const auto x = random_element(g, 30, rng), y = random_element(g, 30, rng);
    ASSERT_EQ(g.multiply(x, y), reference_multiply(factors, x, y));
    ASSERT_EQ(g.multiply(x, g.inverse(x)), g.identity());
    AmbientElement cube = reference_multiply(factors, reference_multiply(factors, x, x), x);
    ASSERT_EQ(g.power(x, 3), cube);
    ASSERT_EQ(g.power(x, -3), g.inverse(cube));
  }
}

TEST(ParseWord, Grammar) {
  const AmbientGroup g({Factor::dinf(), Factor::dinf()});
  EXPECT_EQ(element(g, "a1^3*a2^5"), g.multiply(g.power(g.generator("a1"), 3), g.power(g.generator("a2"), 5)));
  EXPECT_EQ(element(g, "(a1*b1)^2"), g.identity());
  EXPECT_EQ(element(g, "a1^(-2)"), g.power(g.generator("a1"), -2));
  EXPECT_EQ(element(g, "a1^-2"), g.power(g.generator("a1"), -2));
  EXPECT_EQ(element(g, "1"), g.identity());
  EXPECT_EQ(element(g, " b1 * b2 "), g.multiply(g.generator("b1"), g.generator("b2")));
}

TEST(ParseWord, Errors) {
  const AmbientGroup g({Factor::dinf()});
  for (const char* bad : {"a1^", "a2", "a1*", "(a1", "a1)", "", "a1^x", "t1"})
    EXPECT_EQ(code_of([&] { parse_word(bad, g); }), ErrorCode::ParseError) << bad;
}

TEST(ValidateSpec, Examples) {
  EXPECT_NO_THROW(validate_spec(kWorked));
  EXPECT_TRUE(spec_violations(kWorked).empty());
  EXPECT_EQ(code_of([] { validate_spec({{Factor::dinf()}, "b1", "b1"}); }), ErrorCode::NotInfiniteOrder);
  EXPECT_EQ(code_of([] { validate_spec({{Factor::dinf()}, "a1", "a1"}); }), ErrorCode::NotAnInvolution);
  EXPECT_EQ(code_of([] { validate_spec({{Factor::dinf(), Factor::dinf()}, "b1", "a2"}); }), ErrorCode::NotInverted);
  EXPECT_EQ(code_of([] { validate_spec({{Factor::dinf(), Factor::zed()}, "b1", "a1*t1"}); }), ErrorCode::NotInverted);
  EXPECT_EQ(code_of([] { validate_spec({{Factor::dinf()}, "1", "a1"}); }), ErrorCode::NotAnInvolution);
  EXPECT_EQ(code_of([] { validate_spec({{Factor::dinf()}, "b1", "a1^"}); }), ErrorCode::ParseError);
}

TEST(ValidateSpec, ReportsEveryViolation) {
  const auto v = spec_violations({{Factor::dinf()}, "a1", "a1"});
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[0].code, ErrorCode::NotAnInvolution);
  EXPECT_EQ(v[1].code, ErrorCode::NotInverted);
}

TEST(SquareData, WorkedExample) {
  const SquareData d(kWorked);
  EXPECT_EQ(d.module().group().free_rank(), 2u);
  EXPECT_EQ(d.module().group().torsion_order(), 1);
  EXPECT_EQ(d.c_generators(), (std::vector<std::string>{"a1", "b1", "a2", "b2"}));
  std::vector<std::string> nontrivial;
  for (const auto& chi : enumerate_characters(4))
    if (fixed_sublattice(d.module(), chi).rank() > 0) nontrivial.push_back(chi.to_string());
  EXPECT_EQ(nontrivial, (std::vector<std::string>{"+++-", "+-++"}));
}

TEST(SquareData, SingleZed) {
  const SquareData d({{Factor::zed()}, "1", "t1"});
  EXPECT_EQ(d.module().free_rank(), 1u);
  EXPECT_EQ(d.c_rank(), 1u);
  EXPECT_EQ(d.module().actions()[0], IntegerMatrix::identity(1));
  const auto t = d.group().generator("t1");
  EXPECT_EQ(d.q_coordinates(d.group().multiply(t, t)), IntegerVector{1});
  EXPECT_EQ(d.c_coordinates(t), 1u);
  EXPECT_EQ(code_of([&] { d.q_coordinates(d.group().generator("t1")); }), ErrorCode::NotInQ);
}

TEST(SquareData, SingleZedModThree) {
  const SquareData d({{Factor::zed_mod(3)}, "1", "c1"});
  EXPECT_EQ(d.c_rank(), 0u);
  EXPECT_EQ(d.module().group().torsion_order(), 3);
  EXPECT_EQ(d.module().free_rank(), 0u);
  EXPECT_NO_THROW(d.q_coordinates(d.group().generator("c1")));
}

TEST(SquareData, SquaresLieInQAndActionIsConjugation) {
  std::mt19937_64 rng(61);
  const std::vector<GroupSpec> specs{kWorked,
                                     {{Factor::dinf(), Factor::zed(), Factor::zed_mod(4), Factor::zed_mod(3)}, "b1", "a1"},
                                     {{Factor::dinf(), Factor::dinf(), Factor::zed_mod(2)}, "b1*a2*b2", "a1*c1"}};
  for (const auto& spec : specs) {
    const SquareData d(spec);
    const AmbientGroup& g = d.group();
    const auto& q = d.module().group();
    for (int t = 0; t < 200; ++t) {
      const auto x = random_element(g, 20, rng);
      const auto sq = g.multiply(x, x);
      const auto coords = d.q_coordinates(sq);
      EXPECT_EQ(d.q_element(coords), sq);
      EXPECT_TRUE(membership_solve(Lattice::standard(coords.size()), to_rational(coords)).has_value());
      // The coset of x is determined by its C-coordinates.
      const auto rep = d.coset_representative(d.c_coordinates(x));
      EXPECT_NO_THROW(d.q_coordinates(g.multiply(g.inverse(rep), x)));
    }
    for (std::size_t j = 0; j < d.c_rank(); ++j) {
      const auto& dj = d.c_generator(j);
      EXPECT_NO_THROW(d.q_coordinates(g.multiply(dj, dj)));
      for (std::size_t i = 0; i < q.rank_ambient(); ++i) {
        IntegerVector e(q.rank_ambient());
        e[i] = 1;
        const auto conj = g.multiply(g.multiply(dj, d.q_element(e)), g.inverse(dj));
        EXPECT_TRUE(q.equal(d.q_coordinates(conj), d.module().actions()[j] * e));
      }
    }
    for (std::size_t i = 0; i < spec.factors.size(); ++i) {
      const auto r = d.square_root_of_generator(i);
      IntegerVector e(spec.factors.size());
      e[i] = 1;
      EXPECT_EQ(g.multiply(r, r), d.q_element(e));
    }
  }
}

TEST(ImageOfASquared, Examples) {
  EXPECT_EQ(image_of_a_squared(kWorked, SquareData(kWorked)), (IntegerVector{3, 5}));
  const GroupSpec proj{{Factor::dinf(), Factor::dinf()}, "b1", "a1"};
  EXPECT_EQ(image_of_a_squared(proj, SquareData(proj)), (IntegerVector{1, 0}));
  const GroupSpec simple{{Factor::dinf(), Factor::dinf()}, "b1*b2", "a1*a2^5"};
  EXPECT_EQ(image_of_a_squared(simple, SquareData(simple)), (IntegerVector{1, 5}));
}

TEST(GSolution, WorkedExampleKnownAssignment) {
  const Verdict v = analyze(kWorked);
  ASSERT_FALSE(v.is_retract());
  const auto& nc = v.not_closed();
  const AmbientGroup& g = v.data.group();
  EXPECT_EQ(nc.solution.at("x1"), g.generator("a1"));
  EXPECT_EQ(nc.solution.at("x2"), g.generator("b1"));
  EXPECT_EQ(nc.solution.at("x3"), g.generator("a2"));
  EXPECT_EQ(nc.solution.at("x4"), g.generator("b2"));
  EXPECT_EQ(nc.solution.at(y_variable(4, 1)), g.generator("a1"));
  EXPECT_EQ(nc.solution.at(y_variable(1, 1)), g.generator("a2"));
  for (const auto& [name, value] : nc.solution)
    if (name.rfind("y4_", 0) != 0 && name.rfind("y1_", 0) != 0 && name[0] == 'y') EXPECT_EQ(value, g.identity()) << name;
  EXPECT_TRUE(verify_solution_in_G(nc.equation, nc.solution, kWorked));
}

TEST(GSolution, WrongAssignmentsFail) {
  const Verdict v = analyze(kWorked);
  const auto& nc = v.not_closed();
  const AmbientGroup& g = v.data.group();
  Assignment identity;
  for (const auto& [name, value] : nc.solution) identity[name] = g.identity();
  EXPECT_FALSE(verify_solution_in_G(nc.equation, identity, kWorked));
  Assignment perturbed = nc.solution;
  perturbed[y_variable(4, 1)] = g.generator("a2");
  EXPECT_FALSE(verify_solution_in_G(nc.equation, perturbed, kWorked));
  Assignment missing = nc.solution;
  missing.erase("x1");
  EXPECT_EQ(code_of([&] { verify_solution_in_G(nc.equation, missing, kWorked); }), ErrorCode::UnboundGenerator);
}

TEST(GSolution, SpreadsLiftAcrossSlots) {
  const Verdict v = analyze(kWorked);
  SimplicityReport report = v.simplicity;
  std::get<NonSimpleWitness>(report.payload).lifts[4] = {1, 1};
  WitnessOptions opts;
  opts.squares = 2;
  const Equation eq = build_witness_equation(report, 1, 4, opts);
  const Assignment s = g_solution(eq, v.data, report);
  const AmbientGroup& g = v.data.group();
  const auto y1 = s.at(y_variable(4, 1)), y2 = s.at(y_variable(4, 2));
  EXPECT_EQ(g.multiply(g.multiply(y1, y1), g.multiply(y2, y2)), v.data.q_element({1, 1}));
}

TEST(GSolution, SolutionVerifiesForEverySquareCount) {
  for (std::size_t n = 1; n <= 3; ++n) {
    AnalyzeOptions opts;
    opts.squares = n;
    const Verdict v = analyze(kWorked, opts);
    EXPECT_EQ(v.not_closed().equation.squares, n);
    EXPECT_TRUE(verify_solution_in_G(v.not_closed().equation, v.not_closed().solution, kWorked));
  }
}

TEST(Analyze, Examples) {
  const Verdict worked = analyze(kWorked);
  ASSERT_FALSE(worked.is_retract());
  EXPECT_EQ(worked.not_closed().equation.rhs_exponent, Integer(1) << 17);
  EXPECT_EQ(worked.not_closed().equation.squares, 3u);
  EXPECT_TRUE(worked.not_closed().certificate.valid());
  EXPECT_TRUE(analyze({{Factor::dinf(), Factor::dinf()}, "b1", "a1"}).is_retract());
  EXPECT_TRUE(analyze({{Factor::dinf(), Factor::dinf()}, "b1*b2", "a1*a2^5"}).is_retract());
  EXPECT_EQ(code_of([] { analyze({{Factor::dinf()}, "a1", "a1"}); }), ErrorCode::NotAnInvolution);
}

TEST(Analyze, FillerOption) {
  AnalyzeOptions opts;
  opts.filler = 2018;
  const Verdict v = analyze(kWorked, opts);
  EXPECT_EQ(v.not_closed().equation.exponent(0), 2018);
  EXPECT_TRUE(v.not_closed().certificate.valid());
  EXPECT_TRUE(verify_solution_in_G(v.not_closed().equation, v.not_closed().solution, kWorked));
  opts.filler = 1;
  EXPECT_THROW(analyze(kWorked, opts), Error);
}

TEST(Analyze, TorsionBearingWitness) {
  const GroupSpec spec{{Factor::dinf(), Factor::dinf(), Factor::zed_mod(3)}, "b1*b2", "a1^3*a2^5"};
  const Verdict v = analyze(spec);
  ASSERT_FALSE(v.is_retract());
  EXPECT_EQ(v.not_closed().equation.torsion_order, 3);
  EXPECT_EQ(v.not_closed().equation.rhs_exponent, 3 * (Integer(1) << 17));
  EXPECT_TRUE(v.not_closed().certificate.valid());
  EXPECT_TRUE(verify_solution_in_G(v.not_closed().equation, v.not_closed().solution, spec));
}

TEST(Analyze, WorkedFamilyMatchesContentRule) {
  for (long p = -3; p <= 3; ++p)
    for (long q = -3; q <= 3; ++q) {
      if (p == 0 && q == 0) continue;
      const GroupSpec spec{{Factor::dinf(), Factor::dinf()}, "b1*b2",
                           "a1^" + std::to_string(p) + "*a2^" + std::to_string(q)};
      EXPECT_EQ(analyze(spec).is_retract(), oracle::worked_family_retract(p, q)) << p << "," << q;
    }
}

TEST(Analyze, VerdictInvariantUnderReorderAndInverse) {
  std::vector<GroupSpec> specs = simple_specs();
  specs.push_back(kWorked);
  specs.push_back({{Factor::dinf(), Factor::dinf(), Factor::zed_mod(3)}, "b1*b2", "a1^3*a2^5"});
  specs.push_back({{Factor::dinf(), Factor::zed(), Factor::zed_mod(4)}, "b1", "a1^2*c1^2"});
  for (const auto& spec : specs) {
    const bool expected = analyze(spec).is_retract();
    GroupSpec inverted = spec;
    inverted.h_a = "(" + spec.h_a + ")^-1";
    EXPECT_EQ(analyze(inverted).is_retract(), expected) << spec.h_a;
    // Generators are numbered per kind, so reversing mixed factors keeps the words valid.
    GroupSpec reversed = spec;
    std::reverse(reversed.factors.begin(), reversed.factors.end());
    EXPECT_EQ(analyze(reversed).is_retract(), expected) << spec.h_a;
  }
  // Swapping the two D-inf factors renames a1 and a2.
  for (long p : {1, 2, 3})
    for (long q : {1, 4, 5}) {
      const std::string ps = std::to_string(p), qs = std::to_string(q);
      EXPECT_EQ(analyze({{Factor::dinf(), Factor::dinf()}, "b1*b2", "a1^" + ps + "*a2^" + qs}).is_retract(),
                analyze({{Factor::dinf(), Factor::dinf()}, "b2*b1", "a2^" + ps + "*a1^" + qs}).is_retract());
    }
}

TEST(Retraction, ProjectionOntoFirstFactor) {
  const Verdict v = analyze({{Factor::dinf(), Factor::dinf()}, "b1", "a1"});
  ASSERT_TRUE(v.is_retract());
  const auto& r = v.retraction();
  const AmbientGroup& g = v.data.group();
  EXPECT_EQ(r.image(g.generator("a1")), DihedralElement::a());
  EXPECT_EQ(r.image(g.generator("b1")), DihedralElement::b());
  EXPECT_TRUE(r.image(g.generator("a2")).is_identity());
  EXPECT_TRUE(r.image(g.generator("b2")).is_identity());
  EXPECT_TRUE(verify_retraction(r, 2000, 100));
}

TEST(Retraction, KillsCentralFactor) {
  const Verdict v = analyze({{Factor::dinf(), Factor::zed()}, "b1", "a1"});
  ASSERT_TRUE(v.is_retract());
  const AmbientGroup& g = v.data.group();
  EXPECT_EQ(v.retraction().apply(g.generator("t1")), g.identity());
}

TEST(Retraction, SimpleSpecsVerify) {
  for (const auto& spec : simple_specs()) {
    const Verdict v = analyze(spec);
    ASSERT_TRUE(v.is_retract()) << spec.h_a;
    const auto& r = v.retraction();
    const AmbientGroup& g = v.data.group();
    EXPECT_EQ(r.apply(r.h_a), r.h_a);
    EXPECT_EQ(r.apply(r.h_b), r.h_b);
    EXPECT_EQ(r.h_a, element(g, spec.h_a));
    EXPECT_TRUE(verify_retraction(r, 1000, 100)) << spec.h_a;
  }
}

TEST(Retraction, BadMapsFail) {
  const GroupSpec spec{{Factor::dinf(), Factor::dinf()}, "b1*b2", "a1*a2^5"};
  const AmbientGroup g(spec.factors);
  EXPECT_FALSE(verify_retraction([&](const AmbientElement&) { return g.identity(); }, spec, 100, 50));
  // The identity of G fixes H but its image is all of G.
  EXPECT_FALSE(verify_retraction([](const AmbientElement& x) { return x; }, spec, 100, 50));
  const Verdict v = analyze(spec);
  const auto& r = v.retraction();
  // Not a homomorphism: the retraction followed by squaring odd translations.
  EXPECT_FALSE(verify_retraction(
      [&](const AmbientElement& x) {
        const auto y = r.apply(x);
        return y.coordinates[0].flip ? y : g.multiply(y, y);
      },
      spec, 100, 50));
}

TEST(Retraction, SimpleIffRetractionBuilds) {
  std::vector<GroupSpec> specs = simple_specs();
  specs.push_back(kWorked);
  specs.push_back({{Factor::dinf(), Factor::dinf()}, "b1*b2", "a1^2*a2^3"});
  for (const auto& spec : specs) {
    const SquareData d(spec);
    const auto q = image_of_a_squared(spec, d);
    const auto report = is_simple(d.module(), q);
    if (report.simple()) {
      EXPECT_NO_THROW(build_retraction(spec, d, q, report.witness().character));
    } else {
      for (const auto& c : report.components)
        if (c.content != 0) EXPECT_EQ(code_of([&] { build_retraction(spec, d, q, c.character); }), ErrorCode::NotSimple);
    }
  }
}

TEST(SpecFormat, ParseAndFormat) {
  const std::string text =
      "vclose-spec v1\n"
      "# comment\n"
      "factors = [DInf, DInf, Zed, ZedMod( 3 )]\n"
      "b = \"b1*b2\"  # trailing\n"
      "a = \"a1^3*a2^5\"\n";
  const GroupSpec s = parse_spec(text);
  ASSERT_EQ(s.factors.size(), 4u);
  EXPECT_EQ(s.factors[3], Factor::zed_mod(3));
  EXPECT_EQ(s.h_b, "b1*b2");
  EXPECT_EQ(s.h_a, "a1^3*a2^5");
  const GroupSpec again = parse_spec(format_spec(s));
  EXPECT_EQ(again.factors, s.factors);
  EXPECT_EQ(again.h_a, s.h_a);
  EXPECT_EQ(format_spec(again), format_spec(s));
  const GroupSpec one_line = parse_spec("vclose-spec v1\nfactors = [DInf, DInf]; b = \"b1*b2\"; a = \"a1^3*a2^5\"\n");
  EXPECT_EQ(format_spec(one_line), format_spec(kWorked));
}

TEST(SpecFormat, Errors) {
  const std::string head = "vclose-spec v1\n";
  for (const std::string bad : {std::string("factors = [DInf]\nb = \"b1\"\na = \"a1\"\n"),
                                head + "factors = [DInf]\nb = \"b1\"\n",
                                head + "factors = [DInf]\nb = \"b1\"\nb = \"b1\"\na = \"a1\"\n",
                                head + "factors = [DInf]\nb = \"b1\"\na = \"a1\"\nc = \"1\"\n",
                                head + "factors = [Dinf]\nb = \"b1\"\na = \"a1\"\n",
                                head + "factors = [DInf]\nb = \"b1\"\na = \"a1^\"\n",
                                head + "factors = [DInf]\nb = \"b1\na = \"a1\"\n",
                                head + "factors = [ZedMod(0)]\nb = \"1\"\na = \"c1\"\n"})
    EXPECT_EQ(code_of([&] { parse_spec(bad); }), ErrorCode::ParseError) << bad;
  try {
    parse_spec(head + "factors = [DInf]\nb = \"b1\"\na = \"a1^\"\n");
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
  EXPECT_EQ(code_of([] { read_spec_file("/nonexistent/x.spec"); }), ErrorCode::ParseError);
}
