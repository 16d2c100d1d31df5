#include "vclose/ambient.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

namespace vclose {

namespace {

Integer mod_reduce(const Integer& k, const Integer& modulus) {
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), k.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

bool is_even(const Integer& k) { return mpz_even_p(k.get_mpz_t()) != 0; }

}  // namespace

std::string Factor::to_string() const {
  switch (kind) {
    case FactorKind::DInf:
      return "DInf";
    case FactorKind::Zed:
      return "Zed";
    case FactorKind::ZedMod:
      return "ZedMod(" + modulus.get_str() + ")";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// The product group

AmbientGroup::AmbientGroup(std::vector<Factor> factors) : factors_(std::move(factors)) {
  std::size_t dinf = 0, zed = 0, zmod = 0;
  const std::size_t n = factors_.size();
  auto unit = [&](std::size_t i, DihedralElement x) {
    Element g = identity();
    g.coordinates[i] = std::move(x);
    return g;
  };
  for (std::size_t i = 0; i < n; ++i) {
    const Factor& f = factors_[i];
    switch (f.kind) {
      case FactorKind::DInf: {
        ++dinf;
        const std::string a = "a" + std::to_string(dinf), b = "b" + std::to_string(dinf);
        names_.push_back(a);
        names_.push_back(b);
        index_.emplace(a, unit(i, DihedralElement::a()));
        index_.emplace(b, unit(i, DihedralElement::b()));
        break;
      }
      case FactorKind::Zed: {
        const std::string t = "t" + std::to_string(++zed);
        names_.push_back(t);
        index_.emplace(t, unit(i, DihedralElement::a()));
        break;
      }
      case FactorKind::ZedMod: {
        if (f.modulus < 1) throw Error(ErrorCode::InvalidArgument, "ZedMod modulus must be at least 1");
        const std::string c = "c" + std::to_string(++zmod);
        names_.push_back(c);
        index_.emplace(c, unit(i, DihedralElement::a(mod_reduce(1, f.modulus))));
        break;
      }
    }
  }
}

AmbientElement AmbientGroup::identity() const { return Element{std::vector<DihedralElement>(factors_.size())}; }

AmbientElement AmbientGroup::multiply(const Element& g, const Element& h) const {
  Element out;
  out.coordinates.reserve(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& x = g.coordinates[i];
    const auto& y = h.coordinates[i];
    switch (factors_[i].kind) {
      case FactorKind::DInf:
        out.coordinates.push_back(vclose::multiply(x, y));
        break;
      case FactorKind::Zed:
        out.coordinates.push_back(DihedralElement::a(x.translation + y.translation));
        break;
      case FactorKind::ZedMod:
        out.coordinates.push_back(DihedralElement::a(mod_reduce(x.translation + y.translation, factors_[i].modulus)));
        break;
    }
  }
  return out;
}

AmbientElement AmbientGroup::inverse(const Element& g) const {
  Element out;
  out.coordinates.reserve(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& x = g.coordinates[i];
    switch (factors_[i].kind) {
      case FactorKind::DInf:
        out.coordinates.push_back(DihedralGroup{}.inverse(x));
        break;
      case FactorKind::Zed:
        out.coordinates.push_back(DihedralElement::a(-x.translation));
        break;
      case FactorKind::ZedMod:
        out.coordinates.push_back(DihedralElement::a(mod_reduce(-x.translation, factors_[i].modulus)));
        break;
    }
  }
  return out;
}

AmbientElement AmbientGroup::power(const Element& g, const Integer& n) const {
  Element out;
  out.coordinates.reserve(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& x = g.coordinates[i];
    switch (factors_[i].kind) {
      case FactorKind::DInf:
        out.coordinates.push_back(DihedralGroup{}.power(x, n));
        break;
      case FactorKind::Zed:
        out.coordinates.push_back(DihedralElement::a(x.translation * n));
        break;
      case FactorKind::ZedMod:
        out.coordinates.push_back(DihedralElement::a(mod_reduce(x.translation * n, factors_[i].modulus)));
        break;
    }
  }
  return out;
}

AmbientElement AmbientGroup::generator(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw Error(ErrorCode::ParseError, "unknown generator '" + name + "'");
  return it->second;
}

bool AmbientGroup::has_infinite_order(const Element& g) const {
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (factors_[i].kind == FactorKind::DInf && g.coordinates[i].has_infinite_order()) return true;
    if (factors_[i].kind == FactorKind::Zed && g.coordinates[i].translation != 0) return true;
  }
  return false;
}

std::string AmbientGroup::to_string(const Element& g) const {
  std::vector<std::string> parts;
  std::size_t dinf = 0, zed = 0, zmod = 0;
  auto term = [&](const std::string& name, const Integer& k) {
    if (k == 0) return;
    parts.push_back(k == 1 ? name : name + "^" + k.get_str());
  };
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const auto& x = g.coordinates[i];
    switch (factors_[i].kind) {
      case FactorKind::DInf:
        ++dinf;
        term("a" + std::to_string(dinf), x.translation);
        if (x.flip) parts.push_back("b" + std::to_string(dinf));
        break;
      case FactorKind::Zed:
        term("t" + std::to_string(++zed), x.translation);
        break;
      case FactorKind::ZedMod:
        term("c" + std::to_string(++zmod), x.translation);
        break;
    }
  }
  if (parts.empty()) return "1";
  std::string out = parts[0];
  for (std::size_t i = 1; i < parts.size(); ++i) out += "*" + parts[i];
  return out;
}

// ---------------------------------------------------------------------------
// Word syntax

namespace {

class WordParser {
 public:
  WordParser(const std::string& text, const AmbientGroup& group) : text_(text), group_(group) {}

  SLWord parse() {
    SLWord w = word();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return w;
  }

 private:
  SLWord word() {
    std::vector<SLWord> parts{term()};
    for (skip(); pos_ < text_.size() && text_[pos_] == '*'; skip()) {
      ++pos_;
      parts.push_back(term());
    }
    return parts.size() == 1 ? parts[0] : SLWord::concat(std::move(parts));
  }

  SLWord term() {
    SLWord base = atom();
    skip();
    if (pos_ < text_.size() && text_[pos_] == '^') {
      ++pos_;
      return SLWord::power(base, exponent());
    }
    return base;
  }

  SLWord atom() {
    skip();
    if (pos_ >= text_.size()) fail("expected a generator");
    const char ch = text_[pos_];
    if (ch == '(') {
      ++pos_;
      SLWord inner = word();
      skip();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (ch == '1') {
      ++pos_;
      return SLWord::identity();
    }
    if (!std::isalpha(static_cast<unsigned char>(ch))) fail("expected a generator");
    const std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    if (!group_.has_generator(name)) fail("unknown generator '" + name + "'");
    return SLWord::generator(name);
  }

  Integer exponent() {
    skip();
    bool paren = false;
    if (pos_ < text_.size() && text_[pos_] == '(') {
      paren = true;
      ++pos_;
      skip();
    }
    std::string digits;
    if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) digits += text_[pos_++];
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) digits += text_[pos_++];
    if (digits.empty() || digits == "-" || digits == "+") fail("expected an integer exponent");
    if (digits[0] == '+') digits.erase(0, 1);
    if (paren) {
      skip();
      if (pos_ >= text_.size() || text_[pos_] != ')') fail("expected ')'");
      ++pos_;
    }
    return Integer(digits);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, "word \"" + text_ + "\": " + what + " at column " + std::to_string(pos_ + 1));
  }

  const std::string& text_;
  const AmbientGroup& group_;
  std::size_t pos_ = 0;
};

}  // namespace

SLWord parse_word(const std::string& text, const AmbientGroup& group) { return WordParser(text, group).parse(); }

AmbientElement evaluate_in(const AmbientGroup& group, const SLWord& w) {
  std::map<std::string, AmbientElement> values;
  for (const auto& name : w.generators()) values.emplace(name, group.generator(name));
  return evaluate(w, values, group);
}

// ---------------------------------------------------------------------------
// Validation

std::vector<SpecViolation> spec_violations(const GroupSpec& spec) {
  std::vector<SpecViolation> out;
  if (spec.factors.empty()) {
    out.push_back({ErrorCode::InvalidArgument, "no factors"});
    return out;
  }
  std::optional<AmbientGroup> group;
  try {
    group.emplace(spec.factors);
  } catch (const Error& e) {
    out.push_back({e.code(), e.what()});
    return out;
  }
  std::optional<AmbientElement> b, a;
  try {
    b = evaluate_in(*group, parse_word(spec.h_b, *group));
  } catch (const Error& e) {
    out.push_back({e.code(), std::string("b: ") + e.what()});
  }
  try {
    a = evaluate_in(*group, parse_word(spec.h_a, *group));
  } catch (const Error& e) {
    out.push_back({e.code(), std::string("a: ") + e.what()});
  }
  if (b) {
    if (*b == group->identity())
      out.push_back({ErrorCode::NotAnInvolution, "b = " + spec.h_b + " is the identity, not of order 2"});
    else if (!(group->multiply(*b, *b) == group->identity()))
      out.push_back({ErrorCode::NotAnInvolution, "b^2 != 1 for b = " + spec.h_b});
  }
  if (a && !group->has_infinite_order(*a))
    out.push_back({ErrorCode::NotInfiniteOrder, "a = " + spec.h_a + " has finite order"});
  if (a && b) {
    const AmbientElement conj = group->multiply(group->multiply(*b, *a), group->inverse(*b));
    if (!(conj == group->inverse(*a))) out.push_back({ErrorCode::NotInverted, "b a b^-1 != a^-1"});
  }
  return out;
}

void validate_spec(const GroupSpec& spec) {
  const auto violations = spec_violations(spec);
  if (violations.empty()) return;
  std::string message;
  for (const auto& v : violations) message += (message.empty() ? "" : "; ") + v.message;
  throw Error(violations.front().code, message);
}

// ---------------------------------------------------------------------------
// Squares and cosets

SquareData::SquareData(const GroupSpec& spec) : spec_(spec), group_(spec.factors) {
  const auto& factors = group_.factors();
  const std::size_t n = factors.size();

  // C-signature layout: (k mod 2, e) per DInf, k mod 2 per Zed and even ZedMod.
  for (const auto& f : factors) {
    c_offset_.push_back(c_dimension_);
    if (f.kind == FactorKind::DInf)
      c_dimension_ += 2;
    else if (f.kind == FactorKind::Zed || is_even(f.modulus))
      c_dimension_ += 1;
  }

  // Independent generators by GF(2) elimination, in canonical generator order.
  std::vector<std::uint64_t> combos;  // bit j <-> d_j, during construction
  for (const auto& name : group_.generator_names()) {
    const AmbientElement g = group_.generator(name);
    auto sig = c_signature(g);
    std::uint64_t combo = std::uint64_t{1} << c_generators_.size();
    for (std::size_t r = 0; r < echelon_.size(); ++r)
      if (sig[pivots_[r]]) {
        for (std::size_t t = 0; t < c_dimension_; ++t) sig[t] ^= echelon_[r][t];
        combo ^= combos[r];
      }
    auto pivot = std::find(sig.begin(), sig.end(), 1);
    if (pivot == sig.end()) continue;
    pivots_.push_back(static_cast<std::size_t>(pivot - sig.begin()));
    echelon_.push_back(std::move(sig));
    combos.push_back(combo);
    c_generators_.push_back(name);
    c_elements_.push_back(g);
  }
  const std::size_t m = c_generators_.size();
  if (m >= 20) throw Error(ErrorCode::TooLarge, "C has rank " + std::to_string(m));
  for (auto combo : combos) {
    GroupMask mask = 0;
    for (std::size_t j = 0; j < m; ++j)
      if ((combo >> j) & 1u) mask |= unit_mask(j, m);
    echelon_masks_.push_back(mask);
  }

  // Q: one coordinate per factor; ZedMod(k) contributes <c^2> of order k / gcd(k, 2).
  std::vector<IntegerVector> relations;
  for (std::size_t i = 0; i < n; ++i)
    if (factors[i].kind == FactorKind::ZedMod) {
      IntegerVector row(n);
      row[i] = is_even(factors[i].modulus) ? Integer(factors[i].modulus / 2) : factors[i].modulus;
      relations.push_back(std::move(row));
    }
  AbelianPresentation q = relations.empty() ? AbelianPresentation(n)
                                            : AbelianPresentation(n, IntegerMatrix::from_rows(relations, n));

  // Action by conjugation, read off column by column.
  std::vector<IntegerMatrix> actions;
  for (const auto& d : c_elements_) {
    IntegerMatrix a(n, n);
    const AmbientElement d_inv = group_.inverse(d);
    for (std::size_t i = 0; i < n; ++i) {
      IntegerVector e(n);
      e[i] = 1;
      const auto col = q_coordinates(group_.multiply(group_.multiply(d, q_element(e)), d_inv));
      for (std::size_t r = 0; r < n; ++r) a(r, i) = col[r];
    }
    actions.push_back(std::move(a));
  }
  module_ = InvolutionModule(std::move(q), std::move(actions));
}

std::vector<std::uint8_t> SquareData::c_signature(const AmbientElement& g) const {
  std::vector<std::uint8_t> sig(c_dimension_);
  const auto& factors = group_.factors();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& x = g.coordinates[i];
    const std::size_t o = c_offset_[i];
    if (factors[i].kind == FactorKind::DInf) {
      sig[o] = !is_even(x.translation);
      sig[o + 1] = x.flip;
    } else if (factors[i].kind == FactorKind::Zed || is_even(factors[i].modulus)) {
      sig[o] = !is_even(x.translation);
    }
  }
  return sig;
}

IntegerVector SquareData::q_coordinates(const AmbientElement& g) const {
  const auto& factors = group_.factors();
  IntegerVector q(factors.size());
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const auto& x = g.coordinates[i];
    switch (factors[i].kind) {
      case FactorKind::DInf:
      case FactorKind::Zed:
        if (x.flip || !is_even(x.translation))
          throw Error(ErrorCode::NotInQ, group_.to_string(g) + " is not a product of squares");
        q[i] = x.translation / 2;
        break;
      case FactorKind::ZedMod: {
        const Integer& k = factors[i].modulus;
        if (is_even(k)) {
          if (!is_even(x.translation))
            throw Error(ErrorCode::NotInQ, group_.to_string(g) + " is not a product of squares");
          q[i] = x.translation / 2;
        } else {
          q[i] = mod_reduce(x.translation * ((k + 1) / 2), k);
        }
        break;
      }
    }
  }
  return q;
}

AmbientElement SquareData::q_element(const IntegerVector& q) const {
  AmbientElement g = group_.identity();
  const auto& factors = group_.factors();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    Integer k = 2 * q.at(i);
    if (factors[i].kind == FactorKind::ZedMod) k = mod_reduce(k, factors[i].modulus);
    g.coordinates[i] = DihedralElement::a(k);
  }
  return g;
}

GroupMask SquareData::c_coordinates(const AmbientElement& g) const {
  auto sig = c_signature(g);
  GroupMask mask = 0;
  for (std::size_t r = 0; r < echelon_.size(); ++r)
    if (sig[pivots_[r]]) {
      for (std::size_t t = 0; t < c_dimension_; ++t) sig[t] ^= echelon_[r][t];
      mask ^= echelon_masks_[r];
    }
  if (std::find(sig.begin(), sig.end(), 1) != sig.end())
    throw Error(ErrorCode::InvalidArgument, "element outside the span of the coset generators");
  return mask;
}

AmbientElement SquareData::coset_representative(GroupMask mask) const {
  AmbientElement g = group_.identity();
  const std::size_t m = c_rank();
  for (std::size_t j = 0; j < m; ++j)
    if (mask_bit(mask, j, m)) g = group_.multiply(g, c_elements_[j]);
  return g;
}

AmbientElement SquareData::square_root_of_generator(std::size_t i) const {
  AmbientElement g = group_.identity();
  const Factor& f = group_.factors().at(i);
  g.coordinates[i] = DihedralElement::a(f.kind == FactorKind::ZedMod ? mod_reduce(1, f.modulus) : Integer(1));
  return g;
}

SquareData square_data(const GroupSpec& spec) { return SquareData(spec); }

IntegerVector image_of_a_squared(const GroupSpec& spec, const SquareData& data) {
  const AmbientGroup& g = data.group();
  const AmbientElement a = evaluate_in(g, parse_word(spec.h_a, g));
  return data.q_coordinates(g.multiply(a, a));
}

// ---------------------------------------------------------------------------
// Solutions in G

Assignment g_solution(const Equation& eq, const SquareData& data, const SimplicityReport& report) {
  if (report.simple()) throw Error(ErrorCode::NotAWitness, "the element is simple");
  if (eq.c_rank != data.c_rank()) throw Error(ErrorCode::InvalidArgument, "equation and group disagree on |C|");
  const AmbientGroup& group = data.group();
  const auto& lifts = report.non_simple().lifts;
  if (lifts.size() != eq.contents.size()) throw Error(ErrorCode::InvalidArgument, "report and equation disagree");

  Assignment out;
  for (std::size_t j = 0; j < data.c_rank(); ++j) out[x_variable(j + 1)] = data.c_generator(j);
  for (std::size_t idx = 0; idx < lifts.size(); ++idx) {
    std::vector<AmbientElement> slots(eq.squares, group.identity());
    std::size_t used = 0;
    const IntegerVector& lift = lifts[idx];
    for (std::size_t i = 0; i < lift.size(); ++i) {
      if (lift[i] == 0) continue;
      const std::size_t slot = std::min(used++, eq.squares - 1);
      // Roots from different factors commute, so an overflowing slot still squares correctly.
      slots[slot] = group.multiply(slots[slot], group.power(data.square_root_of_generator(i), lift[i]));
    }
    AmbientElement check = group.identity();
    for (const auto& y : slots) check = group.multiply(check, group.multiply(y, y));
    if (!(check == data.q_element(lift)))
      throw Error(ErrorCode::NoSquareRoot,
                  "could not write q(" + Character::from_index(idx, eq.c_rank).to_string() + ") as " +
                      std::to_string(eq.squares) + " squares");
    for (std::size_t i = 0; i < eq.squares; ++i) out[y_variable(idx, i + 1)] = slots[i];
  }
  return out;
}

bool verify_solution_in_G(const Equation& eq, const Assignment& assignment, const GroupSpec& spec) {
  const AmbientGroup group(spec.factors);
  const AmbientElement a = evaluate_in(group, parse_word(spec.h_a, group));
  const AmbientElement lhs = WordProgram(eq.lhs).run(group, assignment);
  return lhs == group.power(a, eq.rhs_exponent);
}

AmbientElement random_element(const AmbientGroup& group, long bound, std::mt19937_64& rng) {
  std::uniform_int_distribution<long> coordinate(-bound, bound);
  std::bernoulli_distribution coin(0.5);
  AmbientElement g = group.identity();
  const auto& factors = group.factors();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    switch (factors[i].kind) {
      case FactorKind::DInf:
        g.coordinates[i] = DihedralElement{Integer(coordinate(rng)), coin(rng)};
        break;
      case FactorKind::Zed:
        g.coordinates[i] = DihedralElement::a(Integer(coordinate(rng)));
        break;
      case FactorKind::ZedMod:
        g.coordinates[i] = DihedralElement::a(mod_reduce(Integer(coordinate(rng)), factors[i].modulus));
        break;
    }
  }
  return g;
}

}  // namespace vclose
