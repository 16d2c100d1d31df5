#include "vclose/words.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace vclose {

namespace {

std::shared_ptr<const detail::WordNode> make_node(WordKind kind, std::string name, std::vector<SLWord> children,
                                                  Integer exponent, Integer length) {
  auto node = std::make_shared<detail::WordNode>();
  node->kind = kind;
  node->name = std::move(name);
  node->children = std::move(children);
  node->exponent = std::move(exponent);
  node->length = std::move(length);
  return node;
}

const std::shared_ptr<const detail::WordNode>& empty_node() {
  static const auto node = make_node(WordKind::Concat, "", {}, Integer(0), Integer(0));
  return node;
}

}  // namespace

SLWord::SLWord() : node_(empty_node()) {}

SLWord SLWord::generator(std::string name) {
  if (name.empty()) throw Error(ErrorCode::InvalidArgument, "generator name must not be empty");
  return SLWord(make_node(WordKind::Generator, std::move(name), {}, Integer(0), Integer(1)));
}

SLWord SLWord::inverse(const SLWord& w) {
  return SLWord(make_node(WordKind::Inverse, "", {w}, Integer(0), w.length()));
}

SLWord SLWord::concat(std::vector<SLWord> parts) {
  Integer length = 0;
  for (const auto& p : parts) length += p.length();
  return SLWord(make_node(WordKind::Concat, "", std::move(parts), Integer(0), std::move(length)));
}

SLWord SLWord::power(const SLWord& w, Integer exponent) {
  Integer length = abs(exponent) * w.length();
  return SLWord(make_node(WordKind::Power, "", {w}, std::move(exponent), std::move(length)));
}

WordKind SLWord::kind() const { return node_->kind; }
const std::string& SLWord::name() const { return node_->name; }
const std::vector<SLWord>& SLWord::children() const { return node_->children; }
const Integer& SLWord::exponent() const { return node_->exponent; }
const Integer& SLWord::length() const { return node_->length; }

std::vector<SLWord> SLWord::topological_order() const {
  std::vector<SLWord> order;
  std::unordered_set<const detail::WordNode*> seen;
  // Iterative postorder; DAG depth grows with |C|.
  std::vector<std::pair<SLWord, std::size_t>> stack{{*this, 0}};
  seen.insert(id());
  while (!stack.empty()) {
    auto& [word, next] = stack.back();
    const auto& kids = word.children();
    if (next < kids.size()) {
      const SLWord child = kids[next++];
      if (seen.insert(child.id()).second) stack.emplace_back(child, 0);
      continue;
    }
    order.push_back(word);
    stack.pop_back();
  }
  return order;
}

std::size_t SLWord::node_count() const { return topological_order().size(); }

std::vector<std::string> SLWord::generators() const {
  std::set<std::string> names;
  for (const auto& w : topological_order())
    if (w.kind() == WordKind::Generator) names.insert(w.name());
  return {names.begin(), names.end()};
}

// ---------------------------------------------------------------------------
// Flattening

namespace {

void push_letter(FlatWord& out, const std::string& generator, int sign) {
  if (!out.empty() && out.back().generator == generator && out.back().sign == -sign) {
    out.pop_back();
    return;
  }
  out.push_back(Letter{generator, sign});
}

void emit(const SLWord& w, bool inverted, FlatWord& out) {
  switch (w.kind()) {
    case WordKind::Generator:
      push_letter(out, w.name(), inverted ? -1 : 1);
      return;
    case WordKind::Inverse:
      emit(w.children()[0], !inverted, out);
      return;
    case WordKind::Concat:
      if (inverted)
        for (auto it = w.children().rbegin(); it != w.children().rend(); ++it) emit(*it, true, out);
      else
        for (const auto& c : w.children()) emit(c, false, out);
      return;
    case WordKind::Power: {
      const bool flip = w.exponent() < 0;
      for (Integer i = 0; i < abs(w.exponent()); ++i) emit(w.children()[0], inverted != flip, out);
      return;
    }
  }
}

}  // namespace

FlatWord reduce(const SLWord& w, std::uint64_t cap) {
  if (w.length() > Integer(std::to_string(cap)))
    throw Error(ErrorCode::TooLarge, "flattened length " + w.length().get_str() + " exceeds " + std::to_string(cap));
  FlatWord out;
  emit(w, false, out);
  return out;
}

std::string to_string(const FlatWord& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) out += '*';
    out += w[i].generator;
    if (w[i].sign < 0) out += "^-1";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Straight-line programs

WordProgram::WordProgram(const SLWord& root) {
  const auto order = root.topological_order();
  std::unordered_map<const detail::WordNode*, std::size_t> index;
  std::unordered_map<std::string, std::size_t> slots;
  code_.reserve(order.size());
  for (const auto& w : order) {
    Instruction ins;
    ins.kind = w.kind();
    switch (w.kind()) {
      case WordKind::Generator: {
        auto [it, inserted] = slots.emplace(w.name(), names_.size());
        if (inserted) names_.push_back(w.name());
        ins.operand = it->second;
        break;
      }
      case WordKind::Inverse:
        ins.operand = index.at(w.children()[0].id());
        break;
      case WordKind::Power:
        ins.operand = index.at(w.children()[0].id());
        ins.exponent = w.exponent();
        break;
      case WordKind::Concat:
        for (const auto& c : w.children()) ins.operands.push_back(index.at(c.id()));
        break;
    }
    index.emplace(w.id(), code_.size());
    code_.push_back(std::move(ins));
  }
}

FreeGroup::Element FreeGroup::multiply(const Element& a, const Element& b) const {
  Element out = a;
  for (const auto& letter : b) push_letter(out, letter.generator, letter.sign);
  return out;
}

FreeGroup::Element FreeGroup::inverse(const Element& a) const {
  Element out;
  out.reserve(a.size());
  for (auto it = a.rbegin(); it != a.rend(); ++it) out.push_back(Letter{it->generator, -it->sign});
  return out;
}

// ---------------------------------------------------------------------------
// Q semidirect C

ModuleGroup::ModuleGroup(const InvolutionModule& module)
    : module_(&module), to_smith_(module.group().to_smith()), from_smith_(module.group().from_smith()) {
  for (const auto& a : module.actions()) smith_actions_.push_back(to_smith_ * a * from_smith_);
}

IntegerVector ModuleGroup::act(GroupMask c, const IntegerVector& smith_q) const {
  IntegerVector out = smith_q;
  const std::size_t m = module_->c_rank();
  for (std::size_t j = m; j-- > 0;)
    if (mask_bit(c, j, m)) out = smith_actions_[j] * out;
  module_->group().reduce_smith(out);
  return out;
}

ModuleGroup::Element ModuleGroup::identity() const {
  return Element{IntegerVector(module_->ambient_rank()), 0};
}

ModuleGroup::Element ModuleGroup::multiply(const Element& a, const Element& b) const {
  Element out{act(a.c, b.q), a.c ^ b.c};
  for (std::size_t i = 0; i < out.q.size(); ++i) out.q[i] += a.q[i];
  module_->group().reduce_smith(out.q);
  return out;
}

ModuleGroup::Element ModuleGroup::inverse(const Element& a) const {
  // (q, c)^-1 = (-c q, c) since c is an involution.
  Element out{act(a.c, a.q), a.c};
  for (auto& x : out.q) x = -x;
  module_->group().reduce_smith(out.q);
  return out;
}

ModuleGroup::Element ModuleGroup::power(const Element& a, const Integer& n) const {
  if (a.c == 0) {
    Element out{a.q, 0};
    for (auto& x : out.q) x *= n;
    module_->group().reduce_smith(out.q);
    return out;
  }
  // (q, c)^2 = (q + c q, 1).
  Element square = multiply(a, a);
  Integer half = n / 2;  // truncates toward zero
  Element out = power(square, half);
  if (mpz_odd_p(n.get_mpz_t())) out = n > 0 ? multiply(out, a) : multiply(out, inverse(a));
  return out;
}

ModuleGroup::Element ModuleGroup::from_module(const IntegerVector& ambient_q) const {
  return Element{module_->group().canonical(ambient_q), 0};
}

ModuleGroup::Element ModuleGroup::from_c(GroupMask c) const { return Element{IntegerVector(module_->ambient_rank()), c}; }

// ---------------------------------------------------------------------------
// Builders

SLWord skew_commutator(const SLWord& c_expr, int sign, const SLWord& body) {
  if (sign != 1 && sign != -1) throw Error(ErrorCode::InvalidArgument, "skew commutator sign must be +-1");
  return SLWord::concat({body, c_expr, sign > 0 ? body : SLWord::inverse(body), SLWord::inverse(c_expr)});
}

SLWord build_w_chi(const Character& chi, std::span<const SLWord> c_exprs, const SLWord& y) {
  if (chi.rank() >= 63 || c_exprs.size() != (std::size_t{1} << chi.rank()))
    throw Error(ErrorCode::InvalidArgument, "need one word per element of C");
  SLWord acc = y;
  for (std::size_t i = c_exprs.size(); i-- > 0;) acc = skew_commutator(c_exprs[i], chi(i), acc);
  return acc;
}

std::vector<SLWord> coset_words(std::span<const SLWord> generators) {
  const std::size_t m = generators.size();
  if (m >= 20) throw Error(ErrorCode::InvalidArgument, "too many coset generators");
  std::vector<SLWord> out;
  out.reserve(std::size_t{1} << m);
  for (GroupMask c = 0; c < (GroupMask{1} << m); ++c) {
    std::vector<SLWord> parts;
    for (std::size_t j = 0; j < m; ++j)
      if (mask_bit(c, j, m)) parts.push_back(generators[j]);
    out.push_back(parts.size() == 1 ? parts[0] : SLWord::concat(std::move(parts)));
  }
  return out;
}

SLWord build_v_chi(const Character& chi, std::span<const SLWord> coset_words, const SLWord& y) {
  return build_w_chi(chi, coset_words, y);
}

std::string x_variable(std::size_t j) { return "x" + std::to_string(j); }

}  // namespace vclose
