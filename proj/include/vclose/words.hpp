#pragma once

// Free-group words as shared DAGs (straight-line programs). Words are never
// flattened on the evaluation path; `reduce` exists for small words only.

#include <concepts>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vclose/action.hpp"
#include "vclose/error.hpp"
#include "vclose/lattice.hpp"

namespace vclose {

enum class WordKind { Generator, Inverse, Concat, Power };

namespace detail {
struct WordNode;
}

class SLWord {
 public:
  /// The empty word.
  SLWord();

  static SLWord generator(std::string name);
  static SLWord identity() { return SLWord(); }
  static SLWord inverse(const SLWord& w);
  static SLWord concat(std::vector<SLWord> parts);
  static SLWord power(const SLWord& w, Integer exponent);

  WordKind kind() const;
  const std::string& name() const;            // Generator
  const std::vector<SLWord>& children() const;  // Inverse: one child; Power: one child
  const Integer& exponent() const;            // Power
  /// Flattened length, computed without flattening (before free reduction).
  const Integer& length() const;
  /// Number of distinct DAG nodes reachable from this word.
  std::size_t node_count() const;
  /// Sorted distinct generator names.
  std::vector<std::string> generators() const;

  const detail::WordNode* id() const noexcept { return node_.get(); }
  bool same_node(const SLWord& other) const noexcept { return node_ == other.node_; }

  /// Postorder listing of distinct nodes (children before parents).
  std::vector<SLWord> topological_order() const;

  friend SLWord operator*(const SLWord& a, const SLWord& b) { return concat({a, b}); }

 private:
  explicit SLWord(std::shared_ptr<const detail::WordNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const detail::WordNode> node_;
};

namespace detail {
struct WordNode {
  WordKind kind;
  std::string name;
  std::vector<SLWord> children;
  Integer exponent;
  Integer length;
};
}  // namespace detail

struct Letter {
  std::string generator;
  int sign = 1;
  friend bool operator==(const Letter&, const Letter&) = default;
};
using FlatWord = std::vector<Letter>;

inline constexpr std::uint64_t kDefaultReduceCap = 1'000'000;

/// Freely reduced letter sequence. Throws TooLarge above `cap` letters.
FlatWord reduce(const SLWord& w, std::uint64_t cap = kDefaultReduceCap);
std::string to_string(const FlatWord& w);

// ---------------------------------------------------------------------------
// Evaluation

/// The group contract used by evaluation.
template <class G>
concept GroupContract = requires(const G& g, const typename G::Element& x) {
  { g.identity() } -> std::convertible_to<typename G::Element>;
  { g.multiply(x, x) } -> std::convertible_to<typename G::Element>;
  { g.inverse(x) } -> std::convertible_to<typename G::Element>;
};

template <class G>
concept HasPower = requires(const G& g, const typename G::Element& x, const Integer& n) {
  { g.power(x, n) } -> std::convertible_to<typename G::Element>;
};

template <GroupContract G>
typename G::Element group_power(const G& group, const typename G::Element& x, const Integer& n) {
  if constexpr (HasPower<G>) {
    return group.power(x, n);
  } else {
    typename G::Element base = n < 0 ? group.inverse(x) : x;
    Integer e = abs(n);
    typename G::Element result = group.identity();
    while (e != 0) {
      if (mpz_odd_p(e.get_mpz_t())) result = group.multiply(result, base);
      e >>= 1;
      if (e != 0) base = group.multiply(base, base);
    }
    return result;
  }
}

/// A word DAG compiled to a straight-line program: one instruction per
/// distinct node, generator slots resolved once.
class WordProgram {
 public:
  WordProgram() = default;
  explicit WordProgram(const SLWord& root);

  /// Generator names in slot order.
  const std::vector<std::string>& generator_names() const noexcept { return names_; }
  std::size_t instruction_count() const noexcept { return code_.size(); }

  /// Values indexed like generator_names().
  template <GroupContract G>
  typename G::Element run(const G& group, std::span<const typename G::Element> values) const;

  template <GroupContract G>
  typename G::Element run(const G& group, const std::map<std::string, typename G::Element>& assignment) const;

 private:
  struct Instruction {
    WordKind kind;
    std::size_t operand = 0;             // generator slot or child instruction
    std::vector<std::size_t> operands;   // Concat children
    Integer exponent;
  };
  std::vector<std::string> names_;
  std::vector<Instruction> code_;
};

template <GroupContract G>
typename G::Element WordProgram::run(const G& group, std::span<const typename G::Element> values) const {
  if (values.size() != names_.size()) throw Error(ErrorCode::UnboundGenerator, "wrong number of generator values");
  std::vector<typename G::Element> slot;
  slot.reserve(code_.size());
  for (const auto& ins : code_) {
    switch (ins.kind) {
      case WordKind::Generator:
        slot.push_back(values[ins.operand]);
        break;
      case WordKind::Inverse:
        slot.push_back(group.inverse(slot[ins.operand]));
        break;
      case WordKind::Power:
        slot.push_back(group_power(group, slot[ins.operand], ins.exponent));
        break;
      case WordKind::Concat: {
        if (ins.operands.empty()) {
          slot.push_back(group.identity());
          break;
        }
        typename G::Element acc = slot[ins.operands[0]];
        for (std::size_t i = 1; i < ins.operands.size(); ++i) acc = group.multiply(acc, slot[ins.operands[i]]);
        slot.push_back(std::move(acc));
        break;
      }
    }
  }
  return slot.empty() ? group.identity() : slot.back();
}

template <GroupContract G>
typename G::Element WordProgram::run(const G& group,
                                     const std::map<std::string, typename G::Element>& assignment) const {
  std::vector<typename G::Element> values;
  values.reserve(names_.size());
  for (const auto& name : names_) {
    auto it = assignment.find(name);
    if (it == assignment.end()) throw Error(ErrorCode::UnboundGenerator, "no value for generator '" + name + "'");
    values.push_back(it->second);
  }
  return run(group, std::span<const typename G::Element>(values));
}

/// Image of w under the homomorphism induced by `assignment`; each distinct
/// node is evaluated once.
template <GroupContract G>
typename G::Element evaluate(const SLWord& w, const std::map<std::string, typename G::Element>& assignment,
                             const G& group) {
  return WordProgram(w).run(group, assignment);
}

/// Wraps a group and counts group operations.
template <GroupContract G>
class CountingGroup {
 public:
  using Element = typename G::Element;
  explicit CountingGroup(const G& inner) : inner_(inner) {}
  Element identity() const { return inner_.identity(); }
  Element multiply(const Element& a, const Element& b) const {
    ++operations_;
    return inner_.multiply(a, b);
  }
  Element inverse(const Element& a) const {
    ++operations_;
    return inner_.inverse(a);
  }
  Element power(const Element& a, const Integer& n) const {
    ++operations_;
    return group_power(inner_, a, n);
  }
  std::uint64_t operations() const noexcept { return operations_; }

 private:
  const G& inner_;
  mutable std::uint64_t operations_ = 0;
};

/// The free group on named generators; elements are freely reduced words.
class FreeGroup {
 public:
  using Element = FlatWord;
  Element identity() const { return {}; }
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  static Element letter(const std::string& name) { return {Letter{name, 1}}; }
};

/// Q semidirect C for an involution module; the arena where skew commutators
/// act as (1 + chi(c) c) on Q.
class ModuleGroup {
 public:
  struct Element {
    IntegerVector q;  // canonical Smith coordinates
    GroupMask c = 0;
    friend bool operator==(const Element&, const Element&) = default;
  };

  explicit ModuleGroup(const InvolutionModule& module);

  Element identity() const;
  Element multiply(const Element& a, const Element& b) const;
  Element inverse(const Element& a) const;
  Element power(const Element& a, const Integer& n) const;

  Element from_module(const IntegerVector& ambient_q) const;
  Element from_c(GroupMask c) const;
  const InvolutionModule& module() const noexcept { return *module_; }

 private:
  IntegerVector act(GroupMask c, const IntegerVector& smith_q) const;
  const InvolutionModule* module_;
  std::vector<IntegerMatrix> smith_actions_;  // per generator, in Smith coordinates
  IntegerMatrix to_smith_;
  IntegerMatrix from_smith_;
};

// ---------------------------------------------------------------------------
// Builders

/// body * c * body^sign * c^-1, with `body` shared between its occurrences.
SLWord skew_commutator(const SLWord& c_expr, int sign, const SLWord& body);

/// f(c_1, f(c_2, ..., f(c_N, y)...)) with c_exprs[i] the word for the element
/// of C with mask i (so c_exprs.size() == 2^m).
SLWord build_w_chi(const Character& chi, std::span<const SLWord> c_exprs, const SLWord& y);

/// Words x_{j1} x_{j2} ... for every element of C, indexed by mask.
std::vector<SLWord> coset_words(std::span<const SLWord> generators);

/// v_chi(x_1..x_m, y): w_chi with each element of C written over the x_j.
SLWord build_v_chi(const Character& chi, std::span<const SLWord> coset_words, const SLWord& y);

std::string x_variable(std::size_t j);  // 1-based: "x1", "x2", ...

}  // namespace vclose
