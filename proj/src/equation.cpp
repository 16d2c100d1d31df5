#include "vclose/equation.hpp"

#include <cctype>
#include <sstream>
#include <unordered_map>

namespace vclose {

std::string y_variable(std::size_t character_index, std::size_t i) {
  return "y" + std::to_string(character_index) + "_" + std::to_string(i);
}

Integer witness_rhs_exponent(std::size_t c_rank, const Integer& torsion_order) {
  if (c_rank >= 32) throw Error(ErrorCode::InvalidArgument, "C too large");
  Integer out;
  mpz_mul_2exp(out.get_mpz_t(), torsion_order.get_mpz_t(), (std::uint64_t{1} << c_rank) + 1);
  return out;
}

Equation build_witness_equation(std::span<const Integer> contents, const Integer& torsion_order,
                                std::size_t c_rank, const WitnessOptions& options) {
  if (options.squares == 0) throw Error(ErrorCode::InvalidArgument, "need at least one square per block");
  if (abs(options.filler) == 1) throw Error(ErrorCode::InvalidArgument, "filler exponent must not be +-1");
  if (torsion_order < 1) throw Error(ErrorCode::InvalidArgument, "torsion order must be positive");
  if (c_rank >= 20 || contents.size() != (std::size_t{1} << c_rank))
    throw Error(ErrorCode::InvalidArgument, "need one exponent per character");

  Equation eq;
  eq.rhs_generator = options.rhs_generator;
  eq.c_rank = c_rank;
  eq.torsion_order = torsion_order;
  eq.squares = options.squares;
  eq.filler = options.filler;
  eq.contents.assign(contents.begin(), contents.end());
  eq.rhs_exponent = witness_rhs_exponent(c_rank, torsion_order);

  std::vector<SLWord> xs;
  for (std::size_t j = 1; j <= c_rank; ++j) xs.push_back(SLWord::generator(x_variable(j)));
  const auto cosets = coset_words(xs);

  const auto characters = enumerate_characters(c_rank);
  std::vector<SLWord> blocks;
  for (std::size_t idx = 0; idx < characters.size(); ++idx) {
    std::vector<SLWord> squares;
    for (std::size_t i = 1; i <= options.squares; ++i)
      squares.push_back(SLWord::power(SLWord::generator(y_variable(idx, i)), 2));
    const SLWord y_block = SLWord::power(SLWord::concat(std::move(squares)), torsion_order);
    blocks.push_back(SLWord::power(build_v_chi(characters[idx], cosets, y_block), eq.exponent(idx)));
  }
  eq.lhs = SLWord::concat(std::move(blocks));
  return eq;
}

Equation build_witness_equation(const SimplicityReport& report, const Integer& torsion_order, std::size_t c_rank,
                                const WitnessOptions& options) {
  if (report.simple()) throw Error(ErrorCode::NotAWitness, "the element is simple");
  const auto& contents = report.non_simple().contents;
  for (const auto& k : contents)
    if (abs(k) == 1) throw Error(ErrorCode::NotAWitness, "a component has content +-1");
  return build_witness_equation(std::span<const Integer>(contents), torsion_order, c_rank, options);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

void write_nodes(std::ostringstream& out, const SLWord& w, std::size_t& root_id) {
  const auto order = w.topological_order();
  std::unordered_map<const detail::WordNode*, std::size_t> id;
  out << "  (nodes";
  for (const auto& node : order) {
    const std::size_t k = id.size();
    id.emplace(node.id(), k);
    out << "\n    (" << k << ' ';
    switch (node.kind()) {
      case WordKind::Generator:
        out << "gen " << node.name();
        break;
      case WordKind::Inverse:
        out << "inv " << id.at(node.children()[0].id());
        break;
      case WordKind::Power:
        out << "pow " << id.at(node.children()[0].id()) << ' ' << node.exponent();
        break;
      case WordKind::Concat:
        out << "cat";
        for (const auto& c : node.children()) out << ' ' << id.at(c.id());
        break;
    }
    out << ')';
  }
  out << ")\n";
  root_id = id.at(w.id());
}

struct Sexp {
  std::string atom;
  std::vector<Sexp> list;
  bool is_atom = false;
};

class SexpReader {
 public:
  explicit SexpReader(const std::string& text) : text_(text) {}

  Sexp read() {
    skip();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    if (text_[pos_] == '(') {
      ++pos_;
      Sexp s;
      for (;;) {
        skip();
        if (pos_ >= text_.size()) fail("unterminated list");
        if (text_[pos_] == ')') {
          ++pos_;
          return s;
        }
        s.list.push_back(read());
      }
    }
    if (text_[pos_] == ')') fail("unexpected ')'");
    Sexp s;
    s.is_atom = true;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')')
      s.atom += text_[pos_++];
    return s;
  }

  void expect_end() {
    skip();
    if (pos_ != text_.size()) fail("trailing input");
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::ParseError, what + " at offset " + std::to_string(pos_));
  }
  const std::string& text_;
  std::size_t pos_ = 0;
};

const std::string& atom(const Sexp& s, const char* what) {
  if (!s.is_atom) throw Error(ErrorCode::ParseError, std::string("expected atom for ") + what);
  return s.atom;
}

Integer integer_atom(const Sexp& s, const char* what) {
  Integer out;
  if (out.set_str(atom(s, what), 10) != 0) throw Error(ErrorCode::ParseError, std::string("bad integer for ") + what);
  return out;
}

std::size_t size_atom(const Sexp& s, const char* what) {
  Integer v = integer_atom(s, what);
  if (v < 0 || !v.fits_ulong_p()) throw Error(ErrorCode::ParseError, std::string("bad count for ") + what);
  return v.get_ui();
}

SLWord read_nodes(const Sexp& nodes, std::size_t root) {
  std::vector<SLWord> built;
  for (std::size_t i = 1; i < nodes.list.size(); ++i) {
    const Sexp& n = nodes.list[i];
    if (n.is_atom || n.list.size() < 2) throw Error(ErrorCode::ParseError, "malformed node");
    if (size_atom(n.list[0], "node id") != built.size()) throw Error(ErrorCode::ParseError, "node ids out of order");
    const std::string& op = atom(n.list[1], "node kind");
    auto ref = [&](std::size_t k) -> const SLWord& {
      std::size_t r = size_atom(n.list.at(k), "node reference");
      if (r >= built.size()) throw Error(ErrorCode::ParseError, "forward node reference");
      return built[r];
    };
    if (op == "gen" && n.list.size() == 3) {
      built.push_back(SLWord::generator(atom(n.list[2], "generator")));
    } else if (op == "inv" && n.list.size() == 3) {
      built.push_back(SLWord::inverse(ref(2)));
    } else if (op == "pow" && n.list.size() == 4) {
      built.push_back(SLWord::power(ref(2), integer_atom(n.list[3], "exponent")));
    } else if (op == "cat") {
      std::vector<SLWord> parts;
      for (std::size_t k = 2; k < n.list.size(); ++k) parts.push_back(ref(k));
      built.push_back(SLWord::concat(std::move(parts)));
    } else {
      throw Error(ErrorCode::ParseError, "unknown node '" + op + "'");
    }
  }
  if (root >= built.size()) throw Error(ErrorCode::ParseError, "root node out of range");
  return built[root];
}

}  // namespace

std::string serialize(const SLWord& w) {
  std::ostringstream out;
  out << "(word\n";
  std::size_t root = 0;
  write_nodes(out, w, root);
  out << "  (root " << root << "))\n";
  return out.str();
}

std::string serialize(const Equation& eq) {
  std::ostringstream out;
  out << "(equation\n";
  out << "  (version 1)\n";
  out << "  (c-rank " << eq.c_rank << ")\n";
  out << "  (torsion-order " << eq.torsion_order << ")\n";
  out << "  (squares " << eq.squares << ")\n";
  out << "  (filler " << eq.filler << ")\n";
  out << "  (contents";
  for (const auto& k : eq.contents) out << ' ' << k;
  out << ")\n";
  out << "  (rhs " << eq.rhs_generator << ' ' << eq.rhs_exponent << ")\n";
  std::size_t root = 0;
  write_nodes(out, eq.lhs, root);
  out << "  (lhs " << root << "))\n";
  return out.str();
}

Equation parse_equation(const std::string& text) {
  SexpReader reader(text);
  const Sexp top = reader.read();
  reader.expect_end();
  if (top.is_atom || top.list.empty() || atom(top.list[0], "header") != "equation")
    throw Error(ErrorCode::ParseError, "expected (equation ...)");

  Equation eq;
  const Sexp* nodes = nullptr;
  std::optional<std::size_t> lhs;
  bool have_rhs = false;
  for (std::size_t i = 1; i < top.list.size(); ++i) {
    const Sexp& field = top.list[i];
    if (field.is_atom || field.list.empty()) throw Error(ErrorCode::ParseError, "malformed field");
    const std::string& key = atom(field.list[0], "field name");
    auto single = [&]() -> const Sexp& {
      if (field.list.size() != 2) throw Error(ErrorCode::ParseError, "field '" + key + "' takes one value");
      return field.list[1];
    };
    if (key == "version") {
      if (size_atom(single(), "version") != 1) throw Error(ErrorCode::ParseError, "unsupported version");
    } else if (key == "c-rank") {
      eq.c_rank = size_atom(single(), "c-rank");
    } else if (key == "torsion-order") {
      eq.torsion_order = integer_atom(single(), "torsion-order");
    } else if (key == "squares") {
      eq.squares = size_atom(single(), "squares");
    } else if (key == "filler") {
      eq.filler = integer_atom(single(), "filler");
    } else if (key == "contents") {
      for (std::size_t k = 1; k < field.list.size(); ++k) eq.contents.push_back(integer_atom(field.list[k], "k"));
    } else if (key == "rhs") {
      if (field.list.size() != 3) throw Error(ErrorCode::ParseError, "rhs takes a generator and an exponent");
      eq.rhs_generator = atom(field.list[1], "rhs generator");
      eq.rhs_exponent = integer_atom(field.list[2], "rhs exponent");
      have_rhs = true;
    } else if (key == "nodes") {
      nodes = &field;
    } else if (key == "lhs") {
      lhs = size_atom(single(), "lhs");
    } else {
      throw Error(ErrorCode::ParseError, "unknown field '" + key + "'");
    }
  }
  if (!nodes || !lhs || !have_rhs) throw Error(ErrorCode::ParseError, "equation needs nodes, lhs and rhs");
  eq.lhs = read_nodes(*nodes, *lhs);
  return eq;
}

}  // namespace vclose
