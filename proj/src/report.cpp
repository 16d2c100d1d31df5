#include "vclose/report.hpp"

#include <iomanip>
#include <json.hpp>
#include <sstream>

#include "vclose/spec_format.hpp"

namespace vclose {

std::vector<VerificationResult> run_verification(const Verdict& verdict, const VerifyOptions& options) {
  std::vector<VerificationResult> out;
  if (verdict.is_retract()) {
    out.push_back({"retraction", verify_retraction(verdict.retraction(), options.samples, options.bound, options.seed),
                   options.samples});
    return out;
  }
  const auto& nc = verdict.not_closed();
  out.push_back({"solution in G", verify_solution_in_G(nc.equation, nc.solution, verdict.spec), 0});
  out.push_back({"certificate", nc.certificate.valid(), 0});
  out.push_back({"spot check in H",
                 spot_check_no_solution(nc.equation, options.spot_bound, options.spot_trials, options.seed),
                 options.spot_trials});
  return out;
}

namespace {

std::string vec(const IntegerVector& v) { return to_string(std::span<const Integer>(v)); }
std::string vec(const RationalVector& v) { return to_string(std::span<const Rational>(v)); }

std::string q_coordinate_names(const Verdict& v) {
  std::string out;
  for (std::size_t i = 0; i < v.spec.factors.size(); ++i) {
    const auto root = v.data.square_root_of_generator(i);
    out += (i ? ", " : "") + v.data.group().to_string(root) + "^2";
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string dihedral_text(const DihedralElement& x) {
  std::string out;
  if (x.translation != 0) out = x.translation == 1 ? "a" : "a^" + x.translation.get_str();
  if (x.flip) out += out.empty() ? "b" : "*b";
  return out.empty() ? "1" : out;
}

}  // namespace

std::string render_text(const Report& report) {
  const Verdict& v = *report.verdict;
  const auto& module = v.data.module();
  const auto& q = module.group();
  const std::size_t m = v.data.c_rank();
  std::ostringstream out;

  out << "spec:\n";
  std::istringstream spec_lines(format_spec(v.spec));
  for (std::string line; std::getline(spec_lines, line);) out << "  " << line << '\n';

  out << "\nsquares:\n";
  out << "  Q generators: " << q_coordinate_names(v) << '\n';
  out << "  torsion order |T(Q)|: " << q.torsion_order() << ", free rank: " << q.free_rank() << '\n';
  out << "  C generators: " << join(v.data.c_generators(), ", ") << "  (|C| = " << module.c_order() << ")\n";
  out << "  a^2 in Q: " << vec(v.a_squared) << '\n';

  out << "\nsimplicity of a^2 (components in Q/T(Q) coordinates):\n";
  out << "  " << std::left << std::setw(std::max<std::size_t>(m, 9) + 2) << "character" << std::setw(24) << "component"
      << "content\n";
  for (const auto& c : v.simplicity.components) {
    if (c.content == 0) continue;
    out << "  " << std::setw(std::max<std::size_t>(m, 9) + 2) << c.character.to_string() << std::setw(24)
        << vec(c.component) << c.content << '\n';
  }
  const std::size_t zero = std::count_if(v.simplicity.components.begin(), v.simplicity.components.end(),
                                         [](const CharacterComponent& c) { return c.content == 0; });
  out << "  (" << zero << " of " << v.simplicity.components.size() << " characters have zero component)\n";

  if (v.is_retract()) {
    const RetractionData& r = v.retraction();
    out << "\nverdict: Retract\n";
    out << "  witness character: " << v.simplicity.witness().character.to_string() << '\n';
    out << "  complement M generators:";
    for (const auto& g : r.complement.generators) out << ' ' << vec(g);
    out << "\n  functional Q -> Q/M: " << vec(r.complement.functional) << '\n';
    out << "  K/M generators: z";
    for (auto j : r.k_generators) out << ", k" << (j + 1);
    out << "  translation functional: " << vec(r.translation_functional) << '\n';
    out << "  torsion of K/M: order " << r.torsion_T.torsion_order;
    if (!r.torsion_T.invariant_factors.empty()) out << ", invariant factors " << vec(r.torsion_T.invariant_factors);
    out << "\n  images (rho(g) = h_a^t h_b^s):\n";
    for (const auto& name : v.data.group().generator_names())
      out << "    " << name << " -> " << dihedral_text(r.image(v.data.group().generator(name))) << '\n';
  } else {
    const auto& nc = v.not_closed();
    const Equation& eq = nc.equation;
    out << "\nverdict: NotVerballyClosed\n";
    out << "  equation exponents:";
    for (std::size_t i = 0; i < eq.contents.size(); ++i)
      if (eq.contents[i] != 0) out << ' ' << Character::from_index(i, m).to_string() << ":" << eq.contents[i];
    out << "  (filler " << eq.filler << ")\n";
    out << "  squares per block: " << eq.squares << '\n';
    out << "  RHS: a^" << eq.rhs_exponent << "  (2 * 2^" << module.c_order() << " * " << eq.torsion_order << ")\n";
    out << "  LHS: " << eq.lhs.node_count() << " DAG nodes, flattened length " << eq.lhs.length() << '\n';
    out << "  solution in G (non-identity values):\n";
    for (const auto& [name, value] : nc.solution)
      if (!(value == v.data.group().identity())) out << "    " << name << " = " << v.data.group().to_string(value) << '\n';
    out << "\ncertificate (no solution in H):\n";
    std::istringstream table(nc.certificate.table());
    for (std::string line; std::getline(table, line);) out << "  " << line << '\n';
  }

  if (!report.verification.empty()) {
    out << "\nverification:\n";
    for (const auto& r : report.verification) {
      out << "  " << std::setw(18) << r.name << (r.passed ? "pass" : "FAIL");
      if (r.samples) out << "  (" << r.samples << " samples)";
      out << '\n';
    }
  }
  if (report.seconds) out << "\ntime: " << std::fixed << std::setprecision(3) << *report.seconds << " s\n";
  return out.str();
}

std::string render_structured(const Report& report) {
  using nlohmann::json;
  const Verdict& v = *report.verdict;
  const std::size_t m = v.data.c_rank();
  auto ints = [](const IntegerVector& xs) {
    json a = json::array();
    for (const auto& x : xs) a.push_back(x.get_str());
    return a;
  };
  auto rats = [](const RationalVector& xs) {
    json a = json::array();
    for (const auto& x : xs) a.push_back(x.get_str());
    return a;
  };

  json doc;
  json factors = json::array();
  for (const auto& f : v.spec.factors) factors.push_back(f.to_string());
  doc["spec"] = {{"factors", factors}, {"a", v.spec.h_a}, {"b", v.spec.h_b}};
  doc["squares"] = {{"torsion_order", v.data.module().group().torsion_order().get_str()},
                    {"free_rank", v.data.module().free_rank()},
                    {"c_generators", v.data.c_generators()},
                    {"a_squared", ints(v.a_squared)}};
  json table = json::array();
  for (const auto& c : v.simplicity.components)
    table.push_back({{"character", c.character.to_string()},
                     {"component", rats(c.component)},
                     {"content", c.content.get_str()}});
  doc["simplicity"] = table;

  if (v.is_retract()) {
    const RetractionData& r = v.retraction();
    doc["verdict"] = "Retract";
    json gens = json::array();
    for (const auto& g : r.complement.generators) gens.push_back(ints(g));
    json images = json::object();
    for (const auto& name : v.data.group().generator_names()) {
      const auto x = r.image(v.data.group().generator(name));
      images[name] = {{"t", x.translation.get_str()}, {"s", x.flip ? 1 : 0}};
    }
    doc["retraction"] = {{"witness_character", v.simplicity.witness().character.to_string()},
                         {"complement", gens},
                         {"functional", ints(r.complement.functional)},
                         {"translation_functional", ints(r.translation_functional)},
                         {"torsion_order", r.torsion_T.torsion_order.get_str()},
                         {"images", images}};
  } else {
    const auto& nc = v.not_closed();
    const Equation& eq = nc.equation;
    doc["verdict"] = "NotVerballyClosed";
    json contents = json::object();
    for (std::size_t i = 0; i < eq.contents.size(); ++i)
      contents[Character::from_index(i, m).to_string()] = eq.contents[i].get_str();
    json solution = json::object();
    for (const auto& [name, value] : nc.solution) solution[name] = v.data.group().to_string(value);
    json rows = json::array();
    for (const auto& row : nc.certificate.rows) {
      std::string delta;
      for (std::size_t j = 0; j < m; ++j) delta += mask_bit(row.delta, j, m) ? '1' : '0';
      rows.push_back({{"delta", delta},
                      {"matched", row.matched.to_string()},
                      {"exponent", row.exponent.get_str()},
                      {"subgroup_generator", row.subgroup_generator.get_str()},
                      {"target", row.target.get_str()},
                      {"obstruction", row.obstruction}});
    }
    doc["equation"] = {{"contents", contents},
                       {"filler", eq.filler.get_str()},
                       {"squares", eq.squares},
                       {"torsion_order", eq.torsion_order.get_str()},
                       {"rhs_exponent", eq.rhs_exponent.get_str()},
                       {"dag_nodes", eq.lhs.node_count()},
                       {"flattened_length", eq.lhs.length().get_str()},
                       {"solution", solution}};
    doc["certificate"] = {{"valid", nc.certificate.valid()}, {"rows", rows}};
  }
  json verification = json::array();
  for (const auto& r : report.verification)
    verification.push_back({{"name", r.name}, {"passed", r.passed}, {"samples", r.samples}});
  doc["verification"] = verification;
  if (report.seconds) doc["seconds"] = *report.seconds;
  return doc.dump(2) + "\n";
}

}  // namespace vclose
