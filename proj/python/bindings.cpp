#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "vclose/analyze.hpp"
#include "vclose/report.hpp"
#include "vclose/selftest.hpp"
#include "vclose/spec_format.hpp"

namespace py = pybind11;
using namespace vclose;

// Big numbers cross the boundary as decimal strings; the Python package
// converts them to int and Fraction.

namespace {

using StrMatrix = std::vector<std::vector<std::string>>;

Integer to_integer(const py::handle& h) { return Integer(py::str(h).cast<std::string>()); }

IntegerVector to_vector(const py::iterable& xs) {
  IntegerVector v;
  for (const auto& x : xs) v.push_back(to_integer(x));
  return v;
}

IntegerMatrix to_matrix(const py::iterable& rows, std::size_t cols) {
  std::vector<IntegerVector> r;
  for (const auto& row : rows) r.push_back(to_vector(py::reinterpret_borrow<py::iterable>(row)));
  for (const auto& row : r)
    if (row.size() != cols) throw Error(ErrorCode::InvalidArgument, "ragged matrix");
  return IntegerMatrix::from_rows(r, cols);
}

std::vector<std::string> strings(const IntegerVector& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

std::vector<std::string> strings(const RationalVector& v) {
  std::vector<std::string> out;
  for (const auto& x : v) out.push_back(x.get_str());
  return out;
}

StrMatrix strings(const IntegerMatrix& m) {
  StrMatrix out;
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(strings(m.row(r)));
  return out;
}

InvolutionModule make_module(std::size_t rank, const py::iterable& relations, const py::iterable& actions) {
  const IntegerMatrix rel = to_matrix(relations, rank);
  std::vector<IntegerMatrix> acts;
  for (const auto& a : actions) acts.push_back(to_matrix(py::reinterpret_borrow<py::iterable>(a), rank));
  return InvolutionModule(rel.rows() ? AbelianPresentation(rank, rel) : AbelianPresentation(rank), std::move(acts));
}

py::dict simplicity_dict(const SimplicityReport& r) {
  py::dict d;
  d["simple"] = r.simple();
  py::list components;
  for (const auto& c : r.components) {
    py::dict e;
    e["character"] = c.character.to_string();
    e["component"] = strings(c.component);
    e["content"] = c.content.get_str();
    e["lift"] = strings(c.lift);
    components.append(e);
  }
  d["components"] = components;
  if (r.simple()) d["witness"] = r.witness().character.to_string();
  return d;
}

}  // namespace

PYBIND11_MODULE(_vclose, m) {
  m.doc() = "Verbal closedness of infinite dihedral subgroups (native core)";

  static py::exception<Error> error(m, "VcloseError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      error((std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  m.def("smith_normal_form", [](const py::iterable& rows, std::size_t cols) {
    const auto s = smith_normal_form(to_matrix(rows, cols));
    return py::make_tuple(strings(s.u), strings(s.d), strings(s.v));
  });

  m.def("torsion_data", [](std::size_t rank, const py::iterable& relations) {
    const IntegerMatrix rel = to_matrix(relations, rank);
    const auto t = (rel.rows() ? AbelianPresentation(rank, rel) : AbelianPresentation(rank)).torsion();
    return py::make_tuple(t.torsion_order.get_str(), strings(t.invariant_factors), t.free_rank);
  });

  m.def("project", [](std::size_t rank, const py::iterable& relations, const py::iterable& actions,
                      const py::iterable& q, std::vector<int> signs) {
    return strings(project(make_module(rank, relations, actions), to_vector(q), Character(std::move(signs))));
  });

  m.def("is_simple", [](std::size_t rank, const py::iterable& relations, const py::iterable& actions,
                        const py::iterable& q) {
    return simplicity_dict(is_simple(make_module(rank, relations, actions), to_vector(q)));
  });

  m.def("characters", [](std::size_t rank) {
    std::vector<std::string> out;
    for (const auto& c : enumerate_characters(rank)) out.push_back(c.to_string());
    return out;
  });

  m.def("dihedral_multiply", [](const py::handle& k1, bool e1, const py::handle& k2, bool e2) {
    const auto x = multiply(DihedralElement{to_integer(k1), e1}, DihedralElement{to_integer(k2), e2});
    return py::make_tuple(x.translation.get_str(), x.flip);
  });

  m.def(
      "analyze",
      [](const std::string& spec_text, const py::handle& filler, std::size_t squares, bool verify,
         std::uint64_t seed, std::size_t samples) {
        AnalyzeOptions options;
        options.filler = to_integer(filler);
        options.squares = squares;
        Verdict v = analyze(parse_spec(spec_text), options);
        Report report{&v, {}, {}};
        if (verify) {
          VerifyOptions vo;
          vo.seed = seed;
          vo.samples = samples;
          report.verification = run_verification(v, vo);
        }
        std::string equation = v.is_retract() ? "" : serialize(v.not_closed().equation);
        return py::make_tuple(render_structured(report), equation);
      },
      py::arg("spec_text"), py::arg("filler") = 0, py::arg("squares") = 0, py::arg("verify") = false,
      py::arg("seed") = 1, py::arg("samples") = 10'000);

  m.def("selftest", [](bool inject_project_sign) {
    const auto r = run_selftest(inject_project_sign ? Fault::ProjectSign : Fault::None);
    const auto* failed = r.first_failure();
    return py::make_tuple(r.passed(), failed ? failed->name : std::string());
  });
}
