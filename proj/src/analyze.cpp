#include "vclose/analyze.hpp"

namespace vclose {

Verdict analyze(const GroupSpec& spec, const AnalyzeOptions& options) {
  validate_spec(spec);
  Verdict v{spec, SquareData(spec), {}, {}, RetractVerdict{}};
  v.a_squared = image_of_a_squared(spec, v.data);
  v.simplicity = is_simple(v.data.module(), v.a_squared);

  if (v.simplicity.simple()) {
    v.payload = RetractVerdict{build_retraction(spec, v.data, v.a_squared, v.simplicity.witness().character)};
    return v;
  }

  WitnessOptions w;
  w.squares = options.squares ? options.squares : v.data.module().free_rank() + 1;
  w.filler = options.filler;
  NotClosedVerdict nc;
  nc.equation = build_witness_equation(v.simplicity, v.data.module().group().torsion_order(), v.data.c_rank(), w);
  nc.solution = g_solution(nc.equation, v.data, v.simplicity);
  nc.certificate = certify_no_solution(nc.equation);
  v.payload = std::move(nc);
  return v;
}

}  // namespace vclose
