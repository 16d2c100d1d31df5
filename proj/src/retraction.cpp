#include "vclose/retraction.hpp"

#include <random>

namespace vclose {

namespace {

Integer dot(const IntegerVector& a, const IntegerVector& b) {
  Integer s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Whether g = a^t b^s for some t and s, with a of infinite order.
bool in_dihedral_subgroup(const AmbientGroup& group, const AmbientElement& a, const AmbientElement& b,
                          const AmbientElement& g) {
  std::size_t probe = a.coordinates.size();
  for (std::size_t i = 0; i < a.coordinates.size(); ++i)
    if (group.factors()[i].kind != FactorKind::ZedMod && !a.coordinates[i].flip && a.coordinates[i].translation != 0) {
      probe = i;
      break;
    }
  if (probe == a.coordinates.size()) return false;
  for (int s = 0; s < 2; ++s) {
    const AmbientElement x = s ? group.multiply(g, group.inverse(b)) : g;
    const DihedralElement& xi = x.coordinates[probe];
    const Integer& step = a.coordinates[probe].translation;
    if (xi.flip || xi.translation % step != 0) continue;
    if (group.power(a, xi.translation / step) == x) return true;
  }
  return false;
}

}  // namespace

IntegerVector RetractionData::k_coordinates(const AmbientElement& g) const {
  const AmbientGroup& group = data.group();
  const std::size_t m = data.c_rank();
  const GroupMask c = data.c_coordinates(g);
  if (sign_map(c) != 1) throw Error(ErrorCode::InvalidArgument, "element is outside K");
  IntegerVector out(k_generators.size() + 1);
  AmbientElement lift = group.identity();
  for (std::size_t i = 0; i < k_generators.size(); ++i)
    if (mask_bit(c, k_generators[i], m)) {
      out[i + 1] = 1;
      lift = group.multiply(lift, k_lifts[i]);
    }
  out[0] = dot(complement.functional, data.q_coordinates(group.multiply(group.inverse(lift), g)));
  return out;
}

DihedralElement RetractionData::image(const AmbientElement& g) const {
  const AmbientGroup& group = data.group();
  const bool s = sign_map(data.c_coordinates(g)) == -1;
  const AmbientElement in_k = s ? group.multiply(g, group.inverse(h_b)) : g;
  return DihedralElement{dot(translation_functional, k_coordinates(in_k)), s};
}

AmbientElement RetractionData::apply(const AmbientElement& g) const {
  const AmbientGroup& group = data.group();
  const DihedralElement x = image(g);
  AmbientElement out = group.power(h_a, x.translation);
  return x.flip ? group.multiply(out, h_b) : out;
}

RetractionData build_retraction(const GroupSpec& spec, const SquareData& data, const IntegerVector& q,
                                const Character& chi) {
  const AmbientGroup& group = data.group();
  const InvolutionModule& module = data.module();
  const std::size_t m = data.c_rank();

  RetractionData r;
  r.data = data;
  r.complement = complement(module, q, chi);  // throws NotSimple
  r.h_a = evaluate_in(group, parse_word(spec.h_a, group));
  r.h_b = evaluate_in(group, parse_word(spec.h_b, group));

  const Integer phi_a2 = dot(r.complement.functional, data.q_coordinates(group.multiply(r.h_a, r.h_a)));
  if (phi_a2 != 1) throw Error(ErrorCode::NormalizationFailure, "a^2 is not the generator of Q/M");

  // C acts on Q/M = Z through chi, since the functional factors through p_chi.
  r.sign_map = chi;
  if (chi(data.c_coordinates(r.h_b)) != -1)
    throw Error(ErrorCode::NormalizationFailure, "b does not invert the image of a^2");
  r.pivot = m;
  for (std::size_t j = 0; j < m && r.pivot == m; ++j)
    if (chi.sign(j) == -1) r.pivot = j;

  for (std::size_t j = 0; j < m; ++j) {
    if (j == r.pivot) continue;
    r.k_generators.push_back(j);
    const AmbientElement& d = data.c_generator(j);
    r.k_lifts.push_back(chi.sign(j) == 1 ? d : group.multiply(d, data.c_generator(r.pivot)));
  }

  // K/M is abelian: the commutators of the lifts must die in Q/M.
  for (std::size_t i = 0; i < r.k_lifts.size(); ++i)
    for (std::size_t j = i + 1; j < r.k_lifts.size(); ++j) {
      const auto& x = r.k_lifts[i];
      const auto& y = r.k_lifts[j];
      const AmbientElement comm =
          group.multiply(group.multiply(x, y), group.multiply(group.inverse(x), group.inverse(y)));
      if (dot(r.complement.functional, data.q_coordinates(comm)) != 0)
        throw Error(ErrorCode::NormalizationFailure, "K/M is not abelian");
    }

  const std::size_t rank = r.k_lifts.size() + 1;
  std::vector<IntegerVector> relations;
  for (std::size_t i = 0; i < r.k_lifts.size(); ++i) {
    IntegerVector row(rank);
    row[0] = -dot(r.complement.functional, data.q_coordinates(group.multiply(r.k_lifts[i], r.k_lifts[i])));
    row[i + 1] = 2;
    relations.push_back(std::move(row));
  }
  r.k_presentation = relations.empty() ? AbelianPresentation(rank)
                                       : AbelianPresentation(rank, IntegerMatrix::from_rows(relations, rank));
  r.torsion_T = r.k_presentation.torsion();
  if (r.k_presentation.free_rank() != 1)
    throw Error(ErrorCode::NormalizationFailure, "K/M does not have free rank 1");

  r.translation_functional = r.k_presentation.free_projection().row(0);
  const Integer tau_a = dot(r.translation_functional, r.k_coordinates(r.h_a));
  if (abs(tau_a) != 1)
    throw Error(ErrorCode::NormalizationFailure,
                "h_a maps to " + tau_a.get_str() + " in K modulo torsion, expected +-1");
  if (tau_a < 0)
    for (auto& x : r.translation_functional) x = -x;
  return r;
}

bool verify_retraction(const EndoMap& rho, const GroupSpec& spec, std::size_t samples, long bound,
                       std::uint64_t seed) {
  const AmbientGroup group(spec.factors);
  const AmbientElement a = evaluate_in(group, parse_word(spec.h_a, group));
  const AmbientElement b = evaluate_in(group, parse_word(spec.h_b, group));
  if (!(rho(a) == a) || !(rho(b) == b)) return false;
  for (const auto& name : group.generator_names()) {
    const AmbientElement rg = rho(group.generator(name));
    if (!(rho(rg) == rg) || !in_dihedral_subgroup(group, a, b, rg)) return false;
  }
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    const AmbientElement g = random_element(group, bound, rng);
    const AmbientElement h = random_element(group, bound, rng);
    const AmbientElement rg = rho(g);
    if (!(rho(group.multiply(g, h)) == group.multiply(rg, rho(h)))) return false;
    if (!(rho(rg) == rg) || !in_dihedral_subgroup(group, a, b, rg)) return false;
  }
  return true;
}

bool verify_retraction(const RetractionData& rho, std::size_t samples, long bound, std::uint64_t seed) {
  return verify_retraction([&rho](const AmbientElement& g) { return rho.apply(g); }, rho.data.spec(), samples,
                           bound, seed);
}

}  // namespace vclose
