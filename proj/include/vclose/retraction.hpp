#pragma once

// Retractions G -> H for simple a^2: quotient by an invariant complement M of
// <a^2> in Q, then by the torsion of the index-2 abelian subgroup K.

#include <cstdint>
#include <functional>
#include <vector>

#include "vclose/action.hpp"
#include "vclose/ambient.hpp"

namespace vclose {

struct RetractionData {
  SquareData data;
  Complement complement;  // M and the functional Q -> Q/M = Z
  /// Sign of conjugation on the image of a^2 in G/M, as a character of C.
  Character sign_map;
  /// K/M is presented on (z, k_j for j in k_generators) where z is the image
  /// of a^2 and k_j are lifts of a basis of ker(sign_map).
  std::size_t pivot = 0;  // a generator d_p with sign -1
  std::vector<std::size_t> k_generators;
  std::vector<AmbientElement> k_lifts;
  AbelianPresentation k_presentation;
  /// Integer functional on (z, k_j) coordinates, normalized so h_a -> 1.
  IntegerVector translation_functional;
  TorsionData torsion_T;
  AmbientElement h_a;
  AmbientElement h_b;

  /// Coordinates of g in K/M on (z, k_j). Requires sign_map(g) = +1.
  IntegerVector k_coordinates(const AmbientElement& g) const;
  /// rho(g) = h_a^t h_b^s, returned as the dihedral normal form (t, s).
  DihedralElement image(const AmbientElement& g) const;
  /// rho(g) as an element of G.
  AmbientElement apply(const AmbientElement& g) const;
};

/// Throws NotSimple if the chi-component of q is not primitive and
/// NormalizationFailure if the image of h_a does not generate K/M modulo torsion.
RetractionData build_retraction(const GroupSpec& spec, const SquareData& data, const IntegerVector& q,
                                const Character& chi);

using EndoMap = std::function<AmbientElement(const AmbientElement&)>;

/// Sampled homomorphism, idempotence and image-in-H checks plus exact rho(h_b) = h_b and rho(h_a) = h_a.
bool verify_retraction(const EndoMap& rho, const GroupSpec& spec, std::size_t samples, long bound,
                       std::uint64_t seed = 1);
bool verify_retraction(const RetractionData& rho, std::size_t samples, long bound, std::uint64_t seed = 1);

}  // namespace vclose
