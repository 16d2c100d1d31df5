#pragma once

#include <variant>

#include "vclose/ambient.hpp"
#include "vclose/dihedral.hpp"
#include "vclose/equation.hpp"
#include "vclose/retraction.hpp"

namespace vclose {

struct AnalyzeOptions {
  std::size_t squares = 0;  // 0: free rank of Q plus one
  Integer filler{0};
};

struct RetractVerdict {
  RetractionData retraction;
};

struct NotClosedVerdict {
  Equation equation;
  Assignment solution;
  NoSolutionCertificate certificate;
};

struct Verdict {
  GroupSpec spec;
  SquareData data;
  IntegerVector a_squared;
  SimplicityReport simplicity;
  std::variant<RetractVerdict, NotClosedVerdict> payload;

  bool is_retract() const noexcept { return std::holds_alternative<RetractVerdict>(payload); }
  const RetractionData& retraction() const { return std::get<RetractVerdict>(payload).retraction; }
  const NotClosedVerdict& not_closed() const { return std::get<NotClosedVerdict>(payload); }
};

/// Validates the spec, then either builds a retraction (a^2 simple) or a
/// witness equation with its G-solution and no-solution certificate.
Verdict analyze(const GroupSpec& spec, const AnalyzeOptions& options = {});

}  // namespace vclose
