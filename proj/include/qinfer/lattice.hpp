#pragma once

// Lattice operations on projectors. Meet is range intersection, join is the
// span of both ranges and complement is the orthogonal complement; these are
// defined for every pair, commuting or not.

#include <map>
#include <string>

#include "qinfer/linalg.hpp"

namespace qinfer {

struct ProjectorPairClassification {
  bool commuting = false;
  bool ordered_le = false;  // P <= Q
  bool orthogonal = false;  // PQ = 0
  std::map<std::string, double> residual_norms;
};

Projector complement(const Projector& p);

// Projector onto P(H) ∩ Q(H): the eigenvalue-2 eigenspace of P + Q.
Projector meet(const Projector& p, const Projector& q, const ToleranceProfile& tol = default_tolerances());

// complement(meet(complement(P), complement(Q))).
Projector join(const Projector& p, const Projector& q, const ToleranceProfile& tol = default_tolerances());

bool commutes(const Projector& p, const Projector& q, double tol = default_tolerances().validation_tol);

// P <= Q iff QP = P.
bool less_equal(const Projector& p, const Projector& q, double tol = default_tolerances().validation_tol);

bool orthogonal(const Projector& p, const Projector& q, double tol = default_tolerances().validation_tol);

ProjectorPairClassification classify_pair(const Projector& p, const Projector& q,
                                          double tol = default_tolerances().validation_tol);

}  // namespace qinfer
