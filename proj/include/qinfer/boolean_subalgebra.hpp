#pragma once

// Boolean subalgebras of commuting projectors.
//
// A subalgebra is stored by its atoms: pairwise orthogonal nonzero
// projectors summing to the identity. Element `mask` is the sum of the atoms
// whose bit is set, so with k atoms there are 2^k elements, complement is
// bitwise NOT, meet is AND and join is OR.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qinfer/linalg.hpp"
#include "qinfer/report.hpp"

namespace qinfer {

using ElementMask = std::uint64_t;

class BooleanSubalgebra {
 public:
  // Validates pairwise orthogonality and completeness of the atoms at `tol`.
  BooleanSubalgebra(int dim, std::vector<Projector> atoms, std::vector<std::string> generator_labels = {},
                    double tol = default_tolerances().validation_tol);

  int dim() const { return dim_; }
  const std::vector<Projector>& atoms() const { return atoms_; }
  const std::vector<std::string>& generator_labels() const { return labels_; }
  int atom_count() const { return static_cast<int>(atoms_.size()); }
  std::uint64_t element_count() const { return std::uint64_t{1} << atoms_.size(); }
  ElementMask full_mask() const { return element_count() - 1; }

  // Sum of the atoms selected by `mask`.
  MatrixXc element_matrix(ElementMask mask) const;
  Projector element(ElementMask mask) const;

  // Mask of the subset-sum equal to `p` within tol, if `p` is in the algebra.
  std::optional<ElementMask> mask_of(const Projector& p, double tol = default_tolerances().validation_tol) const;

  nlohmann::json to_json() const;
  static BooleanSubalgebra from_json(const nlohmann::json& j);

 private:
  int dim_;
  std::vector<Projector> atoms_;
  std::vector<std::string> labels_;
};

// Minimal projectors of the algebra generated by commuting `generators`:
// the nonzero products over sign patterns of P_i and 1 - P_i, sorted by
// descending rank, then descending diagonal. Throws PreconditionError naming
// the first non-commuting pair.
std::vector<Projector> common_atoms(std::span<const Projector> generators, int dim,
                                    const ToleranceProfile& tol = default_tolerances());

BooleanSubalgebra boolean_closure(std::span<const Projector> generators, int dim,
                                  std::vector<std::string> labels = {},
                                  const ToleranceProfile& tol = default_tolerances());

// Checks idempotence, commutativity, associativity, distributivity and
// duality with matrix arithmetic on materialized elements, and checks every
// result against the element predicted by bitmask logic. All triples are
// enumerated when there are at most 64 elements; otherwise `sample_budget`
// random triples are drawn from `seed`.
AxiomReport verify_boolean_identities(const BooleanSubalgebra& algebra, double tol, std::uint64_t sample_budget = 4096,
                                      std::uint64_t seed = 0);

}  // namespace qinfer
