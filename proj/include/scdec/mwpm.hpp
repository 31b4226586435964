#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "scdec/hamiltonian.hpp"
#include "scdec/lattice.hpp"
#include "scdec/noise.hpp"

namespace scdec {

// Thrown when a matching component exceeds the exact-solver size cap; callers
// may resample or skip the trial (CLI exit code 3).
class CapacityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Defect graph for one sector. Weights are unit-cost spacetime chain lengths:
// spatial check-graph distance plus layer difference; boundary weight is the
// shortest chain to the open boundary. No hook-error reweighting is applied.
struct MatchingInstance {
    ErrorSector sector = ErrorSector::Z;
    int layers = 0;

    struct Defect {
        int check = 0;
        int layer = 0;  // 1-based
    };
    std::vector<Defect> defects;
    std::vector<int> boundary_weight;           // per defect
    std::vector<std::vector<int>> pair_weight;  // dense, defects x defects
};

MatchingInstance build_matching_instance(const CodeLayout& layout,
                                         const SyndromeTensor& syndrome,
                                         ErrorSector sector);

// partner[i] is the paired defect index, or -1 for the boundary.
struct Matching {
    std::vector<int> partner;
    int64_t total_weight = 0;
};

// Globally minimum-weight perfect matching with boundary pairing. Edges no
// shorter than both endpoints' boundary weights are pruned (never required by
// an optimal matching); the remaining components are solved exactly by subset
// dynamic programming. Ties are broken deterministically: the lowest
// unmatched defect prefers the boundary, then the lowest partner index.
// Throws CapacityError when a component exceeds component_cap defects.
Matching solve_matching(const MatchingInstance& instance, int component_cap = 24);

// Realizes each matched pair as a shortest spacetime chain of data and
// measurement error events. Output shape matches interpret_solution so both
// decoders are scored identically; the realized events always reproduce the
// input syndrome.
SectorEvents correction_from_matching(const CodeLayout& layout,
                                      const MatchingInstance& instance,
                                      const Matching& matching);

}  // namespace scdec
