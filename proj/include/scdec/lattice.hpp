#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace scdec {

// One stabilizer check: its adjacent data qubits and the CNOT schedule.
// schedule[s] is the data qubit touched in circuit step s+2 (steps 2..5),
// or -1 when the check idles in that step (boundary checks).
struct Check {
    std::vector<int> qubits;
    std::array<int, 4> schedule{-1, -1, -1, -1};
};

// Distance-d open-boundary surface code with data qubits on lattice edges,
// X checks on vertices and Z checks on faces.
//
// Geometry (row-major indices, fixed so syndromes are reproducible):
//   vertices  (r, c) : r in 0..d-1, c in 0..d-2
//   horizontal edges H(r, c) : r in 0..d-1, c in 0..d-1, joining vertices
//       (r, c-1)-(r, c); the c = 0 and c = d-1 edges dangle off the open
//       left/right boundary
//   vertical edges   V(r, c) : r in 0..d-2, c in 0..d-2, joining (r, c)-(r+1, c)
//   faces     (r, c) : r in 0..d-2, c in 0..d-1, bounded by H(r,c), H(r+1,c),
//       V(r,c-1), V(r,c); the c = 0 and c = d-1 faces are boundary faces
//
// Data ids: H(r,c) -> r*d + c, then V(r,c) -> d*d + r*(d-1) + c.
// X-check ids: vertex (r,c) -> r*(d-1) + c. Z-check ids: face (r,c) -> r*d + c.
struct CodeLayout {
    int d = 0;
    int num_data = 0;  // d^2 + (d-1)^2

    std::vector<Check> x_checks;  // vertex checks, detect Z errors
    std::vector<Check> z_checks;  // face checks, detect X errors

    std::vector<int> logical_z_support;  // horizontal edges of row 0
    std::vector<int> logical_x_support;  // horizontal edges of column 0

    // Coordinates on a doubled grid, for dumps and debugging.
    std::vector<std::pair<int, int>> data_coords;
    std::vector<std::pair<int, int>> x_check_coords;
    std::vector<std::pair<int, int>> z_check_coords;

    // Per data qubit, the incident checks of each type (1 or 2 entries).
    std::vector<std::vector<int>> data_to_x_checks;
    std::vector<std::vector<int>> data_to_z_checks;

    int num_x_checks() const { return static_cast<int>(x_checks.size()); }
    int num_z_checks() const { return static_cast<int>(z_checks.size()); }
};

// Builds the layout for code distance d >= 2. Deterministic for fixed d.
CodeLayout build_layout(int d);

// Check outcomes as +1/-1 bits.
struct Syndrome {
    std::vector<int8_t> x_bits;  // per X check; -1 iff odd overlap with Z errors
    std::vector<int8_t> z_bits;  // per Z check; -1 iff odd overlap with X errors
};

// Ideal stabilizer measurement of an error pattern. Error sets are 0/1 masks
// over data qubits.
Syndrome stabilizer_syndrome(const CodeLayout& layout,
                             const std::vector<uint8_t>& z_errors,
                             const std::vector<uint8_t>& x_errors);

struct LogicalFailure {
    bool z_failure = false;  // residual Z chain anticommutes with logical X
    bool x_failure = false;
};

// Decides logical failure for a syndrome-neutral residual (actual xor
// detected, folded over time). Throws std::invalid_argument when the
// residual has nonzero syndrome, since failure is undefined there.
LogicalFailure logical_failure(const CodeLayout& layout,
                               const std::vector<uint8_t>& residual_z,
                               const std::vector<uint8_t>& residual_x);

// Structured text dump (coordinates, adjacencies, schedule) for golden-file
// tests and external inspection.
std::string dump_layout(const CodeLayout& layout);

}  // namespace scdec
