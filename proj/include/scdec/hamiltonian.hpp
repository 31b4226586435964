#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "scdec/lattice.hpp"
#include "scdec/noise.hpp"

namespace scdec {

// Sectors are named by the data-error type they detect: the Z sector carries
// spins for Z data errors and X-check measurement errors, the X sector the
// mirror image.
enum class ErrorSector : uint8_t { Z = 0, X = 1 };

const char* sector_name(ErrorSector s);

// Spin-to-binary map: +1 -> 0, -1 -> 1.
inline int spin_to_binary(int sigma) { return sigma > 0 ? 0 : 1; }
inline int binary_to_spin(int bit) { return bit ? -1 : 1; }

struct SpinInfo {
    enum class Kind : uint8_t { data, meas };
    Kind kind = Kind::data;
    ErrorSector sector = ErrorSector::Z;
    int site = 0;   // data qubit id, or check id for meas spins
    int layer = 0;  // layer 1..T' for data, gap 1..T'-1 for meas
};

// One syndrome constraint: b must equal the product of the listed spins
// (adjacent data spins of the layer plus the incident measurement spins).
struct HoboConstraint {
    ErrorSector sector = ErrorSector::Z;
    int check = 0;
    int layer = 0;
    int8_t b = 1;
    std::vector<int> spins;  // 2..6 spin ids
};

struct HoboParams {
    int64_t j = 1024;
    int64_t h = 1;
    std::optional<std::pair<int64_t, int64_t>> y_coupling;  // (Ja, Jb)
};

struct YCouplingTerm {
    int z_spin = 0;  // Z-sector data spin id
    int x_spin = 0;  // X-sector data spin id
    int64_t jprime = 0;
};

// H = -J sum_c b_c prod(sigma in c) - h sum_i sigma_i - sum J'_i sigma sigma'.
// Spin ids index the spins table; data and measurement spins of each sector
// occupy contiguous blocks.
struct HoboProblem {
    HoboParams params;
    int layers = 0;     // T'
    int num_data = 0;   // data qubits in the layout
    bool has_z = false, has_x = false;
    std::vector<SpinInfo> spins;
    std::vector<HoboConstraint> constraints;
    std::vector<YCouplingTerm> couplings;

    int num_spins() const { return static_cast<int>(spins.size()); }
};

// Which sectors to build. Single-sector problems are used when the noise
// model treats the sectors independently.
enum class SectorSet : uint8_t { z_only, x_only, both };

// Integer coefficients of the penalty-free degree reduction: the constraint
// term -J b prod(sigma) over k spins is replaced, using three auxiliary bits
// w1..w3, by
//   J b [ A (w1w2 + w2w3 + w3w1) + B (w1+w2+w3)(x1+..+xk)
//       + C sum_{i<j} x_i x_j + D sum x_i + E (w1+w2+w3) + F ]
// whose minimum over the auxiliaries equals the original term for every
// spin assignment.
struct ConversionCoefficients {
    int64_t a = 0, b = 0, c = 0, d = 0, e = 0, f = 0;
};

// Finds coefficients for a degree-k constraint (2 <= k <= 6) with syndrome
// value b_value in {+1,-1} by exhaustive search over the integer grid
// [-grid_bound, grid_bound]: (A,B,E) are scanned in ascending order and
// (C,D,F) solved from the low-occupancy conditions, then the tuple is
// verified over all assignments. Throws std::runtime_error when the grid
// holds no valid tuple.
ConversionCoefficients derive_conversion_coefficients(int degree, int b_value,
                                                      int grid_bound = 16);

// Full verification over all 2^(degree+3) assignments of data and auxiliary
// bits; returns the number of cases checked (0 on failure).
int64_t verify_conversion(int degree, int b_value, const ConversionCoefficients& coeffs);

// QUBO in accumulation form: energy(x) = sum_{i<j} Q_ij x_i x_j
// + sum_i L_i x_i + constant. The Ising-machine convention
// H = -1/2 sum W_ij x_i x_j - sum V_i x_i + c corresponds to W_ij = -Q_ij
// (off-diagonal, symmetric) and V_i = -L_i; no diagonal quadratic entries
// exist (x^2 = x is folded into the linear part).
struct QuboProblem {
    int num_vars = 0;
    int num_spins = 0;  // non-auxiliary prefix; aux variables follow, 3 per constraint

    std::vector<int64_t> linear;
    int64_t constant = 0;

    // Symmetric sparse quadratic part, CSR over both orientations.
    std::vector<int32_t> adj_offset;  // num_vars + 1
    std::vector<int32_t> adj_var;
    std::vector<int64_t> adj_weight;

    // Provenance, for interpretation and feasibility checks.
    HoboParams params;
    int layers = 0;
    int num_data = 0;
    bool has_z = false, has_x = false;
    std::vector<SpinInfo> spins;
    std::vector<HoboConstraint> constraints;

    int64_t energy(std::span<const uint8_t> x) const;
};

// Builds the spacetime Hamiltonian for the given diff syndromes. Constraints
// use the time-differenced bits so a layer-t data spin explains only layer-t
// defects. Rejects non-positive J or h, and requires J to dominate the field
// and coupling scales (J > 6 (h + Ja + Jb)).
HoboProblem build_hobo(const CodeLayout& layout, const SyndromeTensor& syndrome,
                       const HoboParams& params, SectorSet sectors = SectorSet::both);

// J' per (data qubit, layer) pair, flattened as (layer-1)*num_data + qubit:
// Ja + Jb where the qubit sees at least one -1 X-check diff bit and at least
// one -1 Z-check diff bit in that layer, Ja elsewhere.
std::vector<int64_t> compute_y_couplings(const CodeLayout& layout,
                                         const SyndromeTensor& syndrome, int64_t ja,
                                         int64_t jb);

QuboProblem hobo_to_qubo(const HoboProblem& hobo);

// Exact integer energies. The HOBO overload takes +1/-1 spins, the QUBO
// overload 0/1 bits over all variables including auxiliaries.
int64_t evaluate(const HoboProblem& problem, std::span<const int8_t> spins);
int64_t evaluate(const QuboProblem& problem, std::span<const uint8_t> bits);

// Detected events for one sector: 0/1 masks per layer over data qubits and
// per gap over that sector's checks.
struct SectorEvents {
    std::vector<std::vector<uint8_t>> data;  // [layers][num_data]
    std::vector<std::vector<uint8_t>> meas;  // [layers-1][num_checks]
};

struct DetectedErrors {
    std::optional<SectorEvents> z, x;
    bool constraints_satisfied = false;
    int violated_constraints = 0;
};

// Reads x = 1 spins back as detected events and reports whether every
// constraint reproduces its syndrome bit. Auxiliary variables are ignored.
DetectedErrors interpret_solution(const QuboProblem& problem,
                                  std::span<const uint8_t> bits);

// Sparse text export (header with variable/term counts and the constant,
// then one `i j w` line per term; `i i v` lines carry the linear part).
std::string export_qubo(const QuboProblem& problem);

}  // namespace scdec
