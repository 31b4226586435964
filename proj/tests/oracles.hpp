#pragma once

// Test-only oracles, kept independent of the implementation paths they check.

#include <cstdint>
#include <limits>
#include <vector>

#include "scdec/hamiltonian.hpp"
#include "scdec/lattice.hpp"
#include "scdec/mwpm.hpp"
#include "scdec/noise.hpp"

namespace oracles {

// Direct evaluation of the spin Hamiltonian from its definition:
// -J sum b prod(sigma) - h sum sigma - sum J' sigma sigma'.
inline int64_t hobo_energy(const scdec::HoboProblem& hobo, const std::vector<int8_t>& spins) {
    int64_t e = 0;
    for (const auto& con : hobo.constraints) {
        int prod = 1;
        for (int s : con.spins) prod *= spins[s];
        e -= hobo.params.j * con.b * prod;
    }
    for (int i = 0; i < hobo.num_spins(); ++i) e -= hobo.params.h * spins[i];
    for (const auto& cp : hobo.couplings) e -= cp.jprime * spins[cp.z_spin] * spins[cp.x_spin];
    return e;
}

struct ExhaustiveResult {
    int64_t min_energy = std::numeric_limits<int64_t>::max();
    std::vector<uint32_t> argmin;  // bit i set = spin i is -1
};

// Enumerates every spin assignment (num_spins <= 25 or so).
inline ExhaustiveResult exhaustive_hobo(const scdec::HoboProblem& hobo) {
    const int n = hobo.num_spins();
    ExhaustiveResult out;
    std::vector<int8_t> spins(n);
    for (uint32_t mask = 0; mask < (1u << n); ++mask) {
        for (int i = 0; i < n; ++i) spins[i] = (mask >> i) & 1 ? -1 : 1;
        const int64_t e = hobo_energy(hobo, spins);
        if (e < out.min_energy) {
            out.min_energy = e;
            out.argmin.clear();
        }
        if (e == out.min_energy) out.argmin.push_back(mask);
    }
    return out;
}

// QUBO energy minimized per-constraint over its three auxiliaries, for a
// given assignment of the non-auxiliary bits.
inline int64_t qubo_min_over_aux(const scdec::QuboProblem& qubo,
                                 std::vector<uint8_t> bits) {
    bits.resize(qubo.num_vars, 0);
    for (size_t c = 0; c < qubo.constraints.size(); ++c) {
        const int w0 = qubo.num_spins + 3 * static_cast<int>(c);
        int64_t best = 0;
        int best_ws = 0;
        for (int ws = 0; ws < 8; ++ws) {
            for (int k = 0; k < 3; ++k) bits[w0 + k] = (ws >> k) & 1;
            const int64_t e = qubo.energy(bits);
            if (ws == 0 || e < best) {
                best = e;
                best_ws = ws;
            }
        }
        for (int k = 0; k < 3; ++k) bits[w0 + k] = (best_ws >> k) & 1;
    }
    return qubo.energy(bits);
}

// Recomputes the diff syndrome implied by a set of detected events via the
// parity rules: a data event at layer t toggles the adjacent checks of layer
// t; a measurement event at gap g toggles layers g and g+1 of its check.
inline std::vector<std::vector<int8_t>> syndrome_from_events(
    const scdec::CodeLayout& layout, const scdec::SectorEvents& events,
    scdec::ErrorSector sector, int layers) {
    const auto& incident = sector == scdec::ErrorSector::Z ? layout.data_to_x_checks
                                                           : layout.data_to_z_checks;
    const int num_checks = sector == scdec::ErrorSector::Z ? layout.num_x_checks()
                                                           : layout.num_z_checks();
    std::vector<std::vector<int8_t>> diff(layers, std::vector<int8_t>(num_checks, 1));
    for (int t = 0; t < layers; ++t)
        for (int q = 0; q < layout.num_data; ++q)
            if (events.data[t][q])
                for (int c : incident[q]) diff[t][c] = -diff[t][c];
    for (int g = 0; g + 1 < layers + 1 && g < static_cast<int>(events.meas.size()); ++g)
        for (int c = 0; c < num_checks; ++c)
            if (events.meas[g][c]) {
                diff[g][c] = -diff[g][c];
                diff[g + 1][c] = -diff[g + 1][c];
            }
    return diff;
}

// Brute-force minimum matching weight: every defect pairs with another or
// with the boundary.
inline int64_t brute_force_matching(const scdec::MatchingInstance& inst) {
    const int n = static_cast<int>(inst.defects.size());
    std::vector<int8_t> used(n, 0);
    int64_t best = std::numeric_limits<int64_t>::max();
    auto rec = [&](auto&& self, int64_t acc) -> void {
        int i = 0;
        while (i < n && used[i]) ++i;
        if (i == n) {
            best = std::min(best, acc);
            return;
        }
        used[i] = 1;
        self(self, acc + inst.boundary_weight[i]);
        for (int j = i + 1; j < n; ++j) {
            if (used[j]) continue;
            used[j] = 1;
            self(self, acc + inst.pair_weight[i][j]);
            used[j] = 0;
        }
        used[i] = 0;
    };
    rec(rec, 0);
    return n == 0 ? 0 : best;
}

}  // namespace oracles
