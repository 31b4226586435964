#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "scdec/hamiltonian.hpp"

namespace scdec {

enum class AnnealMode : uint8_t { single, replica_exchange };

struct AnnealerConfig {
    AnnealMode mode = AnnealMode::replica_exchange;
    int num_replicas = 128;
    double t_max = 5.0;
    double t_min = 0.1;
    int64_t sweeps = 10000;
    int exchange_interval = 10;
    // Early exit once the best feasible solution has not improved for this
    // many sweeps. Set >= sweeps to always run the full budget.
    int64_t patience = 1000;
    uint64_t seed = 0;
    // When nonempty, a per-sweep energy trace (sweep,replica,energy) is
    // appended to this CSV path.
    std::string trace_csv_path;
};

struct AnnealResult {
    std::vector<uint8_t> best_assignment;
    int64_t best_energy = 0;
    // Sweep index at which the best feasible solution last improved (0 when
    // the initial all-zero assignment is already optimal).
    int64_t iterations_to_best = 0;
    bool feasible = false;
    int64_t sweeps_used = 0;
};

// Ising-machine search semantics: per sweep and replica, the flip cost of
// every variable is evaluated against the current state, the acceptance set
// { i : dE_i < 0 or uniform() < exp(-dE_i / T) } is formed, and exactly one
// uniformly chosen member is flipped (none when the set is empty). Moves with
// dE/T beyond exp underflow of the uniform resolution are rejected without a
// draw. In replica_exchange mode configurations at adjacent temperatures of a
// geometric ladder swap every exchange_interval sweeps with probability
// min(1, exp((1/T_a - 1/T_b)(E_a - E_b))); in single mode one replica cools
// geometrically from t_max to t_min across the sweep budget.
//
// All variables start at 0. The best feasible assignment (all syndrome
// constraints reproduced) is tracked across replicas; when none is found the
// lowest-energy assignment seen is returned with feasible=false. Fixed seed
// implies an identical trajectory and result; each replica owns an RNG
// stream, so results do not depend on scheduling.
AnnealResult minimize(const QuboProblem& problem, const AnnealerConfig& config);

// Flip cost of one variable: evaluate(flipped) - evaluate(current).
int64_t delta_energy(const QuboProblem& problem, std::span<const uint8_t> assignment,
                     int variable);

}  // namespace scdec
