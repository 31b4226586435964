#include "scdec/annealer.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include "scdec/rng.hpp"

namespace scdec {

namespace {

// exp(-dE/T) falls below the 53-bit uniform resolution past this many
// temperature units; such moves are rejected without drawing.
constexpr double kLogCut = 45.0;

struct ReplicaState {
    std::vector<uint8_t> x;
    std::vector<int64_t> field;
    std::vector<uint8_t> violated;
    int violated_count = 0;
    int64_t energy = 0;
    Rng rng{0};
};

std::vector<double> acceptance_table(double temperature) {
    const auto size = static_cast<size_t>(temperature * kLogCut) + 1;
    std::vector<double> table(size);
    for (size_t d = 0; d < size; ++d) table[d] = std::exp(-static_cast<double>(d) / temperature);
    return table;
}

}  // namespace

int64_t delta_energy(const QuboProblem& problem, std::span<const uint8_t> assignment,
                     int variable) {
    if (static_cast<int>(assignment.size()) != problem.num_vars)
        throw std::invalid_argument("delta_energy: assignment size mismatch");
    if (variable < 0 || variable >= problem.num_vars)
        throw std::invalid_argument("delta_energy: variable out of range");
    int64_t field = problem.linear[variable];
    for (int32_t k = problem.adj_offset[variable]; k < problem.adj_offset[variable + 1]; ++k)
        if (assignment[problem.adj_var[k]]) field += problem.adj_weight[k];
    return assignment[variable] ? -field : field;
}

AnnealResult minimize(const QuboProblem& problem, const AnnealerConfig& config) {
    if (problem.num_vars <= 0) throw std::invalid_argument("minimize: empty problem");
    if (config.t_min <= 0 || config.t_min > config.t_max)
        throw std::invalid_argument("minimize: need 0 < t_min <= t_max");
    const int replicas = config.mode == AnnealMode::single ? 1 : config.num_replicas;
    if (config.mode == AnnealMode::replica_exchange && replicas < 2)
        throw std::invalid_argument("minimize: replica_exchange needs >= 2 replicas");
    if (config.sweeps < 0) throw std::invalid_argument("minimize: negative sweep budget");

    const int n = problem.num_vars;
    const auto& constraints = problem.constraints;

    // Spin -> incident constraints (auxiliaries have none; flipping them never
    // changes constraint parity).
    std::vector<std::vector<int32_t>> incidence(n);
    for (size_t c = 0; c < constraints.size(); ++c)
        for (int s : constraints[c].spins) incidence[s].push_back(static_cast<int32_t>(c));

    std::vector<ReplicaState> reps(replicas);
    for (int r = 0; r < replicas; ++r) {
        auto& rep = reps[r];
        rep.x.assign(n, 0);
        rep.field = problem.linear;
        rep.energy = problem.constant;
        rep.violated.assign(constraints.size(), 0);
        for (size_t c = 0; c < constraints.size(); ++c) rep.violated[c] = constraints[c].b < 0;
        rep.violated_count = 0;
        for (uint8_t v : rep.violated) rep.violated_count += v;
        rep.rng = Rng(derive_seed(config.seed, static_cast<uint64_t>(r)));
    }
    Rng exchange_rng(derive_seed(config.seed, static_cast<uint64_t>(replicas) + 0x100000));

    AnnealResult result;
    bool have_feasible = reps[0].violated_count == 0;
    result.best_assignment = reps[0].x;
    result.best_energy = reps[0].energy;
    result.feasible = have_feasible;
    result.iterations_to_best = 0;
    int64_t best_any_energy = reps[0].energy;
    int64_t last_improvement = 0;

    // A feasible all-zero start means every term is already at its minimum.
    if (have_feasible) return result;

    // Temperature ladder (replica_exchange): slot 0 coldest.
    std::vector<double> slot_temp(replicas, config.t_max);
    std::vector<std::vector<double>> slot_accept(replicas);
    if (config.mode == AnnealMode::replica_exchange) {
        const double ratio = replicas > 1
                                 ? std::pow(config.t_max / config.t_min,
                                            1.0 / static_cast<double>(replicas - 1))
                                 : 1.0;
        for (int r = 0; r < replicas; ++r) {
            slot_temp[r] = config.t_min * std::pow(ratio, r);
            slot_accept[r] = acceptance_table(slot_temp[r]);
        }
    }

    std::ofstream trace;
    if (!config.trace_csv_path.empty()) {
        trace.open(config.trace_csv_path, std::ios::app);
        trace << "sweep,replica,energy\n";
    }

    std::vector<int32_t> candidates;
    candidates.reserve(n);

    int64_t sweep = 0;
    for (sweep = 1; sweep <= config.sweeps; ++sweep) {
        if (config.mode == AnnealMode::single) {
            const double frac = config.sweeps > 1
                                    ? static_cast<double>(sweep - 1) /
                                          static_cast<double>(config.sweeps - 1)
                                    : 1.0;
            slot_temp[0] = config.t_max * std::pow(config.t_min / config.t_max, frac);
            slot_accept[0] = acceptance_table(slot_temp[0]);
        }

        for (int r = 0; r < replicas; ++r) {
            auto& rep = reps[r];
            const auto& accept = slot_accept[r];
            const auto table_size = static_cast<int64_t>(accept.size());

            candidates.clear();
            for (int i = 0; i < n; ++i) {
                const int64_t de = rep.x[i] ? -rep.field[i] : rep.field[i];
                if (de < 0) {
                    candidates.push_back(i);
                } else if (de < table_size) {
                    if (rep.rng.uniform() < accept[static_cast<size_t>(de)])
                        candidates.push_back(i);
                }
            }
            if (candidates.empty()) continue;
            const int i =
                candidates[rep.rng.uniform_index(static_cast<uint32_t>(candidates.size()))];

            const int64_t de = rep.x[i] ? -rep.field[i] : rep.field[i];
            rep.x[i] ^= 1;
            rep.energy += de;
            const int64_t s = rep.x[i] ? 1 : -1;
            for (int32_t k = problem.adj_offset[i]; k < problem.adj_offset[i + 1]; ++k)
                rep.field[problem.adj_var[k]] += problem.adj_weight[k] * s;
            for (int32_t c : incidence[i]) {
                rep.violated[c] ^= 1;
                rep.violated_count += rep.violated[c] ? 1 : -1;
            }

            if (rep.violated_count == 0) {
                if (!have_feasible || rep.energy < result.best_energy) {
                    have_feasible = true;
                    result.feasible = true;
                    result.best_assignment = rep.x;
                    result.best_energy = rep.energy;
                    result.iterations_to_best = sweep;
                    last_improvement = sweep;
                }
            } else if (!have_feasible && rep.energy < best_any_energy) {
                best_any_energy = rep.energy;
                result.best_assignment = rep.x;
                result.best_energy = rep.energy;
                result.iterations_to_best = sweep;
                last_improvement = sweep;  // still descending toward feasibility
            }

            if (trace.is_open()) trace << sweep << "," << r << "," << rep.energy << "\n";
        }

        if (config.mode == AnnealMode::replica_exchange && config.exchange_interval > 0 &&
            sweep % config.exchange_interval == 0) {
            for (int r = 0; r + 1 < replicas; ++r) {
                const double delta = (1.0 / slot_temp[r] - 1.0 / slot_temp[r + 1]) *
                                     static_cast<double>(reps[r].energy - reps[r + 1].energy);
                const bool accept = delta >= 0.0 || exchange_rng.uniform() < std::exp(delta);
                if (accept) {
                    std::swap(reps[r].x, reps[r + 1].x);
                    std::swap(reps[r].field, reps[r + 1].field);
                    std::swap(reps[r].violated, reps[r + 1].violated);
                    std::swap(reps[r].violated_count, reps[r + 1].violated_count);
                    std::swap(reps[r].energy, reps[r + 1].energy);
                }
            }
        }

        if (sweep - last_improvement >= config.patience) break;
    }

    result.sweeps_used = std::min(sweep, config.sweeps);
    return result;
}

}  // namespace scdec
