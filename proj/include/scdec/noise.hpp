#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scdec/lattice.hpp"

namespace scdec {

enum class NoiseModel : uint8_t { code_capacity, phenomenological, circuit_level };

const char* noise_model_name(NoiseModel m);

struct NoiseSpec {
    NoiseModel model = NoiseModel::code_capacity;
    double p = 0.0;
    int rounds = 1;  // noisy syndrome rounds T; code_capacity forces 1

    bool z_only = false;  // code-capacity variant: Z errors only

    // Circuit-level switches. idle_during_reset_measure applies data idle
    // noise in steps 1 and 6 as well as in unused CNOT steps. per_pauli reads
    // p as the probability of each Pauli instead of the total channel
    // probability split uniformly.
    bool idle_during_reset_measure = true;
    bool per_pauli = false;

    // Per-channel enables for the circuit-level model, so single channels can
    // be studied in isolation.
    bool idle_noise = true;
    bool cnot_noise = true;
    bool reset_noise = true;
    bool meas_noise = true;
};

// Pauli frames are packed as bit 0 = X component, bit 1 = Z component.
constexpr uint8_t kPauliI = 0, kPauliX = 1, kPauliZ = 2, kPauliY = 3;

// A sampled error realization. frame_at_round[t] is the net Pauli frame on
// each data qubit at the time of round t+1's measurement; final_frame also
// includes noise that lands after the last measurement. Measurement flips are
// effective: raw outcome = ideal syndrome of the frame xor the flip.
struct ErrorHistory {
    NoiseModel model = NoiseModel::code_capacity;
    int num_data = 0;
    int rounds = 0;  // T
    std::vector<std::vector<uint8_t>> frame_at_round;  // [T][num_data]
    std::vector<uint8_t> final_frame;                  // [num_data]
    std::vector<std::vector<uint8_t>> x_meas_flip;     // [T][num_x_checks]
    std::vector<std::vector<uint8_t>> z_meas_flip;     // [T][num_z_checks]
};

// Raw and time-differenced syndromes, +1/-1 bits, per sector. layers is T'
// (1 for code capacity; T+1 otherwise, the last layer being the appended
// noiseless round that closes the time boundary).
struct SyndromeTensor {
    int layers = 0;
    std::vector<std::vector<int8_t>> x_raw, x_diff;  // [layers][num_x_checks]
    std::vector<std::vector<int8_t>> z_raw, z_diff;  // [layers][num_z_checks]

    int defect_count() const;
};

// Deterministic injection of a Pauli into the circuit-level simulation,
// applied before the gates of the given step. Used by tests to trace error
// propagation (hook errors, round-boundary consistency).
struct PauliInjection {
    enum class Site : uint8_t { data, x_check, z_check };
    int round = 1;  // 1-based
    int step = 1;   // 1..6
    Site site = Site::data;
    int index = 0;
    uint8_t pauli = kPauliI;
};

// Code capacity: each data qubit independently gets X, Y or Z with
// probability p/3 each (or Z with probability p in the z_only variant);
// one perfect measurement round.
ErrorHistory sample_code_capacity(const CodeLayout& layout, double p, uint64_t seed,
                                  bool z_only = false);

// Phenomenological: per round, each data qubit gains Z with probability p and
// X with probability p (independently); each check outcome flips with
// probability p. Errors persist across rounds.
ErrorHistory sample_phenomenological(const CodeLayout& layout, double p, int rounds,
                                     uint64_t seed);

// Circuit level: Pauli-frame simulation of T repetitions of the six-step
// extraction circuit (reset, four CNOT steps, measurement) with idle, CNOT,
// reset and measurement noise as configured in spec.
ErrorHistory sample_circuit_level(const CodeLayout& layout, const NoiseSpec& spec,
                                  uint64_t seed,
                                  std::span<const PauliInjection> injections = {});

// Dispatch on spec.model.
ErrorHistory sample_errors(const CodeLayout& layout, const NoiseSpec& spec, uint64_t seed);

// Computes raw rounds from the history, appends one noiseless round after the
// noisy ones (measurement-noise models only), and differences in time:
// diff_t = raw_t xor raw_{t-1} with raw_0 = all +1.
SyndromeTensor extract_syndrome(const CodeLayout& layout, const ErrorHistory& history);

}  // namespace scdec
