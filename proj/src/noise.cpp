#include "scdec/noise.hpp"

#include <stdexcept>

#include "scdec/rng.hpp"

namespace scdec {

const char* noise_model_name(NoiseModel m) {
    switch (m) {
        case NoiseModel::code_capacity: return "code_capacity";
        case NoiseModel::phenomenological: return "phenomenological";
        case NoiseModel::circuit_level: return "circuit_level";
    }
    return "?";
}

int SyndromeTensor::defect_count() const {
    int n = 0;
    for (const auto& layer : x_diff)
        for (int8_t b : layer) n += b < 0;
    for (const auto& layer : z_diff)
        for (int8_t b : layer) n += b < 0;
    return n;
}

ErrorHistory sample_code_capacity(const CodeLayout& layout, double p, uint64_t seed,
                                  bool z_only) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("sample_code_capacity: p out of [0,1]");
    Rng rng(seed);
    ErrorHistory h;
    h.model = NoiseModel::code_capacity;
    h.num_data = layout.num_data;
    h.rounds = 1;
    h.frame_at_round.assign(1, std::vector<uint8_t>(layout.num_data, 0));
    h.x_meas_flip.assign(1, std::vector<uint8_t>(layout.x_checks.size(), 0));
    h.z_meas_flip.assign(1, std::vector<uint8_t>(layout.z_checks.size(), 0));
    auto& frame = h.frame_at_round[0];
    for (int q = 0; q < layout.num_data; ++q) {
        if (z_only) {
            if (rng.bernoulli(p)) frame[q] = kPauliZ;
        } else {
            const double u = rng.uniform();
            if (u < p / 3.0)
                frame[q] = kPauliX;
            else if (u < 2.0 * p / 3.0)
                frame[q] = kPauliY;
            else if (u < p)
                frame[q] = kPauliZ;
        }
    }
    h.final_frame = frame;
    return h;
}

ErrorHistory sample_phenomenological(const CodeLayout& layout, double p, int rounds,
                                     uint64_t seed) {
    if (rounds < 1) throw std::invalid_argument("sample_phenomenological: rounds must be >= 1");
    Rng rng(seed);
    ErrorHistory h;
    h.model = NoiseModel::phenomenological;
    h.num_data = layout.num_data;
    h.rounds = rounds;
    h.frame_at_round.assign(rounds, std::vector<uint8_t>(layout.num_data, 0));
    h.x_meas_flip.assign(rounds, std::vector<uint8_t>(layout.x_checks.size(), 0));
    h.z_meas_flip.assign(rounds, std::vector<uint8_t>(layout.z_checks.size(), 0));

    std::vector<uint8_t> frame(layout.num_data, 0);
    for (int t = 0; t < rounds; ++t) {
        for (int q = 0; q < layout.num_data; ++q) {
            if (rng.bernoulli(p)) frame[q] ^= kPauliZ;
            if (rng.bernoulli(p)) frame[q] ^= kPauliX;
        }
        h.frame_at_round[t] = frame;
        for (auto& b : h.x_meas_flip[t]) b = rng.bernoulli(p);
        for (auto& b : h.z_meas_flip[t]) b = rng.bernoulli(p);
    }
    h.final_frame = frame;
    return h;
}

namespace {

// Circuit-level frame simulator for one shot. Data and ancilla frames are
// advanced step by step; within a step all gates act on disjoint qubits, so
// gates are applied first and the step's noise after them, in fixed id order.
class CircuitFrameSim {
public:
    CircuitFrameSim(const CodeLayout& layout, const NoiseSpec& spec, uint64_t seed,
                    std::span<const PauliInjection> injections)
        : lay_(layout), spec_(spec), rng_(seed), injections_(injections) {
        data_.assign(lay_.num_data, 0);
        x_anc_.assign(lay_.x_checks.size(), 0);
        z_anc_.assign(lay_.z_checks.size(), 0);
        busy_.assign(4, std::vector<uint8_t>(lay_.num_data, 0));
        for (int s = 0; s < 4; ++s) {
            for (const auto& chk : lay_.x_checks)
                if (chk.schedule[s] >= 0) busy_[s][chk.schedule[s]] = 1;
            for (const auto& chk : lay_.z_checks)
                if (chk.schedule[s] >= 0) busy_[s][chk.schedule[s]] = 1;
        }
    }

    ErrorHistory run() {
        ErrorHistory h;
        h.model = NoiseModel::circuit_level;
        h.num_data = lay_.num_data;
        h.rounds = spec_.rounds;
        h.frame_at_round.assign(spec_.rounds, {});
        h.x_meas_flip.assign(spec_.rounds, std::vector<uint8_t>(lay_.x_checks.size(), 0));
        h.z_meas_flip.assign(spec_.rounds, std::vector<uint8_t>(lay_.z_checks.size(), 0));

        for (int t = 1; t <= spec_.rounds; ++t) {
            run_round(t, h);
        }
        h.final_frame = data_;
        return h;
    }

private:
    void apply_injections(int round, int step) {
        for (const auto& inj : injections_) {
            if (inj.round != round || inj.step != step) continue;
            switch (inj.site) {
                case PauliInjection::Site::data: data_[inj.index] ^= inj.pauli; break;
                case PauliInjection::Site::x_check: x_anc_[inj.index] ^= inj.pauli; break;
                case PauliInjection::Site::z_check: z_anc_[inj.index] ^= inj.pauli; break;
            }
        }
    }

    uint8_t sample_single_pauli() {
        // X, Y, Z with probability p/3 each (total p), or p each in
        // per_pauli mode.
        if (spec_.per_pauli) {
            uint8_t f = 0;
            if (rng_.bernoulli(spec_.p)) f ^= kPauliX;
            if (rng_.bernoulli(spec_.p)) f ^= kPauliY;
            if (rng_.bernoulli(spec_.p)) f ^= kPauliZ;
            return f;
        }
        const double u = rng_.uniform();
        if (u < spec_.p / 3.0) return kPauliX;
        if (u < 2.0 * spec_.p / 3.0) return kPauliY;
        if (u < spec_.p) return kPauliZ;
        return kPauliI;
    }

    void two_qubit_noise(uint8_t& a, uint8_t& b) {
        // One of the 15 nontrivial two-qubit Paulis, p/15 each (total p),
        // or p each in per_pauli mode.
        if (spec_.per_pauli) {
            for (int k = 1; k < 16; ++k) {
                if (rng_.bernoulli(spec_.p)) {
                    a ^= static_cast<uint8_t>(k & 3);
                    b ^= static_cast<uint8_t>(k >> 2);
                }
            }
            return;
        }
        const double u = rng_.uniform();
        if (u >= spec_.p) return;
        const int k = 1 + static_cast<int>(u / (spec_.p / 15.0));
        const int kk = k > 15 ? 15 : k;  // guard the u ~ p edge
        a ^= static_cast<uint8_t>(kk & 3);
        b ^= static_cast<uint8_t>(kk >> 2);
    }

    // CNOT frame propagation: X control->target, Z target->control.
    static void cnot(uint8_t& control, uint8_t& target) {
        target ^= control & kPauliX;
        control ^= target & kPauliZ;
    }

    void idle_data_noise(const std::vector<uint8_t>* busy) {
        if (!spec_.idle_noise) return;
        for (int q = 0; q < lay_.num_data; ++q) {
            if (busy && (*busy)[q]) continue;
            data_[q] ^= sample_single_pauli();
        }
    }

    void run_round(int round, ErrorHistory& h) {
        // Step 1: reset. X ancillas to |+> (flip = Z), Z ancillas to |0>
        // (flip = X).
        apply_injections(round, 1);
        for (auto& f : x_anc_)
            f = (spec_.reset_noise && rng_.bernoulli(spec_.p)) ? kPauliZ : kPauliI;
        for (auto& f : z_anc_)
            f = (spec_.reset_noise && rng_.bernoulli(spec_.p)) ? kPauliX : kPauliI;
        if (spec_.idle_during_reset_measure) idle_data_noise(nullptr);

        // Steps 2..5: CNOTs with two-qubit noise, idle noise elsewhere.
        for (int s = 0; s < 4; ++s) {
            apply_injections(round, s + 2);
            for (size_t v = 0; v < lay_.x_checks.size(); ++v) {
                const int q = lay_.x_checks[v].schedule[s];
                if (q < 0) continue;
                cnot(x_anc_[v], data_[q]);
                if (spec_.cnot_noise) two_qubit_noise(x_anc_[v], data_[q]);
            }
            for (size_t f = 0; f < lay_.z_checks.size(); ++f) {
                const int q = lay_.z_checks[f].schedule[s];
                if (q < 0) continue;
                cnot(data_[q], z_anc_[f]);
                if (spec_.cnot_noise) two_qubit_noise(data_[q], z_anc_[f]);
            }
            idle_data_noise(&busy_[s]);
        }

        // Step 6: measurement. X ancillas in the X basis (outcome flips with
        // the Z frame), Z ancillas in the Z basis (X frame). The data frame is
        // recorded at measurement time; step-6 idle noise lands afterwards.
        apply_injections(round, 6);
        h.frame_at_round[round - 1] = data_;
        const Syndrome ideal = ideal_syndrome();
        for (size_t v = 0; v < lay_.x_checks.size(); ++v) {
            uint8_t outcome_flip = (x_anc_[v] & kPauliZ) ? 1 : 0;
            if (spec_.meas_noise) outcome_flip ^= rng_.bernoulli(spec_.p) ? 1 : 0;
            h.x_meas_flip[round - 1][v] = outcome_flip ^ (ideal.x_bits[v] < 0 ? 1 : 0);
        }
        for (size_t f = 0; f < lay_.z_checks.size(); ++f) {
            uint8_t outcome_flip = (z_anc_[f] & kPauliX) ? 1 : 0;
            if (spec_.meas_noise) outcome_flip ^= rng_.bernoulli(spec_.p) ? 1 : 0;
            h.z_meas_flip[round - 1][f] = outcome_flip ^ (ideal.z_bits[f] < 0 ? 1 : 0);
        }
        if (spec_.idle_during_reset_measure) idle_data_noise(nullptr);
    }

    Syndrome ideal_syndrome() const {
        std::vector<uint8_t> zc(lay_.num_data), xc(lay_.num_data);
        for (int q = 0; q < lay_.num_data; ++q) {
            zc[q] = (data_[q] & kPauliZ) ? 1 : 0;
            xc[q] = (data_[q] & kPauliX) ? 1 : 0;
        }
        return stabilizer_syndrome(lay_, zc, xc);
    }

    const CodeLayout& lay_;
    const NoiseSpec& spec_;
    Rng rng_;
    std::span<const PauliInjection> injections_;
    std::vector<uint8_t> data_, x_anc_, z_anc_;
    std::vector<std::vector<uint8_t>> busy_;  // [step 2..5][qubit]
};

}  // namespace

ErrorHistory sample_circuit_level(const CodeLayout& layout, const NoiseSpec& spec,
                                  uint64_t seed, std::span<const PauliInjection> injections) {
    if (spec.rounds < 1) throw std::invalid_argument("sample_circuit_level: rounds must be >= 1");
    CircuitFrameSim sim(layout, spec, seed, injections);
    return sim.run();
}

ErrorHistory sample_errors(const CodeLayout& layout, const NoiseSpec& spec, uint64_t seed) {
    switch (spec.model) {
        case NoiseModel::code_capacity:
            return sample_code_capacity(layout, spec.p, seed, spec.z_only);
        case NoiseModel::phenomenological:
            return sample_phenomenological(layout, spec.p, spec.rounds, seed);
        case NoiseModel::circuit_level:
            return sample_circuit_level(layout, spec, seed);
    }
    throw std::invalid_argument("sample_errors: unknown model");
}

SyndromeTensor extract_syndrome(const CodeLayout& layout, const ErrorHistory& history) {
    const bool measured_noisily = history.model != NoiseModel::code_capacity;
    const int layers = measured_noisily ? history.rounds + 1 : 1;

    SyndromeTensor t;
    t.layers = layers;
    t.x_raw.assign(layers, {});
    t.z_raw.assign(layers, {});

    auto frame_syndrome = [&](const std::vector<uint8_t>& frame) {
        std::vector<uint8_t> zc(history.num_data), xc(history.num_data);
        for (int q = 0; q < history.num_data; ++q) {
            zc[q] = (frame[q] & kPauliZ) ? 1 : 0;
            xc[q] = (frame[q] & kPauliX) ? 1 : 0;
        }
        return stabilizer_syndrome(layout, zc, xc);
    };

    for (int t0 = 0; t0 < history.rounds; ++t0) {
        Syndrome syn = frame_syndrome(history.frame_at_round[t0]);
        for (size_t v = 0; v < syn.x_bits.size(); ++v)
            if (history.x_meas_flip[t0][v]) syn.x_bits[v] = -syn.x_bits[v];
        for (size_t f = 0; f < syn.z_bits.size(); ++f)
            if (history.z_meas_flip[t0][f]) syn.z_bits[f] = -syn.z_bits[f];
        t.x_raw[t0] = std::move(syn.x_bits);
        t.z_raw[t0] = std::move(syn.z_bits);
    }
    if (measured_noisily) {
        Syndrome final_syn = frame_syndrome(history.final_frame);
        t.x_raw[layers - 1] = std::move(final_syn.x_bits);
        t.z_raw[layers - 1] = std::move(final_syn.z_bits);
    }

    auto difference = [](const std::vector<std::vector<int8_t>>& raw) {
        std::vector<std::vector<int8_t>> diff(raw.size());
        for (size_t l = 0; l < raw.size(); ++l) {
            diff[l] = raw[l];
            if (l > 0)
                for (size_t i = 0; i < diff[l].size(); ++i) diff[l][i] *= raw[l - 1][i];
        }
        return diff;
    };
    t.x_diff = difference(t.x_raw);
    t.z_diff = difference(t.z_raw);
    return t;
}

}  // namespace scdec
