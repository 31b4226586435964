#include <doctest.h>

#include "scdec/lattice.hpp"
#include "scdec/noise.hpp"
#include "scdec/rng.hpp"

using namespace scdec;

namespace {

int count_defects(const std::vector<int8_t>& bits) {
    int n = 0;
    for (int8_t b : bits) n += b < 0;
    return n;
}

// Hand-built phenomenological history: Z errors per (round, qubit) and
// measurement flips per (round, x-check). Errors persist across rounds.
ErrorHistory make_history(const CodeLayout& lay, int rounds,
                          const std::vector<std::pair<int, int>>& z_errors,
                          const std::vector<std::pair<int, int>>& x_flips) {
    ErrorHistory h;
    h.model = NoiseModel::phenomenological;
    h.num_data = lay.num_data;
    h.rounds = rounds;
    h.frame_at_round.assign(rounds, std::vector<uint8_t>(lay.num_data, 0));
    h.x_meas_flip.assign(rounds, std::vector<uint8_t>(lay.x_checks.size(), 0));
    h.z_meas_flip.assign(rounds, std::vector<uint8_t>(lay.z_checks.size(), 0));
    std::vector<uint8_t> frame(lay.num_data, 0);
    for (int t = 0; t < rounds; ++t) {
        for (const auto& [rt, q] : z_errors)
            if (rt == t + 1) frame[q] ^= kPauliZ;
        h.frame_at_round[t] = frame;
        for (const auto& [rt, v] : x_flips)
            if (rt == t + 1) h.x_meas_flip[t][v] = 1;
    }
    h.final_frame = frame;
    return h;
}

}  // namespace

TEST_CASE("code capacity edge probabilities") {
    const CodeLayout lay = build_layout(3);
    SUBCASE("p=0: empty history") {
        const ErrorHistory h = sample_code_capacity(lay, 0.0, 42);
        for (uint8_t f : h.final_frame) CHECK(f == kPauliI);
        CHECK(h.rounds == 1);
    }
    SUBCASE("p=1 z_only: every qubit has Z") {
        const ErrorHistory h = sample_code_capacity(lay, 1.0, 42, true);
        for (uint8_t f : h.final_frame) CHECK(f == kPauliZ);
    }
    SUBCASE("p out of range rejected") {
        CHECK_THROWS_AS(sample_code_capacity(lay, 1.5, 1), std::invalid_argument);
    }
}

TEST_CASE("code capacity mean error count approximates the binomial mean") {
    // d=6, p=10%: N_d p = 6.1 errors expected per shot.
    const CodeLayout lay = build_layout(6);
    CHECK(lay.num_data == 61);
    double total = 0;
    const int samples = 1000;
    for (int s = 0; s < samples; ++s) {
        const ErrorHistory h = sample_code_capacity(lay, 0.10, 9000 + s);
        for (uint8_t f : h.final_frame) total += f != kPauliI;
    }
    const double mean = total / samples;
    // 4 sigma of the sample mean is about 0.3.
    CHECK(mean > 6.1 - 0.3);
    CHECK(mean < 6.1 + 0.3);
}

TEST_CASE("phenomenological syndromes") {
    const CodeLayout lay = build_layout(3);
    SUBCASE("p=0: all-+1 tensor with T+1 layers") {
        const ErrorHistory h = sample_phenomenological(lay, 0.0, 3, 7);
        const SyndromeTensor t = extract_syndrome(lay, h);
        CHECK(t.layers == 4);
        CHECK(t.defect_count() == 0);
    }
    SUBCASE("single measurement flip at round t marks diff layers t and t+1") {
        const ErrorHistory h = make_history(lay, 3, {}, {{2, 4}});
        const SyndromeTensor t = extract_syndrome(lay, h);
        CHECK(t.x_diff[1][4] == -1);
        CHECK(t.x_diff[2][4] == -1);
        CHECK(t.defect_count() == 2);
    }
    SUBCASE("flip at the last noisy round is exposed by the appended round") {
        const ErrorHistory h = make_history(lay, 3, {}, {{3, 2}});
        const SyndromeTensor t = extract_syndrome(lay, h);
        CHECK(t.x_diff[2][2] == -1);
        CHECK(t.x_diff[3][2] == -1);  // the perfect layer
        CHECK(t.defect_count() == 2);
    }
    SUBCASE("single data Z at round t: two defects in layer t only") {
        const int interior = lay.num_data - 1;
        const ErrorHistory h = make_history(lay, 3, {{2, interior}}, {});
        const SyndromeTensor t = extract_syndrome(lay, h);
        CHECK(count_defects(t.x_diff[0]) == 0);
        CHECK(count_defects(t.x_diff[1]) == 2);
        CHECK(count_defects(t.x_diff[2]) == 0);
        CHECK(count_defects(t.x_diff[3]) == 0);
    }
}

TEST_CASE("diff layers telescope to the final raw layer") {
    const CodeLayout lay = build_layout(3);
    const ErrorHistory h = sample_phenomenological(lay, 0.15, 4, 1234);
    const SyndromeTensor t = extract_syndrome(lay, h);
    for (int v = 0; v < lay.num_x_checks(); ++v) {
        int prod = 1;
        for (int l = 0; l < t.layers; ++l) prod *= t.x_diff[l][v];
        CHECK(prod == t.x_raw[t.layers - 1][v]);
    }
    for (int f = 0; f < lay.num_z_checks(); ++f) {
        int prod = 1;
        for (int l = 0; l < t.layers; ++l) prod *= t.z_diff[l][f];
        CHECK(prod == t.z_raw[t.layers - 1][f]);
    }
}

TEST_CASE("samplers are deterministic in the seed") {
    const CodeLayout lay = build_layout(3);
    NoiseSpec spec;
    spec.model = NoiseModel::circuit_level;
    spec.p = 0.01;
    spec.rounds = 3;
    const ErrorHistory a = sample_circuit_level(lay, spec, 77);
    const ErrorHistory b = sample_circuit_level(lay, spec, 77);
    CHECK(a.frame_at_round == b.frame_at_round);
    CHECK(a.final_frame == b.final_frame);
    CHECK(a.x_meas_flip == b.x_meas_flip);
    CHECK(a.z_meas_flip == b.z_meas_flip);
    const ErrorHistory c = sample_circuit_level(lay, spec, 78);
    CHECK(a.final_frame != c.final_frame);
}

TEST_CASE("ideal circuit reproduces the stabilizer syndrome for injected errors") {
    const CodeLayout lay = build_layout(3);
    NoiseSpec spec;
    spec.model = NoiseModel::circuit_level;
    spec.p = 0.0;
    spec.rounds = 2;

    Rng rng(555);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<PauliInjection> inj;
        std::vector<uint8_t> zmask(lay.num_data, 0), xmask(lay.num_data, 0);
        for (int q = 0; q < lay.num_data; ++q) {
            const auto pauli = static_cast<uint8_t>(rng.uniform_index(4));
            if (pauli == kPauliI) continue;
            inj.push_back({1, 1, PauliInjection::Site::data, q, pauli});
            if (pauli & kPauliZ) zmask[q] = 1;
            if (pauli & kPauliX) xmask[q] = 1;
        }
        const ErrorHistory h = sample_circuit_level(lay, spec, 1, inj);
        const SyndromeTensor t = extract_syndrome(lay, h);
        const Syndrome expect = stabilizer_syndrome(lay, zmask, xmask);
        CHECK(t.x_diff[0] == expect.x_bits);
        CHECK(t.z_diff[0] == expect.z_bits);
        // Later layers are quiet: the frame persists and measurements are clean.
        CHECK(count_defects(t.x_diff[1]) == 0);
        CHECK(count_defects(t.x_diff[2]) == 0);
        CHECK(count_defects(t.z_diff[1]) == 0);
        CHECK(count_defects(t.z_diff[2]) == 0);
    }
}

TEST_CASE("circuit-level matches phenomenological for round-boundary realizations") {
    const CodeLayout lay = build_layout(3);
    Rng rng(808);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<std::pair<int, int>> z_errors, x_flips;
        std::vector<PauliInjection> inj;
        for (int t = 1; t <= 3; ++t) {
            for (int q = 0; q < lay.num_data; ++q) {
                if (rng.uniform() < 0.08) {
                    z_errors.push_back({t, q});
                    inj.push_back({t, 1, PauliInjection::Site::data, q, kPauliZ});
                }
            }
            for (int v = 0; v < lay.num_x_checks(); ++v) {
                if (rng.uniform() < 0.08) {
                    x_flips.push_back({t, v});
                    // A Z on the X ancilla right before measurement flips only
                    // that round's outcome.
                    inj.push_back({t, 6, PauliInjection::Site::x_check, v, kPauliZ});
                }
            }
        }
        NoiseSpec spec;
        spec.model = NoiseModel::circuit_level;
        spec.p = 0.0;
        spec.rounds = 3;
        const SyndromeTensor via_circuit =
            extract_syndrome(lay, sample_circuit_level(lay, spec, 1, inj));
        const SyndromeTensor via_pheno =
            extract_syndrome(lay, make_history(lay, 3, z_errors, x_flips));
        CHECK(via_circuit.x_diff == via_pheno.x_diff);
        CHECK(via_circuit.z_diff == via_pheno.z_diff);
    }
}

TEST_CASE("hook errors propagate through the schedule") {
    const CodeLayout lay = build_layout(3);
    NoiseSpec spec;
    spec.model = NoiseModel::circuit_level;
    spec.p = 0.0;
    spec.rounds = 2;

    // Interior Z check: all four schedule slots occupied.
    int face = -1;
    for (int f = 0; f < lay.num_z_checks(); ++f)
        if (lay.z_checks[f].qubits.size() == 4) face = f;
    REQUIRE(face >= 0);

    SUBCASE("X on a Z ancilla flips only that round's outcome") {
        std::vector<PauliInjection> inj{{1, 4, PauliInjection::Site::z_check, face, kPauliX}};
        const ErrorHistory h = sample_circuit_level(lay, spec, 1, inj);
        const SyndromeTensor t = extract_syndrome(lay, h);
        for (uint8_t f : h.final_frame) CHECK(f == kPauliI);
        CHECK(t.z_diff[0][face] == -1);
        CHECK(t.z_diff[1][face] == -1);
        CHECK(t.defect_count() == 2);
    }
    SUBCASE("Z on a Z ancilla spreads onto the remaining scheduled qubits") {
        for (int step : {3, 5}) {
            std::vector<PauliInjection> inj{
                {1, step, PauliInjection::Site::z_check, face, kPauliZ}};
            const ErrorHistory h = sample_circuit_level(lay, spec, 1, inj);
            // Data qubits touched by this check at steps >= step pick up Z.
            std::vector<uint8_t> expect(lay.num_data, 0);
            for (int s = step; s <= 5; ++s) {
                const int q = lay.z_checks[face].schedule[s - 2];
                if (q >= 0) expect[q] = 1;
            }
            for (int q = 0; q < lay.num_data; ++q)
                CHECK(h.final_frame[q] == (expect[q] ? kPauliZ : kPauliI));
            // Hook weight, hence defect separation, depends on the step.
            int weight = 0;
            for (uint8_t e : expect) weight += e;
            CHECK(weight == 6 - step);
        }
    }
}

TEST_CASE("measurement-flip channel alone flips every raw bit each round") {
    const CodeLayout lay = build_layout(2);
    NoiseSpec spec;
    spec.model = NoiseModel::circuit_level;
    spec.p = 1.0;
    spec.rounds = 3;
    spec.idle_noise = false;
    spec.cnot_noise = false;
    spec.reset_noise = false;
    const ErrorHistory h = sample_circuit_level(lay, spec, 3);
    const SyndromeTensor t = extract_syndrome(lay, h);
    for (int l = 0; l < 3; ++l) {
        for (int8_t b : t.x_raw[l]) CHECK(b == -1);
        for (int8_t b : t.z_raw[l]) CHECK(b == -1);
    }
    for (int8_t b : t.x_raw[3]) CHECK(b == 1);  // the appended perfect layer
    for (int8_t b : t.z_raw[3]) CHECK(b == 1);
}

TEST_CASE("code capacity tensor has a single layer") {
    const CodeLayout lay = build_layout(3);
    const ErrorHistory h = sample_code_capacity(lay, 0.2, 5);
    const SyndromeTensor t = extract_syndrome(lay, h);
    CHECK(t.layers == 1);
    CHECK(t.x_diff == t.x_raw);
}
