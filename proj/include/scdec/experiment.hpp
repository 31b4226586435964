#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "scdec/harness.hpp"
#include "scdec/io.hpp"

namespace scdec {

// A validated simulate configuration: the parameter grid is the cross product
// of d, p and (Ja, Jb) values.
struct SimulateConfig {
    NoiseModel model = NoiseModel::phenomenological;
    std::vector<int> ds;
    std::vector<double> ps;
    std::vector<std::pair<int64_t, int64_t>> jajb{{0, 0}};
    int rounds_fixed = -1;  // -1: T = d
    bool z_only = false;
    bool idle_during_reset_measure = true;
    bool per_pauli = false;

    DecoderKind decoder = DecoderKind::da;
    SectorSet sectors = SectorSet::both;
    int64_t j = 1024;
    int64_t h = 1;
    AnnealerConfig anneal;
    int mwpm_component_cap = 24;

    int trials = 0;
    uint64_t master_seed = 1;
    int jobs = 1;
    std::string out_dir;

    std::string raw_text;  // config file echo, stored in the manifest
};

// Parses and validates config text. Unknown keys, bad values and missing
// required keys raise ParseError with the offending line (line 0 for
// file-level problems).
SimulateConfig parse_simulate_config(const std::string& text);

struct PointResult {
    int index = 0;
    int d = 0;
    double p = 0;
    int64_t ja = 0, jb = 0;
    int rounds = 0;
    uint64_t point_seed = 0;
    RateEstimate rates;
    double p_y = 0;
    bool p_y_defined = false;
    std::string trials_file;
};

// Runs the full grid and writes per-point trial CSVs, a summary CSV, a JSON
// summary and a run manifest under out_dir. Returns the per-point results.
// Progress notes go to log.
std::vector<PointResult> run_simulation(const SimulateConfig& config, std::ostream& log);

// Stable CSV schemas (version 1).
std::string trial_csv_header();
std::string trial_csv_row(int index, const TrialRecord& rec);
std::string summary_csv_header();
std::string summary_csv_row(const PointResult& pt, DecoderKind decoder);

}  // namespace scdec
