#include "scdec/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "scdec/rng.hpp"
#include "scdec/version.hpp"

namespace scdec {

namespace {

double parse_double(const std::string& s, int line, const std::string& key) {
    try {
        size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        throw ParseError(line, "key '" + key + "': expected a number, got '" + s + "'");
    }
}

int64_t parse_int(const std::string& s, int line, const std::string& key) {
    int64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw ParseError(line, "key '" + key + "': expected an integer, got '" + s + "'");
    return v;
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            parts.push_back(cur);
            cur.clear();
        } else if (!isspace(static_cast<unsigned char>(c))) {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    return parts;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

SimulateConfig parse_simulate_config(const std::string& text) {
    std::istringstream in(text);
    auto kv = parse_key_values(in);
    SimulateConfig cfg;
    cfg.raw_text = text;

    auto take = [&kv](const std::string& key) -> std::optional<std::pair<int, std::string>> {
        auto it = kv.find(key);
        if (it == kv.end()) return std::nullopt;
        auto out = it->second;
        kv.erase(it);
        return out;
    };
    auto require = [&take](const std::string& key) {
        auto v = take(key);
        if (!v) throw ParseError(0, "missing required key '" + key + "'");
        return *v;
    };

    {
        auto [line, value] = require("model");
        if (value == "code_capacity")
            cfg.model = NoiseModel::code_capacity;
        else if (value == "phenomenological")
            cfg.model = NoiseModel::phenomenological;
        else if (value == "circuit_level")
            cfg.model = NoiseModel::circuit_level;
        else
            throw ParseError(line, "model must be code_capacity, phenomenological or "
                                   "circuit_level");
    }
    {
        auto [line, value] = require("d");
        for (const auto& part : split_list(value)) {
            const int64_t d = parse_int(part, line, "d");
            if (d < 2) throw ParseError(line, "d values must be >= 2");
            cfg.ds.push_back(static_cast<int>(d));
        }
        if (cfg.ds.empty()) throw ParseError(line, "d list is empty");
    }
    {
        auto [line, value] = require("p");
        for (const auto& part : split_list(value)) {
            const double p = parse_double(part, line, "p");
            if (p < 0 || p > 1) throw ParseError(line, "p values must be in [0,1]");
            cfg.ps.push_back(p);
        }
        if (cfg.ps.empty()) throw ParseError(line, "p list is empty");
    }
    {
        auto [line, value] = require("trials");
        const int64_t t = parse_int(value, line, "trials");
        if (t < 1) throw ParseError(line, "trials must be >= 1");
        cfg.trials = static_cast<int>(t);
    }
    if (auto v = take("decoder")) {
        auto [line, value] = *v;
        if (value == "da")
            cfg.decoder = DecoderKind::da;
        else if (value == "da_y")
            cfg.decoder = DecoderKind::da_y_coupled;
        else if (value == "mwpm")
            cfg.decoder = DecoderKind::mwpm;
        else
            throw ParseError(line, "decoder must be da, da_y or mwpm");
    }
    if (auto v = take("sectors")) {
        auto [line, value] = *v;
        if (value == "z")
            cfg.sectors = SectorSet::z_only;
        else if (value == "x")
            cfg.sectors = SectorSet::x_only;
        else if (value == "both")
            cfg.sectors = SectorSet::both;
        else
            throw ParseError(line, "sectors must be z, x or both");
    }
    if (auto v = take("T")) {
        auto [line, value] = *v;
        if (value == "d") {
            cfg.rounds_fixed = -1;
        } else {
            const int64_t t = parse_int(value, line, "T");
            if (t < 1) throw ParseError(line, "T must be >= 1 (or 'd')");
            cfg.rounds_fixed = static_cast<int>(t);
        }
    }
    {
        auto ja = take("ja"), jb = take("jb");
        if (ja || jb) {
            const auto ja_parts = ja ? split_list(ja->second) : std::vector<std::string>{"0"};
            const auto jb_parts = jb ? split_list(jb->second) : std::vector<std::string>{"0"};
            cfg.jajb.clear();
            for (const auto& a : ja_parts)
                for (const auto& b : jb_parts)
                    cfg.jajb.push_back({parse_int(a, ja ? ja->first : 0, "ja"),
                                        parse_int(b, jb ? jb->first : 0, "jb")});
            for (auto [a, b] : cfg.jajb)
                if (a < 0 || b < 0)
                    throw ParseError(ja ? ja->first : jb->first, "ja/jb must be >= 0");
        }
    }
    if (auto v = take("J")) {
        cfg.j = parse_int(v->second, v->first, "J");
        if (cfg.j <= 0) throw ParseError(v->first, "J must be positive");
    }
    if (auto v = take("h")) {
        cfg.h = parse_int(v->second, v->first, "h");
        if (cfg.h <= 0) throw ParseError(v->first, "h must be positive");
    }
    if (auto v = take("z_only")) cfg.z_only = parse_int(v->second, v->first, "z_only") != 0;
    if (auto v = take("idle_during_reset_measure"))
        cfg.idle_during_reset_measure =
            parse_int(v->second, v->first, "idle_during_reset_measure") != 0;
    if (auto v = take("per_pauli"))
        cfg.per_pauli = parse_int(v->second, v->first, "per_pauli") != 0;
    if (auto v = take("mode")) {
        auto [line, value] = *v;
        if (value == "single")
            cfg.anneal.mode = AnnealMode::single;
        else if (value == "replica_exchange")
            cfg.anneal.mode = AnnealMode::replica_exchange;
        else
            throw ParseError(line, "mode must be single or replica_exchange");
    }
    if (auto v = take("replicas")) {
        cfg.anneal.num_replicas = static_cast<int>(parse_int(v->second, v->first, "replicas"));
        if (cfg.anneal.num_replicas < 1) throw ParseError(v->first, "replicas must be >= 1");
    }
    if (auto v = take("t_max")) cfg.anneal.t_max = parse_double(v->second, v->first, "t_max");
    if (auto v = take("t_min")) cfg.anneal.t_min = parse_double(v->second, v->first, "t_min");
    if (cfg.anneal.t_min <= 0 || cfg.anneal.t_min > cfg.anneal.t_max)
        throw ParseError(0, "need 0 < t_min <= t_max");
    if (auto v = take("sweeps")) {
        cfg.anneal.sweeps = parse_int(v->second, v->first, "sweeps");
        if (cfg.anneal.sweeps < 1) throw ParseError(v->first, "sweeps must be >= 1");
    }
    if (auto v = take("exchange_interval")) {
        cfg.anneal.exchange_interval =
            static_cast<int>(parse_int(v->second, v->first, "exchange_interval"));
        if (cfg.anneal.exchange_interval < 1)
            throw ParseError(v->first, "exchange_interval must be >= 1");
    }
    if (auto v = take("patience")) {
        cfg.anneal.patience = parse_int(v->second, v->first, "patience");
        if (cfg.anneal.patience < 1) throw ParseError(v->first, "patience must be >= 1");
    }
    if (auto v = take("mwpm_component_cap")) {
        cfg.mwpm_component_cap =
            static_cast<int>(parse_int(v->second, v->first, "mwpm_component_cap"));
        if (cfg.mwpm_component_cap < 2 || cfg.mwpm_component_cap > 30)
            throw ParseError(v->first, "mwpm_component_cap must be in 2..30");
    }
    if (auto v = take("seed"))
        cfg.master_seed = static_cast<uint64_t>(parse_int(v->second, v->first, "seed"));
    if (auto v = take("jobs")) {
        cfg.jobs = static_cast<int>(parse_int(v->second, v->first, "jobs"));
        if (cfg.jobs < 1) throw ParseError(v->first, "jobs must be >= 1");
    }
    if (auto v = take("out_dir")) cfg.out_dir = v->second;

    if (!kv.empty()) {
        const auto& [key, lv] = *kv.begin();
        throw ParseError(lv.first, "unknown key '" + key + "'");
    }
    if (cfg.model == NoiseModel::code_capacity && cfg.rounds_fixed > 1)
        throw ParseError(0, "code_capacity forces T = 1");
    return cfg;
}

std::string trial_csv_header() {
    return "trial,seed,feasible,z_failure,x_failure,capacity_error,actual_y,detected_y,"
           "iterations_to_best,defect_count";
}

std::string trial_csv_row(int index, const TrialRecord& rec) {
    std::ostringstream os;
    os << index << "," << rec.seed << "," << rec.feasible << "," << rec.z_failure << ","
       << rec.x_failure << "," << rec.capacity_error << "," << rec.actual_y << ","
       << rec.detected_y << "," << rec.iterations_to_best << "," << rec.defect_count;
    return os.str();
}

std::string summary_csv_header() {
    return "d,p,P_L,SE,decoder,Ja,Jb,mean_iterations,P_L_z,SE_z,P_L_x,SE_x,p_y,trials,"
           "feasible_rate,capacity_errors";
}

std::string summary_csv_row(const PointResult& pt, DecoderKind decoder) {
    std::ostringstream os;
    os << pt.d << "," << format_double(pt.p) << "," << format_double(pt.rates.p_l) << ","
       << format_double(pt.rates.se) << "," << decoder_name(decoder) << "," << pt.ja << ","
       << pt.jb << "," << format_double(pt.rates.mean_iterations) << ","
       << format_double(pt.rates.p_l_z) << "," << format_double(pt.rates.se_z) << ","
       << format_double(pt.rates.p_l_x) << "," << format_double(pt.rates.se_x) << ","
       << (pt.p_y_defined ? format_double(pt.p_y) : "nan") << "," << pt.rates.trials_counted
       << "," << format_double(pt.rates.feasible_rate) << "," << pt.rates.capacity_errors;
    return os.str();
}

std::vector<PointResult> run_simulation(const SimulateConfig& config, std::ostream& log) {
    namespace fs = std::filesystem;
    const fs::path out_dir = config.out_dir.empty() ? fs::path(".") : fs::path(config.out_dir);
    fs::create_directories(out_dir);

    std::vector<PointResult> results;
    int index = 0;
    std::ofstream summary_csv(out_dir / "summary.csv");
    summary_csv << "# scdec-results v1\n" << summary_csv_header() << "\n";

    nlohmann::json summary_json;
    summary_json["version"] = kVersion;
    summary_json["master_seed"] = config.master_seed;
    summary_json["model"] = noise_model_name(config.model);
    summary_json["decoder"] = decoder_name(config.decoder);
    summary_json["trials_per_point"] = config.trials;
    summary_json["points"] = nlohmann::json::array();

    nlohmann::json manifest;
    manifest["tool"] = "scdec";
    manifest["version"] = kVersion;
    manifest["master_seed"] = config.master_seed;
    manifest["config"] = config.raw_text;
    manifest["created"] = [] {
        const auto now = std::chrono::system_clock::now();
        const auto t = std::chrono::system_clock::to_time_t(now);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
        return std::string(buf);
    }();
    manifest["points"] = nlohmann::json::array();

    for (int d : config.ds) {
        const CodeLayout layout = build_layout(d);
        for (double p : config.ps) {
            for (auto [ja, jb] : config.jajb) {
                PointResult pt;
                pt.index = index;
                pt.d = d;
                pt.p = p;
                pt.ja = ja;
                pt.jb = jb;
                pt.rounds = config.model == NoiseModel::code_capacity
                                ? 1
                                : (config.rounds_fixed > 0 ? config.rounds_fixed : d);
                pt.point_seed = derive_seed(config.master_seed, index);

                NoiseSpec noise;
                noise.model = config.model;
                noise.p = p;
                noise.rounds = pt.rounds;
                noise.z_only = config.z_only;
                noise.idle_during_reset_measure = config.idle_during_reset_measure;
                noise.per_pauli = config.per_pauli;

                DecoderSpec dec;
                dec.kind = config.decoder;
                dec.params.j = config.j;
                dec.params.h = config.h;
                if (config.decoder == DecoderKind::da_y_coupled)
                    dec.params.y_coupling = {ja, jb};
                dec.anneal = config.anneal;
                dec.sectors = config.sectors;
                dec.mwpm_component_cap = config.mwpm_component_cap;

                log << "point " << index << ": d=" << d << " p=" << format_double(p)
                    << " ja=" << ja << " jb=" << jb << " T=" << pt.rounds << " ..."
                    << std::flush;
                const auto records = run_trials(layout, noise, dec, pt.point_seed,
                                                config.trials, config.jobs);
                pt.rates = logical_error_rate(records);
                try {
                    pt.p_y = y_detection_rate(records);
                    pt.p_y_defined = true;
                } catch (const std::domain_error&) {
                    pt.p_y_defined = false;
                }
                log << " P_L=" << format_double(pt.rates.p_l) << "\n";

                char name[32];
                std::snprintf(name, sizeof name, "trials_%03d.csv", index);
                pt.trials_file = name;
                std::ofstream tf(out_dir / name);
                tf << trial_csv_header() << "\n";
                for (size_t i = 0; i < records.size(); ++i)
                    tf << trial_csv_row(static_cast<int>(i), records[i]) << "\n";

                summary_csv << summary_csv_row(pt, config.decoder) << "\n";

                nlohmann::json jpt;
                jpt["index"] = pt.index;
                jpt["d"] = pt.d;
                jpt["p"] = pt.p;
                jpt["ja"] = pt.ja;
                jpt["jb"] = pt.jb;
                jpt["rounds"] = pt.rounds;
                jpt["seed"] = pt.point_seed;
                jpt["p_l"] = pt.rates.p_l;
                jpt["se"] = pt.rates.se;
                jpt["p_l_z"] = pt.rates.p_l_z;
                jpt["se_z"] = pt.rates.se_z;
                jpt["p_l_x"] = pt.rates.p_l_x;
                jpt["se_x"] = pt.rates.se_x;
                jpt["feasible_rate"] = pt.rates.feasible_rate;
                jpt["mean_iterations"] = pt.rates.mean_iterations;
                jpt["capacity_errors"] = pt.rates.capacity_errors;
                if (pt.p_y_defined) jpt["p_y"] = pt.p_y;
                summary_json["points"].push_back(jpt);

                nlohmann::json mpt;
                mpt["index"] = pt.index;
                mpt["seed"] = pt.point_seed;
                mpt["trials_file"] = pt.trials_file;
                manifest["points"].push_back(mpt);

                results.push_back(std::move(pt));
                ++index;
            }
        }
    }

    std::ofstream(out_dir / "summary.json") << summary_json.dump(2) << "\n";
    manifest["summary_csv"] = "summary.csv";
    manifest["summary_json"] = "summary.json";
    std::ofstream(out_dir / "manifest.json") << manifest.dump(2) << "\n";
    return results;
}

}  // namespace scdec
