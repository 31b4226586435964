#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "scdec/annealer.hpp"
#include "scdec/experiment.hpp"
#include "scdec/harness.hpp"
#include "scdec/io.hpp"
#include "scdec/mwpm.hpp"
#include "scdec/rng.hpp"
#include "scdec/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitCapacity = 3;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string default_out_dir() {
    const char* env = std::getenv("SCDEC_OUTPUT_DIR");
    return env ? env : ".";
}

struct DecodeOptions {
    std::string syndrome_path;
    std::string decoder = "da";
    std::string sectors = "both";
    std::string out_path;
    int64_t j = 1024, h = 1, ja = 0, jb = 0;
    int replicas = 16;
    double t_max = 5.0, t_min = 0.1;
    int64_t sweeps = 10000, patience = 1000;
    uint64_t seed = 1;
};

scdec::SectorSet parse_sectors(const std::string& s) {
    if (s == "z") return scdec::SectorSet::z_only;
    if (s == "x") return scdec::SectorSet::x_only;
    if (s == "both") return scdec::SectorSet::both;
    throw CLI::ValidationError("--sector must be z, x or both");
}

int cmd_decode(const DecodeOptions& opt) {
    std::ifstream in(opt.syndrome_path);
    if (!in) throw std::runtime_error("cannot open '" + opt.syndrome_path + "'");
    int d = 0;
    const scdec::SyndromeTensor tensor = scdec::read_syndrome(in, d);
    const scdec::CodeLayout layout = scdec::build_layout(d);
    const scdec::SectorSet sectors = parse_sectors(opt.sectors);

    scdec::DetectedErrors detected;
    int64_t energy = 0;
    bool have_energy = false;

    if (opt.decoder == "mwpm") {
        detected.constraints_satisfied = true;
        if (sectors != scdec::SectorSet::x_only) {
            const auto inst =
                scdec::build_matching_instance(layout, tensor, scdec::ErrorSector::Z);
            detected.z = scdec::correction_from_matching(layout, inst,
                                                         scdec::solve_matching(inst));
        }
        if (sectors != scdec::SectorSet::z_only) {
            const auto inst =
                scdec::build_matching_instance(layout, tensor, scdec::ErrorSector::X);
            detected.x = scdec::correction_from_matching(layout, inst,
                                                         scdec::solve_matching(inst));
        }
    } else if (opt.decoder == "da" || opt.decoder == "da_y") {
        scdec::HoboParams params;
        params.j = opt.j;
        params.h = opt.h;
        scdec::SectorSet set = sectors;
        if (opt.decoder == "da_y") {
            params.y_coupling = {opt.ja, opt.jb};
            set = scdec::SectorSet::both;
        }
        scdec::AnnealerConfig cfg;
        cfg.num_replicas = opt.replicas;
        cfg.t_max = opt.t_max;
        cfg.t_min = opt.t_min;
        cfg.sweeps = opt.sweeps;
        cfg.patience = opt.patience;
        cfg.seed = opt.seed;
        auto solve_one = [&](scdec::SectorSet s, uint64_t stream) {
            const auto hobo = scdec::build_hobo(layout, tensor, params, s);
            const auto qubo = scdec::hobo_to_qubo(hobo);
            auto c = cfg;
            c.seed = scdec::derive_seed(opt.seed, stream);
            const auto res = scdec::minimize(qubo, c);
            energy += res.best_energy;
            have_energy = true;
            return scdec::interpret_solution(qubo, res.best_assignment);
        };
        if (opt.decoder == "da_y") {
            detected = solve_one(scdec::SectorSet::both, 0);
        } else {
            detected.constraints_satisfied = true;
            if (set != scdec::SectorSet::x_only) {
                auto dz = solve_one(scdec::SectorSet::z_only, 0);
                detected.z = dz.z;
                detected.constraints_satisfied &= dz.constraints_satisfied;
                detected.violated_constraints += dz.violated_constraints;
            }
            if (set != scdec::SectorSet::z_only) {
                auto dx = solve_one(scdec::SectorSet::x_only, 1);
                detected.x = dx.x;
                detected.constraints_satisfied &= dx.constraints_satisfied;
                detected.violated_constraints += dx.violated_constraints;
            }
        }
    } else {
        throw CLI::ValidationError("--decoder must be da, da_y or mwpm");
    }

    const std::string events = scdec::write_events(detected);
    std::cout << "feasible " << (detected.constraints_satisfied ? "true" : "false") << "\n";
    if (have_energy) std::cout << "energy " << energy << "\n";
    std::cout << events;
    if (!opt.out_path.empty()) {
        std::ofstream out(opt.out_path);
        out << events;
    }
    return detected.constraints_satisfied ? kExitOk : kExitRuntime;
}

int cmd_derive_coeffs(int degree, int b_value, int grid_bound) {
    const auto coeffs = scdec::derive_conversion_coefficients(degree, b_value, grid_bound);
    const int64_t cases = scdec::verify_conversion(degree, b_value, coeffs);
    std::cout << "degree " << degree << " b " << (b_value > 0 ? "+1" : "-1") << "\n";
    std::cout << "A " << coeffs.a << "\nB " << coeffs.b << "\nC " << coeffs.c << "\nD "
              << coeffs.d << "\nE " << coeffs.e << "\nF " << coeffs.f << "\n";
    std::cout << "verified " << cases << " cases (2^" << degree << " spin patterns x 2^3 "
              << "auxiliary patterns)\n";
    return cases > 0 ? kExitOk : kExitRuntime;
}

std::vector<std::vector<double>> read_csv_numbers(const std::string& path, size_t columns) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::vector<std::vector<double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (lineno == 1 && line.find_first_not_of("0123456789.,+-eE \t") != std::string::npos)
            continue;  // header
        std::vector<double> row;
        std::istringstream is(line);
        std::string cell;
        while (std::getline(is, cell, ',')) row.push_back(std::stod(cell));
        if (row.size() != columns)
            throw scdec::ParseError(lineno, "expected " + std::to_string(columns) +
                                               " comma-separated values");
        rows.push_back(row);
    }
    return rows;
}

int cmd_fit_threshold(const std::string& path) {
    std::vector<scdec::ThresholdPoint> points;
    for (const auto& row : read_csv_numbers(path, 4))
        points.push_back({static_cast<int>(row[0]), row[1], row[2], row[3]});
    const auto fit = scdec::fit_threshold(points);
    std::cout << "c1 " << fit.c1 << "\nc2 " << fit.c2 << "\np_th " << fit.p_th
              << "\nresidual_norm " << fit.residual_norm << "\n";
    return kExitOk;
}

int cmd_fit_scaling(const std::string& path) {
    std::vector<scdec::ScalingPoint> points;
    for (const auto& row : read_csv_numbers(path, 2)) points.push_back({row[0], row[1]});
    const auto fit = scdec::fit_scaling(points);
    std::cout << "exponent " << fit.exponent << "\nintercept " << fit.intercept
              << "\nresidual_norm " << fit.residual_norm << "\nexp_residual_norm "
              << fit.exp_residual_norm << "\n";
    return kExitOk;
}

int cmd_export_qubo(const std::string& syndrome_path, const std::string& out_path,
                    const std::string& sectors, int64_t j, int64_t h, int64_t ja, int64_t jb,
                    bool with_y) {
    std::ifstream in(syndrome_path);
    if (!in) throw std::runtime_error("cannot open '" + syndrome_path + "'");
    int d = 0;
    const auto tensor = scdec::read_syndrome(in, d);
    const auto layout = scdec::build_layout(d);
    scdec::HoboParams params;
    params.j = j;
    params.h = h;
    if (with_y) params.y_coupling = {ja, jb};
    const auto hobo = scdec::build_hobo(layout, tensor, params,
                                        with_y ? scdec::SectorSet::both
                                               : parse_sectors(sectors));
    const auto qubo = scdec::hobo_to_qubo(hobo);
    const std::string text = scdec::export_qubo(qubo);
    if (out_path.empty() || out_path == "-") {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write '" + out_path + "'");
        out << text;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"surface-code decoder toolkit: sampling, annealing-based and "
                 "matching-based decoding, Monte Carlo analysis"};
    app.set_version_flag("--version", scdec::kVersion);
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "run an experiment grid from a config file");
    std::string sim_config;
    std::string sim_out = default_out_dir();
    int sim_jobs = 0;
    uint64_t sim_seed = 0;
    bool sim_seed_set = false;
    sim->add_option("-c,--config", sim_config, "config file (key = value lines)")->required();
    sim->add_option("-o,--out", sim_out, "output directory (default $SCDEC_OUTPUT_DIR or .)");
    sim->add_option("-j,--jobs", sim_jobs, "trial-level parallelism override");
    sim->add_option("--seed", sim_seed, "master seed override")->each([&](const std::string&) {
        sim_seed_set = true;
    });

    // decode
    auto* dec = app.add_subcommand("decode", "decode a single syndrome file");
    DecodeOptions dopt;
    dec->add_option("-s,--syndrome", dopt.syndrome_path, "syndrome file")->required();
    dec->add_option("--decoder", dopt.decoder, "da, da_y or mwpm");
    dec->add_option("--sector", dopt.sectors, "z, x or both");
    dec->add_option("-o,--out", dopt.out_path, "write detected events to this file");
    dec->add_option("-J", dopt.j, "constraint weight J");
    dec->add_option("--field", dopt.h, "field weight h");
    dec->add_option("--ja", dopt.ja, "Y-coupling Ja (da_y)");
    dec->add_option("--jb", dopt.jb, "Y-coupling Jb (da_y)");
    dec->add_option("--replicas", dopt.replicas, "annealer replicas");
    dec->add_option("--t-max", dopt.t_max, "maximum temperature");
    dec->add_option("--t-min", dopt.t_min, "minimum temperature");
    dec->add_option("--sweeps", dopt.sweeps, "sweep budget");
    dec->add_option("--patience", dopt.patience, "early-exit patience");
    dec->add_option("--seed", dopt.seed, "annealer seed");

    // derive-coeffs
    auto* der = app.add_subcommand("derive-coeffs",
                                   "derive and verify degree-reduction coefficients");
    int der_degree = 6, der_b = 1, der_grid = 16;
    der->add_option("-k,--degree", der_degree, "constraint degree (2..6)")->required();
    der->add_option("-b", der_b, "syndrome value (+1 or -1)")->required();
    der->add_option("--grid", der_grid, "search grid bound");

    // fit-threshold
    auto* fth = app.add_subcommand("fit-threshold",
                                   "fit c1 (p/p_th)^(c2 d_e) to d,p,P_L,SE points");
    std::string fth_path;
    fth->add_option("-i,--input", fth_path, "CSV with d,p,P_L,SE rows")->required();

    // fit-scaling
    auto* fsc = app.add_subcommand("fit-scaling", "log-log slope of iterations vs N_d");
    std::string fsc_path;
    fsc->add_option("-i,--input", fsc_path, "CSV with N_d,iterations rows")->required();

    // export-qubo
    auto* exq = app.add_subcommand("export-qubo", "emit the QUBO for a syndrome file");
    std::string exq_syndrome, exq_out = "-", exq_sectors = "both";
    int64_t exq_j = 1024, exq_h = 1, exq_ja = 0, exq_jb = 0;
    bool exq_y = false;
    exq->add_option("-s,--syndrome", exq_syndrome, "syndrome file")->required();
    exq->add_option("-o,--out", exq_out, "output path ('-' for stdout)");
    exq->add_option("--sector", exq_sectors, "z, x or both");
    exq->add_option("-J", exq_j, "constraint weight J");
    exq->add_option("--field", exq_h, "field weight h");
    exq->add_flag("--y-coupling", exq_y, "include the Y-coupling term");
    exq->add_option("--ja", exq_ja, "Y-coupling Ja");
    exq->add_option("--jb", exq_jb, "Y-coupling Jb");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (sim->parsed()) {
            auto config = scdec::parse_simulate_config(read_file(sim_config));
            if (!sim_out.empty()) config.out_dir = sim_out;
            if (sim_jobs > 0) config.jobs = sim_jobs;
            if (sim_seed_set) config.master_seed = sim_seed;
            scdec::run_simulation(config, std::cerr);
            return kExitOk;
        }
        if (dec->parsed()) return cmd_decode(dopt);
        if (der->parsed()) return cmd_derive_coeffs(der_degree, der_b, der_grid);
        if (fth->parsed()) return cmd_fit_threshold(fth_path);
        if (fsc->parsed()) return cmd_fit_scaling(fsc_path);
        if (exq->parsed())
            return cmd_export_qubo(exq_syndrome, exq_out, exq_sectors, exq_j, exq_h, exq_ja,
                                   exq_jb, exq_y);
    } catch (const scdec::CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return kExitCapacity;
    } catch (const scdec::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
