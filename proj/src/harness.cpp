#include "scdec/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

#include "scdec/rng.hpp"

namespace scdec {

const char* decoder_name(DecoderKind k) {
    switch (k) {
        case DecoderKind::da: return "da";
        case DecoderKind::da_y_coupled: return "da_y";
        case DecoderKind::mwpm: return "mwpm";
    }
    return "?";
}

namespace {

// Seed streams hanging off a trial seed. Keep stable: replays depend on them.
constexpr uint64_t kSampleStream = 1;
constexpr uint64_t kDecodeStreamZ = 2;
constexpr uint64_t kDecodeStreamX = 3;

struct DecodeOutcome {
    std::optional<SectorEvents> z, x;
    bool feasible = true;
    bool capacity_error = false;
    int64_t iterations = 0;
};

DecodeOutcome decode_da(const CodeLayout& layout, const SyndromeTensor& tensor,
                        const DecoderSpec& spec, uint64_t seed) {
    DecodeOutcome out;
    HoboParams params = spec.params;
    params.y_coupling.reset();
    auto solve_sector = [&](ErrorSector sector, uint64_t stream) {
        const SectorSet set =
            sector == ErrorSector::Z ? SectorSet::z_only : SectorSet::x_only;
        const HoboProblem hobo = build_hobo(layout, tensor, params, set);
        const QuboProblem qubo = hobo_to_qubo(hobo);
        AnnealerConfig cfg = spec.anneal;
        cfg.seed = derive_seed(seed, stream);
        const AnnealResult res = minimize(qubo, cfg);
        const DetectedErrors det = interpret_solution(qubo, res.best_assignment);
        out.feasible = out.feasible && res.feasible && det.constraints_satisfied;
        out.iterations = std::max(out.iterations, res.iterations_to_best);
        return sector == ErrorSector::Z ? det.z : det.x;
    };
    if (spec.sectors != SectorSet::x_only) out.z = solve_sector(ErrorSector::Z, kDecodeStreamZ);
    if (spec.sectors != SectorSet::z_only) out.x = solve_sector(ErrorSector::X, kDecodeStreamX);
    return out;
}

DecodeOutcome decode_da_y(const CodeLayout& layout, const SyndromeTensor& tensor,
                          const DecoderSpec& spec, uint64_t seed) {
    DecodeOutcome out;
    HoboParams params = spec.params;
    if (!params.y_coupling) params.y_coupling = {0, 0};
    const HoboProblem hobo = build_hobo(layout, tensor, params, SectorSet::both);
    const QuboProblem qubo = hobo_to_qubo(hobo);
    AnnealerConfig cfg = spec.anneal;
    cfg.seed = derive_seed(seed, kDecodeStreamZ);
    const AnnealResult res = minimize(qubo, cfg);
    const DetectedErrors det = interpret_solution(qubo, res.best_assignment);
    out.z = det.z;
    out.x = det.x;
    out.feasible = res.feasible && det.constraints_satisfied;
    out.iterations = res.iterations_to_best;
    return out;
}

DecodeOutcome decode_mwpm(const CodeLayout& layout, const SyndromeTensor& tensor,
                          const DecoderSpec& spec) {
    DecodeOutcome out;
    try {
        if (spec.sectors != SectorSet::x_only) {
            const MatchingInstance inst =
                build_matching_instance(layout, tensor, ErrorSector::Z);
            out.z = correction_from_matching(
                layout, inst, solve_matching(inst, spec.mwpm_component_cap));
        }
        if (spec.sectors != SectorSet::z_only) {
            const MatchingInstance inst =
                build_matching_instance(layout, tensor, ErrorSector::X);
            out.x = correction_from_matching(
                layout, inst, solve_matching(inst, spec.mwpm_component_cap));
        }
    } catch (const CapacityError&) {
        out.capacity_error = true;
        out.feasible = false;
    }
    return out;
}

std::vector<uint8_t> fold_events(const SectorEvents& ev, int num_data) {
    std::vector<uint8_t> folded(num_data, 0);
    for (const auto& layer : ev.data)
        for (int q = 0; q < num_data; ++q) folded[q] ^= layer[q];
    return folded;
}

}  // namespace

TrialRecord run_trial(const CodeLayout& layout, const NoiseSpec& noise,
                      const DecoderSpec& decoder, uint64_t seed) {
    TrialRecord rec;
    rec.seed = seed;
    rec.decoder = decoder.kind;

    const ErrorHistory history =
        sample_errors(layout, noise, derive_seed(seed, kSampleStream));
    const SyndromeTensor tensor = extract_syndrome(layout, history);
    rec.defect_count = tensor.defect_count();

    DecodeOutcome out;
    switch (decoder.kind) {
        case DecoderKind::da: out = decode_da(layout, tensor, decoder, seed); break;
        case DecoderKind::da_y_coupled:
            out = decode_da_y(layout, tensor, decoder, seed);
            break;
        case DecoderKind::mwpm: out = decode_mwpm(layout, tensor, decoder); break;
    }
    rec.feasible = out.feasible;
    rec.capacity_error = out.capacity_error;
    rec.iterations_to_best = out.iterations;
    if (out.capacity_error) return rec;

    // Actual Y events: (qubit, round) where the newly acquired error has both
    // components; under measurement-noise models the noise trailing the last
    // round belongs to the appended perfect layer.
    const int T = history.rounds;
    std::vector<uint8_t> prev(layout.num_data, 0);
    for (int t = 0; t < T; ++t) {
        for (int q = 0; q < layout.num_data; ++q) {
            const uint8_t step = history.frame_at_round[t][q] ^ prev[q];
            if (step == kPauliY) ++rec.actual_y;
        }
        prev = history.frame_at_round[t];
    }
    if (history.model != NoiseModel::code_capacity) {
        for (int q = 0; q < layout.num_data; ++q)
            if ((history.final_frame[q] ^ prev[q]) == kPauliY) ++rec.actual_y;
    }

    if (out.z && out.x) {
        const int layers = tensor.layers;
        for (int t = 0; t < layers; ++t)
            for (int q = 0; q < layout.num_data; ++q)
                if (out.z->data[t][q] && out.x->data[t][q]) ++rec.detected_y;
    }

    if (!out.feasible) {
        // Infeasible decode: no syndrome-neutral residual to score.
        if (out.z) rec.z_failure = true;
        if (out.x) rec.x_failure = true;
        return rec;
    }

    std::vector<uint8_t> residual_z(layout.num_data, 0), residual_x(layout.num_data, 0);
    for (int q = 0; q < layout.num_data; ++q) {
        residual_z[q] = (history.final_frame[q] & kPauliZ) ? 1 : 0;
        residual_x[q] = (history.final_frame[q] & kPauliX) ? 1 : 0;
    }
    if (out.z) {
        const auto det = fold_events(*out.z, layout.num_data);
        for (int q = 0; q < layout.num_data; ++q) residual_z[q] ^= det[q];
    } else {
        std::fill(residual_z.begin(), residual_z.end(), 0);
    }
    if (out.x) {
        const auto det = fold_events(*out.x, layout.num_data);
        for (int q = 0; q < layout.num_data; ++q) residual_x[q] ^= det[q];
    } else {
        std::fill(residual_x.begin(), residual_x.end(), 0);
    }

    const LogicalFailure fail = logical_failure(layout, residual_z, residual_x);
    rec.z_failure = out.z && fail.z_failure;
    rec.x_failure = out.x && fail.x_failure;
    return rec;
}

std::vector<TrialRecord> run_trials(const CodeLayout& layout, const NoiseSpec& noise,
                                    const DecoderSpec& decoder, uint64_t point_seed,
                                    int trials, int jobs) {
    if (trials < 1) throw std::invalid_argument("run_trials: trials must be >= 1");
    std::vector<TrialRecord> records(trials);
    const int workers = std::max(1, std::min(jobs, trials));
    if (workers == 1) {
        for (int i = 0; i < trials; ++i)
            records[i] = run_trial(layout, noise, decoder, derive_seed(point_seed, i));
        return records;
    }
    std::atomic<int> next{0};
    auto work = [&] {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= trials) return;
            records[i] = run_trial(layout, noise, decoder, derive_seed(point_seed, i));
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    return records;
}

RateEstimate logical_error_rate(std::span<const TrialRecord> records) {
    if (records.empty()) throw std::invalid_argument("logical_error_rate: no records");
    RateEstimate est;
    est.trials_total = static_cast<int>(records.size());
    int z = 0, x = 0, both = 0, feasible = 0;
    double iter_sum = 0;
    for (const auto& r : records) {
        if (r.capacity_error) {
            ++est.capacity_errors;
            continue;
        }
        ++est.trials_counted;
        z += r.z_failure;
        x += r.x_failure;
        both += r.z_failure || r.x_failure;
        feasible += r.feasible;
        iter_sum += static_cast<double>(r.iterations_to_best);
    }
    if (est.trials_counted == 0) return est;
    const double n = est.trials_counted;
    auto rate = [n](int k, double& p, double& se) {
        p = k / n;
        se = std::sqrt(p * (1.0 - p) / n);
    };
    rate(z, est.p_l_z, est.se_z);
    rate(x, est.p_l_x, est.se_x);
    rate(both, est.p_l, est.se);
    est.feasible_rate = feasible / n;
    est.mean_iterations = iter_sum / n;
    return est;
}

double y_detection_rate(std::span<const TrialRecord> records) {
    double sum = 0;
    int count = 0;
    for (const auto& r : records) {
        if (r.capacity_error || r.actual_y == 0) continue;
        sum += static_cast<double>(r.detected_y) / static_cast<double>(r.actual_y);
        ++count;
    }
    if (count == 0)
        throw std::domain_error("y_detection_rate: no trials with actual Y errors");
    return sum / count;
}

int effective_distance(int d) { return (d + 1) / 2; }

namespace {

// Nelder-Mead simplex over theta = (ln c1, c2, ln p_th).
double nm_minimize(std::function<double(const std::array<double, 3>&)> loss,
                   std::array<double, 3>& theta) {
    constexpr int kDim = 3;
    std::array<std::array<double, 3>, kDim + 1> simplex;
    std::array<double, kDim + 1> value;
    simplex[0] = theta;
    for (int i = 0; i < kDim; ++i) {
        simplex[i + 1] = theta;
        simplex[i + 1][i] += (theta[i] != 0.0) ? 0.05 * std::abs(theta[i]) : 0.05;
    }
    for (int i = 0; i <= kDim; ++i) value[i] = loss(simplex[i]);

    for (int iter = 0; iter < 2000; ++iter) {
        std::array<int, kDim + 1> order{0, 1, 2, 3};
        std::sort(order.begin(), order.end(), [&](int a, int b) { return value[a] < value[b]; });
        const int best = order[0], worst = order[kDim], second = order[kDim - 1];
        if (std::abs(value[worst] - value[best]) <=
            1e-14 * (std::abs(value[best]) + 1e-300))
            break;

        std::array<double, 3> centroid{0, 0, 0};
        for (int i = 0; i <= kDim; ++i) {
            if (i == worst) continue;
            for (int k = 0; k < kDim; ++k) centroid[k] += simplex[i][k] / kDim;
        }
        auto blend = [&](double t) {
            std::array<double, 3> p;
            for (int k = 0; k < kDim; ++k)
                p[k] = centroid[k] + t * (simplex[worst][k] - centroid[k]);
            return p;
        };
        const auto reflect = blend(-1.0);
        const double fr = loss(reflect);
        if (fr < value[best]) {
            const auto expand = blend(-2.0);
            const double fe = loss(expand);
            simplex[worst] = fe < fr ? expand : reflect;
            value[worst] = std::min(fe, fr);
        } else if (fr < value[second]) {
            simplex[worst] = reflect;
            value[worst] = fr;
        } else {
            const auto contract = blend(0.5);
            const double fc = loss(contract);
            if (fc < value[worst]) {
                simplex[worst] = contract;
                value[worst] = fc;
            } else {
                for (int i = 0; i <= kDim; ++i) {
                    if (i == best) continue;
                    for (int k = 0; k < kDim; ++k)
                        simplex[i][k] = simplex[best][k] + 0.5 * (simplex[i][k] - simplex[best][k]);
                    value[i] = loss(simplex[i]);
                }
            }
        }
    }
    int best = 0;
    for (int i = 1; i <= kDim; ++i)
        if (value[i] < value[best]) best = i;
    theta = simplex[best];
    return value[best];
}

}  // namespace

FitResult fit_threshold(std::span<const ThresholdPoint> points) {
    struct P {
        double de, lp, lpl, w;
    };
    std::vector<P> data;
    for (const auto& pt : points) {
        if (pt.p_l <= 0.0) continue;  // log-space fit cannot use zero rates
        const double w = pt.se > 0 ? 1.0 / (pt.se * pt.se) : 1.0;
        data.push_back({static_cast<double>(effective_distance(pt.d)), std::log(pt.p),
                        std::log(pt.p_l), w});
    }
    {
        std::vector<int> ds;
        std::vector<double> ps;
        for (const auto& pt : points)
            if (pt.p_l > 0.0) {
                ds.push_back(pt.d);
                ps.push_back(pt.p);
            }
        std::sort(ds.begin(), ds.end());
        std::sort(ps.begin(), ps.end());
        const bool distinct_d = std::unique(ds.begin(), ds.end()) - ds.begin() >= 2;
        const bool distinct_p = std::unique(ps.begin(), ps.end()) - ps.begin() >= 2;
        if (!distinct_d || !distinct_p)
            throw std::invalid_argument(
                "fit_threshold: need >= 2 distinct d and >= 2 distinct p with P_L > 0");
    }

    // Weighted linear least squares in (u, v, s) with
    // log P = u + v * (de * log p) + s * de seeds the simplex
    // (c2 = v, ln p_th = -s / v, ln c1 = u).
    double m[3][4] = {};
    for (const auto& pt : data) {
        const double basis[3] = {1.0, pt.de * pt.lp, pt.de};
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) m[i][j] += pt.w * basis[i] * basis[j];
            m[i][3] += pt.w * basis[i] * pt.lpl;
        }
    }
    for (int col = 0; col < 3; ++col) {  // Gaussian elimination, partial pivot
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        std::swap(m[col], m[piv]);
        if (std::abs(m[col][col]) < 1e-300)
            throw std::invalid_argument("fit_threshold: degenerate design matrix");
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    const double u = m[0][3] / m[0][0];
    const double v = m[1][3] / m[1][1];
    const double s = m[2][3] / m[2][2];
    if (v == 0.0) throw std::invalid_argument("fit_threshold: degenerate fit (c2 = 0)");

    std::array<double, 3> theta{u, v, -s / v};
    auto loss = [&data](const std::array<double, 3>& th) {
        double total = 0;
        for (const auto& pt : data) {
            const double r = pt.lpl - (th[0] + th[1] * pt.de * (pt.lp - th[2]));
            total += pt.w * r * r;
        }
        return total;
    };
    const double best = nm_minimize(loss, theta);

    FitResult fit;
    fit.c1 = std::exp(theta[0]);
    fit.c2 = theta[1];
    fit.p_th = std::exp(theta[2]);
    fit.residual_norm = std::sqrt(best);
    if (!(fit.p_th > 0.0 && fit.p_th < 1.0))
        throw std::runtime_error("fit_threshold: fitted p_th outside (0,1)");
    return fit;
}

ScalingFit fit_scaling(std::span<const ScalingPoint> points) {
    if (points.size() < 3)
        throw std::invalid_argument("fit_scaling: need >= 3 points");
    std::vector<std::pair<double, double>> loglog, linlog;
    for (const auto& pt : points) {
        if (pt.n_d <= 0 || pt.mean_iterations <= 0)
            throw std::invalid_argument("fit_scaling: points must be positive");
        loglog.push_back({std::log(pt.n_d), std::log(pt.mean_iterations)});
        linlog.push_back({pt.n_d, std::log(pt.mean_iterations)});
    }
    auto ols = [](const std::vector<std::pair<double, double>>& pts, double& slope,
                  double& intercept) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const double n = static_cast<double>(pts.size());
        for (const auto& [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double denom = n * sxx - sx * sx;
        slope = (n * sxy - sx * sy) / denom;
        intercept = (sy - slope * sx) / n;
        double rss = 0;
        for (const auto& [x, y] : pts) {
            const double r = y - (intercept + slope * x);
            rss += r * r;
        }
        return std::sqrt(rss);
    };
    ScalingFit fit;
    fit.residual_norm = ols(loglog, fit.exponent, fit.intercept);
    double es, ei;
    fit.exp_residual_norm = ols(linlog, es, ei);
    return fit;
}

}  // namespace scdec
