#include "scdec/hamiltonian.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace scdec {

const char* sector_name(ErrorSector s) { return s == ErrorSector::Z ? "z" : "x"; }

namespace {

int64_t comb2(int64_t x) { return x * (x - 1) / 2; }

// Symmetry-reduced validity check: with the ansatz symmetric in the data bits
// and in the auxiliary bits, the requirement only depends on the occupation
// numbers n (data) and m (aux).
bool coefficients_valid(int degree, int b, const ConversionCoefficients& t) {
    for (int n = 0; n <= degree; ++n) {
        int64_t best = 0;
        bool first = true;
        for (int m = 0; m <= 3; ++m) {
            const int64_t v = b * (t.a * comb2(m) + t.b * m * n + t.e * m);
            if (first || v < best) best = v, first = false;
        }
        const int64_t target = (n % 2 == 0) ? -b : b;  // -b * (-1)^n
        if (best + b * (t.c * comb2(n) + t.d * n + t.f) != target) return false;
    }
    return true;
}

}  // namespace

ConversionCoefficients derive_conversion_coefficients(int degree, int b_value,
                                                      int grid_bound) {
    if (degree < 2 || degree > 6)
        throw std::invalid_argument("derive_conversion_coefficients: degree must be in 2..6");
    if (b_value != 1 && b_value != -1)
        throw std::invalid_argument("derive_conversion_coefficients: b must be +1 or -1");

    const int G = grid_bound;
    const int b = b_value;
    for (int A = -G; A <= G; ++A) {
        for (int B = -G; B <= G; ++B) {
            for (int E = -G; E <= G; ++E) {
                // Solve C, D, F from the n = 0, 1, 2 conditions, then verify.
                int64_t psi[3];
                for (int n = 0; n < 3; ++n) {
                    int64_t best = 0;
                    bool first = true;
                    for (int m = 0; m <= 3; ++m) {
                        const int64_t v =
                            static_cast<int64_t>(b) * (A * comb2(m) + B * m * n + E * m);
                        if (first || v < best) best = v, first = false;
                    }
                    const int64_t target = (n % 2 == 0) ? -b : b;
                    psi[n] = target - best;
                }
                const int64_t F = b * psi[0];
                const int64_t D = b * psi[1] - F;
                const int64_t C = b * psi[2] - 2 * D - F;
                if (std::max({std::abs(C), std::abs(D), std::abs(F)}) > G) continue;
                ConversionCoefficients t{A, B, C, D, E, F};
                if (coefficients_valid(degree, b, t)) return t;
            }
        }
    }
    std::ostringstream os;
    os << "derive_conversion_coefficients: no valid tuple for degree " << degree << ", b "
       << b_value << " within grid bound " << grid_bound;
    throw std::runtime_error(os.str());
}

int64_t verify_conversion(int degree, int b_value, const ConversionCoefficients& t) {
    const int k = degree;
    const int b = b_value;
    int64_t cases = 0;
    for (int xs = 0; xs < (1 << k); ++xs) {
        const int n = __builtin_popcount(static_cast<unsigned>(xs));
        const int64_t target = ((n % 2 == 0) ? -b : b);
        int64_t best = 0;
        bool first = true;
        for (int ws = 0; ws < 8; ++ws) {
            const int m = __builtin_popcount(static_cast<unsigned>(ws));
            const int64_t v = b * (t.a * comb2(m) + t.b * m * n + t.c * comb2(n) + t.d * n +
                                   t.e * m + t.f);
            if (first || v < best) best = v, first = false;
        }
        if (best != target) return 0;
        cases += 8;
    }
    return cases;
}

namespace {

// Derived-and-verified tuples for every degree and syndrome value, computed
// once per process.
const ConversionCoefficients& conversion_for(int degree, int b) {
    static const std::array<std::array<ConversionCoefficients, 2>, 7> table = [] {
        std::array<std::array<ConversionCoefficients, 2>, 7> tab{};
        for (int k = 2; k <= 6; ++k) {
            for (int bi = 0; bi < 2; ++bi) {
                const int bv = bi == 0 ? 1 : -1;
                tab[k][bi] = derive_conversion_coefficients(k, bv);
                if (verify_conversion(k, bv, tab[k][bi]) == 0)
                    throw std::runtime_error("conversion coefficient verification failed");
            }
        }
        return tab;
    }();
    return table[degree][b > 0 ? 0 : 1];
}

struct SpinBlocks {
    bool has_z = false, has_x = false;
    int num_data = 0, layers = 0, nv = 0, nf = 0;
    int z_data = -1, z_meas = -1, x_data = -1, x_meas = -1;
    int total = 0;

    static SpinBlocks make(const CodeLayout& lay, int layers, SectorSet sectors) {
        SpinBlocks sb;
        sb.has_z = sectors != SectorSet::x_only;
        sb.has_x = sectors != SectorSet::z_only;
        sb.num_data = lay.num_data;
        sb.layers = layers;
        sb.nv = lay.num_x_checks();
        sb.nf = lay.num_z_checks();
        int off = 0;
        if (sb.has_z) {
            sb.z_data = off;
            off += sb.num_data * layers;
            sb.z_meas = off;
            off += sb.nv * (layers - 1);
        }
        if (sb.has_x) {
            sb.x_data = off;
            off += sb.num_data * layers;
            sb.x_meas = off;
            off += sb.nf * (layers - 1);
        }
        sb.total = off;
        return sb;
    }

    int data_spin(ErrorSector s, int qubit, int layer) const {
        const int base = s == ErrorSector::Z ? z_data : x_data;
        return base + (layer - 1) * num_data + qubit;
    }
    int meas_spin(ErrorSector s, int check, int gap) const {
        const int base = s == ErrorSector::Z ? z_meas : x_meas;
        const int stride = s == ErrorSector::Z ? nv : nf;
        return base + (gap - 1) * stride + check;
    }
};

void append_sector(const CodeLayout& lay, const SpinBlocks& sb, ErrorSector sector,
                   const std::vector<std::vector<int8_t>>& diff, HoboProblem& hobo) {
    const auto& checks = sector == ErrorSector::Z ? lay.x_checks : lay.z_checks;
    for (int t = 1; t <= sb.layers; ++t) {
        for (size_t c = 0; c < checks.size(); ++c) {
            HoboConstraint con;
            con.sector = sector;
            con.check = static_cast<int>(c);
            con.layer = t;
            con.b = diff[t - 1][c];
            for (int q : checks[c].qubits) con.spins.push_back(sb.data_spin(sector, q, t));
            if (t >= 2) con.spins.push_back(sb.meas_spin(sector, static_cast<int>(c), t - 1));
            if (t <= sb.layers - 1)
                con.spins.push_back(sb.meas_spin(sector, static_cast<int>(c), t));
            hobo.constraints.push_back(std::move(con));
        }
    }
}

}  // namespace

std::vector<int64_t> compute_y_couplings(const CodeLayout& layout,
                                         const SyndromeTensor& syndrome, int64_t ja,
                                         int64_t jb) {
    if (ja < 0 || jb < 0)
        throw std::invalid_argument("compute_y_couplings: Ja, Jb must be >= 0");
    std::vector<int64_t> jprime(static_cast<size_t>(syndrome.layers) * layout.num_data, ja);
    for (int t = 0; t < syndrome.layers; ++t) {
        for (int q = 0; q < layout.num_data; ++q) {
            bool x_defect = false, z_defect = false;
            for (int v : layout.data_to_x_checks[q]) x_defect |= syndrome.x_diff[t][v] < 0;
            for (int f : layout.data_to_z_checks[q]) z_defect |= syndrome.z_diff[t][f] < 0;
            if (x_defect && z_defect)
                jprime[static_cast<size_t>(t) * layout.num_data + q] = ja + jb;
        }
    }
    return jprime;
}

HoboProblem build_hobo(const CodeLayout& layout, const SyndromeTensor& syndrome,
                       const HoboParams& params, SectorSet sectors) {
    if (params.j <= 0 || params.h <= 0)
        throw std::invalid_argument("build_hobo: J and h must be positive");
    const int64_t ja = params.y_coupling ? params.y_coupling->first : 0;
    const int64_t jb = params.y_coupling ? params.y_coupling->second : 0;
    if (params.y_coupling) {
        if (sectors != SectorSet::both)
            throw std::invalid_argument("build_hobo: y coupling needs both sectors");
        if (ja < 0 || jb < 0) throw std::invalid_argument("build_hobo: Ja, Jb must be >= 0");
    }
    // The constraint scale has to dominate the field and coupling scales or
    // the ground state may trade a violated constraint for fewer events.
    if (params.j <= 6 * (params.h + ja + jb))
        throw std::invalid_argument("build_hobo: J must exceed 6*(h + Ja + Jb)");

    const SpinBlocks sb = SpinBlocks::make(layout, syndrome.layers, sectors);

    HoboProblem hobo;
    hobo.params = params;
    hobo.layers = syndrome.layers;
    hobo.num_data = layout.num_data;
    hobo.has_z = sb.has_z;
    hobo.has_x = sb.has_x;
    hobo.spins.resize(sb.total);
    if (sb.has_z) {
        for (int t = 1; t <= sb.layers; ++t)
            for (int q = 0; q < sb.num_data; ++q)
                hobo.spins[sb.data_spin(ErrorSector::Z, q, t)] = {SpinInfo::Kind::data,
                                                                  ErrorSector::Z, q, t};
        for (int g = 1; g <= sb.layers - 1; ++g)
            for (int v = 0; v < sb.nv; ++v)
                hobo.spins[sb.meas_spin(ErrorSector::Z, v, g)] = {SpinInfo::Kind::meas,
                                                                  ErrorSector::Z, v, g};
    }
    if (sb.has_x) {
        for (int t = 1; t <= sb.layers; ++t)
            for (int q = 0; q < sb.num_data; ++q)
                hobo.spins[sb.data_spin(ErrorSector::X, q, t)] = {SpinInfo::Kind::data,
                                                                  ErrorSector::X, q, t};
        for (int g = 1; g <= sb.layers - 1; ++g)
            for (int f = 0; f < sb.nf; ++f)
                hobo.spins[sb.meas_spin(ErrorSector::X, f, g)] = {SpinInfo::Kind::meas,
                                                                  ErrorSector::X, f, g};
    }

    if (sb.has_z) append_sector(layout, sb, ErrorSector::Z, syndrome.x_diff, hobo);
    if (sb.has_x) append_sector(layout, sb, ErrorSector::X, syndrome.z_diff, hobo);

    if (params.y_coupling) {
        const auto jprime = compute_y_couplings(layout, syndrome, ja, jb);
        for (int t = 1; t <= sb.layers; ++t) {
            for (int q = 0; q < sb.num_data; ++q) {
                const int64_t jp = jprime[static_cast<size_t>(t - 1) * sb.num_data + q];
                if (jp == 0) continue;
                hobo.couplings.push_back({sb.data_spin(ErrorSector::Z, q, t),
                                          sb.data_spin(ErrorSector::X, q, t), jp});
            }
        }
    }
    return hobo;
}

int64_t evaluate(const HoboProblem& problem, std::span<const int8_t> spins) {
    if (static_cast<int>(spins.size()) != problem.num_spins())
        throw std::invalid_argument("evaluate: spin assignment size mismatch");
    int64_t e = 0;
    for (const auto& con : problem.constraints) {
        int prod = 1;
        for (int s : con.spins) prod *= spins[s];
        e -= problem.params.j * con.b * prod;
    }
    for (int i = 0; i < problem.num_spins(); ++i) e -= problem.params.h * spins[i];
    for (const auto& cp : problem.couplings)
        e -= cp.jprime * spins[cp.z_spin] * spins[cp.x_spin];
    return e;
}

QuboProblem hobo_to_qubo(const HoboProblem& hobo) {
    QuboProblem q;
    q.params = hobo.params;
    q.layers = hobo.layers;
    q.num_data = hobo.num_data;
    q.has_z = hobo.has_z;
    q.has_x = hobo.has_x;
    q.spins = hobo.spins;
    q.constraints = hobo.constraints;
    q.num_spins = hobo.num_spins();
    q.num_vars = q.num_spins + 3 * static_cast<int>(hobo.constraints.size());
    q.linear.assign(q.num_vars, 0);
    q.constant = 0;

    std::vector<std::pair<std::pair<int, int>, int64_t>> coo;
    auto add_quad = [&coo](int i, int j, int64_t w) {
        if (i > j) std::swap(i, j);
        coo.push_back({{i, j}, w});
    };

    const int64_t J = hobo.params.j;
    for (size_t c = 0; c < hobo.constraints.size(); ++c) {
        const auto& con = hobo.constraints[c];
        const auto& t = conversion_for(static_cast<int>(con.spins.size()), con.b);
        const int w0 = q.num_spins + 3 * static_cast<int>(c);
        const int64_t jb = J * con.b;
        add_quad(w0, w0 + 1, jb * t.a);
        add_quad(w0 + 1, w0 + 2, jb * t.a);
        add_quad(w0, w0 + 2, jb * t.a);
        for (int s : con.spins)
            for (int w = w0; w < w0 + 3; ++w) add_quad(s, w, jb * t.b);
        for (size_t i = 0; i < con.spins.size(); ++i)
            for (size_t k = i + 1; k < con.spins.size(); ++k)
                add_quad(con.spins[i], con.spins[k], jb * t.c);
        for (int s : con.spins) q.linear[s] += jb * t.d;
        for (int w = w0; w < w0 + 3; ++w) q.linear[w] += jb * t.e;
        q.constant += jb * t.f;
    }

    // Field: -h sigma = 2h x - h per non-auxiliary spin.
    for (int s = 0; s < q.num_spins; ++s) q.linear[s] += 2 * hobo.params.h;
    q.constant -= hobo.params.h * q.num_spins;

    // Coupling: -J' sigma sigma' = -J' (1 - 2x - 2x' + 4xx').
    for (const auto& cp : hobo.couplings) {
        q.linear[cp.z_spin] += 2 * cp.jprime;
        q.linear[cp.x_spin] += 2 * cp.jprime;
        add_quad(cp.z_spin, cp.x_spin, -4 * cp.jprime);
        q.constant -= cp.jprime;
    }

    // Merge duplicates, then mirror into a symmetric CSR.
    std::sort(coo.begin(), coo.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<std::pair<std::pair<int, int>, int64_t>> merged;
    for (const auto& term : coo) {
        if (!merged.empty() && merged.back().first == term.first)
            merged.back().second += term.second;
        else
            merged.push_back(term);
    }
    std::erase_if(merged, [](const auto& t) { return t.second == 0; });

    std::vector<int> degree(q.num_vars, 0);
    for (const auto& t : merged) {
        ++degree[t.first.first];
        ++degree[t.first.second];
    }
    q.adj_offset.assign(q.num_vars + 1, 0);
    for (int i = 0; i < q.num_vars; ++i) q.adj_offset[i + 1] = q.adj_offset[i] + degree[i];
    q.adj_var.resize(merged.size() * 2);
    q.adj_weight.resize(merged.size() * 2);
    std::vector<int32_t> cursor(q.adj_offset.begin(), q.adj_offset.end() - 1);
    for (const auto& t : merged) {
        const auto [i, j] = t.first;
        q.adj_var[cursor[i]] = j;
        q.adj_weight[cursor[i]++] = t.second;
        q.adj_var[cursor[j]] = i;
        q.adj_weight[cursor[j]++] = t.second;
    }
    return q;
}

int64_t QuboProblem::energy(std::span<const uint8_t> x) const {
    if (static_cast<int>(x.size()) != num_vars)
        throw std::invalid_argument("QuboProblem::energy: assignment size mismatch");
    int64_t e = constant;
    for (int i = 0; i < num_vars; ++i) {
        if (!x[i]) continue;
        e += linear[i];
        for (int32_t k = adj_offset[i]; k < adj_offset[i + 1]; ++k) {
            const int32_t j = adj_var[k];
            if (j > i && x[j]) e += adj_weight[k];
        }
    }
    return e;
}

int64_t evaluate(const QuboProblem& problem, std::span<const uint8_t> bits) {
    return problem.energy(bits);
}

DetectedErrors interpret_solution(const QuboProblem& problem, std::span<const uint8_t> bits) {
    if (static_cast<int>(bits.size()) < problem.num_spins)
        throw std::invalid_argument("interpret_solution: assignment misses spin variables");

    DetectedErrors out;
    const int layers = problem.layers;
    auto make_sector = [&](ErrorSector sector) {
        SectorEvents ev;
        ev.data.assign(layers, std::vector<uint8_t>(problem.num_data, 0));
        int checks = 0;
        for (const auto& s : problem.spins)
            if (s.kind == SpinInfo::Kind::meas && s.sector == sector)
                checks = std::max(checks, s.site + 1);
        ev.meas.assign(layers - 1, std::vector<uint8_t>(checks, 0));
        return ev;
    };
    if (problem.has_z) out.z = make_sector(ErrorSector::Z);
    if (problem.has_x) out.x = make_sector(ErrorSector::X);

    for (int i = 0; i < problem.num_spins; ++i) {
        if (!bits[i]) continue;
        const SpinInfo& s = problem.spins[i];
        SectorEvents& ev = s.sector == ErrorSector::Z ? *out.z : *out.x;
        if (s.kind == SpinInfo::Kind::data)
            ev.data[s.layer - 1][s.site] = 1;
        else
            ev.meas[s.layer - 1][s.site] = 1;
    }

    out.violated_constraints = 0;
    for (const auto& con : problem.constraints) {
        int parity = 0;
        for (int s : con.spins) parity ^= bits[s] & 1;
        const int prod = parity ? -1 : 1;
        if (prod != con.b) ++out.violated_constraints;
    }
    out.constraints_satisfied = out.violated_constraints == 0;
    return out;
}

std::string export_qubo(const QuboProblem& problem) {
    std::vector<std::pair<std::pair<int, int>, int64_t>> terms;
    for (int i = 0; i < problem.num_vars; ++i) {
        if (problem.linear[i] != 0) terms.push_back({{i, i}, problem.linear[i]});
        for (int32_t k = problem.adj_offset[i]; k < problem.adj_offset[i + 1]; ++k)
            if (problem.adj_var[k] > i)
                terms.push_back({{i, problem.adj_var[k]}, problem.adj_weight[k]});
    }
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::ostringstream os;
    os << "scdec-qubo v1\n";
    os << "vars " << problem.num_vars << " terms " << terms.size() << " constant "
       << problem.constant << "\n";
    for (const auto& t : terms)
        os << t.first.first << " " << t.first.second << " " << t.second << "\n";
    return os.str();
}

}  // namespace scdec
