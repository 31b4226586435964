#include "scdec/lattice.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace scdec {

namespace {

int horiz_id(int d, int r, int c) { return r * d + c; }
int vert_id(int d, int r, int c) { return d * d + r * (d - 1) + c; }

}  // namespace

CodeLayout build_layout(int d) {
    if (d < 2) throw std::invalid_argument("build_layout: d must be >= 2");

    CodeLayout lay;
    lay.d = d;
    lay.num_data = d * d + (d - 1) * (d - 1);

    lay.data_coords.resize(lay.num_data);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            lay.data_coords[horiz_id(d, r, c)] = {2 * r, 2 * c};
    for (int r = 0; r < d - 1; ++r)
        for (int c = 0; c < d - 1; ++c)
            lay.data_coords[vert_id(d, r, c)] = {2 * r + 1, 2 * c + 1};

    // X checks on vertices (r, c). CNOT order north, west, east, south over
    // steps 2..5, ancilla->data; boundary checks idle in missing steps.
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c < d - 1; ++c) {
            Check chk;
            const int north = (r > 0) ? vert_id(d, r - 1, c) : -1;
            const int south = (r < d - 1) ? vert_id(d, r, c) : -1;
            const int west = horiz_id(d, r, c);
            const int east = horiz_id(d, r, c + 1);
            chk.schedule = {north, west, east, south};
            for (int q : chk.schedule)
                if (q >= 0) chk.qubits.push_back(q);
            std::sort(chk.qubits.begin(), chk.qubits.end());
            lay.x_checks.push_back(std::move(chk));
            lay.x_check_coords.emplace_back(2 * r, 2 * c + 1);
        }
    }

    // Z checks on faces (r, c). CNOT order north, east, west, south,
    // data->ancilla. The two orders interleave without qubit collisions.
    for (int r = 0; r < d - 1; ++r) {
        for (int c = 0; c < d; ++c) {
            Check chk;
            const int north = horiz_id(d, r, c);
            const int south = horiz_id(d, r + 1, c);
            const int west = (c > 0) ? vert_id(d, r, c - 1) : -1;
            const int east = (c < d - 1) ? vert_id(d, r, c) : -1;
            chk.schedule = {north, east, west, south};
            for (int q : chk.schedule)
                if (q >= 0) chk.qubits.push_back(q);
            std::sort(chk.qubits.begin(), chk.qubits.end());
            lay.z_checks.push_back(std::move(chk));
            lay.z_check_coords.emplace_back(2 * r + 1, 2 * c);
        }
    }

    for (int c = 0; c < d; ++c) lay.logical_z_support.push_back(horiz_id(d, 0, c));
    for (int r = 0; r < d; ++r) lay.logical_x_support.push_back(horiz_id(d, r, 0));

    lay.data_to_x_checks.resize(lay.num_data);
    lay.data_to_z_checks.resize(lay.num_data);
    for (int v = 0; v < lay.num_x_checks(); ++v)
        for (int q : lay.x_checks[v].qubits) lay.data_to_x_checks[q].push_back(v);
    for (int f = 0; f < lay.num_z_checks(); ++f)
        for (int q : lay.z_checks[f].qubits) lay.data_to_z_checks[q].push_back(f);

    return lay;
}

Syndrome stabilizer_syndrome(const CodeLayout& layout,
                             const std::vector<uint8_t>& z_errors,
                             const std::vector<uint8_t>& x_errors) {
    if (static_cast<int>(z_errors.size()) != layout.num_data ||
        static_cast<int>(x_errors.size()) != layout.num_data)
        throw std::invalid_argument("stabilizer_syndrome: error mask size mismatch");

    Syndrome syn;
    syn.x_bits.resize(layout.x_checks.size());
    syn.z_bits.resize(layout.z_checks.size());
    for (size_t v = 0; v < layout.x_checks.size(); ++v) {
        int parity = 0;
        for (int q : layout.x_checks[v].qubits) parity ^= z_errors[q] & 1;
        syn.x_bits[v] = parity ? -1 : 1;
    }
    for (size_t f = 0; f < layout.z_checks.size(); ++f) {
        int parity = 0;
        for (int q : layout.z_checks[f].qubits) parity ^= x_errors[q] & 1;
        syn.z_bits[f] = parity ? -1 : 1;
    }
    return syn;
}

LogicalFailure logical_failure(const CodeLayout& layout,
                               const std::vector<uint8_t>& residual_z,
                               const std::vector<uint8_t>& residual_x) {
    const Syndrome syn = stabilizer_syndrome(layout, residual_z, residual_x);
    for (int8_t b : syn.x_bits)
        if (b < 0) throw std::invalid_argument("logical_failure: residual has nonzero syndrome");
    for (int8_t b : syn.z_bits)
        if (b < 0) throw std::invalid_argument("logical_failure: residual has nonzero syndrome");

    LogicalFailure out;
    int zpar = 0, xpar = 0;
    for (int q : layout.logical_x_support) zpar ^= residual_z[q] & 1;
    for (int q : layout.logical_z_support) xpar ^= residual_x[q] & 1;
    out.z_failure = zpar != 0;
    out.x_failure = xpar != 0;
    return out;
}

std::string dump_layout(const CodeLayout& layout) {
    std::ostringstream os;
    os << "scdec-layout v1\n";
    os << "d " << layout.d << "\n";
    os << "data " << layout.num_data << "\n";
    os << "x_checks " << layout.x_checks.size() << "\n";
    os << "z_checks " << layout.z_checks.size() << "\n";
    for (int q = 0; q < layout.num_data; ++q)
        os << "data " << q << " at " << layout.data_coords[q].first << " "
           << layout.data_coords[q].second << "\n";
    auto dump_checks = [&os](const char* name, const std::vector<Check>& checks,
                             const std::vector<std::pair<int, int>>& coords) {
        for (size_t i = 0; i < checks.size(); ++i) {
            os << name << " " << i << " at " << coords[i].first << " " << coords[i].second
               << " qubits";
            for (int q : checks[i].qubits) os << " " << q;
            os << " schedule";
            for (int q : checks[i].schedule) os << " " << q;
            os << "\n";
        }
    };
    dump_checks("xcheck", layout.x_checks, layout.x_check_coords);
    dump_checks("zcheck", layout.z_checks, layout.z_check_coords);
    os << "logical_z";
    for (int q : layout.logical_z_support) os << " " << q;
    os << "\nlogical_x";
    for (int q : layout.logical_x_support) os << " " << q;
    os << "\n";
    return os.str();
}

}  // namespace scdec
