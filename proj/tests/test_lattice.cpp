#include <doctest.h>

#include <fstream>
#include <set>
#include <sstream>

#include "scdec/lattice.hpp"

using namespace scdec;

namespace {

std::vector<uint8_t> mask_from(const CodeLayout& lay, std::initializer_list<int> qubits) {
    std::vector<uint8_t> m(lay.num_data, 0);
    for (int q : qubits) m[q] = 1;
    return m;
}

int count_defects(const std::vector<int8_t>& bits) {
    int n = 0;
    for (int8_t b : bits) n += b < 0;
    return n;
}

}  // namespace

TEST_CASE("layout sizes match the closed forms") {
    for (int d : {2, 3, 5, 7, 11}) {
        const CodeLayout lay = build_layout(d);
        CHECK(lay.num_data == d * d + (d - 1) * (d - 1));
        CHECK(lay.num_x_checks() == d * (d - 1));
        CHECK(lay.num_z_checks() == d * (d - 1));
    }
    CHECK(build_layout(5).num_data == 41);
    CHECK(build_layout(11).num_data == 221);
    const CodeLayout d2 = build_layout(2);
    CHECK(d2.num_data == 5);
    CHECK(d2.num_x_checks() == 2);
    CHECK(d2.num_z_checks() == 2);
    const CodeLayout d3 = build_layout(3);
    CHECK(d3.num_data == 13);
    CHECK(d3.logical_z_support.size() == 3);
    CHECK(d3.logical_x_support.size() == 3);
}

TEST_CASE("build_layout rejects d < 2") {
    CHECK_THROWS_AS(build_layout(1), std::invalid_argument);
    CHECK_THROWS_AS(build_layout(0), std::invalid_argument);
    CHECK_THROWS_AS(build_layout(-3), std::invalid_argument);
}

TEST_CASE("check adjacencies and commutation structure") {
    for (int d : {2, 3, 5, 7}) {
        const CodeLayout lay = build_layout(d);
        auto check_all = [&](const std::vector<Check>& checks) {
            for (const auto& chk : checks) {
                CHECK(chk.qubits.size() >= 2);
                CHECK(chk.qubits.size() <= 4);
            }
        };
        check_all(lay.x_checks);
        check_all(lay.z_checks);

        // Stabilizer commutation: X and Z adjacencies overlap in 0 or 2 qubits.
        for (const auto& xc : lay.x_checks) {
            std::set<int> xs(xc.qubits.begin(), xc.qubits.end());
            for (const auto& zc : lay.z_checks) {
                int overlap = 0;
                for (int q : zc.qubits) overlap += xs.count(q);
                CHECK((overlap == 0 || overlap == 2));
            }
        }

        // Logical operators: odd mutual overlap, even overlap with all checks
        // of the opposing type.
        std::set<int> lz(lay.logical_z_support.begin(), lay.logical_z_support.end());
        std::set<int> lx(lay.logical_x_support.begin(), lay.logical_x_support.end());
        int mutual = 0;
        for (int q : lz) mutual += lx.count(q);
        CHECK(mutual % 2 == 1);
        for (const auto& xc : lay.x_checks) {
            int ov = 0;
            for (int q : xc.qubits) ov += lz.count(q);
            CHECK(ov % 2 == 0);
        }
        for (const auto& zc : lay.z_checks) {
            int ov = 0;
            for (int q : zc.qubits) ov += lx.count(q);
            CHECK(ov % 2 == 0);
        }

        // Every data qubit touches 1-2 checks of each type.
        for (int q = 0; q < lay.num_data; ++q) {
            CHECK(lay.data_to_x_checks[q].size() >= 1);
            CHECK(lay.data_to_x_checks[q].size() <= 2);
            CHECK(lay.data_to_z_checks[q].size() >= 1);
            CHECK(lay.data_to_z_checks[q].size() <= 2);
        }
    }
}

TEST_CASE("cnot schedule covers each edge once with no step collisions") {
    for (int d : {2, 3, 5}) {
        const CodeLayout lay = build_layout(d);
        auto audit = [&](const std::vector<Check>& checks) {
            for (const auto& chk : checks) {
                std::set<int> scheduled;
                for (int q : chk.schedule)
                    if (q >= 0) CHECK(scheduled.insert(q).second);
                CHECK(scheduled == std::set<int>(chk.qubits.begin(), chk.qubits.end()));
            }
        };
        audit(lay.x_checks);
        audit(lay.z_checks);

        for (int s = 0; s < 4; ++s) {
            std::set<int> busy;
            for (const auto& chk : lay.x_checks)
                if (chk.schedule[s] >= 0) CHECK(busy.insert(chk.schedule[s]).second);
            for (const auto& chk : lay.z_checks)
                if (chk.schedule[s] >= 0) CHECK(busy.insert(chk.schedule[s]).second);
        }
    }
}

TEST_CASE("stabilizer_syndrome basics") {
    const CodeLayout lay = build_layout(3);
    const auto none = mask_from(lay, {});

    SUBCASE("no errors: all +1") {
        const Syndrome syn = stabilizer_syndrome(lay, none, none);
        CHECK(count_defects(syn.x_bits) == 0);
        CHECK(count_defects(syn.z_bits) == 0);
    }
    SUBCASE("single interior Z error flips exactly two X checks") {
        const int interior = lay.num_data - 1;  // a vertical edge: always two vertices
        const Syndrome syn = stabilizer_syndrome(lay, mask_from(lay, {interior}), none);
        CHECK(count_defects(syn.x_bits) == 2);
        CHECK(count_defects(syn.z_bits) == 0);
    }
    SUBCASE("boundary Z error flips exactly one X check") {
        // Horizontal edge H(0,0) dangles off the left boundary.
        const Syndrome syn = stabilizer_syndrome(lay, mask_from(lay, {0}), none);
        CHECK(count_defects(syn.x_bits) == 1);
    }
    SUBCASE("every single-qubit error makes 1 or 2 defects, in both sectors") {
        for (int d : {2, 3, 5}) {
            const CodeLayout l2 = build_layout(d);
            const auto zero = std::vector<uint8_t>(l2.num_data, 0);
            for (int q = 0; q < l2.num_data; ++q) {
                std::vector<uint8_t> m(l2.num_data, 0);
                m[q] = 1;
                const Syndrome sz = stabilizer_syndrome(l2, m, zero);
                const int nz = count_defects(sz.x_bits);
                CHECK(nz >= 1);
                CHECK(nz <= 2);
                const Syndrome sx = stabilizer_syndrome(l2, zero, m);
                const int nx = count_defects(sx.z_bits);
                CHECK(nx >= 1);
                CHECK(nx <= 2);
            }
        }
    }
}

TEST_CASE("stabilizer adjacencies act trivially") {
    // A Z-error set that is a Z-type stabilizer support (a face adjacency)
    // commutes with every check and causes no failure; mirror image for X.
    for (int d : {2, 3, 5}) {
        const CodeLayout lay = build_layout(d);
        const auto none = std::vector<uint8_t>(lay.num_data, 0);
        for (const auto& zc : lay.z_checks) {
            std::vector<uint8_t> m(lay.num_data, 0);
            for (int q : zc.qubits) m[q] = 1;
            const Syndrome syn = stabilizer_syndrome(lay, m, none);
            CHECK(count_defects(syn.x_bits) == 0);
            const LogicalFailure fail = logical_failure(lay, m, none);
            CHECK_FALSE(fail.z_failure);
        }
        for (const auto& xc : lay.x_checks) {
            std::vector<uint8_t> m(lay.num_data, 0);
            for (int q : xc.qubits) m[q] = 1;
            const Syndrome syn = stabilizer_syndrome(lay, none, m);
            CHECK(count_defects(syn.z_bits) == 0);
            const LogicalFailure fail = logical_failure(lay, none, m);
            CHECK_FALSE(fail.x_failure);
        }
    }
}

TEST_CASE("logical_failure") {
    const CodeLayout lay = build_layout(3);
    const auto none = mask_from(lay, {});

    SUBCASE("empty residual: no failure") {
        const LogicalFailure f = logical_failure(lay, none, none);
        CHECK_FALSE(f.z_failure);
        CHECK_FALSE(f.x_failure);
    }
    SUBCASE("logical support is a failure") {
        std::vector<uint8_t> m(lay.num_data, 0);
        for (int q : lay.logical_z_support) m[q] = 1;
        const LogicalFailure f = logical_failure(lay, m, none);
        CHECK(f.z_failure);
        std::vector<uint8_t> mx(lay.num_data, 0);
        for (int q : lay.logical_x_support) mx[q] = 1;
        const LogicalFailure g = logical_failure(lay, none, mx);
        CHECK(g.x_failure);
    }
    SUBCASE("nonzero-syndrome residual is a contract violation") {
        CHECK_THROWS_AS(logical_failure(lay, mask_from(lay, {lay.num_data - 1}), none),
                        std::invalid_argument);
    }
}

TEST_CASE("layout dump matches the golden file for d=2") {
    const std::string dump = dump_layout(build_layout(2));
    std::ifstream golden(std::string(TEST_DATA_DIR) + "/layout_d2.golden.txt");
    REQUIRE(golden.good());
    std::ostringstream os;
    os << golden.rdbuf();
    CHECK(dump == os.str());
}

TEST_CASE("layouts are deterministic") {
    const std::string a = dump_layout(build_layout(5));
    const std::string b = dump_layout(build_layout(5));
    CHECK(a == b);
}
