#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "cohomlab/gf2.hpp"

using namespace cohomlab;

namespace {

// ---- independent oracles -------------------------------------------------
// Plain Gaussian elimination on a bool matrix, no packing, no pivots kept
// reduced. Deliberately shares nothing with the library implementation.

std::size_t naive_rank(std::vector<std::vector<int>> m) {
    if (m.empty()) return 0;
    std::size_t rows = m.size(), cols = m[0].size(), r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && !m[piv][c]) ++piv;
        if (piv == rows) continue;
        std::swap(m[piv], m[r]);
        for (std::size_t i = 0; i < rows; ++i)
            if (i != r && m[i][c])
                for (std::size_t j = 0; j < cols; ++j) m[i][j] ^= m[r][j];
        ++r;
    }
    return r;
}

std::vector<int> unpack(const BitVec& v) {
    std::vector<int> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v.test(i);
    return out;
}

std::vector<std::vector<int>> unpack(const BitMat& m) {
    std::vector<std::vector<int>> out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) out[i] = unpack(m.row(i));
    return out;
}

BitVec vec_from_bits(std::uint64_t bits, std::size_t len) {
    BitVec v(len);
    for (std::size_t i = 0; i < len; ++i)
        if ((bits >> i) & 1) v.set(i);
    return v;
}

bool oracle_solves(const BitMat& a, const BitVec& x, const BitVec& b) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
        int acc = 0;
        for (std::size_t j = 0; j < a.cols(); ++j) acc ^= (a.get(i, j) && x.test(j));
        if (acc != b.test(i)) return false;
    }
    return true;
}

// All solutions of a*x = b by enumerating the full cube; cols <= 20.
std::vector<BitVec> exhaustive_solutions(const BitMat& a, const BitVec& b) {
    std::vector<BitVec> out;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << a.cols()); ++bits) {
        BitVec x = vec_from_bits(bits, a.cols());
        if (oracle_solves(a, x, b)) out.push_back(x);
    }
    return out;
}

// Every vector in the span of a basis, by enumerating coefficient tuples.
std::set<std::vector<int>> span_set(const std::vector<BitVec>& basis, std::size_t len) {
    std::set<std::vector<int>> out;
    std::size_t k = basis.size();
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
        BitVec v(len);
        for (std::size_t i = 0; i < k; ++i)
            if ((bits >> i) & 1) v ^= basis[i];
        out.insert(unpack(v));
    }
    return out;
}

BitMat random_mat(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double density = 0.5) {
    BitMat m(rows, cols);
    std::bernoulli_distribution coin(density);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            if (coin(rng)) m.set(i, j);
    return m;
}

}  // namespace

TEST_CASE("BitVec basics") {
    BitVec v(70);
    REQUIRE(v.none());
    v.set(0);
    v.set(69);
    REQUIRE(v.popcount() == 2);
    REQUIRE(v.leading_bit() == 0);
    REQUIRE(v.next_set_bit(1) == 69);
    v.flip(0);
    REQUIRE(v.leading_bit() == 69);

    BitVec ones = BitVec::ones(70);
    REQUIRE(ones.popcount() == 70);
    ones ^= ones;
    REQUIRE(ones.none());

    // XOR is length preserving and trailing bits stay clear.
    BitVec a = BitVec::ones(65);
    BitVec b = BitVec::unit(65, 64);
    a ^= b;
    REQUIRE(a.size() == 65);
    REQUIRE(a.popcount() == 64);
}

TEST_CASE("BitVec hex round trip") {
    std::mt19937_64 rng(7);
    for (int len : {1, 4, 5, 63, 64, 65, 130}) {
        BitVec v(static_cast<std::size_t>(len));
        for (int i = 0; i < len; ++i)
            if (rng() & 1) v.set(static_cast<std::size_t>(i));
        REQUIRE(BitVec::from_hex(static_cast<std::size_t>(len), v.to_hex()) == v);
    }
}

TEST_CASE("rank: identity and zero") {
    REQUIRE(rank(BitMat::identity(3)) == 3);
    REQUIRE(rank(BitMat(4, 4)) == 0);
}

TEST_CASE("rank matches naive oracle on random matrices") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        BitMat m = random_mat(rng, 20, 20);
        BitMat copy = m;
        REQUIRE(rank(m) == naive_rank(unpack(m)));
        REQUIRE(m == copy);  // input unmodified
    }
}

TEST_CASE("solve_affine: identity system returns rhs") {
    BitMat a = BitMat::identity(6);
    BitVec b(6);
    b.set(1);
    b.set(4);
    auto res = solve_affine(a, b);
    REQUIRE(res.feasible());
    REQUIRE(*res.solution == b);
}

TEST_CASE("solve_affine: 0 = 1 is infeasible with rank certificate") {
    BitMat a(1, 3);
    BitVec b(1);
    b.set(0);
    auto res = solve_affine(a, b);
    REQUIRE(!res.feasible());
    REQUIRE(res.rank_a == 0);
    REQUIRE(res.rank_aug == 1);
}

TEST_CASE("solve_affine: dimension mismatch rejected") {
    REQUIRE_THROWS_AS(solve_affine(BitMat(2, 3), BitVec(3)), std::invalid_argument);
}

TEST_CASE("solve_affine vs exhaustive oracle") {
    std::mt19937_64 rng(1234);
    int consistent_seen = 0;
    for (int trial = 0; trial < 120; ++trial) {
        std::size_t cols = 4 + static_cast<std::size_t>(rng() % 9);  // up to 12
        std::size_t rows = 1 + static_cast<std::size_t>(rng() % 13);
        BitMat a = random_mat(rng, rows, cols);
        BitVec b(rows);
        if (trial % 2 == 0) {
            // Force consistency: b = a * (random x).
            BitVec x = vec_from_bits(rng(), cols);
            for (std::size_t i = 0; i < rows; ++i) {
                int acc = 0;
                for (std::size_t j = 0; j < cols; ++j) acc ^= (a.get(i, j) && x.test(j));
                b.set(i, acc);
            }
        } else {
            for (std::size_t i = 0; i < rows; ++i) b.set(i, rng() & 1);
        }

        auto sols = exhaustive_solutions(a, b);
        auto res = solve_affine(a, b);
        if (sols.empty()) {
            REQUIRE(!res.feasible());
            REQUIRE(res.rank_aug == res.rank_a + 1);
        } else {
            ++consistent_seen;
            REQUIRE(res.feasible());
            BitVec least = *std::min_element(sols.begin(), sols.end(), lex_less);
            REQUIRE(*res.solution == least);
        }
    }
    REQUIRE(consistent_seen >= 50);
}

TEST_CASE("solve_affine on a consistent 12x8 system agrees with exhaustive search") {
    std::mt19937_64 rng(5);
    BitMat a = random_mat(rng, 12, 8);
    BitVec x = vec_from_bits(rng(), 8);
    BitVec b(12);
    for (std::size_t i = 0; i < 12; ++i) {
        int acc = 0;
        for (std::size_t j = 0; j < 8; ++j) acc ^= (a.get(i, j) && x.test(j));
        b.set(i, acc);
    }
    auto sols = exhaustive_solutions(a, b);
    REQUIRE(!sols.empty());
    auto res = solve_affine(a, b);
    REQUIRE(res.feasible());
    REQUIRE(*res.solution == *std::min_element(sols.begin(), sols.end(), lex_less));
}

TEST_CASE("kernel_basis: identity and zero") {
    REQUIRE(kernel_basis(BitMat::identity(5)).empty());
    REQUIRE(kernel_basis(BitMat(4, 4)).size() == 4);
}

TEST_CASE("kernel_basis span equals exhaustive null space") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 30; ++trial) {
        BitMat m = random_mat(rng, 10, 6);
        auto basis = kernel_basis(m);
        REQUIRE(rank(m) + basis.size() == m.cols());

        std::set<std::vector<int>> null_oracle;
        for (std::uint64_t bits = 0; bits < 64; ++bits) {
            BitVec v = vec_from_bits(bits, 6);
            bool in_null = true;
            for (std::size_t i = 0; i < m.rows() && in_null; ++i) {
                int acc = 0;
                for (std::size_t j = 0; j < 6; ++j) acc ^= (m.get(i, j) && v.test(j));
                if (acc) in_null = false;
            }
            if (in_null) null_oracle.insert(unpack(v));
        }
        REQUIRE(span_set(basis, 6) == null_oracle);
        for (const auto& v : basis) REQUIRE(m.transposed().apply(v).none());
    }
}

TEST_CASE("rank + kernel dimension = cols") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 25; ++trial) {
        std::size_t rows = 1 + rng() % 16, cols = 1 + rng() % 16;
        BitMat m = random_mat(rng, rows, cols, 0.3);
        REQUIRE(rank(m) + kernel_basis(m).size() == cols);
    }
}

TEST_CASE("subspace ops: trivial cases") {
    // A = B: intersection = A, quotient dim 0.
    std::vector<BitVec> a = {BitVec::unit(4, 0), BitVec::unit(4, 2)};
    auto inter = subspace_intersection_basis(a, a, 4);
    REQUIRE(span_set(inter, 4) == span_set(a, 4));
    REQUIRE(quotient_dimension(a, a, 4) == 0);

    // Disjoint 1-dim subspaces of F2^4 sum to dim 2.
    std::vector<BitVec> x = {BitVec::unit(4, 1)};
    std::vector<BitVec> y = {BitVec::unit(4, 3)};
    REQUIRE(subspace_sum_basis(x, y, 4).size() == 2);
    REQUIRE(subspace_intersection_basis(x, y, 4).empty());
}

TEST_CASE("subspace ops vs exhaustive enumeration in F2^6") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<BitVec> a, b;
        for (int i = 0; i < 3; ++i) a.push_back(vec_from_bits(rng(), 6));
        for (int i = 0; i < 3; ++i) b.push_back(vec_from_bits(rng(), 6));

        auto sa = span_set(a, 6), sb = span_set(b, 6);
        std::set<std::vector<int>> sum_oracle, inter_oracle;
        for (const auto& u : sa)
            for (const auto& v : sb) {
                std::vector<int> s(6);
                for (int i = 0; i < 6; ++i) s[i] = u[i] ^ v[i];
                sum_oracle.insert(s);
            }
        for (const auto& u : sa)
            if (sb.count(u)) inter_oracle.insert(u);

        REQUIRE(span_set(subspace_sum_basis(a, b, 6), 6) == sum_oracle);
        REQUIRE(span_set(subspace_intersection_basis(a, b, 6), 6) == inter_oracle);

        for (const auto& v : a) REQUIRE(subspace_contains(a, v));
    }
}

TEST_CASE("quotient_dimension rejects non-subspace") {
    std::vector<BitVec> a = {BitVec::unit(4, 0)};
    std::vector<BitVec> b = {BitVec::unit(4, 1)};
    REQUIRE_THROWS_AS(quotient_dimension(a, b, 4), std::invalid_argument);
}

TEST_CASE("Eliminator: re-absorbing a row is a no-op") {
    Eliminator e(8);
    BitVec r(8);
    r.set(2);
    r.set(5);
    REQUIRE(e.absorb(r));
    REQUIRE(!e.absorb(r));
    REQUIRE(e.rank() == 1);
}

TEST_CASE("Eliminator: n independent rows give rank n") {
    Eliminator e(10);
    for (std::size_t i = 0; i < 10; ++i) {
        BitVec r = BitVec::unit(10, i);
        if (i + 1 < 10) r.set(i + 1);
        REQUIRE(e.absorb(r));
    }
    REQUIRE(e.rank() == 10);
}

TEST_CASE("Eliminator: full F2^5 stream reaches rank 5 in any order") {
    std::vector<BitVec> all;
    for (std::uint64_t bits = 1; bits < 32; ++bits) all.push_back(vec_from_bits(bits, 5));

    std::mt19937_64 rng(11);
    for (int shuffle = 0; shuffle < 4; ++shuffle) {
        std::shuffle(all.begin(), all.end(), rng);
        Eliminator e(5);
        for (const auto& v : all) e.absorb(v);
        REQUIRE(e.rank() == 5);
    }
}

TEST_CASE("Eliminator rank is stream-order invariant on random rows") {
    std::mt19937_64 rng(77);
    BitMat m = random_mat(rng, 30, 24, 0.2);
    std::vector<BitVec> rows;
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));

    Eliminator base(24);
    for (const auto& r : rows) base.absorb(r);

    for (int shuffle = 0; shuffle < 3; ++shuffle) {
        std::shuffle(rows.begin(), rows.end(), rng);
        Eliminator e(24);
        for (const auto& r : rows) e.absorb(r);
        REQUIRE(e.rank() == base.rank());
        // Same span: reduced-echelon basis is canonical.
        REQUIRE(e.basis() == base.basis());
    }
}

TEST_CASE("Eliminator keeps pivots fully reduced") {
    std::mt19937_64 rng(13);
    Eliminator e(16);
    for (int i = 0; i < 40; ++i) e.absorb(vec_from_bits(rng(), 16));
    auto pivots = e.pivot_columns();
    for (auto c : pivots) {
        std::size_t ones = 0;
        for (auto d : pivots)
            if (e.pivot_row(d).test(c)) ++ones;
        REQUIRE(ones == 1);  // only the owner row has a bit in a pivot column
    }
}

TEST_CASE("Eliminator membership via reduce") {
    Eliminator e(6);
    BitVec a = BitVec::unit(6, 0);
    a.set(3);
    BitVec b = BitVec::unit(6, 1);
    e.absorb(a);
    e.absorb(b);
    REQUIRE(e.contains(a ^ b));
    REQUIRE(!e.contains(BitVec::unit(6, 2)));
}

TEST_CASE("BitMat apply and mul agree with naive arithmetic") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        BitMat a = random_mat(rng, 7, 9);
        BitMat b = random_mat(rng, 9, 5);
        BitMat ab = a.mul(b);
        for (std::uint64_t bits = 0; bits < 128; bits += 13) {
            BitVec v = vec_from_bits(bits, 7);
            REQUIRE(b.apply(a.apply(v)) == ab.apply(v));
        }
        REQUIRE(a.transposed().transposed() == a);
    }
}

TEST_CASE("lex_less orders by first differing bit") {
    BitVec a(5), b(5);
    b.set(0);
    REQUIRE(lex_less(a, b));   // 00000 < 10000 (bit 0 most significant)
    a.set(1);
    REQUIRE(lex_less(a, b));   // 01000 < 10000
    REQUIRE(!lex_less(b, a));
    REQUIRE(!lex_less(a, a));
}
