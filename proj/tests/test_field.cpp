#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "cohomlab/field.hpp"

using namespace cohomlab;

namespace {

const std::vector<std::uint32_t> kSupportedQ = {3, 5, 7, 9, 11, 13, 17, 19, 23, 25, 27};

// Root-search irreducibility oracle, valid for degree <= 3: a cubic or
// quadratic over GF(p) is reducible iff it has a root.
bool has_root(const std::vector<std::uint32_t>& coeffs_low_first, std::uint32_t p) {
    for (std::uint32_t x = 0; x < p; ++x) {
        std::uint32_t acc = 0, xp = 1;
        for (auto c : coeffs_low_first) {
            acc = (acc + c * xp) % p;
            xp = (xp * x) % p;
        }
        if (acc == 0) return true;
    }
    return false;
}

}  // namespace

TEST_CASE("make_field rejects invalid orders") {
    REQUIRE_THROWS_AS(make_field(1), std::invalid_argument);
    REQUIRE_THROWS_AS(make_field(2), std::invalid_argument);
    REQUIRE_THROWS_AS(make_field(4), std::invalid_argument);   // even
    REQUIRE_THROWS_AS(make_field(8), std::invalid_argument);   // even prime power
    REQUIRE_THROWS_AS(make_field(15), std::invalid_argument);  // 3 * 5
    REQUIRE_THROWS_AS(make_field(21), std::invalid_argument);
}

TEST_CASE("prime fields have the trivial modulus") {
    auto f = make_field(5);
    REQUIRE(f.p() == 5);
    REQUIRE(f.degree() == 1);
    REQUIRE(f.modulus() == std::vector<std::uint32_t>{0});
}

TEST_CASE("GF(9) modulus is x^2 + 1, the first irreducible in lex order") {
    auto f = make_field(9);
    REQUIRE(f.p() == 3);
    REQUIRE(f.degree() == 2);
    REQUIRE(f.modulus() == std::vector<std::uint32_t>({1, 0}));  // a0=1, a1=0

    // Oracle: walk candidates in tuple order (a1, a0) and confirm x^2+1 is
    // the first without a root.
    std::uint32_t first = 0;
    for (std::uint32_t cand = 0; cand < 9; ++cand) {
        std::vector<std::uint32_t> coeffs = {cand % 3, cand / 3, 1};  // a0, a1, 1
        if (!has_root(coeffs, 3)) {
            first = cand;
            break;
        }
    }
    REQUIRE(first == 1);  // code of (a1,a0) = (0,1)
}

TEST_CASE("GF(27) modulus is x^3 + 2x + 1") {
    auto f = make_field(27);
    REQUIRE(f.modulus() == std::vector<std::uint32_t>({1, 2, 0}));

    std::uint32_t first = 0;
    for (std::uint32_t cand = 0; cand < 27; ++cand) {
        std::vector<std::uint32_t> coeffs = {cand % 3, (cand / 3) % 3, cand / 9, 1};
        if (!has_root(coeffs, 3)) {
            first = cand;
            break;
        }
    }
    // (a2,a1,a0) = (0,2,1) encodes to 0*9 + 2*3 + 1 = 7.
    REQUIRE(first == 7);
    REQUIRE(f.modulus() == std::vector<std::uint32_t>({first % 3, (first / 3) % 3, first / 9}));
}

TEST_CASE("primitive elements are the least generating code") {
    REQUIRE(make_field(3).primitive_element() == 2);
    REQUIRE(make_field(5).primitive_element() == 2);

    // GF(9): oracle scans codes for the least one of multiplicative order 8.
    auto f = make_field(9);
    std::uint32_t least = 0;
    for (std::uint32_t c = 1; c < 9 && !least; ++c) {
        std::uint32_t ord = 1, x = c;
        while (x != 1) {
            x = f.mul(x, c);
            ++ord;
        }
        if (ord == 8) least = c;
    }
    REQUIRE(f.primitive_element() == least);
    REQUIRE(f.mult_order(f.primitive_element()) == 8);
}

TEST_CASE("powers of the primitive element enumerate all nonzero codes") {
    for (auto q : kSupportedQ) {
        auto f = make_field(q);
        std::vector<bool> seen(q, false);
        FieldElement x = 1;
        for (std::uint32_t i = 0; i < q - 1; ++i) {
            REQUIRE(!seen[x]);
            seen[x] = true;
            x = f.mul(x, f.primitive_element());
        }
        REQUIRE(x == 1);
    }
}

TEST_CASE("in GF(9) with modulus x^2+1, x*x = -1") {
    auto f = make_field(9);
    FieldElement x = 3;  // (a1,a0) = (1,0)
    REQUIRE(f.mul(x, x) == 2);  // -1 has code 2
    REQUIRE(f.neg(1) == 2);
}

TEST_CASE("unit laws and exhaustive inverses in GF(7)") {
    auto f = make_field(7);
    for (FieldElement a = 0; a < 7; ++a) {
        REQUIRE(f.add(a, 0) == a);
        REQUIRE(f.mul(a, 1) == a);
        if (a != 0) REQUIRE(f.mul(a, f.inv(a)) == 1);
    }
    REQUIRE_THROWS_AS(f.inv(0), std::domain_error);
}

TEST_CASE("field axioms hold exhaustively for every supported q") {
    for (auto q : kSupportedQ) {
        auto f = make_field(q);
        for (FieldElement a = 0; a < q; ++a) {
            REQUIRE(f.add(a, f.neg(a)) == 0);
            REQUIRE(f.sub(a, a) == 0);
            for (FieldElement b = 0; b < q; ++b) {
                REQUIRE(f.add(a, b) == f.add(b, a));
                REQUIRE(f.mul(a, b) == f.mul(b, a));
                for (FieldElement c = 0; c < q; ++c) {
                    REQUIRE(f.add(f.add(a, b), c) == f.add(a, f.add(b, c)));
                    REQUIRE(f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c)));
                    REQUIRE(f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
    }
}

TEST_CASE("Frobenius: (a+b)^p = a^p + b^p exhaustively") {
    for (auto q : kSupportedQ) {
        auto f = make_field(q);
        for (FieldElement a = 0; a < q; ++a)
            for (FieldElement b = 0; b < q; ++b)
                REQUIRE(f.pow(f.add(a, b), f.p()) == f.add(f.pow(a, f.p()), f.pow(b, f.p())));
    }
}

TEST_CASE("division is multiplication by the inverse") {
    auto f = make_field(27);
    for (FieldElement a = 0; a < 27; ++a)
        for (FieldElement b = 1; b < 27; ++b)
            REQUIRE(f.mul(f.div(a, b), b) == a);
}

TEST_CASE("codes round-trip through the coefficient tuple") {
    for (auto q : kSupportedQ) {
        auto f = make_field(q);
        for (FieldElement code = 0; code < q; ++code) {
            // Decompose into base-p digits and re-encode most significant first.
            std::vector<std::uint32_t> digits;
            FieldElement c = code;
            for (std::uint32_t i = 0; i < f.degree(); ++i) {
                digits.push_back(c % f.p());
                c /= f.p();
            }
            FieldElement back = 0;
            for (std::uint32_t i = f.degree(); i-- > 0;) back = back * f.p() + digits[i];
            REQUIRE(back == code);

            // Addition is digitwise: matches the tuple semantics of the encoding.
            for (FieldElement other = 0; other < q; other += 5) {
                FieldElement expect = 0;
                std::vector<std::uint32_t> db;
                FieldElement o = other;
                for (std::uint32_t i = 0; i < f.degree(); ++i) {
                    db.push_back(o % f.p());
                    o /= f.p();
                }
                for (std::uint32_t i = f.degree(); i-- > 0;)
                    expect = expect * f.p() + (digits[i] + db[i]) % f.p();
                REQUIRE(f.add(code, other) == expect);
            }
        }
    }
}
