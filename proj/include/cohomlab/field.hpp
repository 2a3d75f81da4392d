#pragma once

// Arithmetic in GF(p^e) for odd prime powers, table driven. Elements are
// integer codes in [0, q): the base-p digits of a code are the polynomial
// coefficients (a_{e-1}, ..., a_0), most significant first.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace cohomlab {

using FieldElement = std::uint32_t;

class FieldTable {
public:
    std::uint32_t p() const { return p_; }
    std::uint32_t degree() const { return e_; }
    std::uint32_t q() const { return q_; }

    // Coefficients a_0..a_{e-1} of the monic modulus (leading 1 implicit).
    const std::vector<std::uint32_t>& modulus() const { return modulus_; }

    FieldElement primitive_element() const { return primitive_; }

    FieldElement add(FieldElement a, FieldElement b) const { return add_[a * q_ + b]; }
    FieldElement mul(FieldElement a, FieldElement b) const { return mul_[a * q_ + b]; }
    FieldElement neg(FieldElement a) const { return neg_[a]; }
    FieldElement sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }

    FieldElement inv(FieldElement a) const {
        if (a == 0) throw std::domain_error("GF(q): inverse of zero");
        return inv_[a];
    }
    FieldElement div(FieldElement a, FieldElement b) const { return mul(a, inv(b)); }

    FieldElement pow(FieldElement a, std::uint64_t n) const {
        FieldElement r = 1;
        while (n--) r = mul(r, a);
        return r;
    }

    // Multiplicative order; a must be nonzero.
    std::uint32_t mult_order(FieldElement a) const {
        if (a == 0) throw std::domain_error("GF(q): order of zero");
        std::uint32_t ord = 1;
        FieldElement x = a;
        while (x != 1) {
            x = mul(x, a);
            ++ord;
        }
        return ord;
    }

    FieldElement exp_of(std::uint32_t i) const { return exp_[i % (q_ - 1)]; }
    std::uint32_t log_of(FieldElement a) const {
        if (a == 0) throw std::domain_error("GF(q): log of zero");
        return log_[a];
    }

    friend FieldTable make_field(std::uint32_t q);

private:
    std::uint32_t p_ = 0, e_ = 0, q_ = 0;
    std::uint32_t primitive_ = 0;
    std::vector<std::uint32_t> modulus_;
    std::vector<std::uint32_t> add_, mul_, neg_, inv_, exp_, log_;
};

namespace gfdetail {

// Polynomials over GF(p) as coefficient vectors, index = degree.
inline std::vector<std::uint32_t> poly_trim(std::vector<std::uint32_t> a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

inline std::vector<std::uint32_t> poly_mul(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b,
                                           std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::uint32_t> c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return poly_trim(std::move(c));
}

inline std::vector<std::uint32_t> poly_mod(std::vector<std::uint32_t> a,
                                           const std::vector<std::uint32_t>& m,
                                           std::uint32_t p) {
    a = poly_trim(std::move(a));
    while (a.size() >= m.size()) {
        std::uint32_t lead = a.back();
        if (lead) {
            // m is monic.
            std::size_t shift = a.size() - m.size();
            for (std::size_t i = 0; i < m.size(); ++i) {
                std::uint32_t sub = (lead * m[i]) % p;
                a[shift + i] = (a[shift + i] + p - sub) % p;
            }
        }
        a.pop_back();
        a = poly_trim(std::move(a));
    }
    return a;
}

// Trial division by every monic polynomial of degree 1..deg(m)/2.
inline bool poly_irreducible(const std::vector<std::uint32_t>& m, std::uint32_t p) {
    std::size_t deg = m.size() - 1;
    if (deg == 0) return false;
    for (std::size_t d = 1; 2 * d <= deg; ++d) {
        std::uint64_t count = 1;
        for (std::size_t i = 0; i < d; ++i) count *= p;
        for (std::uint64_t t = 0; t < count; ++t) {
            std::vector<std::uint32_t> div(d + 1, 0);
            std::uint64_t tt = t;
            for (std::size_t i = 0; i < d; ++i) {
                div[i] = static_cast<std::uint32_t>(tt % p);
                tt /= p;
            }
            div[d] = 1;
            if (poly_mod(m, div, p).empty()) return false;
        }
    }
    return true;
}

}  // namespace gfdetail

// Builds the table for GF(q), q an odd prime power. The modulus is the
// lexicographically smallest monic irreducible of degree e, comparing
// coefficient tuples (a_{e-1}, ..., a_0); the primitive element is the
// least code generating the multiplicative group.
inline FieldTable make_field(std::uint32_t q) {
    if (q < 3 || q % 2 == 0) throw std::invalid_argument("make_field: q must be an odd prime power >= 3");

    std::uint32_t p = 0;
    for (std::uint32_t d = 3; d * d <= q; d += 2)
        if (q % d == 0) {
            p = d;
            break;
        }
    if (p == 0) p = q;  // q itself prime
    std::uint32_t e = 0, t = q;
    while (t % p == 0) {
        t /= p;
        ++e;
    }
    if (t != 1) throw std::invalid_argument("make_field: q is not a prime power");

    FieldTable f;
    f.p_ = p;
    f.e_ = e;
    f.q_ = q;

    // Digit decomposition of a code: digit i = coefficient of x^i.
    auto digits = [&](std::uint32_t code) {
        std::vector<std::uint32_t> d(e);
        for (std::uint32_t i = 0; i < e; ++i) {
            d[i] = code % p;
            code /= p;
        }
        return d;
    };
    auto encode = [&](const std::vector<std::uint32_t>& d) {
        std::uint32_t code = 0;
        for (std::uint32_t i = e; i-- > 0;) code = code * p + (i < d.size() ? d[i] : 0);
        return code;
    };

    if (e == 1) {
        f.modulus_ = {0};  // the polynomial x
    } else {
        for (std::uint32_t cand = 0; cand < q; ++cand) {
            std::vector<std::uint32_t> m = digits(cand);
            m.resize(e + 1, 0);
            m[e] = 1;
            if (gfdetail::poly_irreducible(m, p)) {
                f.modulus_.assign(m.begin(), m.begin() + e);
                break;
            }
        }
        if (f.modulus_.empty()) throw std::logic_error("make_field: no irreducible modulus found");
    }

    std::vector<std::uint32_t> monic(f.modulus_);
    monic.push_back(1);

    f.add_.resize(std::size_t{q} * q);
    f.mul_.resize(std::size_t{q} * q);
    f.neg_.resize(q);
    for (std::uint32_t a = 0; a < q; ++a) {
        auto da = digits(a);
        std::vector<std::uint32_t> dn(e);
        for (std::uint32_t i = 0; i < e; ++i) dn[i] = (p - da[i]) % p;
        f.neg_[a] = encode(dn);
        for (std::uint32_t b = 0; b < q; ++b) {
            auto db = digits(b);
            std::vector<std::uint32_t> ds(e);
            for (std::uint32_t i = 0; i < e; ++i) ds[i] = (da[i] + db[i]) % p;
            f.add_[a * q + b] = encode(ds);
            auto prod = gfdetail::poly_mod(gfdetail::poly_mul(da, db, p), monic, p);
            f.mul_[a * q + b] = encode(prod);
        }
    }

    for (std::uint32_t c = 2; c < q; ++c) {
        if (f.mult_order(c) == q - 1) {
            f.primitive_ = c;
            break;
        }
    }
    if (f.primitive_ == 0) throw std::logic_error("make_field: no primitive element found");

    f.exp_.resize(q - 1);
    f.log_.assign(q, 0);
    FieldElement x = 1;
    for (std::uint32_t i = 0; i < q - 1; ++i) {
        f.exp_[i] = x;
        f.log_[x] = i;
        x = f.mul(x, f.primitive_);
    }
    if (x != 1) throw std::logic_error("make_field: primitive element order mismatch");

    f.inv_.assign(q, 0);
    for (std::uint32_t a = 1; a < q; ++a) f.inv_[a] = f.exp_[(q - 1 - f.log_[a]) % (q - 1)];

    return f;
}

}  // namespace cohomlab
