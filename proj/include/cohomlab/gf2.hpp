#pragma once

// Dense bit-packed linear algebra over GF(2): vectors, matrices, a streaming
// row eliminator keeping fully reduced pivots, and the solvers built on top
// (rank, kernel, affine systems, subspace lattice operations).

#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cohomlab {

class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t len) : len_(len), w_(word_count(len), 0) {}

    static BitVec ones(std::size_t len) {
        BitVec v(len);
        for (auto& w : v.w_) w = ~std::uint64_t{0};
        v.trim();
        return v;
    }

    static BitVec unit(std::size_t len, std::size_t i) {
        BitVec v(len);
        v.set(i);
        return v;
    }

    std::size_t size() const { return len_; }

    bool test(std::size_t i) const {
        return (w_[i >> 6] >> (i & 63)) & 1u;
    }

    void set(std::size_t i, bool value = true) {
        if (value)
            w_[i >> 6] |= std::uint64_t{1} << (i & 63);
        else
            w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
    }

    void flip(std::size_t i) { w_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    BitVec& operator^=(const BitVec& o) {
        if (o.len_ != len_) throw std::invalid_argument("BitVec xor: length mismatch");
        for (std::size_t i = 0; i < w_.size(); ++i) w_[i] ^= o.w_[i];
        return *this;
    }

    friend BitVec operator^(BitVec a, const BitVec& b) {
        a ^= b;
        return a;
    }

    bool operator==(const BitVec& o) const = default;

    bool any() const {
        for (auto w : w_)
            if (w) return true;
        return false;
    }
    bool none() const { return !any(); }

    // Index of the first set bit, -1 if zero.
    std::ptrdiff_t leading_bit() const {
        for (std::size_t i = 0; i < w_.size(); ++i)
            if (w_[i]) return static_cast<std::ptrdiff_t>(i * 64 + std::countr_zero(w_[i]));
        return -1;
    }

    // First set bit at position >= from, -1 if none.
    std::ptrdiff_t next_set_bit(std::size_t from) const {
        if (from >= len_) return -1;
        std::size_t wi = from >> 6;
        std::uint64_t w = w_[wi] & (~std::uint64_t{0} << (from & 63));
        while (true) {
            if (w) return static_cast<std::ptrdiff_t>(wi * 64 + std::countr_zero(w));
            if (++wi >= w_.size()) return -1;
            w = w_[wi];
        }
    }

    std::size_t popcount() const {
        std::size_t n = 0;
        for (auto w : w_) n += static_cast<std::size_t>(std::popcount(w));
        return n;
    }

    const std::vector<std::uint64_t>& words() const { return w_; }
    std::vector<std::uint64_t>& words() { return w_; }

    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        std::string s;
        std::size_t nibbles = (len_ + 3) / 4;
        for (std::size_t i = 0; i < nibbles; ++i) {
            unsigned nib = static_cast<unsigned>((w_[i / 16] >> ((i % 16) * 4)) & 0xf);
            s.push_back(digits[nib]);
        }
        return s;
    }

    static BitVec from_hex(std::size_t len, const std::string& s) {
        BitVec v(len);
        std::size_t nibbles = (len + 3) / 4;
        if (s.size() != nibbles) throw std::invalid_argument("BitVec::from_hex: bad digit count");
        for (std::size_t i = 0; i < nibbles; ++i) {
            char c = s[i];
            unsigned nib;
            if (c >= '0' && c <= '9')
                nib = static_cast<unsigned>(c - '0');
            else if (c >= 'a' && c <= 'f')
                nib = static_cast<unsigned>(c - 'a' + 10);
            else
                throw std::invalid_argument("BitVec::from_hex: bad digit");
            v.w_[i / 16] |= std::uint64_t{nib} << ((i % 16) * 4);
        }
        v.trim();
        return v;
    }

    // Keeps bits beyond len_ zero so == and hashing stay well defined.
    void trim() {
        if (len_ & 63) w_.back() &= (~std::uint64_t{0}) >> (64 - (len_ & 63));
    }

private:
    static std::size_t word_count(std::size_t len) { return (len + 63) / 64; }

    std::size_t len_ = 0;
    std::vector<std::uint64_t> w_;
};

struct BitVecHash {
    std::size_t operator()(const BitVec& v) const {
        std::uint64_t h = 1469598103934665603ull;
        for (auto w : v.words()) {
            h ^= w;
            h *= 1099511628211ull;
        }
        h ^= v.size();
        return static_cast<std::size_t>(h);
    }
};

class BitMat {
public:
    BitMat() = default;
    BitMat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), r_(rows, BitVec(cols)) {}

    static BitMat identity(std::size_t n) {
        BitMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.r_[i].set(i);
        return m;
    }

    static BitMat from_rows(std::vector<BitVec> rows, std::size_t cols) {
        BitMat m;
        m.rows_ = rows.size();
        m.cols_ = cols;
        for (const auto& r : rows)
            if (r.size() != cols) throw std::invalid_argument("BitMat: ragged rows");
        m.r_ = std::move(rows);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    BitVec& row(std::size_t i) { return r_[i]; }
    const BitVec& row(std::size_t i) const { return r_[i]; }

    bool get(std::size_t i, std::size_t j) const { return r_[i].test(j); }
    void set(std::size_t i, std::size_t j, bool v = true) { r_[i].set(j, v); }

    bool operator==(const BitMat& o) const = default;

    // v * M for a row vector v of length rows().
    BitVec apply(const BitVec& v) const {
        if (v.size() != rows_) throw std::invalid_argument("BitMat::apply: length mismatch");
        BitVec out(cols_);
        for (std::ptrdiff_t i = v.leading_bit(); i >= 0;
             i = v.next_set_bit(static_cast<std::size_t>(i) + 1))
            out ^= r_[static_cast<std::size_t>(i)];
        return out;
    }

    // this * M, row-major composition.
    BitMat mul(const BitMat& m) const {
        if (cols_ != m.rows_) throw std::invalid_argument("BitMat::mul: shape mismatch");
        BitMat out(rows_, m.cols_);
        for (std::size_t i = 0; i < rows_; ++i) out.r_[i] = m.apply(r_[i]);
        return out;
    }

    BitMat transposed() const {
        BitMat out(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::ptrdiff_t j = r_[i].leading_bit(); j >= 0;
                 j = r_[i].next_set_bit(static_cast<std::size_t>(j) + 1))
                out.r_[static_cast<std::size_t>(j)].set(i);
        return out;
    }

    BitMat operator^(const BitMat& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("BitMat xor: shape mismatch");
        BitMat out = *this;
        for (std::size_t i = 0; i < rows_; ++i) out.r_[i] ^= o.r_[i];
        return out;
    }

    bool is_identity() const {
        if (rows_ != cols_) return false;
        for (std::size_t i = 0; i < rows_; ++i) {
            if (r_[i].popcount() != 1 || !r_[i].test(i)) return false;
        }
        return true;
    }

    bool is_zero() const {
        for (const auto& r : r_)
            if (r.any()) return false;
        return true;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<BitVec> r_;
};

// Streaming row eliminator. Pivot rows are kept fully reduced (each pivot
// column has a single one across all pivot rows), so reducing an incoming
// row touches only the pivot columns where the row itself has bits.
class Eliminator {
public:
    explicit Eliminator(std::size_t cols)
        : cols_(cols), pivot_slot_(cols, -1) {}

    std::size_t cols() const { return cols_; }
    std::size_t rank() const { return rows_.size(); }

    // Reduces row against current pivots; installs the remainder as a new
    // pivot if nonzero. Returns true iff the rank grew.
    bool absorb(BitVec row) {
        if (row.size() != cols_) throw std::invalid_argument("Eliminator::absorb: length mismatch");
        std::ptrdiff_t lead = reduce_in_place(row);
        if (lead < 0) return false;
        // Back-substitute so existing pivots stay fully reduced.
        for (auto& r : rows_)
            if (r.test(static_cast<std::size_t>(lead))) r ^= row;
        pivot_slot_[static_cast<std::size_t>(lead)] = static_cast<std::ptrdiff_t>(rows_.size());
        rows_.push_back(std::move(row));
        return true;
    }

    // Residue of row after reduction; zero iff row is in the span.
    BitVec reduce(BitVec row) const {
        if (row.size() != cols_) throw std::invalid_argument("Eliminator::reduce: length mismatch");
        reduce_in_place(row);
        return row;
    }

    bool contains(const BitVec& row) const { return reduce(row).none(); }

    // Pivot rows sorted by pivot column: a reduced-echelon basis of the span.
    std::vector<BitVec> basis() const {
        std::vector<BitVec> out;
        out.reserve(rows_.size());
        for (std::size_t c = 0; c < cols_; ++c)
            if (pivot_slot_[c] >= 0) out.push_back(rows_[static_cast<std::size_t>(pivot_slot_[c])]);
        return out;
    }

    std::vector<std::size_t> pivot_columns() const {
        std::vector<std::size_t> out;
        out.reserve(rows_.size());
        for (std::size_t c = 0; c < cols_; ++c)
            if (pivot_slot_[c] >= 0) out.push_back(c);
        return out;
    }

    bool has_pivot(std::size_t col) const { return pivot_slot_[col] >= 0; }

    const BitVec& pivot_row(std::size_t col) const {
        if (pivot_slot_[col] < 0) throw std::logic_error("Eliminator: no pivot at column");
        return rows_[static_cast<std::size_t>(pivot_slot_[col])];
    }

private:
    // Clears every pivot-column bit of row; returns its new leading bit
    // (necessarily a free column), or -1 if the row vanished.
    std::ptrdiff_t reduce_in_place(BitVec& row) const {
        std::ptrdiff_t first_free = -1;
        std::ptrdiff_t b = row.leading_bit();
        while (b >= 0) {
            std::ptrdiff_t slot = pivot_slot_[static_cast<std::size_t>(b)];
            if (slot < 0) {
                if (first_free < 0) first_free = b;
            } else {
                // Pivot rows carry no bits at columns <= b besides b itself.
                row ^= rows_[static_cast<std::size_t>(slot)];
            }
            b = row.next_set_bit(static_cast<std::size_t>(b) + 1);
        }
        return first_free;
    }

    std::size_t cols_;
    std::vector<std::ptrdiff_t> pivot_slot_;
    std::vector<BitVec> rows_;
};

inline std::size_t rank(const BitMat& m) {
    Eliminator e(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) e.absorb(m.row(i));
    return e.rank();
}

// Null-space basis from the reduced echelon form: one vector per free column.
inline std::vector<BitVec> kernel_basis_of_echelon(const Eliminator& e) {
    std::size_t n = e.cols();
    std::vector<std::size_t> pivots = e.pivot_columns();
    std::vector<bool> is_pivot(n, false);
    for (auto c : pivots) is_pivot[c] = true;

    std::vector<BitVec> out;
    out.reserve(n - pivots.size());
    for (std::size_t f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        BitVec v(n);
        v.set(f);
        for (auto c : pivots)
            if (e.pivot_row(c).test(f)) v.set(c);
        out.push_back(std::move(v));
    }
    return out;
}

inline std::vector<BitVec> kernel_basis(const BitMat& m) {
    Eliminator e(m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) e.absorb(m.row(i));
    return kernel_basis_of_echelon(e);
}

// Lexicographic order with bit 0 most significant and 0 < 1.
inline bool lex_less(const BitVec& a, const BitVec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("lex_less: length mismatch");
    const auto& wa = a.words();
    const auto& wb = b.words();
    for (std::size_t i = 0; i < wa.size(); ++i) {
        std::uint64_t d = wa[i] ^ wb[i];
        if (d) {
            std::size_t bit = static_cast<std::size_t>(std::countr_zero(d));
            return ((wa[i] >> bit) & 1u) == 0;
        }
    }
    return false;
}

struct AffineResult {
    std::optional<BitVec> solution;   // lexicographically least when feasible
    std::size_t rank_a = 0;           // rank of the coefficient matrix
    std::size_t rank_aug = 0;         // rank of [a | b]
    bool feasible() const { return solution.has_value(); }
};

namespace detail {

// Shared core: coefficient rows arrive through a callback so very tall
// systems can stream without materializing a BitMat.
class AffineSolver {
public:
    explicit AffineSolver(std::size_t unknowns)
        : n_(unknowns), elim_(unknowns + 1) {}

    void add_row(const BitVec& coeffs, bool rhs) {
        if (coeffs.size() != n_) throw std::invalid_argument("AffineSolver: row length mismatch");
        BitVec aug(n_ + 1);
        for (std::ptrdiff_t j = coeffs.leading_bit(); j >= 0;
             j = coeffs.next_set_bit(static_cast<std::size_t>(j) + 1))
            aug.set(static_cast<std::size_t>(j));
        if (rhs) aug.set(n_);
        elim_.absorb(std::move(aug));
    }

    AffineResult finish() const {
        AffineResult res;
        res.rank_aug = elim_.rank();
        res.rank_a = res.rank_aug - (elim_.has_pivot(n_) ? 1 : 0);
        if (elim_.has_pivot(n_)) return res;  // 0 = 1 row present

        auto pivots = elim_.pivot_columns();
        BitVec x(n_);
        for (auto c : pivots)
            if (elim_.pivot_row(c).test(n_)) x.set(c);

        // Free variables start at zero; greedy reduction against the
        // reduced-echelon kernel basis yields the lexicographic minimum.
        Eliminator kern(n_);
        for (auto& v : homogeneous_kernel()) kern.absorb(std::move(v));
        for (auto c : kern.pivot_columns())
            if (x.test(c)) x ^= kern.pivot_row(c);

        res.solution = std::move(x);
        return res;
    }

    std::vector<BitVec> homogeneous_kernel() const {
        Eliminator hom(n_);
        for (auto c : elim_.pivot_columns()) {
            if (c == n_) continue;
            const BitVec& r = elim_.pivot_row(c);
            BitVec h(n_);
            for (std::ptrdiff_t j = r.leading_bit(); j >= 0 && static_cast<std::size_t>(j) < n_;
                 j = r.next_set_bit(static_cast<std::size_t>(j) + 1))
                h.set(static_cast<std::size_t>(j));
            hom.absorb(std::move(h));
        }
        return kernel_basis_of_echelon(hom);
    }

private:
    std::size_t n_;
    Eliminator elim_;
};

}  // namespace detail

// Solves a*u = b, free variables zero first, then minimized to the
// lexicographically least solution. Infeasible systems report both ranks.
inline AffineResult solve_affine(const BitMat& a, const BitVec& b) {
    if (a.rows() != b.size()) throw std::invalid_argument("solve_affine: rows != rhs length");
    detail::AffineSolver s(a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) s.add_row(a.row(i), b.test(i));
    return s.finish();
}

inline std::vector<BitVec> subspace_sum_basis(const std::vector<BitVec>& a,
                                              const std::vector<BitVec>& b,
                                              std::size_t len) {
    Eliminator e(len);
    for (const auto& v : a) e.absorb(v);
    for (const auto& v : b) e.absorb(v);
    return e.basis();
}

// Zassenhaus: eliminate [v|v] for v in A against [w|0] for w in B; rows whose
// left half vanished carry an intersection basis in the right half.
inline std::vector<BitVec> subspace_intersection_basis(const std::vector<BitVec>& a,
                                                       const std::vector<BitVec>& b,
                                                       std::size_t len) {
    Eliminator e(2 * len);
    auto widen = [len](const BitVec& v, bool duplicate) {
        BitVec w(2 * len);
        for (std::ptrdiff_t j = v.leading_bit(); j >= 0;
             j = v.next_set_bit(static_cast<std::size_t>(j) + 1)) {
            w.set(static_cast<std::size_t>(j));
            if (duplicate) w.set(len + static_cast<std::size_t>(j));
        }
        return w;
    };
    for (const auto& v : a) e.absorb(widen(v, true));
    for (const auto& v : b) e.absorb(widen(v, false));

    std::vector<BitVec> out;
    for (const auto& row : e.basis()) {
        if (row.leading_bit() >= static_cast<std::ptrdiff_t>(len)) {
            BitVec v(len);
            for (std::ptrdiff_t j = row.leading_bit(); j >= 0;
                 j = row.next_set_bit(static_cast<std::size_t>(j) + 1))
                v.set(static_cast<std::size_t>(j) - len);
            out.push_back(std::move(v));
        }
    }
    return out;
}

inline bool subspace_contains(const std::vector<BitVec>& basis, const BitVec& v) {
    Eliminator e(v.size());
    for (const auto& w : basis) e.absorb(w);
    return e.contains(v);
}

// dim A - dim B for B a subspace of A; rejects B not contained in A.
inline std::size_t quotient_dimension(const std::vector<BitVec>& a,
                                      const std::vector<BitVec>& b,
                                      std::size_t len) {
    Eliminator ea(len);
    for (const auto& v : a) ea.absorb(v);
    std::size_t dim_a = ea.rank();
    Eliminator eb(len);
    for (const auto& v : b) {
        if (!ea.contains(v))
            throw std::invalid_argument("quotient_dimension: second space not contained in first");
        eb.absorb(v);
    }
    return dim_a - eb.rank();
}

}  // namespace cohomlab
