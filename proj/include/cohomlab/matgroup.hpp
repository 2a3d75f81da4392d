#pragma once

// Enumeration of SL2(q) and PSL2(q) by breadth-first closure over a fixed
// generator set, the projective-line permutation action, the Borel (point
// stabilizer) subgroup, and the sign bookkeeping between the two groups.

#include <array>
#include <cstdint>
#include <iostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "cohomlab/field.hpp"

namespace cohomlab {

enum class GroupKind { SL, PSL };

struct Mat2 {
    FieldElement a = 1, b = 0, c = 0, d = 1;  // row-major [[a,b],[c,d]]
    bool operator==(const Mat2&) const = default;
};

inline Mat2 mat_identity() { return Mat2{}; }

inline Mat2 mat_mul(const FieldTable& f, const Mat2& x, const Mat2& y) {
    return {f.add(f.mul(x.a, y.a), f.mul(x.b, y.c)),
            f.add(f.mul(x.a, y.b), f.mul(x.b, y.d)),
            f.add(f.mul(x.c, y.a), f.mul(x.d, y.c)),
            f.add(f.mul(x.c, y.b), f.mul(x.d, y.d))};
}

// Adjugate; inverse for determinant-one matrices.
inline Mat2 mat_inv(const FieldTable& f, const Mat2& m) {
    return {m.d, f.neg(m.b), f.neg(m.c), m.a};
}

inline Mat2 mat_neg(const FieldTable& f, const Mat2& m) {
    return {f.neg(m.a), f.neg(m.b), f.neg(m.c), f.neg(m.d)};
}

inline FieldElement mat_det(const FieldTable& f, const Mat2& m) {
    return f.sub(f.mul(m.a, m.d), f.mul(m.b, m.c));
}

inline std::uint64_t mat_key(const Mat2& m) {
    return std::uint64_t{m.a} | (std::uint64_t{m.b} << 16) | (std::uint64_t{m.c} << 32) |
           (std::uint64_t{m.d} << 48);
}

// Sign representative for PSL: of {m, -m}, the one whose first nonzero
// entry in scan order (a, b, c, d) has the smaller code. Never ties in odd
// characteristic.
inline Mat2 psl_canonical(const FieldTable& f, const Mat2& m) {
    Mat2 n = mat_neg(f, m);
    const std::array<FieldElement, 4> me{m.a, m.b, m.c, m.d};
    const std::array<FieldElement, 4> ne{n.a, n.b, n.c, n.d};
    for (int i = 0; i < 4; ++i)
        if (me[i] != 0) return me[i] < ne[i] ? m : n;
    throw std::logic_error("psl_canonical: zero matrix");
}

class GroupAtlas {
public:
    GroupKind kind() const { return kind_; }
    const FieldTable& field() const { return field_; }
    std::uint32_t q() const { return field_.q(); }

    std::size_t size() const { return elements_.size(); }
    std::uint32_t identity() const { return 0; }

    const Mat2& element(std::uint32_t i) const { return elements_[i]; }
    const std::vector<Mat2>& elements() const { return elements_; }

    std::size_t generator_count() const { return gen_index_.size(); }
    std::uint32_t generator(std::size_t j) const { return gen_index_[j]; }
    const Mat2& generator_matrix(std::size_t j) const { return elements_[gen_index_[j]]; }

    Mat2 canonical(const Mat2& m) const {
        return kind_ == GroupKind::PSL ? psl_canonical(field_, m) : m;
    }

    bool contains(const Mat2& m) const { return index_.count(mat_key(canonical(m))) != 0; }

    std::uint32_t index_of(const Mat2& m) const {
        auto it = index_.find(mat_key(canonical(m)));
        if (it == index_.end()) throw std::invalid_argument("GroupAtlas: element not in group");
        return it->second;
    }

    std::uint32_t mul(std::uint32_t i, std::uint32_t j) const {
        return index_of(mat_mul(field_, elements_[i], elements_[j]));
    }

    std::uint32_t inv(std::uint32_t i) const { return index_of(mat_inv(field_, elements_[i])); }

    // Product with a generator, by table.
    std::uint32_t gen_image(std::uint32_t i, std::size_t j) const {
        return gen_images_[i * gen_index_.size() + j];
    }

    std::uint32_t order_of(std::uint32_t i) const {
        std::uint32_t ord = 1, x = i;
        while (x != 0) {
            x = mul(x, i);
            ++ord;
        }
        return ord;
    }

    // BFS spanning-tree word: generator letters whose left-to-right product
    // is element i. Identity gets the empty word.
    std::vector<std::uint8_t> word_of(std::uint32_t i) const {
        std::vector<std::uint8_t> letters;
        while (bfs_parent_[i] >= 0) {
            letters.push_back(bfs_letter_[i]);
            i = static_cast<std::uint32_t>(bfs_parent_[i]);
        }
        return {letters.rbegin(), letters.rend()};
    }

    std::int32_t bfs_parent(std::uint32_t i) const { return bfs_parent_[i]; }
    std::uint8_t bfs_letter(std::uint32_t i) const { return bfs_letter_[i]; }

    // BFS closure of the given generators. Identity and duplicate generators
    // are dropped. A wrong closure size against expected_order is a hard
    // error: enumeration must never silently proceed on a generation
    // shortfall.
    static GroupAtlas closure(FieldTable field, GroupKind kind, const std::vector<Mat2>& gens,
                              std::uint64_t expected_order = 0) {
        GroupAtlas g;
        g.kind_ = kind;
        g.field_ = std::move(field);
        const FieldTable& f = g.field_;

        std::vector<Mat2> gen_mats;
        for (const auto& m : gens) {
            if (mat_det(f, m) != 1)
                throw std::invalid_argument("GroupAtlas: generator determinant != 1");
            Mat2 cm = g.canonical(m);
            if (cm == mat_identity()) continue;
            bool dup = false;
            for (const auto& seen : gen_mats) dup = dup || seen == cm;
            if (!dup) gen_mats.push_back(cm);
        }

        std::size_t k = gen_mats.size();
        g.elements_.push_back(mat_identity());
        g.index_.emplace(mat_key(mat_identity()), 0);
        g.bfs_parent_.push_back(-1);
        g.bfs_letter_.push_back(0);

        for (std::uint32_t cursor = 0; cursor < g.elements_.size(); ++cursor) {
            for (std::size_t j = 0; j < k; ++j) {
                Mat2 prod = g.canonical(mat_mul(f, g.elements_[cursor], gen_mats[j]));
                auto [it, fresh] = g.index_.emplace(mat_key(prod),
                                                    static_cast<std::uint32_t>(g.elements_.size()));
                if (fresh) {
                    g.elements_.push_back(prod);
                    g.bfs_parent_.push_back(static_cast<std::int32_t>(cursor));
                    g.bfs_letter_.push_back(static_cast<std::uint8_t>(j));
                }
                g.gen_images_.push_back(it->second);
            }
        }

        // gen_images_ was appended row by row as elements were discovered, so
        // it is already indexed by (element, generator).
        g.gen_index_.reserve(k);
        for (std::size_t j = 0; j < k; ++j) g.gen_index_.push_back(g.index_.at(mat_key(gen_mats[j])));

        if (expected_order && g.elements_.size() != expected_order)
            throw std::logic_error("GroupAtlas: closure size " + std::to_string(g.elements_.size()) +
                                   " does not match expected order " + std::to_string(expected_order));
        return g;
    }

    friend GroupAtlas atlas_from_cache_data(FieldTable, GroupKind, std::vector<Mat2>,
                                            std::vector<std::uint32_t>, std::vector<std::uint32_t>,
                                            std::vector<std::int32_t>, std::vector<std::uint8_t>);

private:
    GroupKind kind_ = GroupKind::PSL;
    FieldTable field_;
    std::vector<Mat2> elements_;
    std::unordered_map<std::uint64_t, std::uint32_t> index_;
    std::vector<std::uint32_t> gen_index_;
    std::vector<std::uint32_t> gen_images_;
    std::vector<std::int32_t> bfs_parent_;
    std::vector<std::uint8_t> bfs_letter_;
};

inline std::uint64_t sl2_order(std::uint64_t q) { return q * (q - 1) * (q + 1); }
inline std::uint64_t psl2_order(std::uint64_t q) { return sl2_order(q) / 2; }

// Standard generators: u = [[1,1],[0,1]], w = [[0,1],[-1,0]], plus the extra
// unipotent u_alpha = [[1,alpha],[0,1]] over proper extension fields. The
// optional permutation reorders the generator list (used to exercise
// spanning-tree invariance).
inline GroupAtlas build_group(std::uint32_t q, GroupKind kind,
                              const std::vector<std::size_t>& gen_order = {}) {
    FieldTable f = make_field(q);
    if (q > 27)
        std::cerr << "cohomlab: warning: q = " << q
                  << " exceeds the tested range; group enumeration may use substantial memory\n";

    std::vector<Mat2> gens;
    gens.push_back(Mat2{1, 1, 0, 1});
    gens.push_back(Mat2{0, 1, f.neg(1), 0});
    if (f.degree() > 1) gens.push_back(Mat2{1, f.primitive_element(), 0, 1});

    if (!gen_order.empty()) {
        if (gen_order.size() != gens.size())
            throw std::invalid_argument("build_group: generator permutation has wrong length");
        std::vector<Mat2> permuted;
        for (auto i : gen_order) permuted.push_back(gens.at(i));
        gens = std::move(permuted);
    }

    std::uint64_t expected = kind == GroupKind::SL ? sl2_order(q) : psl2_order(q);
    return GroupAtlas::closure(std::move(f), kind, gens, expected);
}

// Permutation action on the projective line: point i in [0, q) is (i : 1),
// point q is (1 : 0). The table covers every group element.
class ProjLine {
public:
    explicit ProjLine(const GroupAtlas& atlas) {
        if (atlas.kind() != GroupKind::PSL)
            throw std::invalid_argument("ProjLine: needs a PSL atlas (SL acts through its quotient)");
        const FieldTable& f = atlas.field();
        q_ = f.q();
        std::uint32_t n = q_ + 1;
        perm_.resize(atlas.size() * n);
        for (std::uint32_t g = 0; g < atlas.size(); ++g) {
            const Mat2& m = atlas.element(g);
            for (std::uint32_t pt = 0; pt < n; ++pt) {
                // Right action on row vectors: (x : y) -> (xa + yc : xb + yd).
                FieldElement x = pt < q_ ? pt : 1;
                FieldElement y = pt < q_ ? 1 : 0;
                FieldElement ix = f.add(f.mul(x, m.a), f.mul(y, m.c));
                FieldElement iy = f.add(f.mul(x, m.b), f.mul(y, m.d));
                perm_[g * n + pt] = iy == 0 ? static_cast<std::uint16_t>(q_)
                                            : static_cast<std::uint16_t>(f.div(ix, iy));
            }
        }
    }

    std::uint32_t q() const { return q_; }
    std::uint32_t points() const { return q_ + 1; }

    std::uint16_t image(std::uint32_t g, std::uint32_t point) const {
        return perm_[g * points() + point];
    }

    std::vector<std::uint16_t> permutation(std::uint32_t g) const {
        auto begin = perm_.begin() + g * points();
        return {begin, begin + points()};
    }

private:
    std::uint32_t q_ = 0;
    std::vector<std::uint16_t> perm_;
};

// Stabilizer of (1 : 0), of order q(q-1)/2: generated by the unipotent
// [[1,0],[1,1]] and the diagonal of the primitive element. Returned as an
// atlas in its own right; its elements are canonical PSL matrices, so they
// resolve against the parent by index_of.
inline GroupAtlas borel_subgroup(const GroupAtlas& psl) {
    if (psl.kind() != GroupKind::PSL) throw std::invalid_argument("borel_subgroup: PSL atlas required");
    const FieldTable& f = psl.field();
    FieldElement lam = f.primitive_element();
    std::vector<Mat2> gens = {Mat2{1, 0, 1, 1}, Mat2{lam, 0, 0, f.inv(lam)}};
    std::uint64_t expected = std::uint64_t{f.q()} * (f.q() - 1) / 2;
    return GroupAtlas::closure(f, GroupKind::PSL, gens, expected);
}

// Deterministic section PSL -> SL: a PSL element is stored as its canonical
// sign matrix, which is itself an SL element.
inline std::uint32_t sl2_lift(const GroupAtlas& psl, const GroupAtlas& sl, std::uint32_t g) {
    if (psl.q() != sl.q()) throw std::invalid_argument("sl2_lift: field mismatch");
    return sl.index_of(psl.element(g));
}

}  // namespace cohomlab
