#pragma once

// Right modules over the group ring of an enumerated group, coefficients in
// GF(2): the permutation module V on the projective line, the trivial module,
// submodule/quotient machinery, spin closures, and endomorphism dimensions.

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cohomlab/gf2.hpp"
#include "cohomlab/matgroup.hpp"
#include "cohomlab/presentation.hpp"

namespace cohomlab {

// Row reduction of [M | I] to [I | M^-1]; throws if singular.
inline BitMat bitmat_inverse(const BitMat& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("bitmat_inverse: not square");
    std::size_t n = m.rows();
    Eliminator e(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        BitVec aug(2 * n);
        for (std::ptrdiff_t j = m.row(i).leading_bit(); j >= 0;
             j = m.row(i).next_set_bit(static_cast<std::size_t>(j) + 1))
            aug.set(static_cast<std::size_t>(j));
        aug.set(n + i);
        e.absorb(std::move(aug));
    }
    BitMat inv(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        if (!e.has_pivot(c)) throw std::invalid_argument("bitmat_inverse: singular matrix");
        const BitVec& row = e.pivot_row(c);
        for (std::size_t j = 0; j < n; ++j) inv.set(c, j, row.test(n + j));
    }
    return inv;
}

class F2Module {
public:
    // Verifies that every action is invertible and, when a presentation is
    // supplied, that every relator's action product is the identity.
    F2Module(const GroupAtlas& atlas, std::size_t dim, std::vector<BitMat> actions,
             std::string label, const Presentation* pres = nullptr)
        : atlas_(&atlas), label_(std::move(label)), dim_(dim), act_(std::move(actions)) {
        if (act_.size() != atlas.generator_count())
            throw std::invalid_argument("F2Module: one action per generator required");
        inv_.reserve(act_.size());
        for (const auto& a : act_) {
            if (a.rows() != dim_ || a.cols() != dim_)
                throw std::invalid_argument("F2Module: actions must be square of equal size");
            inv_.push_back(bitmat_inverse(a));
        }
        if (pres) verify_relator_actions(*pres);
    }

    const GroupAtlas& atlas() const { return *atlas_; }
    std::size_t dim() const { return dim_; }
    std::size_t generator_count() const { return act_.size(); }
    const std::string& label() const { return label_; }

    const BitMat& gen_action(std::size_t j) const { return act_[j]; }
    const BitMat& gen_action_inv(std::size_t j) const { return inv_[j]; }

    BitVec act(const BitVec& v, std::size_t j) const { return act_[j].apply(v); }

    // Action of an arbitrary element, realized through its generator word.
    BitMat element_action(std::uint32_t g) const {
        BitMat m = BitMat::identity(dim_);
        for (auto letter : atlas_->word_of(g)) m = m.mul(act_[letter]);
        return m;
    }

    void verify_relator_actions(const Presentation& pres) const {
        for (const auto& r : pres.relators()) {
            BitMat m = BitMat::identity(dim_);
            for (auto l : r) m = m.mul(l.inverted ? inv_[l.gen] : act_[l.gen]);
            if (!m.is_identity())
                throw std::logic_error("F2Module(" + label_ + "): relator action is not the identity");
        }
    }

private:
    const GroupAtlas* atlas_;
    std::string label_;
    std::size_t dim_ = 0;
    std::vector<BitMat> act_, inv_;
};

struct Submodule {
    const F2Module* parent = nullptr;
    std::vector<BitVec> basis;  // reduced echelon form

    std::size_t dim() const { return basis.size(); }
    bool contains(const BitVec& v) const { return subspace_contains(basis, v); }
};

// The permutation module V: coordinates are projective points, generators act
// by the permutation matrices of the projective action.
inline F2Module perm_module(const GroupAtlas& atlas, const ProjLine& line,
                            const Presentation* pres = nullptr) {
    std::size_t n = line.points();
    std::vector<BitMat> actions;
    for (std::size_t j = 0; j < atlas.generator_count(); ++j) {
        BitMat m(n, n);
        std::uint32_t g = atlas.generator(j);
        for (std::uint32_t pt = 0; pt < n; ++pt) m.set(pt, line.image(g, pt));
        actions.push_back(std::move(m));
    }
    return F2Module(atlas, n, std::move(actions), "V", pres);
}

inline F2Module trivial_module(const GroupAtlas& atlas, std::size_t dim = 1,
                               const std::string& label = "T") {
    std::vector<BitMat> actions(atlas.generator_count(), BitMat::identity(dim));
    return F2Module(atlas, dim, std::move(actions), label);
}

// H^0: common kernel of (action(x) - 1) over all generators.
inline Submodule fixed_points(const F2Module& m) {
    std::size_t d = m.dim();
    std::size_t k = m.generator_count();
    BitMat stacked(k * d, d);
    for (std::size_t j = 0; j < k; ++j) {
        BitMat n = m.gen_action(j) ^ BitMat::identity(d);
        BitMat nt = n.transposed();
        for (std::size_t i = 0; i < d; ++i) stacked.row(j * d + i) = nt.row(i);
    }
    Eliminator span(d);
    for (auto& v : kernel_basis(stacked)) span.absorb(std::move(v));
    return Submodule{&m, span.basis()};
}

// Smallest submodule containing the seed: worklist closure under all
// generator actions, collected by elimination.
inline Submodule spin(const F2Module& m, const BitVec& seed) {
    if (seed.size() != m.dim()) throw std::invalid_argument("spin: seed length mismatch");
    Eliminator span(m.dim());
    std::vector<BitVec> work;
    if (span.absorb(seed)) work.push_back(seed);
    while (!work.empty()) {
        BitVec v = std::move(work.back());
        work.pop_back();
        for (std::size_t j = 0; j < m.generator_count(); ++j) {
            BitVec img = m.act(v, j);
            if (span.absorb(img)) work.push_back(std::move(img));
        }
    }
    return Submodule{&m, span.basis()};
}

inline bool is_action_closed(const F2Module& m, const std::vector<BitVec>& basis) {
    Eliminator span(m.dim());
    for (const auto& v : basis) span.absorb(v);
    for (const auto& v : basis)
        for (std::size_t j = 0; j < m.generator_count(); ++j)
            if (!span.contains(m.act(v, j))) return false;
    return true;
}

struct QuotientModule {
    F2Module mod;
    BitMat projection;  // parent.dim x quotient.dim, apply as v * P
    BitMat section;     // quotient.dim x parent.dim, linear (not module) section
};

// Quotient by an action-closed submodule. Coordinates are the non-pivot
// columns of the reduced echelon basis, so the matrices are deterministic.
inline QuotientModule quotient_module(const F2Module& m, const Submodule& s,
                                      const Presentation* pres = nullptr,
                                      const std::string& label = "Q") {
    if (s.parent != &m) throw std::invalid_argument("quotient_module: submodule of a different module");
    if (!is_action_closed(m, s.basis))
        throw std::invalid_argument("quotient_module: subspace is not action-closed");

    std::size_t d = m.dim();
    Eliminator sub(d);
    for (const auto& v : s.basis) sub.absorb(v);
    std::vector<bool> is_pivot(d, false);
    for (auto c : sub.pivot_columns()) is_pivot[c] = true;

    std::vector<std::size_t> coord;  // quotient coordinate -> parent column
    for (std::size_t c = 0; c < d; ++c)
        if (!is_pivot[c]) coord.push_back(c);
    std::size_t wd = coord.size();

    BitMat projection(d, wd);
    for (std::size_t i = 0; i < d; ++i) {
        BitVec r = sub.reduce(BitVec::unit(d, i));
        for (std::size_t j = 0; j < wd; ++j) projection.set(i, j, r.test(coord[j]));
    }
    BitMat section(wd, d);
    for (std::size_t j = 0; j < wd; ++j) section.set(j, coord[j]);

    std::vector<BitMat> actions;
    for (std::size_t j = 0; j < m.generator_count(); ++j)
        actions.push_back(section.mul(m.gen_action(j)).mul(projection));

    QuotientModule out{F2Module(m.atlas(), wd, std::move(actions), label, pres), std::move(projection),
                       std::move(section)};
    if (!out.section.mul(out.projection).is_identity())
        throw std::logic_error("quotient_module: projection is not a retraction of the section");
    return out;
}

// Span of {v.x - v}: the augmentation-action span. For W this is the unique
// maximal submodule U of codimension 1; any other codimension is an error.
inline Submodule derived_submodule(const F2Module& m) {
    Eliminator span(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        BitVec e = BitVec::unit(m.dim(), i);
        for (std::size_t j = 0; j < m.generator_count(); ++j) span.absorb(m.act(e, j) ^ e);
    }
    if (m.label() == "W" && span.rank() + 1 != m.dim())
        throw std::logic_error("derived_submodule: W does not have a codimension-1 derived span");
    return Submodule{&m, span.basis()};
}

// A submodule as a module in its own coordinates, tracking the basis.
inline F2Module submodule_as_module(const F2Module& m, const Submodule& s,
                                    const Presentation* pres = nullptr,
                                    const std::string& label = "S") {
    if (s.parent != &m) throw std::invalid_argument("submodule_as_module: wrong parent");
    if (!is_action_closed(m, s.basis))
        throw std::invalid_argument("submodule_as_module: subspace is not action-closed");

    std::size_t d = m.dim(), sd = s.dim();
    // [basis | I] rows; expressing v reads coefficients off the right half.
    Eliminator e(d + sd);
    for (std::size_t i = 0; i < sd; ++i) {
        BitVec aug(d + sd);
        for (std::ptrdiff_t j = s.basis[i].leading_bit(); j >= 0;
             j = s.basis[i].next_set_bit(static_cast<std::size_t>(j) + 1))
            aug.set(static_cast<std::size_t>(j));
        aug.set(d + i);
        e.absorb(std::move(aug));
    }
    auto express = [&](const BitVec& v) {
        BitVec aug(d + sd);
        for (std::ptrdiff_t j = v.leading_bit(); j >= 0;
             j = v.next_set_bit(static_cast<std::size_t>(j) + 1))
            aug.set(static_cast<std::size_t>(j));
        BitVec red = e.reduce(aug);
        if (red.leading_bit() >= 0 && red.leading_bit() < static_cast<std::ptrdiff_t>(d))
            throw std::logic_error("submodule_as_module: vector not in the subspace");
        BitVec coeff(sd);
        for (std::size_t i = 0; i < sd; ++i) coeff.set(i, red.test(d + i));
        return coeff;
    };

    std::vector<BitMat> actions;
    for (std::size_t j = 0; j < m.generator_count(); ++j) {
        BitMat a(sd, sd);
        for (std::size_t i = 0; i < sd; ++i) a.row(i) = express(m.act(s.basis[i], j));
        actions.push_back(std::move(a));
    }
    return F2Module(m.atlas(), sd, std::move(actions), label, pres);
}

enum class ScanMode { Exhaustive, Sampled };

// True iff the spin of every nonzero vector contains the given submodule.
// Exhaustive scans need dim <= 14; sampled mode draws the stated number of
// random nonzero vectors and is evidence, not proof.
inline bool every_spin_contains(const F2Module& m, const Submodule& minimal, ScanMode mode,
                                std::size_t samples = 100000, std::uint64_t seed = 0x5eed) {
    auto spin_covers = [&](const BitVec& v) {
        Submodule s = spin(m, v);
        for (const auto& b : minimal.basis)
            if (!subspace_contains(s.basis, b)) return false;
        return true;
    };

    if (mode == ScanMode::Exhaustive) {
        if (m.dim() > 14)
            throw std::invalid_argument("every_spin_contains: exhaustive scan needs dim <= 14");
        std::uint64_t total = std::uint64_t{1} << m.dim();
        for (std::uint64_t bits = 1; bits < total; ++bits) {
            BitVec v(m.dim());
            for (std::size_t i = 0; i < m.dim(); ++i)
                if ((bits >> i) & 1) v.set(i);
            if (!spin_covers(v)) return false;
        }
        return true;
    }

    std::mt19937_64 rng(seed);
    for (std::size_t t = 0; t < samples; ++t) {
        BitVec v(m.dim());
        while (v.none())
            for (std::size_t i = 0; i < m.dim(); ++i) v.set(i, rng() & 1);
        if (!spin_covers(v)) return false;
    }
    return true;
}

// Dimension of the algebra of matrices commuting with every generator action.
inline std::size_t endomorphism_dim(const F2Module& m) {
    std::size_t d = m.dim();
    Eliminator e(d * d);
    for (std::size_t g = 0; g < m.generator_count(); ++g) {
        const BitMat& a = m.gen_action(g);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                // (E a)[i][j] + (a E)[i][j] = 0, linear in the entries of E.
                BitVec row(d * d);
                for (std::size_t k = 0; k < d; ++k) {
                    if (a.get(k, j)) row.flip(i * d + k);
                    if (a.get(i, k)) row.flip(k * d + j);
                }
                e.absorb(std::move(row));
            }
    }
    return d * d - e.rank();
}

}  // namespace cohomlab
