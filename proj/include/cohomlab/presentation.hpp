#pragma once

// Finite presentations read off the Cayley graph: one relator per non-tree
// edge of the BFS spanning tree. Also word evaluation, Fox-style linear
// coefficient extraction over a module, and SL2 sign evaluation of PSL2
// relators.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "cohomlab/gf2.hpp"
#include "cohomlab/matgroup.hpp"

namespace cohomlab {

struct Letter {
    std::uint8_t gen = 0;
    bool inverted = false;
    bool operator==(const Letter&) const = default;
};

using Word = std::vector<Letter>;

inline Word free_reduce(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto l : w) {
        if (!out.empty() && out.back().gen == l.gen && out.back().inverted != l.inverted)
            out.pop_back();
        else
            out.push_back(l);
    }
    return out;
}

inline Word inverse_word(const Word& w) {
    Word out;
    out.reserve(w.size());
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back({it->gen, !it->inverted});
    return out;
}

inline Word concat(Word a, const Word& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

inline std::uint32_t evaluate_word(const GroupAtlas& g, const Word& w) {
    std::uint32_t acc = g.identity();
    for (auto l : w) {
        if (!l.inverted)
            acc = g.gen_image(acc, l.gen);
        else
            acc = g.mul(acc, g.inv(g.generator(l.gen)));
    }
    return acc;
}

// The BFS transversal word of an element, as plain (non-inverted) letters.
inline Word word_for_element(const GroupAtlas& g, std::uint32_t i) {
    Word out;
    for (auto letter : g.word_of(i)) out.push_back({letter, false});
    return out;
}

class Presentation {
public:
    // One relator per non-tree Cayley edge (g, x):
    //   word(g) . x . word(g*x)^-1, freely reduced.
    // The relator count is |G|*k - (|G| - 1) and every relator is verified
    // to evaluate to the identity.
    explicit Presentation(const GroupAtlas& atlas) : atlas_(&atlas) {
        std::size_t k = atlas.generator_count();
        std::size_t n = atlas.size();
        if (k > 0) relators_.reserve(n * k - (n - 1));

        for (std::uint32_t g = 0; g < n; ++g) {
            Word wg = word_for_element(atlas, g);
            for (std::uint8_t j = 0; j < k; ++j) {
                std::uint32_t child = atlas.gen_image(g, j);
                if (atlas.bfs_parent(child) == static_cast<std::int32_t>(g) &&
                    atlas.bfs_letter(child) == j)
                    continue;  // spanning-tree edge
                Word r = wg;
                r.push_back({j, false});
                r = concat(std::move(r), inverse_word(word_for_element(atlas, child)));
                relators_.push_back(free_reduce(r));
            }
        }

        std::size_t expected = k == 0 ? 0 : n * k - (n - 1);
        if (relators_.size() != expected)
            throw std::logic_error("Presentation: relator count mismatch");
        for (const auto& r : relators_)
            if (evaluate_word(atlas, r) != atlas.identity())
                throw std::logic_error("Presentation: relator does not evaluate to identity");
    }

    Presentation(const GroupAtlas& atlas, std::vector<Word> relators)
        : atlas_(&atlas), relators_(std::move(relators)) {
        for (const auto& r : relators_)
            if (evaluate_word(atlas, r) != atlas.identity())
                throw std::logic_error("Presentation: relator does not evaluate to identity");
    }

    const GroupAtlas& atlas() const { return *atlas_; }
    const std::vector<Word>& relators() const { return relators_; }
    std::size_t generator_count() const { return atlas_->generator_count(); }

private:
    const GroupAtlas* atlas_;
    std::vector<Word> relators_;
};

// Fox coefficient matrices {A_x}: lifting generator x to (x, u_x) in a split
// extension by the module and multiplying out the word gives vector part
// sum_x u_x * A_x. Scanning letters right to left with suffix action S:
// a letter x contributes S to A_x, a letter x^-1 contributes action(x)^-1 * S.
// ModuleT exposes dim(), generator_count(), gen_action(j), gen_action_inv(j).
template <typename ModuleT>
std::vector<BitMat> fox_coefficients(const Word& w, const ModuleT& m) {
    std::size_t k = m.generator_count();
    std::size_t d = m.dim();
    std::vector<BitMat> fox(k, BitMat(d, d));
    BitMat suffix = BitMat::identity(d);
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        if (!it->inverted) {
            fox[it->gen] = fox[it->gen] ^ suffix;
            suffix = m.gen_action(it->gen).mul(suffix);
        } else {
            BitMat contrib = m.gen_action_inv(it->gen).mul(suffix);
            fox[it->gen] = fox[it->gen] ^ contrib;
            suffix = std::move(contrib);  // action(x^-1) * S equals the contribution
        }
    }
    return fox;
}

// Vector part of evaluating w through the lifts (x, u[x]), i.e. the defect
// the word accumulates in the split extension. Linear in u with the Fox
// matrices as coefficients, but cheaper when u is fixed.
template <typename ModuleT>
BitVec word_defect(const Word& w, const ModuleT& m, const std::vector<BitVec>& u) {
    BitVec v(m.dim());
    for (auto l : w) {
        if (!l.inverted) {
            v = m.gen_action(l.gen).apply(v);
            v ^= u[l.gen];
        } else {
            const BitMat& inv = m.gen_action_inv(l.gen);
            v = inv.apply(v);
            v ^= inv.apply(u[l.gen]);
        }
    }
    return v;
}

// Evaluates a PSL2 identity word through the canonical SL2 lifts of the
// generators. The value is central, hence +-I; returns true for -I.
inline bool sl_sign_of_word(const GroupAtlas& psl, const Word& w) {
    const FieldTable& f = psl.field();
    Mat2 acc = mat_identity();
    for (auto l : w) {
        Mat2 g = psl.generator_matrix(l.gen);
        acc = mat_mul(f, acc, l.inverted ? mat_inv(f, g) : g);
    }
    if (acc == mat_identity()) return false;
    Mat2 minus_i{f.neg(1), 0, 0, f.neg(1)};
    if (acc == minus_i) return true;
    throw std::logic_error("sl_sign_of_word: word value is not central in SL2");
}

// The extension class of SL2(q) over PSL2(q) in relator coordinates:
// bit r set iff relator r evaluates to -I through the canonical lifts.
inline BitVec relator_sign_pattern(const Presentation& pres) {
    const auto& rel = pres.relators();
    BitVec eps(rel.size());
    for (std::size_t i = 0; i < rel.size(); ++i)
        if (sl_sign_of_word(pres.atlas(), rel[i])) eps.set(i);
    return eps;
}

}  // namespace cohomlab
