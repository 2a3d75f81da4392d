#pragma once

// Low-degree cohomology and the embedding decision. H^1 is computed from a
// presentation (unknowns are generator values), H^2 by streaming the
// normalized bar resolution through the eliminator. The connecting map of
// 0 -> I -> V -> W -> 0 is represented in relator-pattern coordinates, and
// the wreath-product embedding question is solved as an affine system over
// the per-generator lift vectors.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "cohomlab/f2mod.hpp"
#include "cohomlab/gf2.hpp"
#include "cohomlab/matgroup.hpp"
#include "cohomlab/presentation.hpp"

namespace cohomlab {

struct GuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct H1Result {
    const F2Module* module = nullptr;
    std::vector<BitVec> z1_basis;  // generator-value tuples, one block per generator
    std::vector<BitVec> b1_basis;
    std::size_t dim = 0;  // dim Z^1 - dim B^1
};

// A 1-cocycle is a generator assignment (f_x) that extends to the whole
// group, which is exactly relator consistency of the lifts (x, f_x) in the
// split extension: sum_x f_x * A_x(r) = 0 for every relator r.
inline H1Result h1(const Presentation& pres, const F2Module& m) {
    if (&pres.atlas() != &m.atlas()) throw std::invalid_argument("h1: module over a different atlas");
    std::size_t k = m.generator_count();
    std::size_t d = m.dim();
    std::size_t unknowns = k * d;

    Eliminator sys(unknowns);
    for (const auto& r : pres.relators()) {
        auto fox = fox_coefficients(r, m);
        for (std::size_t c = 0; c < d; ++c) {
            BitVec row(unknowns);
            for (std::size_t x = 0; x < k; ++x)
                for (std::size_t i = 0; i < d; ++i)
                    if (fox[x].get(i, c)) row.set(x * d + i);
            sys.absorb(std::move(row));
        }
    }

    H1Result out;
    out.module = &m;
    out.z1_basis = kernel_basis_of_echelon(sys);

    Eliminator b1(unknowns);
    for (std::size_t i = 0; i < d; ++i) {
        BitVec e = BitVec::unit(d, i);
        BitVec tuple(unknowns);
        for (std::size_t x = 0; x < k; ++x) {
            BitVec img = m.act(e, x) ^ e;
            for (std::ptrdiff_t j = img.leading_bit(); j >= 0;
                 j = img.next_set_bit(static_cast<std::size_t>(j) + 1))
                tuple.set(x * d + static_cast<std::size_t>(j));
        }
        b1.absorb(std::move(tuple));
    }
    out.b1_basis = b1.basis();

    Eliminator z1_span(unknowns);
    for (const auto& z : out.z1_basis) z1_span.absorb(z);
    for (const auto& b : out.b1_basis)
        if (!z1_span.contains(b)) throw std::logic_error("h1: coboundary outside the cocycle space");

    out.dim = out.z1_basis.size() - out.b1_basis.size();
    return out;
}

struct H2Result {
    std::size_t dim = 0;
    std::string method;  // "bar" or "shapiro"
    std::uint64_t group_order = 0;
    std::string module_label;
    std::size_t c2_dim = 0, rank_d2 = 0, rank_d1 = 0;
};

// Normalized inhomogeneous bar resolution in degree two, with the right-
// module differential
//   (dg)(g1,g2,g3) = g(g2,g3) + g(g1g2,g3) + g(g1,g2g3) + g(g1,g2).g3,
// terms involving the identity dropped. dim H^2 = (dim C^2 - rank d2) - rank d1.
inline H2Result h2_bar(const GroupAtlas& atlas, const F2Module& m, std::uint64_t guard = 100) {
    if (&atlas != &m.atlas()) throw std::invalid_argument("h2_bar: module over a different atlas");
    if (atlas.size() > guard)
        throw GuardError("h2_bar: group order " + std::to_string(atlas.size()) +
                         " exceeds the bar-resolution guard " + std::to_string(guard) +
                         "; pass an explicit guard override to proceed");

    std::uint32_t n = static_cast<std::uint32_t>(atlas.size());
    std::uint32_t nn = n - 1;
    std::size_t d = m.dim();
    std::size_t c2_dim = std::size_t{nn} * nn * d;

    std::vector<BitMat> act;
    act.reserve(n);
    for (std::uint32_t g = 0; g < n; ++g) act.push_back(m.element_action(g));

    std::vector<std::uint32_t> mult(std::size_t{n} * n);
    for (std::uint32_t i = 0; i < n; ++i)
        for (std::uint32_t j = 0; j < n; ++j) mult[std::size_t{i} * n + j] = atlas.mul(i, j);

    auto cell = [nn, d](std::uint32_t a, std::uint32_t b, std::size_t coord) {
        return (std::size_t{a - 1} * nn + (b - 1)) * d + coord;
    };

    Eliminator d2(c2_dim);
    for (std::uint32_t g1 = 1; g1 < n; ++g1) {
        for (std::uint32_t g2 = 1; g2 < n; ++g2) {
            std::uint32_t g12 = mult[std::size_t{g1} * n + g2];
            for (std::uint32_t g3 = 1; g3 < n; ++g3) {
                std::uint32_t g23 = mult[std::size_t{g2} * n + g3];
                const BitMat& a3 = act[g3];
                for (std::size_t c = 0; c < d; ++c) {
                    BitVec row(c2_dim);
                    row.flip(cell(g2, g3, c));
                    if (g12 != 0) row.flip(cell(g12, g3, c));
                    if (g23 != 0) row.flip(cell(g1, g23, c));
                    for (std::size_t i = 0; i < d; ++i)
                        if (a3.get(i, c)) row.flip(cell(g1, g2, i));
                    d2.absorb(std::move(row));
                }
            }
        }
    }

    Eliminator d1(c2_dim);
    for (std::uint32_t a = 1; a < n; ++a) {
        for (std::size_t i = 0; i < d; ++i) {
            // gamma = e_i at a; (d gamma)(g1,g2) = gamma(g2) + gamma(g1g2) + gamma(g1).g2
            BitVec row(c2_dim);
            for (std::uint32_t g1 = 1; g1 < n; ++g1) {
                for (std::uint32_t g2 = 1; g2 < n; ++g2) {
                    if (g2 == a) row.flip(cell(g1, g2, i));
                    if (mult[std::size_t{g1} * n + g2] == a) row.flip(cell(g1, g2, i));
                    if (g1 == a) {
                        const BitVec& img = act[g2].row(i);
                        for (std::ptrdiff_t c = img.leading_bit(); c >= 0;
                             c = img.next_set_bit(static_cast<std::size_t>(c) + 1))
                            row.flip(cell(g1, g2, static_cast<std::size_t>(c)));
                    }
                }
            }
            d1.absorb(std::move(row));
        }
    }

    H2Result out;
    out.method = "bar";
    out.group_order = atlas.size();
    out.module_label = m.label();
    out.c2_dim = c2_dim;
    out.rank_d2 = d2.rank();
    out.rank_d1 = d1.rank();
    out.dim = (c2_dim - d2.rank()) - d1.rank();
    return out;
}

// Relator-defect patterns of module-valued generator assignments: the image
// of changing a section, i.e. the coboundary ambiguity in relator-pattern
// coordinates. Pattern layout: relator-major, module coordinate minor.
inline std::vector<BitVec> coboundary_patterns(const Presentation& pres, const F2Module& m) {
    std::size_t k = m.generator_count();
    std::size_t d = m.dim();
    const auto& rel = pres.relators();
    Eliminator span(rel.size() * d);
    for (std::size_t x = 0; x < k; ++x) {
        for (std::size_t i = 0; i < d; ++i) {
            std::vector<BitVec> u(k, BitVec(d));
            u[x] = BitVec::unit(d, i);
            BitVec pattern(rel.size() * d);
            for (std::size_t r = 0; r < rel.size(); ++r) {
                BitVec defect = word_defect(rel[r], m, u);
                for (std::ptrdiff_t j = defect.leading_bit(); j >= 0;
                     j = defect.next_set_bit(static_cast<std::size_t>(j) + 1))
                    pattern.set(r * d + static_cast<std::size_t>(j));
            }
            span.absorb(std::move(pattern));
        }
    }
    return span.basis();
}

struct DeltaImage {
    std::size_t dim = 0;          // dim Im delta
    std::size_t cob_dim = 0;      // dim of the I-coboundary pattern space
    std::size_t relator_count = 0;
    Eliminator span;              // delta patterns + coboundary patterns, in F2^relators
    DeltaImage() : span(0) {}
};

// Connecting map H^1(G,W) -> H^2(G,I) of 0 -> I -> V -> W -> 0, computed by
// lifting W-cocycles to V through the linear section and reading the relator
// defects, which exactness forces into I.
inline DeltaImage delta_image(const Presentation& pres, const F2Module& v,
                              const QuotientModule& w, const F2Module& i_mod,
                              const Submodule& i_in_v) {
    if (i_in_v.dim() != 1 || i_mod.dim() != 1)
        throw std::invalid_argument("delta_image: I must be one-dimensional");
    const BitVec& ones = i_in_v.basis[0];
    const auto& rel = pres.relators();
    std::size_t k = v.generator_count();
    std::size_t wd = w.mod.dim();

    DeltaImage out;
    out.relator_count = rel.size();
    out.span = Eliminator(rel.size());

    for (const auto& b : coboundary_patterns(pres, i_mod)) out.span.absorb(b);
    out.cob_dim = out.span.rank();

    H1Result h1w = h1(pres, w.mod);
    for (const auto& z : h1w.z1_basis) {
        std::vector<BitVec> lifts;
        lifts.reserve(k);
        for (std::size_t x = 0; x < k; ++x) {
            BitVec fx(wd);
            for (std::size_t j = 0; j < wd; ++j) fx.set(j, z.test(x * wd + j));
            lifts.push_back(w.section.apply(fx));
        }
        BitVec pattern(rel.size());
        for (std::size_t r = 0; r < rel.size(); ++r) {
            BitVec defect = word_defect(rel[r], v, lifts);
            if (defect.any() && defect != ones)
                throw std::logic_error("delta_image: relator defect lies outside I");
            pattern.set(r, defect.any());
        }
        out.span.absorb(std::move(pattern));
    }

    out.dim = out.span.rank() - out.cob_dim;
    return out;
}

struct EmbeddingVerdict {
    std::uint32_t q = 0;
    bool embeds = false;
    std::vector<BitVec> witness;   // per-generator vectors in V, when embeds
    std::size_t rank_hom = 0;      // certificate when not: rank_aug = rank_hom + 1
    std::size_t rank_aug = 0;
    BitVec eps;                    // relator sign pattern of SL2 over PSL2
    std::size_t relator_count = 0;
};

// Problem 1 as a linear system: find u_x in V with
//   sum_x u_x * A_x(r) = eps_r * ones   for every relator r.
// A solution realizes SL2(q) inside the wreath product by x -> (x, u_x),
// -I -> (1, ones); infeasibility certifies there is no subextension.
inline EmbeddingVerdict embedding_decide(const Presentation& pres, const F2Module& v,
                                         const Submodule& i_in_v) {
    const GroupAtlas& atlas = pres.atlas();
    std::size_t k = v.generator_count();
    std::size_t d = v.dim();
    const auto& rel = pres.relators();

    EmbeddingVerdict out;
    out.q = atlas.q();
    out.eps = relator_sign_pattern(pres);
    out.relator_count = rel.size();

    detail::AffineSolver solver(k * d);
    for (std::size_t r = 0; r < rel.size(); ++r) {
        auto fox = fox_coefficients(rel[r], v);
        bool rhs = out.eps.test(r);
        for (std::size_t c = 0; c < d; ++c) {
            BitVec row(k * d);
            for (std::size_t x = 0; x < k; ++x)
                for (std::size_t i = 0; i < d; ++i)
                    if (fox[x].get(i, c)) row.set(x * d + i);
            solver.add_row(row, rhs);  // ones has every coordinate set
        }
    }

    AffineResult res = solver.finish();
    out.rank_hom = res.rank_a;
    out.rank_aug = res.rank_aug;
    if (!res.feasible()) {
        out.embeds = false;
        return out;
    }

    out.embeds = true;
    for (std::size_t x = 0; x < k; ++x) {
        BitVec ux(d);
        for (std::size_t i = 0; i < d; ++i) ux.set(i, res.solution->test(x * d + i));
        out.witness.push_back(std::move(ux));
    }

    // Solutions satisfy the system by construction; check one relator anyway.
    if (!rel.empty()) {
        BitVec defect = word_defect(rel[0], v, out.witness);
        BitVec expect = out.eps.test(0) ? i_in_v.basis[0] : BitVec(d);
        if (defect != expect) throw std::logic_error("embedding_decide: witness defect mismatch");
    }
    return out;
}

struct WreathElem {
    std::uint32_t g = 0;
    BitVec v;
    bool operator==(const WreathElem&) const = default;
};

// The permutation wreath product Z2 wr_rho G as pairs (g, v) with
// (g1,v1)(g2,v2) = (g1 g2, v1.rho(g2) + v2).
class WreathGroup {
public:
    WreathGroup(const GroupAtlas& atlas, const ProjLine& line) : atlas_(&atlas), line_(&line) {}

    WreathElem identity() const { return {0, BitVec(line_->points())}; }

    BitVec permute(const BitVec& v, std::uint32_t g) const {
        BitVec out(v.size());
        for (std::ptrdiff_t i = v.leading_bit(); i >= 0;
             i = v.next_set_bit(static_cast<std::size_t>(i) + 1))
            out.set(line_->image(g, static_cast<std::uint32_t>(i)));
        return out;
    }

    WreathElem mul(const WreathElem& a, const WreathElem& b) const {
        return {atlas_->mul(a.g, b.g), permute(a.v, b.g) ^ b.v};
    }

    WreathElem inv(const WreathElem& a) const {
        std::uint32_t gi = atlas_->inv(a.g);
        return {gi, permute(a.v, gi)};
    }

    const GroupAtlas& atlas() const { return *atlas_; }

private:
    const GroupAtlas* atlas_;
    const ProjLine* line_;
};

struct WitnessReport {
    bool relators_ok = false;
    bool closure_ok = false;
    bool kernel_ok = false;
    bool projection_ok = false;
    bool involution_ok = false;
    std::size_t closure_size = 0;
    std::string failure;  // first failing check, named
    std::vector<std::string> transcript;
    bool passed() const {
        return relators_ok && closure_ok && kernel_ok && projection_ok && involution_ok;
    }
};

// Five checks: (a) every relator evaluates to z^eps_r through the lifts,
// (b) the closure of the lifts and z has size exactly 2|G|, (c) the fiber
// over the identity is {1, z}, (d) the projection to G is onto, (e) the
// closure has a unique involution, namely the central z.
inline WitnessReport witness_verify(const Presentation& pres, const F2Module& v,
                                    const ProjLine& line, const Submodule& i_in_v,
                                    const std::vector<BitVec>& witness, const BitVec& eps) {
    const GroupAtlas& atlas = pres.atlas();
    std::size_t k = atlas.generator_count();
    if (witness.size() != k) throw std::invalid_argument("witness_verify: wrong witness arity");
    for (const auto& u : witness)
        if (u.size() != v.dim()) throw std::invalid_argument("witness_verify: wrong vector length");

    WreathGroup wr(atlas, line);
    const BitVec& ones = i_in_v.basis[0];
    WitnessReport rep;
    auto note = [&rep](std::string line_text) { rep.transcript.push_back(std::move(line_text)); };

    // (a) relator evaluation
    rep.relators_ok = true;
    const auto& rel = pres.relators();
    for (std::size_t r = 0; r < rel.size(); ++r) {
        BitVec defect = word_defect(rel[r], v, witness);
        BitVec expect = eps.test(r) ? ones : BitVec(v.dim());
        if (defect != expect) {
            rep.relators_ok = false;
            rep.failure = "relator check (a) failed at relator " + std::to_string(r);
            note(rep.failure);
            break;
        }
    }
    note("(a) relators evaluate to z^eps: " + std::string(rep.relators_ok ? "pass" : "fail"));

    // (b) closure size
    std::vector<WreathElem> gens;
    for (std::size_t x = 0; x < k; ++x) gens.push_back({atlas.generator(x), witness[x]});
    gens.push_back({atlas.identity(), ones});

    std::size_t limit = 2 * atlas.size();
    std::unordered_set<std::string> seen;
    std::vector<WreathElem> closure;
    auto key_of = [](const WreathElem& e) {
        std::string s(reinterpret_cast<const char*>(&e.g), sizeof e.g);
        for (auto w : e.v.words()) s.append(reinterpret_cast<const char*>(&w), sizeof w);
        return s;
    };
    closure.push_back(wr.identity());
    seen.insert(key_of(closure[0]));
    bool overflow = false;
    for (std::size_t cursor = 0; cursor < closure.size() && !overflow; ++cursor) {
        for (const auto& g : gens) {
            WreathElem next = wr.mul(closure[cursor], g);
            if (seen.insert(key_of(next)).second) {
                closure.push_back(std::move(next));
                if (closure.size() > limit) {
                    overflow = true;
                    break;
                }
            }
        }
    }
    rep.closure_size = closure.size();
    rep.closure_ok = !overflow && closure.size() == limit;
    if (!rep.closure_ok && rep.failure.empty())
        rep.failure = overflow ? "closure check (b) failed: closure exceeds 2|G|"
                               : "closure check (b) failed: closure size " +
                                     std::to_string(closure.size()) + " != " + std::to_string(limit);
    note("(b) closure size = " + std::to_string(rep.closure_size) + " (want " +
         std::to_string(limit) + "): " + (rep.closure_ok ? "pass" : "fail"));

    // (c) fiber over the identity is {1, z}
    if (!overflow) {
        std::size_t fiber = 0;
        bool only_expected = true;
        for (const auto& e : closure)
            if (e.g == atlas.identity()) {
                ++fiber;
                if (e.v.any() && e.v != ones) only_expected = false;
            }
        rep.kernel_ok = fiber == 2 && only_expected;
    }
    if (!rep.kernel_ok && rep.failure.empty())
        rep.failure = "kernel check (c) failed: closure meets the fiber over 1 in more than {1, z}";
    note("(c) closure intersects V in {0, ones}: " + std::string(rep.kernel_ok ? "pass" : "fail"));

    // (d) projection onto G
    if (!overflow) {
        std::unordered_set<std::uint32_t> gs;
        for (const auto& e : closure) gs.insert(e.g);
        rep.projection_ok = gs.size() == atlas.size();
    }
    if (!rep.projection_ok && rep.failure.empty())
        rep.failure = "projection check (d) failed: image does not cover G";
    note("(d) projection covers G: " + std::string(rep.projection_ok ? "pass" : "fail"));

    // (e) unique involution, central, over the identity
    if (!overflow) {
        std::size_t involutions = 0;
        bool z_is_involution = false;
        WreathElem z{atlas.identity(), ones};
        for (const auto& e : closure) {
            if (e == wr.identity()) continue;
            if (wr.mul(e, e) == wr.identity()) {
                ++involutions;
                if (e == z) z_is_involution = true;
            }
        }
        bool central = true;
        for (const auto& g : gens) central = central && wr.mul(z, g) == wr.mul(g, z);
        rep.involution_ok = involutions == 1 && z_is_involution && central;
    }
    if (!rep.involution_ok && rep.failure.empty())
        rep.failure = "involution check (e) failed: closure involutions differ from {z}";
    note("(e) unique central involution z: " + std::string(rep.involution_ok ? "pass" : "fail"));

    return rep;
}

}  // namespace cohomlab
