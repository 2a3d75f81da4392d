#pragma once

// Per-q assembly: lazily built group/module bundle, the q-level operations
// (Ker phi, H1(G,U), Shapiro comparisons), and the paper verification report
// with provenance-tagged expected values.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "cohomlab/cache.hpp"
#include "cohomlab/cohomology.hpp"
#include "cohomlab/f2mod.hpp"

namespace cohomlab {

constexpr std::uint64_t kDefaultBarGuard = 100;

inline bool is_odd_prime_power(std::uint32_t q) {
    if (q < 3 || q % 2 == 0) return false;
    std::uint32_t p = 0;
    for (std::uint32_t d = 3; d * d <= q; d += 2)
        if (q % d == 0) {
            p = d;
            break;
        }
    if (p == 0) return true;
    while (q % p == 0) q /= p;
    return q == 1;
}

// Lazily built structures for one q. Heap members keep addresses stable, so
// the cross-references between atlas, presentation and modules stay valid.
class GroupContext {
public:
    explicit GroupContext(std::uint32_t q, std::vector<std::size_t> gen_order = {},
                          const CacheDir* cache = nullptr)
        : q_(q), gen_order_(std::move(gen_order)), cache_(cache) {
        if (!is_odd_prime_power(q)) throw std::invalid_argument("q must be an odd prime power >= 3");
    }

    std::uint32_t q() const { return q_; }

    const GroupAtlas& atlas() {
        ensure_group();
        return *atlas_;
    }
    const Presentation& pres() {
        ensure_group();
        return *pres_;
    }
    const ProjLine& line() {
        ensure_group();
        if (!line_) line_ = std::make_unique<ProjLine>(*atlas_);
        return *line_;
    }

    const F2Module& V() {
        if (!v_) {
            v_ = std::make_unique<F2Module>(perm_module(atlas(), line(), &pres()));
            i_in_v_ = fixed_points(*v_);
            if (i_in_v_.dim() != 1 || !(i_in_v_.basis[0] == BitVec::ones(v_->dim())))
                throw std::logic_error("GroupContext: fixed points of V are not the all-ones line");
        }
        return *v_;
    }
    const Submodule& I_in_V() {
        V();
        return i_in_v_;
    }
    const F2Module& I() {
        if (!i_mod_) i_mod_ = std::make_unique<F2Module>(trivial_module(atlas(), 1, "I"));
        return *i_mod_;
    }
    const QuotientModule& W() {
        if (!w_) w_ = std::make_unique<QuotientModule>(quotient_module(V(), I_in_V(), &pres(), "W"));
        return *w_;
    }
    const Submodule& U_in_W() {
        if (!u_) U();
        return u_in_w_;
    }
    const F2Module& U() {
        if (!u_) {
            u_in_w_ = derived_submodule(W().mod);
            u_ = std::make_unique<F2Module>(submodule_as_module(W().mod, u_in_w_, &pres(), "U"));
        }
        return *u_;
    }

    const GroupAtlas& borel() {
        if (!borel_) borel_ = std::make_unique<GroupAtlas>(borel_subgroup(atlas()));
        return *borel_;
    }
    const Presentation& borel_pres() {
        if (!borel_pres_) borel_pres_ = std::make_unique<Presentation>(borel());
        return *borel_pres_;
    }
    const F2Module& borel_T() {
        if (!borel_t_) borel_t_ = std::make_unique<F2Module>(trivial_module(borel(), 1, "T"));
        return *borel_t_;
    }

private:
    void ensure_group() {
        if (atlas_) return;
        if (cache_ && gen_order_.empty()) {
            if (auto cached = cache_->try_load(q_, GroupKind::PSL)) {
                atlas_ = std::move(cached->atlas);
                pres_ = std::move(cached->pres);
                return;
            }
        }
        atlas_ = std::make_unique<GroupAtlas>(build_group(q_, GroupKind::PSL, gen_order_));
        pres_ = std::make_unique<Presentation>(*atlas_);
        if (cache_ && gen_order_.empty()) cache_->save(*atlas_, *pres_);
    }

    std::uint32_t q_;
    std::vector<std::size_t> gen_order_;
    const CacheDir* cache_;

    std::unique_ptr<GroupAtlas> atlas_;
    std::unique_ptr<Presentation> pres_;
    std::unique_ptr<ProjLine> line_;
    std::unique_ptr<F2Module> v_, i_mod_, u_;
    Submodule i_in_v_, u_in_w_;
    std::unique_ptr<QuotientModule> w_;
    std::unique_ptr<GroupAtlas> borel_;
    std::unique_ptr<Presentation> borel_pres_;
    std::unique_ptr<F2Module> borel_t_;
};

inline EmbeddingVerdict decide_embedding(GroupContext& ctx) {
    return embedding_decide(ctx.pres(), ctx.V(), ctx.I_in_V());
}

inline WitnessReport verify_witness(GroupContext& ctx, const EmbeddingVerdict& verdict) {
    if (!verdict.embeds) throw std::invalid_argument("verify_witness: verdict carries no witness");
    return witness_verify(ctx.pres(), ctx.V(), ctx.line(), ctx.I_in_V(), verdict.witness,
                          verdict.eps);
}

struct KerPhiReport {
    std::size_t dim = 0;        // dim Ker phi = dim Im delta
    std::size_t delta_dim = 0;  // from the connecting-map route
    bool embeds = false;        // from the direct linear system
};

// dim H2(G,I) = 1 is consumed from the paper; Ker phi is then 1 or 0
// according to the embedding verdict. Cross-checked against the
// independently computed Im delta and against membership of the sign
// pattern in the delta + coboundary span.
inline KerPhiReport ker_phi_dim(GroupContext& ctx) {
    DeltaImage di = delta_image(ctx.pres(), ctx.V(), ctx.W(), ctx.I(), ctx.I_in_V());
    EmbeddingVerdict ev = decide_embedding(ctx);

    KerPhiReport out;
    out.delta_dim = di.dim;
    out.embeds = ev.embeds;
    out.dim = ev.embeds ? 1 : 0;

    if (di.dim > 1)
        throw std::logic_error("ker_phi_dim: Im delta exceeds dim H2(G,I) = 1");
    if (di.dim != out.dim)
        throw std::logic_error("ker_phi_dim: delta route disagrees with the embedding verdict");
    if (di.span.contains(ev.eps) != ev.embeds)
        throw std::logic_error("ker_phi_dim: sign-pattern membership disagrees with the verdict");
    return out;
}

struct H1UReport {
    std::size_t dim_u = 0;
    std::size_t dim_w = 0;
    std::size_t dim_v = 0;
    std::size_t im_delta = 0;
    // dim H1(G,U) is the F2-total; the split between U+ and U- is not
    // computed here.
};

// Computes dim H1(G,U) directly and verifies the exactness identities
//   dim H1(G,W) = dim H1(G,U) - dim H0(G,I)    (sequence 0->U->W->I->0)
//   dim H1(G,W) = dim H1(G,V) + dim Im delta   (sequence 0->I->V->W->0).
inline H1UReport h1_of_U(GroupContext& ctx) {
    H1UReport out;
    out.dim_u = h1(ctx.pres(), ctx.U()).dim;
    out.dim_w = h1(ctx.pres(), ctx.W().mod).dim;
    out.dim_v = h1(ctx.pres(), ctx.V()).dim;
    out.im_delta = delta_image(ctx.pres(), ctx.V(), ctx.W(), ctx.I(), ctx.I_in_V()).dim;

    if (out.dim_w + 1 != out.dim_u)
        throw std::logic_error("h1_of_U: dim H1(G,W) + dim H0(G,I) != dim H1(G,U)");
    if (out.dim_w != out.dim_v + out.im_delta)
        throw std::logic_error("h1_of_U: dim H1(G,W) != dim H1(G,V) + dim Im delta");
    return out;
}

struct ShapiroReport {
    int degree = 0;
    std::size_t g_side = 0;  // H^i(G, V)
    std::size_t h_side = 0;  // H^i(Borel, T)
    bool match = false;
    std::string g_method;
};

// Shapiro's lemma as a numerical cross-check: V is induced from the trivial
// module of the Borel subgroup, so H^i(G,V) = H^i(H,T). Degree 2 computes
// the G side by bar resolution, which is desk-feasible only for q = 3.
inline ShapiroReport shapiro_compare(GroupContext& ctx, int degree,
                                     std::uint64_t guard = kDefaultBarGuard) {
    ShapiroReport out;
    out.degree = degree;
    if (degree == 1) {
        out.g_side = h1(ctx.pres(), ctx.V()).dim;
        out.h_side = h1(ctx.borel_pres(), ctx.borel_T()).dim;
        out.g_method = "presentation";
    } else if (degree == 2) {
        if (ctx.q() != 3)
            throw std::invalid_argument(
                "shapiro_compare: the degree-2 G side is computed by direct bar resolution only "
                "for q = 3");
        out.g_side = h2_bar(ctx.atlas(), ctx.V(), guard).dim;
        out.h_side = h2_bar(ctx.borel(), ctx.borel_T(), guard).dim;
        out.g_method = "bar";
    } else {
        throw std::invalid_argument("shapiro_compare: degree must be 1 or 2");
    }
    out.match = out.g_side == out.h_side;
    return out;
}

// ---------------------------------------------------------------------------
// Paper verification report

struct CheckRow {
    std::string name;
    std::optional<long long> expected;
    std::string provenance;  // "paper", "derived" or "open"
    std::optional<long long> computed;
    std::string note;
    bool pass = true;  // false only when both sides exist and differ

    static CheckRow make(std::string name, std::optional<long long> expected,
                         std::string provenance, std::optional<long long> computed,
                         std::string note = "") {
        CheckRow row{std::move(name), expected, std::move(provenance), computed, std::move(note)};
        row.pass = !expected || !computed || *expected == *computed;
        return row;
    }
};

struct PaperReport {
    std::uint32_t q = 0;
    std::uint64_t group_order = 0;
    std::map<std::string, long long> dims;
    std::string embedding_verdict;
    std::string witness_digest;
    std::size_t closure_size = 0;
    bool h2_borel_guarded = false;
    std::vector<CheckRow> checks;
    std::string error;  // set when the build itself failed

    bool passed() const {
        if (!error.empty()) return false;
        for (const auto& c : checks)
            if (!c.pass && c.provenance != "open") return false;
        return true;
    }
};

inline std::string fnv_digest(const std::string& data) {
    std::uint64_t h = cachedetail::fnv1a(data);
    static const char* hex = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = hex[h & 0xf];
        h >>= 4;
    }
    return out;
}

// Runs the whole ledger for one q. The expected values carry their
// provenance: "paper" rows restate the paper's lemmas, "derived" rows are
// consequences pinned by the exactness chain, "open" rows (q = 1 mod 4
// beyond the confirmed range) report new evidence without an expected value.
inline PaperReport make_paper_report(GroupContext& ctx, std::uint64_t guard = kDefaultBarGuard,
                                     std::uint64_t sampled_spins = 100000) {
    PaperReport rep;
    rep.q = ctx.q();
    std::uint32_t q = ctx.q();
    bool q1mod4 = q % 4 == 1;
    bool confirmed = q <= 17 || q % 4 == 3;  // paper's range: theorem or computer confirmation

    auto push = [&rep](CheckRow row) { rep.checks.push_back(std::move(row)); };
    auto expect_ll = [](long long v) { return std::optional<long long>(v); };
    const std::optional<long long> none;

    rep.group_order = ctx.atlas().size();
    push(CheckRow::make("group_order", expect_ll(static_cast<long long>(psl2_order(q))), "paper",
                        expect_ll(static_cast<long long>(rep.group_order)),
                        "|PSL2(q)| = q(q^2-1)/2"));

    // Module structure (Lemma 8 chain).
    push(CheckRow::make("dim_V", expect_ll(q + 1), "paper", expect_ll((long long)ctx.V().dim())));
    push(CheckRow::make("dim_W", expect_ll(q), "paper", expect_ll((long long)ctx.W().mod.dim())));
    push(CheckRow::make("dim_U", expect_ll(q - 1), "paper", expect_ll((long long)ctx.U().dim())));

    long long h0_v = static_cast<long long>(ctx.I_in_V().dim());
    push(CheckRow::make("dim_H0_V", expect_ll(1), "paper", expect_ll(h0_v),
                        "fixed points of V = all-ones line"));
    long long h0_w = static_cast<long long>(fixed_points(ctx.W().mod).dim());
    rep.dims["H0_W"] = h0_w;
    push(CheckRow::make("dim_H0_W", expect_ll(0), "paper", expect_ll(h0_w),
                        "nonsplitness of 0->U->W->I->0"));
    long long h0_i = static_cast<long long>(fixed_points(ctx.I()).dim());
    rep.dims["H0_I"] = h0_i;
    push(CheckRow::make("dim_H0_I", expect_ll(1), "paper", expect_ll(h0_i)));

    bool exhaustive = ctx.V().dim() <= 14;
    bool unique_minimal = every_spin_contains(ctx.V(), ctx.I_in_V(),
                                              exhaustive ? ScanMode::Exhaustive : ScanMode::Sampled,
                                              sampled_spins);
    push(CheckRow::make("unique_minimal_V", expect_ll(1), "paper", expect_ll(unique_minimal),
                        exhaustive ? "exhaustive scan" : "sampled evidence only"));

    long long endo_u = static_cast<long long>(endomorphism_dim(ctx.U()));
    push(CheckRow::make("endomorphism_dim_U", expect_ll(2), "derived", expect_ll(endo_u),
                        "quadratic endomorphism algebra, U tensor k = U+ (+) U-"));

    if (ctx.U().dim() <= 14) {
        Submodule whole{&ctx.U(), [&] {
                            std::vector<BitVec> b;
                            for (std::size_t i = 0; i < ctx.U().dim(); ++i)
                                b.push_back(BitVec::unit(ctx.U().dim(), i));
                            return b;
                        }()};
        bool irreducible = every_spin_contains(ctx.U(), whole, ScanMode::Exhaustive);
        push(CheckRow::make("U_f2_irreducible", expect_ll(1), "derived", expect_ll(irreducible),
                            "exhaustive spin; fails for q = +-1 mod 8 where U+ and U- are "
                            "F2-rational and U splits"));
    }

    // H^1 dimensions (Lemma 12 and the exactness chain).
    long long h1_i = static_cast<long long>(h1(ctx.pres(), ctx.I()).dim);
    rep.dims["H1_I"] = h1_i;
    push(CheckRow::make("dim_H1_I", expect_ll(0), "paper", expect_ll(h1_i)));

    long long h1_v = static_cast<long long>(h1(ctx.pres(), ctx.V()).dim);
    rep.dims["H1_V"] = h1_v;
    push(CheckRow::make("dim_H1_V", expect_ll(q1mod4 ? 1 : 0), "paper", expect_ll(h1_v)));

    long long h1_w = static_cast<long long>(h1(ctx.pres(), ctx.W().mod).dim);
    rep.dims["H1_W"] = h1_w;
    push(CheckRow::make("dim_H1_W", confirmed ? expect_ll(1) : none, confirmed ? "derived" : "open",
                        expect_ll(h1_w), "H1(G,W) = H1(G,U)/H0(G,I)"));

    H1UReport h1u = h1_of_U(ctx);
    rep.dims["H1_U"] = static_cast<long long>(h1u.dim_u);
    push(CheckRow::make("dim_H1_U", confirmed ? expect_ll(2) : none, confirmed ? "derived" : "open",
                        expect_ll((long long)h1u.dim_u),
                        "F2-total, U+/U- split not computed"));

    // Borel H^2 via Shapiro (Lemma 10).
    if (ctx.borel().size() <= guard) {
        H2Result h2b = h2_bar(ctx.borel(), ctx.borel_T(), guard);
        rep.dims["H2_BorelT"] = static_cast<long long>(h2b.dim);
        push(CheckRow::make("dim_H2_BorelT", expect_ll(q1mod4 ? 1 : 0), "paper",
                            expect_ll((long long)h2b.dim),
                            "equals H2(G,V) by Shapiro; method=bar on the Borel subgroup"));
    } else {
        rep.h2_borel_guarded = true;
        push(CheckRow::make("dim_H2_BorelT", expect_ll(q1mod4 ? 1 : 0), "paper", none,
                            "guard-override required: Borel order " +
                                std::to_string(ctx.borel().size()) + " exceeds guard " +
                                std::to_string(guard)));
    }

    // Lemma 9 spot verification where the bar resolution on G itself fits.
    if (ctx.atlas().size() <= guard) {
        H2Result h2gi = h2_bar(ctx.atlas(), ctx.I(), guard);
        rep.dims["H2_G_I"] = static_cast<long long>(h2gi.dim);
        push(CheckRow::make("dim_H2_G_I", expect_ll(1), "paper", expect_ll((long long)h2gi.dim),
                            "bar resolution on G"));
    }

    // Connecting map, Ker phi, embedding.
    KerPhiReport kp = ker_phi_dim(ctx);
    rep.dims["ImDelta"] = static_cast<long long>(kp.delta_dim);
    rep.dims["KerPhi"] = static_cast<long long>(kp.dim);
    std::optional<long long> expected_delta =
        confirmed ? expect_ll(q1mod4 ? 0 : 1) : none;
    push(CheckRow::make("dim_Im_delta", expected_delta, confirmed ? "derived" : "open",
                        expect_ll((long long)kp.delta_dim), "Im delta = Ker phi"));
    push(CheckRow::make("dim_Ker_phi", expected_delta, confirmed ? "derived" : "open",
                        expect_ll((long long)kp.dim)));

    EmbeddingVerdict ev = decide_embedding(ctx);
    rep.embedding_verdict = ev.embeds ? "EMBEDS" : "NOT_EMBEDS";
    std::optional<long long> expected_embeds = confirmed ? expect_ll(q1mod4 ? 0 : 1) : none;
    push(CheckRow::make("embeds", expected_embeds, confirmed ? "paper" : "open",
                        expect_ll(ev.embeds ? 1 : 0),
                        confirmed ? (q1mod4 ? "Conjecture 3, computer-confirmed range"
                                            : "Theorem 2")
                                  : "new evidence: q = 1 mod 4 beyond the confirmed range"));

    if (ev.embeds) {
        WitnessReport wr = verify_witness(ctx, ev);
        rep.closure_size = wr.closure_size;
        std::string transcript;
        for (const auto& line : wr.transcript) transcript += line + "\n";
        for (const auto& w : ev.witness) transcript += w.to_hex() + "\n";
        rep.witness_digest = fnv_digest(transcript);
        push(CheckRow::make("witness_verified", expect_ll(1), "derived",
                            expect_ll(wr.passed() ? 1 : 0), wr.passed() ? "" : wr.failure));
        push(CheckRow::make("closure_size", expect_ll(2 * (long long)ctx.atlas().size()), "derived",
                            expect_ll((long long)wr.closure_size), "2|PSL2(q)| = |SL2(q)|"));
    }

    // Exactness ledger (criterion: sequences (10) and (12)).
    push(CheckRow::make("exactness_H1W_eq_H1V_plus_ImDelta", expect_ll(1), "derived",
                        expect_ll(h1_w == h1_v + (long long)kp.delta_dim ? 1 : 0)));
    push(CheckRow::make("exactness_H1U_eq_H1W_plus_1", expect_ll(1), "derived",
                        expect_ll((long long)h1u.dim_u == h1_w + 1 ? 1 : 0)));
    push(CheckRow::make("verdict_iff_ImDelta_1", expect_ll(1), "derived",
                        expect_ll((ev.embeds == (kp.delta_dim == 1)) ? 1 : 0)));

    // Shapiro degree 1 by independent code paths.
    ShapiroReport sh = shapiro_compare(ctx, 1, guard);
    push(CheckRow::make("shapiro_deg1_match", expect_ll(1), "derived",
                        expect_ll(sh.match ? 1 : 0),
                        "H1(G,V) = " + std::to_string(sh.g_side) +
                            " vs H1(Borel,T) = " + std::to_string(sh.h_side)));

    return rep;
}

}  // namespace cohomlab
