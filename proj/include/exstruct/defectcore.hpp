// Defects of conflations, the Serre poset of def E, substructures of the
// extriangulated structure, and the brute-force oracle.
//
// The defect of a conflation A -> B -> C is the cokernel of Hom(-, y):
// Hom(-, B) -> Hom(-, C) as a Gamma-module.  It is canonically isomorphic to
// the cyclic submodule generated by the class delta inside the column
// E(-, A); both constructions are built and compared.  Substructures (closed
// subbifunctors of E) correspond to subsets of the simple defects; the
// correspondence is realized by torsion parts in one direction and factor
// supports in the other, and double-checked by exhaustive enumeration at
// small field size.

#pragma once

#include <random>

#include "funcat.hpp"

namespace exstruct {

struct NotASubbifunctor : std::runtime_error {
    explicit NotASubbifunctor(const std::string& what) : std::runtime_error(what) {}
};

struct ClosureViolation : std::runtime_error {
    explicit ClosureViolation(const std::string& what) : std::runtime_error(what) {}
};

struct TooLarge : std::runtime_error {
    explicit TooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct NotFullModuleCategory : std::runtime_error {
    explicit NotFullModuleCategory(const std::string& what) : std::runtime_error(what) {}
};

struct InvariantViolation : std::runtime_error {
    explicit InvariantViolation(const std::string& what) : std::runtime_error(what) {}
};

struct Defect {
    ConflationClass origin;
    GammaModule module;        // coker of Hom(-, y)
    GammaModuleMap projection; // from the module represented by origin.c
    std::map<std::size_t, std::size_t> factors;
};

/// subset of simple-defect indices, canonical (sorted)
struct SerreSubset {
    std::vector<std::size_t> indices;

    bool contains(std::size_t i) const {
        return std::find(indices.begin(), indices.end(), i) != indices.end();
    }
    bool subset_of(const SerreSubset& o) const {
        for (auto i : indices)
            if (!o.contains(i)) return false;
        return true;
    }
    bool operator==(const SerreSubset& o) const { return indices == o.indices; }
};

/// subspace family F(c,a) of E(X_c, X_a) over all atlas pairs
struct Substructure {
    std::vector<FieldMatrix> sub;  // pair (c,a) at c*n+a, canonical column basis
    std::string provenance;

    bool operator==(const Substructure& o) const { return sub == o.sub; }
    std::size_t total_dim() const {
        std::size_t t = 0;
        for (const auto& m : sub) t += m.cols();
        return t;
    }
};

namespace detail {

inline FieldMatrix right_inverse(const FieldMatrix& m) {
    auto r = solve_matrix(m, FieldMatrix::identity(m.field(), m.rows()));
    if (!r) throw DimensionMismatch("matrix has no right inverse");
    return *r;
}

inline bool factors_subset(const std::map<std::size_t, std::size_t>& factors,
                           const SerreSubset& s) {
    for (const auto& [idx, mult] : factors)
        if (mult > 0 && !s.contains(idx)) return false;
    return true;
}

inline bool factors_dominated(const std::map<std::size_t, std::size_t>& small,
                              const std::map<std::size_t, std::size_t>& big) {
    for (const auto& [idx, mult] : small) {
        auto it = big.find(idx);
        if ((it == big.end() ? 0 : it->second) < mult) return false;
    }
    return true;
}

/// all subspaces of F_p^d as canonical column bases, by span-closure sweep
inline std::vector<FieldMatrix> all_subspaces(const Field& f, std::size_t d) {
    double count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= static_cast<double>(f.p());
    if (count > 4096) throw TooLarge("subspace lattice of dimension " + std::to_string(d));
    std::vector<FieldMatrix> vecs;
    for (std::uint64_t code = 1; code < static_cast<std::uint64_t>(count); ++code) {
        FieldMatrix v(f, d, 1);
        std::uint64_t c = code;
        for (std::size_t i = 0; i < d; ++i) {
            v.at(i, 0) = c % f.p();
            c /= f.p();
        }
        vecs.push_back(std::move(v));
    }
    std::vector<FieldMatrix> out{FieldMatrix(f, d, 0)};
    for (std::size_t cur = 0; cur < out.size(); ++cur) {
        for (const auto& v : vecs) {
            if (in_span(out[cur], v)) continue;
            FieldMatrix grown = canonical_subspace(out[cur].hconcat(v));
            bool known = false;
            for (const auto& s : out)
                if (s == grown) {
                    known = true;
                    break;
                }
            if (!known) out.push_back(std::move(grown));
            if (out.size() > 20000) throw TooLarge("too many subspaces");
        }
    }
    return out;
}

/// all vectors of a subspace (coordinates w.r.t. the ambient space)
inline std::vector<FieldMatrix> all_elements(const Field& f, const FieldMatrix& basis) {
    std::vector<FieldMatrix> out;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < basis.cols(); ++i) {
        total *= f.p();
        if (total > 4096) throw TooLarge("subspace element sweep");
    }
    for (std::uint64_t code = 0; code < total; ++code) {
        FieldMatrix coeff(f, basis.cols(), 1);
        std::uint64_t c = code;
        for (std::size_t i = 0; i < basis.cols(); ++i) {
            coeff.at(i, 0) = c % f.p();
            c /= f.p();
        }
        out.push_back(basis * coeff);
    }
    return out;
}

}  // namespace detail

/// seeded deterministic sampler (modular draws, stable across platforms)
class Sampler {
public:
    explicit Sampler(std::uint64_t seed) : rng_(seed) {}
    std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
    std::uint64_t scalar(const Field& f) { return rng_() % f.p(); }
    std::uint64_t nonzero_scalar(const Field& f) { return 1 + rng_() % (f.p() - 1); }

    FieldMatrix vector(const Field& f, std::size_t dim) {
        FieldMatrix v(f, dim, 1);
        for (std::size_t i = 0; i < dim; ++i) v.at(i, 0) = scalar(f);
        return v;
    }

    FieldMatrix nonzero_vector(const Field& f, std::size_t dim) {
        for (;;) {
            FieldMatrix v = vector(f, dim);
            if (!v.is_zero()) return v;
        }
    }

private:
    std::mt19937_64 rng_;
};

class DefectEngine {
public:
    explicit DefectEngine(const CategoryTable* table) : t_(table) {}

    const CategoryTable& table() const { return *t_; }
    ExtCalculator* calc() const { return t_->calc(); }
    const Field& field() const { return t_->field(); }
    std::size_t n() const { return t_->size(); }

    const ExtGroup& ext_pair(std::size_t c, std::size_t a) {
        return calc()->ext(t_->member(c), t_->member(a));
    }

    /// E(-, A) as a Gamma-module, for arbitrary A
    GammaModule column_of(const Representation& a) {
        const std::size_t cnt = n();
        std::vector<std::size_t> dims(cnt);
        for (std::size_t i = 0; i < cnt; ++i) dims[i] = calc()->ext(t_->member(i), a).dim();
        std::vector<std::vector<FieldMatrix>> act(cnt * cnt);
        for (std::size_t i = 0; i < cnt; ++i)
            for (std::size_t j = 0; j < cnt; ++j) {
                const HomSpace& hij = t_->hom(i, j);
                const ExtGroup& ej = calc()->ext(t_->member(j), a);
                const ExtGroup& ei = calc()->ext(t_->member(i), a);
                for (std::size_t k = 0; k < hij.dim(); ++k) {
                    FieldMatrix m(field(), dims[i], dims[j]);
                    for (std::size_t col = 0; col < dims[j]; ++col) {
                        FieldMatrix cls(field(), dims[j], 1);
                        cls.at(col, 0) = 1;
                        FieldMatrix pulled = calc()->pullback_ext(hij.basis()[k], ej, cls);
                        for (std::size_t r = 0; r < dims[i]; ++r) m.at(r, col) = pulled.at(r, 0);
                    }
                    (void)ei;
                    act[i * cnt + j].push_back(std::move(m));
                }
            }
        GammaModule mod(t_, std::move(dims), std::move(act));
        auto bad = mod.functor_violations();
        if (!bad.empty()) throw InvariantViolation("ext column not functorial: " + bad.front());
        return mod;
    }

    /// cached column over an atlas member
    const GammaModule& column(std::size_t a) {
        for (auto& [idx, mod] : columns_)
            if (idx == a) return *mod;
        columns_.emplace_back(a, std::make_unique<GammaModule>(column_of(t_->member(a))));
        return *columns_.back().second;
    }

    /// the natural map Hom(-, C) -> E(-, A), phi |-> phi^* delta
    GammaModuleMap delta_sharp(const ConflationClass& conf) {
        GammaModule yc = yoneda_module(*t_, conf.c);
        GammaModule col = column_of(conf.a);
        const ExtGroup& eg = *conf.group;
        std::vector<FieldMatrix> mats;
        for (std::size_t i = 0; i < n(); ++i) {
            const HomSpace& h = calc()->hom(t_->member(i), conf.c);
            FieldMatrix m(field(), col.dim(i), h.dim());
            for (std::size_t j = 0; j < h.dim(); ++j) {
                FieldMatrix pulled = calc()->pullback_ext(h.basis()[j], eg, conf.delta);
                for (std::size_t r = 0; r < col.dim(i); ++r) m.at(r, j) = pulled.at(r, 0);
            }
            mats.push_back(std::move(m));
        }
        return GammaModuleMap(std::move(yc), std::move(col), std::move(mats));
    }

    Defect defect(const ConflationClass& conf) {
        QuotientModule cok = cokernel(yoneda_map(*t_, conf.y));
        auto factors = composition_factors(cok.module);
        return Defect{conf, cok.module, cok.projection, std::move(factors)};
    }

    /// explicit isomorphism coker Hom(-, y) -> im(delta_sharp); throws if the
    /// two constructions disagree
    GammaModuleMap defect_dual_iso(const Defect& d) {
        GammaModuleMap sharp = delta_sharp(d.origin);
        SubmoduleEmbedding img = image(sharp);
        std::vector<FieldMatrix> mats;
        for (std::size_t i = 0; i < n(); ++i) {
            FieldMatrix r = detail::right_inverse(d.projection.at[i]);
            FieldMatrix to_col = sharp.at[i] * r;
            auto coords = solve_matrix(img.inclusion.at[i], to_col);
            if (!coords) throw InvariantViolation("delta_sharp image misses the defect coset");
            mats.push_back(std::move(*coords));
        }
        GammaModuleMap iso(d.module, img.module, std::move(mats));
        for (std::size_t i = 0; i < n(); ++i)
            if (d.module.dim(i) != img.module.dim(i) || rank(iso.at[i]) != d.module.dim(i))
                throw InvariantViolation("defect and cyclic submodule differ at index " +
                                         std::to_string(i));
        return iso;
    }

    /// both simple-defect computations, asserted equal
    const std::vector<std::size_t>& simple_defects() {
        if (simples_) return *simples_;
        std::vector<std::size_t> by_ext;
        for (std::size_t c = 0; c < n(); ++c) {
            bool hit = false;
            for (std::size_t a = 0; a < n() && !hit; ++a)
                if (ext_pair(c, a).dim() > 0) hit = true;
            if (hit) by_ext.push_back(c);
        }
        std::vector<std::size_t> by_factors;
        {
            std::vector<bool> seen(n(), false);
            for (std::size_t a = 0; a < n(); ++a)
                for (const auto& [idx, mult] : composition_factors(column(a)))
                    if (mult > 0) seen[idx] = true;
            for (std::size_t c = 0; c < n(); ++c)
                if (seen[c]) by_factors.push_back(c);
        }
        if (by_ext != by_factors)
            throw InvariantViolation("simple-defect criteria disagree");
        simples_ = std::move(by_ext);
        return *simples_;
    }

    /// power set of simple_defects, ordered by bitmask
    std::vector<SerreSubset> serre_subsets() {
        const auto& simples = simple_defects();
        std::vector<SerreSubset> out;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << simples.size()); ++mask) {
            SerreSubset s;
            for (std::size_t b = 0; b < simples.size(); ++b)
                if (mask & (std::uint64_t{1} << b)) s.indices.push_back(simples[b]);
            out.push_back(std::move(s));
        }
        return out;
    }

    /// Hasse edges (covering pairs) between serre_subsets() positions
    std::vector<std::pair<std::size_t, std::size_t>> hasse_edges() {
        auto subsets = serre_subsets();
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (std::size_t i = 0; i < subsets.size(); ++i)
            for (std::size_t j = 0; j < subsets.size(); ++j)
                if (subsets[i].indices.size() + 1 == subsets[j].indices.size() &&
                    subsets[i].subset_of(subsets[j]))
                    out.emplace_back(i, j);
        return out;
    }

    Substructure substructure_from_serre(const SerreSubset& s) {
        std::vector<bool> flags(n(), false);
        for (auto i : s.indices) flags[i] = true;
        Substructure f;
        f.sub.resize(n() * n(), FieldMatrix(field(), 0, 0));
        for (std::size_t a = 0; a < n(); ++a) {
            Submodule tor = torsion_part(column(a), flags);
            for (std::size_t c = 0; c < n(); ++c) f.sub[c * n() + a] = tor.bases[c];
        }
        std::uint64_t mask = 0;
        for (std::size_t b = 0; b < s.indices.size(); ++b) mask |= std::uint64_t{1} << s.indices[b];
        f.provenance = "from_serre:" + std::to_string(mask);
        return f;
    }

    std::vector<std::string> stability_violations(const Substructure& f) {
        std::vector<std::string> out;
        const std::size_t cnt = n();
        if (f.sub.size() != cnt * cnt)
            throw NotASubbifunctor("family must give one subspace per ordered atlas pair");
        for (std::size_t c = 0; c < cnt; ++c)
            for (std::size_t a = 0; a < cnt; ++a) {
                const FieldMatrix& sub = f.sub[c * cnt + a];
                if (sub.rows() != ext_pair(c, a).dim())
                    throw NotASubbifunctor("subspace shape mismatch at (" + std::to_string(c) +
                                           "," + std::to_string(a) + ")");
                if (sub.cols() == 0) continue;
                // pushouts along f: X_a -> X_a'
                for (std::size_t a2 = 0; a2 < cnt; ++a2) {
                    const HomSpace& h = t_->hom(a, a2);
                    for (std::size_t k = 0; k < h.dim(); ++k)
                        for (std::size_t col = 0; col < sub.cols(); ++col) {
                            FieldMatrix pushed =
                                calc()->pushout_ext(h.basis()[k], ext_pair(c, a), sub.column(col));
                            if (!in_span(f.sub[c * cnt + a2], pushed))
                                out.push_back("pushout escapes F at (" + std::to_string(c) + "," +
                                              std::to_string(a) + ")->(" + std::to_string(c) + "," +
                                              std::to_string(a2) + ")");
                        }
                }
                // pullbacks along g: X_c' -> X_c
                for (std::size_t c2 = 0; c2 < cnt; ++c2) {
                    const HomSpace& h = t_->hom(c2, c);
                    for (std::size_t k = 0; k < h.dim(); ++k)
                        for (std::size_t col = 0; col < sub.cols(); ++col) {
                            FieldMatrix pulled =
                                calc()->pullback_ext(h.basis()[k], ext_pair(c, a), sub.column(col));
                            if (!in_span(f.sub[c2 * cnt + a], pulled))
                                out.push_back("pullback escapes F at (" + std::to_string(c) + "," +
                                              std::to_string(a) + ")->(" + std::to_string(c2) +
                                              "," + std::to_string(a) + ")");
                        }
                }
            }
        return out;
    }

    SerreSubset serre_from_substructure(const Substructure& f) {
        auto bad = stability_violations(f);
        if (!bad.empty()) throw NotASubbifunctor(bad.front());
        std::vector<bool> seen(n(), false);
        for (std::size_t a = 0; a < n(); ++a) {
            const GammaModule& col = column(a);
            std::vector<FieldMatrix> seeds;
            for (std::size_t c = 0; c < n(); ++c) seeds.push_back(f.sub[c * n() + a]);
            Submodule gen = generated_submodule(col, seeds);
            SubmoduleEmbedding emb = submodule_from_bases(col, gen.bases);
            for (const auto& [idx, mult] : composition_factors(emb.module))
                if (mult > 0) seen[idx] = true;
        }
        SerreSubset s;
        for (std::size_t c = 0; c < n(); ++c)
            if (seen[c]) s.indices.push_back(c);
        return s;
    }

    /// is the class cls in E(c_rep, k_rep) inside F, after decomposing both
    /// arguments into the atlas?
    bool class_in(const Substructure& f, const Representation& c_rep, const Representation& k_rep,
                  const FieldMatrix& cls) {
        const ExtGroup& eg = calc()->ext(c_rep, k_rep);
        Decomposition dc = krull_schmidt_decompose(c_rep, t_->atlas());
        Decomposition dk = krull_schmidt_decompose(k_rep, t_->atlas());
        for (const auto& sc : dc.summands)
            for (const auto& sk : dk.summands) {
                // component in E(X_c, X_k): pull back along the section of C,
                // push out along the retraction of K
                FieldMatrix part = calc()->pullback_ext(sc.section, eg, cls);
                const ExtGroup& eg2 = calc()->ext(t_->member(sc.atlas_index), k_rep);
                FieldMatrix comp = calc()->pushout_ext(sk.retraction, eg2, part);
                if (!in_span(f.sub[sc.atlas_index * n() + sk.atlas_index], comp)) return false;
            }
        return true;
    }

    /// a random conflation over a random atlas pair with nonzero class inside
    /// the given substructure; nullopt if F has no nonzero classes
    std::optional<ConflationClass> sample_conflation(const Substructure& f, Sampler& rng) {
        std::vector<std::size_t> nonzero;
        for (std::size_t k = 0; k < f.sub.size(); ++k)
            if (f.sub[k].cols() > 0) nonzero.push_back(k);
        if (nonzero.empty()) return std::nullopt;
        std::size_t k = nonzero[rng.pick(nonzero.size())];
        std::size_t c = k / n(), a = k % n();
        const ExtGroup& eg = ext_pair(c, a);
        FieldMatrix cls = f.sub[k] * rng.nonzero_vector(field(), f.sub[k].cols());
        if (cls.is_zero()) cls = f.sub[k].column(0);
        return calc()->realize(eg, cls);
    }

    Substructure full_substructure() {
        Substructure f;
        f.sub.resize(n() * n(), FieldMatrix(field(), 0, 0));
        for (std::size_t c = 0; c < n(); ++c)
            for (std::size_t a = 0; a < n(); ++a)
                f.sub[c * n() + a] = FieldMatrix::identity(field(), ext_pair(c, a).dim());
        f.provenance = "full";
        return f;
    }

    /// composite of two composable deflations: inner.c must equal outer.b;
    /// returns the conflation ker(y yy') -> B' -> C with extracted class
    ConflationClass compose_deflations(const ConflationClass& outer, const ConflationClass& inner) {
        if (!(inner.c == outer.b)) throw DimensionMismatch("deflations not composable");
        RepMorphism total = compose(outer.y, inner.y);  // B' -> C
        SubRep ker = kernel_subrep(total);
        const ExtGroup& eg = calc()->ext(outer.c, ker.rep);
        FieldMatrix cls = calc()->extract_class(eg, ker.inclusion, total);
        return ConflationClass{&eg,       cls,           ker.rep, inner.b,
                               outer.c,   ker.inclusion, total};
    }

    /// the four-term sequence 0 -> ker f -> L -> M -> N -> 0 for a composable
    /// pair of deflations, where L, M, N are the defects of the inner,
    /// composite and outer deflation
    struct StepThreeResult {
        bool exact = false;
        bool factor_bound = false;
        std::vector<std::string> notes;
        bool ok() const { return exact && factor_bound; }
    };

    StepThreeResult check_step3(const ConflationClass& outer, const ConflationClass& inner) {
        StepThreeResult res;
        RepMorphism total = compose(outer.y, inner.y);
        QuotientModule l = cokernel(yoneda_map(*t_, inner.y));
        QuotientModule m = cokernel(yoneda_map(*t_, total));
        QuotientModule nq = cokernel(yoneda_map(*t_, outer.y));
        GammaModuleMap fmap = induced_cokernel_map(l, m, outer.y);
        GammaModuleMap gmap = induced_cokernel_map(m, nq, RepMorphism::identity(outer.c));
        res.exact = true;
        for (std::size_t i = 0; i < n(); ++i) {
            if (!subspace_equal(image_basis(fmap.at[i]), kernel_basis(gmap.at[i]))) {
                res.exact = false;
                res.notes.push_back("not exact at M, index " + std::to_string(i));
            }
            if (rank(gmap.at[i]) != nq.module.dim(i)) {
                res.exact = false;
                res.notes.push_back("M -> N not surjective at index " + std::to_string(i));
            }
        }
        auto fl = composition_factors(l.module);
        auto fn = composition_factors(nq.module);
        for (const auto& [idx, mult] : fn) fl[idx] += mult;
        res.factor_bound = detail::factors_dominated(composition_factors(m.module), fl);
        if (!res.factor_bound) res.notes.push_back("factors(M) exceed factors(L) + factors(N)");
        return res;
    }

    /// map between cokernels of Hom(-, y1) and Hom(-, y2) induced by
    /// post-composition with g: target(y1) -> target(y2); requires
    /// g . y1 to factor through y2
    GammaModuleMap induced_cokernel_map(const QuotientModule& src, const QuotientModule& dst,
                                        const RepMorphism& g) {
        std::vector<FieldMatrix> mats;
        for (std::size_t i = 0; i < n(); ++i) {
            const HomSpace& hsrc = calc()->hom(t_->member(i), g.source());
            const HomSpace& hdst = calc()->hom(t_->member(i), g.target());
            FieldMatrix post = post_matrix(hsrc, hdst, g);
            // well-defined: post must carry ker(src proj) into ker(dst proj)
            FieldMatrix moved = post * kernel_basis(src.projection.at[i]);
            if (!subspace_contains(kernel_basis(dst.projection.at[i]), moved))
                throw InvariantViolation("induced cokernel map not well-defined");
            mats.push_back(dst.projection.at[i] * post *
                           detail::right_inverse(src.projection.at[i]));
        }
        return GammaModuleMap(src.module, dst.module, std::move(mats));
    }

    struct ClosureReport {
        std::size_t stability_checks = 0;
        std::size_t composition_samples = 0;
        std::size_t step3_samples = 0;
        std::vector<std::string> notes;
        bool ok = true;
    };

    /// (i) exhaustive stability, (ii) sampled deflation-composition closure,
    /// (iii) sampled four-term exactness
    ClosureReport verify_closed(const Substructure& f, std::size_t samples, std::uint64_t seed) {
        ClosureReport rep;
        auto bad = stability_violations(f);
        rep.stability_checks = n() * n();
        if (!bad.empty()) throw NotASubbifunctor(bad.front());
        SerreSubset serre = serre_from_substructure(f);
        Sampler rng(seed);
        for (std::size_t s = 0; s < samples; ++s) {
            auto outer = sample_conflation(f, rng);
            if (!outer) break;  // F = 0: every F-deflation is a split epi
            auto inner = sample_inner_conflation(f, *outer, rng);
            if (!inner) continue;
            ConflationClass composite = compose_deflations(*outer, *inner);
            ++rep.composition_samples;
            Defect d = defect(composite);
            if (!detail::factors_subset(d.factors, serre)) {
                rep.ok = false;
                throw ClosureViolation("composite deflation leaves F (sample " +
                                       std::to_string(s) + ")");
            }
            if (!class_in(f, composite.c, composite.a, composite.delta)) {
                rep.ok = false;
                throw ClosureViolation("composite class not a member of F (sample " +
                                       std::to_string(s) + ")");
            }
            auto st = check_step3(*outer, *inner);
            ++rep.step3_samples;
            if (!st.ok()) {
                rep.ok = false;
                for (auto& note : st.notes) rep.notes.push_back(note);
                throw ClosureViolation("four-term sequence failed: " + st.notes.front());
            }
        }
        return rep;
    }

    /// a random F-conflation over the middle term of an outer conflation
    std::optional<ConflationClass> sample_inner_conflation(const Substructure& f,
                                                           const ConflationClass& outer,
                                                           Sampler& rng) {
        Decomposition db = krull_schmidt_decompose(outer.b, t_->atlas());
        std::size_t a2 = rng.pick(n());
        const ExtGroup& eg = calc()->ext(outer.b, t_->member(a2));
        FieldMatrix cls = eg.zero_class();
        for (const auto& sm : db.summands) {
            const FieldMatrix& sub = f.sub[sm.atlas_index * n() + a2];
            if (sub.cols() == 0) continue;
            FieldMatrix comp = sub * rng.vector(field(), sub.cols());
            const ExtGroup& egc = ext_pair(sm.atlas_index, a2);
            cls = cls + calc()->pullback_ext(sm.retraction, egc, comp);
        }
        return calc()->realize(eg, cls);
    }

    /// all stability-and-composition-closed subspace families, by brute force
    std::vector<Substructure> enumerate_substructures_oracle() {
        if (field().p() > 3) throw TooLarge("oracle requires p <= 3");
        std::size_t total = 0;
        for (std::size_t c = 0; c < n(); ++c)
            for (std::size_t a = 0; a < n(); ++a) total += ext_pair(c, a).dim();
        if (total > 12) throw TooLarge("oracle requires total Ext dimension <= 12");

        std::vector<std::vector<FieldMatrix>> lattices;
        double families = 1;
        for (std::size_t c = 0; c < n(); ++c)
            for (std::size_t a = 0; a < n(); ++a) {
                lattices.push_back(detail::all_subspaces(field(), ext_pair(c, a).dim()));
                families *= static_cast<double>(lattices.back().size());
            }
        if (families > 1 << 20) throw TooLarge("too many candidate families");

        std::vector<Substructure> out;
        std::vector<std::size_t> idx(lattices.size(), 0);
        for (;;) {
            Substructure cand;
            cand.provenance = "oracle";
            for (std::size_t k = 0; k < lattices.size(); ++k) cand.sub.push_back(lattices[k][idx[k]]);
            if (stability_violations(cand).empty() && composition_closed_exhaustive(cand))
                out.push_back(cand);
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == lattices[k].size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
        return out;
    }

    /// exhaustive deflation-composition closure over all elements of F
    bool composition_closed_exhaustive(const Substructure& f) {
        for (std::size_t c = 0; c < n(); ++c)
            for (std::size_t a = 0; a < n(); ++a) {
                const FieldMatrix& sub = f.sub[c * n() + a];
                if (sub.cols() == 0) continue;
                for (const auto& cls : detail::all_elements(field(), sub)) {
                    if (cls.is_zero()) continue;
                    ConflationClass outer = realize_cached(c, a, cls);
                    Decomposition db = krull_schmidt_decompose(outer.b, t_->atlas());
                    for (std::size_t a2 = 0; a2 < n(); ++a2) {
                        if (!inner_sweep(f, outer, db, a2)) return false;
                    }
                }
            }
        return true;
    }

    struct RoundtripReport {
        std::size_t serre_count = 0;
        std::size_t oracle_count = 0;
        bool serre_roundtrip = true;
        bool oracle_roundtrip = true;
        bool monotone = true;
        bool posets_isomorphic = true;
        std::vector<std::string> notes;
        bool ok() const {
            return serre_roundtrip && oracle_roundtrip && monotone && posets_isomorphic;
        }
    };

    /// serre -> substructure -> serre is the identity; oracle families (when
    /// feasible) biject with the Serre power set; both maps are monotone
    RoundtripReport theorem_roundtrip() {
        RoundtripReport rep;
        auto subsets = serre_subsets();
        rep.serre_count = subsets.size();
        std::vector<Substructure> from_serre;
        for (const auto& s : subsets) {
            Substructure f = substructure_from_serre(s);
            SerreSubset back = serre_from_substructure(f);
            if (!(back == s)) {
                rep.serre_roundtrip = false;
                rep.notes.push_back("round trip moved a Serre subset");
            }
            from_serre.push_back(std::move(f));
        }
        for (std::size_t i = 0; i < subsets.size(); ++i)
            for (std::size_t j = 0; j < subsets.size(); ++j)
                if (subsets[i].subset_of(subsets[j])) {
                    for (std::size_t k = 0; k < from_serre[i].sub.size(); ++k)
                        if (!subspace_contains(from_serre[j].sub[k], from_serre[i].sub[k])) {
                            rep.monotone = false;
                            rep.notes.push_back("F(-) not monotone");
                        }
                }
        bool oracle_feasible = true;
        std::vector<Substructure> oracle;
        try {
            oracle = enumerate_substructures_oracle();
        } catch (const TooLarge&) {
            oracle_feasible = false;
        }
        if (oracle_feasible) {
            rep.oracle_count = oracle.size();
            if (oracle.size() != from_serre.size()) {
                rep.posets_isomorphic = false;
                rep.notes.push_back("oracle count differs from Serre count");
            }
            for (const auto& f : oracle) {
                bool found = false;
                for (const auto& g : from_serre)
                    if (f == g) found = true;
                if (!found) {
                    rep.posets_isomorphic = false;
                    rep.notes.push_back("oracle family missing from the Serre construction");
                }
                Substructure back = substructure_from_serre(serre_from_substructure(f));
                if (!(back == f)) {
                    rep.oracle_roundtrip = false;
                    rep.notes.push_back("F(def F) != F for an oracle family");
                }
            }
        } else {
            rep.oracle_count = 0;
        }
        return rep;
    }

    struct ExactStructureEntry {
        SerreSubset serre;
        Substructure substructure;
        std::vector<std::size_t> conflation_dims;  // dim F(c,a) per pair
        bool maximal = false;
    };

    struct ExactStructureReport {
        std::vector<ExactStructureEntry> entries;
        bool emax_is_full = false;
    };

    /// the poset of relative exact structures; requires the atlas to exhaust
    /// the indecomposables of the ambient module category
    ExactStructureReport exact_structure_report(bool full_module_category) {
        if (!full_module_category)
            throw NotFullModuleCategory("atlas not flagged as a complete list of indecomposables");
        ExactStructureReport rep;
        const auto& simples = simple_defects();
        for (const auto& s : serre_subsets()) {
            ExactStructureEntry e;
            e.serre = s;
            e.substructure = substructure_from_serre(s);
            for (const auto& m : e.substructure.sub) e.conflation_dims.push_back(m.cols());
            e.maximal = s.indices.size() == simples.size();
            rep.entries.push_back(std::move(e));
        }
        // the ambient abelian structure is the unique maximal entry
        Substructure full = full_substructure();
        for (auto& e : rep.entries)
            if (e.maximal) rep.emax_is_full = e.substructure == full;
        return rep;
    }

    /// is the deflation of a conflation radical (no atlas summand of B maps
    /// onto C split)?
    bool deflation_is_radical(const ConflationClass& conf) {
        Decomposition db = krull_schmidt_decompose(conf.b, t_->atlas());
        Decomposition dc = krull_schmidt_decompose(conf.c, t_->atlas());
        for (const auto& sb : db.summands)
            for (const auto& sc : dc.summands) {
                if (!(t_->member(sb.atlas_index).dims() == t_->member(sc.atlas_index).dims()))
                    continue;
                if (sb.atlas_index != sc.atlas_index) continue;
                const Representation& x = t_->member(sb.atlas_index);
                RepMorphism comp = compose(sc.retraction, compose(conf.y, sb.section));
                auto rad = end_radical(x);
                HomSpace end(x, x);
                if (!detail_is_radical(rad, end, comp)) return false;
            }
        return true;
    }

private:
    const CategoryTable* t_;
    std::vector<std::pair<std::size_t, std::unique_ptr<GammaModule>>> columns_;
    std::optional<std::vector<std::size_t>> simples_;
    std::vector<std::pair<std::tuple<std::size_t, std::size_t, std::vector<std::uint64_t>>,
                          std::unique_ptr<ConflationClass>>>
        realize_cache_;

    static bool detail_is_radical(const std::vector<RepMorphism>& rad, const HomSpace& end,
                                  const RepMorphism& f) {
        return exstruct::detail::in_radical_span(rad, end, f);
    }

    ConflationClass realize_cached(std::size_t c, std::size_t a, const FieldMatrix& cls) {
        std::vector<std::uint64_t> key;
        for (std::size_t i = 0; i < cls.rows(); ++i) key.push_back(cls.at(i, 0));
        for (auto& [k, conf] : realize_cache_)
            if (std::get<0>(k) == c && std::get<1>(k) == a && std::get<2>(k) == key) return *conf;
        ConflationClass conf = calc()->realize(ext_pair(c, a), cls);
        realize_cache_.emplace_back(std::make_tuple(c, a, key),
                                    std::make_unique<ConflationClass>(conf));
        return conf;
    }

    /// exhaustive inner sweep for composition closure: all F-classes over the
    /// middle term with kernel in a fixed atlas slot
    bool inner_sweep(const Substructure& f, const ConflationClass& outer, const Decomposition& db,
                     std::size_t a2) {
        const ExtGroup& eg = calc()->ext(outer.b, t_->member(a2));
        // enumerate tuples of component classes, one per summand of B
        std::vector<std::vector<FieldMatrix>> options;
        for (const auto& sm : db.summands)
            options.push_back(detail::all_elements(field(), f.sub[sm.atlas_index * n() + a2]));
        std::vector<std::size_t> idx(options.size(), 0);
        for (;;) {
            FieldMatrix cls = eg.zero_class();
            bool nonzero = false;
            for (std::size_t s = 0; s < options.size(); ++s) {
                const FieldMatrix& comp = options[s][idx[s]];
                if (comp.is_zero()) continue;
                nonzero = true;
                const ExtGroup& egc = ext_pair(db.summands[s].atlas_index, a2);
                cls = cls + calc()->pullback_ext(db.summands[s].retraction, egc, comp);
            }
            if (nonzero) {
                ConflationClass inner = calc()->realize(eg, cls);
                ConflationClass composite = compose_deflations(outer, inner);
                if (!class_in(f, composite.c, composite.a, composite.delta)) return false;
            }
            std::size_t k = 0;
            while (k < idx.size() && ++idx[k] == options[k].size()) idx[k++] = 0;
            if (k == idx.size()) break;
        }
        return true;
    }
};

}  // namespace exstruct
