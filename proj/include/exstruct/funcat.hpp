// Finite-length modules over Gamma = End(direct sum of the atlas), standing
// in for the category of coherent functors on C.
//
// A GammaModule evaluates the atlas: one space per index, one matrix per hom
// basis element f: X_i -> X_j acting contravariantly M(X_j) -> M(X_i).
// Radical filtrations, composition factors, socles and S-torsion parts are
// computed from the radical subspaces of the CategoryTable.

#pragma once

#include <map>

#include "extconf.hpp"

namespace exstruct {

struct NonIntegralMultiplicity : std::runtime_error {
    explicit NonIntegralMultiplicity(const std::string& what) : std::runtime_error(what) {}
};

/// Hom table of the atlas: bases, radical subspaces, simple-quotient
/// dimensions.  Immutable after construction.
class CategoryTable {
public:
    CategoryTable(ExtCalculator* calc, std::vector<Representation> atlas)
        : calc_(calc), atlas_(std::move(atlas)) {
        const std::size_t n = atlas_.size();
        rad_.resize(n * n);
        d_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (!is_indecomposable(atlas_[i]))
                throw DimensionMismatch("atlas member " + std::to_string(i) + " is decomposable");
            for (std::size_t j = i + 1; j < n; ++j)
                if (isomorphic_members(i, j))
                    throw DimensionMismatch("atlas members " + std::to_string(i) + " and " +
                                            std::to_string(j) + " are isomorphic");
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const HomSpace& h = hom(i, j);
                if (i != j) {
                    rad_[i * n + j] = FieldMatrix::identity(field(), h.dim());
                } else {
                    auto radmors = end_radical(atlas_[i]);
                    FieldMatrix r(field(), h.dim(), radmors.size());
                    for (std::size_t k = 0; k < radmors.size(); ++k) {
                        auto coords = h.coordinates(radmors[k]);
                        for (std::size_t l = 0; l < h.dim(); ++l) r.at(l, k) = coords[l];
                    }
                    rad_[i * n + j] = canonical_subspace(r);
                    d_[i] = h.dim() - radmors.size();
                }
            }
    }

    ExtCalculator* calc() const { return calc_; }
    const Field& field() const { return calc_->algebra()->field(); }
    std::size_t size() const { return atlas_.size(); }
    const std::vector<Representation>& atlas() const { return atlas_; }
    const Representation& member(std::size_t i) const { return atlas_[i]; }

    const HomSpace& hom(std::size_t i, std::size_t j) const {
        return calc_->hom(atlas_[i], atlas_[j]);
    }

    /// radical subspace of Hom(X_i, X_j), columns = coordinates in the hom basis
    const FieldMatrix& radical(std::size_t i, std::size_t j) const {
        return rad_[i * atlas_.size() + j];
    }

    bool is_radical_pair(std::size_t i, std::size_t j, std::size_t basis_idx) const {
        const HomSpace& h = hom(i, j);
        FieldMatrix e(field(), h.dim(), 1);
        e.at(basis_idx, 0) = 1;
        return in_span(radical(i, j), e);
    }

    /// dim of End(X_i) modulo its radical (1 for bricks)
    std::size_t simple_dim(std::size_t i) const { return d_[i]; }

private:
    ExtCalculator* calc_;
    std::vector<Representation> atlas_;
    std::vector<FieldMatrix> rad_;
    std::vector<std::size_t> d_;

    // both indecomposable: isomorphic iff one is a summand of the other
    bool isomorphic_members(std::size_t i, std::size_t j) {
        if (!(atlas_[i].dims() == atlas_[j].dims())) return false;
        const HomSpace& in = calc_->hom(atlas_[i], atlas_[j]);
        const HomSpace& out = calc_->hom(atlas_[j], atlas_[i]);
        auto rad = end_radical(atlas_[i]);
        HomSpace end(atlas_[i], atlas_[i]);
        for (std::size_t a = 0; a < in.dim(); ++a)
            for (std::size_t b = 0; b < out.dim(); ++b)
                if (!detail::in_radical_span(rad, end, compose(out.basis()[b], in.basis()[a])))
                    return true;
        return false;
    }
};

class GammaModule;
struct GammaModuleMap;

/// contravariant finite-dimensional functor on the atlas
class GammaModule {
public:
    GammaModule(const CategoryTable* table, std::vector<std::size_t> dims,
                std::vector<std::vector<FieldMatrix>> actions)
        : table_(table), dims_(std::move(dims)), act_(std::move(actions)) {
        const std::size_t n = table_->size();
        if (dims_.size() != n || act_.size() != n * n) throw DimensionMismatch("gamma module shape");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const auto& blk = act_[i * n + j];
                if (blk.size() != table_->hom(i, j).dim())
                    throw DimensionMismatch("gamma action count");
                for (const auto& m : blk)
                    if (m.rows() != dims_[i] || m.cols() != dims_[j])
                        throw DimensionMismatch("gamma action shape");
            }
    }

    static GammaModule zero(const CategoryTable* table) {
        const std::size_t n = table->size();
        std::vector<std::vector<FieldMatrix>> act(n * n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                act[i * n + j].assign(table->hom(i, j).dim(), FieldMatrix(table->field(), 0, 0));
        return GammaModule(table, std::vector<std::size_t>(n, 0), std::move(act));
    }

    const CategoryTable* table() const { return table_; }
    const Field& field() const { return table_->field(); }
    std::size_t size() const { return dims_.size(); }
    std::size_t dim(std::size_t i) const { return dims_[i]; }
    std::size_t total_dim() const { return std::accumulate(dims_.begin(), dims_.end(), std::size_t{0}); }
    bool is_zero() const { return total_dim() == 0; }

    /// action of the k-th hom basis element of Hom(X_i, X_j): M(X_j) -> M(X_i)
    const FieldMatrix& action(std::size_t i, std::size_t j, std::size_t k) const {
        return act_[i * size() + j][k];
    }

    /// action of an arbitrary coordinate vector in Hom(X_i, X_j)
    FieldMatrix action_of(std::size_t i, std::size_t j, const std::vector<std::uint64_t>& coords) const {
        FieldMatrix m(field(), dims_[i], dims_[j]);
        for (std::size_t k = 0; k < coords.size(); ++k)
            if (coords[k]) m = m + action(i, j, k).scaled(coords[k]);
        return m;
    }

    /// functor axioms: identities and contravariant composition on all basis pairs
    std::vector<std::string> functor_violations() const {
        std::vector<std::string> out;
        const std::size_t n = size();
        for (std::size_t i = 0; i < n; ++i) {
            auto idc = table_->hom(i, i).coordinates(RepMorphism::identity(table_->member(i)));
            if (!(action_of(i, i, idc) == FieldMatrix::identity(field(), dims_[i])))
                out.push_back("M(id) != id at index " + std::to_string(i));
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < n; ++k) {
                    const HomSpace& hij = table_->hom(i, j);
                    const HomSpace& hjk = table_->hom(j, k);
                    const HomSpace& hik = table_->hom(i, k);
                    for (std::size_t a = 0; a < hij.dim(); ++a)
                        for (std::size_t b = 0; b < hjk.dim(); ++b) {
                            auto coords = hik.coordinates(compose(hjk.basis()[b], hij.basis()[a]));
                            FieldMatrix lhs = action_of(i, k, coords);
                            FieldMatrix rhs = action(i, j, a) * action(j, k, b);
                            if (!(lhs == rhs))
                                out.push_back("M(gf) != M(f)M(g) at (" + std::to_string(i) + "," +
                                              std::to_string(j) + "," + std::to_string(k) + ")");
                        }
                }
        return out;
    }

    bool operator==(const GammaModule& o) const { return dims_ == o.dims_ && act_ == o.act_; }

private:
    const CategoryTable* table_;
    std::vector<std::size_t> dims_;
    std::vector<std::vector<FieldMatrix>> act_;  // (i,j) -> per hom basis elem
};

struct GammaModuleMap {
    GammaModule source;
    GammaModule target;
    std::vector<FieldMatrix> at;  // per index, target.dim(i) x source.dim(i)

    GammaModuleMap(GammaModule src, GammaModule dst, std::vector<FieldMatrix> mats)
        : source(std::move(src)), target(std::move(dst)), at(std::move(mats)) {
        const std::size_t n = source.size();
        if (at.size() != n) throw DimensionMismatch("gamma map size");
        for (std::size_t i = 0; i < n; ++i)
            if (at[i].rows() != target.dim(i) || at[i].cols() != source.dim(i))
                throw DimensionMismatch("gamma map shape");
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < source.table()->hom(i, j).dim(); ++k)
                    if (!(at[i] * source.action(i, j, k) == target.action(i, j, k) * at[j]))
                        throw DimensionMismatch("gamma map not natural");
    }

    bool is_zero() const {
        for (const auto& m : at)
            if (!m.is_zero()) return false;
        return true;
    }
};

/// submodule given by per-index subspace bases in the coordinates of the
/// ambient module
struct Submodule {
    std::vector<FieldMatrix> bases;

    std::size_t dim(std::size_t i) const { return bases[i].cols(); }
    std::size_t total_dim() const {
        std::size_t t = 0;
        for (const auto& b : bases) t += b.cols();
        return t;
    }
};

/// representable functor Hom(-, X) restricted to the atlas
inline GammaModule yoneda_module(const CategoryTable& t, const Representation& x) {
    const std::size_t n = t.size();
    std::vector<std::size_t> dims(n);
    for (std::size_t i = 0; i < n; ++i) dims[i] = t.calc()->hom(t.member(i), x).dim();
    std::vector<std::vector<FieldMatrix>> act(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const HomSpace& hij = t.hom(i, j);
            const HomSpace& hjx = t.calc()->hom(t.member(j), x);
            const HomSpace& hix = t.calc()->hom(t.member(i), x);
            for (std::size_t k = 0; k < hij.dim(); ++k) {
                FieldMatrix m(t.field(), dims[i], dims[j]);
                for (std::size_t col = 0; col < dims[j]; ++col) {
                    auto coords = hix.coordinates(compose(hjx.basis()[col], hij.basis()[k]));
                    for (std::size_t r = 0; r < dims[i]; ++r) m.at(r, col) = coords[r];
                }
                act[i * n + j].push_back(std::move(m));
            }
        }
    return GammaModule(&t, std::move(dims), std::move(act));
}

/// Hom(-, y) for y: X -> Y, as a map yoneda(X) -> yoneda(Y)
inline GammaModuleMap yoneda_map(const CategoryTable& t, const RepMorphism& y) {
    GammaModule src = yoneda_module(t, y.source());
    GammaModule dst = yoneda_module(t, y.target());
    std::vector<FieldMatrix> mats;
    for (std::size_t i = 0; i < t.size(); ++i) {
        const HomSpace& hx = t.calc()->hom(t.member(i), y.source());
        const HomSpace& hy = t.calc()->hom(t.member(i), y.target());
        mats.push_back(post_matrix(hx, hy, y));
    }
    return GammaModuleMap(std::move(src), std::move(dst), std::move(mats));
}

struct SubmoduleEmbedding {
    GammaModule module;
    GammaModuleMap inclusion;
};

struct QuotientModule {
    GammaModule module;
    GammaModuleMap projection;
};

/// build the abstract module carried by per-index subspaces; throws if the
/// subspaces are not action-stable
inline SubmoduleEmbedding submodule_from_bases(const GammaModule& m, std::vector<FieldMatrix> bases) {
    const CategoryTable& t = *m.table();
    const std::size_t n = m.size();
    std::vector<std::size_t> dims(n);
    for (std::size_t i = 0; i < n; ++i) {
        bases[i] = canonical_subspace(bases[i]);
        dims[i] = bases[i].cols();
    }
    std::vector<std::vector<FieldMatrix>> act(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < t.hom(i, j).dim(); ++k) {
                auto restricted = solve_matrix(bases[i], m.action(i, j, k) * bases[j]);
                if (!restricted) throw DimensionMismatch("subspaces not action-stable");
                act[i * n + j].push_back(std::move(*restricted));
            }
    GammaModule sub(&t, std::move(dims), std::move(act));
    GammaModuleMap incl(sub, m, std::move(bases));
    return {std::move(sub), std::move(incl)};
}

inline SubmoduleEmbedding kernel(const GammaModuleMap& f) {
    std::vector<FieldMatrix> bases;
    for (std::size_t i = 0; i < f.source.size(); ++i) bases.push_back(kernel_basis(f.at[i]));
    return submodule_from_bases(f.source, std::move(bases));
}

inline SubmoduleEmbedding image(const GammaModuleMap& f) {
    std::vector<FieldMatrix> bases;
    for (std::size_t i = 0; i < f.source.size(); ++i) bases.push_back(image_basis(f.at[i]));
    return submodule_from_bases(f.target, std::move(bases));
}

inline QuotientModule quotient_by(const GammaModule& m, const Submodule& u) {
    const CategoryTable& t = *m.table();
    const std::size_t n = m.size();
    std::vector<QuotientData> qd;
    std::vector<std::size_t> dims(n);
    for (std::size_t i = 0; i < n; ++i) {
        qd.push_back(quotient_basis(u.bases[i], FieldMatrix::identity(m.field(), m.dim(i))));
        dims[i] = qd.back().complement.cols();
    }
    std::vector<std::vector<FieldMatrix>> act(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < t.hom(i, j).dim(); ++k)
                act[i * n + j].push_back(qd[i].projection * m.action(i, j, k) * qd[j].complement);
    GammaModule q(&t, std::move(dims), std::move(act));
    std::vector<FieldMatrix> proj;
    for (std::size_t i = 0; i < n; ++i) proj.push_back(qd[i].projection);
    GammaModuleMap p(m, q, std::move(proj));
    return {std::move(q), std::move(p)};
}

inline QuotientModule cokernel(const GammaModuleMap& f) {
    Submodule img;
    for (std::size_t i = 0; i < f.source.size(); ++i) img.bases.push_back(image_basis(f.at[i]));
    return quotient_by(f.target, img);
}

/// rad M as per-index subspaces of M
inline Submodule radical_submodule(const GammaModule& m) {
    const CategoryTable& t = *m.table();
    const std::size_t n = m.size();
    Submodule out;
    for (std::size_t i = 0; i < n; ++i) {
        FieldMatrix acc(m.field(), m.dim(i), 0);
        for (std::size_t j = 0; j < n; ++j) {
            const FieldMatrix& radc = t.radical(i, j);
            for (std::size_t k = 0; k < radc.cols(); ++k) {
                std::vector<std::uint64_t> coords(t.hom(i, j).dim());
                for (std::size_t l = 0; l < coords.size(); ++l) coords[l] = radc.at(l, k);
                acc = acc.hconcat(image_basis(m.action_of(i, j, coords)));
            }
        }
        out.bases.push_back(canonical_subspace(acc));
    }
    return out;
}

/// strictly decreasing chain M = U_0 > U_1 > ... > 0 of per-index subspaces
/// (ambient coordinates), U_{k+1} = rad U_k
inline std::vector<Submodule> radical_filtration(const GammaModule& m) {
    const CategoryTable& t = *m.table();
    const std::size_t n = m.size();
    std::vector<Submodule> chain;
    Submodule cur;
    for (std::size_t i = 0; i < n; ++i)
        cur.bases.push_back(FieldMatrix::identity(m.field(), m.dim(i)));
    if (m.is_zero()) return chain;
    chain.push_back(cur);
    while (chain.back().total_dim() > 0) {
        const Submodule& u = chain.back();
        Submodule next;
        for (std::size_t i = 0; i < n; ++i) {
            FieldMatrix acc(m.field(), m.dim(i), 0);
            for (std::size_t j = 0; j < n; ++j) {
                const FieldMatrix& radc = t.radical(i, j);
                for (std::size_t k = 0; k < radc.cols(); ++k) {
                    std::vector<std::uint64_t> coords(t.hom(i, j).dim());
                    for (std::size_t l = 0; l < coords.size(); ++l) coords[l] = radc.at(l, k);
                    acc = acc.hconcat(m.action_of(i, j, coords) * u.bases[j]);
                }
            }
            next.bases.push_back(canonical_subspace(acc));
        }
        if (next.total_dim() >= u.total_dim())
            throw DimensionMismatch("radical filtration does not decrease");
        chain.push_back(std::move(next));
        if (chain.back().total_dim() == 0) break;
    }
    return chain;
}

/// multiset of composition factors over atlas indices
inline std::map<std::size_t, std::size_t> composition_factors(const GammaModule& m) {
    std::map<std::size_t, std::size_t> out;
    auto chain = radical_filtration(m);
    for (std::size_t layer = 0; layer + 1 <= chain.size(); ++layer) {
        const Submodule& top = chain[layer];
        std::size_t below_idx = layer + 1;
        for (std::size_t i = 0; i < m.size(); ++i) {
            std::size_t d_top = top.dim(i);
            std::size_t d_below = below_idx < chain.size() ? chain[below_idx].dim(i) : 0;
            std::size_t layer_dim = d_top - d_below;
            if (!layer_dim) continue;
            std::size_t di = m.table()->simple_dim(i);
            if (layer_dim % di)
                throw NonIntegralMultiplicity("layer dim " + std::to_string(layer_dim) +
                                              " not divisible by " + std::to_string(di));
            out[i] += layer_dim / di;
        }
    }
    return out;
}

/// isotypic part of the socle over the index set S
inline Submodule socle_isotypic(const GammaModule& m, const std::vector<bool>& s) {
    const CategoryTable& t = *m.table();
    const std::size_t n = m.size();
    Submodule out;
    for (std::size_t j = 0; j < n; ++j) {
        if (!s[j]) {
            out.bases.push_back(FieldMatrix(m.field(), m.dim(j), 0));
            continue;
        }
        FieldMatrix soc = FieldMatrix::identity(m.field(), m.dim(j));
        for (std::size_t i = 0; i < n; ++i) {
            const FieldMatrix& radc = t.radical(i, j);
            for (std::size_t k = 0; k < radc.cols(); ++k) {
                std::vector<std::uint64_t> coords(t.hom(i, j).dim());
                for (std::size_t l = 0; l < coords.size(); ++l) coords[l] = radc.at(l, k);
                soc = subspace_intersection(soc, kernel_basis(m.action_of(i, j, coords)));
            }
        }
        out.bases.push_back(std::move(soc));
    }
    return out;
}

/// largest submodule with all composition factors in S (fixpoint of socle
/// preimages)
inline Submodule torsion_part(const GammaModule& m, const std::vector<bool>& s) {
    const std::size_t n = m.size();
    Submodule u;
    for (std::size_t i = 0; i < n; ++i) u.bases.push_back(FieldMatrix(m.field(), m.dim(i), 0));
    for (;;) {
        QuotientModule q = quotient_by(m, u);
        Submodule soc = socle_isotypic(q.module, s);
        Submodule next;
        std::size_t before = u.total_dim(), after = 0;
        for (std::size_t i = 0; i < n; ++i) {
            // preimage of soc under the projection: kernel of (quotient by soc) . proj
            QuotientData qd = quotient_basis(soc.bases[i],
                                             FieldMatrix::identity(m.field(), q.module.dim(i)));
            next.bases.push_back(kernel_basis(qd.projection * q.projection.at[i]));
            after += next.bases.back().cols();
        }
        if (after == before) return u;
        u = std::move(next);
    }
}

/// submodule generated by given per-index seed vectors: closure under all
/// basis actions
inline Submodule generated_submodule(const GammaModule& m, const std::vector<FieldMatrix>& seeds) {
    const CategoryTable& t = *m.table();
    const std::size_t n = m.size();
    Submodule u;
    for (std::size_t i = 0; i < n; ++i) u.bases.push_back(canonical_subspace(seeds[i]));
    for (;;) {
        std::size_t before = u.total_dim();
        for (std::size_t i = 0; i < n; ++i) {
            FieldMatrix acc = u.bases[i];
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < t.hom(i, j).dim(); ++k)
                    acc = acc.hconcat(m.action(i, j, k) * u.bases[j]);
            u.bases[i] = canonical_subspace(acc);
        }
        if (u.total_dim() == before) return u;
    }
}

/// natural transformations M -> N, as a basis of maps
inline std::vector<GammaModuleMap> gamma_hom(const GammaModule& m, const GammaModule& n) {
    const CategoryTable& t = *m.table();
    const std::size_t cnt = m.size();
    const Field f = m.field();
    std::vector<std::size_t> off(cnt);
    std::size_t ambient = 0;
    for (std::size_t i = 0; i < cnt; ++i) {
        off[i] = ambient;
        ambient += n.dim(i) * m.dim(i);
    }
    std::vector<FieldMatrix> rows;
    for (std::size_t i = 0; i < cnt; ++i)
        for (std::size_t j = 0; j < cnt; ++j)
            for (std::size_t k = 0; k < t.hom(i, j).dim(); ++k) {
                // phi_i . M(f) = N(f) . phi_j
                const FieldMatrix& ma = m.action(i, j, k);
                const FieldMatrix& na = n.action(i, j, k);
                FieldMatrix sys(f, n.dim(i) * m.dim(j), ambient);
                std::size_t row = 0;
                for (std::size_t r = 0; r < n.dim(i); ++r)
                    for (std::size_t c = 0; c < m.dim(j); ++c) {
                        for (std::size_t l = 0; l < m.dim(i); ++l)
                            sys.at(row, off[i] + r * m.dim(i) + l) =
                                f.add(sys.at(row, off[i] + r * m.dim(i) + l), ma.at(l, c));
                        for (std::size_t l = 0; l < n.dim(j); ++l)
                            sys.at(row, off[j] + l * m.dim(j) + c) =
                                f.sub(sys.at(row, off[j] + l * m.dim(j) + c), na.at(r, l));
                        ++row;
                    }
                rows.push_back(std::move(sys));
            }
    FieldMatrix sys(f, 0, ambient);
    for (const auto& r : rows) sys = sys.vconcat(r);
    FieldMatrix kb = kernel_basis(sys);
    std::vector<GammaModuleMap> out;
    for (std::size_t c = 0; c < kb.cols(); ++c) {
        std::vector<FieldMatrix> mats;
        for (std::size_t i = 0; i < cnt; ++i) {
            FieldMatrix phi(f, n.dim(i), m.dim(i));
            for (std::size_t r = 0; r < n.dim(i); ++r)
                for (std::size_t l = 0; l < m.dim(i); ++l) phi.at(r, l) = kb.at(off[i] + r * m.dim(i) + l, c);
            mats.push_back(std::move(phi));
        }
        out.emplace_back(m, n, std::move(mats));
    }
    return out;
}

inline GammaModule gamma_direct_sum(const GammaModule& a, const GammaModule& b) {
    const CategoryTable& t = *a.table();
    const std::size_t n = a.size();
    std::vector<std::size_t> dims(n);
    std::vector<std::vector<FieldMatrix>> act(n * n);
    for (std::size_t i = 0; i < n; ++i) dims[i] = a.dim(i) + b.dim(i);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < t.hom(i, j).dim(); ++k)
                act[i * n + j].push_back(block_diag(a.action(i, j, k), b.action(i, j, k)));
    return GammaModule(&t, std::move(dims), std::move(act));
}

}  // namespace exstruct
