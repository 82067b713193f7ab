// Quiver representations and their morphisms: the objects and maps of the
// ambient category C.
//
// Hom spaces are kernels of the arrow-commutation system, endomorphism
// radicals come from the trace form (valid for p > dim End, guarded), and
// Krull-Schmidt decomposition peels atlas summands off via the bilinear
// pairing span test.

#pragma once

#include <numeric>

#include "pathalg.hpp"

namespace exstruct {

struct CharacteristicTooSmall : std::runtime_error {
    explicit CharacteristicTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct AtlasIncomplete : std::runtime_error {
    explicit AtlasIncomplete(const std::string& what) : std::runtime_error(what) {}
};

class Representation {
public:
    Representation(const Algebra* alg, std::vector<std::size_t> dims,
                   std::vector<FieldMatrix> arrow_action)
        : alg_(alg), dims_(std::move(dims)), arrow_(std::move(arrow_action)) {
        const Quiver& q = alg_->quiver();
        if (dims_.size() != q.vertices || arrow_.size() != q.arrows.size())
            throw DimensionMismatch("representation shape");
        for (std::size_t a = 0; a < arrow_.size(); ++a)
            if (arrow_[a].rows() != dims_[q.arrows[a].target] ||
                arrow_[a].cols() != dims_[q.arrows[a].source])
                throw DimensionMismatch("arrow matrix shape: " + q.arrows[a].name);
        check_relations();
    }

    static Representation zero(const Algebra* alg) {
        const Quiver& q = alg->quiver();
        std::vector<std::size_t> dims(q.vertices, 0);
        std::vector<FieldMatrix> mats(q.arrows.size(), FieldMatrix(alg->field(), 0, 0));
        return Representation(alg, std::move(dims), std::move(mats));
    }

    const Algebra* algebra() const { return alg_; }
    const Field& field() const { return alg_->field(); }
    const std::vector<std::size_t>& dims() const { return dims_; }
    std::size_t dim(std::size_t v) const { return dims_[v]; }
    std::size_t total_dim() const { return std::accumulate(dims_.begin(), dims_.end(), std::size_t{0}); }
    bool is_zero() const { return total_dim() == 0; }
    const FieldMatrix& arrow(std::size_t a) const { return arrow_[a]; }

    /// matrix of the action of a path, M(target) x M(source)
    FieldMatrix path_action(const Path& p) const {
        FieldMatrix m = FieldMatrix::identity(field(), dims_[p.source]);
        for (std::size_t a : p.arrows) m = arrow_[a] * m;
        return m;
    }

    bool operator==(const Representation& o) const {
        return alg_ == o.alg_ && dims_ == o.dims_ && arrow_ == o.arrow_;
    }

private:
    const Algebra* alg_;
    std::vector<std::size_t> dims_;
    std::vector<FieldMatrix> arrow_;

    void check_relations() const {
        for (const Relation& rel : alg_->relations().relations) {
            if (rel.terms.empty()) continue;
            FieldMatrix acc(field(), 0, 0);
            bool first = true;
            for (const RelationTerm& t : rel.terms) {
                Path p = term_path(t);
                FieldMatrix m = path_action(p).scaled(field().reduce(t.coeff));
                if (first) {
                    acc = m;
                    first = false;
                } else {
                    acc = acc + m;
                }
            }
            if (!acc.is_zero()) throw DimensionMismatch("relation does not vanish on representation");
        }
    }

    Path term_path(const RelationTerm& t) const {
        const Quiver& q = alg_->quiver();
        Path p;
        p.source = q.arrows[q.arrow_index(t.arrow_names.front())].source;
        p.target = p.source;
        for (const auto& an : t.arrow_names) {
            std::size_t ai = q.arrow_index(an);
            p.arrows.push_back(ai);
            p.target = q.arrows[ai].target;
        }
        return p;
    }
};

class RepMorphism {
public:
    RepMorphism(Representation source, Representation target, std::vector<FieldMatrix> vertex_maps)
        : source_(std::move(source)), target_(std::move(target)), at_(std::move(vertex_maps)) {
        const Quiver& q = source_.algebra()->quiver();
        if (at_.size() != q.vertices) throw DimensionMismatch("morphism vertex count");
        for (std::size_t v = 0; v < q.vertices; ++v)
            if (at_[v].rows() != target_.dim(v) || at_[v].cols() != source_.dim(v))
                throw DimensionMismatch("morphism vertex matrix shape");
        for (std::size_t a = 0; a < q.arrows.size(); ++a) {
            const auto& ar = q.arrows[a];
            if (!(target_.arrow(a) * at_[ar.source] - at_[ar.target] * source_.arrow(a)).is_zero())
                throw DimensionMismatch("morphism does not commute with arrow " + ar.name);
        }
    }

    static RepMorphism identity(const Representation& m) {
        std::vector<FieldMatrix> mats;
        for (std::size_t v = 0; v < m.dims().size(); ++v)
            mats.push_back(FieldMatrix::identity(m.field(), m.dim(v)));
        return RepMorphism(m, m, std::move(mats));
    }

    static RepMorphism zero(const Representation& src, const Representation& dst) {
        std::vector<FieldMatrix> mats;
        for (std::size_t v = 0; v < src.dims().size(); ++v)
            mats.emplace_back(src.field(), dst.dim(v), src.dim(v));
        return RepMorphism(src, dst, std::move(mats));
    }

    const Representation& source() const { return source_; }
    const Representation& target() const { return target_; }
    const FieldMatrix& at(std::size_t v) const { return at_[v]; }

    bool is_zero() const {
        for (const auto& m : at_)
            if (!m.is_zero()) return false;
        return true;
    }

    bool operator==(const RepMorphism& o) const { return at_ == o.at_; }

    RepMorphism operator+(const RepMorphism& o) const {
        std::vector<FieldMatrix> mats;
        for (std::size_t v = 0; v < at_.size(); ++v) mats.push_back(at_[v] + o.at_[v]);
        return RepMorphism(source_, target_, std::move(mats));
    }

    RepMorphism operator-(const RepMorphism& o) const {
        std::vector<FieldMatrix> mats;
        for (std::size_t v = 0; v < at_.size(); ++v) mats.push_back(at_[v] - o.at_[v]);
        return RepMorphism(source_, target_, std::move(mats));
    }

    RepMorphism scaled(std::uint64_t c) const {
        std::vector<FieldMatrix> mats;
        for (const auto& m : at_) mats.push_back(m.scaled(c));
        return RepMorphism(source_, target_, std::move(mats));
    }

private:
    Representation source_, target_;
    std::vector<FieldMatrix> at_;
};

/// g after f
inline RepMorphism compose(const RepMorphism& g, const RepMorphism& f) {
    if (!(f.target().dims() == g.source().dims())) throw DimensionMismatch("compose");
    std::vector<FieldMatrix> mats;
    for (std::size_t v = 0; v < f.source().dims().size(); ++v) mats.push_back(g.at(v) * f.at(v));
    return RepMorphism(f.source(), g.target(), std::move(mats));
}

inline bool is_isomorphism(const RepMorphism& f) {
    for (std::size_t v = 0; v < f.source().dims().size(); ++v) {
        const FieldMatrix& m = f.at(v);
        if (m.rows() != m.cols() || rank(m) != m.rows()) return false;
    }
    return true;
}

inline RepMorphism invert(const RepMorphism& f) {
    std::vector<FieldMatrix> mats;
    const Field fld = f.source().field();
    for (std::size_t v = 0; v < f.source().dims().size(); ++v) {
        const FieldMatrix& m = f.at(v);
        if (m.rows() != m.cols()) throw DimensionMismatch("invert: not square");
        RrefResult e = rref(m.hconcat(FieldMatrix::identity(fld, m.rows())));
        if (e.rank != m.rows()) throw DimensionMismatch("invert: singular");
        mats.push_back(e.r.submatrix(0, m.cols(), m.rows(), m.rows()));
    }
    return RepMorphism(f.target(), f.source(), std::move(mats));
}

struct DirectSum {
    Representation sum;
    std::vector<RepMorphism> inclusions;
    std::vector<RepMorphism> projections;
};

inline DirectSum direct_sum(const std::vector<Representation>& parts) {
    if (parts.empty()) throw DimensionMismatch("direct_sum of nothing");
    const Algebra* alg = parts[0].algebra();
    const Field f = parts[0].field();
    const Quiver& q = alg->quiver();
    std::vector<std::size_t> dims(q.vertices, 0);
    for (const auto& p : parts)
        for (std::size_t v = 0; v < q.vertices; ++v) dims[v] += p.dim(v);
    std::vector<FieldMatrix> mats;
    for (std::size_t a = 0; a < q.arrows.size(); ++a) {
        FieldMatrix m(f, 0, 0);
        for (const auto& p : parts) m = block_diag(m, p.arrow(a));
        mats.push_back(std::move(m));
    }
    Representation sum(alg, dims, std::move(mats));

    DirectSum out{sum, {}, {}};
    std::vector<std::size_t> offset(q.vertices, 0);
    for (const auto& p : parts) {
        std::vector<FieldMatrix> inc, prj;
        for (std::size_t v = 0; v < q.vertices; ++v) {
            FieldMatrix i(f, dims[v], p.dim(v));
            FieldMatrix pr(f, p.dim(v), dims[v]);
            for (std::size_t k = 0; k < p.dim(v); ++k) {
                i.at(offset[v] + k, k) = 1;
                pr.at(k, offset[v] + k) = 1;
            }
            inc.push_back(std::move(i));
            prj.push_back(std::move(pr));
        }
        out.inclusions.emplace_back(p, sum, std::move(inc));
        out.projections.emplace_back(sum, p, std::move(prj));
        for (std::size_t v = 0; v < q.vertices; ++v) offset[v] += p.dim(v);
    }
    return out;
}

class HomSpace {
public:
    HomSpace(Representation source, Representation target)
        : source_(std::move(source)), target_(std::move(target)) {
        if (source_.algebra() != target_.algebra()) throw DimensionMismatch("hom: different algebras");
        compute();
    }

    const Representation& source() const { return source_; }
    const Representation& target() const { return target_; }
    std::size_t dim() const { return basis_.size(); }
    const std::vector<RepMorphism>& basis() const { return basis_; }

    /// total coordinate length of a flattened morphism
    std::size_t ambient_dim() const { return ambient_; }

    FieldMatrix flatten(const RepMorphism& f) const {
        FieldMatrix v(source_.field(), ambient_, 1);
        std::size_t off = 0;
        for (std::size_t w = 0; w < source_.dims().size(); ++w) {
            const FieldMatrix& m = f.at(w);
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j) v.at(off++, 0) = m.at(i, j);
        }
        return v;
    }

    RepMorphism unflatten(const FieldMatrix& v) const {
        std::vector<FieldMatrix> mats;
        std::size_t off = 0;
        for (std::size_t w = 0; w < source_.dims().size(); ++w) {
            FieldMatrix m(source_.field(), target_.dim(w), source_.dim(w));
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j) m.at(i, j) = v.at(off++, 0);
            mats.push_back(std::move(m));
        }
        return RepMorphism(source_, target_, std::move(mats));
    }

    /// morphism with the given coordinates in the basis
    RepMorphism element(const std::vector<std::uint64_t>& coords) const {
        if (coords.size() != basis_.size()) throw DimensionMismatch("hom element coords");
        RepMorphism f = RepMorphism::zero(source_, target_);
        for (std::size_t i = 0; i < coords.size(); ++i)
            if (coords[i]) f = f + basis_[i].scaled(coords[i]);
        return f;
    }

    /// coordinates of a morphism in the basis
    std::vector<std::uint64_t> coordinates(const RepMorphism& f) const {
        FieldMatrix b(source_.field(), ambient_, basis_.size());
        for (std::size_t j = 0; j < basis_.size(); ++j) {
            FieldMatrix col = flatten(basis_[j]);
            for (std::size_t i = 0; i < ambient_; ++i) b.at(i, j) = col.at(i, 0);
        }
        auto x = solve(b, flatten(f));
        if (!x) throw DimensionMismatch("morphism outside hom space");
        std::vector<std::uint64_t> out(basis_.size());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = x->at(i, 0);
        return out;
    }

private:
    Representation source_, target_;
    std::vector<RepMorphism> basis_;
    std::size_t ambient_ = 0;

    void compute() {
        const Quiver& q = source_.algebra()->quiver();
        const Field f = source_.field();
        ambient_ = 0;
        std::vector<std::size_t> off(q.vertices);
        for (std::size_t v = 0; v < q.vertices; ++v) {
            off[v] = ambient_;
            ambient_ += target_.dim(v) * source_.dim(v);
        }
        // one row per entry of each arrow constraint N_a phi_u - phi_v M_a = 0
        std::size_t nrows = 0;
        for (std::size_t a = 0; a < q.arrows.size(); ++a)
            nrows += target_.dim(q.arrows[a].target) * source_.dim(q.arrows[a].source);
        FieldMatrix sys(f, nrows, ambient_);
        std::size_t row = 0;
        for (std::size_t a = 0; a < q.arrows.size(); ++a) {
            std::size_t u = q.arrows[a].source, v = q.arrows[a].target;
            const FieldMatrix& na = target_.arrow(a);
            const FieldMatrix& ma = source_.arrow(a);
            for (std::size_t i = 0; i < target_.dim(v); ++i)
                for (std::size_t j = 0; j < source_.dim(u); ++j) {
                    for (std::size_t k = 0; k < target_.dim(u); ++k)
                        sys.at(row, off[u] + k * source_.dim(u) + j) =
                            f.add(sys.at(row, off[u] + k * source_.dim(u) + j), na.at(i, k));
                    for (std::size_t l = 0; l < source_.dim(v); ++l)
                        sys.at(row, off[v] + i * source_.dim(v) + l) =
                            f.sub(sys.at(row, off[v] + i * source_.dim(v) + l), ma.at(l, j));
                    ++row;
                }
        }
        FieldMatrix k = kernel_basis(sys);
        for (std::size_t j = 0; j < k.cols(); ++j) basis_.push_back(unflatten(k.column(j)));
    }
};

inline HomSpace hom_space(const Representation& m, const Representation& n) { return HomSpace(m, n); }

/// Jacobson radical of End(M) as a list of morphisms.  For p > dim M the
/// module trace form computes it; for small p an exact element sweep does,
/// guarded against infeasible enumeration sizes.
inline std::vector<RepMorphism> end_radical(const Representation& m) {
    HomSpace end = hom_space(m, m);
    const Field f = m.field();
    const std::size_t d = end.dim();

    auto to_morphisms = [&](const FieldMatrix& cols) {
        std::vector<RepMorphism> rad;
        for (std::size_t j = 0; j < cols.cols(); ++j) {
            std::vector<std::uint64_t> coords(d);
            for (std::size_t i = 0; i < d; ++i) coords[i] = cols.at(i, j);
            rad.push_back(end.element(coords));
        }
        return rad;
    };

    if (f.p() > m.total_dim()) {
        // trace form on M: nondegenerate modulo the radical for p > dim M
        FieldMatrix gram(f, d, d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                RepMorphism fg = compose(end.basis()[i], end.basis()[j]);
                std::uint64_t tr = 0;
                for (std::size_t v = 0; v < m.dims().size(); ++v)
                    for (std::size_t k = 0; k < m.dim(v); ++k) tr = f.add(tr, fg.at(v).at(k, k));
                gram.at(i, j) = tr;
            }
        return to_morphisms(kernel_basis(gram));
    }

    // small characteristic: f is radical iff the ideal it generates is
    // nilpotent; sweep all elements of End(M)
    double count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= static_cast<double>(f.p());
    if (count > 65536)
        throw CharacteristicTooSmall("endomorphism ring too large for an exact radical at p = " +
                                     std::to_string(f.p()));
    // left multiplication in coordinates for each basis element
    std::vector<FieldMatrix> lmul;
    std::vector<FieldMatrix> rmul;
    for (std::size_t i = 0; i < d; ++i) {
        FieldMatrix l(f, d, d), r(f, d, d);
        for (std::size_t j = 0; j < d; ++j) {
            auto lc = end.coordinates(compose(end.basis()[i], end.basis()[j]));
            auto rc = end.coordinates(compose(end.basis()[j], end.basis()[i]));
            for (std::size_t k = 0; k < d; ++k) {
                l.at(k, j) = lc[k];
                r.at(k, j) = rc[k];
            }
        }
        lmul.push_back(std::move(l));
        rmul.push_back(std::move(r));
    }
    auto close_ideal = [&](const FieldMatrix& seed) {
        FieldMatrix span = canonical_subspace(seed);
        for (;;) {
            FieldMatrix grown = span;
            for (std::size_t i = 0; i < d; ++i) {
                grown = subspace_sum(grown, lmul[i] * span);
                grown = subspace_sum(grown, rmul[i] * span);
            }
            if (grown.cols() == span.cols()) return span;
            span = std::move(grown);
        }
    };
    auto product_span = [&](const FieldMatrix& u, const FieldMatrix& v) {
        FieldMatrix out(f, d, 0);
        for (std::size_t a = 0; a < u.cols(); ++a) {
            FieldMatrix lu(f, d, d);
            for (std::size_t i = 0; i < d; ++i)
                if (u.at(i, a)) lu = lu + lmul[i].scaled(u.at(i, a));
            out = subspace_sum(out, lu * v);
        }
        return out;
    };
    auto is_nilpotent = [&](const FieldMatrix& ideal) {
        FieldMatrix power = ideal;
        for (std::size_t step = 0; step <= d; ++step) {
            if (power.cols() == 0) return true;
            FieldMatrix next = product_span(power, ideal);
            if (next.cols() == power.cols() && subspace_contains(power, next)) return false;
            power = std::move(next);
        }
        return power.cols() == 0;
    };

    FieldMatrix members(f, d, 0);
    for (std::uint64_t code = 1; code < static_cast<std::uint64_t>(count); ++code) {
        FieldMatrix x(f, d, 1);
        std::uint64_t c = code;
        for (std::size_t i = 0; i < d; ++i) {
            x.at(i, 0) = c % f.p();
            c /= f.p();
        }
        if (members.cols() > 0 && in_span(members, x)) continue;
        if (is_nilpotent(close_ideal(x))) members = subspace_sum(members, x);
    }
    return to_morphisms(members);
}

inline bool is_indecomposable(const Representation& m) {
    if (m.is_zero()) return false;
    HomSpace end = hom_space(m, m);
    return end.dim() - end_radical(m).size() == 1;
}

struct Summand {
    std::size_t atlas_index;
    RepMorphism section;     // X_i -> B
    RepMorphism retraction;  // B -> X_i, with retraction . section = id
};

struct Decomposition {
    std::vector<std::size_t> multiplicities;  // per atlas index
    std::vector<Summand> summands;
};

namespace detail {

/// subrepresentation on the kernel of an idempotent endomorphism e, with its
/// inclusion and the splitting B -> ker along im(e)
struct KernelSplit {
    Representation ker;
    RepMorphism inclusion;  // ker -> B
    RepMorphism splitting;  // B -> ker, splitting . inclusion = id
};

inline KernelSplit kernel_of_idempotent(const Representation& b, const RepMorphism& e) {
    const Quiver& q = b.algebra()->quiver();
    const Field f = b.field();
    std::vector<FieldMatrix> kbases;
    std::vector<std::size_t> kdims;
    for (std::size_t v = 0; v < q.vertices; ++v) {
        kbases.push_back(kernel_basis(e.at(v)));
        kdims.push_back(kbases.back().cols());
    }
    std::vector<FieldMatrix> karrows;
    for (std::size_t a = 0; a < q.arrows.size(); ++a) {
        std::size_t u = q.arrows[a].source, v = q.arrows[a].target;
        auto ka = solve_matrix(kbases[v], b.arrow(a) * kbases[u]);
        if (!ka) throw DimensionMismatch("kernel not arrow-stable");
        karrows.push_back(*ka);
    }
    Representation ker(b.algebra(), kdims, std::move(karrows));
    RepMorphism incl(ker, b, kbases);
    // splitting: solve incl . s = 1 - e vertexwise
    std::vector<FieldMatrix> smats;
    for (std::size_t v = 0; v < q.vertices; ++v) {
        FieldMatrix one_minus_e = FieldMatrix::identity(f, b.dim(v)) - e.at(v);
        auto s = solve_matrix(kbases[v], one_minus_e);
        if (!s) throw DimensionMismatch("idempotent splitting failed");
        smats.push_back(*s);
    }
    RepMorphism split(b, ker, std::move(smats));
    return {std::move(ker), std::move(incl), std::move(split)};
}

inline bool in_radical_span(const std::vector<RepMorphism>& rad, const HomSpace& end,
                            const RepMorphism& f) {
    FieldMatrix b(f.source().field(), end.ambient_dim(), rad.size());
    for (std::size_t j = 0; j < rad.size(); ++j) {
        FieldMatrix col = end.flatten(rad[j]);
        for (std::size_t i = 0; i < b.rows(); ++i) b.at(i, j) = col.at(i, 0);
    }
    return in_span(b, end.flatten(f));
}

}  // namespace detail

/// Express B as a direct sum of atlas members.  Throws AtlasIncomplete if a
/// nonzero remainder has no atlas summand.
inline Decomposition krull_schmidt_decompose(const Representation& b,
                                             const std::vector<Representation>& atlas) {
    Decomposition out;
    out.multiplicities.assign(atlas.size(), 0);

    Representation cur = b;
    RepMorphism emb = RepMorphism::identity(b);   // cur -> B
    RepMorphism retr = RepMorphism::identity(b);  // B -> cur

    std::vector<std::vector<RepMorphism>> rads;
    std::vector<HomSpace> ends;
    for (const auto& x : atlas) {
        rads.push_back(end_radical(x));
        ends.emplace_back(x, x);
    }

    while (!cur.is_zero()) {
        bool split_found = false;
        for (std::size_t i = 0; i < atlas.size() && !split_found; ++i) {
            HomSpace in = hom_space(atlas[i], cur);
            HomSpace outh = hom_space(cur, atlas[i]);
            for (std::size_t fi = 0; fi < in.dim() && !split_found; ++fi)
                for (std::size_t gi = 0; gi < outh.dim() && !split_found; ++gi) {
                    RepMorphism gf = compose(outh.basis()[gi], in.basis()[fi]);
                    if (detail::in_radical_span(rads[i], ends[i], gf)) continue;
                    // gf invertible in the local ring End(X_i)
                    RepMorphism h = invert(gf);
                    RepMorphism s = in.basis()[fi];                    // X_i -> cur
                    RepMorphism r = compose(h, outh.basis()[gi]);      // cur -> X_i
                    RepMorphism e = compose(s, r);                     // idempotent on cur
                    auto ks = detail::kernel_of_idempotent(cur, e);
                    out.multiplicities[i] += 1;
                    out.summands.push_back(Summand{i, compose(emb, s), compose(r, retr)});
                    emb = compose(emb, ks.inclusion);
                    retr = compose(ks.splitting, retr);
                    cur = ks.ker;
                    split_found = true;
                }
        }
        if (!split_found)
            throw AtlasIncomplete("no atlas member splits off the remainder (dim " +
                                  std::to_string(cur.total_dim()) + ")");
    }
    return out;
}

}  // namespace exstruct
