// Bound quiver algebras A = F_p Q / I.
//
// The ideal is handled degreewise inside the space of paths of length <= N
// (N = user-supplied nilpotency bound): I is spanned by all u*rel*v
// pre/post-compositions, the quotient basis is a monomial one (actual paths,
// picked greedily in length-then-enumeration order), and admissibility is
// certified by checking that every path of length exactly N lies in the
// ideal span.

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "field.hpp"

namespace exstruct {

struct NotAdmissible : std::runtime_error {
    explicit NotAdmissible(const std::string& what) : std::runtime_error(what) {}
};

struct NotHomogeneousRelation : std::runtime_error {
    explicit NotHomogeneousRelation(const std::string& what) : std::runtime_error(what) {}
};

struct Arrow {
    std::string name;
    std::size_t source;
    std::size_t target;
};

struct Quiver {
    std::size_t vertices = 0;
    std::vector<Arrow> arrows;

    void validate() const {
        std::map<std::string, int> seen;
        for (const auto& a : arrows) {
            if (a.source >= vertices || a.target >= vertices)
                throw DimensionMismatch("arrow endpoint out of range: " + a.name);
            if (++seen[a.name] > 1) throw DimensionMismatch("duplicate arrow name: " + a.name);
        }
    }

    std::size_t arrow_index(const std::string& name) const {
        for (std::size_t i = 0; i < arrows.size(); ++i)
            if (arrows[i].name == name) return i;
        throw DimensionMismatch("unknown arrow: " + name);
    }
};

/// A path is a list of arrow indices in diagram order: the path {a, b}
/// traverses a first, then b, so target(a) == source(b).
struct Path {
    std::size_t source = 0;
    std::size_t target = 0;
    std::vector<std::size_t> arrows;  // empty = idempotent e_source

    std::size_t length() const { return arrows.size(); }
    bool operator==(const Path& o) const {
        return source == o.source && arrows == o.arrows;
    }
    bool operator<(const Path& o) const {
        if (arrows.size() != o.arrows.size()) return arrows.size() < o.arrows.size();
        if (source != o.source) return source < o.source;
        return arrows < o.arrows;
    }
};

struct RelationTerm {
    std::int64_t coeff;
    std::vector<std::string> arrow_names;
};

struct Relation {
    std::vector<RelationTerm> terms;
};

struct RelationSet {
    std::vector<Relation> relations;
    std::size_t nilpotency_bound = 1;
};

/// The finite-dimensional quotient algebra, with a monomial basis of
/// normal-form paths and a closed multiplication table.
class Algebra {
public:
    Algebra(Field field, Quiver quiver, RelationSet relations)
        : field_(field), quiver_(std::move(quiver)), relations_(std::move(relations)) {
        quiver_.validate();
        build();
    }

    const Field& field() const { return field_; }
    const Quiver& quiver() const { return quiver_; }
    const RelationSet& relations() const { return relations_; }

    std::size_t dim() const { return basis_.size(); }
    const std::vector<Path>& basis() const { return basis_; }

    /// index of the idempotent e_v in the basis
    std::size_t idempotent(std::size_t v) const { return idempotent_[v]; }

    /// basis indices of paths from s to t
    const std::vector<std::size_t>& block(std::size_t s, std::size_t t) const {
        return blocks_[s * quiver_.vertices + t];
    }

    /// product basis_i followed by basis_j, expanded in the basis
    const std::vector<std::pair<std::size_t, std::uint64_t>>& mult(std::size_t i, std::size_t j) const {
        return table_[i * basis_.size() + j];
    }

    /// reduce an arbitrary path (length <= 2N) to its basis expansion
    std::vector<std::pair<std::size_t, std::uint64_t>> reduce_path(const Path& p) const {
        std::vector<std::pair<std::size_t, std::uint64_t>> out;
        if (p.length() >= relations_.nilpotency_bound) return out;  // in the ideal
        auto it = path_index_.find(p);
        if (it == path_index_.end()) throw DimensionMismatch("reduce_path: unknown path");
        std::size_t bk = block_of_[it->second];
        std::size_t pos = pos_in_block_[it->second];
        const FieldMatrix& red = reduction_[bk];
        for (std::size_t b = 0; b < red.rows(); ++b) {
            std::uint64_t c = red.at(b, pos);
            if (c) out.emplace_back(block_basis_[bk][b], c);
        }
        return out;
    }

private:
    Field field_;
    Quiver quiver_;
    RelationSet relations_;

    std::vector<Path> all_paths_;                       // length <= N, enumeration order
    std::map<Path, std::size_t> path_index_;
    std::vector<std::size_t> block_of_, pos_in_block_;  // per path
    std::vector<std::vector<std::size_t>> block_paths_; // per block: path ids
    std::vector<std::vector<std::size_t>> block_basis_; // per block: basis ids (global)
    std::vector<FieldMatrix> reduction_;                // per block: basis coords of each path
    std::vector<Path> basis_;
    std::vector<std::size_t> idempotent_;
    std::vector<std::vector<std::size_t>> blocks_;      // (s,t) -> basis indices
    std::vector<std::vector<std::pair<std::size_t, std::uint64_t>>> table_;

    void build() {
        const std::size_t n = quiver_.vertices;
        const std::size_t N = relations_.nilpotency_bound;
        if (N < 1) throw NotAdmissible("nilpotency bound must be >= 1");
        validate_relations();

        // enumerate paths of length <= N, by length then source then arrows
        std::vector<std::vector<Path>> by_len(N + 1);
        for (std::size_t v = 0; v < n; ++v) by_len[0].push_back(Path{v, v, {}});
        for (std::size_t d = 1; d <= N; ++d)
            for (const Path& p : by_len[d - 1])
                for (std::size_t a = 0; a < quiver_.arrows.size(); ++a)
                    if (quiver_.arrows[a].source == p.target) {
                        Path q = p;
                        q.arrows.push_back(a);
                        q.target = quiver_.arrows[a].target;
                        by_len[d].push_back(std::move(q));
                    }
        for (auto& lv : by_len)
            for (auto& p : lv) {
                path_index_[p] = all_paths_.size();
                all_paths_.push_back(p);
            }

        block_paths_.assign(n * n, {});
        block_of_.assign(all_paths_.size(), 0);
        pos_in_block_.assign(all_paths_.size(), 0);
        for (std::size_t i = 0; i < all_paths_.size(); ++i) {
            std::size_t bk = all_paths_[i].source * n + all_paths_[i].target;
            block_of_[i] = bk;
            pos_in_block_[i] = block_paths_[bk].size();
            block_paths_[bk].push_back(i);
        }

        // ideal generators per block: u * rel * v with terms beyond length N dropped
        std::vector<std::vector<FieldMatrix>> gens(n * n);
        for (const Relation& rel : relations_.relations) {
            auto [rs, rt, minlen] = relation_signature(rel);
            if (minlen > N) continue;  // relation lives entirely beyond degree N
            for (const Path& u : paths_ending_at(rs, N - minlen)) {
                for (const Path& v : paths_starting_at(rt, N - minlen - u.length())) {
                    std::size_t bk = u.source * n + v.target;
                    FieldMatrix g(field_, block_paths_[bk].size(), 1);
                    for (const RelationTerm& t : rel.terms) {
                        Path full = u;
                        for (const auto& an : t.arrow_names) {
                            std::size_t ai = quiver_.arrow_index(an);
                            full.arrows.push_back(ai);
                            full.target = quiver_.arrows[ai].target;
                        }
                        for (std::size_t a : v.arrows) {
                            full.arrows.push_back(a);
                            full.target = quiver_.arrows[a].target;
                        }
                        if (full.length() > N) continue;  // already in the ideal
                        std::size_t pid = path_index_.at(full);
                        g.at(pos_in_block_[pid], 0) = field_.add(g.at(pos_in_block_[pid], 0),
                                                                 field_.reduce(t.coeff));
                    }
                    if (!g.is_zero()) gens[bk].push_back(std::move(g));
                }
            }
        }

        // per block: ideal span, admissibility check, monomial complement basis
        basis_.clear();
        idempotent_.assign(n, 0);
        blocks_.assign(n * n, {});
        block_basis_.assign(n * n, {});
        reduction_.clear();
        reduction_.reserve(n * n);
        for (std::size_t bk = 0; bk < n * n; ++bk) {
            const auto& pids = block_paths_[bk];
            FieldMatrix ideal(field_, pids.size(), 0);
            for (const auto& g : gens[bk]) ideal = ideal.hconcat(g);
            ideal = canonical_subspace(ideal);

            for (std::size_t pos = 0; pos < pids.size(); ++pos) {
                if (all_paths_[pids[pos]].length() != N) continue;
                FieldMatrix e(field_, pids.size(), 1);
                e.at(pos, 0) = 1;
                if (!in_span(ideal, e))
                    throw NotAdmissible("a path of length " + std::to_string(N) +
                                        " survives the ideal; raise the nilpotency bound or fix the relations");
            }

            FieldMatrix acc = ideal;
            std::vector<std::size_t> chosen;  // block positions
            for (std::size_t pos = 0; pos < pids.size(); ++pos) {
                FieldMatrix e(field_, pids.size(), 1);
                e.at(pos, 0) = 1;
                if (!in_span(acc, e)) {
                    acc = acc.hconcat(e);
                    chosen.push_back(pos);
                }
            }
            FieldMatrix cols = ideal;
            for (std::size_t pos : chosen) {
                FieldMatrix e(field_, pids.size(), 1);
                e.at(pos, 0) = 1;
                cols = cols.hconcat(e);
            }
            // coordinates of every block path in (ideal ++ chosen); keep the
            // chosen rows as the reduction matrix
            FieldMatrix coords(field_, cols.cols(), pids.size());
            for (std::size_t pos = 0; pos < pids.size(); ++pos) {
                FieldMatrix e(field_, pids.size(), 1);
                e.at(pos, 0) = 1;
                auto x = solve(cols, e);
                for (std::size_t i = 0; i < cols.cols(); ++i) coords.at(i, pos) = x->at(i, 0);
            }
            FieldMatrix red(field_, chosen.size(), pids.size());
            for (std::size_t i = 0; i < chosen.size(); ++i)
                for (std::size_t j = 0; j < pids.size(); ++j)
                    red.at(i, j) = coords.at(ideal.cols() + i, j);
            reduction_.push_back(std::move(red));

            for (std::size_t pos : chosen) {
                const Path& p = all_paths_[pids[pos]];
                std::size_t gid = basis_.size();
                if (p.length() == 0) idempotent_[p.source] = gid;
                blocks_[bk].push_back(gid);
                block_basis_[bk].push_back(gid);
                basis_.push_back(p);
            }
        }

        build_table();
    }

    void validate_relations() const {
        for (const Relation& rel : relations_.relations) {
            if (rel.terms.empty()) continue;
            std::size_t rs = 0, rt = 0;
            bool first = true;
            for (const RelationTerm& t : rel.terms) {
                if (t.arrow_names.size() < 2)
                    throw NotAdmissible("relation contains a path of length < 2");
                std::size_t s = quiver_.arrows[quiver_.arrow_index(t.arrow_names.front())].source;
                std::size_t cur = s;
                for (const auto& an : t.arrow_names) {
                    const Arrow& a = quiver_.arrows[quiver_.arrow_index(an)];
                    if (a.source != cur)
                        throw NotHomogeneousRelation("non-composable path in relation");
                    cur = a.target;
                }
                if (first) {
                    rs = s;
                    rt = cur;
                    first = false;
                } else if (s != rs || cur != rt) {
                    throw NotHomogeneousRelation("relation terms are not parallel");
                }
            }
        }
    }

    std::tuple<std::size_t, std::size_t, std::size_t> relation_signature(const Relation& rel) const {
        std::size_t minlen = relations_.nilpotency_bound;
        std::size_t rs = 0, rt = 0;
        for (const RelationTerm& t : rel.terms) {
            minlen = std::min(minlen, t.arrow_names.size());
            const Arrow& a0 = quiver_.arrows[quiver_.arrow_index(t.arrow_names.front())];
            const Arrow& a1 = quiver_.arrows[quiver_.arrow_index(t.arrow_names.back())];
            rs = a0.source;
            rt = a1.target;
        }
        return {rs, rt, minlen};
    }

    std::vector<Path> paths_ending_at(std::size_t v, std::size_t maxlen) const {
        std::vector<Path> out;
        for (const Path& p : all_paths_)
            if (p.target == v && p.length() <= maxlen) out.push_back(p);
        return out;
    }

    std::vector<Path> paths_starting_at(std::size_t v, std::size_t maxlen) const {
        std::vector<Path> out;
        for (const Path& p : all_paths_)
            if (p.source == v && p.length() <= maxlen) out.push_back(p);
        return out;
    }

    void build_table() {
        const std::size_t m = basis_.size();
        const std::size_t N = relations_.nilpotency_bound;
        table_.assign(m * m, {});
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) {
                const Path& p = basis_[i];
                const Path& q = basis_[j];
                if (p.target != q.source) continue;
                Path pq = p;
                pq.arrows.insert(pq.arrows.end(), q.arrows.begin(), q.arrows.end());
                pq.target = q.target;
                if (pq.length() <= N) table_[i * m + j] = reduce_path(pq);
                // length > N: zero by nilpotency
            }
    }
};

}  // namespace exstruct
