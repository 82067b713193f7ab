// Exact dense linear algebra over a prime field F_p.
//
// Everything downstream (hom spaces, Ext groups, functor modules) reduces to
// the primitives in this header: rref, kernels, images, solving, and the
// subspace calculus (sum, intersection, quotient with projection).  All
// pivoting is deterministic (first nonzero entry), so every basis produced
// here is bit-exactly reproducible.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace exstruct {

struct DimensionMismatch : std::runtime_error {
    explicit DimensionMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct NotPrime : std::runtime_error {
    explicit NotPrime(const std::string& what) : std::runtime_error(what) {}
};

/// Prime field F_p, p machine-word sized.  Primality is checked at
/// construction; arithmetic keeps every residue in [0, p).
class Field {
public:
    explicit Field(std::uint64_t p) : p_(p) {
        if (!is_prime(p)) throw NotPrime("modulus " + std::to_string(p) + " is not prime");
    }

    std::uint64_t p() const { return p_; }

    std::uint64_t reduce(std::int64_t x) const {
        std::int64_t r = x % static_cast<std::int64_t>(p_);
        if (r < 0) r += static_cast<std::int64_t>(p_);
        return static_cast<std::uint64_t>(r);
    }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const {
        return a >= b ? a - b : a + p_ - b;
    }
    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : p_ - a; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return (static_cast<unsigned __int128>(a) * b) % p_;
    }
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const {
        std::uint64_t r = 1;
        while (e) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }
    std::uint64_t inv(std::uint64_t a) const {
        if (a == 0) throw std::domain_error("inverse of zero");
        return pow(a, p_ - 2);
    }

    bool operator==(const Field& o) const { return p_ == o.p_; }

    static bool is_prime(std::uint64_t n) {
        if (n < 2) return false;
        for (std::uint64_t d : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
            if (n == d) return true;
            if (n % d == 0) return false;
        }
        // deterministic Miller-Rabin, valid for all 64-bit n with these bases
        auto mulmod = [&](std::uint64_t a, std::uint64_t b) {
            return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % n);
        };
        auto powmod = [&](std::uint64_t a, std::uint64_t e) {
            std::uint64_t r = 1;
            a %= n;
            while (e) {
                if (e & 1) r = mulmod(r, a);
                a = mulmod(a, a);
                e >>= 1;
            }
            return r;
        };
        std::uint64_t d = n - 1;
        int s = 0;
        while ((d & 1) == 0) { d >>= 1; ++s; }
        for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
            std::uint64_t x = powmod(a, d);
            if (x == 1 || x == n - 1) continue;
            bool witness = true;
            for (int i = 1; i < s; ++i) {
                x = mulmod(x, x);
                if (x == n - 1) { witness = false; break; }
            }
            if (witness) return false;
        }
        return true;
    }

private:
    std::uint64_t p_;
};

/// Dense row-major matrix over F_p.
class FieldMatrix {
public:
    FieldMatrix() : f_(2), rows_(0), cols_(0) {}
    FieldMatrix(Field f, std::size_t rows, std::size_t cols)
        : f_(f), rows_(rows), cols_(cols), a_(rows * cols, 0) {}
    FieldMatrix(Field f, std::size_t rows, std::size_t cols, std::vector<std::int64_t> entries)
        : f_(f), rows_(rows), cols_(cols), a_(rows * cols) {
        if (entries.size() != rows * cols) throw DimensionMismatch("entry count");
        for (std::size_t i = 0; i < entries.size(); ++i) a_[i] = f_.reduce(entries[i]);
    }

    static FieldMatrix identity(Field f, std::size_t n) {
        FieldMatrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    const Field& field() const { return f_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    std::uint64_t& at(std::size_t r, std::size_t c) { return a_[r * cols_ + c]; }
    std::uint64_t at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }

    const std::vector<std::uint64_t>& entries() const { return a_; }

    bool is_zero() const {
        for (auto x : a_)
            if (x) return false;
        return true;
    }

    bool operator==(const FieldMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_ && f_ == o.f_;
    }

    FieldMatrix transpose() const {
        FieldMatrix t(f_, cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
        return t;
    }

    FieldMatrix operator*(const FieldMatrix& o) const {
        if (cols_ != o.rows_) throw DimensionMismatch("matrix product");
        FieldMatrix r(f_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                std::uint64_t x = at(i, k);
                if (!x) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r.at(i, j) = f_.add(r.at(i, j), f_.mul(x, o.at(k, j)));
            }
        return r;
    }

    FieldMatrix operator+(const FieldMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix sum");
        FieldMatrix r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = f_.add(r.a_[i], o.a_[i]);
        return r;
    }

    FieldMatrix operator-(const FieldMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix difference");
        FieldMatrix r = *this;
        for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] = f_.sub(r.a_[i], o.a_[i]);
        return r;
    }

    FieldMatrix scaled(std::uint64_t c) const {
        FieldMatrix r = *this;
        for (auto& x : r.a_) x = f_.mul(x, c);
        return r;
    }

    FieldMatrix column(std::size_t j) const {
        FieldMatrix v(f_, rows_, 1);
        for (std::size_t i = 0; i < rows_; ++i) v.at(i, 0) = at(i, j);
        return v;
    }

    /// [this | o]
    FieldMatrix hconcat(const FieldMatrix& o) const {
        if (rows_ != o.rows_) throw DimensionMismatch("hconcat");
        FieldMatrix r(f_, rows_, cols_ + o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
            for (std::size_t j = 0; j < o.cols_; ++j) r.at(i, cols_ + j) = o.at(i, j);
        }
        return r;
    }

    /// [this; o]
    FieldMatrix vconcat(const FieldMatrix& o) const {
        if (cols_ != o.cols_) throw DimensionMismatch("vconcat");
        FieldMatrix r(f_, rows_ + o.rows_, cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = at(i, j);
        for (std::size_t i = 0; i < o.rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(rows_ + i, j) = o.at(i, j);
        return r;
    }

    FieldMatrix submatrix(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
        FieldMatrix r(f_, nr, nc);
        for (std::size_t i = 0; i < nr; ++i)
            for (std::size_t j = 0; j < nc; ++j) r.at(i, j) = at(r0 + i, c0 + j);
        return r;
    }

private:
    Field f_;
    std::size_t rows_, cols_;
    std::vector<std::uint64_t> a_;
};

inline FieldMatrix block_diag(const FieldMatrix& a, const FieldMatrix& b) {
    FieldMatrix r(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) r.at(i, j) = a.at(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) r.at(a.rows() + i, a.cols() + j) = b.at(i, j);
    return r;
}

struct RrefResult {
    FieldMatrix r;
    std::vector<std::size_t> pivots;
    std::size_t rank;
};

/// Reduced row echelon form with first-nonzero pivoting.
inline RrefResult rref(FieldMatrix m) {
    const Field f = m.field();
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t piv = row;
        while (piv < m.rows() && m.at(piv, col) == 0) ++piv;
        if (piv == m.rows()) continue;
        if (piv != row)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(piv, j), m.at(row, j));
        std::uint64_t inv = f.inv(m.at(row, col));
        for (std::size_t j = 0; j < m.cols(); ++j) m.at(row, j) = f.mul(m.at(row, j), inv);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row) continue;
            std::uint64_t c = m.at(i, col);
            if (!c) continue;
            for (std::size_t j = 0; j < m.cols(); ++j)
                m.at(i, j) = f.sub(m.at(i, j), f.mul(c, m.at(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return {std::move(m), std::move(pivots), row};
}

inline std::size_t rank(const FieldMatrix& m) { return rref(m).rank; }

/// Columns span ker(M).  The basis is canonical: one vector per free column,
/// with unit entry at the free coordinate.
inline FieldMatrix kernel_basis(const FieldMatrix& m) {
    const Field f = m.field();
    RrefResult e = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : e.pivots) is_pivot[c] = true;
    std::size_t nullity = m.cols() - e.rank;
    FieldMatrix k(f, m.cols(), nullity);
    std::size_t out = 0;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        k.at(free, out) = 1;
        for (std::size_t i = 0; i < e.rank; ++i) k.at(e.pivots[i], out) = f.neg(e.r.at(i, free));
        ++out;
    }
    return k;
}

/// Canonical basis of the column space: column echelon form (nonzero rows of
/// rref(M^T), transposed back).
inline FieldMatrix image_basis(const FieldMatrix& m) {
    RrefResult e = rref(m.transpose());
    FieldMatrix b(m.field(), m.rows(), e.rank);
    for (std::size_t i = 0; i < e.rank; ++i)
        for (std::size_t j = 0; j < m.rows(); ++j) b.at(j, i) = e.r.at(i, j);
    return b;
}

/// Canonicalize a set of spanning columns to the echelon basis of their span.
inline FieldMatrix canonical_subspace(const FieldMatrix& spanning) { return image_basis(spanning); }

/// One solution x of Mx = b, or nullopt if the system is inconsistent.
/// Deterministic: free variables are set to zero.
inline std::optional<FieldMatrix> solve(const FieldMatrix& m, const FieldMatrix& b) {
    if (b.rows() != m.rows() || b.cols() != 1) throw DimensionMismatch("solve rhs");
    const Field f = m.field();
    RrefResult e = rref(m.hconcat(b));
    // inconsistent iff the augmented column is a pivot
    if (!e.pivots.empty() && e.pivots.back() == m.cols()) return std::nullopt;
    FieldMatrix x(f, m.cols(), 1);
    for (std::size_t i = 0; i < e.pivots.size(); ++i) x.at(e.pivots[i], 0) = e.r.at(i, m.cols());
    return x;
}

/// Solve MX = B columnwise; nullopt if any column is inconsistent.
inline std::optional<FieldMatrix> solve_matrix(const FieldMatrix& m, const FieldMatrix& b) {
    FieldMatrix x(m.field(), m.cols(), b.cols());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        auto col = solve(m, b.column(j));
        if (!col) return std::nullopt;
        for (std::size_t i = 0; i < m.cols(); ++i) x.at(i, j) = col->at(i, 0);
    }
    return x;
}

inline bool in_span(const FieldMatrix& basis, const FieldMatrix& v) {
    return solve(basis, v).has_value();
}

inline bool subspace_contains(const FieldMatrix& big, const FieldMatrix& small) {
    for (std::size_t j = 0; j < small.cols(); ++j)
        if (!in_span(big, small.column(j))) return false;
    return true;
}

inline bool subspace_equal(const FieldMatrix& a, const FieldMatrix& b) {
    return canonical_subspace(a) == canonical_subspace(b);
}

inline FieldMatrix subspace_sum(const FieldMatrix& u, const FieldMatrix& v) {
    return canonical_subspace(u.hconcat(v));
}

inline FieldMatrix subspace_intersection(const FieldMatrix& u, const FieldMatrix& v) {
    if (u.rows() != v.rows()) throw DimensionMismatch("subspace intersection");
    if (u.cols() == 0 || v.cols() == 0) return FieldMatrix(u.field(), u.rows(), 0);
    // ker [U | -V]: the U-coordinates of each kernel vector give intersection elements
    FieldMatrix k = kernel_basis(u.hconcat(v.scaled(u.field().p() - 1)));
    FieldMatrix coeffs = k.submatrix(0, 0, u.cols(), k.cols());
    return canonical_subspace(u * coeffs);
}

/// Quotient of V by a subspace U ⊆ V, both given by column bases inside F^n.
/// `complement` holds representative columns (a basis of a complement of U in
/// V); `projection` is a (dim V − dim U) × n matrix which on V computes the
/// quotient coordinates and kills U.
struct QuotientData {
    FieldMatrix complement;
    FieldMatrix projection;
};

inline QuotientData quotient_basis(const FieldMatrix& u, const FieldMatrix& v) {
    if (u.rows() != v.rows()) throw DimensionMismatch("quotient");
    const Field f = u.field();
    const std::size_t n = u.rows();
    FieldMatrix ub = canonical_subspace(u);
    FieldMatrix vb = canonical_subspace(v);
    if (!subspace_contains(vb, ub)) throw DimensionMismatch("quotient: U not contained in V");
    // greedily extend the U-basis by columns of V
    FieldMatrix acc = ub;
    FieldMatrix comp(f, n, 0);
    for (std::size_t j = 0; j < vb.cols(); ++j) {
        FieldMatrix c = vb.column(j);
        if (!in_span(acc, c)) {
            acc = acc.hconcat(c);
            comp = comp.hconcat(c);
        }
    }
    // extend [U | comp] to a basis of F^n by standard vectors, invert, and keep
    // the rows matching comp
    FieldMatrix full = ub.hconcat(comp);
    std::size_t d = full.cols();
    for (std::size_t j = 0; j < n && full.cols() < n; ++j) {
        FieldMatrix e(f, n, 1);
        e.at(j, 0) = 1;
        if (!in_span(full, e)) full = full.hconcat(e);
    }
    RrefResult inv = rref(full.hconcat(FieldMatrix::identity(f, n)));
    FieldMatrix fullinv = inv.r.submatrix(0, n, n, n);
    FieldMatrix proj(f, comp.cols(), n);
    for (std::size_t i = 0; i < comp.cols(); ++i)
        for (std::size_t j = 0; j < n; ++j) proj.at(i, j) = fullinv.at(ub.cols() + i, j);
    (void)d;
    return {std::move(comp), std::move(proj)};
}

}  // namespace exstruct
