// Exact linear algebra, path algebras and module representations.

#include "helpers.hpp"

using namespace exstruct;
using tfx::mat;

// ------------------------------------------------------------------ field

TEST_CASE("field rejects non-primes") {
    CHECK_THROWS_AS(Field(1), NotPrime);
    CHECK_THROWS_AS(Field(4), NotPrime);
    CHECK_THROWS_AS(Field(100), NotPrime);
    CHECK_NOTHROW(Field(2));
    CHECK_NOTHROW(Field(101));
}

TEST_CASE("field arithmetic basics") {
    Field f(7);
    CHECK(f.add(3, 5) == 1);
    CHECK(f.sub(2, 5) == 4);
    CHECK(f.mul(3, 5) == 1);
    CHECK(f.neg(0) == 0);
    CHECK(f.inv(3) == 5);
    for (std::uint64_t a = 1; a < 7; ++a) CHECK(f.mul(a, f.inv(a)) == 1);
    CHECK(f.reduce(-1) == 6);
    CHECK(f.reduce(-14) == 0);
}

TEST_CASE("rref examples") {
    Field f(5);
    SECTION("identity is its own rref") {
        FieldMatrix id = FieldMatrix::identity(f, 3);
        RrefResult e = rref(id);
        CHECK(e.rank == 3);
        CHECK(e.r == id);
        CHECK(e.pivots == std::vector<std::size_t>{0, 1, 2});
    }
    SECTION("zero matrix has rank 0") {
        FieldMatrix z(f, 2, 4);
        RrefResult e = rref(z);
        CHECK(e.rank == 0);
        CHECK(e.r.is_zero());
        CHECK(e.pivots.empty());
    }
    SECTION("all-ones over F2 has rank 1") {
        Field f2(2);
        RrefResult e = rref(mat(f2, 2, 2, {1, 1, 1, 1}));
        CHECK(e.rank == 1);
        CHECK(e.r == mat(f2, 2, 2, {1, 1, 0, 0}));
    }
}

TEST_CASE("kernel basis examples") {
    SECTION("identity has trivial kernel") {
        Field f(5);
        CHECK(kernel_basis(FieldMatrix::identity(f, 3)).cols() == 0);
    }
    SECTION("zero map has full kernel") {
        Field f(5);
        FieldMatrix k = kernel_basis(FieldMatrix(f, 4, 4));
        CHECK(k == FieldMatrix::identity(f, 4));
    }
    SECTION("canonical kernel of [1 2] over F5") {
        Field f(5);
        FieldMatrix k = kernel_basis(mat(f, 1, 2, {1, 2}));
        CHECK(k == mat(f, 2, 1, {3, 1}));
    }
}

TEST_CASE("solve and span membership") {
    Field f(5);
    FieldMatrix m = mat(f, 2, 2, {1, 2, 3, 4});
    FieldMatrix b = mat(f, 2, 1, {1, 1});
    auto x = solve(m, b);
    REQUIRE(x.has_value());
    CHECK(m * *x == b);
    // [1 2; 2 4] is singular, rhs outside the column space
    CHECK_FALSE(solve(mat(f, 2, 2, {1, 2, 2, 4}), mat(f, 2, 1, {0, 1})).has_value());
    CHECK(in_span(mat(f, 2, 1, {1, 2}), mat(f, 2, 1, {3, 1})));
    CHECK_FALSE(in_span(mat(f, 2, 1, {1, 2}), mat(f, 2, 1, {1, 3})));
}

static FieldMatrix random_subspace(tfx::Sampler& rng, const Field& f, std::size_t n) {
    std::size_t k = rng.pick(n + 1);
    FieldMatrix gens(f, n, k);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < k; ++j) gens.at(i, j) = rng.scalar(f);
    return canonical_subspace(gens);
}

TEST_CASE("linear algebra property checks") {
    for (std::uint64_t p : {2ull, 5ull}) {
        Field f(p);
        tfx::Sampler rng(p);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = 6;
            FieldMatrix m = tfx::random_matrix(rng, f, n, n);
            RrefResult e = rref(m);
            CHECK(e.rank + kernel_basis(m).cols() == n);
            FieldMatrix img = image_basis(m);
            CHECK(img.cols() == e.rank);

            FieldMatrix b = rng.vector(f, n);
            auto x = solve(m, b);
            CHECK(x.has_value() == in_span(m, b));
            if (x) CHECK(m * *x == b);

            // modular law: U <= W implies U + (V /\ W) = (U + V) /\ W
            FieldMatrix w = random_subspace(rng, f, n);
            FieldMatrix u = canonical_subspace(w * tfx::random_matrix(rng, f, w.cols(), 3));
            FieldMatrix v = random_subspace(rng, f, n);
            CHECK(subspace_equal(subspace_sum(u, subspace_intersection(v, w)),
                                 subspace_intersection(subspace_sum(u, v), w)));
        }
    }
}

TEST_CASE("quotient data round trips") {
    Field f(5);
    FieldMatrix v = FieldMatrix::identity(f, 3);
    FieldMatrix u = mat(f, 3, 1, {1, 0, 0});
    QuotientData qd = quotient_basis(u, v);
    CHECK(qd.complement.cols() == 2);
    CHECK(qd.projection.rows() == 2);
    CHECK((qd.projection * u).is_zero());
    // projection restricted to the complement is the identity on coordinates
    CHECK(qd.projection * qd.complement == FieldMatrix::identity(f, 2));
    CHECK_THROWS_AS(quotient_basis(mat(f, 3, 1, {1, 1, 1}), mat(f, 3, 1, {1, 0, 0})),
                    DimensionMismatch);
}

// ---------------------------------------------------------------- pathalg

TEST_CASE("path algebra dimensions") {
    Field f(101);
    SECTION("A2 has dimension 3") {
        Algebra a(f, Quiver{2, {{"a", 0, 1}}}, RelationSet{{}, 2});
        CHECK(a.dim() == 3);
        CHECK(a.block(0, 1).size() == 1);
        CHECK(a.block(1, 0).empty());
    }
    SECTION("dual numbers have dimension 2") {
        Algebra a(f, Quiver{1, {{"x", 0, 0}}},
                  RelationSet{{Relation{{RelationTerm{1, {"x", "x"}}}}}, 2});
        CHECK(a.dim() == 2);
    }
    SECTION("two isolated vertices give dimension 2") {
        Algebra a(f, Quiver{2, {}}, RelationSet{{}, 1});
        CHECK(a.dim() == 2);
    }
    SECTION("linear A3 with nilpotency 3 has dimension 6") {
        Algebra a(f, Quiver{3, {{"a", 0, 1}, {"b", 1, 2}}}, RelationSet{{}, 3});
        CHECK(a.dim() == 6);
    }
}

TEST_CASE("path algebra rejects bad presentations") {
    Field f(101);
    // loop with no relations and a bound that keeps an unkilled top path
    CHECK_THROWS_AS(Algebra(f, Quiver{1, {{"x", 0, 0}}}, RelationSet{{}, 2}), NotAdmissible);
    // relation containing a term of length < 2
    CHECK_THROWS_AS(Algebra(f, Quiver{2, {{"a", 0, 1}}},
                            RelationSet{{Relation{{RelationTerm{1, {"a"}}}}}, 2}),
                    NotAdmissible);
    // relation mixing non-parallel paths
    CHECK_THROWS_AS(
        Algebra(f, Quiver{3, {{"a", 0, 1}, {"b", 1, 2}, {"c", 0, 2}, {"d", 2, 0}}},
                RelationSet{{Relation{{RelationTerm{1, {"a", "b"}}, RelationTerm{1, {"d", "c"}}}}},
                            3}),
        NotHomogeneousRelation);
}

namespace {

std::vector<std::uint64_t> alg_mul(const Algebra& a, const std::vector<std::uint64_t>& u,
                                   const std::vector<std::uint64_t>& v) {
    const Field& f = a.field();
    std::vector<std::uint64_t> out(a.dim(), 0);
    for (std::size_t i = 0; i < a.dim(); ++i)
        for (std::size_t j = 0; j < a.dim(); ++j) {
            if (!u[i] || !v[j]) continue;
            for (const auto& [k, c] : a.mult(i, j))
                out[k] = f.add(out[k], f.mul(f.mul(u[i], v[j]), c));
        }
    return out;
}

}  // namespace

TEST_CASE("multiplication table is associative and unital") {
    Field f(101);
    std::vector<Algebra> algebras;
    algebras.emplace_back(f, Quiver{3, {{"a", 0, 1}, {"b", 1, 2}}}, RelationSet{{}, 3});
    algebras.emplace_back(f, Quiver{1, {{"x", 0, 0}}},
                          RelationSet{{Relation{{RelationTerm{1, {"x", "x"}}}}}, 2});
    for (const Algebra& a : algebras) {
        auto unit = [&] {
            std::vector<std::uint64_t> e(a.dim(), 0);
            for (std::size_t v = 0; v < a.quiver().vertices; ++v) e[a.idempotent(v)] = 1;
            return e;
        }();
        for (std::size_t i = 0; i < a.dim(); ++i) {
            std::vector<std::uint64_t> ei(a.dim(), 0);
            ei[i] = 1;
            CHECK(alg_mul(a, unit, ei) == ei);
            CHECK(alg_mul(a, ei, unit) == ei);
            for (std::size_t j = 0; j < a.dim(); ++j) {
                std::vector<std::uint64_t> ej(a.dim(), 0);
                ej[j] = 1;
                for (std::size_t k = 0; k < a.dim(); ++k) {
                    std::vector<std::uint64_t> ek(a.dim(), 0);
                    ek[k] = 1;
                    CHECK(alg_mul(a, alg_mul(a, ei, ej), ek) ==
                          alg_mul(a, ei, alg_mul(a, ej, ek)));
                }
            }
        }
        // the arrow ideal is nilpotent: every product of `bound` arrows dies
        const std::size_t bound = a.relations().nilpotency_bound;
        for (const Path& p : a.basis()) CHECK(p.length() < bound);
    }
}

// ----------------------------------------------------------------- repmod

TEST_CASE("representations validate their relations") {
    tfx::Dual d;
    // x acting invertibly violates x^2 = 0
    CHECK_THROWS_AS(Representation(&d.alg, {1}, {mat(d.f, 1, 1, {1})}), DimensionMismatch);
    CHECK_NOTHROW(Representation(&d.alg, {2}, {mat(d.f, 2, 2, {0, 0, 1, 0})}));
}

TEST_CASE("hom spaces over the A2 fixture") {
    tfx::A2 fx;
    CHECK(hom_space(fx.s1, fx.p1).dim() == 0);
    CHECK(hom_space(fx.p1, fx.s1).dim() == 1);
    CHECK(hom_space(fx.p1, fx.p1).dim() == 1);
    CHECK(hom_space(fx.s2, fx.p1).dim() == 1);
    HomSpace end(fx.p1, fx.p1);
    auto coords = end.coordinates(RepMorphism::identity(fx.p1));
    CHECK(end.element(coords) == RepMorphism::identity(fx.p1));
}

TEST_CASE("composition and isomorphisms") {
    tfx::A2 fx;
    HomSpace h1(fx.p1, fx.s1);
    HomSpace h2(fx.s2, fx.p1);
    RepMorphism f = h2.basis()[0];  // S2 -> P1
    RepMorphism g = h1.basis()[0];  // P1 -> S1
    CHECK(compose(g, f).is_zero());
    CHECK(is_isomorphism(RepMorphism::identity(fx.p1)));
    CHECK_FALSE(is_isomorphism(g));
    RepMorphism two = RepMorphism::identity(fx.p1).scaled(2);
    RepMorphism inv = invert(two);
    CHECK(compose(inv, two) == RepMorphism::identity(fx.p1));
}

TEST_CASE("endomorphism radicals") {
    SECTION("a simple has radical zero") {
        tfx::A2 fx;
        CHECK(end_radical(fx.s1).empty());
        CHECK(is_indecomposable(fx.s1));
    }
    SECTION("the dual-numbers regular module has a 1-dim radical") {
        tfx::Dual fx;
        auto rad = end_radical(fx.a);
        CHECK(rad.size() == 1);
        CHECK(compose(rad[0], rad[0]).is_zero());
        CHECK(is_indecomposable(fx.a));
    }
    SECTION("a square of a simple has a semisimple endomorphism ring") {
        tfx::A2 fx;
        DirectSum ds = direct_sum({fx.s1, fx.s1});
        CHECK(end_radical(ds.sum).empty());
        CHECK_FALSE(is_indecomposable(ds.sum));
    }
    SECTION("P1 + S1 has a 1-dim radical spanned by the cover") {
        tfx::A2 fx;
        DirectSum ds = direct_sum({fx.p1, fx.s1});
        auto rad = end_radical(ds.sum);
        CHECK(rad.size() == 1);
        CHECK(compose(rad[0], rad[0]).is_zero());
    }
    SECTION("small characteristic falls back to the exact sweep") {
        tfx::A2 fx(2);
        DirectSum ds = direct_sum({fx.s1, fx.s1});
        CHECK(end_radical(ds.sum).empty());
        CHECK(end_radical(fx.p1).empty());
        DirectSum mixed = direct_sum({fx.p1, fx.s1});
        CHECK(end_radical(mixed.sum).size() == 1);
    }
    SECTION("the guard rejects an infeasible sweep") {
        tfx::A2 fx(2);
        DirectSum ds = direct_sum({fx.s1, fx.s1, fx.s1, fx.s1, fx.s1});
        // End is 25-dimensional over F2: too many elements to enumerate
        CHECK_THROWS_AS(end_radical(ds.sum), CharacteristicTooSmall);
    }
}

TEST_CASE("krull-schmidt decomposition") {
    tfx::A2 fx;
    auto atlas = fx.atlas();
    SECTION("direct sum of two simples") {
        DirectSum ds = direct_sum({fx.s1, fx.s2});
        Decomposition d = krull_schmidt_decompose(ds.sum, atlas);
        CHECK(d.multiplicities == std::vector<std::size_t>{1, 0, 1});
        for (const auto& s : d.summands)
            CHECK(compose(s.retraction, s.section) ==
                  RepMorphism::identity(atlas[s.atlas_index]));
    }
    SECTION("zero module decomposes to nothing") {
        Decomposition d = krull_schmidt_decompose(Representation::zero(&fx.alg), atlas);
        CHECK(d.summands.empty());
    }
    SECTION("missing member is reported") {
        CHECK_THROWS_AS(krull_schmidt_decompose(fx.p1, {fx.s1, fx.s2}), AtlasIncomplete);
    }
    SECTION("order independence of multiplicities") {
        DirectSum ds = direct_sum({fx.p1, fx.s1, fx.p1});
        Decomposition d = krull_schmidt_decompose(ds.sum, atlas);
        CHECK(d.multiplicities == std::vector<std::size_t>{1, 2, 0});
        std::vector<Representation> reversed{fx.s2, fx.p1, fx.s1};
        Decomposition d2 = krull_schmidt_decompose(ds.sum, reversed);
        CHECK(d2.multiplicities == std::vector<std::size_t>{0, 2, 1});
    }
}

TEST_CASE("hom is additive over direct sums") {
    tfx::A3 fx;
    auto atlas = fx.atlas();
    tfx::Sampler rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Representation> parts;
        for (int k = 0; k < 2; ++k) parts.push_back(atlas[rng.pick(atlas.size())]);
        DirectSum ds = direct_sum(parts);
        const Representation& t = atlas[rng.pick(atlas.size())];
        std::size_t expect = 0;
        for (const auto& p : parts) expect += hom_space(p, t).dim();
        CHECK(hom_space(ds.sum, t).dim() == expect);
        std::size_t expect2 = 0;
        for (const auto& p : parts) expect2 += hom_space(t, p).dim();
        CHECK(hom_space(t, ds.sum).dim() == expect2);
    }
}

TEST_CASE("non-isomorphic indecomposables compose into the radical") {
    tfx::A3 fx;
    auto atlas = fx.atlas();
    for (std::size_t i = 0; i < atlas.size(); ++i) {
        auto rad = end_radical(atlas[i]);
        HomSpace end(atlas[i], atlas[i]);
        for (std::size_t j = 0; j < atlas.size(); ++j) {
            if (i == j) continue;
            HomSpace in(atlas[i], atlas[j]);
            HomSpace out(atlas[j], atlas[i]);
            for (const auto& f : in.basis())
                for (const auto& g : out.basis())
                    CHECK(detail::in_radical_span(rad, end, compose(g, f)));
        }
    }
}
