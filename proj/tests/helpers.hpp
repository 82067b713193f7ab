// Programmatic fixture builders shared by the test binaries.

#pragma once

#include <catch2/catch_amalgamated.hpp>

#include "exstruct/defectcore.hpp"

namespace tfx {

using namespace exstruct;

inline FieldMatrix mat(const Field& f, std::size_t r, std::size_t c,
                       std::vector<std::int64_t> entries) {
    return FieldMatrix(f, r, c, std::move(entries));
}

/// two vertices, no arrows (semisimple)
struct SS {
    Field f;
    Algebra alg;
    Representation s1, s2;

    explicit SS(std::uint64_t p = 101)
        : f(p),
          alg(f, Quiver{2, {}}, RelationSet{{}, 1}),
          s1(&alg, {1, 0}, {}),
          s2(&alg, {0, 1}, {}) {}

    std::vector<Representation> atlas() const { return {s1, s2}; }
};

/// A2 quiver 0 -> 1
struct A2 {
    Field f;
    Algebra alg;
    Representation s1, p1, s2;

    explicit A2(std::uint64_t p = 101)
        : f(p),
          alg(f, Quiver{2, {{"a", 0, 1}}}, RelationSet{{}, 2}),
          s1(&alg, {1, 0}, {mat(f, 0, 1, {})}),
          p1(&alg, {1, 1}, {mat(f, 1, 1, {1})}),
          s2(&alg, {0, 1}, {mat(f, 1, 0, {})}) {}

    std::vector<Representation> atlas() const { return {s1, p1, s2}; }
};

/// k[x]/x^2
struct Dual {
    Field f;
    Algebra alg;
    Representation s, a;

    explicit Dual(std::uint64_t p = 101)
        : f(p),
          alg(f, Quiver{1, {{"x", 0, 0}}},
              RelationSet{{Relation{{RelationTerm{1, {"x", "x"}}}}}, 2}),
          s(&alg, {1}, {mat(f, 1, 1, {0})}),
          a(&alg, {2}, {mat(f, 2, 2, {0, 0, 1, 0})}) {}

    std::vector<Representation> atlas() const { return {s, a}; }
};

/// A3 quiver 0 -> 1 -> 2, atlas of all six interval modules
struct A3 {
    Field f;
    Algebra alg;
    Representation s1, s2, s3, m12, m23, m123;

    explicit A3(std::uint64_t p = 101)
        : f(p),
          alg(f, Quiver{3, {{"a", 0, 1}, {"b", 1, 2}}}, RelationSet{{}, 3}),
          s1(&alg, {1, 0, 0}, {mat(f, 0, 1, {}), mat(f, 0, 0, {})}),
          s2(&alg, {0, 1, 0}, {mat(f, 1, 0, {}), mat(f, 0, 1, {})}),
          s3(&alg, {0, 0, 1}, {mat(f, 0, 0, {}), mat(f, 1, 0, {})}),
          m12(&alg, {1, 1, 0}, {mat(f, 1, 1, {1}), mat(f, 0, 1, {})}),
          m23(&alg, {0, 1, 1}, {mat(f, 1, 0, {}), mat(f, 1, 1, {1})}),
          m123(&alg, {1, 1, 1}, {mat(f, 1, 1, {1}), mat(f, 1, 1, {1})}) {}

    std::vector<Representation> atlas() const { return {s1, s2, s3, m12, m23, m123}; }
};

/// calculator + table + engine bundle over a programmatic fixture atlas
struct Engine {
    ExtCalculator calc;
    CategoryTable table;
    DefectEngine engine;

    Engine(const Algebra* alg, std::vector<Representation> atlas)
        : calc(alg), table(&calc, std::move(atlas)), engine(&table) {}
};

inline FieldMatrix random_matrix(Sampler& rng, const Field& f, std::size_t r, std::size_t c) {
    FieldMatrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = rng.scalar(f);
    return m;
}

}  // namespace tfx
