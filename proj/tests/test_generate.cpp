#include <doctest.h>

#include <cmath>

#include "gbp/dominance.hpp"
#include "gbp/generate.hpp"

using namespace gbp;

TEST_CASE("example1 reproduces its fixed matrix and rhs") {
    const SparseSystem sys = generate({GeneratorKind::Example1}, 99);
    REQUIRE(sys.size() == 3);
    CHECK(sys.entry(0, 1) == -0.72);
    CHECK(sys.entry(0, 2) == -0.6);
    CHECK(sys.entry(1, 0) == -0.1);
    CHECK(sys.entry(1, 2) == -0.375);
    CHECK(sys.entry(2, 0) == -0.7);
    CHECK(sys.entry(2, 1) == -0.5);
    for (Index i = 0; i < 3; ++i) {
        CHECK(sys.diag(i) == 1.0);
        CHECK(sys.rhs()[i] == static_cast<double>(i + 1));
    }
}

TEST_CASE("example2 reproduces its fixed matrix and rhs") {
    const SparseSystem sys = generate({GeneratorKind::Example2}, 0);
    REQUIRE(sys.size() == 5);
    CHECK(sys.entry(0, 1) == 0.29);
    CHECK(sys.entry(0, 3) == 0.32);
    CHECK(sys.entry(0, 4) == 0.35);
    CHECK(sys.entry(1, 0) == 0.51);
    CHECK(sys.entry(1, 2) == 0.48);
    CHECK(sys.entry(2, 1) == 0.3);
    CHECK(sys.entry(2, 3) == 0.32);
    CHECK(sys.entry(2, 4) == 0.35);
    CHECK(sys.entry(3, 0) == 0.52);
    CHECK(sys.entry(3, 2) == 0.46);
    CHECK(sys.entry(4, 0) == 0.44);
    CHECK(sys.entry(4, 2) == 0.53);
    CHECK(sys.entry(0, 2) == 0.0);
    for (Index i = 0; i < 5; ++i) CHECK(sys.rhs()[i] == static_cast<double>(i + 1));
}

TEST_CASE("tree kind generates acyclic dominant instances") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::Tree;
    spec.n = 20;
    spec.row_sum = 0.8;
    const SparseSystem sys = generate(spec, 5);
    const InducedGraph g = build_induced_graph(sys);
    CHECK(g.edge_count() == 19);
    CHECK(at_least(classify(sys, Scaling::identity(20)).classification,
                   Classification::DScaledDD));
}

TEST_CASE("single_loop kind generates one cycle") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::SingleLoop;
    spec.n = 6;
    const SparseSystem sys = generate(spec, 5);
    const InducedGraph g = build_induced_graph(sys);
    CHECK(g.edge_count() == 6);
    for (Index i = 0; i < 6; ++i) CHECK(g.degree(i) == 2);
}

TEST_CASE("example3_style instances match the recipe") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::Example3Style;
    const SparseSystem sys = generate(spec, 11);
    REQUIRE(sys.size() == 13);
    const InducedGraph g = build_induced_graph(sys);
    for (Index i = 0; i < 13; ++i) {
        CHECK(sys.diag(i) == static_cast<double>(g.degree(i)));
        for (const auto& [j, v] : sys.row(i)) {
            (void)j;
            CHECK(v > -1.2);
            CHECK(v < -0.2);
        }
    }
    CHECK(at_least(classify(sys, Scaling::identity(13)).classification,
                   Classification::WeaklyDScaledDD));
}

TEST_CASE("example4_style instances match the recipe") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::Example4Style;
    spec.n = 200;
    const SparseSystem sys = generate(spec, 7);
    REQUIRE(sys.size() == 200);

    double total = 0.0;
    long entries = 0, positive = 0;
    for (Index i = 0; i < 200; ++i) {
        CHECK(sys.diag(i) == 1.0);
        for (const auto& [j, v] : sys.row(i)) {
            (void)j;
            total += std::abs(v);
            positive += v > 0 ? 1 : 0;
            ++entries;
        }
    }
    CHECK(total / 200.0 == doctest::Approx(0.4).epsilon(0.05));
    CHECK(static_cast<double>(positive) / entries == doctest::Approx(0.8).epsilon(0.1));
    CHECK(spectral_certificate(sys).rho < 1.0);
}

TEST_CASE("example3_style honors a narrowed value range") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::Example3Style;
    spec.value_max = -0.7;
    const SparseSystem sys = generate(spec, 3);
    for (Index i = 0; i < sys.size(); ++i)
        for (const auto& [j, v] : sys.row(i)) {
            (void)j;
            CHECK(v > -1.2);
            CHECK(v < -0.7);
        }
    // hard-end draws sit near the dominance boundary
    CHECK(spectral_certificate(sys).rho > 0.8);
}

TEST_CASE("generation is deterministic per seed") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::Example3Style;
    CHECK(generate(spec, 21) == generate(spec, 21));
    CHECK(!(generate(spec, 21) == generate(spec, 22)));
}

TEST_CASE("invalid parameters are rejected") {
    GeneratorSpec spec;
    spec.kind = GeneratorKind::Tree;
    spec.row_sum = 1.5;
    CHECK_THROWS_AS(generate(spec, 0), Error);
    CHECK_THROWS_AS(generator_kind_from_string("nope"), Error);
}
