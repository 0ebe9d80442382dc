#include "doctest.h"
#include "drobound/comonotone.hpp"
#include "drobound/oracle.hpp"

using namespace drobound;

namespace {
DiscreteMarginal bern(double p) { return DiscreteMarginal({0.0, 1.0}, {1.0 - p, p}); }
}  // namespace

TEST_CASE("comonotone coupling of two Bernoulli marginals") {
    auto joint = comonotone_coupling({bern(0.5), bern(0.3)});
    joint.validate();
    CHECK(joint.mass.size() == 3);
    CHECK(joint.prob({0, 0}) == doctest::Approx(0.5));
    CHECK(joint.prob({1, 0}) == doctest::Approx(0.2));
    CHECK(joint.prob({1, 1}) == doctest::Approx(0.3));
}

TEST_CASE("single marginal couples to itself") {
    DiscreteMarginal m({1.0, 2.0, 5.0}, {0.2, 0.3, 0.5});
    auto joint = comonotone_coupling({m});
    joint.validate();
    CHECK(joint.prob({1.0}) == doctest::Approx(0.2));
    CHECK(joint.prob({5.0}) == doctest::Approx(0.5));
}

TEST_CASE("identical marginals give diagonal support") {
    auto joint = comonotone_coupling({bern(0.75), bern(0.75)});
    CHECK(joint.mass.size() == 2);
    CHECK(joint.prob({0, 0}) == doctest::Approx(0.25));
    CHECK(joint.prob({1, 1}) == doctest::Approx(0.75));
}

TEST_CASE("coupling support is small, totally ordered, marginal-exact") {
    std::vector<DiscreteMarginal> ms = {
        DiscreteMarginal({0, 1, 2}, {0.2, 0.5, 0.3}),
        DiscreteMarginal({-1, 4}, {0.45, 0.55}),
        DiscreteMarginal({0, 2, 3, 7}, {0.1, 0.2, 0.3, 0.4})};
    auto joint = comonotone_coupling(ms);
    joint.validate();
    CHECK(joint.mass.size() <= 3 + 2 + 4 - 3 + 1);
    // Total order under componentwise <=
    std::vector<LatticePoint> pts;
    for (const auto& [p, m] : joint.mass) pts.push_back(p);
    for (std::size_t a = 0; a + 1 < pts.size(); ++a)
        for (std::size_t i = 0; i < 3; ++i) CHECK(pts[a][i] <= pts[a + 1][i]);
    // Marginals reproduced exactly
    for (std::size_t i = 0; i < ms.size(); ++i) {
        auto got = joint.marginal(i);
        REQUIRE(got.size() == ms[i].size());
        for (std::size_t a = 0; a < got.size(); ++a) {
            CHECK(got.values[a] == ms[i].values[a]);
            CHECK(got.probs[a] == doctest::Approx(ms[i].probs[a]));
        }
    }
    // Frechet upper bound attained at every lattice point
    joint.support.for_each([&](const LatticePoint& t) {
        double want = 1.0;
        for (std::size_t i = 0; i < ms.size(); ++i) want = std::min(want, ms[i].tail_geq(t[i]));
        CHECK(orthant_prob(joint, t, OrthantDirection::Upper) == doctest::Approx(want));
        double wantlo = 1.0;
        for (std::size_t i = 0; i < ms.size(); ++i) wantlo = std::min(wantlo, ms[i].cdf_leq(t[i]));
        CHECK(orthant_prob(joint, t, OrthantDirection::Lower) == doctest::Approx(wantlo));
    });
}

TEST_CASE("independent coupling masses") {
    auto joint = independent_coupling({bern(0.5), bern(0.5)});
    joint.validate();
    for (const auto& [p, m] : joint.mass) CHECK(m == doctest::Approx(0.25));

    auto j2 = independent_coupling({bern(0.7), bern(0.4)});
    CHECK(j2.prob({1, 1}) == doctest::Approx(0.7 * 0.4));

    // Degenerate marginal collapses the product
    DiscreteMarginal dirac({3.0}, {1.0});
    auto j3 = independent_coupling({dirac, bern(0.3)});
    CHECK(j3.prob({3.0, 1.0}) == doctest::Approx(0.3));
    CHECK(j3.prob({3.0, 0.0}) == doctest::Approx(0.7));
}

TEST_CASE("choquet expectation examples") {
    LatticeFunction fmax{ProductSupport({{0.0, 1.0}, {0.0, 1.0}}),
                         [](const LatticePoint& p) { return std::max(p[0], p[1]); }};
    CHECK(choquet_expectation(fmax, {bern(0.5), bern(0.3)}) == doctest::Approx(0.5));

    DiscreteMarginal m({0, 1}, {0.25, 0.75});
    LatticeFunction fx{ProductSupport({{0.0, 1.0}}),
                       [](const LatticePoint& p) { return p[0]; }};
    CHECK(choquet_expectation(fx, {m}) == doctest::Approx(0.75));

    LatticeFunction fprod{ProductSupport({{0.0, 1.0}, {0.0, 1.0}}),
                          [](const LatticePoint& p) { return p[0] * p[1]; }};
    CHECK(choquet_expectation(fprod, {m, m}) == doctest::Approx(0.75));
}

TEST_CASE("orthant probabilities") {
    auto como = comonotone_coupling({bern(0.5), bern(0.3)});
    CHECK(orthant_prob(como, {1, 1}, OrthantDirection::Upper) == doctest::Approx(0.3));

    auto ind = independent_coupling({bern(0.5), bern(0.5)});
    CHECK(orthant_prob(ind, {1, 1}, OrthantDirection::Upper) == doctest::Approx(0.25));
    CHECK(orthant_prob(ind, {0, 0}, OrthantDirection::Upper) == doctest::Approx(1.0));
}

TEST_CASE("both couplings are members of their own POD spec") {
    std::vector<DiscreteMarginal> ms = {bern(0.4), bern(0.6), bern(0.25)};
    AmbiguitySpec spec{make_pod_spec(ms)};
    CHECK(oracle::check_membership(independent_coupling(ms), spec).ok());
    CHECK(oracle::check_membership(comonotone_coupling(ms), spec).ok());
}
