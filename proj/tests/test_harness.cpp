#include "doctest.h"
#include "drobound/harness.hpp"

using namespace drobound;

TEST_CASE("generators are deterministic") {
    auto a = harness::gen_pod_instance(42, 5, 0.5);
    auto b = harness::gen_pod_instance(42, 5, 0.5);
    CHECK(a.p == b.p);
    CHECK(a.obj.a == b.obj.a);
    CHECK(a.obj.b == b.obj.b);

    auto m1 = harness::gen_moment_instance(7, 3);
    auto m2 = harness::gen_moment_instance(7, 3);
    CHECK(m1.marginal_probs == m2.marginal_probs);
    CHECK(m1.obj.a == m2.obj.a);
}

TEST_CASE("generated values stay in range") {
    auto inst = harness::gen_pod_instance(3, 6, 0.5);
    for (double p : inst.p) {
        CHECK(p >= 0.0);
        CHECK(p <= 0.5);
    }
    CHECK(inst.obj.pieces() == 6);
    for (const auto& row : inst.obj.a)
        for (double v : row) {
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
        }
    auto spec = make_boolean_spec(inst.p, 2);
    CHECK(validate_spec(AmbiguitySpec{spec}).ok());
}

TEST_CASE("dirichlet draws normalize") {
    std::mt19937_64 rng(1);
    for (int rep = 0; rep < 20; ++rep) {
        auto w = harness::dirichlet(rng, 10, 2.0);
        double s = 0.0;
        for (double x : w) {
            CHECK(x > 0.0);
            s += x;
        }
        CHECK(s == doctest::Approx(1.0));
    }
}

TEST_CASE("concordance targets") {
    auto q2 = harness::gen_concordance_targets({0.4, 0.6}, 2);
    REQUIRE(q2.size() == 1);
    CHECK(q2.at(0b11) == doctest::Approx(0.165 * 0.4));

    CHECK(harness::gen_concordance_targets({0.4, 0.6}, 1).empty());

    auto q3 = harness::gen_concordance_targets({0.1, 0.1, 0.1}, 3);
    CHECK(q3.at(0b111) == doctest::Approx(0.4 * 0.165 * 0.1));

    // cap binds when alpha pushes past the comonotone maximum
    auto q4 = harness::gen_concordance_targets({0.2, 0.2, 0.2, 0.2}, 4);
    for (const auto& [mask, q] : q4) CHECK(q <= 0.2 + 1e-12);
}

TEST_CASE("pod sweep is monotone and baselined at zero") {
    auto rows = harness::run_pod_sweep(3, 100, 4, 0.5);
    REQUIRE(rows.size() == 12);
    for (std::size_t r = 0; r < rows.size(); r += 4) {
        CHECK(rows[r].ml == 1);
        CHECK(rows[r].pct_improvement == doctest::Approx(0.0));
        for (std::size_t m = 1; m < 4; ++m) {
            CHECK(rows[r + m].value <= rows[r + m - 1].value + 1e-8);
            CHECK(rows[r + m].pct_improvement >= rows[r + m - 1].pct_improvement - 1e-8);
        }
    }
}

TEST_CASE("moment sweep is monotone") {
    auto rows = harness::run_moment_sweep(2, 500, 2, 3);
    REQUIRE(rows.size() == 6);
    for (std::size_t r = 0; r < rows.size(); r += 3)
        for (std::size_t l = 1; l < 3; ++l)
            CHECK(rows[r + l].value <= rows[r + l - 1].value + 1e-8);
}

TEST_CASE("csv emission") {
    std::vector<harness::SweepRow> rows = {{12, 4, 2, 0.625, 3.5, 1.25}};
    auto csv = harness::to_csv(rows);
    CHECK(csv == "seed,N,M_or_L,value,pct_improvement,runtime_ms\n12,4,2,0.625,3.5,1.25\n");
}
