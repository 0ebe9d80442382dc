#include "doctest.h"
#include "drobound/compact.hpp"
#include "drobound/io.hpp"

using namespace drobound;
using io::json;

namespace {
DiscreteMarginal bern(double p) { return DiscreteMarginal({0.0, 1.0}, {1.0 - p, p}); }
}  // namespace

TEST_CASE("pod problem round trips through json") {
    io::Problem p;
    p.spec = make_pod_spec({bern(0.4), bern(0.6)});
    p.objective = PiecewiseAffineObjective({{1, 0}, {0, 1}}, {0.5, -0.5});

    json j = io::problem_to_json(p);
    io::Problem back = io::problem_from_json(j);

    const auto& pod = std::get<PodBivariateSpec>(back.spec);
    const auto& orig = std::get<PodBivariateSpec>(p.spec);
    CHECK(pod.marginals.size() == 2);
    CHECK(pod.marginals[1].probs[1] == doctest::Approx(0.6));
    CHECK(pod.pair_targets.size() == orig.pair_targets.size());
    for (const auto& [key, target] : orig.pair_targets)
        CHECK(pod.pair_targets.at(key) == doctest::Approx(target));
    CHECK(back.objective.b[1] == doctest::Approx(-0.5));
}

TEST_CASE("boolean problem round trips with explicit targets") {
    io::Problem p;
    p.spec = make_boolean_spec({0.3, 0.4, 0.5}, 3);
    p.objective = PiecewiseAffineObjective({{1, 1, 1}}, {0});

    io::Problem back = io::problem_from_json(io::problem_to_json(p));
    const auto& bo = std::get<BooleanHigherOrderSpec>(back.spec);
    CHECK(bo.max_order == 3);
    CHECK(bo.q_targets.at(0b111) == doctest::Approx(0.3 * 0.4 * 0.5));
    CHECK(bo.q_targets.size() == 4);
}

TEST_CASE("moment problem round trips") {
    MomentSpec spec;
    spec.support = ProductSupport({{0.0, 1.0, 2.0}, {0.0, 1.0, 2.0}});
    spec.m = {{1.0, 1.5}, {0.8, 1.1}};
    spec.cross_lower[{0, 1}] = 0.8;
    io::Problem p;
    p.spec = spec;
    p.objective = PiecewiseAffineObjective({{1, 1}}, {0});

    io::Problem back = io::problem_from_json(io::problem_to_json(p));
    const auto& mo = std::get<MomentSpec>(back.spec);
    CHECK(mo.m[1][1] == doctest::Approx(1.1));
    CHECK(mo.cross_lower.at({0, 1}) == doctest::Approx(0.8));
    CHECK(mo.support.values(0).size() == 3);
}

TEST_CASE("parsed union instance solves to 0.75") {
    json j = json::parse(R"({
      "objective": {"a": [[1, 0], [0, 1]], "b": [0, 0]},
      "ambiguity": {
        "kind": "pod",
        "marginals": [
          {"values": [0, 1], "probs": [0.5, 0.5]},
          {"values": [0, 1], "probs": [0.5, 0.5]}
        ]
      }
    })");
    io::Problem p = io::problem_from_json(j);
    auto res = compact::solve_pod_bivariate(std::get<PodBivariateSpec>(p.spec), p.objective);
    REQUIRE(res.bound.feasible);
    CHECK(res.bound.value == doctest::Approx(0.75));
}

TEST_CASE("malformed documents are rejected") {
    CHECK_THROWS_AS(io::problem_from_json(json{{"objective", json::object()}}), io::ParseError);

    json bad_probs = json::parse(R"({
      "objective": {"a": [[1, 0]], "b": [0]},
      "ambiguity": {
        "kind": "pod",
        "marginals": [
          {"values": [0, 1], "probs": [0.5, 0.4]},
          {"values": [0, 1], "probs": [0.5, 0.5]}
        ]
      }
    })");
    CHECK_THROWS_AS(io::problem_from_json(bad_probs), io::ParseError);

    json bad_dim = json::parse(R"({
      "objective": {"a": [[1, 0, 0]], "b": [0]},
      "ambiguity": {
        "kind": "boolean", "p": [0.5, 0.5], "max_order": 1
      }
    })");
    CHECK_THROWS_AS(io::problem_from_json(bad_dim), io::ParseError);
}

TEST_CASE("distributions round trip against their support") {
    JointDistribution joint;
    joint.support = ProductSupport({{0.0, 1.0}, {0.0, 1.0}});
    joint.mass[{0.0, 0.0}] = 0.25;
    joint.mass[{1.0, 1.0}] = 0.75;

    json j = io::distribution_to_json(joint);
    JointDistribution back = io::distribution_from_json(j, joint.support);
    CHECK(back.mass.size() == 2);
    CHECK(back.mass.at({1.0, 1.0}) == doctest::Approx(0.75));
    CHECK_NOTHROW(back.validate());
}
