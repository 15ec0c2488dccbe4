#include <doctest.h>

#include <cmath>
#include <limits>

#include "test_util.hpp"
#include "topstmin/oracle.hpp"

using namespace topstmin;
using namespace topstmin::oracle;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("single reachable customer is collected") {
    auto inst = Instance::from_coords(1, 10.0, {{}, {0, 0}, {1, 0}, {2, 0}}, {0, 0, 5, 0},
                                      {0, 0, 3, 0}, {}, {}, {}, Variant::P);
    auto res = brute_force_solve(inst);
    REQUIRE(!res.infeasible());
    CHECK(*res.profit == doctest::Approx(5.0));
    REQUIRE(res.best.has_value());
    CHECK(check_solution(inst, *res.best).feasible());
}

TEST_CASE("unreachable mandatory node means no feasible solution") {
    auto inst = Instance::from_coords(1, 1.0, {{}, {0, 0}, {5, 0}, {10, 0}}, {0, 0, 5, 0},
                                      {0, 0, 0, 0}, {2}, {}, {}, Variant::P);
    CHECK(brute_force_solve(inst).infeasible());
}

TEST_CASE("guards reject oversized inputs") {
    testutil::RandomInstanceOpts opts;
    opts.customers = 11;
    auto inst = testutil::random_instance(1, opts);
    CHECK_THROWS_AS(brute_force_solve(inst), std::invalid_argument);
    CHECK_THROWS_AS(brute_force_tsp_path(inst, {2, 3, 4, 5, 6, 7, 8, 9, 10}),
                    std::invalid_argument);
}

TEST_CASE("two enumeration orders agree on seeded instances") {
    for (uint64_t seed = 1; seed <= 60; ++seed) {
        testutil::RandomInstanceOpts opts;
        opts.customers = 4 + static_cast<int>(seed % 3);
        opts.m = 1 + static_cast<int>(seed % 2);
        opts.budget_factor = 0.35 + 0.1 * (seed % 4);
        opts.physical_pair_prob = 0.2;
        opts.logical_pair_prob = 0.15;
        opts.variant = seed % 2 ? Variant::PL : Variant::P;
        opts.mandatory_count = static_cast<int>(seed % 3);
        auto inst = testutil::random_instance(seed, opts);

        const auto a = brute_force_solve(inst);
        const auto b = brute_force_solve_alt(inst);
        REQUIRE(a.infeasible() == !b.has_value());
        if (!a.infeasible()) {
            CHECK(*a.profit == doctest::Approx(*b).epsilon(1e-9));
            REQUIRE(a.best.has_value());
            CHECK(check_solution(inst, *a.best).feasible());
            CHECK(a.best->profit == doctest::Approx(*a.profit));
        }
    }
}

TEST_CASE("shortest-route oracle basics") {
    auto inst = Instance::from_coords(1, 100.0, {{}, {0, 0}, {3, 4}, {6, 0}}, {0, 0, 5, 0},
                                      {0, 0, 2, 0}, {}, {}, {}, Variant::P);
    CHECK(brute_force_tsp_path(inst, {2}) == doctest::Approx(5 + 2 + 5));
    CHECK(brute_force_tsp_path(inst, {}) == doctest::Approx(6.0));

    auto cut = Instance::from_coords(1, 100.0, {{}, {0, 0}, {3, 4}, {6, 0}}, {0, 0, 5, 0},
                                     {0, 0, 2, 0}, {}, {{1, 2}, {2, 1}}, {}, Variant::P);
    CHECK(brute_force_tsp_path(cut, {2}) == kInf);
}

TEST_CASE("max-flow separation matches the hand fixtures") {
    auto fb = testutil::three_customer_point(
        {0.9, 0.8, 0.9},
        {{2, 3, 0.6}, {3, 4, 0.7}, {4, 2, 0.9}, {2, 5, 0.3}, {1, 3, 0.2}, {3, 5, 0.1},
         {1, 4, 0.2}});
    auto sgb = build_support_graph(fb.instance, fb.built.vmap, fb.point);
    auto wits = secs_maxflow_separation(sgb);
    REQUIRE(!wits.empty());
    double best = 0.0;
    for (const auto &w : wits)
        if (w.set == std::vector<int>{2, 3, 4}) best = std::max(best, w.violation);
    CHECK(best == doctest::Approx(0.5).epsilon(1e-6));

    auto fa = testutil::three_customer_point(
        {0.9, 0.8, 0.9},
        {{2, 3, 0.6}, {3, 4, 0.7}, {2, 4, 0.2}, {1, 2, 0.9}, {2, 5, 0.1}, {1, 3, 0.2},
         {3, 5, 0.1}, {4, 5, 0.9}});
    auto sga = build_support_graph(fa.instance, fa.built.vmap, fa.point);
    CHECK(secs_maxflow_separation(sga).empty());
}

TEST_CASE("graph encodings: path feasible, star infeasible") {
    // path on four vertices has a spanning path
    auto p4 = hpp_reduce(4, {{1, 2}, {2, 3}, {3, 4}});
    CHECK(!brute_force_solve(p4).infeasible());
    CHECK(p4.exact_time());
    CHECK(p4.t_max() == 0.0);
    CHECK(p4.m() == 1);
    CHECK(p4.mandatory().size() == 4);

    // three-leaf star has none
    auto star = hpp_reduce(4, {{1, 2}, {1, 3}, {1, 4}});
    CHECK(brute_force_solve(star).infeasible());
}

TEST_CASE("feasibility of the encoding tracks spanning-path existence") {
    forge::Rng rng(2024);
    int feasible = 0, total = 0;
    for (int trial = 0; trial < 120; ++trial) {
        const int nv = 2 + static_cast<int>(rng.uniform() * 6);  // 2..7
        std::vector<std::pair<int, int>> edges;
        const double p = 0.2 + 0.6 * rng.uniform();
        for (int u = 1; u <= nv; ++u)
            for (int v = u + 1; v <= nv; ++v)
                if (rng.uniform() < p) edges.push_back({u, v});
        const bool direct = hamiltonian_path_exists(nv, edges);
        const bool reduced = !brute_force_solve(hpp_reduce(nv, edges)).infeasible();
        CHECK(direct == reduced);
        ++total;
        feasible += direct ? 1 : 0;
    }
    CHECK(feasible > 10);
    CHECK(feasible < total);
}
