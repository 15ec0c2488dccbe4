#include <doctest.h>

#include <cmath>

#include "test_util.hpp"
#include "topstmin/formulations.hpp"
#include "topstmin/oracle.hpp"
#include "topstmin/simplex.hpp"

using namespace topstmin;

namespace {

Instance one_customer() {
    return Instance::from_coords(1, 20.0, {{}, {0, 0}, {1, 0}, {2, 0}}, {0, 0, 5, 0},
                                 {0, 0, 3, 0}, {}, {}, {}, Variant::P);
}

int count_role(const BuiltModel &bm, VarRole role) {
    int c = 0;
    for (int v = 0; v < bm.model.num_vars(); ++v)
        if (bm.vmap.key_of(v).role == role) ++c;
    return c;
}

}  // namespace

TEST_CASE("single-customer variable counts") {
    auto inst = one_customer();
    // traversable arcs: (1,2), (2,3), (1,3)
    auto compact = build_compact(inst);
    CHECK(count_role(compact, VarRole::ArcX) == 3);
    CHECK(count_role(compact, VarRole::FlowZ) == 3);
    CHECK(count_role(compact, VarRole::NodeY) == 1);
    CHECK(compact.model.num_vars() == 7);

    auto mixed = build_mixed(inst);  // m = 1 collapses to the same counts
    CHECK(mixed.model.num_vars() == 7);
}

TEST_CASE("PL adds route-identifier and conflict variables") {
    auto inst = Instance::from_coords(2, 50.0, {{}, {0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}},
                                      {0, 0, 1, 2, 3, 0}, {0, 0, 0, 0, 0, 0}, {}, {},
                                      {{2, 4}, {3, 4}}, Variant::PL);
    auto bm = build_compact(inst);
    CHECK(count_role(bm, VarRole::RouteV) == 3);
    CHECK(count_role(bm, VarRole::PairU) == 2);
}

TEST_CASE("feature ablation leaves a plain model") {
    testutil::RandomInstanceOpts opts;
    opts.customers = 4;
    auto inst = testutil::random_instance(5, opts);
    auto bm = build_compact(inst);
    for (const auto &row : bm.model.rows) {
        CHECK(row.name.rfind("mand", 0) != 0);
        CHECK(row.name.rfind("conf", 0) != 0);
        CHECK(row.name.rfind("vfirst", 0) != 0);
    }
    for (const auto &var : bm.model.vars) CHECK(var.upper > 0.0);  // nothing zero-fixed
}

TEST_CASE("physically incompatible arcs are zero-fixed in both models") {
    auto inst = Instance::from_coords(1, 50.0, {{}, {0, 0}, {1, 0}, {2, 0}, {3, 0}},
                                      {0, 0, 1, 1, 0}, {0, 0, 0, 0, 0}, {}, {{2, 3}, {3, 2}},
                                      {}, Variant::P);
    auto compact = build_compact(inst);
    CHECK(compact.model.vars[compact.vmap.arc_x(2, 3)].upper == 0.0);
    CHECK(compact.model.vars[compact.vmap.arc_x(3, 2)].upper == 0.0);
    CHECK(compact.model.vars[compact.vmap.arc_x(2, 4)].upper == 1.0);
    auto mixed = build_mixed(inst);
    CHECK(mixed.model.vars[mixed.vmap.arc_x(2, 3, 1)].upper == 0.0);
}

TEST_CASE("relaxation value bounds the exhaustive optimum from above") {
    for (uint64_t seed = 1; seed <= 12; ++seed) {
        testutil::RandomInstanceOpts opts;
        opts.customers = 5;
        opts.m = 2;
        opts.budget_factor = 0.5;
        opts.physical_pair_prob = 0.15;
        auto inst = testutil::random_instance(seed, opts);
        const auto oracle_res = oracle::brute_force_solve(inst);
        if (oracle_res.infeasible()) continue;

        auto bm = build_compact(inst);
        DenseSimplex lp;
        lp.load(bm.model);
        REQUIRE(lp.solve() == LpStatus::Optimal);
        CHECK(lp.objective() >= *oracle_res.profit - 1e-6);
    }
}

TEST_CASE("extraction rebuilds empty and real routes") {
    auto inst = Instance::from_coords(2, 50.0, {{}, {0, 0}, {1, 0}, {2, 0}, {3, 0}},
                                      {0, 0, 4, 9, 0}, {0, 0, 1, 1, 0}, {}, {}, {}, Variant::P);
    auto bm = build_compact(inst);

    SUBCASE("all vehicles idle") {
        std::vector<double> x(bm.model.num_vars(), 0.0);
        x[bm.vmap.arc_x(1, 4)] = 2.0;
        auto sol = extract_solution(inst, bm.vmap, x);
        CHECK(sol.routes.size() == 2);
        CHECK(sol.profit == doctest::Approx(0.0));
        for (auto &r : sol.routes) CHECK(r.empty_route());
    }
    SUBCASE("two single-customer routes") {
        std::vector<double> x(bm.model.num_vars(), 0.0);
        x[bm.vmap.arc_x(1, 2)] = 1.0;
        x[bm.vmap.arc_x(2, 4)] = 1.0;
        x[bm.vmap.arc_x(1, 3)] = 1.0;
        x[bm.vmap.arc_x(3, 4)] = 1.0;
        x[bm.vmap.node_y(2)] = 1.0;
        x[bm.vmap.node_y(3)] = 1.0;
        auto sol = extract_solution(inst, bm.vmap, x);
        CHECK(sol.routes.size() == 2);
        CHECK(sol.profit == doctest::Approx(13.0));
        CHECK(check_solution(inst, sol).feasible());
    }
    SUBCASE("disconnected arc values are rejected") {
        std::vector<double> x(bm.model.num_vars(), 0.0);
        x[bm.vmap.arc_x(1, 4)] = 1.0;
        x[bm.vmap.arc_x(1, 2)] = 1.0;  // leaves node 2 with no way out
        CHECK_THROWS_AS(extract_solution(inst, bm.vmap, x), ExtractionError);
    }
}

TEST_CASE("mixed-model extraction splits per-route arc systems") {
    auto inst = Instance::from_coords(2, 50.0, {{}, {0, 0}, {1, 0}, {2, 0}, {3, 0}},
                                      {0, 0, 4, 9, 0}, {0, 0, 1, 1, 0}, {}, {}, {}, Variant::P);
    auto bm = build_mixed(inst);
    std::vector<double> x(bm.model.num_vars(), 0.0);
    x[bm.vmap.arc_x(1, 3, 1)] = 1.0;
    x[bm.vmap.arc_x(3, 4, 1)] = 1.0;
    x[bm.vmap.node_y(3, 1)] = 1.0;
    x[bm.vmap.arc_x(1, 4, 2)] = 1.0;
    auto sol = extract_solution(inst, bm.vmap, x);
    CHECK(sol.routes.size() == 2);
    CHECK(sol.profit == doctest::Approx(9.0));
}

TEST_CASE("LP text dump mentions objective, rows and integrality") {
    auto bm = build_compact(one_customer());
    const std::string text = bm.model.to_lp_text();
    CHECK(text.find("Maximize") != std::string::npos);
    CHECK(text.find("Subject To") != std::string::npos);
    CHECK(text.find("Generals") != std::string::npos);
    CHECK(text.find("x_1_2") != std::string::npos);
}
