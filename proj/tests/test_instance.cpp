#include <doctest.h>

#include <algorithm>

#include "test_util.hpp"
#include "topstmin/instance.hpp"
#include "topstmin/instance_io.hpp"

using namespace topstmin;

namespace {

Instance tiny_line() {
    // 1 -- 2 -- 3 -- 4 on a line, unit spacing
    return Instance::from_coords(1, 100.0, {{}, {0, 0}, {1, 0}, {2, 0}, {3, 0}},
                                 {0, 0, 5, 7, 0}, {0, 0, 3, 1, 0}, {}, {}, {}, Variant::P);
}

}  // namespace

TEST_CASE("route duration sums arc travel and interior service") {
    auto inst = Instance::from_matrix(
        3, 1, 100.0,
        {0, 0, 0, 0, 0, 0, 2, 5, 0, 0, 0, 4, 0, 0, 0, 0},  // t(1,2)=2 t(1,3)=5 t(2,3)=4
        {0, 0, 1, 0}, {0, 0, 3, 0}, {}, {}, {}, Variant::P);
    CHECK(route_duration(inst, {1, 3}) == doctest::Approx(5.0));
    CHECK(route_duration(inst, {1, 2, 3}) == doctest::Approx(2 + 3 + 4));
}

TEST_CASE("route duration rejects unknown nodes and missing arcs") {
    auto inst = tiny_line();
    CHECK_THROWS_AS(route_duration(inst, {1, 9, 4}), RouteError);
    CHECK_THROWS_AS(route_duration(inst, {1, 4, 2}), RouteError);  // arc out of the destination
    CHECK_THROWS_AS(route_duration(inst, {3, 1}), RouteError);     // arc into the source
}

TEST_CASE("duration matches a reversed-order re-accumulation on a seeded instance") {
    testutil::RandomInstanceOpts opts;
    opts.customers = 6;
    auto inst = testutil::random_instance(17, opts);
    const std::vector<int> route{1, 3, 5, 2, 7, 4, 8};
    const double fwd = route_duration(inst, route);
    // independent oracle: accumulate arcs and services in reverse order
    double rev = 0.0;
    for (size_t i = route.size() - 1; i > 0; --i) rev += inst.travel(route[i - 1], route[i]);
    for (size_t i = route.size() - 2; i > 0; --i) rev += inst.service(route[i]);
    CHECK(fwd == doctest::Approx(rev).epsilon(1e-12));
}

TEST_CASE("interior reversal is duration-neutral only under symmetry") {
    // co-located source and destination, Euclidean costs: mirrored visit
    // order keeps the duration
    auto sym = Instance::from_coords(1, 100.0, {{}, {0, 0}, {1, 2}, {4, 1}, {0, 0}},
                                     {0, 0, 1, 1, 0}, {0, 0, 1, 2, 0}, {}, {}, {}, Variant::P);
    CHECK(route_duration(sym, {1, 2, 3, 4}) ==
          doctest::Approx(route_duration(sym, {1, 3, 2, 4})).epsilon(1e-12));

    // directed matrix: the mirrored order may differ
    auto asym = Instance::from_matrix(
        4, 1, 100.0,
        {0, 0, 0, 0, 0, 0, 0, 1, 9, 0, 5, 0, 1, 0, 9, 5, 0, 1, 0, 1, 9, 5, 0, 0, 0},
        {0, 0, 1, 1, 0}, {0, 0, 0, 0, 0}, {}, {}, {}, Variant::P);
    CHECK(route_duration(asym, {1, 2, 3, 4}) !=
          doctest::Approx(route_duration(asym, {1, 3, 2, 4})).epsilon(1e-12));
}

TEST_CASE("check_solution accepts empty routes when nothing is mandatory") {
    auto inst = Instance::from_coords(2, 10.0, {{}, {0, 0}, {1, 0}, {2, 0}, {3, 0}},
                                      {0, 0, 5, 7, 0}, {0, 0, 3, 1, 0}, {}, {}, {}, Variant::P);
    auto sol = Solution::of(inst, {Route::of(inst, {1, 4}), Route::of(inst, {1, 4})});
    CHECK(check_solution(inst, sol).feasible());
    CHECK(sol.profit == doctest::Approx(0.0));
}

TEST_CASE("check_solution reports every violation class") {
    auto inst = Instance::from_coords(2, 4.0, {{}, {0, 0}, {1, 0}, {2, 0}, {3, 0}},
                                      {0, 0, 5, 7, 0}, {0, 0, 3, 1, 0}, {3}, {{2, 3}, {3, 2}},
                                      {{2, 3}}, Variant::PL);
    SUBCASE("mandatory missing") {
        auto sol = Solution::of(inst, {Route::of(inst, {1, 4}), Route::of(inst, {1, 4})});
        auto rep = check_solution(inst, sol);
        REQUIRE(rep.violations.size() == 1);
        CHECK(rep.violations[0].kind == Violation::Kind::MandatoryMissing);
        CHECK(rep.violations[0].i == 3);
    }
    SUBCASE("revisit across routes") {
        auto sol = Solution::of(inst, {Route::of(inst, {1, 3, 4}), Route::of(inst, {1, 3, 4})});
        auto rep = check_solution(inst, sol);
        bool seen = false;
        for (auto &v : rep.violations) seen |= v.kind == Violation::Kind::Revisit && v.i == 3;
        CHECK(seen);
    }
    SUBCASE("physical arc and duration") {
        auto sol = Solution::of(inst, {Route::of(inst, {1, 2, 3, 4}), Route::of(inst, {1, 4})});
        auto rep = check_solution(inst, sol);
        bool phys = false, dur = false, logi = false;
        for (auto &v : rep.violations) {
            phys |= v.kind == Violation::Kind::PhysicalArc && v.i == 2 && v.j == 3;
            dur |= v.kind == Violation::Kind::DurationExceeded;
            logi |= v.kind == Violation::Kind::LogicalPair;
        }
        CHECK(phys);
        CHECK(dur);  // 1 + 3 + 1 + 1 + 1 = 7 > 4
        CHECK(logi);
    }
    SUBCASE("variant gating of logical pairs") {
        auto p_inst =
            Instance::from_coords(2, 100.0, {{}, {0, 0}, {1, 0}, {2, 0}, {3, 0}},
                                  {0, 0, 5, 7, 0}, {0, 0, 3, 1, 0}, {}, {}, {{2, 3}}, Variant::P);
        auto sol = Solution::of(p_inst, {Route::of(p_inst, {1, 2, 3, 4}), Route::of(p_inst, {1, 4})});
        CHECK(check_solution(p_inst, sol).feasible());
        auto pl_inst =
            Instance::from_coords(2, 100.0, {{}, {0, 0}, {1, 0}, {2, 0}, {3, 0}},
                                  {0, 0, 5, 7, 0}, {0, 0, 3, 1, 0}, {}, {}, {{2, 3}}, Variant::PL);
        auto sol2 =
            Solution::of(pl_inst, {Route::of(pl_inst, {1, 2, 3, 4}), Route::of(pl_inst, {1, 4})});
        auto rep = check_solution(pl_inst, sol2);
        REQUIRE(rep.violations.size() == 1);
        CHECK(rep.violations[0].kind == Violation::Kind::LogicalPair);
    }
}

TEST_CASE("check_solution matches an independent re-check on random solutions") {
    for (uint64_t seed = 1; seed <= 20; ++seed) {
        testutil::RandomInstanceOpts opts;
        opts.customers = 5;
        opts.m = 2;
        opts.physical_pair_prob = 0.2;
        opts.logical_pair_prob = 0.2;
        opts.variant = Variant::PL;
        opts.mandatory_count = 1;
        auto inst = testutil::random_instance(seed, opts);

        // random (not necessarily feasible) solutions with valid structure
        forge::Rng rng(seed * 977);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<Route> routes;
            std::vector<int> pool;
            for (int k = 2; k <= inst.n() - 1; ++k) pool.push_back(k);
            bool constructible = true;
            for (int r = 0; r < inst.m() && constructible; ++r) {
                std::vector<int> seq{1};
                const int len = static_cast<int>(rng.uniform() * 3);
                for (int s = 0; s < len && !pool.empty(); ++s) {
                    const size_t pick = static_cast<size_t>(rng.uniform() * pool.size());
                    const int nxt = pool[pick];
                    if (!inst.traversable(seq.back(), nxt)) continue;
                    seq.push_back(nxt);
                    pool.erase(pool.begin() + pick);
                }
                if (!inst.traversable(seq.back(), inst.n())) {
                    constructible = false;
                    break;
                }
                seq.push_back(inst.n());
                routes.push_back(Route::of(inst, seq));
            }
            if (!constructible) continue;
            auto sol = Solution::of(inst, routes);
            const auto rep = check_solution(inst, sol);

            // independent checker
            bool ok = true;
            std::vector<int> count(inst.n() + 1, 0);
            for (const auto &r : routes) {
                if (!inst.within_budget(route_duration(inst, r.nodes))) ok = false;
                for (size_t i = 0; i + 1 < r.nodes.size(); ++i)
                    if (inst.forbidden(r.nodes[i], r.nodes[i + 1])) ok = false;
                for (size_t i = 1; i + 1 < r.nodes.size(); ++i) ++count[r.nodes[i]];
                for (size_t i = 1; i + 1 < r.nodes.size(); ++i)
                    for (size_t j = i + 1; j + 1 < r.nodes.size(); ++j)
                        if (inst.variant() == Variant::PL &&
                            inst.logically_incompatible(r.nodes[i], r.nodes[j]))
                            ok = false;
            }
            for (int k = 2; k <= inst.n() - 1; ++k)
                if (count[k] > 1) ok = false;
            for (int k : inst.mandatory())
                if (count[k] == 0) ok = false;
            CHECK(rep.feasible() == ok);
        }
    }
}

TEST_CASE("minimal file parses") {
    const std::string text =
        "n 3\nm 1\ntmax 10\n0 0 0 0\n1 0 5 2\n2 0 0 0\n"
        "MANDATORY\n\nPHYSICAL\nLOGICAL\nVARIANT\nP\n";
    auto inst = parse_instance(text);
    CHECK(inst.n() == 3);
    CHECK(inst.num_customers() == 1);
    CHECK(inst.profit(2) == 5);
    CHECK(inst.service(2) == 2);
}

TEST_CASE("bare header plus nodes parses as a plain instance") {
    const std::string text = "n 3\nm 2\ntmax 7.5\n0 0 0\n1 0 5\n2 0 0\n";
    auto inst = parse_instance(text);
    CHECK(inst.m() == 2);
    CHECK(inst.variant() == Variant::P);
    CHECK(inst.mandatory().empty());
    CHECK(inst.physical().empty());
    CHECK(inst.service(2) == 0.0);
}

TEST_CASE("parse rejects malformed input") {
    CHECK_THROWS_AS(parse_instance("m 1\nn 3\n"), ParseError);                // header order
    CHECK_THROWS_AS(parse_instance("n 3\nm 1\ntmax 5\n0 0 0\n1 0 5\n"), ParseError);  // nodes
    const std::string base = "n 4\nm 1\ntmax 10\n0 0 0 0\n1 0 5 0\n1 1 5 0\n2 0 0 0\n";
    CHECK_THROWS_AS(parse_instance(base + "MANDATORY\n1\n"), ParseError);     // not a customer
    CHECK_THROWS_AS(parse_instance(base + "PHYSICAL\n2 2\n"), ParseError);    // self loop
    CHECK_THROWS_AS(parse_instance(base + "LOGICAL\n3 2\n"), ParseError);     // i >= j
    CHECK_THROWS_AS(parse_instance(base + "MANDATORY\n2\nMANDATORY\n2\n"), ParseError);
    CHECK_THROWS_AS(parse_instance(base + "VARIANT\nQ\n"), ParseError);
    ParseOptions sym;
    sym.require_symmetric_physical = true;
    CHECK_THROWS_AS(parse_instance(base + "PHYSICAL\n2 3\n", sym), ParseError);
    CHECK_NOTHROW(parse_instance(base + "PHYSICAL\n2 3\n3 2\n", sym));
}

TEST_CASE("write then parse is the identity on seeded instances") {
    for (uint64_t seed = 1; seed <= 50; ++seed) {
        testutil::RandomInstanceOpts opts;
        opts.customers = 2 + static_cast<int>(seed % 7);
        opts.m = 1 + static_cast<int>(seed % 3);
        opts.physical_pair_prob = 0.3;
        opts.logical_pair_prob = 0.3;
        opts.variant = seed % 2 ? Variant::PL : Variant::P;
        opts.mandatory_count = static_cast<int>(seed % 2);
        auto inst = testutil::random_instance(seed, opts);

        const std::string text = write_instance(inst);
        auto back = parse_instance(text);
        CHECK(back.n() == inst.n());
        CHECK(back.m() == inst.m());
        CHECK(back.t_max() == inst.t_max());
        CHECK(back.variant() == inst.variant());
        CHECK(back.mandatory() == inst.mandatory());
        CHECK(back.physical() == inst.physical());
        CHECK(back.logical() == inst.logical());
        for (int k = 1; k <= inst.n(); ++k) {
            CHECK(back.profit(k) == inst.profit(k));
            CHECK(back.service(k) == inst.service(k));
            CHECK(back.coord(k).x == inst.coord(k).x);
            CHECK(back.coord(k).y == inst.coord(k).y);
        }
        CHECK(write_instance(back) == text);  // canonical form is a fixed point
    }
}
