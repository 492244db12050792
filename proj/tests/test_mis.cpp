#include <doctest.h>

#include "oracles.hpp"

#include <rbcsp/mis.hpp>
#include <rbcsp/modelrb.hpp>
#include <rbcsp/target.hpp>

#include <map>
#include <random>
#include <set>
#include <sstream>

using namespace rbcsp;

namespace
{
    using ConstraintKey = std::tuple<Var, Var, std::vector<ValuePair>>;

    auto as_multiset(const Instance & instance) -> std::multiset<ConstraintKey>
    {
        std::multiset<ConstraintKey> keys;
        for (const auto & k : instance.constraints()) {
            auto pairs = k.disallowed;
            std::sort(pairs.begin(), pairs.end());
            keys.emplace(k.var_a, k.var_b, pairs);
        }
        return keys;
    }

    auto parse(const std::string & text, DimacsReport * report = nullptr) -> MisGraph
    {
        std::istringstream in(text);
        return parse_dimacs(in, report);
    }
}

TEST_CASE("csp_to_mis small cases")
{
    auto triangle = csp_to_mis(Instance(1, 3, {}));
    CHECK(triangle.num_vertices == 3);
    CHECK(triangle.edges == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}});
    CHECK(triangle.block_size == 3);

    auto g = csp_to_mis(Instance(2, 2, {Constraint{0, 1, {{0, 0}}}}));
    CHECK(g.num_vertices == 4);
    CHECK(g.edges == std::vector<Edge>{{0, 1}, {0, 2}, {2, 3}});
}

TEST_CASE("csp_to_mis edge count equals cliques plus the union of disallowed pairs")
{
    std::mt19937_64 gen(61);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + gen() % 10, d = 2 + gen() % 5;
        auto instance = oracle::random_instance(gen, n, d, gen() % (3 * n));
        std::set<std::pair<std::size_t, std::size_t>> cross;
        for (const auto & k : instance.constraints())
            for (auto [a, b] : k.disallowed) {
                auto u = k.var_a * d + a, v = k.var_b * d + b;
                cross.emplace(std::min(u, v), std::max(u, v));
            }
        CHECK(csp_to_mis(instance).edges.size() == n * d * (d - 1) / 2 + cross.size());
    }
}

TEST_CASE("mis_to_csp inverts csp_to_mis on duplicate-free instances")
{
    std::mt19937_64 gen(67);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + gen() % 12, d = 2 + gen() % 5;
        auto instance = oracle::random_instance(gen, n, d, gen() % (2 * n), false);
        auto back = mis_to_csp(csp_to_mis(instance), d);
        CHECK(back.num_vars() == n);
        CHECK(back.domain_size() == d);
        CHECK(as_multiset(back) == as_multiset(instance));
    }

    auto lone = mis_to_csp(csp_to_mis(Instance(1, 3, {})), 3);
    CHECK(lone.num_vars() == 1);
    CHECK(lone.num_constraints() == 0);
}

TEST_CASE("mis_to_csp merges duplicates and rejects non-block graphs")
{
    Constraint k{0, 1, {{0, 1}}};
    auto merged = mis_to_csp(csp_to_mis(Instance(2, 2, {k, k, Constraint{0, 1, {{1, 1}}}})), 2);
    REQUIRE(merged.num_constraints() == 1);
    CHECK(merged.constraints()[0].disallowed == std::vector<ValuePair>{{0, 1}, {1, 1}});

    MisGraph broken;
    broken.num_vertices = 6;
    broken.edges = {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}};
    try {
        (void) mis_to_csp(broken, 3);
        FAIL("expected a structure error");
    }
    catch (const InputError & e) {
        CHECK(std::string(e.what()).find("block 1") != std::string::npos);
    }
    CHECK_THROWS_AS((void) mis_to_csp(broken, 4), InputError);
}

TEST_CASE("conflict count equals internal edges of the selection")
{
    std::mt19937_64 gen(71);
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t n = 2 + gen() % 10, d = 2 + gen() % 4;
        auto instance = oracle::random_instance(gen, n, d, gen() % (3 * n), false);
        auto graph = csp_to_mis(instance);
        auto x = oracle::random_assignment(gen, n, d);
        REQUIRE(conflict_count(instance, x) == internal_edge_count(graph, selection_vertices(x, d)));
    }
}

TEST_CASE("conflict-free T-subsets map to independent sets of size T")
{
    std::mt19937_64 gen(73);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 4 + gen() % 8, d = 2 + gen() % 3;
        auto instance = mis_to_csp(csp_to_mis(oracle::random_instance(gen, n, d, gen() % (2 * n))), d);
        auto graph = csp_to_mis(instance);
        SearchState state(instance, oracle::random_assignment(gen, n, d));
        auto subset = check_target(state, TargetSpec::make(n, n - 3, 100));
        if (! subset)
            continue;
        std::vector<Vertex> chosen;
        for (auto v : *subset)
            chosen.push_back(static_cast<Vertex>(v * d + state.value(v)));
        CHECK(chosen.size() == n - 3);
        CHECK(internal_edge_count(graph, chosen) == 0);
    }
}

TEST_CASE("DIMACS parse and emit")
{
    auto g = parse("c a triangle\np edge 3 3\ne 1 2\ne 2 3\ne 1 3\n");
    CHECK(g.num_vertices == 3);
    CHECK(g.edges == std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}});
    CHECK(emit_dimacs(g) == "p edge 3 3\ne 1 2\ne 1 3\ne 2 3\n");
    CHECK(parse(emit_dimacs(g)).edges == g.edges);

    DimacsReport report;
    auto dup = parse("p edge 3 2\ne 1 2\ne 2 1\n", &report);
    CHECK(dup.edges.size() == 1);
    CHECK(report.duplicate_edges == 1);

    CHECK_THROWS_AS(parse("p edge 3 1\ne 1 1\n"), InputError);
    CHECK_THROWS_AS(parse("p edge 3 1\ne 1 4\n"), InputError);
    CHECK_THROWS_AS(parse("p edge 3 1\ne 0 1\n"), InputError);
    CHECK_THROWS_AS(parse("p edge three 1\n"), InputError);
    CHECK_THROWS_AS(parse("e 1 2\n"), InputError);
    CHECK_THROWS_AS(parse(""), InputError);
}

TEST_CASE("a Model RB instance recovered from its graph keeps the generator's counts")
{
    auto params = phase_transition_params(40);
    auto forced = generate_forced(params, 5);
    std::istringstream text(emit_dimacs(csp_to_mis(forced.instance)));
    auto graph = parse_dimacs(text);
    CHECK(graph.num_vertices == 40 * 19);
    auto recovered = mis_to_csp(graph, 19);
    CHECK(recovered.num_vars() == 40);
    CHECK(recovered.domain_size() == 19);
    CHECK(conflict_count(recovered, forced.hidden_solution) == 0);
    std::size_t distinct_pairs = 0;
    {
        std::set<std::pair<Var, Var>> seen;
        for (const auto & k : forced.instance.constraints())
            seen.emplace(k.var_a, k.var_b);
        distinct_pairs = seen.size();
    }
    CHECK(recovered.num_constraints() == distinct_pairs);
    std::size_t single = 0;
    for (const auto & k : recovered.constraints()) {
        CHECK(k.disallowed.size() >= params.forbidden_per_constraint);
        single += k.disallowed.size() == params.forbidden_per_constraint;
    }
    CHECK(single > 0);
}
