#include <doctest.h>

#include "oracles.hpp"

#include <rbcsp/modelrb.hpp>
#include <rbcsp/ulsa.hpp>

#include <algorithm>
#include <random>
#include <set>

using namespace rbcsp;

namespace
{
    auto sorted(std::span<const ConstraintId> ids) -> std::vector<ConstraintId>
    {
        std::vector<ConstraintId> v(ids.begin(), ids.end());
        std::sort(v.begin(), v.end());
        return v;
    }

    // Vars 0..2, d = 2. Constraint 0 forbids (0,0) on (0,1); moving either
    // endpoint to 1 clears it but hits two copies of a (1,0) constraint with var 2.
    auto trap() -> Instance
    {
        return Instance(3, 2,
            {Constraint{0, 1, {{0, 0}}}, Constraint{0, 2, {{1, 0}}}, Constraint{0, 2, {{1, 0}}},
                Constraint{1, 2, {{1, 0}}}, Constraint{1, 2, {{1, 0}}}});
    }
}

TEST_CASE("init_state with no constraints picks every value")
{
    Instance free(4, 3, {});
    std::set<Value> seen;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed, Stream::solve);
        auto state = init_state(free, rng);
        CHECK(state.conflicts() == 0);
        CHECK(state.iteration() == 0);
        for (Var v = 0; v < 4; ++v) {
            CHECK(state.timestamp(v) == 0);
            seen.insert(state.value(v));
        }
    }
    CHECK(seen.size() == 3);
}

TEST_CASE("init_state never completes the only forbidden pair")
{
    // Whichever variable goes second sees the first and avoids (0,0).
    Instance one(2, 2, {Constraint{0, 1, {{0, 0}}}});
    std::set<std::vector<Value>> outcomes;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed, Stream::solve);
        auto state = init_state(one, rng);
        CHECK(state.conflicts() == 0);
        outcomes.insert({state.value(0), state.value(1)});
    }
    CHECK(outcomes == std::set<std::vector<Value>>{{0, 1}, {1, 0}, {1, 1}});
}

TEST_CASE("init_state violated set equals the recount")
{
    std::mt19937_64 gen(41);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + gen() % 30, d = 2 + gen() % 6;
        auto instance = oracle::random_instance(gen, n, d, gen() % (5 * n));
        Rng rng(trial, Stream::solve);
        auto state = init_state(instance, rng);
        REQUIRE(state.assignment().complete());
        CHECK(sorted(state.violated().items()) == oracle::violated_ids(instance, oracle::raw(state.assignment())));
    }
}

TEST_CASE("can_change_without_increase")
{
    Instance isolated(2, 3, {});
    SearchState iso(isolated, Assignment(std::vector<Value>{0, 0}));
    CHECK(can_change_without_increase(iso, 0));

    Instance one(2, 2, {Constraint{0, 1, {{1, 0}}}});
    SearchState s(one, Assignment(std::vector<Value>{0, 0}));
    CHECK_FALSE(can_change_without_increase(s, 0));
    CHECK(can_change_without_increase(s, 1));

    std::mt19937_64 gen(43);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n = 2 + gen() % 15, d = 2 + gen() % 5;
        auto instance = oracle::random_instance(gen, n, d, gen() % (3 * n));
        SearchState st(instance, oracle::random_assignment(gen, n, d));
        std::vector<int> deltas(d);
        for (Var v = 0; v < n; ++v) {
            st.evaluate_all_values(v, deltas);
            bool expect = false;
            for (Value u = 0; u < d; ++u)
                expect |= u != st.value(v) && deltas[u] <= 0;
            CHECK(can_change_without_increase(st, v) == expect);
        }
    }
}

TEST_CASE("step keeps S = {i} when the preferred endpoint has a free move")
{
    Instance one(2, 3, {Constraint{0, 1, {{0, 0}}}});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SearchState state(one, Assignment(std::vector<Value>{0, 0}));
        Rng rng(seed, Stream::solve);
        StepStats stats;
        auto info = step(state, rng, stats);
        CHECK_FALSE(info.expanded);
        CHECK(info.changed == info.preferred);
        CHECK(info.delta <= 0);
        CHECK(stats.expansions == 0);
        CHECK(state.conflicts() == 0);
    }
}

TEST_CASE("step expands to both endpoints when the preferred one must worsen")
{
    auto instance = trap();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SearchState state(instance, Assignment(std::vector<Value>{0, 0, 1}));
        state.apply_change(2, 0);
        REQUIRE(state.conflicts() == 1);
        REQUIRE(state.timestamp(0) < state.iteration());
        REQUIRE(state.timestamp(1) < state.iteration());

        Rng rng(seed, Stream::solve);
        StepStats stats;
        auto info = step(state, rng, stats);
        CHECK(info.expanded);
        CHECK(stats.expansions == 1);
        CHECK(info.delta == 1);
        CHECK(stats.worsening == 1);
        CHECK((info.changed == 0 || info.changed == 1));
    }
}

TEST_CASE("step does not expand when the other endpoint changed last")
{
    auto instance = trap();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        SearchState state(instance, Assignment(std::vector<Value>{0, 1, 0}));
        state.apply_change(1, 0);
        Rng rng(seed, Stream::solve);
        StepStats stats;
        auto info = step(state, rng, stats);
        CHECK(info.preferred == 0);
        CHECK(info.other == 1);
        CHECK_FALSE(info.expanded);
        CHECK(info.changed == 0);
        CHECK(info.delta == 1);
    }
}

TEST_CASE("step on a state without conflicts is a contract violation")
{
    Instance one(2, 2, {Constraint{0, 1, {{0, 0}}}});
    SearchState state(one, Assignment(std::vector<Value>{1, 1}));
    Rng rng(1, Stream::solve);
    StepStats stats;
    CHECK_THROWS_AS(step(state, rng, stats), ContractViolation);
}

TEST_CASE("step invariants over long random walks")
{
    std::mt19937_64 gen(47);
    for (int trial = 0; trial < 10; ++trial) {
        auto instance = generate(phase_transition_params(12 + trial), trial);
        Rng rng(trial, Stream::solve);
        auto state = init_state(instance, rng);
        StepStats stats;
        StepWorkspace workspace(instance.domain_size());
        for (int i = 0; i < 3000 && state.conflicts() > 0; ++i) {
            auto x_before = state.assignment();
            auto picked_ok = true;
            auto info = step(state, rng, stats, workspace);
            const auto & k = instance.constraint(info.conflict);
            picked_ok = oracle::pair_forbidden(k, x_before[k.var_a], x_before[k.var_b]);
            REQUIRE(picked_ok);
            REQUIRE(x_before[info.changed] != state.value(info.changed));
            REQUIRE(info.delta == static_cast<int>(oracle::recount(instance, state.assignment()))
                - static_cast<int>(oracle::recount(instance, x_before)));
            REQUIRE(state.timestamp(info.changed) == state.iteration());
            for (Var v = 0; v < instance.num_vars(); ++v)
                if (v != info.changed)
                    REQUIRE(state.timestamp(v) < state.iteration());
        }
        CHECK(stats.expansions <= stats.iterations);
        CHECK(stats.worsening <= stats.iterations);
    }
}

TEST_CASE("run: trivial, toy and deterministic cases")
{
    Instance free(5, 3, {});
    auto r0 = run(free, {}, 1);
    CHECK(r0.success);
    CHECK(r0.full_solution);
    CHECK(r0.iterations == 0);

    auto params = ModelRbParams::make(6, 0.8, 1.5, 0.25);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto forced = generate_forced(params, seed);
        auto r = run(forced.instance, {}, seed + 100);
        REQUIRE(r.success);
        REQUIRE(r.assignment);
        CHECK(oracle::recount(forced.instance, *r.assignment) == 0);
        CHECK(r.best_conflicts == 0);
        CHECK(r.witness.size() == 6);
    }

    auto forced = generate_forced(phase_transition_params(20), 9);
    UlsaConfig config;
    config.record_best = true;
    auto a = run(forced.instance, config, 77);
    auto b = run(forced.instance, config, 77);
    CHECK(a.iterations == b.iterations);
    CHECK(a.stats.expansions == b.stats.expansions);
    CHECK(a.stats.worsening == b.stats.worsening);
    CHECK(*a.assignment == *b.assignment);
    CHECK(*a.best_assignment == *b.best_assignment);
}

TEST_CASE("run: budget, restarts and stats flag")
{
    // Every pair forbidden: one conflict forever.
    Instance stuck(2, 2, {Constraint{0, 1, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}}});
    UlsaConfig config;
    config.max_iterations = 100;
    auto r = run(stuck, config, 3);
    CHECK_FALSE(r.success);
    CHECK(r.iterations == 100);
    CHECK(r.best_conflicts == 1);
    CHECK(r.restarts == 0);
    CHECK(r.stats.iterations == 100);

    config.restart_interval = 10;
    auto restarted = run(stuck, config, 3);
    CHECK(restarted.iterations == 100);
    CHECK(restarted.restarts == 9);

    config.restart_interval = 0;
    CHECK_THROWS_AS((void) run(stuck, config, 3), InputError);

    UlsaConfig quiet;
    quiet.max_iterations = 50;
    quiet.stats_enabled = false;
    auto q = run(stuck, quiet, 3);
    CHECK(q.stats.iterations == 50);
    CHECK(q.stats.expansions == 0);
    CHECK(q.stats.worsening == 0);
}

TEST_CASE("run with a target returns a verified conflict-free subset")
{
    // Unsatisfiable core on (0,1); the rest is free, so T = n - 1 is reachable.
    std::vector<Constraint> ks{Constraint{0, 1, {{0, 0}, {0, 1}, {1, 0}, {1, 1}}}};
    Instance instance(5, 2, ks);
    UlsaConfig config;
    config.max_iterations = 1000;
    config.target = TargetSpec::make(5, 4, 5);
    auto r = run(instance, config, 1);
    REQUIRE(r.success);
    CHECK_FALSE(r.full_solution);
    CHECK(r.witness.size() == 4);
    CHECK(std::is_sorted(r.witness.begin(), r.witness.end()));
    CHECK(conflicts_within(instance, *r.assignment, r.witness) == 0);

    config.target = TargetSpec::make(5, 5, 5);
    CHECK_FALSE(run(instance, config, 1).success);
}
