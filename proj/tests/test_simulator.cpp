#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "rvline/errors.hpp"
#include "rvline/simulator.hpp"

using namespace rvline;

namespace {

Scenario canon_scenario(Position start_a, Position start_b, std::uint64_t wake_a,
                        std::uint64_t wake_b, int orient_a, int orient_b,
                        std::uint64_t max_rounds) {
    Scenario s{make_line(CanonicalSpec{}, 0, {orient_a, orient_b}),
               start_a,
               start_b,
               wake_a,
               wake_b,
               make_canon_params(start_a, orient_a),
               make_canon_params(start_b, orient_b),
               kDefaultKappa,
               max_rounds,
               true};
    return s;
}

Scenario known_d_scenario(std::uint64_t seed, Position start_a, Position start_b,
                          std::uint64_t wake_a, std::uint64_t wake_b, int orient_a, int orient_b,
                          std::uint64_t max_rounds) {
    const std::uint64_t d = start_a >= start_b ? static_cast<std::uint64_t>(start_a - start_b)
                                               : static_cast<std::uint64_t>(start_b - start_a);
    Scenario s{make_line(RandomWindowSpec{}, seed, {orient_a, orient_b}),
               start_a,
               start_b,
               wake_a,
               wake_b,
               KnownDistanceParams{d},
               KnownDistanceParams{d},
               kDefaultKappa,
               max_rounds,
               true};
    return s;
}

void check_trace_legal(const Scenario& scenario, const Trace& trace) {
    Position prev_a = scenario.start_a;
    Position prev_b = scenario.start_b;
    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
        const TraceRow& row = trace.rows[i];
        CHECK(std::abs(row.pos_a - prev_a) <= 1);
        CHECK(std::abs(row.pos_b - prev_b) <= 1);
        if (row.global_round < scenario.wake_a) {
            CHECK(row.pos_a == scenario.start_a);  // asleep agents hold their start
            CHECK(!row.move_a.has_value());
        }
        if (row.global_round < scenario.wake_b) {
            CHECK(row.pos_b == scenario.start_b);
            CHECK(!row.move_b.has_value());
        }
        // Meeting soundness: equal end-of-round positions only in the final
        // row of a run that reported Met.
        if (i + 1 < trace.rows.size()) {
            CHECK(row.pos_a != row.pos_b);
        }
        prev_a = row.pos_a;
        prev_b = row.pos_b;
    }
}

}  // namespace

TEST_CASE("canonical D=1, delay 0: meets within 704 rounds (frozen regression value)") {
    const Scenario s = canon_scenario(0, 1, 1, 1, +1, +1, 4 * 704);
    auto [outcome, trace] = run_rendezvous(s);
    const Met* met = std::get_if<Met>(&outcome);
    REQUIRE(met != nullptr);
    CHECK(met->elapsed_from_earlier_wake <= 704);
    // Frozen from the deterministic reference run: the agents (colours red at
    // O, blue at 1 in phase 0) meet when the red agent searches in block 8.
    CHECK(met->elapsed_from_earlier_wake == 57);
    CHECK(met->node == 1);
    check_trace_legal(s, trace);
}

TEST_CASE("max_rounds = 0 yields an immediate Timeout{0}") {
    const Scenario s = canon_scenario(0, 1, 1, 1, +1, +1, 0);
    auto [outcome, trace] = run_rendezvous(s);
    const Timeout* timeout = std::get_if<Timeout>(&outcome);
    REQUIRE(timeout != nullptr);
    CHECK(timeout->limit == 0);
    CHECK(trace.rows.empty());
}

TEST_CASE("scenario invariants are validated") {
    CHECK_THROWS_AS(run_rendezvous(canon_scenario(2, 2, 1, 1, +1, +1, 10)), ConfigError);
    {
        Scenario s = canon_scenario(0, 1, 0, 1, +1, +1, 10);
        CHECK_THROWS_AS(run_rendezvous(s), ConfigError);  // wake rounds are 1-indexed
    }
    {
        // known-distance agents must be told the true D
        Scenario s = known_d_scenario(5, 0, 4, 1, 1, +1, +1, 100);
        s.algorithm_a = KnownDistanceParams{3};
        s.algorithm_b = KnownDistanceParams{3};
        CHECK_THROWS_AS(run_rendezvous(s), ConfigError);
    }
    {
        // canonical knowledge must match the start position
        Scenario s = canon_scenario(0, 1, 1, 1, +1, +1, 10);
        s.algorithm_b = make_canon_params(5, +1);
        CHECK_THROWS_AS(run_rendezvous(s), ConfigError);
    }
    {
        // mixed algorithms are rejected
        Scenario s = known_d_scenario(5, 0, 4, 1, 1, +1, +1, 100);
        s.algorithm_b = UnknownDistanceParams{};
        CHECK_THROWS_AS(run_rendezvous(s), ConfigError);
    }
    {
        // canon agents need the canonical line
        Scenario s = known_d_scenario(5, 0, 1, 1, 1, +1, +1, 100);
        s.algorithm_a = make_canon_params(0, +1);
        s.algorithm_b = make_canon_params(1, +1);
        CHECK_THROWS_AS(run_rendezvous(s), ConfigError);
    }
}

TEST_CASE("opposing orientations cross on the first round without meeting") {
    // Known-distance agents sweep local-right first; with opposing frames the
    // agents at distance 1 swap positions in round 1, which must not count.
    const Scenario s = known_d_scenario(42, 0, 1, 1, 1, +1, -1, 100000);
    auto [outcome, trace] = run_rendezvous(s);
    REQUIRE(!trace.rows.empty());
    CHECK(trace.rows[0].pos_a == 1);
    CHECK(trace.rows[0].pos_b == 0);
    const Met* met = std::get_if<Met>(&outcome);
    REQUIRE(met != nullptr);
    CHECK(met->global_round > 1);
    check_trace_legal(s, trace);
}

TEST_CASE("swapping the agents preserves the outcome") {
    const Scenario s = known_d_scenario(77, 0, 5, 1, 4, +1, -1, 200000);
    Scenario swapped = known_d_scenario(77, 5, 0, 4, 1, -1, +1, 200000);
    auto [o1, t1] = run_rendezvous(s);
    auto [o2, t2] = run_rendezvous(swapped);
    const Met* m1 = std::get_if<Met>(&o1);
    const Met* m2 = std::get_if<Met>(&o2);
    REQUIRE(m1 != nullptr);
    REQUIRE(m2 != nullptr);
    CHECK(m1->elapsed_from_earlier_wake == m2->elapsed_from_earlier_wake);
    CHECK(m1->node == m2->node);
}

TEST_CASE("a late agent is found asleep at its start node during Stage 1") {
    // delay > 4*D*kappa*log*(v_a): the early agent's sweep must reach the
    // sleeping agent's start node.
    const std::uint64_t d = 3;
    const std::uint64_t kappa = kDefaultKappa;
    const Scenario probe = known_d_scenario(9, 0, 3, 1, 1, +1, +1, 10);
    const Natural label_a = probe.line.label_at(0);
    const std::uint64_t sweep = 4 * d * kappa * log_star(label_a);
    const Scenario s = known_d_scenario(9, 0, 3, 1, sweep + 2, +1, +1, 4 * sweep);
    auto [outcome, trace] = run_rendezvous(s);
    const Met* met = std::get_if<Met>(&outcome);
    REQUIRE(met != nullptr);
    CHECK(met->node == 3);  // the sleeper's start node
    CHECK(met->elapsed_from_earlier_wake <= sweep);
    check_trace_legal(s, trace);
}

TEST_CASE("identical scenarios give identical traces") {
    const Scenario s = known_d_scenario(123, 0, 4, 1, 3, +1, -1, 200000);
    auto [o1, t1] = run_rendezvous(s);
    auto [o2, t2] = run_rendezvous(s);
    REQUIRE(t1.rows.size() == t2.rows.size());
    for (std::size_t i = 0; i < t1.rows.size(); ++i) {
        CHECK(t1.rows[i].pos_a == t2.rows[i].pos_a);
        CHECK(t1.rows[i].pos_b == t2.rows[i].pos_b);
    }
    const Met* m1 = std::get_if<Met>(&o1);
    const Met* m2 = std::get_if<Met>(&o2);
    REQUIRE(m1 != nullptr);
    REQUIRE(m2 != nullptr);
    CHECK(m1->global_round == m2->global_round);
    CHECK(m1->node == m2->node);
}

TEST_CASE("a right move followed by a left move is a round trip, both orientations") {
    for (int orient : {+1, -1}) {
        // Known-distance Stage 1 turns around after sweep_radius rights (600
        // here); the position two rounds before the turn is revisited after.
        const Scenario s = known_d_scenario(55, 0, 2, 1, 1, orient, orient, 700);
        auto [outcome, trace] = run_rendezvous(s);
        bool saw_round_trip = false;
        for (std::size_t i = 1; i + 1 < trace.rows.size(); ++i) {
            if (trace.rows[i].move_a == AgentMove::Right &&
                trace.rows[i + 1].move_a == AgentMove::Left) {
                CHECK(trace.rows[i + 1].pos_a == trace.rows[i - 1].pos_a);
                saw_round_trip = true;
            }
        }
        CHECK(saw_round_trip);
    }
}

TEST_CASE("trace CSV renders asleep agents with empty moves") {
    const Scenario s = canon_scenario(0, 2, 1, 3, +1, +1, 5);
    auto [outcome, trace] = run_rendezvous(s);
    std::ostringstream csv;
    write_trace_csv(csv, trace);
    const std::string text = csv.str();
    CHECK(text.rfind("global_round,pos_a,pos_b,move_a,move_b\n", 0) == 0);
    // round 1: agent b asleep at its start (position 2), no move
    CHECK(text.find("1,1,2,right,\n") != std::string::npos);
}
