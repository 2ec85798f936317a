#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "rvline/agents.hpp"
#include "rvline/line.hpp"

namespace rvline {

/// Two-agent rendezvous scenario. Both agents run the same algorithm; the
/// per-agent spec only differs in instance knowledge (canonical agents know
/// their own position relative to O).
struct Scenario {
    LineInstance line;
    Position start_a = 0;
    Position start_b = 1;
    std::uint64_t wake_a = 1;  // global round numbers, >= 1
    std::uint64_t wake_b = 1;
    AlgorithmSpec algorithm_a;
    AlgorithmSpec algorithm_b;
    unsigned kappa = kDefaultKappa;
    std::uint64_t max_rounds = 0;
    bool capture_trace = false;
};

struct Met {
    std::uint64_t global_round;
    Position node;
    std::uint64_t elapsed_from_earlier_wake;  // global_round - min(wake) + 1
};

struct Timeout {
    std::uint64_t limit;
};

using Outcome = std::variant<Met, Timeout>;

struct TraceRow {
    std::uint64_t global_round;
    Position pos_a, pos_b;  // end-of-round positions; asleep agents hold start
    std::optional<AgentMove> move_a, move_b;  // empty while asleep
};

struct Trace {
    std::vector<TraceRow> rows;
};

// Builds the canonical-line knowledge for an agent starting at `start` whose
// local frame has the given orientation sign.
CanonParams make_canon_params(Position start, int orientation);

// Runs global rounds from min(wake_a, wake_b). Each awake agent observes its
// node's label at the start of the round, then both moves apply
// simultaneously; the agents meet iff their end-of-round positions coincide
// (crossing an edge in opposite directions is not a meeting). An agent sits
// at its start node, meet-able, before its wake round.
std::pair<Outcome, Trace> run_rendezvous(const Scenario& scenario);

const char* move_name(AgentMove move);

// CSV columns: global_round,pos_a,pos_b,move_a,move_b (empty move while asleep).
void write_trace_csv(std::ostream& out, const Trace& trace);

}  // namespace rvline
