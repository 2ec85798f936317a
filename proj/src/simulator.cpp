#include "rvline/simulator.hpp"

#include <cstdlib>
#include <ostream>
#include <string>

#include "rvline/errors.hpp"

namespace rvline {

namespace {

// Lazily filled per-run label cache; spares the generators from recomputing
// the same positions every round.
class LabelCache {
public:
    explicit LabelCache(const LineInstance& line) : line_(line) {}

    const Natural& at(Position pos) {
        auto& lane = pos >= 0 ? nonneg_ : neg_;
        const auto idx = static_cast<std::size_t>(pos >= 0 ? pos : -(pos + 1));
        if (idx >= lane.size()) {
            lane.resize(idx + 1);
        }
        if (!lane[idx]) {
            lane[idx] = line_.label_at(pos);
        }
        return *lane[idx];
    }

private:
    const LineInstance& line_;
    std::vector<std::optional<Natural>> nonneg_, neg_;
};

std::uint64_t abs_distance(Position a, Position b) {
    return a >= b ? static_cast<std::uint64_t>(a - b) : static_cast<std::uint64_t>(b - a);
}

void validate(const Scenario& scenario) {
    if (scenario.start_a == scenario.start_b) {
        throw ConfigError("agents must start at distinct nodes (D >= 1)");
    }
    if (scenario.wake_a < 1 || scenario.wake_b < 1) {
        throw ConfigError("wake rounds are 1-indexed");
    }
    if (scenario.algorithm_a.index() != scenario.algorithm_b.index()) {
        throw ConfigError("both agents must run the same algorithm");
    }
    if (const auto* known = std::get_if<KnownDistanceParams>(&scenario.algorithm_a)) {
        const auto* known_b = std::get_if<KnownDistanceParams>(&scenario.algorithm_b);
        const std::uint64_t d = abs_distance(scenario.start_a, scenario.start_b);
        if (known->distance != d || known_b->distance != d) {
            throw ConfigError("known-distance agents must be given the true distance D");
        }
    }
    if (std::holds_alternative<CanonParams>(scenario.algorithm_a)) {
        if (!std::holds_alternative<CanonicalSpec>(scenario.line.spec())) {
            throw ConfigError("canonical-line agents require the Canonical generator");
        }
        const CanonParams expect_a = make_canon_params(scenario.start_a, scenario.line.orientation_a());
        const CanonParams expect_b = make_canon_params(scenario.start_b, scenario.line.orientation_b());
        const auto& got_a = std::get<CanonParams>(scenario.algorithm_a).knowledge;
        const auto& got_b = std::get<CanonParams>(scenario.algorithm_b).knowledge;
        auto same = [](const CanonKnowledge& x, const CanonKnowledge& y) {
            return x.dist_to_o == y.dist_to_o && x.side == y.side &&
                   x.direction_to_o == y.direction_to_o;
        };
        if (!same(got_a, expect_a.knowledge) || !same(got_b, expect_b.knowledge)) {
            throw ConfigError("CanonKnowledge inconsistent with start position and orientation");
        }
    }
}

}  // namespace

CanonParams make_canon_params(Position start, int orientation) {
    if (orientation != 1 && orientation != -1) {
        throw ConfigError("orientation must be +1 or -1");
    }
    CanonKnowledge knowledge;
    knowledge.dist_to_o = abs_distance(start, 0);
    knowledge.side = start >= 0 ? CanonSide::AtOrRightOfO : CanonSide::LeftOfO;
    // Global direction towards O; for start == 0 this degenerates to "global
    // left", which is what direction_to_o means on the AtOrRightOfO side.
    const int global_dir_to_o = start > 0 ? -1 : (start < 0 ? +1 : -1);
    knowledge.direction_to_o =
        (global_dir_to_o == orientation) ? AgentMove::Right : AgentMove::Left;
    return CanonParams{knowledge};
}

std::pair<Outcome, Trace> run_rendezvous(const Scenario& scenario) {
    validate(scenario);

    const std::uint64_t min_wake = std::min(scenario.wake_a, scenario.wake_b);
    LabelCache labels(scenario.line);

    AgentState agent_a = agent_init(scenario.algorithm_a, scenario.kappa);
    AgentState agent_b = agent_init(scenario.algorithm_b, scenario.kappa);
    Position pos_a = scenario.start_a;
    Position pos_b = scenario.start_b;
    const int orient_a = scenario.line.orientation_a();
    const int orient_b = scenario.line.orientation_b();

    Trace trace;

    auto apply = [](Position pos, AgentMove move, int orientation) {
        switch (move) {
            case AgentMove::Right: return pos + orientation;
            case AgentMove::Left: return pos - orientation;
            case AgentMove::Stay: return pos;
        }
        return pos;
    };

    for (std::uint64_t elapsed = 1; elapsed <= scenario.max_rounds; ++elapsed) {
        const std::uint64_t round = min_wake + elapsed - 1;
        std::optional<AgentMove> move_a, move_b;
        if (round >= scenario.wake_a) {
            Observation obs{labels.at(pos_a), round - scenario.wake_a + 1};
            auto [next, move] = agent_step(std::move(agent_a), obs);
            agent_a = std::move(next);
            pos_a = apply(pos_a, move, orient_a);
            move_a = move;
        }
        if (round >= scenario.wake_b) {
            Observation obs{labels.at(pos_b), round - scenario.wake_b + 1};
            auto [next, move] = agent_step(std::move(agent_b), obs);
            agent_b = std::move(next);
            pos_b = apply(pos_b, move, orient_b);
            move_b = move;
        }
        if (scenario.capture_trace) {
            trace.rows.push_back(TraceRow{round, pos_a, pos_b, move_a, move_b});
        }
        if (pos_a == pos_b) {
            return {Met{round, pos_a, elapsed}, std::move(trace)};
        }
    }
    return {Timeout{scenario.max_rounds}, std::move(trace)};
}

const char* move_name(AgentMove move) {
    switch (move) {
        case AgentMove::Stay: return "stay";
        case AgentMove::Right: return "right";
        case AgentMove::Left: return "left";
    }
    return "?";
}

void write_trace_csv(std::ostream& out, const Trace& trace) {
    out << "global_round,pos_a,pos_b,move_a,move_b\n";
    for (const TraceRow& row : trace.rows) {
        out << row.global_round << ',' << row.pos_a << ',' << row.pos_b << ','
            << (row.move_a ? move_name(*row.move_a) : "") << ','
            << (row.move_b ? move_name(*row.move_b) : "") << '\n';
    }
}

}  // namespace rvline
