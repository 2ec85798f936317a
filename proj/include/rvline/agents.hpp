#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rvline/colouring.hpp"
#include "rvline/numerics.hpp"

namespace rvline {

/// What an agent sees at the start of a round: the label of its current node
/// and its own clock (1 in its wake round).
struct Observation {
    const Natural& current_label;
    std::uint64_t local_clock;
};

// Moves are expressed in the agent's persistent local frame; the simulator
// maps them to global coordinates through the orientation sign.
enum class AgentMove : std::uint8_t { Stay, Right, Left };

enum class CanonSide : std::uint8_t { AtOrRightOfO, LeftOfO };

/// A-priori knowledge of a canonical-line agent: distance to the origin O,
/// which side of O it starts on, and which local direction points at O.
/// For dist_to_o == 0 the direction field means "the local direction of
/// global left" so the frame formula needs no special case.
struct CanonKnowledge {
    std::uint64_t dist_to_o = 0;
    CanonSide side = CanonSide::AtOrRightOfO;
    AgentMove direction_to_o = AgentMove::Left;
};

enum class CanonColour : std::uint8_t { Red, Blue };

// Segment colour of a node at the given distance/side of O in phase i:
// at or right of O the segment index is floor(d / 2^i), left of O it is
// -ceil(d / 2^i); even indices are red.
CanonColour canon_colour(std::uint64_t dist_to_o, CanonSide side, unsigned phase_i);

struct CanonParams {
    CanonKnowledge knowledge;
};
struct KnownDistanceParams {
    std::uint64_t distance = 1;
};
struct UnknownDistanceParams {};

using AlgorithmSpec = std::variant<CanonParams, KnownDistanceParams, UnknownDistanceParams>;

// The 9-bit Stage-2 schedule of the unknown-distance algorithm: the colour's
// 2-bit MSB-first representation with 0 -> 0011 and 1 -> 1100, then a 1
// appended. Block i of a period searches iff the i-th bit from the left is 1.
std::string s_string(FinalColour c);

// Exact round counts from the running-time analysis, used as oracles and for
// the acceptance envelopes. log_star_v is log*(v_x) of the starting label.
Natural phase_length(std::uint64_t g, unsigned log_star_v, unsigned kappa);
Natural epoch_length(unsigned j, unsigned log_star_v, unsigned kappa);
Natural first_epochs(unsigned m, unsigned log_star_v, unsigned kappa);

// First canonical phase whose search radius 2^{i+1} reaches distance d. The
// closed form ceil(log2 d) - 1 would give -1 at d = 1; the defining property
// (least i with 2^{i+1} >= d) gives 0, which is what this returns.
unsigned i_crit(std::uint64_t d);

// Index of the critical epoch of the unknown-distance algorithm: 1 + floor(log2 d).
unsigned d_crit(std::uint64_t d);

// Label store keyed by agent-relative position (start = 0 in the local
// frame). Re-recording a position with a different label throws
// InternalDesyncError.
class RecordedLabels {
public:
    const Natural* find(std::int64_t rel_pos) const;
    void record(std::int64_t rel_pos, const Natural& label);

private:
    std::vector<std::optional<Natural>> nonneg_, neg_;
};

namespace detail {

struct CanonRun {
    unsigned phase = 0;
    CanonColour colour = CanonColour::Red;
    std::uint64_t pos_in_phase = 0;
};

struct KnownDRun {
    bool initialized = false;
    unsigned log_star_v = 0;
    std::uint64_t sweep_radius = 0;  // D * kappa * log*(v)
    std::uint64_t stage1_step = 0;
    std::optional<FinalColour> colour;
    std::uint64_t period_pos = 0;
};

struct UnknownDRun {
    bool initialized = false;
    unsigned log_star_v = 0;
    std::uint64_t g = 1;
    unsigned d = 1;  // 1 + floor(log2 g)
    int stage = 0;
    std::uint64_t stage_step = 0;
    std::optional<FinalColour> colour;
    std::string schedule;
};

}  // namespace detail

/// Online state of one agent; advanced one round at a time by agent_step.
class AgentState {
public:
    const AlgorithmSpec& algorithm() const { return algorithm_; }
    unsigned kappa() const { return kappa_; }

    // Agent-tracked coordinate in its local frame (start = 0, Right = +1).
    std::int64_t relative_position() const { return rel_pos_; }

    // Canon: current phase index i. Unknown-distance: current guess g.
    std::uint64_t phase() const;
    // Known-distance: 1 or 2. Unknown-distance: 0, 1 or 2.
    int stage() const;
    // Colour computed by the latest completed Stage 1, if any.
    std::optional<FinalColour> computed_colour() const;
    // Unknown-distance Stage-2 schedule of the current phase, if computed.
    std::optional<std::string> schedule() const;

private:
    friend AgentState agent_init(AlgorithmSpec algorithm, unsigned kappa);
    friend std::pair<AgentState, AgentMove> agent_step(AgentState state, const Observation& obs);

    AlgorithmSpec algorithm_;
    unsigned kappa_ = kDefaultKappa;
    std::int64_t rel_pos_ = 0;
    std::uint64_t steps_taken_ = 0;
    RecordedLabels labels_;
    std::variant<detail::CanonRun, detail::KnownDRun, detail::UnknownDRun> run_;
};

// Positions the state machine at phase 0 / period start. Rejects D = 0.
AgentState agent_init(AlgorithmSpec algorithm, unsigned kappa);

// Consumes one observation and produces the round's move. Pure in
// (state, observation).
std::pair<AgentState, AgentMove> agent_step(AgentState state, const Observation& obs);

}  // namespace rvline
