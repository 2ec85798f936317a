#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rvline/numerics.hpp"

namespace rvline {

// EarlyStopCV terminates at a node with label v within kappa * log*(v)
// rounds. The worst case is log*(v) + 59 rounds, and labels >= 2 give
// log* >= 1, so kappa = 60 covers it (and satisfies kappa >= 2).
inline constexpr unsigned kDefaultKappa = 60;

// Reads the RLAB_KAPPA override if set, otherwise kDefaultKappa.
unsigned effective_kappa();

using FinalColour = std::uint8_t;  // 0, 1 or 2

/// A non-negative integer colour or one of the four special colours. The
/// sentinels encode as -4..-1 for display, but the type stays tagged so a
/// sentinel can never be confused with a natural.
class Phase1Colour {
public:
    static Phase1Colour lmin() { return Phase1Colour(-4); }
    static Phase1Colour lmax() { return Phase1Colour(-3); }
    static Phase1Colour pdone() { return Phase1Colour(-2); }
    static Phase1Colour cdone() { return Phase1Colour(-1); }
    static Phase1Colour number(Natural value);

    bool is_number() const { return tag_ == 0; }
    bool is_sentinel() const { return tag_ != 0; }
    bool is_lmin() const { return tag_ == -4; }
    bool is_lmax() const { return tag_ == -3; }
    bool is_pdone() const { return tag_ == -2; }
    bool is_cdone() const { return tag_ == -1; }

    // Only valid for numbers.
    const Natural& value() const;

    // True for numbers in {0,...,51}: the range Phase 1 drives colours into.
    bool in_settled_range() const { return tag_ == 0 && value_ <= 51; }

    // Round-robin slot used in Phase 2: a settled number is its own token,
    // the sentinels map to 52..55.
    unsigned token() const;

    // Sentinel encoding -4..-1; numbers report their value (small ones only,
    // used for display).
    long long encoding() const;

    friend bool operator==(const Phase1Colour& a, const Phase1Colour& b) {
        return a.tag_ == b.tag_ && a.value_ == b.value_;
    }

private:
    explicit Phase1Colour(int tag) : tag_(tag) {}
    int tag_ = -4;
    Natural value_ = 0;
};

enum class MessageKey { Id, P1, Final };

struct Message {
    MessageKey key;
    std::variant<Natural, Phase1Colour, FinalColour> value;

    static Message id(Natural v) { return {MessageKey::Id, std::move(v)}; }
    static Message p1(Phase1Colour c) { return {MessageKey::P1, std::move(c)}; }
    static Message final(FinalColour c) { return {MessageKey::Final, c}; }
};

enum class NeighbourSide { A, B };

/// Per-node state of Algorithm EarlyStopCV. Neighbour A is one fixed side and
/// B the other; endpoints of a finite path leave the missing side's id Absent.
struct NodeState {
    Natural my_id;
    std::optional<Natural> id_a, id_b;
    std::optional<Phase1Colour> my_phase1_col;  // set in round 2
    std::optional<NeighbourSide> parent, child;
    std::optional<Phase1Colour> a_col_p1, b_col_p1;
    std::optional<FinalColour> a_col_final, b_col_final;
    bool do_phase1 = false;
    std::optional<FinalColour> my_final_col;
    bool terminated = false;
};

NodeState make_node(Natural id);

// Algorithm 3. `my` is the node's current Phase 1 colour, which is a number
// >= 52 whenever Phase 1 is still running.
Phase1Colour choose_new_phase1_colour(const Natural& my, const Phase1Colour& parent_col,
                                      const Phase1Colour& child_col);

struct NodeStepResult {
    NodeState state;
    std::optional<Message> out_a, out_b;
};

// One synchronous round of Algorithm EarlyStopCV at one node: emits this
// round's messages (computed from the incoming state), then ingests this
// round's inbox. Must not be called on a terminated node.
NodeStepResult node_step(NodeState state, const std::optional<Message>& inbox_a,
                         const std::optional<Message>& inbox_b, std::uint64_t clock);

enum class Topology { Path, Cycle };

struct NodeOutcome {
    FinalColour colour;
    std::uint64_t termination_round;
};

struct ColouringResult {
    std::vector<NodeOutcome> nodes;
};

// Round budget with slack over the proven log*(id)+59 so a bound regression
// fails loudly instead of silently.
std::uint64_t default_colouring_round_budget(const Natural& max_label);

// Synchronous lockstep run from round 1 over a finite path or cycle. Labels
// must be pairwise distinct and >= 2. Each round the runner also asserts that
// adjacent Phase 1 colours differ. Throws NonTerminationError if any node is
// still running after max_rounds (pass 0 to use the default budget).
ColouringResult run_local(std::span<const Natural> labels, Topology topology,
                          std::uint64_t max_rounds = 0);

// Runs EarlyStopCV on the window as a path and returns the centre's final
// colour. The centre needs at least kappa * log*(centre label) nodes on each
// side; this is the simulation agents perform in local memory.
FinalColour colour_in_window(std::span<const Natural> window_labels, std::size_t centre_index,
                             unsigned kappa);

}  // namespace rvline
