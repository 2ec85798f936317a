#include "rvline/colouring.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <string>
#include <utility>

#include "rvline/errors.hpp"

namespace rvline {

unsigned effective_kappa() {
    if (const char* env = std::getenv("RLAB_KAPPA")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 1) {
            throw ConfigError("RLAB_KAPPA must be a positive integer");
        }
        return static_cast<unsigned>(v);
    }
    return kDefaultKappa;
}

Phase1Colour Phase1Colour::number(Natural value) {
    if (value < 0) {
        throw PreconditionError("Phase1Colour::number: negative value");
    }
    Phase1Colour c(0);
    c.value_ = std::move(value);
    return c;
}

const Natural& Phase1Colour::value() const {
    if (tag_ != 0) {
        throw PreconditionError("Phase1Colour::value: sentinel has no numeric value");
    }
    return value_;
}

unsigned Phase1Colour::token() const {
    switch (tag_) {
        case -4: return 52;  // Lmin
        case -3: return 53;  // Lmax
        case -2: return 54;  // Pdone
        case -1: return 55;  // Cdone
        default: break;
    }
    if (value_ > 51) {
        throw PreconditionError("Phase1Colour::token: colour not settled");
    }
    return value_.convert_to<unsigned>();
}

long long Phase1Colour::encoding() const {
    if (tag_ != 0) {
        return tag_;
    }
    return value_.convert_to<long long>();
}

NodeState make_node(Natural id) {
    if (id < 2) {
        throw PreconditionError("node labels must be >= 2");
    }
    NodeState st;
    st.my_id = std::move(id);
    return st;
}

Phase1Colour choose_new_phase1_colour(const Natural& my, const Phase1Colour& parent_col,
                                      const Phase1Colour& child_col) {
    if (parent_col.in_settled_range()) {
        return Phase1Colour::pdone();
    }
    if (child_col.in_settled_range()) {
        return Phase1Colour::cdone();
    }
    if (parent_col.is_sentinel()) {
        return Phase1Colour::number(cv_choice(my, 0));
    }
    return Phase1Colour::number(cv_choice(my, parent_col.value()));
}

namespace {

bool less_than(const Natural& mine, const std::optional<Natural>& neighbour) {
    // Absent neighbour counts as +infinity: an endpoint has no smaller one.
    return !neighbour || mine < *neighbour;
}

bool greater_than(const Natural& mine, const std::optional<Natural>& neighbour) {
    // Absent neighbour counts as -infinity: an endpoint has no larger one.
    return !neighbour || mine > *neighbour;
}

struct Outbox {
    std::optional<Message> a, b;
};

void send_phase(NodeState& st, std::uint64_t clock, Outbox& out) {
    if (clock == 1) {
        out.a = Message::id(st.my_id);
        out.b = Message::id(st.my_id);
        return;
    }
    if (clock == 2) {
        // Phase 0: classify against the neighbours' ids received in round 1.
        if (less_than(st.my_id, st.id_a) && less_than(st.my_id, st.id_b)) {
            st.my_phase1_col = Phase1Colour::lmin();
        } else if (greater_than(st.my_id, st.id_a) && greater_than(st.my_id, st.id_b)) {
            st.my_phase1_col = Phase1Colour::lmax();
        } else if (st.id_a && st.id_b && *st.id_a < st.my_id && st.my_id < *st.id_b) {
            st.my_phase1_col = Phase1Colour::number(st.my_id);
            st.parent = NeighbourSide::A;
            st.child = NeighbourSide::B;
        } else {
            st.my_phase1_col = Phase1Colour::number(st.my_id);
            st.parent = NeighbourSide::B;
            st.child = NeighbourSide::A;
        }
        st.do_phase1 = !(st.my_phase1_col->in_settled_range() || st.my_phase1_col->is_lmin() ||
                         st.my_phase1_col->is_lmax());
        out.a = Message::p1(*st.my_phase1_col);
        out.b = Message::p1(*st.my_phase1_col);
        return;
    }
    if (st.do_phase1) {
        // Phase 1: Cole-Vishkin recolouring against the parent.
        const Phase1Colour& parent_col = (st.parent == NeighbourSide::A) ? *st.a_col_p1 : *st.b_col_p1;
        const Phase1Colour& child_col = (st.parent == NeighbourSide::A) ? *st.b_col_p1 : *st.a_col_p1;
        st.my_phase1_col = choose_new_phase1_colour(st.my_phase1_col->value(), parent_col, child_col);
        st.do_phase1 = !(st.my_phase1_col->in_settled_range() || st.my_phase1_col->is_pdone() ||
                         st.my_phase1_col->is_cdone());
        out.a = Message::p1(*st.my_phase1_col);
        out.b = Message::p1(*st.my_phase1_col);
        return;
    }
    // Phase 2: round-robin over the 56 possible settled colours.
    const unsigned token = static_cast<unsigned>(clock % 56);
    if (st.my_phase1_col->token() == token) {
        FinalColour colour = 0;
        while ((st.a_col_final && *st.a_col_final == colour) ||
               (st.b_col_final && *st.b_col_final == colour)) {
            ++colour;
        }
        st.my_final_col = colour;
        st.terminated = true;
        out.a = Message::final(colour);
        out.b = Message::final(colour);
    }
}

void ingest(NodeState& st, NeighbourSide side, const Message& msg) {
    switch (msg.key) {
        case MessageKey::Id:
            (side == NeighbourSide::A ? st.id_a : st.id_b) = std::get<Natural>(msg.value);
            break;
        case MessageKey::P1:
            (side == NeighbourSide::A ? st.a_col_p1 : st.b_col_p1) = std::get<Phase1Colour>(msg.value);
            break;
        case MessageKey::Final:
            (side == NeighbourSide::A ? st.a_col_final : st.b_col_final) =
                std::get<FinalColour>(msg.value);
            break;
    }
}

void receive_phase(NodeState& st, const std::optional<Message>& in_a,
                   const std::optional<Message>& in_b) {
    if (in_a) {
        ingest(st, NeighbourSide::A, *in_a);
    }
    if (in_b) {
        ingest(st, NeighbourSide::B, *in_b);
    }
}

}  // namespace

NodeStepResult node_step(NodeState state, const std::optional<Message>& inbox_a,
                         const std::optional<Message>& inbox_b, std::uint64_t clock) {
    if (clock < 1) {
        throw PreconditionError("node_step: clock starts at 1");
    }
    if (state.terminated) {
        throw PreconditionError("node_step: node already terminated");
    }
    NodeStepResult result{std::move(state), std::nullopt, std::nullopt};
    Outbox out;
    send_phase(result.state, clock, out);
    receive_phase(result.state, inbox_a, inbox_b);
    result.out_a = std::move(out.a);
    result.out_b = std::move(out.b);
    return result;
}

std::uint64_t default_colouring_round_budget(const Natural& max_label) {
    return static_cast<std::uint64_t>(log_star(max_label)) + 70;
}

ColouringResult run_local(std::span<const Natural> labels, Topology topology,
                          std::uint64_t max_rounds) {
    const std::size_t n = labels.size();
    if (topology == Topology::Path && n < 2) {
        throw PreconditionError("run_local: a path needs at least 2 nodes");
    }
    if (topology == Topology::Cycle && n < 3) {
        throw PreconditionError("run_local: a cycle needs at least 3 nodes");
    }
    {
        std::set<Natural> seen;
        for (const Natural& label : labels) {
            if (label < 2) {
                throw PreconditionError("run_local: labels must be >= 2");
            }
            if (!seen.insert(label).second) {
                throw PreconditionError("run_local: duplicate label " + label.str());
            }
        }
    }
    if (max_rounds == 0) {
        max_rounds = default_colouring_round_budget(*std::max_element(labels.begin(), labels.end()));
    }

    const bool cycle = topology == Topology::Cycle;
    std::vector<NodeState> states;
    states.reserve(n);
    for (const Natural& label : labels) {
        states.push_back(make_node(label));
    }
    ColouringResult result;
    result.nodes.assign(n, NodeOutcome{0, 0});

    // Neighbour A is index i-1, neighbour B is index i+1 (wrapping on cycles).
    auto left_of = [&](std::size_t i) -> std::ptrdiff_t {
        if (i > 0) return static_cast<std::ptrdiff_t>(i - 1);
        return cycle ? static_cast<std::ptrdiff_t>(n - 1) : -1;
    };
    auto right_of = [&](std::size_t i) -> std::ptrdiff_t {
        if (i + 1 < n) return static_cast<std::ptrdiff_t>(i + 1);
        return cycle ? 0 : -1;
    };

    std::vector<std::size_t> alive(n);
    for (std::size_t i = 0; i < n; ++i) {
        alive[i] = i;
    }
    std::vector<std::optional<Message>> inbox_a(n), inbox_b(n);

    std::size_t remaining = n;
    for (std::uint64_t round = 1; remaining > 0; ++round) {
        if (round > max_rounds) {
            throw NonTerminationError("run_local: node still running after round " +
                                      std::to_string(max_rounds));
        }
        // Send pass: round-t messages depend only on end-of-previous-round state.
        for (std::size_t i : alive) {
            Outbox out;
            send_phase(states[i], round, out);
            if (out.a) {
                if (std::ptrdiff_t l = left_of(i); l >= 0) {
                    inbox_b[static_cast<std::size_t>(l)] = std::move(out.a);
                }
            }
            if (out.b) {
                if (std::ptrdiff_t r = right_of(i); r >= 0) {
                    inbox_a[static_cast<std::size_t>(r)] = std::move(out.b);
                }
            }
        }
        // Receive pass; nodes that terminated this round keep their frozen state,
        // and their last FINAL message was already routed above.
        for (std::size_t i : alive) {
            NodeState& st = states[i];
            if (st.terminated) {
                result.nodes[i] = NodeOutcome{*st.my_final_col, round};
                continue;
            }
            receive_phase(st, inbox_a[i], inbox_b[i]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            inbox_a[i].reset();
            inbox_b[i].reset();
        }
        std::erase_if(alive, [&](std::size_t i) { return states[i].terminated; });
        remaining = alive.size();

        // Invariant: adjacent Phase 1 colours differ in every round >= 2.
        if (round >= 2) {
            for (std::size_t i = 0; i < n; ++i) {
                std::ptrdiff_t r = right_of(i);
                if (r < 0 || static_cast<std::size_t>(r) == i) {
                    continue;
                }
                const auto& mine = states[i].my_phase1_col;
                const auto& theirs = states[static_cast<std::size_t>(r)].my_phase1_col;
                if (mine && theirs && *mine == *theirs) {
                    throw NonTerminationError(
                        "run_local: adjacent nodes share a Phase 1 colour in round " +
                        std::to_string(round));
                }
            }
        }
    }
    return result;
}

FinalColour colour_in_window(std::span<const Natural> window_labels, std::size_t centre_index,
                             unsigned kappa) {
    if (centre_index >= window_labels.size()) {
        throw PreconditionError("colour_in_window: centre outside window");
    }
    const std::uint64_t needed =
        static_cast<std::uint64_t>(kappa) * log_star(window_labels[centre_index]);
    const std::uint64_t left = centre_index;
    const std::uint64_t right = window_labels.size() - 1 - centre_index;
    if (left < needed || right < needed) {
        throw PreconditionError("colour_in_window: window smaller than kappa*log*(centre) per side");
    }
    ColouringResult result = run_local(window_labels, Topology::Path);
    return result.nodes[centre_index].colour;
}

}  // namespace rvline
