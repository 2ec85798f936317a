#include "rvline/agents.hpp"

#include <bit>

#include "rvline/errors.hpp"

namespace rvline {

namespace {

unsigned floor_log2(std::uint64_t v) {
    return static_cast<unsigned>(std::bit_width(v)) - 1;
}

unsigned ceil_log2(std::uint64_t v) {
    return v <= 1 ? 0 : static_cast<unsigned>(std::bit_width(v - 1));
}

AgentMove flip(AgentMove m) {
    switch (m) {
        case AgentMove::Right: return AgentMove::Left;
        case AgentMove::Left: return AgentMove::Right;
        case AgentMove::Stay: return AgentMove::Stay;
    }
    return AgentMove::Stay;
}

// The sweep right r, left 2r, right r, one move per step q in [0, 4r).
AgentMove sweep_move(std::uint64_t q, std::uint64_t radius) {
    if (q < radius || q >= 3 * radius) {
        return AgentMove::Right;
    }
    return AgentMove::Left;
}

}  // namespace

CanonColour canon_colour(std::uint64_t dist_to_o, CanonSide side, unsigned phase_i) {
    if (phase_i >= 63) {
        throw PreconditionError("canon_colour: phase index out of range");
    }
    const std::uint64_t segment = std::uint64_t{1} << phase_i;
    std::uint64_t index_magnitude;
    if (side == CanonSide::AtOrRightOfO) {
        index_magnitude = dist_to_o / segment;
    } else {
        index_magnitude = (dist_to_o + segment - 1) / segment;  // |-ceil(d / 2^i)|
    }
    return (index_magnitude % 2 == 0) ? CanonColour::Red : CanonColour::Blue;
}

std::string s_string(FinalColour c) {
    if (c > 2) {
        throw PreconditionError("s_string: colour must be in {0,1,2}");
    }
    const char cv[2] = {c >= 2 ? '1' : '0', (c % 2 != 0) ? '1' : '0'};  // 2-bit MSB-first
    std::string s;
    s.reserve(9);
    for (char bit : cv) {
        s += (bit == '0') ? "0011" : "1100";
    }
    s += '1';
    return s;
}

Natural phase_length(std::uint64_t g, unsigned log_star_v, unsigned kappa) {
    if (g < 1 || log_star_v < 1 || kappa < 1) {
        throw PreconditionError("phase_length: g, L and kappa must be >= 1");
    }
    const unsigned j = d_crit(g);
    return ((Natural(72) << j) + 4 * Natural(g)) * kappa * log_star_v;
}

Natural epoch_length(unsigned j, unsigned log_star_v, unsigned kappa) {
    if (j < 1 || log_star_v < 1 || kappa < 1) {
        throw PreconditionError("epoch_length: j, L and kappa must be >= 1");
    }
    return (Natural(1) << (j - 1)) * ((Natural(75) << j) - 2) * kappa * log_star_v;
}

Natural first_epochs(unsigned m, unsigned log_star_v, unsigned kappa) {
    if (m < 1 || log_star_v < 1 || kappa < 1) {
        throw PreconditionError("first_epochs: M, L and kappa must be >= 1");
    }
    return 2 * Natural(kappa) * log_star_v * ((Natural(25) << (2 * m)) - (Natural(1) << m) - 24);
}

unsigned i_crit(std::uint64_t d) {
    if (d < 1) {
        throw PreconditionError("i_crit: d must be >= 1");
    }
    if (d == 1) {
        return 0;  // the closed form would give -1; 2^{0+1} >= 1 already holds
    }
    return ceil_log2(d) - 1;
}

unsigned d_crit(std::uint64_t d) {
    if (d < 1) {
        throw PreconditionError("d_crit: d must be >= 1");
    }
    return 1 + floor_log2(d);
}

const Natural* RecordedLabels::find(std::int64_t rel_pos) const {
    const auto& lane = rel_pos >= 0 ? nonneg_ : neg_;
    const auto idx = static_cast<std::size_t>(rel_pos >= 0 ? rel_pos : -(rel_pos + 1));
    if (idx >= lane.size() || !lane[idx]) {
        return nullptr;
    }
    return &*lane[idx];
}

void RecordedLabels::record(std::int64_t rel_pos, const Natural& label) {
    auto& lane = rel_pos >= 0 ? nonneg_ : neg_;
    const auto idx = static_cast<std::size_t>(rel_pos >= 0 ? rel_pos : -(rel_pos + 1));
    if (idx >= lane.size()) {
        lane.resize(idx + 1);
    }
    if (lane[idx]) {
        if (*lane[idx] != label) {
            throw InternalDesyncError("recorded label contradicts revisited position " +
                                      std::to_string(rel_pos));
        }
        return;
    }
    lane[idx] = label;
}

std::uint64_t AgentState::phase() const {
    if (const auto* canon = std::get_if<detail::CanonRun>(&run_)) {
        return canon->phase;
    }
    if (const auto* unknown = std::get_if<detail::UnknownDRun>(&run_)) {
        return unknown->g;
    }
    throw PreconditionError("AgentState::phase: known-distance agents have no phase counter");
}

int AgentState::stage() const {
    if (const auto* known = std::get_if<detail::KnownDRun>(&run_)) {
        if (!known->initialized) {
            return 1;
        }
        return known->stage1_step < 4 * known->sweep_radius ? 1 : 2;
    }
    if (const auto* unknown = std::get_if<detail::UnknownDRun>(&run_)) {
        return unknown->stage;
    }
    throw PreconditionError("AgentState::stage: canonical agents have no stage counter");
}

std::optional<FinalColour> AgentState::computed_colour() const {
    if (const auto* known = std::get_if<detail::KnownDRun>(&run_)) {
        return known->colour;
    }
    if (const auto* unknown = std::get_if<detail::UnknownDRun>(&run_)) {
        return unknown->colour;
    }
    return std::nullopt;
}

std::optional<std::string> AgentState::schedule() const {
    if (const auto* unknown = std::get_if<detail::UnknownDRun>(&run_)) {
        if (!unknown->schedule.empty()) {
            return unknown->schedule;
        }
    }
    return std::nullopt;
}

AgentState agent_init(AlgorithmSpec algorithm, unsigned kappa) {
    if (kappa < 1) {
        throw ConfigError("kappa must be >= 1");
    }
    AgentState st;
    st.algorithm_ = std::move(algorithm);
    st.kappa_ = kappa;
    if (const auto* canon = std::get_if<CanonParams>(&st.algorithm_)) {
        if (canon->knowledge.direction_to_o == AgentMove::Stay) {
            throw ConfigError("CanonKnowledge.direction_to_o must be Right or Left");
        }
        if (canon->knowledge.dist_to_o == 0 && canon->knowledge.side == CanonSide::LeftOfO) {
            throw ConfigError("CanonKnowledge: dist 0 implies the AtOrRightOfO side");
        }
        detail::CanonRun run;
        run.colour = canon_colour(canon->knowledge.dist_to_o, canon->knowledge.side, 0);
        st.run_ = run;
    } else if (const auto* known = std::get_if<KnownDistanceParams>(&st.algorithm_)) {
        if (known->distance == 0) {
            throw ConfigError("known-distance agent requires D >= 1");
        }
        st.run_ = detail::KnownDRun{};
    } else {
        st.run_ = detail::UnknownDRun{};
    }
    return st;
}

namespace {

// Contracted path: labels at relative positions {-stride*radius, ..., 0, ...,
// stride*radius} in steps of stride; all of them lie inside the just-finished
// sweep.
FinalColour contracted_colour(const RecordedLabels& labels, std::uint64_t stride, unsigned radius,
                              unsigned kappa) {
    std::vector<Natural> window;
    window.reserve(2 * static_cast<std::size_t>(radius) + 1);
    for (std::int64_t k = -static_cast<std::int64_t>(radius); k <= static_cast<std::int64_t>(radius);
         ++k) {
        const Natural* label = labels.find(k * static_cast<std::int64_t>(stride));
        if (label == nullptr) {
            throw InternalDesyncError("contracted path node was not recorded during the sweep");
        }
        window.push_back(*label);
    }
    return colour_in_window(window, radius, kappa);
}

AgentMove canon_step(detail::CanonRun& run, const CanonKnowledge& knowledge) {
    const std::uint64_t radius = std::uint64_t{1} << (run.phase + 1);
    const std::uint64_t block_len = 4 * radius;
    const std::uint64_t block = run.pos_in_phase / block_len;  // 0-based block index
    const std::uint64_t step = run.pos_in_phase % block_len;

    const bool searching = (run.colour == CanonColour::Red)
                               ? (block == 0 || block == 7 || block == 8)
                               : (block == 0 || block == 9 || block == 10);

    AgentMove global = searching ? sweep_move(step, radius) : AgentMove::Stay;

    if (++run.pos_in_phase == 11 * block_len) {
        ++run.phase;
        run.pos_in_phase = 0;
        run.colour = canon_colour(knowledge.dist_to_o, knowledge.side, run.phase);
    }

    if (global == AgentMove::Stay) {
        return AgentMove::Stay;
    }
    const AgentMove global_right_local = (knowledge.side == CanonSide::LeftOfO)
                                             ? knowledge.direction_to_o
                                             : flip(knowledge.direction_to_o);
    return global == AgentMove::Right ? global_right_local : flip(global_right_local);
}

AgentMove known_d_step(detail::KnownDRun& run, const RecordedLabels& labels,
                       std::uint64_t distance, unsigned kappa, const Observation& obs) {
    if (!run.initialized) {
        run.log_star_v = log_star(obs.current_label);
        run.sweep_radius = distance * kappa * run.log_star_v;
        run.initialized = true;
    }
    if (run.stage1_step < 4 * run.sweep_radius) {
        const AgentMove move = sweep_move(run.stage1_step, run.sweep_radius);
        if (++run.stage1_step == 4 * run.sweep_radius) {
            run.colour = contracted_colour(labels, distance, kappa * run.log_star_v, kappa);
        }
        return move;
    }
    // Stage 2: endless periods of two 4D blocks; colour 0 waits in both,
    // colour 1 searches in the first, colour 2 searches in both.
    const std::uint64_t block_len = 4 * distance;
    const std::uint64_t block = run.period_pos / block_len;
    const std::uint64_t q = run.period_pos % block_len;
    run.period_pos = (run.period_pos + 1) % (2 * block_len);
    const bool searching = (*run.colour == 2) || (*run.colour == 1 && block == 0);
    return searching ? sweep_move(q, distance) : AgentMove::Stay;
}

AgentMove unknown_d_step(detail::UnknownDRun& run, const RecordedLabels& labels, unsigned kappa,
                         const Observation& obs) {
    if (!run.initialized) {
        run.log_star_v = log_star(obs.current_label);
        run.initialized = true;
    }
    const std::uint64_t kl = std::uint64_t{kappa} * run.log_star_v;
    const std::uint64_t pow_d = std::uint64_t{1} << run.d;
    switch (run.stage) {
        case 0: {
            if (++run.stage_step == 36 * pow_d * kl) {
                run.stage = 1;
                run.stage_step = 0;
            }
            return AgentMove::Stay;
        }
        case 1: {
            const std::uint64_t radius = run.g * kl;
            const AgentMove move = sweep_move(run.stage_step, radius);
            if (++run.stage_step == 4 * radius) {
                run.colour = contracted_colour(labels, run.g, static_cast<unsigned>(kl), kappa);
                run.schedule = s_string(*run.colour);
                run.stage = 2;
                run.stage_step = 0;
            }
            return move;
        }
        default: {
            const std::uint64_t block_len = 4 * pow_d;
            const std::uint64_t block = (run.stage_step / block_len) % 9;
            const std::uint64_t q = run.stage_step % block_len;
            const bool searching = run.schedule[static_cast<std::size_t>(block)] == '1';
            const AgentMove move = searching ? sweep_move(q, pow_d) : AgentMove::Stay;
            if (++run.stage_step == kl * 9 * block_len) {
                ++run.g;
                run.d = 1 + floor_log2(run.g);
                run.stage = 0;
                run.stage_step = 0;
                run.colour.reset();
                run.schedule.clear();
            }
            return move;
        }
    }
}

}  // namespace

std::pair<AgentState, AgentMove> agent_step(AgentState state, const Observation& obs) {
    if (obs.local_clock != state.steps_taken_ + 1) {
        throw InternalDesyncError("observation clock " + std::to_string(obs.local_clock) +
                                  " does not follow step count " +
                                  std::to_string(state.steps_taken_));
    }
    ++state.steps_taken_;
    AgentMove move = AgentMove::Stay;
    if (auto* canon = std::get_if<detail::CanonRun>(&state.run_)) {
        move = canon_step(*canon, std::get<CanonParams>(state.algorithm_).knowledge);
    } else if (auto* known = std::get_if<detail::KnownDRun>(&state.run_)) {
        state.labels_.record(state.rel_pos_, obs.current_label);
        move = known_d_step(*known, state.labels_,
                            std::get<KnownDistanceParams>(state.algorithm_).distance, state.kappa_,
                            obs);
    } else {
        state.labels_.record(state.rel_pos_, obs.current_label);
        move = unknown_d_step(*std::get_if<detail::UnknownDRun>(&state.run_), state.labels_,
                              state.kappa_, obs);
    }
    if (move == AgentMove::Right) {
        ++state.rel_pos_;
    } else if (move == AgentMove::Left) {
        --state.rel_pos_;
    }
    return {std::move(state), move};
}

}  // namespace rvline
