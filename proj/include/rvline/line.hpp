#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "rvline/numerics.hpp"

namespace rvline {

// Signed coordinate on the line. Position 0 is an arbitrary global origin that
// agents never observe; drift is bounded by the round budget.
using Position = std::int64_t;

// The ...8,6,4,2,1,3,5,7,... labeling with the origin at position 0.
struct CanonicalSpec {
    friend bool operator==(const CanonicalSpec&, const CanonicalSpec&) = default;
};

// Injective pseudo-random labels >= 2 over positions |p| <= radius, produced by
// zig-zag folding the position into a natural and passing it through a seeded
// bijective 64-bit mixer.
struct RandomWindowSpec {
    Position radius = 1'000'000'000'000;
    friend bool operator==(const RandomWindowSpec&, const RandomWindowSpec&) = default;
};

// Small labels (< 100) at the two designated start positions and their
// radius-1 windows; labels >= tower(tier) everywhere else. Exercises the
// claim that running time depends on the starting labels only.
struct HugeNeighboursSpec {
    unsigned tier = 4;
    Position start_a = 0;
    Position start_b = 1;
    friend bool operator==(const HugeNeighboursSpec&, const HugeNeighboursSpec&) = default;
};

// Finite window of explicit labels; labels[i] sits at position origin_offset + i.
struct ExplicitSpec {
    std::vector<Natural> labels;
    Position origin_offset = 0;
    friend bool operator==(const ExplicitSpec&, const ExplicitSpec&) = default;
};

using LabelGenSpec = std::variant<CanonicalSpec, RandomWindowSpec, HugeNeighboursSpec, ExplicitSpec>;

// Per-agent frame: +1 means the agent's local Right is global +1, -1 the
// opposite. Port numbers collapse into this sign.
struct Orientations {
    int a = +1;
    int b = +1;
};

/// Deterministic lazily-materialized labeled line. Immutable after
/// construction; label_at is safe to call concurrently.
class LineInstance {
public:
    LineInstance(LabelGenSpec spec, std::uint64_t seed, Orientations orientations);

    Natural label_at(Position pos) const;

    const LabelGenSpec& spec() const { return spec_; }
    std::uint64_t seed() const { return seed_; }
    int orientation_a() const { return orientations_.a; }
    int orientation_b() const { return orientations_.b; }

private:
    LabelGenSpec spec_;
    std::uint64_t seed_;
    Orientations orientations_;
    std::vector<Position> small_label_positions_;  // HugeNeighbours only, sorted
    std::vector<std::uint32_t> small_labels_;      // parallel to the above
};

// Validates the spec (duplicate or < 2 labels in Explicit lists are rejected)
// and builds the instance.
LineInstance make_line(LabelGenSpec spec, std::uint64_t seed, Orientations orientations);

// Text format: a header line `origin_offset=<int>` followed by one decimal
// label per line.
ExplicitSpec parse_labels_text(std::istream& in);
ExplicitSpec load_labels_file(const std::string& path);

// Seeded bijective 64-bit mixer shared by the generators; bijective in x for
// every fixed seed.
std::uint64_t mix64(std::uint64_t seed, std::uint64_t x);

}  // namespace rvline
