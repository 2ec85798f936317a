#include "rvline/line.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "rvline/errors.hpp"

namespace rvline {

namespace {

// Interleaves positions as 0,-1,1,-2,2,... onto naturals.
std::uint64_t zigzag(Position p) {
    if (p >= 0) {
        return 2 * static_cast<std::uint64_t>(p);
    }
    return 2 * static_cast<std::uint64_t>(-(p + 1)) + 1;
}

std::uint64_t splitmix_fin(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<Position> huge_small_positions(const HugeNeighboursSpec& spec) {
    std::vector<Position> positions;
    for (Position base : {spec.start_a, spec.start_b}) {
        for (Position d = -1; d <= 1; ++d) {
            positions.push_back(base + d);
        }
    }
    std::sort(positions.begin(), positions.end());
    positions.erase(std::unique(positions.begin(), positions.end()), positions.end());
    return positions;
}

// Distinct labels in {2,...,99} for the start windows, chosen from the seed.
std::vector<std::uint32_t> huge_small_labels(std::uint64_t seed, std::size_t count) {
    std::vector<std::uint32_t> labels;
    std::set<std::uint32_t> used;
    std::uint64_t ctr = 0;
    while (labels.size() < count) {
        auto candidate = static_cast<std::uint32_t>(2 + mix64(seed, 0xabcdef12u + ctr++) % 98);
        if (used.insert(candidate).second) {
            labels.push_back(candidate);
        }
    }
    return labels;
}

}  // namespace

std::uint64_t mix64(std::uint64_t seed, std::uint64_t x) {
    return splitmix_fin(x + splitmix_fin(seed + 0x9e3779b97f4a7c15ULL));
}

LineInstance::LineInstance(LabelGenSpec spec, std::uint64_t seed, Orientations orientations)
    : spec_(std::move(spec)), seed_(seed), orientations_(orientations) {
    if (orientations_.a != 1 && orientations_.a != -1) {
        throw ConfigError("orientation_a must be +1 or -1");
    }
    if (orientations_.b != 1 && orientations_.b != -1) {
        throw ConfigError("orientation_b must be +1 or -1");
    }
    if (const auto* explicit_spec = std::get_if<ExplicitSpec>(&spec_)) {
        if (explicit_spec->labels.empty()) {
            throw ConfigError("Explicit label list is empty");
        }
        std::set<Natural> seen;
        for (const Natural& label : explicit_spec->labels) {
            if (label < 2) {
                throw ConfigError("Explicit label " + label.str() + " is < 2");
            }
            if (!seen.insert(label).second) {
                throw ConfigError("duplicate label " + label.str() + " in Explicit list");
            }
        }
    }
    if (const auto* huge = std::get_if<HugeNeighboursSpec>(&spec_)) {
        if (huge->tier > 5) {
            throw ConfigError("HugeNeighbours tier > 5 cannot be materialized");
        }
        if (huge->start_a == huge->start_b) {
            throw ConfigError("HugeNeighbours start positions coincide");
        }
        small_label_positions_ = huge_small_positions(*huge);
        small_labels_ = huge_small_labels(seed_, small_label_positions_.size());
    }
}

Natural LineInstance::label_at(Position pos) const {
    return std::visit(
        [&](const auto& spec) -> Natural {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, CanonicalSpec>) {
                if (pos >= 0) {
                    return Natural(2 * pos + 1);
                }
                return Natural(2 * (-pos));
            } else if constexpr (std::is_same_v<T, RandomWindowSpec>) {
                if (pos > spec.radius || pos < -spec.radius) {
                    throw ConfigError("position outside RandomWindow radius");
                }
                return Natural(mix64(seed_, zigzag(pos))) + 2;
            } else if constexpr (std::is_same_v<T, HugeNeighboursSpec>) {
                auto it = std::lower_bound(small_label_positions_.begin(),
                                           small_label_positions_.end(), pos);
                if (it != small_label_positions_.end() && *it == pos) {
                    auto idx = static_cast<std::size_t>(it - small_label_positions_.begin());
                    return Natural(small_labels_[idx]);
                }
                // +100 keeps low tiers clear of the small start labels.
                return tower(spec.tier) + 100 + mix64(seed_, zigzag(pos));
            } else {
                static_assert(std::is_same_v<T, ExplicitSpec>);
                Position idx = pos - spec.origin_offset;
                if (idx < 0 || idx >= static_cast<Position>(spec.labels.size())) {
                    throw ConfigError("position outside Explicit label window");
                }
                return spec.labels[static_cast<std::size_t>(idx)];
            }
        },
        spec_);
}

LineInstance make_line(LabelGenSpec spec, std::uint64_t seed, Orientations orientations) {
    return LineInstance(std::move(spec), seed, orientations);
}

ExplicitSpec parse_labels_text(std::istream& in) {
    std::string header;
    if (!std::getline(in, header)) {
        throw ConfigError("label file: missing origin_offset header");
    }
    const std::string prefix = "origin_offset=";
    if (header.rfind(prefix, 0) != 0) {
        throw ConfigError("label file: first line must be origin_offset=<int>");
    }
    ExplicitSpec spec;
    try {
        spec.origin_offset = std::stoll(header.substr(prefix.size()));
    } catch (const std::exception&) {
        throw ConfigError("label file: malformed origin_offset value");
    }
    std::string row;
    while (std::getline(in, row)) {
        while (!row.empty() && (row.back() == '\r' || row.back() == ' ')) {
            row.pop_back();
        }
        if (row.empty()) {
            continue;
        }
        if (row.find_first_not_of("0123456789") != std::string::npos) {
            throw ConfigError("label file: non-decimal label line: " + row);
        }
        spec.labels.emplace_back(row);
    }
    if (spec.labels.empty()) {
        throw ConfigError("label file: no labels");
    }
    return spec;
}

ExplicitSpec load_labels_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open label file: " + path);
    }
    return parse_labels_text(in);
}

}  // namespace rvline
