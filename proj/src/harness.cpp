#include "rvline/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <future>
#include <map>
#include <mutex>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "rvline/errors.hpp"

namespace rvline::harness {

namespace {

constexpr std::uint64_t kRoundBudgetCeiling = std::uint64_t{1} << 62;

std::uint64_t to_rounds(const Natural& n) {
    if (n > kRoundBudgetCeiling) {
        throw ConfigError("round budget too large to simulate: " + n.str());
    }
    return n.convert_to<std::uint64_t>();
}

LabelGenSpec build_generator(const ScenarioSpec& spec) {
    if (spec.generator == "canonical") {
        return CanonicalSpec{};
    }
    if (spec.generator == "random") {
        return RandomWindowSpec{};
    }
    if (spec.generator == "huge") {
        return HugeNeighboursSpec{spec.tier, spec.start_a, spec.start_b};
    }
    if (spec.generator == "explicit") {
        if (!spec.explicit_spec) {
            throw ConfigError("explicit generator requires a label list");
        }
        return *spec.explicit_spec;
    }
    throw ConfigError("unknown generator: " + spec.generator);
}

// Simple fork/join over [0, count) used by sweeps and the acceptance grids.
template <typename Fn>
void parallel_for(std::size_t count, unsigned jobs, Fn&& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
            fn(i);
        }
    };
    std::vector<std::thread> pool;
    const unsigned n = std::min<std::size_t>(jobs, count);
    for (unsigned t = 0; t < n; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }
}

unsigned default_jobs() {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : std::min(hw, 8u);
}

}  // namespace

std::uint64_t scenario_distance(const ScenarioSpec& spec) {
    return spec.start_a >= spec.start_b ? static_cast<std::uint64_t>(spec.start_a - spec.start_b)
                                        : static_cast<std::uint64_t>(spec.start_b - spec.start_a);
}

Scenario build_scenario(const ScenarioSpec& spec) {
    if (spec.start_a == spec.start_b) {
        throw ConfigError("start positions coincide (D = 0)");
    }
    const bool canon = spec.algorithm == "canon";
    if (canon && spec.generator != "canonical") {
        throw ConfigError("the canonical-knowledge algorithm runs on the canonical line only");
    }
    if (!canon && spec.generator == "canonical") {
        throw ConfigError("the canonical line's origin label is 1; use it with the canon algorithm only");
    }

    Scenario scenario{make_line(build_generator(spec), spec.seed, {spec.orient_a, spec.orient_b}),
                      spec.start_a,
                      spec.start_b,
                      1,
                      1,
                      UnknownDistanceParams{},
                      UnknownDistanceParams{},
                      spec.kappa,
                      spec.max_rounds,
                      spec.capture_trace};
    if (spec.b_first) {
        scenario.wake_a = 1 + spec.delay;
    } else {
        scenario.wake_b = 1 + spec.delay;
    }

    const std::uint64_t d = scenario_distance(spec);
    if (spec.algorithm == "canon") {
        scenario.algorithm_a = make_canon_params(spec.start_a, spec.orient_a);
        scenario.algorithm_b = make_canon_params(spec.start_b, spec.orient_b);
    } else if (spec.algorithm == "known-d") {
        scenario.algorithm_a = KnownDistanceParams{d};
        scenario.algorithm_b = KnownDistanceParams{d};
    } else if (spec.algorithm == "no-d") {
        scenario.algorithm_a = UnknownDistanceParams{};
        scenario.algorithm_b = UnknownDistanceParams{};
    } else {
        throw ConfigError("unknown algorithm: " + spec.algorithm);
    }

    if (scenario.max_rounds == 0) {
        const Natural ell = std::max(scenario.line.label_at(spec.start_a),
                                     scenario.line.label_at(spec.start_b));
        Natural budget;
        if (spec.algorithm == "canon") {
            budget = 4 * canon_bound(d);
        } else if (spec.algorithm == "known-d") {
            budget = 4 * known_d_bound(d, ell, spec.kappa);
        } else {
            budget = nod_round_cap(d, ell, spec.kappa);
        }
        scenario.max_rounds = to_rounds(budget);
    }
    return scenario;
}

RunRow run_one(const ScenarioSpec& spec, Trace* trace_out) {
    ScenarioSpec effective = spec;
    effective.capture_trace = spec.capture_trace || trace_out != nullptr;
    Scenario scenario = build_scenario(effective);

    RunRow row;
    row.spec = spec;
    row.d = scenario_distance(spec);
    row.ell = std::max(scenario.line.label_at(spec.start_a), scenario.line.label_at(spec.start_b));
    if (spec.algorithm == "canon") {
        row.bound = canon_bound(row.d);
    } else if (spec.algorithm == "known-d") {
        row.bound = known_d_bound(row.d, row.ell, spec.kappa);
    } else {
        row.bound = nod_envelope(row.d, row.ell, spec.kappa);
    }

    auto [outcome, trace] = run_rendezvous(scenario);
    if (const auto* met = std::get_if<Met>(&outcome)) {
        row.met = true;
        row.elapsed = met->elapsed_from_earlier_wake;
        row.node = met->node;
        row.ok = Natural(row.elapsed) <= row.bound;
    }
    if (trace_out) {
        *trace_out = std::move(trace);
    }
    return row;
}

std::string repro_command(const ScenarioSpec& spec) {
    std::ostringstream cmd;
    cmd << "rvline rendezvous --algorithm " << spec.algorithm << " --generator " << spec.generator
        << " --seed " << spec.seed << " --start-a " << spec.start_a << " --start-b "
        << spec.start_b << " --delay " << spec.delay;
    if (spec.b_first) {
        cmd << " --first b";
    }
    cmd << " --orient-a " << spec.orient_a << " --orient-b " << spec.orient_b;
    if (spec.generator == "huge") {
        cmd << " --tier " << spec.tier;
    }
    if (spec.generator == "explicit") {
        cmd << " --labels-file <explicit list built in-process>";
    }
    if (spec.kappa != kDefaultKappa) {
        cmd << " --kappa " << spec.kappa;
    }
    if (spec.max_rounds != 0) {
        cmd << " --max-rounds " << spec.max_rounds;
    }
    return cmd.str();
}

void write_rendezvous_csv_header(std::ostream& out) {
    out << "algorithm,D,delay,ell,elapsed,bound,ok\n";
}

void write_rendezvous_csv_row(std::ostream& out, const RunRow& row) {
    out << row.spec.algorithm << ',' << row.d << ',' << row.spec.delay << ',' << row.ell.str()
        << ',';
    if (row.met) {
        out << row.elapsed;
    } else {
        out << "timeout";
    }
    out << ',' << row.bound.str() << ',' << (row.ok ? "1" : "0") << '\n';
}

std::vector<std::uint64_t> default_delays(const std::string& algorithm, std::uint64_t d,
                                          unsigned log_star_ell, unsigned kappa) {
    std::vector<std::uint64_t> delays;
    if (algorithm == "canon") {
        delays = {0, 1, 2, 3};
        for (unsigned i = 0; i <= 12; ++i) {
            delays.push_back(std::uint64_t{5} << i);
        }
        delays.push_back((std::uint64_t{48} << (i_crit(d) + 1)) + 1);  // > 48 * 2^{i_crit+1}
    } else if (algorithm == "known-d") {
        delays = {0, 1, 2, 3, 7};
        delays.push_back(4 * d * kappa * log_star_ell + 1);
    } else if (algorithm == "no-d") {
        const unsigned dc = d_crit(d);
        delays = {0, (std::uint64_t{4} << dc) - 1, (std::uint64_t{4} << dc) + 1,
                  to_rounds(first_epochs(dc, log_star_ell, kappa) + 1)};
    } else {
        throw ConfigError("unknown algorithm: " + algorithm);
    }
    std::sort(delays.begin(), delays.end());
    delays.erase(std::unique(delays.begin(), delays.end()), delays.end());
    return delays;
}

std::vector<SweepCell> run_sweep(const SweepSpec& spec) {
    std::vector<std::string> generators = spec.generators;
    if (generators.empty()) {
        generators = spec.algorithm == "canon" ? std::vector<std::string>{"canonical"}
                                               : std::vector<std::string>{"random"};
    }
    if (spec.seeds.empty()) {
        throw ConfigError("sweep needs at least one seed");
    }
    if (spec.d_min < 1 || spec.d_min > spec.d_max) {
        throw ConfigError("sweep requires 1 <= d_min <= d_max");
    }

    struct CellKey {
        std::string generator;
        std::uint64_t d;
        std::uint64_t delay;
        int orient_a, orient_b;
    };
    std::vector<CellKey> keys;
    for (const std::string& generator : generators) {
        for (std::uint64_t d = spec.d_min; d <= spec.d_max; ++d) {
            std::vector<std::uint64_t> delays = spec.delays;
            if (delays.empty()) {
                // The per-cell grid depends on the starting labels; use the
                // first seed's labels to pin it.
                ScenarioSpec probe;
                probe.algorithm = spec.algorithm;
                probe.generator = generator;
                probe.seed = spec.seeds.front();
                probe.start_a = 0;
                probe.start_b = static_cast<Position>(d);
                probe.kappa = spec.kappa;
                const LineInstance line =
                    make_line(build_generator(probe), probe.seed, {+1, +1});
                const Natural ell =
                    std::max(line.label_at(probe.start_a), line.label_at(probe.start_b));
                delays = default_delays(spec.algorithm, d, log_star(ell), spec.kappa);
            }
            for (std::uint64_t delay : delays) {
                for (auto [oa, ob] : spec.orientations) {
                    keys.push_back(CellKey{generator, d, delay, oa, ob});
                }
            }
        }
    }

    std::vector<SweepCell> cells(keys.size());
    parallel_for(keys.size(), spec.jobs, [&](std::size_t i) {
        const CellKey& key = keys[i];
        SweepCell cell;
        cell.d = key.d;
        cell.delay = key.delay;
        cell.all_met = true;
        bool all_ok = true;
        for (std::uint64_t seed : spec.seeds) {
            ScenarioSpec run;
            run.algorithm = spec.algorithm;
            run.generator = key.generator;
            run.seed = seed;
            run.start_a = 0;
            run.start_b = static_cast<Position>(key.d);
            run.delay = key.delay;
            run.orient_a = key.orient_a;
            run.orient_b = key.orient_b;
            run.kappa = spec.kappa;
            RunRow row = run_one(run);
            cell.trials++;
            cell.all_met = cell.all_met && row.met;
            all_ok = all_ok && row.ok;
            if (!row.ok && !cell.failing) {
                cell.failing = run;
            }
            if (row.elapsed >= cell.max_elapsed) {
                cell.max_elapsed = row.elapsed;
                cell.representative = run;
            }
            cell.bound = std::max(cell.bound, row.bound);
        }
        cell.ok = cell.all_met && all_ok;
        cells[i] = std::move(cell);
    });

    std::stable_sort(cells.begin(), cells.end(), [](const SweepCell& x, const SweepCell& y) {
        return std::tie(x.representative.generator, x.d, x.delay, x.representative.orient_a,
                        x.representative.orient_b) <
               std::tie(y.representative.generator, y.d, y.delay, y.representative.orient_a,
                        y.representative.orient_b);
    });
    return cells;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepCell>& cells) {
    out << "algorithm,generator,D,delay,orient_a,orient_b,trials,max_elapsed,bound,ok\n";
    for (const SweepCell& cell : cells) {
        out << cell.representative.algorithm << ',' << cell.representative.generator << ','
            << cell.d << ',' << cell.delay << ',' << cell.representative.orient_a << ','
            << cell.representative.orient_b << ',' << cell.trials << ',';
        if (cell.all_met) {
            out << cell.max_elapsed;
        } else {
            out << "timeout";
        }
        out << ',' << cell.bound.str() << ',' << (cell.ok ? "1" : "0") << '\n';
    }
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Natural> distinct_u64_labels(std::mt19937_64& rng, std::size_t n) {
    std::unordered_set<std::uint64_t> seen;
    std::vector<Natural> labels;
    labels.reserve(n);
    while (labels.size() < n) {
        std::uint64_t v = rng();
        if (v < 2) {
            v += 2;
        }
        if (seen.insert(v).second) {
            labels.emplace_back(v);
        }
    }
    return labels;
}

// Stage-1 colour an agent at `pos` would compute for guess/distance `d`:
// EarlyStopCV simulated on the contracted path of stride d, kappa*log* nodes
// per side.
FinalColour stage1_colour(const LineInstance& line, Position pos, std::uint64_t d,
                          unsigned kappa) {
    const unsigned radius = kappa * log_star(line.label_at(pos));
    std::vector<Natural> window;
    window.reserve(2 * static_cast<std::size_t>(radius) + 1);
    for (std::int64_t k = -static_cast<std::int64_t>(radius); k <= static_cast<std::int64_t>(radius);
         ++k) {
        window.push_back(line.label_at(pos + k * static_cast<Position>(d)));
    }
    return colour_in_window(window, radius, kappa);
}

// Explicit line with an increasing run of small ids (20..51) along stride d
// around `centre`. On such a run the Phase-2 finals cascade by parity from
// the nearest local minimum, so a colouring window smaller than the influence
// radius log*(id)+58 anchors the cascade at its own edge and assigns equal
// colours to adjacent contracted nodes. This is the instance family that
// makes an undersized kappa observable.
ExplicitSpec make_increasing_run_line(std::uint64_t d, Position centre, Position radius) {
    ExplicitSpec spec;
    spec.origin_offset = centre - radius;
    for (Position p = centre - radius; p <= centre + radius; ++p) {
        const Position k = p - centre;
        if (k % static_cast<Position>(d) == 0) {
            const Position stride_index = k / static_cast<Position>(d);
            if (stride_index >= -16 && stride_index <= 15) {
                spec.labels.emplace_back(36 + stride_index);  // ids 20..51
                continue;
            }
        }
        spec.labels.push_back(Natural(1000000) + (p - centre + radius) * 3 + 1);
    }
    return spec;
}

// Explicit line whose two start labels carry chosen log* tiers; every other
// position gets a distinct label >= 2^21 so neighbourhood magnitude cannot
// influence anything except through the colouring input.
ExplicitSpec make_diff_logstar_line(std::uint64_t d, std::uint64_t label_a, std::uint64_t label_b,
                                    std::uint64_t seed, unsigned kappa) {
    const unsigned l_max =
        std::max(log_star(Natural(label_a)), log_star(Natural(label_b)));
    const unsigned cap_epoch = nod_meeting_epoch(d, Natural(std::max(label_a, label_b)));
    const Natural reach =
        (Natural(1) << cap_epoch) * kappa * l_max + Natural(d) + 8;
    const auto radius = static_cast<Position>(reach.convert_to<std::uint64_t>());
    ExplicitSpec spec;
    spec.origin_offset = -radius;
    spec.labels.reserve(static_cast<std::size_t>(2 * radius + 1));
    for (Position p = -radius; p <= radius; ++p) {
        if (p == 0) {
            spec.labels.emplace_back(label_a);
        } else if (p == static_cast<Position>(d)) {
            spec.labels.emplace_back(label_b);
        } else {
            spec.labels.push_back(Natural(mix64(seed, p >= 0 ? 2 * static_cast<std::uint64_t>(p)
                                                             : 2 * static_cast<std::uint64_t>(-p) - 1)) +
                                  (Natural(1) << 21));
        }
    }
    return spec;
}

struct AcceptanceContext {
    unsigned kappa = kDefaultKappa;
    unsigned jobs = default_jobs();
    std::vector<RunRow> canon_rows;    // filled by criterion 3
    std::vector<RunRow> known_d_rows;  // filled by criterion 4
};

// Runs the given scenario specs in parallel and returns the first few
// failures' repro commands in `detail`.
bool run_specs(AcceptanceContext& ctx, const std::vector<ScenarioSpec>& specs,
               std::vector<RunRow>& rows, std::string& detail) {
    rows.assign(specs.size(), RunRow{});
    parallel_for(specs.size(), ctx.jobs, [&](std::size_t i) { rows[i] = run_one(specs[i]); });
    std::size_t failures = 0;
    std::ostringstream msg;
    for (const RunRow& row : rows) {
        if (!row.ok) {
            if (failures < 3) {
                msg << (row.met ? " bound exceeded: " : " timeout: ") << repro_command(row.spec)
                    << " elapsed=" << (row.met ? std::to_string(row.elapsed) : "timeout")
                    << " bound=" << row.bound.str() << ";";
            }
            ++failures;
        }
    }
    if (failures > 0) {
        detail = std::to_string(failures) + "/" + std::to_string(rows.size()) + " runs failed;" +
                 msg.str();
        return false;
    }
    detail = std::to_string(rows.size()) + " runs within bound";
    return true;
}

CriterionResult criterion1_colouring(AcceptanceContext&) {
    CriterionResult r{1, "EarlyStopCV: proper 3-colouring, termination within log*(ID)+59", false,
                      "", 0.0};
    const auto t0 = Clock::now();
    std::mt19937_64 rng(0xC1A001);
    std::size_t instances = 0;
    std::size_t nodes = 0;
    auto check_instance = [&](const std::vector<Natural>& labels, Topology topo,
                              std::size_t idx) -> bool {
        ColouringResult res;
        try {
            res = run_local(labels, topo);
        } catch (const std::exception& e) {
            r.detail = "instance " + std::to_string(idx) + " raised: " + e.what();
            return false;
        }
        const std::size_t n = labels.size();
        for (std::size_t i = 0; i < n; ++i) {
            const bool wrap = topo == Topology::Cycle;
            const std::size_t j = (i + 1 < n) ? i + 1 : (wrap ? 0 : i);
            if (j != i && res.nodes[i].colour == res.nodes[j].colour) {
                r.detail = "instance " + std::to_string(idx) + ": adjacent colours equal at " +
                           std::to_string(i);
                return false;
            }
            if (res.nodes[i].colour > 2) {
                r.detail = "instance " + std::to_string(idx) + ": colour out of range";
                return false;
            }
            const std::uint64_t limit = static_cast<std::uint64_t>(log_star(labels[i])) + 59;
            if (res.nodes[i].termination_round > limit) {
                r.detail = "instance " + std::to_string(idx) + ": node " + std::to_string(i) +
                           " terminated in round " + std::to_string(res.nodes[i].termination_round) +
                           " > log*+59 = " + std::to_string(limit);
                return false;
            }
        }
        ++instances;
        nodes += n;
        return true;
    };

    for (std::size_t idx = 0; idx < 1000; ++idx) {
        const Topology topo = (idx % 2 == 0) ? Topology::Path : Topology::Cycle;
        std::size_t n = 2 + rng() % 4999;
        if (topo == Topology::Cycle && n < 3) {
            n = 3;
        }
        std::vector<Natural> labels = distinct_u64_labels(rng, n);
        if (idx % 7 == 3) {
            // Mix in minimal labels; nodes with tiny log* must still stop early.
            std::vector<std::uint64_t> small = {2, 3, 4, 5, 16, 17, 51, 52, 55, 56};
            for (std::size_t k = 0; k < small.size() && k < labels.size(); ++k) {
                labels[k] = small[k];
            }
        }
        if (!check_instance(labels, topo, idx)) {
            r.seconds = seconds_since(t0);
            return r;
        }
    }
    for (std::size_t idx = 0; idx < 50; ++idx) {
        // tower(4)-magnitude labels: just above 65536, so log* = 5.
        const std::size_t n = 2 + rng() % 200;
        std::unordered_set<std::uint64_t> seen;
        std::vector<Natural> labels;
        while (labels.size() < n) {
            const std::uint64_t v = 65536 + rng() % 1048576;
            if (seen.insert(v).second) {
                labels.emplace_back(v);
            }
        }
        if (!check_instance(labels, (idx % 2 == 0) ? Topology::Path : Topology::Cycle,
                            1000 + idx)) {
            r.seconds = seconds_since(t0);
            return r;
        }
    }
    r.passed = true;
    r.detail = std::to_string(instances) + " instances, " + std::to_string(nodes) + " nodes";
    r.seconds = seconds_since(t0);
    return r;
}

CriterionResult criterion2_numerics(AcceptanceContext&) {
    CriterionResult r{2, "numerics: suffix-free index bound, cv_choice range and distinctness",
                      false, "", 0.0};
    const auto t0 = Clock::now();
    std::mt19937_64 rng(0xC2B002);
    auto random_natural = [&]() -> Natural {
        switch (rng() % 3) {
            case 0: return Natural(rng() % 64);
            case 1: return Natural(rng());
            default: return (Natural(rng()) << 64) | Natural(rng());
        }
    };
    for (std::size_t iter = 0; iter < 10000; ++iter) {
        // Suffix-free property on raw bit strings (leading zeros allowed).
        std::vector<std::uint8_t> raw1(1 + rng() % 40), raw2(1 + rng() % 40);
        for (auto& b : raw1) b = static_cast<std::uint8_t>(rng() % 2);
        for (auto& b : raw2) b = static_cast<std::uint8_t>(rng() % 2);
        BitString s1{raw1}, s2{raw2};
        if (!(s1 == s2)) {
            const BitString e1 = encode_sf(s1), e2 = encode_sf(s2);
            if (e1 == e2) {
                r.detail = "encode_sf collision at iteration " + std::to_string(iter);
                r.seconds = seconds_since(t0);
                return r;
            }
            const std::size_t limit = std::min(2 * s1.size() + 1, 2 * s2.size() + 1);
            std::size_t i = 0;
            const std::size_t scan = std::min(e1.size(), e2.size());
            while (i < scan && e1[i] == e2[i]) {
                ++i;
            }
            if (i >= scan || i > limit) {
                r.detail = "suffix-free differing index " + std::to_string(i) + " exceeds " +
                           std::to_string(limit) + " at iteration " + std::to_string(iter);
                r.seconds = seconds_since(t0);
                return r;
            }
        }
        // cv_choice range and pairwise distinctness.
        Natural a = random_natural(), b = random_natural(), c = random_natural();
        if (a == b || b == c) {
            continue;
        }
        const Natural v_ab = cv_choice(a, b);
        const Natural bound = 8 * Natural(bit_length(std::min(a, b))) + 3;
        if (v_ab < 0 || v_ab > bound) {
            r.detail = "cv_choice(" + a.str() + "," + b.str() + ") = " + v_ab.str() +
                       " outside {0..." + bound.str() + "}";
            r.seconds = seconds_since(t0);
            return r;
        }
        if (v_ab == cv_choice(b, c)) {
            r.detail = "cv_choice(a,b) == cv_choice(b,c) for a=" + a.str() + " b=" + b.str() +
                       " c=" + c.str();
            r.seconds = seconds_since(t0);
            return r;
        }
    }
    r.passed = true;
    r.detail = "10000 random pairs/triples";
    r.seconds = seconds_since(t0);
    return r;
}

CriterionResult criterion3_canon(AcceptanceContext& ctx) {
    CriterionResult r{3, "canonical rendezvous within 704*D over the (D, delay, orientation) grid",
                      false, "", 0.0};
    const auto t0 = Clock::now();
    std::vector<ScenarioSpec> specs;
    for (std::uint64_t d = 1; d <= 256; ++d) {
        struct StartPair {
            Position a, b;
        };
        std::vector<StartPair> starts;
        starts.push_back({-static_cast<Position>(d / 2),
                          static_cast<Position>(d - d / 2)});  // straddles O
        if (d <= 32) {
            starts.push_back({7, 7 + static_cast<Position>(d)});              // both right
            starts.push_back({-7 - static_cast<Position>(d), -7});            // both left
        }
        for (std::uint64_t delay : default_delays("canon", d, 1, ctx.kappa)) {
            for (auto [oa, ob] : std::vector<std::pair<int, int>>{{+1, +1}, {+1, -1}}) {
                for (const StartPair& sp : starts) {
                    ScenarioSpec spec;
                    spec.algorithm = "canon";
                    spec.generator = "canonical";
                    spec.start_a = sp.a;
                    spec.start_b = sp.b;
                    spec.delay = delay;
                    spec.orient_a = oa;
                    spec.orient_b = ob;
                    spec.kappa = ctx.kappa;
                    specs.push_back(spec);
                }
            }
        }
    }
    r.passed = run_specs(ctx, specs, ctx.canon_rows, r.detail);
    r.seconds = seconds_since(t0);
    return r;
}

CriterionResult criterion4_known_d(AcceptanceContext& ctx) {
    CriterionResult r{4, "known-D rendezvous within 8*D*kappa*log*(ell)+12*D on random and huge lines",
                      false, "", 0.0};
    const auto t0 = Clock::now();
    struct GenVariant {
        std::string generator;
        unsigned tier;
        std::uint64_t seed;
    };
    const std::vector<GenVariant> generators = {
        {"random", 0, 101}, {"random", 0, 102}, {"huge", 3, 201}, {"huge", 4, 201}};
    std::vector<ScenarioSpec> specs;
    for (std::uint64_t d = 1; d <= 64; ++d) {
        for (const GenVariant& gen : generators) {
            ScenarioSpec base;
            base.algorithm = "known-d";
            base.generator = gen.generator;
            base.tier = gen.tier;
            base.seed = gen.seed;
            base.start_a = 0;
            base.start_b = static_cast<Position>(d);
            base.kappa = ctx.kappa;
            const LineInstance line = make_line(build_generator(base), base.seed, {+1, +1});
            const Natural ell = std::max(line.label_at(base.start_a), line.label_at(base.start_b));
            for (std::uint64_t delay : default_delays("known-d", d, log_star(ell), ctx.kappa)) {
                for (auto [oa, ob] : std::vector<std::pair<int, int>>{{+1, +1}, {+1, -1}}) {
                    ScenarioSpec spec = base;
                    spec.delay = delay;
                    spec.orient_a = oa;
                    spec.orient_b = ob;
                    specs.push_back(spec);
                }
            }
        }
    }
    r.passed = run_specs(ctx, specs, ctx.known_d_rows, r.detail);
    r.seconds = seconds_since(t0);
    return r;
}

CriterionResult criterion5_colour_oracle(AcceptanceContext& ctx) {
    CriterionResult r{5, "known-D colour oracle: Stage-1 colours differ at distance exactly D",
                      false, "", 0.0};
    const auto t0 = Clock::now();
    std::mt19937_64 rng(0xC5E005);
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;
    struct Triple {
        std::uint64_t seed;
        Position pos;
        std::uint64_t d;
    };
    std::vector<Triple> triples;
    for (std::size_t i = 0; i < 500; ++i) {
        triples.push_back(Triple{rng(), static_cast<Position>(rng() % 4001) - 2000, 1 + rng() % 64});
    }
    parallel_for(triples.size(), ctx.jobs, [&](std::size_t i) {
        if (failed.load()) {
            return;
        }
        const Triple& t = triples[i];
        const LineInstance line = make_line(RandomWindowSpec{}, t.seed, {+1, +1});
        const FinalColour ca = stage1_colour(line, t.pos, t.d, ctx.kappa);
        const FinalColour cb =
            stage1_colour(line, t.pos + static_cast<Position>(t.d), t.d, ctx.kappa);
        if (ca == cb) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            failed = true;
            failure = "equal colours: seed=" + std::to_string(t.seed) +
                      " pos=" + std::to_string(t.pos) + " D=" + std::to_string(t.d);
        }
    });
    // Adversarial increasing-run instances: random lines rarely build the
    // long token cascades that expose an undersized colouring window, these
    // always do.
    for (std::uint64_t d = 1; d <= 3 && !failed.load(); ++d) {
        const Position reach = static_cast<Position>(ctx.kappa) * 5 * static_cast<Position>(d) +
                               static_cast<Position>(d) + 8;
        const LineInstance line = make_line(make_increasing_run_line(d, 0, reach), 0, {+1, +1});
        const FinalColour ca = stage1_colour(line, 0, d, ctx.kappa);
        const FinalColour cb = stage1_colour(line, static_cast<Position>(d), d, ctx.kappa);
        if (ca == cb) {
            failed = true;
            failure = "equal colours on the increasing-run line at D=" + std::to_string(d) +
                      " (colouring window too small)";
        }
    }
    r.passed = !failed.load();
    r.detail = r.passed ? "500 random triples + 3 increasing-run instances" : failure;
    r.seconds = seconds_since(t0);
    return r;
}

CriterionResult criterion6_no_d(AcceptanceContext& ctx) {
    CriterionResult r{6, "unknown-D rendezvous within the noD envelope, incl. differing log* pairs",
                      false, "", 0.0};
    const auto t0 = Clock::now();
    std::vector<ScenarioSpec> specs;
    for (std::uint64_t d = 1; d <= 16; ++d) {
        ScenarioSpec base;
        base.algorithm = "no-d";
        base.generator = "random";
        base.seed = 301;
        base.start_a = 0;
        base.start_b = static_cast<Position>(d);
        base.kappa = ctx.kappa;
        const LineInstance line = make_line(build_generator(base), base.seed, {+1, +1});
        const Natural ell = std::max(line.label_at(base.start_a), line.label_at(base.start_b));
        for (std::uint64_t delay : default_delays("no-d", d, log_star(ell), ctx.kappa)) {
            for (auto [oa, ob] : std::vector<std::pair<int, int>>{{+1, +1}, {+1, -1}}) {
                ScenarioSpec spec = base;
                spec.delay = delay;
                spec.orient_a = oa;
                spec.orient_b = ob;
                specs.push_back(spec);
            }
        }
    }
    // Start-label pairs with differing log*, including a ratio mu > 4
    // (2 vs 65600: log* 1 vs 5); both wake orders.
    struct Pair {
        std::uint64_t label_a, label_b;
    };
    for (const Pair& pair : {Pair{2, 17}, Pair{2, 65600}, Pair{3, 17}}) {
        for (std::uint64_t d = 1; d <= 4; ++d) {
            for (bool b_first : {false, true}) {
                ScenarioSpec spec;
                spec.algorithm = "no-d";
                spec.generator = "explicit";
                spec.seed = 307 + d;
                spec.explicit_spec =
                    make_diff_logstar_line(d, pair.label_a, pair.label_b, spec.seed, ctx.kappa);
                spec.start_a = 0;
                spec.start_b = static_cast<Position>(d);
                spec.b_first = b_first;
                spec.orient_a = +1;
                spec.orient_b = -1;
                spec.kappa = ctx.kappa;
                for (std::uint64_t delay : {std::uint64_t{0}, (std::uint64_t{4} << d_crit(d)) + 1}) {
                    spec.delay = delay;
                    specs.push_back(spec);
                }
            }
        }
    }
    std::vector<RunRow> rows;
    r.passed = run_specs(ctx, specs, rows, r.detail);
    r.seconds = seconds_since(t0);
    return r;
}

CriterionResult criterion7_phase_arithmetic(AcceptanceContext& ctx) {
    CriterionResult r{7, "unknown-D step counts match phase_length and first_epochs", false, "",
                      0.0};
    const auto t0 = Clock::now();
    // Small start label so L = 1 keeps the free run short; window sized for
    // the largest sweep (g = 65) and the largest Stage-2 search radius (2^7),
    // which dominates when kappa is small.
    const Position radius = static_cast<Position>(66ull * ctx.kappa * 1 + 128 + 16);
    ExplicitSpec line_spec;
    line_spec.origin_offset = -radius;
    for (Position p = -radius; p <= radius; ++p) {
        if (p == 0) {
            line_spec.labels.emplace_back(2);
        } else {
            line_spec.labels.push_back(
                Natural(mix64(0x707, p >= 0 ? 2 * static_cast<std::uint64_t>(p)
                                            : 2 * static_cast<std::uint64_t>(-p) - 1)) +
                (Natural(1) << 21));
        }
    }
    const LineInstance line = make_line(line_spec, 0, {+1, +1});

    AgentState agent = agent_init(UnknownDistanceParams{}, ctx.kappa);
    Position pos = 0;
    std::uint64_t current_phase = 1;
    std::uint64_t steps_in_phase = 0;
    std::uint64_t cumulative = 0;
    std::uint64_t clock = 0;
    std::map<std::uint64_t, std::uint64_t> phase_steps;
    std::map<unsigned, std::uint64_t> epoch_end_cumulative;
    while (current_phase <= 64) {
        const Natural label = line.label_at(pos);
        Observation obs{label, ++clock};
        auto [next, move] = agent_step(std::move(agent), obs);
        agent = std::move(next);
        pos += move == AgentMove::Right ? 1 : (move == AgentMove::Left ? -1 : 0);
        ++steps_in_phase;
        ++cumulative;
        if (agent.phase() != current_phase) {
            phase_steps[current_phase] = steps_in_phase;
            // Epochs end after phase 2^j - 1.
            if ((current_phase & (current_phase + 1)) == 0) {
                epoch_end_cumulative[d_crit(current_phase)] = cumulative;
            }
            current_phase = agent.phase();
            steps_in_phase = 0;
        }
    }
    for (std::uint64_t g = 1; g <= 64; ++g) {
        const Natural expected = phase_length(g, 1, ctx.kappa);
        if (Natural(phase_steps[g]) != expected) {
            r.detail = "phase " + std::to_string(g) + " took " + std::to_string(phase_steps[g]) +
                       " steps, expected " + expected.str();
            r.seconds = seconds_since(t0);
            return r;
        }
    }
    for (unsigned j = 1; j <= 6; ++j) {
        const Natural expected = first_epochs(j, 1, ctx.kappa);
        if (Natural(epoch_end_cumulative[j]) != expected) {
            r.detail = "epoch " + std::to_string(j) + " cumulative " +
                       std::to_string(epoch_end_cumulative[j]) + " != " + expected.str();
            r.seconds = seconds_since(t0);
            return r;
        }
    }
    r.passed = true;
    r.detail = "phases 1..64 and epochs 1..6 exact";
    r.seconds = seconds_since(t0);
    return r;
}

CriterionResult criterion8_window_stability(AcceptanceContext& ctx) {
    CriterionResult r{8, "window stability: colour unchanged when the window radius doubles", false,
                      "", 0.0};
    const auto t0 = Clock::now();
    std::mt19937_64 rng(0xC8F008);
    struct Case {
        std::uint64_t seed;
        Position pos;
        std::uint64_t stride;
    };
    std::vector<Case> cases;
    for (std::size_t i = 0; i < 200; ++i) {
        cases.push_back(Case{rng(), static_cast<Position>(rng() % 2000001) - 1000000, 1 + rng() % 8});
    }
    std::atomic<bool> failed{false};
    std::string failure;
    std::mutex failure_mutex;
    parallel_for(cases.size(), ctx.jobs, [&](std::size_t i) {
        if (failed.load()) {
            return;
        }
        const Case& c = cases[i];
        const LineInstance line = make_line(RandomWindowSpec{}, c.seed, {+1, +1});
        const unsigned radius = ctx.kappa * log_star(line.label_at(c.pos));
        auto window = [&](unsigned rad) {
            std::vector<Natural> w;
            w.reserve(2 * static_cast<std::size_t>(rad) + 1);
            for (std::int64_t k = -static_cast<std::int64_t>(rad);
                 k <= static_cast<std::int64_t>(rad); ++k) {
                w.push_back(line.label_at(c.pos + k * static_cast<Position>(c.stride)));
            }
            return w;
        };
        const FinalColour c1 = colour_in_window(window(radius), radius, ctx.kappa);
        const FinalColour c2 = colour_in_window(window(2 * radius), 2 * radius, ctx.kappa);
        if (c1 != c2) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            failed = true;
            failure = "colour changed when doubling the radius: seed=" + std::to_string(c.seed) +
                      " pos=" + std::to_string(c.pos) + " stride=" + std::to_string(c.stride);
        }
    });
    r.passed = !failed.load();
    r.detail = r.passed ? "200 windows" : failure;
    r.seconds = seconds_since(t0);
    return r;
}

CriterionResult criterion9_growth(AcceptanceContext& ctx) {
    CriterionResult r{9, "growth sanity: elapsed/D bounded (canon); huge-neighbour cells obey the start-label bound",
                      false, "", 0.0};
    const auto t0 = Clock::now();
    if (ctx.canon_rows.empty()) {
        CriterionResult c3 = criterion3_canon(ctx);
        if (!c3.passed) {
            r.detail = "criterion 3 grid failed: " + c3.detail;
            r.seconds = seconds_since(t0);
            return r;
        }
    }
    if (ctx.known_d_rows.empty()) {
        CriterionResult c4 = criterion4_known_d(ctx);
        if (!c4.passed) {
            r.detail = "criterion 4 grid failed: " + c4.detail;
            r.seconds = seconds_since(t0);
            return r;
        }
    }
    std::map<std::uint64_t, double> max_ratio;  // per D
    for (const RunRow& row : ctx.canon_rows) {
        if (!row.met) {
            r.detail = "timeout in canon data: " + repro_command(row.spec);
            r.seconds = seconds_since(t0);
            return r;
        }
        const double ratio = static_cast<double>(row.elapsed) / static_cast<double>(row.d);
        max_ratio[row.d] = std::max(max_ratio[row.d], ratio);
        if (ratio > 704.0) {
            r.detail = "elapsed/D = " + std::to_string(ratio) + " exceeds 704 at D=" +
                       std::to_string(row.d);
            r.seconds = seconds_since(t0);
            return r;
        }
    }
    // Monotone-fit check: the per-D ratio must not trend upward; the upper
    // half of the D range may not exceed the lower half's maximum.
    double lo = 0.0, hi = 0.0;
    for (const auto& [d, ratio] : max_ratio) {
        (d <= 128 ? lo : hi) = std::max(d <= 128 ? lo : hi, ratio);
    }
    if (hi > lo) {
        r.detail = "elapsed/D grows with D: max " + std::to_string(hi) + " for D>128 vs " +
                   std::to_string(lo) + " for D<=128";
        r.seconds = seconds_since(t0);
        return r;
    }
    // Tower-tier cells: the bound computed from the start labels alone must
    // hold regardless of neighbourhood magnitude.
    double huge_norm = 0.0;
    std::size_t huge_cells = 0;
    for (const RunRow& row : ctx.known_d_rows) {
        if (row.spec.generator != "huge") {
            continue;
        }
        ++huge_cells;
        const Natural bound = known_d_bound(row.d, row.ell, row.spec.kappa);
        if (!row.met || Natural(row.elapsed) > bound) {
            r.detail = "huge-neighbour cell exceeded the start-label bound: " +
                       repro_command(row.spec);
            r.seconds = seconds_since(t0);
            return r;
        }
        huge_norm = std::max(huge_norm, static_cast<double>(row.elapsed) /
                                            bound.convert_to<double>());
    }
    r.passed = true;
    std::ostringstream detail;
    detail << "canon max elapsed/D = " << std::max(lo, hi) << "; " << huge_cells
           << " huge cells within start-label bound (max fill " << huge_norm << ")";
    r.detail = detail.str();
    r.seconds = seconds_since(t0);
    return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::vector<int>& which, unsigned kappa,
                                            std::ostream& out) {
    AcceptanceContext ctx;
    ctx.kappa = kappa;
    using Fn = CriterionResult (*)(AcceptanceContext&);
    const std::vector<Fn> criteria = {criterion1_colouring,      criterion2_numerics,
                                      criterion3_canon,          criterion4_known_d,
                                      criterion5_colour_oracle,  criterion6_no_d,
                                      criterion7_phase_arithmetic, criterion8_window_stability,
                                      criterion9_growth};
    std::vector<CriterionResult> results;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int index = static_cast<int>(i) + 1;
        if (!which.empty() && std::find(which.begin(), which.end(), index) == which.end()) {
            continue;
        }
        CriterionResult result;
        try {
            result = criteria[i](ctx);
        } catch (const std::exception& e) {
            result.index = index;
            result.passed = false;
            result.detail = std::string("exception: ") + e.what();
        }
        result.index = index;
        out << (result.passed ? "PASS" : "FAIL") << " criterion " << result.index << ": "
            << result.name << " [" << result.detail << "] (" << result.seconds << " s)"
            << std::endl;
        results.push_back(std::move(result));
    }
    return results;
}

}  // namespace rvline::harness
