#include <doctest.h>

#include <sstream>

#include "rvline/errors.hpp"
#include "rvline/harness.hpp"

using namespace rvline;
using namespace rvline::harness;

TEST_CASE("bounds are positive and the noD envelope is monotone") {
    const Natural small_ell = 3;
    const Natural huge_ell = Natural(1) << 100;
    for (std::uint64_t d : {1ull, 2ull, 7ull, 64ull, 256ull}) {
        CHECK(canon_bound(d) == Natural(704) * d);
        CHECK(canon_bound(d) > 0);
        CHECK(known_d_bound(d, small_ell, 60) > 0);
        CHECK(nod_envelope(d, small_ell, 60) > 0);
        // monotone in D
        CHECK(nod_envelope(d + 1, small_ell, 60) >= nod_envelope(d, small_ell, 60));
        // monotone in log*(ell)
        CHECK(nod_envelope(d, huge_ell, 60) >= nod_envelope(d, small_ell, 60));
        CHECK(known_d_bound(d, huge_ell, 60) > known_d_bound(d, small_ell, 60));
        // the simulation round cap never exceeds the acceptance envelope
        CHECK(nod_round_cap(d, small_ell, 60) <= nod_envelope(d, small_ell, 60));
        CHECK(nod_round_cap(d, huge_ell, 60) <= nod_envelope(d, huge_ell, 60));
    }
    CHECK(known_d_bound(1, Natural(3), 60) == 8 * 60 * 2 + 12);  // log*(3) = 2
}

TEST_CASE("default delay grids include the large-delay thresholds") {
    const auto canon = default_delays("canon", 7, 1, 60);
    CHECK(canon.front() == 0);
    CHECK(std::find(canon.begin(), canon.end(), 5) != canon.end());
    CHECK(std::find(canon.begin(), canon.end(), 20480) != canon.end());  // 5 * 2^12
    // one delay beyond 48 * 2^{i_crit}
    CHECK(canon.back() > std::uint64_t{48} << i_crit(7));

    const auto known = default_delays("known-d", 4, 5, 60);
    CHECK(known.back() == 4 * 4 * 60 * 5 + 1);

    const auto nod = default_delays("no-d", 4, 1, 60);
    const unsigned dc = d_crit(4);
    CHECK(std::find(nod.begin(), nod.end(), (std::uint64_t{4} << dc) - 1) != nod.end());
    CHECK(std::find(nod.begin(), nod.end(), (std::uint64_t{4} << dc) + 1) != nod.end());
    CHECK(Natural(nod.back()) == first_epochs(dc, 1, 60) + 1);

    CHECK_THROWS_AS(default_delays("bogus", 1, 1, 60), ConfigError);
}

TEST_CASE("run_one: canon D=7, delay 13 meets within 704*7") {
    ScenarioSpec spec;
    spec.algorithm = "canon";
    spec.generator = "canonical";
    spec.start_a = 0;
    spec.start_b = 7;
    spec.delay = 13;
    const RunRow row = run_one(spec);
    CHECK(row.d == 7);
    CHECK(row.met);
    CHECK(row.ok);
    CHECK(row.bound == 4928);
    CHECK(Natural(row.elapsed) <= row.bound);
}

TEST_CASE("run_one rejects mismatched algorithm/generator combinations") {
    ScenarioSpec canon_on_random;
    canon_on_random.algorithm = "canon";
    canon_on_random.generator = "random";
    canon_on_random.start_b = 2;
    CHECK_THROWS_AS(run_one(canon_on_random), ConfigError);

    ScenarioSpec known_on_canonical;
    known_on_canonical.algorithm = "known-d";
    known_on_canonical.generator = "canonical";
    known_on_canonical.start_b = 2;
    CHECK_THROWS_AS(run_one(known_on_canonical), ConfigError);

    ScenarioSpec d0;
    d0.algorithm = "known-d";
    d0.generator = "random";
    d0.start_a = 3;
    d0.start_b = 3;
    CHECK_THROWS_AS(run_one(d0), ConfigError);
}

TEST_CASE("rendezvous CSV row carries the exact column set") {
    ScenarioSpec spec;
    spec.algorithm = "canon";
    spec.generator = "canonical";
    spec.start_a = 0;
    spec.start_b = 1;
    const RunRow row = run_one(spec);
    std::ostringstream out;
    write_rendezvous_csv_header(out);
    write_rendezvous_csv_row(out, row);
    CHECK(out.str().rfind("algorithm,D,delay,ell,elapsed,bound,ok\n", 0) == 0);
    CHECK(out.str().find("canon,1,0,3,57,704,1\n") != std::string::npos);
}

TEST_CASE("sweeps are deterministic and sorted by cell key") {
    SweepSpec spec;
    spec.algorithm = "known-d";
    spec.d_min = 1;
    spec.d_max = 3;
    spec.delays = {0, 2};
    spec.seeds = {5, 6};
    spec.orientations = {{+1, +1}, {+1, -1}};
    spec.jobs = 4;
    const auto cells = run_sweep(spec);
    CHECK(cells.size() == 3 * 2 * 2);
    for (const SweepCell& cell : cells) {
        CHECK(cell.trials == 2);
        CHECK(cell.ok);
    }
    std::ostringstream a, b;
    write_sweep_csv(a, cells);
    write_sweep_csv(b, run_sweep(spec));
    CHECK(a.str() == b.str());
    for (std::size_t i = 1; i < cells.size(); ++i) {
        const bool ordered =
            std::tie(cells[i - 1].d, cells[i - 1].delay) <= std::tie(cells[i].d, cells[i].delay);
        CHECK(ordered);
    }
}

TEST_CASE("repro commands include every knob that differs from the default") {
    ScenarioSpec spec;
    spec.algorithm = "no-d";
    spec.generator = "huge";
    spec.tier = 3;
    spec.seed = 9;
    spec.start_a = -2;
    spec.start_b = 5;
    spec.delay = 11;
    spec.b_first = true;
    spec.orient_b = -1;
    spec.kappa = 12;
    const std::string cmd = repro_command(spec);
    CHECK(cmd.find("--algorithm no-d") != std::string::npos);
    CHECK(cmd.find("--generator huge") != std::string::npos);
    CHECK(cmd.find("--tier 3") != std::string::npos);
    CHECK(cmd.find("--seed 9") != std::string::npos);
    CHECK(cmd.find("--start-a -2") != std::string::npos);
    CHECK(cmd.find("--delay 11") != std::string::npos);
    CHECK(cmd.find("--first b") != std::string::npos);
    CHECK(cmd.find("--kappa 12") != std::string::npos);
}
