#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "rvline/errors.hpp"
#include "rvline/harness.hpp"

namespace {

using namespace rvline;

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;

struct ColourArgs {
    std::string labels_file;
    std::string generator = "file";  // file | random
    std::uint64_t n = 100;
    std::uint64_t seed = 1;
    std::string topology = "path";
    std::string csv_path;
};

int cmd_colour(const ColourArgs& args) {
    std::vector<Natural> labels;
    if (args.generator == "file") {
        if (args.labels_file.empty()) {
            std::cerr << "error: colour needs --labels-file or --generator random\n";
            return kExitConfig;
        }
        ExplicitSpec spec = load_labels_file(args.labels_file);
        labels = spec.labels;
    } else if (args.generator == "random") {
        std::mt19937_64 rng(args.seed);
        std::set<std::uint64_t> seen;
        while (labels.size() < args.n) {
            std::uint64_t v = rng();
            if (v < 2) {
                v += 2;
            }
            if (seen.insert(v).second) {
                labels.emplace_back(v);
            }
        }
    } else {
        std::cerr << "error: unknown generator " << args.generator << "\n";
        return kExitConfig;
    }

    Topology topology;
    if (args.topology == "path") {
        topology = Topology::Path;
    } else if (args.topology == "cycle") {
        topology = Topology::Cycle;
    } else {
        std::cerr << "error: topology must be path or cycle\n";
        return kExitConfig;
    }

    ColouringResult result = run_local(labels, topology);

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!args.csv_path.empty()) {
        file.open(args.csv_path);
        if (!file) {
            std::cerr << "error: cannot write " << args.csv_path << "\n";
            return kExitConfig;
        }
        out = &file;
    }
    *out << "node_index,label,final_colour,termination_round\n";
    for (std::size_t i = 0; i < labels.size(); ++i) {
        *out << i << ',' << labels[i].str() << ',' << static_cast<int>(result.nodes[i].colour)
             << ',' << result.nodes[i].termination_round << '\n';
    }

    const std::size_t n = labels.size();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j =
            (i + 1 < n) ? i + 1 : (topology == Topology::Cycle ? 0 : i);
        if (j != i && result.nodes[i].colour == result.nodes[j].colour) {
            std::cerr << "violation: adjacent nodes " << i << "," << j << " share a colour\n";
            return kExitViolation;
        }
        const std::uint64_t limit = static_cast<std::uint64_t>(log_star(labels[i])) + 59;
        if (result.nodes[i].termination_round > limit) {
            std::cerr << "violation: node " << i << " terminated in round "
                      << result.nodes[i].termination_round << " > " << limit << "\n";
            return kExitViolation;
        }
    }
    return kExitOk;
}

struct RendezvousArgs {
    harness::ScenarioSpec spec;
    std::string first = "a";
    std::string labels_file;
    std::string trace_path;
    bool generator_given = false;
};

int cmd_rendezvous(RendezvousArgs& args) {
    args.spec.b_first = args.first == "b";
    if (!args.generator_given && args.labels_file.empty() && args.spec.algorithm != "canon") {
        args.spec.generator = "random";
    }
    if (!args.labels_file.empty()) {
        args.spec.generator = "explicit";
        args.spec.explicit_spec = load_labels_file(args.labels_file);
    }
    Trace trace;
    harness::RunRow row =
        harness::run_one(args.spec, args.trace_path.empty() ? nullptr : &trace);
    harness::write_rendezvous_csv_header(std::cout);
    harness::write_rendezvous_csv_row(std::cout, row);
    if (!args.trace_path.empty()) {
        std::ofstream out(args.trace_path);
        if (!out) {
            std::cerr << "error: cannot write " << args.trace_path << "\n";
            return kExitConfig;
        }
        write_trace_csv(out, trace);
    }
    if (!row.ok) {
        std::cerr << (row.met ? "violation: bound exceeded; " : "violation: timeout; ")
                  << "reproduce with: " << harness::repro_command(args.spec) << "\n";
        return kExitViolation;
    }
    return kExitOk;
}

struct SweepArgs {
    harness::SweepSpec spec;
    std::vector<std::string> generators;
    std::string orientations = "both";
    std::string csv_path;
};

int cmd_sweep(SweepArgs& args) {
    args.spec.generators = args.generators;
    if (args.orientations == "both") {
        args.spec.orientations = {{+1, +1}, {+1, -1}};
    } else if (args.orientations == "agree") {
        args.spec.orientations = {{+1, +1}};
    } else if (args.orientations == "oppose") {
        args.spec.orientations = {{+1, -1}};
    } else {
        std::cerr << "error: --orientations must be both, agree or oppose\n";
        return kExitConfig;
    }
    std::vector<harness::SweepCell> cells = harness::run_sweep(args.spec);
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!args.csv_path.empty()) {
        file.open(args.csv_path);
        if (!file) {
            std::cerr << "error: cannot write " << args.csv_path << "\n";
            return kExitConfig;
        }
        out = &file;
    }
    harness::write_sweep_csv(*out, cells);
    for (const harness::SweepCell& cell : cells) {
        if (!cell.ok) {
            std::cerr << "violation: first failing cell reproduces with: "
                      << harness::repro_command(cell.failing ? *cell.failing : cell.representative)
                      << "\n";
            return kExitViolation;
        }
    }
    return kExitOk;
}

int cmd_verify(const std::vector<int>& criteria, unsigned kappa) {
    std::vector<harness::CriterionResult> results =
        harness::run_acceptance(criteria, kappa, std::cout);
    bool all = true;
    for (const auto& result : results) {
        all = all && result.passed;
    }
    if (!all) {
        std::cerr << "verification failed\n";
        return kExitViolation;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Deterministic rendezvous on labeled lines: simulator and verification harness"};
    app.require_subcommand(1);

    const unsigned kappa_env = [] {
        try {
            return rvline::effective_kappa();
        } catch (const std::exception&) {
            return rvline::kDefaultKappa;
        }
    }();

    ColourArgs colour_args;
    auto* colour = app.add_subcommand("colour", "3-colour a labeled path or cycle and emit CSV");
    colour->add_option("--labels-file", colour_args.labels_file,
                       "label file (origin_offset=<int> header, one label per line)");
    colour->add_option("--generator", colour_args.generator, "file | random");
    colour->add_option("--n", colour_args.n, "node count for --generator random");
    colour->add_option("--seed", colour_args.seed, "seed for --generator random");
    colour->add_option("--topology", colour_args.topology, "path | cycle");
    colour->add_option("--csv", colour_args.csv_path, "write CSV here instead of stdout");

    RendezvousArgs rv_args;
    rv_args.spec.kappa = kappa_env;
    auto* rv = app.add_subcommand("rendezvous", "run one rendezvous scenario and check its bound");
    rv->add_option("--algorithm", rv_args.spec.algorithm, "canon | known-d | no-d")->required();
    auto* rv_generator =
        rv->add_option("--generator", rv_args.spec.generator,
                       "canonical | random | huge (default: canonical for canon, else random)");
    rv->add_option("--labels-file", rv_args.labels_file, "explicit line from a label file");
    rv->add_option("--tier", rv_args.spec.tier, "huge generator tower tier");
    rv->add_option("--seed", rv_args.spec.seed, "generator seed");
    rv->add_option("--start-a", rv_args.spec.start_a, "agent a start position");
    rv->add_option("--start-b", rv_args.spec.start_b, "agent b start position");
    rv->add_option("--delay", rv_args.spec.delay, "rounds between the wake-ups");
    rv->add_option("--first", rv_args.first, "which agent wakes first: a | b");
    rv->add_option("--orient-a", rv_args.spec.orient_a, "+1 or -1");
    rv->add_option("--orient-b", rv_args.spec.orient_b, "+1 or -1");
    rv->add_option("--kappa", rv_args.spec.kappa, "EarlyStopCV round constant");
    rv->add_option("--max-rounds", rv_args.spec.max_rounds, "round budget (default from the bound)");
    rv->add_option("--trace", rv_args.trace_path, "write the per-round trace CSV here");

    SweepArgs sweep_args;
    sweep_args.spec.kappa = kappa_env;
    auto* sweep = app.add_subcommand("sweep", "sweep (D, delay, orientation) cells and emit CSV");
    sweep->add_option("--algorithm", sweep_args.spec.algorithm, "canon | known-d | no-d")->required();
    sweep->add_option("--generators", sweep_args.generators, "generator kinds (default per algorithm)");
    sweep->add_option("--d-min", sweep_args.spec.d_min, "smallest D");
    sweep->add_option("--d-max", sweep_args.spec.d_max, "largest D");
    sweep->add_option("--delays", sweep_args.spec.delays, "explicit delay list (default per cell)");
    sweep->add_option("--seeds", sweep_args.spec.seeds, "one trial per seed");
    sweep->add_option("--orientations", sweep_args.orientations, "both | agree | oppose");
    sweep->add_option("--kappa", sweep_args.spec.kappa, "EarlyStopCV round constant");
    sweep->add_option("--jobs", sweep_args.spec.jobs, "worker threads");
    sweep->add_option("--csv", sweep_args.csv_path, "write CSV here instead of stdout");

    std::vector<int> verify_criteria;
    unsigned verify_kappa = kappa_env;
    auto* verify = app.add_subcommand("verify", "run the verification suite");
    verify->add_option("--criterion", verify_criteria, "run only these criteria (1..9)");
    verify->add_option("--kappa", verify_kappa, "EarlyStopCV round constant");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (colour->parsed()) {
            return cmd_colour(colour_args);
        }
        if (rv->parsed()) {
            rv_args.generator_given = rv_generator->count() > 0;
            return cmd_rendezvous(rv_args);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sweep_args);
        }
        if (verify->parsed()) {
            return cmd_verify(verify_criteria, verify_kappa);
        }
    } catch (const rvline::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const rvline::PreconditionError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitViolation;
    }
    return kExitConfig;
}
