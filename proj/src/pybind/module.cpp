#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "rvline/harness.hpp"

namespace py = pybind11;
using namespace rvline;

namespace {

// Bridged through hex strings: python caps decimal int<->str conversion at
// 4300 digits, and labels can be tower-sized.
Natural to_natural(const py::int_& v) {
    py::object hex_obj = py::reinterpret_steal<py::object>(PyNumber_ToBase(v.ptr(), 16));
    if (!hex_obj) {
        throw py::error_already_set();
    }
    const auto text = hex_obj.cast<std::string>();
    if (!text.empty() && text[0] == '-') {
        throw py::value_error("expected a non-negative integer");
    }
    return Natural(text);
}

py::int_ to_pyint(const Natural& v) {
    const std::string hex = v.str(0, std::ios_base::hex);
    return py::reinterpret_steal<py::int_>(PyLong_FromString(hex.c_str(), nullptr, 16));
}

Topology parse_topology(const std::string& name) {
    if (name == "path") {
        return Topology::Path;
    }
    if (name == "cycle") {
        return Topology::Cycle;
    }
    throw py::value_error("topology must be 'path' or 'cycle'");
}

std::vector<Natural> to_labels(const std::vector<py::int_>& labels) {
    std::vector<Natural> out;
    out.reserve(labels.size());
    for (const py::int_& v : labels) {
        out.push_back(to_natural(v));
    }
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Deterministic rendezvous on labeled lines: numerics, EarlyStopCV colouring, "
              "agents and the two-agent simulator";

    m.def("tower", [](unsigned k) { return to_pyint(tower(k)); }, py::arg("k"));
    m.def("log_star", [](const py::int_& n) { return log_star(to_natural(n)); }, py::arg("n"));
    m.def("binary_rep", [](const py::int_& n) { return binary_rep(to_natural(n)).to_text(); },
          py::arg("n"));
    m.def("int_val", [](const std::string& s) { return to_pyint(int_val(BitString::from_text(s))); },
          py::arg("bits"));
    m.def("encode_sf",
          [](const std::string& s) { return encode_sf(BitString::from_text(s)).to_text(); },
          py::arg("bits"));
    m.def("cv_choice",
          [](const py::int_& mine, const py::int_& other) {
              return to_pyint(cv_choice(to_natural(mine), to_natural(other)));
          },
          py::arg("mine"), py::arg("other"));

    m.def("run_local",
          [](const std::vector<py::int_>& labels, const std::string& topology,
             std::uint64_t max_rounds) {
              const ColouringResult result =
                  run_local(to_labels(labels), parse_topology(topology), max_rounds);
              std::vector<std::pair<int, std::uint64_t>> rows;
              rows.reserve(result.nodes.size());
              for (const NodeOutcome& node : result.nodes) {
                  rows.emplace_back(static_cast<int>(node.colour), node.termination_round);
              }
              return rows;
          },
          py::arg("labels"), py::arg("topology") = "path", py::arg("max_rounds") = 0,
          "Per node: (final_colour, termination_round)");
    m.def("colour_in_window",
          [](const std::vector<py::int_>& labels, std::size_t centre, unsigned kappa) {
              return static_cast<int>(colour_in_window(to_labels(labels), centre, kappa));
          },
          py::arg("labels"), py::arg("centre"), py::arg("kappa") = kDefaultKappa);

    m.def("s_string", [](int c) { return s_string(static_cast<FinalColour>(c)); }, py::arg("colour"));
    m.def("phase_length",
          [](std::uint64_t g, unsigned l, unsigned kappa) {
              return to_pyint(phase_length(g, l, kappa));
          },
          py::arg("g"), py::arg("log_star_v"), py::arg("kappa") = kDefaultKappa);
    m.def("epoch_length",
          [](unsigned j, unsigned l, unsigned kappa) { return to_pyint(epoch_length(j, l, kappa)); },
          py::arg("j"), py::arg("log_star_v"), py::arg("kappa") = kDefaultKappa);
    m.def("first_epochs",
          [](unsigned m_, unsigned l, unsigned kappa) { return to_pyint(first_epochs(m_, l, kappa)); },
          py::arg("m"), py::arg("log_star_v"), py::arg("kappa") = kDefaultKappa);
    m.def("i_crit", &i_crit, py::arg("d"));
    m.def("d_crit", &d_crit, py::arg("d"));
    m.def("canon_colour",
          [](std::uint64_t dist, const std::string& side, unsigned phase_i) {
              CanonSide s;
              if (side == "at_or_right") {
                  s = CanonSide::AtOrRightOfO;
              } else if (side == "left") {
                  s = CanonSide::LeftOfO;
              } else {
                  throw py::value_error("side must be 'at_or_right' or 'left'");
              }
              return canon_colour(dist, s, phase_i) == CanonColour::Red ? "red" : "blue";
          },
          py::arg("dist_to_o"), py::arg("side"), py::arg("phase_i"));

    m.def("canon_bound", [](std::uint64_t d) { return to_pyint(canon_bound(d)); }, py::arg("d"));
    m.def("known_d_bound",
          [](std::uint64_t d, const py::int_& ell, unsigned kappa) {
              return to_pyint(known_d_bound(d, to_natural(ell), kappa));
          },
          py::arg("d"), py::arg("ell"), py::arg("kappa") = kDefaultKappa);
    m.def("nod_envelope",
          [](std::uint64_t d, const py::int_& ell, unsigned kappa) {
              return to_pyint(nod_envelope(d, to_natural(ell), kappa));
          },
          py::arg("d"), py::arg("ell"), py::arg("kappa") = kDefaultKappa);

    m.def("run_rendezvous",
          [](const std::string& algorithm, const std::string& generator, std::uint64_t seed,
             Position start_a, Position start_b, std::uint64_t delay, const std::string& first,
             int orient_a, int orient_b, unsigned kappa, std::uint64_t max_rounds, unsigned tier,
             const std::optional<std::vector<py::int_>>& labels, Position origin_offset,
             bool capture_trace) {
              harness::ScenarioSpec spec;
              spec.algorithm = algorithm;
              spec.generator = generator;
              spec.seed = seed;
              spec.start_a = start_a;
              spec.start_b = start_b;
              spec.delay = delay;
              spec.b_first = first == "b";
              spec.orient_a = orient_a;
              spec.orient_b = orient_b;
              spec.kappa = kappa;
              spec.max_rounds = max_rounds;
              spec.tier = tier;
              if (labels) {
                  spec.generator = "explicit";
                  spec.explicit_spec = ExplicitSpec{to_labels(*labels), origin_offset};
              }
              Trace trace;
              const harness::RunRow row = harness::run_one(spec, capture_trace ? &trace : nullptr);
              py::dict out;
              out["met"] = row.met;
              out["elapsed"] = row.elapsed;
              out["node"] = row.node;
              out["d"] = row.d;
              out["ell"] = to_pyint(row.ell);
              out["bound"] = to_pyint(row.bound);
              out["ok"] = row.ok;
              if (capture_trace) {
                  py::list rows;
                  for (const TraceRow& tr : trace.rows) {
                      rows.append(py::make_tuple(tr.global_round, tr.pos_a, tr.pos_b,
                                                 tr.move_a ? move_name(*tr.move_a) : "",
                                                 tr.move_b ? move_name(*tr.move_b) : ""));
                  }
                  out["trace"] = rows;
              }
              return out;
          },
          py::arg("algorithm"), py::arg("generator") = "random", py::arg("seed") = 1,
          py::arg("start_a") = 0, py::arg("start_b") = 1, py::arg("delay") = 0,
          py::arg("first") = "a", py::arg("orient_a") = 1, py::arg("orient_b") = 1,
          py::arg("kappa") = kDefaultKappa, py::arg("max_rounds") = 0, py::arg("tier") = 4,
          py::arg("labels") = std::nullopt, py::arg("origin_offset") = 0,
          py::arg("capture_trace") = false);

    m.attr("DEFAULT_KAPPA") = kDefaultKappa;
}
