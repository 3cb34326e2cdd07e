#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polymmp/cli.hpp"
#include "polymmp/errors.hpp"
#include "polymmp/io.hpp"
#include "polymmp/render.hpp"

namespace py = pybind11;
using namespace polymmp;

namespace {

MMPTrace trace_of(const std::string& input_json, const std::string& oracle) {
  const PolarizedEmbedding embedding = parse_input_text(input_json);
  MMPTrace trace = run_mmp(embedding, oracle == "brute", fingerprint_bytes(input_json));
  if (oracle == "both") {
    const MMPTrace brute = run_mmp(embedding, true, trace.fingerprint);
    if (trace.eps_max != brute.eps_max ||
        trace.decomposition.classes.size() != brute.decomposition.classes.size())
      throw InternalError("sweep and brute-force oracle decompositions disagree");
  }
  return trace;
}

}  // namespace

PYBIND11_MODULE(_polymmp, m) {
  m.doc() = "Exact minimal-model sweeps for horospherical moment polytopes";
  m.attr("__version__") = "1.0.0";

  const py::object schema_error =
      py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);
  py::register_exception<InvariantError>(m, "InvariantError", PyExc_ValueError);
  py::register_exception<AmpleError>(m, "AmpleError", PyExc_ValueError);
  py::register_exception<InternalError>(m, "InternalError", PyExc_RuntimeError);

  m.def(
      "run_trace",
      [](const std::string& input_json, const std::string& oracle) {
        const PolarizedEmbedding embedding = parse_input_text(input_json);
        return emit_trace_json(embedding, trace_of(input_json, oracle));
      },
      py::arg("input_json"), py::arg("oracle") = "sweep",
      "Full sweep of the input document; returns the trace as JSON text.");

  m.def(
      "class_decomposition",
      [](const std::string& input_json, const std::string& oracle) {
        const PolarizedEmbedding embedding = parse_input_text(input_json);
        return emit_classes_json(embedding, trace_of(input_json, oracle));
      },
      py::arg("input_json"), py::arg("oracle") = "sweep",
      "Equivalence classes of the parameter sweep as JSON text.");

  m.def(
      "check",
      [](const std::string& input_json) {
        return emit_check_json(parse_input_text(input_json));
      },
      py::arg("input_json"),
      "Singularity and genericity report of the input variety as JSON text.");

  m.def(
      "fiber",
      [](const std::string& input_json) {
        const PolarizedEmbedding embedding = parse_input_text(input_json);
        return emit_fiber_json(embedding, trace_of(input_json, "sweep"));
      },
      py::arg("input_json"), "Terminal data of the sweep as JSON text.");

  m.def(
      "canonical_input",
      [](const std::string& input_json) {
        return emit_input(parse_input_text(input_json));
      },
      py::arg("input_json"), "Parses and re-emits a document in canonical form.");

  m.def(
      "render",
      [](const std::string& input_json, const std::string& out_dir, const std::string& format) {
        const PolarizedEmbedding embedding = parse_input_text(input_json);
        return render_family(embedding, trace_of(input_json, "sweep"), format, out_dir);
      },
      py::arg("input_json"), py::arg("out_dir"), py::arg("format") = "svg",
      "Writes per-class frames; returns the written paths.");

  (void)schema_error;
}
