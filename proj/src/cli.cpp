#include "polymmp/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>

#include "polymmp/errors.hpp"
#include "polymmp/io.hpp"
#include "polymmp/render.hpp"

namespace polymmp {

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitSchema = 2;
constexpr int kExitInvariant = 3;
constexpr int kExitAmple = 4;
constexpr int kExitInternal = 5;

struct Options {
  std::string command;
  std::string input;
  std::string format = "json";
  std::string oracle = "sweep";
  std::string out_dir;
};

void write_result(const Options& options, const std::string& name, const std::string& body,
                  std::ostream& out) {
  if (options.out_dir.empty()) {
    out << body;
    if (!body.empty() && body.back() != '\n') out << "\n";
    return;
  }
  std::filesystem::create_directories(options.out_dir);
  const std::string path = options.out_dir + "/" + name;
  std::ofstream file(path);
  file << body;
  out << path << "\n";
}

bool traces_agree(const MMPTrace& a, const MMPTrace& b) {
  if (a.decomposition.classes.size() != b.decomposition.classes.size()) return false;
  for (std::size_t i = 0; i < a.decomposition.classes.size(); ++i) {
    const auto& ca = a.decomposition.classes[i];
    const auto& cb = b.decomposition.classes[i];
    if (!(ca.interval == cb.interval) || ca.rows_in_force != cb.rows_in_force ||
        !(ca.type == cb.type))
      return false;
  }
  if (a.steps.size() != b.steps.size()) return false;
  for (std::size_t i = 0; i < a.steps.size(); ++i)
    if (a.steps[i].kind != b.steps[i].kind || a.steps[i].epsilon != b.steps[i].epsilon ||
        a.steps[i].dropped_rows != b.steps[i].dropped_rows)
      return false;
  return a.eps_max == b.eps_max;
}

int dispatch(const Options& options, std::ostream& out) {
  std::string fingerprint;
  const PolarizedEmbedding embedding = parse_input(options.input, &fingerprint);

  if (options.command == "check") {
    write_result(options, "check." + options.format,
                 options.format == "json" ? emit_check_json(embedding)
                                          : emit_check_text(embedding),
                 out);
    return 0;
  }

  MMPTrace trace = run_mmp(embedding, options.oracle == "brute", fingerprint);
  if (options.oracle == "both") {
    const MMPTrace brute = run_mmp(embedding, true, fingerprint);
    if (!traces_agree(trace, brute))
      throw InternalError("sweep and brute-force oracle decompositions disagree");
  }

  if (options.command == "run") {
    write_result(options, "trace." + options.format,
                 options.format == "json" ? emit_trace_json(embedding, trace)
                                          : emit_trace_text(embedding, trace),
                 out);
  } else if (options.command == "classes") {
    write_result(options, "classes." + options.format,
                 options.format == "json" ? emit_classes_json(embedding, trace)
                                          : emit_classes_text(embedding, trace),
                 out);
  } else if (options.command == "fiber") {
    write_result(options, "fiber." + options.format,
                 options.format == "json" ? emit_fiber_json(embedding, trace)
                                          : emit_fiber_text(embedding, trace),
                 out);
  } else if (options.command == "render") {
    const std::string dir = options.out_dir.empty() ? "." : options.out_dir;
    const std::string fmt = options.format == "json" ? "svg" : options.format;
    for (const auto& path : render_family(embedding, trace, fmt, dir)) out << path << "\n";
  }
  return 0;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact minimal-model sweeps for horospherical moment polytopes"};
  app.require_subcommand(1);

  Options options;
  for (const char* name : {"run", "classes", "check", "fiber", "render"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--input", options.input, "variety/divisor JSON document")->required();
    if (std::string(name) == "render") {
      sub->add_option("--format", options.format, "svg|csv (default svg)");
      sub->add_option("--out", options.out_dir, "output directory")->required();
    } else {
      sub->add_option("--format", options.format, "json|text")
          ->check(CLI::IsMember({"json", "text"}));
      sub->add_option("--out", options.out_dir, "write the report into this directory");
    }
    if (std::string(name) != "check" && std::string(name) != "render")
      sub->add_option("--oracle", options.oracle, "sweep|brute|both")
          ->check(CLI::IsMember({"sweep", "brute", "both"}));
    sub->callback([&options, name] { options.command = name; });
  }

  std::vector<const char*> argv;
  argv.push_back("polymmp");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    return dispatch(options, out);
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const AmpleError& e) {
    err << "ampleness error: " << e.what() << "\n";
    return kExitAmple;
  } catch (const InvariantError& e) {
    err << "invariant violation: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const InternalError& e) {
    err << "internal cross-check failed: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace polymmp
