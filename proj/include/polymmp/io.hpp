#pragma once

#include <string>

#include "polymmp/mmp.hpp"

namespace polymmp {

/** Parses a variety/divisor document (schema below) into a validated
 *  embedding. Failures carry their category: SchemaError for malformed
 *  documents, InvariantError for well-formed data violating a domain
 *  invariant, AmpleError for divisors that are not ample on the given fan.
 *
 *  {
 *    "version": 1,
 *    "root_system": {"type": "A"|...|"torus", "rank": 2},
 *    "R": ["a1", ...],                       // parabolic simple roots
 *    "M_basis": [["1","1"], ...],            // lattice basis, weight coords
 *    "rays": [["1"], ["-1"], ...],           // G-stable primitive rays
 *    "cones": [{"rays": [0,1], "colors": ["a2"]}, ...],
 *    "divisor": {"g_stable": ["1","2"], "colors": {"a1": "2", ...}}
 *  }
 *
 *  Rationals are "p" or "p/q" strings (plain JSON integers are accepted).
 *  Simple roots are named "a1".."a8" in Bourbaki order; the aliases
 *  "alpha", "beta", ... map positionally. */
PolarizedEmbedding parse_input_text(const std::string& json_text);
PolarizedEmbedding parse_input(const std::string& path, std::string* fingerprint = nullptr);

/// Inverse of parse_input_text up to canonical form.
std::string emit_input(const PolarizedEmbedding& embedding);

/// Versioned machine report of a full trace.
std::string emit_trace_json(const PolarizedEmbedding& embedding, const MMPTrace& trace);
std::string emit_trace_text(const PolarizedEmbedding& embedding, const MMPTrace& trace);

/// Class-decomposition-only reports.
std::string emit_classes_json(const PolarizedEmbedding& embedding, const MMPTrace& trace);
std::string emit_classes_text(const PolarizedEmbedding& embedding, const MMPTrace& trace);

/// Input singularity/genericity report (the `check` subcommand).
std::string emit_check_json(const PolarizedEmbedding& embedding);
std::string emit_check_text(const PolarizedEmbedding& embedding);

/// Terminal-data-only reports (the `fiber` subcommand).
std::string emit_fiber_json(const PolarizedEmbedding& embedding, const MMPTrace& trace);
std::string emit_fiber_text(const PolarizedEmbedding& embedding, const MMPTrace& trace);

/// Canonical name of a simple root ("a1", ...).
std::string root_name(std::size_t index);

/// FNV-1a fingerprint of raw input bytes.
std::string fingerprint_bytes(const std::string& bytes);

}  // namespace polymmp
