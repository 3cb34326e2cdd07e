#pragma once

#include <string>
#include <vector>

#include "polymmp/mmp.hpp"

namespace polymmp {

/** Writes one frame per class representative (plus every one-point class)
 *  of a computed trace into `out_dir`: labeled SVG wireframes for moment
 *  polytopes of dimension <= 3 (3D drawn from the top, dropping the last
 *  coordinate) and a vertices.csv with the exact coordinates per frame.
 *  Dimensions above 3 raise InvariantError after the CSV is written.
 *  Returns the written file paths. */
std::vector<std::string> render_family(const PolarizedEmbedding& embedding,
                                       const MMPTrace& trace, const std::string& format,
                                       const std::string& out_dir);

}  // namespace polymmp
