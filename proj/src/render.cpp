#include "polymmp/render.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "polymmp/errors.hpp"

namespace polymmp {

namespace {

struct Frame {
  std::string label;
  Rat eps;
  std::vector<RatVec> vertices;                             // weight coordinates
  std::vector<std::pair<std::size_t, std::size_t>> edges;   // vertex index pairs
};

double approx(const Rat& r) {
  return rat_num(r).convert_to<double>() / rat_den(r).convert_to<double>();
}

std::string format_point(const RatVec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += rat_to_string(v[i]);
  }
  return s + ")";
}

Frame make_frame(const HoroSpace& space, const FamilyBundle& bundle,
                 const ParametricFamily& family, const Rat& eps, const std::string& label) {
  Frame frame;
  frame.label = label;
  frame.eps = eps;
  const MomentPair pair = class_pair(space, bundle, family, eps);
  const auto verts = pair.q_tilde.vertices();
  for (const auto& v : verts)
    frame.vertices.push_back(weight_point(space, pair, v.witness_ambient));
  for (const auto& f : pair.q_tilde.faces()) {
    if (f.dim != 1) continue;
    std::vector<std::size_t> ends;
    for (std::size_t i = 0; i < verts.size(); ++i)
      if (std::includes(verts[i].active.begin(), verts[i].active.end(), f.active.begin(),
                        f.active.end()))
        ends.push_back(i);
    if (ends.size() == 2) frame.edges.emplace_back(ends[0], ends[1]);
  }
  return frame;
}

void write_svg(const Frame& frame, std::size_t dim, const std::string& path) {
  // 1D and 2D are drawn directly; 3D from the top (last coordinate dropped).
  auto project = [&](const RatVec& v) {
    double x = approx(v[0]);
    double y = v.size() >= 2 ? approx(v[1]) : 0.0;
    return std::pair<double, double>{x, y};
  };
  (void)dim;

  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  bool first = true;
  for (const auto& v : frame.vertices) {
    const auto [x, y] = project(v);
    if (first) {
      min_x = max_x = x;
      min_y = max_y = y;
      first = false;
    }
    min_x = std::min(min_x, x);
    max_x = std::max(max_x, x);
    min_y = std::min(min_y, y);
    max_y = std::max(max_y, y);
  }
  const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
  const double scale = 360.0 / span;
  const double margin = 70.0;
  auto map = [&](const RatVec& v) {
    const auto [x, y] = project(v);
    return std::pair<double, double>{margin + (x - min_x) * scale,
                                     margin + (max_y - y) * scale};
  };

  std::ofstream out(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"500\" height=\"500\" "
         "viewBox=\"0 0 500 500\">\n";
  out << "  <desc>" << frame.label << " at eps=" << rat_to_string(frame.eps)
      << "; 3D polytopes are projected from the top (last coordinate dropped)</desc>\n";
  for (const auto& [a, b] : frame.edges) {
    const auto [x1, y1] = map(frame.vertices[a]);
    const auto [x2, y2] = map(frame.vertices[b]);
    out << "  <line x1=\"" << x1 << "\" y1=\"" << y1 << "\" x2=\"" << x2 << "\" y2=\"" << y2
        << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";
  }
  for (const auto& v : frame.vertices) {
    const auto [x, y] = map(v);
    out << "  <circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3\" fill=\"black\"/>\n";
    out << "  <text x=\"" << x + 5 << "\" y=\"" << y - 5 << "\" font-size=\"11\">"
        << format_point(v) << "</text>\n";
  }
  out << "  <text x=\"10\" y=\"490\" font-size=\"13\">" << frame.label
      << "  eps=" << rat_to_string(frame.eps) << "</text>\n";
  out << "</svg>\n";
}

}  // namespace

std::vector<std::string> render_family(const PolarizedEmbedding& embedding,
                                       const MMPTrace& trace, const std::string& format,
                                       const std::string& out_dir) {
  if (format != "svg" && format != "csv")
    throw InvariantError("render format must be svg or csv");
  std::filesystem::create_directories(out_dir);

  const FamilyBundle bundle = build_family(embedding);
  std::vector<Frame> frames;
  const auto& dec = trace.decomposition;
  for (std::size_t i = 0; i < dec.classes.size(); ++i) {
    const auto& rec = dec.classes[i];
    const auto& family = dec.families[dec.class_family[i]];
    std::ostringstream label;
    label << "class " << rec.interval.to_string();
    frames.push_back(
        make_frame(embedding.space, bundle, family, rec.representative, label.str()));
  }

  std::vector<std::string> written;
  const std::string csv_path = out_dir + "/vertices.csv";
  {
    std::ofstream csv(csv_path);
    csv << "frame,interval,eps,vertex\n";
    for (std::size_t i = 0; i < frames.size(); ++i)
      for (const auto& v : frames[i].vertices)
        csv << i << "," << dec.classes[i].interval.to_string() << ","
            << rat_to_string(frames[i].eps) << ",\"" << format_point(v) << "\"\n";
  }
  written.push_back(csv_path);
  if (format == "csv") return written;

  const std::size_t dim = embedding.space.weight_dim();
  if (dim > 3)
    throw InvariantError(
        "render unsupported above dimension 3; exact vertex data is in vertices.csv");
  for (std::size_t i = 0; i < frames.size(); ++i) {
    std::ostringstream name;
    name << out_dir << "/frame_" << i << ".svg";
    write_svg(frames[i], dim, name.str());
    written.push_back(name.str());
  }
  return written;
}

}  // namespace polymmp
