#include "polymmp/io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

#include "polymmp/errors.hpp"

namespace polymmp {

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

const char* kAliases[] = {"alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta"};

std::size_t parse_root_name(const std::string& name, std::size_t rank) {
  for (std::size_t i = 0; i < 8; ++i)
    if (name == kAliases[i]) {
      if (i >= rank) throw SchemaError("simple root alias beyond the rank: " + name);
      return i;
    }
  if (name.size() >= 2 && name[0] == 'a') {
    const int idx = std::atoi(name.c_str() + 1);
    if (idx >= 1 && static_cast<std::size_t>(idx) <= rank)
      return static_cast<std::size_t>(idx - 1);
  }
  throw SchemaError("unknown simple root name: \"" + name + "\"");
}

Rat json_rat(const json& j) {
  try {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string()) return parse_rat(j.get<std::string>());
  } catch (const InvariantError& e) {
    throw SchemaError(e.what());
  }
  throw SchemaError("expected a rational as \"p/q\" string or integer");
}

RatVec json_rat_vec(const json& j) {
  if (!j.is_array()) throw SchemaError("expected an array of rationals");
  RatVec out;
  for (const auto& x : j) out.push_back(json_rat(x));
  return out;
}

json rat_json(const Rat& r) { return rat_to_string(r); }

json vec_json(const RatVec& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(rat_json(x));
  return out;
}

json ivec_json(const IntVec& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(x.str());
  return out;
}

json rows_json_one_based(const std::vector<std::size_t>& rows) {
  json out = json::array();
  for (auto r : rows) out.push_back(r + 1);
  return out;
}

json roots_json(const std::vector<std::size_t>& roots) {
  json out = json::array();
  for (auto r : roots) out.push_back(root_name(r));
  return out;
}

const json& field(const json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw SchemaError(std::string("missing field \"") + name + "\"");
  return *it;
}

json cone_json(const ColoredCone& cone, const std::vector<IntVec>& rays) {
  json out;
  json ray_ids = json::array();
  json gens = json::array();
  for (const auto& g : cone.generators) {
    const auto it = std::find(rays.begin(), rays.end(), g);
    if (it != rays.end()) ray_ids.push_back(static_cast<int>(it - rays.begin()));
    gens.push_back(ivec_json(g));
  }
  out["rays"] = ray_ids;
  out["colors"] = roots_json(cone.colors);
  out["generators"] = gens;
  return out;
}

json fan_json(const ColoredFan& fan, const std::vector<IntVec>& rays) {
  json out = json::array();
  for (const auto& cone : fan.maximal_cones) out.push_back(cone_json(cone, rays));
  return out;
}

json curve_json(const ContractedCurve& c) {
  json out;
  out["kind"] = c.curve.kind == Curve::Kind::edge ? "edge" : "schubert";
  out["description"] = c.curve.describe();
  if (c.curve.kind == Curve::Kind::schubert) {
    out["root"] = root_name(c.curve.alpha);
    out["vertex"] = vec_json(c.curve.vertex);
  } else {
    out["endpoints"] = {vec_json(c.curve.endpoints[0]), vec_json(c.curve.endpoints[1])};
  }
  out["d_plus_eps_k"] = rat_json(c.boundary_value);
  out["k_value"] = rat_json(c.k_value);
  return out;
}

json class_json(const MMPTrace& trace, std::size_t i, const std::vector<IntVec>& rays) {
  const auto& rec = trace.decomposition.classes[i];
  const auto& report = trace.classes[i];
  json out;
  out["interval"] = rec.interval.to_string();
  out["representative"] = rat_json(rec.representative);
  out["rows_in_force"] = rows_json_one_based(rec.rows_in_force);
  const bool terminal = i + 1 == trace.decomposition.classes.size();
  out["q_gorenstein"] = report.q_gorenstein;
  if (!terminal) {
    out["colors"] = roots_json(report.colors);
    out["fan"] = fan_json(report.fan, rays);
    out["q_factorial"] = report.q_factorial.value;
    if (report.q_factorial.picard)
      out["picard"] = static_cast<int>(*report.q_factorial.picard);
  } else {
    out["terminal"] = true;
  }
  return out;
}

json step_json(const MMPTrace& trace, const MMPStep& step) {
  json out;
  switch (step.kind) {
    case MMPStep::Kind::divisorial: out["kind"] = "divisorial"; break;
    case MMPStep::Kind::flip: out["kind"] = "flip"; break;
    case MMPStep::Kind::mori_fibration: out["kind"] = "mori_fibration"; break;
  }
  out["epsilon"] = rat_json(step.epsilon);
  out["source_class"] = static_cast<int>(step.source_class);
  out["boundary_class"] = static_cast<int>(step.boundary_class);
  out["target_class"] = static_cast<int>(step.target_class);
  out["dropped_rows"] = rows_json_one_based(step.dropped_rows);
  json forward = json::array();
  for (const auto& c : step.forward_curves) forward.push_back(curve_json(c));
  out["contracted_curves"] = forward;
  if (!step.backward_curves.empty() || step.kind == MMPStep::Kind::flip) {
    json backward = json::array();
    for (const auto& c : step.backward_curves) backward.push_back(curve_json(c));
    out["backward_curves"] = backward;
  }
  out["morphism"] = step.forward_morphism;
  if (step.backward_morphism) out["backward_morphism"] = *step.backward_morphism;
  return out;
}

json terminal_json(const TerminalData& data) {
  json out;
  out["eps_max"] = rat_json(data.eps_max);
  out["tight_rows"] = rows_json_one_based(data.tight_rows);
  json basis = json::array();
  for (const auto& v : data.m1_basis) basis.push_back(ivec_json(v));
  out["m1_basis"] = basis;
  out["new_parabolic_roots"] = roots_json(data.new_parabolic_roots);
  json verts = json::array();
  for (const auto& v : data.terminal_vertices) verts.push_back(vec_json(v));
  out["vertices"] = verts;
  out["dimension_drops"] = data.dimension_drops;
  if (data.fiber) {
    const auto& fiber = *data.fiber;
    json f;
    f["rows"] = rows_json_one_based(fiber.fiber_rows);
    json basis2 = json::array();
    for (const auto& v : fiber.quotient_basis) basis2.push_back(ivec_json(v));
    f["quotient_basis"] = basis2;
    json A = json::array();
    for (std::size_t r = 0; r < fiber.fiber_A.rows(); ++r) A.push_back(vec_json(fiber.fiber_A.row(r)));
    f["A"] = A;
    f["b"] = vec_json(fiber.fiber_b);
    json edges = json::array();
    for (const auto& e : fiber.fan_edges) edges.push_back(ivec_json(e));
    f["fan_edges"] = edges;
    f["colors"] = roots_json(fiber.colors);
    f["is_simplex"] = fiber.is_simplex;
    f["walls_are_facets"] = fiber.walls_are_facets;
    if (fiber.picard) f["picard"] = static_cast<int>(*fiber.picard);
    out["fiber"] = f;
  }
  return out;
}

json genericity_json(const GenericityReport& report) {
  json out;
  out["q_factorial_generic"] = report.q_factorial_generic;
  json w1 = json::array();
  for (const auto& w : report.q_factorial_witnesses) w1.push_back(rows_json_one_based(w));
  out["q_factorial_witnesses"] = w1;
  out["fiber_generic"] = report.fiber_generic;
  json w2 = json::array();
  for (const auto& w : report.fiber_witnesses) w2.push_back(rows_json_one_based(w));
  out["fiber_witnesses"] = w2;
  return out;
}

}  // namespace

std::string root_name(std::size_t index) { return "a" + std::to_string(index + 1); }

std::string fingerprint_bytes(const std::string& bytes) {
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  std::ostringstream out;
  out << std::hex << hash;
  return out.str();
}

PolarizedEmbedding parse_input_text(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("input document must be a JSON object");
  if (field(doc, "version").get<int>() != kSchemaVersion)
    throw SchemaError("unsupported schema version");

  const json& rs = field(doc, "root_system");
  const std::string type_name = field(rs, "type").get<std::string>();
  const std::size_t rank = field(rs, "rank").get<std::size_t>();
  const RootType type = [&] {
    try {
      return parse_root_type(type_name);
    } catch (const InvariantError& e) {
      throw SchemaError(e.what());
    }
  }();

  std::vector<std::size_t> parabolic;
  if (doc.contains("R"))
    for (const auto& name : doc["R"]) parabolic.push_back(parse_root_name(name, rank));

  std::vector<RatVec> m_basis;
  for (const auto& row : field(doc, "M_basis")) m_basis.push_back(json_rat_vec(row));

  HoroSpace space = type == RootType::torus
                        ? HoroSpace(root_system(type, 0), {}, std::move(m_basis))
                        : HoroSpace(root_system(type, rank), std::move(parabolic),
                                    std::move(m_basis));

  std::vector<IntVec> rays;
  for (const auto& row : field(doc, "rays")) {
    const RatVec v = json_rat_vec(row);
    IntVec iv;
    for (const auto& x : v) {
      if (rat_den(x) != 1) throw InvariantError("rays must have integer coordinates");
      iv.push_back(rat_num(x));
    }
    rays.push_back(std::move(iv));
  }

  ColoredFan fan;
  for (const auto& cone : field(doc, "cones")) {
    std::vector<IntVec> gens;
    for (const auto& idx : field(cone, "rays")) {
      const std::size_t i = idx.get<std::size_t>();
      if (i >= rays.size()) throw SchemaError("cone ray index out of range");
      gens.push_back(rays[i]);
    }
    std::vector<std::size_t> colors;
    if (cone.contains("colors"))
      for (const auto& name : cone["colors"])
        colors.push_back(parse_root_name(name.get<std::string>(), rank));
    ColoredCone raw;
    raw.generators = std::move(gens);
    raw.colors = std::move(colors);
    fan.maximal_cones.push_back(std::move(raw));
  }

  const json& div = field(doc, "divisor");
  BDivisor divisor;
  divisor.g_stable = json_rat_vec(field(div, "g_stable"));
  if (div.contains("colors"))
    for (const auto& [name, value] : div["colors"].items())
      divisor.colors[parse_root_name(name, rank)] = json_rat(value);

  return make_embedding(std::move(space), std::move(rays), std::move(fan), std::move(divisor));
}

PolarizedEmbedding parse_input(const std::string& path, std::string* fingerprint) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open input file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (fingerprint) *fingerprint = fingerprint_bytes(buffer.str());
  return parse_input_text(buffer.str());
}

std::string emit_input(const PolarizedEmbedding& embedding) {
  const HoroSpace& space = embedding.space;
  json doc;
  doc["version"] = kSchemaVersion;
  if (space.roots().type == RootType::torus) {
    doc["root_system"] = {{"type", "torus"}, {"rank", space.lattice_rank()}};
  } else {
    doc["root_system"] = {{"type", root_type_name(space.roots().type)},
                          {"rank", space.roots().rank}};
  }
  doc["R"] = roots_json(space.parabolic());
  json basis = json::array();
  for (const auto& v : space.m_basis()) basis.push_back(vec_json(v));
  doc["M_basis"] = basis;
  json rays = json::array();
  for (const auto& ray : embedding.rays) rays.push_back(ivec_json(ray));
  doc["rays"] = rays;
  json cones = json::array();
  for (const auto& cone : embedding.fan.maximal_cones) {
    json c;
    json ray_ids = json::array();
    for (const auto& g : cone.generators) {
      const auto it = std::find(embedding.rays.begin(), embedding.rays.end(), g);
      if (it != embedding.rays.end()) {
        ray_ids.push_back(static_cast<int>(it - embedding.rays.begin()));
        continue;
      }
      bool is_color_ray = false;
      for (auto alpha : cone.colors)
        if (primitive_vector(space.coroot_restriction(alpha)) == g) is_color_ray = true;
      internal_check(is_color_ray, "cone generator is neither a ray nor a color coroot");
    }
    c["rays"] = ray_ids;
    c["colors"] = roots_json(cone.colors);
    cones.push_back(std::move(c));
  }
  doc["cones"] = cones;
  json div;
  div["g_stable"] = vec_json(embedding.divisor.g_stable);
  json colors = json::object();
  for (const auto& [alpha, value] : embedding.divisor.colors)
    colors[root_name(alpha)] = rat_json(value);
  div["colors"] = colors;
  doc["divisor"] = div;
  return doc.dump(2);
}

std::string emit_trace_json(const PolarizedEmbedding& embedding, const MMPTrace& trace) {
  json out;
  out["version"] = kSchemaVersion;
  out["fingerprint"] = trace.fingerprint;
  out["k_nef"] = trace.k_nef;
  out["eps_max"] = rat_json(trace.eps_max);
  json classes = json::array();
  for (std::size_t i = 0; i < trace.decomposition.classes.size(); ++i)
    classes.push_back(class_json(trace, i, embedding.rays));
  out["classes"] = classes;
  json steps = json::array();
  for (const auto& step : trace.steps) steps.push_back(step_json(trace, step));
  out["steps"] = steps;
  out["terminal"] = terminal_json(trace.terminal);
  out["genericity"] = genericity_json(trace.genericity);
  return out.dump(2);
}

namespace {

std::string kind_name(MMPStep::Kind kind) {
  switch (kind) {
    case MMPStep::Kind::divisorial: return "divisorial contraction";
    case MMPStep::Kind::flip: return "flip";
    case MMPStep::Kind::mori_fibration: return "Mori fibration";
  }
  return "?";
}

void describe_classes(std::ostream& out, const MMPTrace& trace) {
  out << "classes:\n";
  for (std::size_t i = 0; i < trace.decomposition.classes.size(); ++i) {
    const auto& rec = trace.decomposition.classes[i];
    const auto& rep = trace.classes[i];
    out << "  " << rec.interval.to_string() << "  rows {";
    for (std::size_t j = 0; j < rec.rows_in_force.size(); ++j) {
      if (j) out << ",";
      out << rec.rows_in_force[j] + 1;
    }
    out << "}";
    if (i + 1 < trace.decomposition.classes.size()) {
      out << "  colors {";
      for (std::size_t j = 0; j < rep.colors.size(); ++j) {
        if (j) out << ",";
        out << root_name(rep.colors[j]);
      }
      out << "}  QGor=" << (rep.q_gorenstein ? "yes" : "no")
          << "  QFac=" << (rep.q_factorial.value ? "yes" : "no");
      if (rep.q_factorial.picard) out << "  picard=" << *rep.q_factorial.picard;
    } else {
      out << "  (terminal)";
    }
    out << "\n";
  }
}

}  // namespace

std::string emit_trace_text(const PolarizedEmbedding& embedding, const MMPTrace& trace) {
  (void)embedding;
  std::ostringstream out;
  out << "eps_max = " << rat_to_string(trace.eps_max) << "\n";
  if (trace.k_nef) out << "K nef at 0: no step\n";
  describe_classes(out, trace);
  out << "steps:\n";
  for (const auto& step : trace.steps) {
    out << "  " << kind_name(step.kind) << " at " << rat_to_string(step.epsilon);
    if (!step.dropped_rows.empty()) {
      out << "  drops rows {";
      for (std::size_t j = 0; j < step.dropped_rows.size(); ++j) {
        if (j) out << ",";
        out << step.dropped_rows[j] + 1;
      }
      out << "}";
    }
    out << "\n";
    for (const auto& c : step.forward_curves)
      out << "    contracts " << c.curve.describe() << "  K.C=" << rat_to_string(c.k_value)
          << "\n";
    for (const auto& c : step.backward_curves)
      out << "    flip side contracts " << c.curve.describe()
          << "  K.C=" << rat_to_string(c.k_value) << "\n";
  }
  const auto& t = trace.terminal;
  out << "terminal at " << rat_to_string(t.eps_max) << ": ";
  if (t.m1_basis.empty() && t.new_parabolic_roots.empty())
    out << "point";
  else if (t.m1_basis.empty())
    out << "flag base (absorbed roots:";
  else
    out << "base of dimension " << t.m1_basis.size();
  if (!t.new_parabolic_roots.empty()) {
    out << " absorbed {";
    for (std::size_t j = 0; j < t.new_parabolic_roots.size(); ++j) {
      if (j) out << ",";
      out << root_name(t.new_parabolic_roots[j]);
    }
    out << "}";
  }
  out << "\n";
  if (t.fiber && t.fiber->picard)
    out << "fiber picard = " << *t.fiber->picard << (t.fiber->is_simplex ? " (simplex)" : "")
        << "\n";
  return out.str();
}

std::string emit_classes_json(const PolarizedEmbedding& embedding, const MMPTrace& trace) {
  json out;
  out["version"] = kSchemaVersion;
  out["fingerprint"] = trace.fingerprint;
  out["eps_max"] = rat_json(trace.eps_max);
  json classes = json::array();
  for (std::size_t i = 0; i < trace.decomposition.classes.size(); ++i)
    classes.push_back(class_json(trace, i, embedding.rays));
  out["classes"] = classes;
  return out.dump(2);
}

std::string emit_classes_text(const PolarizedEmbedding& embedding, const MMPTrace& trace) {
  (void)embedding;
  std::ostringstream out;
  out << "eps_max = " << rat_to_string(trace.eps_max) << "\n";
  describe_classes(out, trace);
  return out.str();
}

std::string emit_check_json(const PolarizedEmbedding& embedding) {
  const auto& space = embedding.space;
  const auto& pair = embedding.polytopes;
  json out;
  out["version"] = kSchemaVersion;
  const auto c = anticanonical_column(space, pair.ray_rows);
  const auto gor = q_gorenstein_check(pair.q_tilde, c);
  out["q_gorenstein"] = gor.value;
  if (gor.failing_vertex) out["failing_vertex"] = vec_json(*gor.failing_vertex);
  const auto fac = is_q_factorial(space, pair);
  out["q_factorial"] = fac.value;
  out["q_factorial_reasons"] = fac.reasons;
  if (fac.picard) out["picard"] = static_cast<int>(*fac.picard);
  if (gor.value) {
    const auto bundle = build_family(embedding);
    out["genericity"] = genericity_json(is_general_divisor(bundle));
  }
  return out.dump(2);
}

std::string emit_check_text(const PolarizedEmbedding& embedding) {
  const auto& space = embedding.space;
  const auto& pair = embedding.polytopes;
  std::ostringstream out;
  const auto c = anticanonical_column(space, pair.ray_rows);
  const auto gor = q_gorenstein_check(pair.q_tilde, c);
  out << "Q-Gorenstein: " << (gor.value ? "yes" : "no") << "\n";
  const auto fac = is_q_factorial(space, pair);
  out << "Q-factorial: " << (fac.value ? "yes" : "no");
  if (fac.picard) out << " (picard " << *fac.picard << ")";
  out << "\n";
  for (const auto& r : fac.reasons) out << "  - " << r << "\n";
  if (gor.value) {
    const auto report = is_general_divisor(build_family(embedding));
    out << "general position (factoriality): " << (report.q_factorial_generic ? "yes" : "no")
        << "\n";
    out << "general position (fibers): " << (report.fiber_generic ? "yes" : "no") << "\n";
  }
  return out.str();
}

std::string emit_fiber_json(const PolarizedEmbedding& embedding, const MMPTrace& trace) {
  (void)embedding;
  json out;
  out["version"] = kSchemaVersion;
  out["fingerprint"] = trace.fingerprint;
  out["terminal"] = terminal_json(trace.terminal);
  return out.dump(2);
}

std::string emit_fiber_text(const PolarizedEmbedding& embedding, const MMPTrace& trace) {
  (void)embedding;
  std::ostringstream out;
  const auto& t = trace.terminal;
  out << "eps_max = " << rat_to_string(t.eps_max) << "\n";
  out << "dimension drops: " << (t.dimension_drops ? "yes" : "no") << "\n";
  if (t.fiber) {
    out << "fiber rows:";
    for (auto r : t.fiber->fiber_rows) out << " " << r + 1;
    out << "\nfiber is simplex: " << (t.fiber->is_simplex ? "yes" : "no") << "\n";
    if (t.fiber->picard) out << "fiber picard: " << *t.fiber->picard << "\n";
  }
  return out.str();
}

}  // namespace polymmp
