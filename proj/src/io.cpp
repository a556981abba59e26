#include "sobolev/io.hpp"

#include <cstdio>

#include "sobolev/error.hpp"

namespace sobolev {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

namespace {

Complex parse_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidInput, "complex number must be [re, im]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Point parse_point(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidInput, "point must be [x, y]");
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

template <class F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::InvalidInput, std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

ConformalMap parse_map(const Json& j) {
  return guarded([&] {
    const auto kind = j.at("kind").get<std::string>();
    std::vector<Complex> coeffs;
    for (const auto& c : j.at("coeffs")) coeffs.push_back(parse_complex(c));
    if (kind == "power_series") {
      const Complex shift = j.contains("shift") ? parse_complex(j.at("shift")) : Complex{};
      return ConformalMap::power_series(std::move(coeffs), shift);
    }
    if (kind == "moebius") {
      if (coeffs.size() != 4) throw Error(ErrorCode::InvalidInput, "moebius needs coeffs [a, b, c, d]");
      return ConformalMap::moebius(coeffs[0], coeffs[1], coeffs[2], coeffs[3]);
    }
    if (kind == "linear") {
      if (coeffs.size() != 2) throw Error(ErrorCode::InvalidInput, "linear needs coeffs [a, b]");
      return ConformalMap::linear(coeffs[0], coeffs[1]);
    }
    throw Error(ErrorCode::InvalidInput, "unknown map kind '" + kind + "'");
  });
}

Json to_json(const ConformalMap& map) {
  Json j;
  if (const auto* s = std::get_if<PowerSeries>(&map.form())) {
    j["kind"] = "power_series";
    j["coeffs"] = Json::array();
    for (const auto& c : s->coeffs) j["coeffs"].push_back(complex_json(c));
    if (s->shift != Complex{}) j["shift"] = complex_json(s->shift);
  } else if (const auto* m = std::get_if<Moebius>(&map.form())) {
    j["kind"] = "moebius";
    j["coeffs"] = Json::array({complex_json(m->a), complex_json(m->b), complex_json(m->c), complex_json(m->d)});
  } else {
    const auto& l = std::get<Linear>(map.form());
    j["kind"] = "linear";
    j["coeffs"] = Json::array({complex_json(l.a), complex_json(l.b)});
  }
  return j;
}

DomainSpec parse_domain(const Json& j) {
  return guarded([&]() -> DomainSpec {
    const auto type = j.at("type").get<std::string>();
    DomainSpec domain;
    if (type == "disk") {
      Disk d{.radius = j.at("radius").get<double>()};
      if (j.contains("center")) d.center = parse_point(j.at("center"));
      domain = d;
    } else if (type == "polygon") {
      Polygon poly;
      for (const auto& v : j.at("vertices")) poly.vertices.push_back(parse_point(v));
      domain = std::move(poly);
    } else if (type == "map_image") {
      domain = MapImage{parse_map(j.at("map")), j.value("r", 0.5)};
    } else {
      throw Error(ErrorCode::InvalidInput, "unknown domain type '" + type + "'");
    }
    validate_domain(domain);
    return domain;
  });
}

Json to_json(const DomainSpec& domain) {
  if (const auto* d = std::get_if<Disk>(&domain)) {
    return {{"type", "disk"}, {"radius", d->radius}, {"center", {d->center.x(), d->center.y()}}};
  }
  if (const auto* p = std::get_if<Polygon>(&domain)) {
    Json vertices = Json::array();
    for (const auto& v : p->vertices) vertices.push_back({v.x(), v.y()});
    return {{"type", "polygon"}, {"vertices", vertices}};
  }
  const auto& m = std::get<MapImage>(domain);
  return {{"type", "map_image"}, {"map", to_json(m.map)}, {"r", m.r}};
}

Json mesh_to_json(const TriMesh& mesh) {
  Json vertices = Json::array(), triangles = Json::array(), boundary = Json::array();
  for (const auto& v : mesh.vertices()) vertices.push_back({v.x(), v.y()});
  for (const auto& t : mesh.triangles()) triangles.push_back({t[0], t[1], t[2]});
  for (const auto& e : mesh.boundary_edges()) boundary.push_back({e[0], e[1]});
  return {{"vertices", vertices}, {"triangles", triangles}, {"boundary_edges", boundary}};
}

void write_field_csv(std::ostream& out, const ScalarField& field) {
  out << "vertex,x,y,value\n";
  const auto& mesh = field.mesh();
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const auto& x = mesh.vertices()[v];
    out << v << ',' << format_double(x.x()) << ',' << format_double(x.y()) << ','
        << format_double(field.values()[static_cast<Eigen::Index>(v)]) << '\n';
  }
}

Json field_to_json(const ScalarField& field) {
  Json rows = Json::array();
  const auto& mesh = field.mesh();
  for (std::size_t v = 0; v < mesh.num_vertices(); ++v) {
    const auto& x = mesh.vertices()[v];
    rows.push_back({{"vertex", v}, {"x", x.x()}, {"y", x.y()},
                    {"value", field.values()[static_cast<Eigen::Index>(v)]}});
  }
  return rows;
}

Json to_json(const SolveResult& result) {
  return {{"p", result.p},
          {"cp", result.cp},
          {"lambda", result.lambda},
          {"sobolev_constant", sobolev_constant(result)},
          {"energy", result.energy},
          {"p_norm_integral", result.p_norm_integral},
          {"pminus1_integral", result.pminus1_integral},
          {"iterations", result.iterations},
          {"residual", result.residual},
          {"h", result.h},
          {"num_vertices", result.phi.mesh().num_vertices()},
          {"converged", result.converged}};
}

Json to_json(const PayneRaynerReport& report) {
  return {{"p", report.p},
          {"cp", report.cp},
          {"lhs", report.lhs},
          {"rhs", report.rhs},
          {"deficit", report.deficit},
          {"relative_deficit", report.relative_deficit},
          {"length_flux", report.length_flux},
          {"length_multiplier", report.length_multiplier},
          {"conformal_area", report.conformal_area},
          {"iso_lhs", report.iso_lhs},
          {"iso_rhs", report.iso_rhs},
          {"equality_flag", report.equality_flag},
          {"inequality_holds", report.inequality_holds}};
}

Json to_json(const SaintVenantRecord& record) {
  return {{"area_squared", record.area_squared},
          {"two_pi_rigidity", record.two_pi_rigidity},
          {"torsional_rigidity", record.torsional_rigidity},
          {"ratio", record.ratio}};
}

void write_sweep_csv(std::ostream& out, const SchwarzSweep& sweep) {
  out << "r,log_r,cp_image,phi_ratio,reciprocal\n";
  for (const auto& row : sweep.rows) {
    if (!row.valid) continue;
    out << format_double(row.r) << ',' << format_double(row.log_r) << ',' << format_double(row.cp_image)
        << ',' << format_double(row.phi_ratio) << ',' << format_double(row.reciprocal) << '\n';
  }
}

Json sweep_verdict_json(const SchwarzSweep& sweep) {
  Json j;
  j["p"] = sweep.p;
  j["map"] = to_json(sweep.map);
  if (sweep.is_constant) {
    j["monotone_decreasing"] = "constant";
  } else {
    j["monotone_decreasing"] = sweep.is_monotone_decreasing;
  }
  j["constant"] = sweep.is_constant;
  if (sweep.reciprocal_logconvex) j["reciprocal_logconvex"] = *sweep.reciprocal_logconvex;
  j["extrapolated_limit"] = sweep.extrapolated_limit;
  j["expected_limit"] = sweep.expected_limit;
  j["skipped_rows"] = Json::array();
  for (const auto& row : sweep.rows) {
    if (!row.valid) j["skipped_rows"].push_back({{"r", row.r}, {"reason", row.skip_reason}});
  }
  j["pass"] = sweep.verdicts_pass();
  return j;
}

void write_levelset_csv(std::ostream& out, const LevelSetTable& table) {
  out << "t,A,l,H0,H1,flags\n";
  for (const auto& row : table.rows) {
    out << format_double(row.t) << ',' << format_double(row.area) << ',' << format_double(row.length)
        << ',' << format_double(row.h0) << ',' << format_double(row.h1) << ',' << (row.regular ? 0 : 1)
        << '\n';
  }
}

Json to_json(const LevelSetVerdicts& verdicts) {
  return {{"coarea_bound", verdicts.coarea_bound},
          {"h1_identity", verdicts.h1_identity},
          {"combined_monotone", verdicts.combined_monotone},
          {"usable_rows", verdicts.usable_rows},
          {"worst_coarea_margin", verdicts.worst_coarea_margin},
          {"worst_h1_error", verdicts.worst_h1_error},
          {"worst_combined_margin", verdicts.worst_combined_margin},
          {"pass", verdicts.all_pass()}};
}

}  // namespace sobolev
