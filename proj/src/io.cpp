#include "fracshape/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fracshape/errors.hpp"

namespace fracshape {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidCurve:
      return "InvalidCurve";
    case ErrorCode::AmbiguousProjection:
      return "AmbiguousProjection";
    case ErrorCode::NoIntersection:
      return "NoIntersection";
    case ErrorCode::StarShapeLost:
      return "StarShapeLost";
    case ErrorCode::OutOfBand:
      return "OutOfBand";
    case ErrorCode::QuadratureNotConverged:
      return "QuadratureNotConverged";
    case ErrorCode::AssemblyFailed:
      return "AssemblyFailed";
    case ErrorCode::NotPositiveDefinite:
      return "NotPositiveDefinite";
    case ErrorCode::IllConditionedFit:
      return "IllConditionedFit";
    case ErrorCode::DegenerateProfile:
      return "DegenerateProfile";
    case ErrorCode::LineSearchFailed:
      return "LineSearchFailed";
    case ErrorCode::EmptyCap:
      return "EmptyCap";
    case ErrorCode::SignChange:
      return "SignChange";
    case ErrorCode::InvalidConfig:
      return "InvalidConfig";
    case ErrorCode::IoFailure:
      return "IoFailure";
  }
  return "Unknown";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15e", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Curve JSON
// ---------------------------------------------------------------------------

BoundaryCurve parse_curve_json(const std::string& text, int sample_count) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(ErrorCode::InvalidConfig,
                          std::string("curve JSON parse error: ") + e.what());
  }
  if (!doc.is_object())
    throw ValidationError(ErrorCode::InvalidConfig,
                          "curve JSON must be an object");
  for (const auto& item : doc.items()) {
    const std::string& key = item.key();
    if (key != "center" && key != "a0" && key != "cos" && key != "sin")
      throw ValidationError(ErrorCode::InvalidConfig,
                            "unknown curve key: " + key);
  }
  if (!doc.contains("a0") || !doc["a0"].is_number())
    throw ValidationError(ErrorCode::InvalidConfig,
                          "curve JSON needs a numeric a0");
  Vec2 center{0.0, 0.0};
  if (doc.contains("center")) {
    const auto& c = doc["center"];
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
      throw ValidationError(ErrorCode::InvalidConfig,
                            "center must be [x, y]");
    center = {c[0].get<double>(), c[1].get<double>()};
  }
  FourierRadius radius;
  radius.a0 = doc["a0"].get<double>();
  const auto read_coeffs = [&](const char* key, std::vector<double>& out) {
    if (!doc.contains(key)) return;
    const auto& arr = doc[key];
    if (!arr.is_array())
      throw ValidationError(ErrorCode::InvalidConfig,
                            std::string(key) + " must be an array");
    for (const auto& v : arr) {
      if (!v.is_number())
        throw ValidationError(ErrorCode::InvalidConfig,
                              std::string(key) + " entries must be numbers");
      out.push_back(v.get<double>());
    }
  };
  read_coeffs("cos", radius.cos_coeffs);
  read_coeffs("sin", radius.sin_coeffs);
  return BoundaryCurve(center, std::move(radius), sample_count);
}

BoundaryCurve read_curve_json(const std::string& path, int sample_count) {
  std::ifstream in(path);
  if (!in)
    throw ValidationError(ErrorCode::IoFailure, "cannot read " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_curve_json(buffer.str(), sample_count);
}

std::string curve_to_json(const BoundaryCurve& curve) {
  nlohmann::ordered_json doc;
  doc["center"] = {curve.center().x, curve.center().y};
  doc["a0"] = curve.radius().a0;
  doc["cos"] = curve.radius().cos_coeffs;
  doc["sin"] = curve.radius().sin_coeffs;
  return doc.dump(2) + "\n";
}

void write_curve_json(const std::string& path, const BoundaryCurve& curve) {
  write_text_file(path, curve_to_json(curve));
}

// ---------------------------------------------------------------------------
// Binary system dump
// ---------------------------------------------------------------------------

void write_system_dump(const std::string& path, const GalerkinSystem& system) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ValidationError(ErrorCode::IoFailure, "cannot write " + path);
  const std::uint32_t dim = static_cast<std::uint32_t>(system.stiffness.rows());
  const std::uint64_t reserved = 0;
  out.write("FSHA", 4);
  out.write(reinterpret_cast<const char*>(&dim), 4);
  out.write(reinterpret_cast<const char*>(&reserved), 8);
  for (int i = 0; i < system.stiffness.rows(); ++i)
    for (int j = 0; j < system.stiffness.cols(); ++j) {
      const double v = system.stiffness(i, j);
      out.write(reinterpret_cast<const char*>(&v), 8);
    }
  for (int i = 0; i < system.load.size(); ++i) {
    const double v = system.load(i);
    out.write(reinterpret_cast<const char*>(&v), 8);
  }
  if (!out)
    throw ValidationError(ErrorCode::IoFailure, "write failed: " + path);
}

SystemDump read_system_dump(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ValidationError(ErrorCode::IoFailure, "cannot read " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "FSHA", 4) != 0)
    throw ValidationError(ErrorCode::InvalidConfig, "bad dump magic");
  std::uint32_t dim = 0;
  std::uint64_t reserved = 0;
  in.read(reinterpret_cast<char*>(&dim), 4);
  in.read(reinterpret_cast<char*>(&reserved), 8);
  SystemDump dump;
  dump.dim = static_cast<int>(dim);
  dump.stiffness.resize(dump.dim, dump.dim);
  dump.load.resize(dump.dim);
  for (int i = 0; i < dump.dim; ++i)
    for (int j = 0; j < dump.dim; ++j) {
      double v;
      in.read(reinterpret_cast<char*>(&v), 8);
      dump.stiffness(i, j) = v;
    }
  for (int i = 0; i < dump.dim; ++i) {
    double v;
    in.read(reinterpret_cast<char*>(&v), 8);
    dump.load(i) = v;
  }
  if (!in)
    throw ValidationError(ErrorCode::InvalidConfig, "truncated dump file");
  return dump;
}

// ---------------------------------------------------------------------------
// CSV writers
// ---------------------------------------------------------------------------

void ensure_directory(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec)
    throw ValidationError(ErrorCode::IoFailure,
                          "cannot create directory " + path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ValidationError(ErrorCode::IoFailure, "cannot write " + path);
  out << text;
  if (!out)
    throw ValidationError(ErrorCode::IoFailure, "write failed: " + path);
}

void write_solution_csv(const std::string& path, const SolutionField& sol,
                        int grid) {
  const Vec2 lo = sol.curve().bbox_lo(), hi = sol.curve().bbox_hi();
  std::string text = "x,y,u\n";
  for (int j = 0; j < grid; ++j)
    for (int i = 0; i < grid; ++i) {
      const Vec2 x{lo.x + (hi.x - lo.x) * i / (grid - 1),
                   lo.y + (hi.y - lo.y) * j / (grid - 1)};
      text += format_double(x.x) + "," + format_double(x.y) + "," +
              format_double(sol.evaluate(x)) + "\n";
    }
  write_text_file(path, text);
}

void write_coeffs_json(const std::string& path, const SolutionField& sol) {
  nlohmann::ordered_json doc;
  doc["k_rad"] = sol.basis.k_rad();
  doc["k_ang"] = sol.basis.k_ang();
  doc["source"] = sol.source;
  doc["solve_residual"] = sol.solve_residual;
  doc["symmetry_defect"] = sol.symmetry_defect;
  std::vector<double> coeffs(sol.coeffs.data(),
                             sol.coeffs.data() + sol.coeffs.size());
  doc["coeffs"] = coeffs;
  write_text_file(path, doc.dump(2) + "\n");
}

void write_trace_csv(const std::string& path, const TraceProfile& profile) {
  std::string text = "s,psi0,residual\n";
  for (std::size_t i = 0; i < profile.s_nodes.size(); ++i)
    text += format_double(profile.s_nodes[i]) + "," +
            format_double(profile.psi0[i]) + "," +
            format_double(profile.fit_residuals[i]) + "\n";
  write_text_file(path, text);
}

// ---------------------------------------------------------------------------
// SVG writers
// ---------------------------------------------------------------------------

namespace {

std::string svg_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

const char* kPalette[8] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                           "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

void write_trace_svg(const std::string& path, const TraceProfile& profile) {
  const int width = 640, height = 400, margin = 50;
  double lo = profile.psi0[0], hi = profile.psi0[0];
  for (double v : profile.psi0) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double pad = std::max(1e-12, 0.1 * (hi - lo) + 1e-9 * std::abs(hi));
  lo -= pad;
  hi += pad;
  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" "
      "viewBox=\"0 0 640 400\">\n<rect width=\"640\" height=\"400\" "
      "fill=\"white\"/>\n";
  svg += "<line x1=\"50\" y1=\"350\" x2=\"590\" y2=\"350\" stroke=\"black\"/>\n";
  svg += "<line x1=\"50\" y1=\"50\" x2=\"50\" y2=\"350\" stroke=\"black\"/>\n";
  svg += "<text x=\"320\" y=\"385\" text-anchor=\"middle\" "
         "font-size=\"14\">arc length s</text>\n";
  svg += "<text x=\"15\" y=\"200\" text-anchor=\"middle\" font-size=\"14\" "
         "transform=\"rotate(-90 15 200)\">psi0</text>\n";
  svg += "<polyline fill=\"none\" stroke=\"" + std::string(kPalette[0]) +
         "\" stroke-width=\"1.5\" points=\"";
  const int n = static_cast<int>(profile.s_nodes.size());
  for (int i = 0; i <= n; ++i) {
    const double s = (i < n) ? profile.s_nodes[i] : profile.length;
    const double v = profile.psi0[i % n];
    const double px = margin + (width - 2.0 * margin) * s / profile.length;
    const double py =
        height - margin - (height - 2.0 * margin) * (v - lo) / (hi - lo);
    svg += svg_coord(px) + "," + svg_coord(py) + " ";
  }
  svg += "\"/>\n</svg>\n";
  write_text_file(path, svg);
}

void write_history_csv(const std::string& path,
                       const std::vector<OptimizationRecord>& history) {
  std::string text = "iter,J,serrin,roundness,step\n";
  for (const auto& rec : history) {
    char head[16];
    std::snprintf(head, sizeof(head), "%d", rec.iteration);
    text += std::string(head) + "," + format_double(rec.j) + "," +
            format_double(rec.serrin) + "," + format_double(rec.roundness) +
            "," + format_double(rec.step) + "\n";
  }
  write_text_file(path, text);
}

void write_shapes_svg(const std::string& path,
                      const std::vector<BoundaryCurve>& curves) {
  Vec2 lo{-1.0, -1.0}, hi{1.0, 1.0};
  for (std::size_t k = 0; k < curves.size(); ++k) {
    const Vec2 clo = curves[k].bbox_lo(), chi = curves[k].bbox_hi();
    if (k == 0) {
      lo = clo;
      hi = chi;
    } else {
      lo = {std::min(lo.x, clo.x), std::min(lo.y, clo.y)};
      hi = {std::max(hi.x, chi.x), std::max(hi.y, chi.y)};
    }
  }
  const double span = std::max(hi.x - lo.x, hi.y - lo.y) * 1.1 + 1e-12;
  const Vec2 mid = 0.5 * (lo + hi);
  const int size = 480;
  const auto map = [&](const Vec2& p) {
    return Vec2{(p.x - mid.x) / span * size + size / 2.0,
                -(p.y - mid.y) / span * size + size / 2.0};
  };
  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" "
      "viewBox=\"0 0 480 480\">\n<rect width=\"480\" height=\"480\" "
      "fill=\"white\"/>\n";
  for (std::size_t k = 0; k < curves.size(); ++k) {
    svg += "<polygon fill=\"none\" stroke=\"";
    svg += kPalette[k % 8];
    svg += "\" stroke-width=\"1.2\" points=\"";
    const int n = 256;
    for (int i = 0; i < n; ++i) {
      const Vec2 p = map(curves[k].point_at_angle(2.0 * M_PI * i / n));
      svg += svg_coord(p.x) + "," + svg_coord(p.y) + " ";
    }
    svg += "\"/>\n";
  }
  svg += "</svg>\n";
  write_text_file(path, svg);
}

void write_cap_heatmap_svg(const std::string& path, const SolutionField& sol,
                           double lambda, const Vec2& e_in, int grid) {
  const Vec2 e = normalized(e_in);
  const BoundaryCurve& curve = sol.curve();
  const Vec2 lo = curve.bbox_lo(), hi = curve.bbox_hi();
  const double strict = -1e-9 * curve.diameter();
  std::vector<double> w(static_cast<std::size_t>(grid) * grid, 0.0);
  std::vector<bool> in_cap(static_cast<std::size_t>(grid) * grid, false);
  double w_abs = 0.0;
  for (int j = 0; j < grid; ++j)
    for (int i = 0; i < grid; ++i) {
      const Vec2 x{lo.x + (hi.x - lo.x) * (i + 0.5) / grid,
                   lo.y + (hi.y - lo.y) * (j + 0.5) / grid};
      if (dot(x, e) <= lambda || !curve.contains(x, strict)) continue;
      const Vec2 m = x + (2.0 * (lambda - dot(x, e))) * e;
      if (!curve.contains(m, strict)) continue;
      const double val = sol.evaluate(x) - sol.evaluate(m);
      w[static_cast<std::size_t>(j) * grid + i] = val;
      in_cap[static_cast<std::size_t>(j) * grid + i] = true;
      w_abs = std::max(w_abs, std::abs(val));
    }
  const int size = 480;
  const double cell = static_cast<double>(size) / grid;
  std::string svg =
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"480\" height=\"480\" "
      "viewBox=\"0 0 480 480\">\n<rect width=\"480\" height=\"480\" "
      "fill=\"white\"/>\n";
  for (int j = 0; j < grid; ++j)
    for (int i = 0; i < grid; ++i) {
      if (!in_cap[static_cast<std::size_t>(j) * grid + i]) continue;
      const double val = w[static_cast<std::size_t>(j) * grid + i];
      const double t = w_abs > 0.0 ? val / w_abs : 0.0;  // in [-1, 1]
      // blue (negative) .. white .. red (positive)
      const int r = static_cast<int>(255 * std::min(1.0, 1.0 + std::min(t, 0.0)));
      const int b = static_cast<int>(255 * std::min(1.0, 1.0 - std::max(t, 0.0)));
      const int g = std::min(r, b);
      char color[10];
      std::snprintf(color, sizeof(color), "#%02x%02x%02x", r, g, b);
      svg += "<rect x=\"" + svg_coord(i * cell) + "\" y=\"" +
             svg_coord(size - (j + 1) * cell) + "\" width=\"" +
             svg_coord(cell + 0.5) + "\" height=\"" + svg_coord(cell + 0.5) +
             "\" fill=\"" + color + "\"/>\n";
    }
  svg += "</svg>\n";
  write_text_file(path, svg);
}

}  // namespace fracshape
