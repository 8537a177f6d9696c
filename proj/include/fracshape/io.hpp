#pragma once
/// File formats and artifact writers: curve JSON, the binary system dump,
/// CSV tables, and self-contained SVG plots. All writers format numbers
/// without locale dependence and with a fixed layout, so identical inputs
/// produce byte-identical files.

#include <string>
#include <vector>

#include "fracshape/assembly.hpp"
#include "fracshape/optimizer.hpp"
#include "fracshape/solver.hpp"
#include "fracshape/symmetry.hpp"
#include "fracshape/trace.hpp"

namespace fracshape {

/// Fixed "%.15e" rendering (locale-independent).
std::string format_double(double v);

/// Curve files: {"center":[x,y],"a0":...,"cos":[...],"sin":[...]}.
/// Unknown keys are rejected. Throws ValidationError(IoFailure) on unreadable
/// files and ValidationError(InvalidConfig) on malformed content.
BoundaryCurve parse_curve_json(const std::string& text, int sample_count = 2048);
BoundaryCurve read_curve_json(const std::string& path, int sample_count = 2048);
std::string curve_to_json(const BoundaryCurve& curve);
void write_curve_json(const std::string& path, const BoundaryCurve& curve);

/// Binary dump of (A, b): 16-byte header (magic "FSHA", little-endian u32
/// dimension, 8 reserved zero bytes), then A row-major and b as little-endian
/// 64-bit floats.
void write_system_dump(const std::string& path, const GalerkinSystem& system);
struct SystemDump {
  int dim = 0;
  Eigen::MatrixXd stiffness;
  Eigen::VectorXd load;
};
SystemDump read_system_dump(const std::string& path);

// --- artifact writers ------------------------------------------------------
void write_solution_csv(const std::string& path, const SolutionField& sol,
                        int grid);
void write_coeffs_json(const std::string& path, const SolutionField& sol);
void write_trace_csv(const std::string& path, const TraceProfile& profile);
void write_trace_svg(const std::string& path, const TraceProfile& profile);
void write_history_csv(const std::string& path,
                       const std::vector<OptimizationRecord>& history);
void write_shapes_svg(const std::string& path,
                      const std::vector<BoundaryCurve>& curves);
void write_cap_heatmap_svg(const std::string& path, const SolutionField& sol,
                           double lambda, const Vec2& e, int grid);

/// Creates the directory (and parents) if needed.
void ensure_directory(const std::string& path);

/// Writes text to path, replacing any existing file.
void write_text_file(const std::string& path, const std::string& text);

}  // namespace fracshape
