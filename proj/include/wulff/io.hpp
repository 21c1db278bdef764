#pragma once

#include <string>
#include <vector>

#include "wulff/diagnostics.hpp"
#include "wulff/mesh.hpp"
#include "wulff/polygon.hpp"
#include "wulff/solver.hpp"

namespace wulff {

/// Shortest round-trip decimal representation (std::to_chars): full double
/// precision, locale-independent, byte-stable across runs.
std::string fmt_double(double v);

void write_polygon_csv(const std::string& path, const std::vector<Vec2>& vertices);
std::vector<Vec2> read_polygon_csv(const std::string& path);

/// Mesh as three CSV files under dir: vertices.csv (x,y),
/// triangles.csv (v0,v1,v2), edges.csv (v0,v1,tag).
void write_mesh_csv(const std::string& dir, const Mesh& mesh);
Mesh read_mesh_csv(const std::string& dir);

/// Solution values as solution.csv with header x,y,u.
void write_solution_csv(const std::string& path, const Mesh& mesh, const std::vector<double>& u);
std::vector<double> read_solution_csv(const std::string& path, const Mesh& mesh);

/// Level table with header t,mu,I,K,Q,grad_cv,center_x,center_y,rho.
void write_level_table_csv(const std::string& path, const LevelTable& table);

/// Contour plot: the domain outline plus the level polylines, as pure SVG
/// polylines (no raster).
void write_contours_svg(const std::string& path, const Mesh& mesh,
                        const std::vector<std::vector<LevelPolyline>>& level_curves);

} // namespace wulff
