#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uncert {

enum class MeshKind { kHyperboloid, kHeisenberg, kTripleLine };

std::optional<MeshKind> mesh_kind(std::string_view name);

struct MeshConfig {
  int nmax = 2;
  double hbar = 1.0;
  int grid_b = 41;          ///< hyperboloid lattice
  int grid_gamma = 41;
  double b_max = 2.0;
  double gamma_max = 1.0;
  int curve_points = 201;   ///< per Heisenberg hyperbola
};

/// One point in (u, v, w) on sheet n.
struct MeshRow {
  int n = 0;
  double u = 0.0;
  double v = 0.0;
  double w = 0.0;
};

/// hyperboloid: (b, gamma) lattice through squeezed_moments and to_uvw;
/// heisenberg: x y = e_n^2, w = 0; triple-line: tau e_n (1, 0, -1/2).
std::vector<MeshRow> mesh_rows(MeshKind kind, const MeshConfig& cfg);

/// Largest violation of the row's defining equations, relative to max(1, u^2)
/// for quadratic ones and max(1, u) for linear ones.
double mesh_residual(MeshKind kind, const MeshRow& row, double hbar);

/// CSV with header "n,u,v,w", LF line endings, 12 significant digits.
void write_mesh_csv(std::ostream& os, const std::vector<MeshRow>& rows);

/// Writes the mesh to `path`; throws Error on I/O failure.
void emit_mesh(MeshKind kind, const MeshConfig& cfg, const std::string& path);

}  // namespace uncert
