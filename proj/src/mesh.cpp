#include "uncert/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include "uncert/error.hpp"
#include "uncert/moments.hpp"
#include "uncert/symplectic.hpp"

namespace uncert {

std::optional<MeshKind> mesh_kind(std::string_view name) {
  if (name == "hyperboloid") return MeshKind::kHyperboloid;
  if (name == "heisenberg") return MeshKind::kHeisenberg;
  if (name == "triple-line") return MeshKind::kTripleLine;
  return std::nullopt;
}

namespace {

double lattice(double top, int i, int count) {
  return count > 1 ? -top + 2.0 * top * i / (count - 1) : 0.0;
}

}  // namespace

std::vector<MeshRow> mesh_rows(MeshKind kind, const MeshConfig& cfg) {
  std::vector<MeshRow> rows;
  const double tau = std::sqrt(4.0 / 3.0);
  for (int n = 0; n <= cfg.nmax; ++n) {
    const SheetIndex sheet{n, cfg.hbar};
    const double e = sheet.energy();
    switch (kind) {
      case MeshKind::kHyperboloid:
        for (int i = 0; i < cfg.grid_b; ++i)
          for (int j = 0; j < cfg.grid_gamma; ++j) {
            const SqueezeParams s{lattice(cfg.b_max, i, cfg.grid_b),
                                  lattice(cfg.gamma_max, j, cfg.grid_gamma)};
            const MomentPoint p = to_uvw(squeezed_moments(sheet, s));
            rows.push_back({n, p.u, p.v, p.w});
          }
        break;
      case MeshKind::kHeisenberg:
        for (int k = 0; k < cfg.curve_points; ++k) {
          const double g = lattice(cfg.gamma_max, k, cfg.curve_points);
          rows.push_back({n, e * std::cosh(2 * g), e * std::sinh(2 * g), 0.0});
        }
        break;
      case MeshKind::kTripleLine:
        rows.push_back({n, tau * e, 0.0, -0.5 * tau * e});
        break;
    }
  }
  return rows;
}

double mesh_residual(MeshKind kind, const MeshRow& row, double hbar) {
  const double e = SheetIndex{row.n, hbar}.energy();
  const double quad = std::abs(row.u * row.u - row.v * row.v - row.w * row.w - e * e) /
                      std::max(1.0, row.u * row.u);
  const double lin = std::max(1.0, std::abs(row.u));
  switch (kind) {
    case MeshKind::kHyperboloid:
      return quad;
    case MeshKind::kHeisenberg:
      return std::max(quad, std::abs(row.w) / lin);
    case MeshKind::kTripleLine:
      return std::max({quad, std::abs(row.v) / lin, std::abs(row.w + 0.5 * row.u) / lin});
  }
  return quad;
}

void write_mesh_csv(std::ostream& os, const std::vector<MeshRow>& rows) {
  os << "n,u,v,w\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%.12g,%.12g,%.12g\n", r.n, r.u, r.v, r.w);
    os << buf;
  }
}

void emit_mesh(MeshKind kind, const MeshConfig& cfg, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_mesh_csv(out, mesh_rows(kind, cfg));
  out.close();
  if (!out) throw Error("failed writing '" + path + "'");
}

}  // namespace uncert
