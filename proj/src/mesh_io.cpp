#include <fstream>
#include <stdexcept>

#include "cablefem/meshing.hpp"

namespace cablefem {

// Text container: node table, element table with region names, facet tables.
// The format is versioned and documented in README.md.
void export_mesh(const Mesh2D& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file: " + path);
  out << "# cablefem mesh v1 2d\n";
  out << "nodes " << m.nodes.size() << " 2\n";
  out.precision(17);
  for (const auto& p : m.nodes) out << p.x() << " " << p.y() << "\n";
  out << "elements " << m.triangles.size() << " 3\n";
  for (size_t t = 0; t < m.triangles.size(); ++t) {
    const auto& v = m.triangles[t];
    out << v[0] << " " << v[1] << " " << v[2] << " " << region_name(m.region[t]) << "\n";
  }
  out << "boundary_edges " << m.outer_boundary_edges.size() << "\n";
  for (const auto& e : m.outer_boundary_edges) out << e[0] << " " << e[1] << "\n";
}

void export_mesh(const Mesh3D& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mesh file: " + path);
  out << "# cablefem mesh v1 3d\n";
  out << "nodes " << m.nodes.size() << " 3\n";
  out.precision(17);
  for (const auto& p : m.nodes) out << p.x() << " " << p.y() << " " << p.z() << "\n";
  out << "elements " << m.tets.size() << " 4\n";
  for (size_t t = 0; t < m.tets.size(); ++t) {
    const auto& v = m.tets[t];
    out << v[0] << " " << v[1] << " " << v[2] << " " << v[3] << " " << region_name(m.region[t])
        << "\n";
  }
  auto facets = [&](const char* name, const std::vector<std::array<int, 3>>& list) {
    out << "facets " << name << " " << list.size() << "\n";
    for (const auto& f : list) out << f[0] << " " << f[1] << " " << f[2] << "\n";
  };
  facets("z0", m.z0_face);
  facets("zL", m.zL_face);
  facets("lateral", m.lateral_face);
}

}  // namespace cablefem
