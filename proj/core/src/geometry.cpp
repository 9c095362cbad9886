#include "parabound/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "parabound/error.hpp"

namespace parabound {

namespace {

double tri_area(const Point& a, const Point& b, const Point& c) {
  const double ux = b[0] - a[0], uy = b[1] - a[1];
  const double vx = c[0] - a[0], vy = c[1] - a[1];
  return 0.5 * std::abs(ux * vy - uy * vx);
}

double tet_volume(const Point& a, const Point& b, const Point& c,
                  const Point& d) {
  const double u[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const double v[3] = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
  const double w[3] = {d[0] - a[0], d[1] - a[1], d[2] - a[2]};
  const double det = u[0] * (v[1] * w[2] - v[2] * w[1]) -
                     u[1] * (v[0] * w[2] - v[2] * w[0]) +
                     u[2] * (v[0] * w[1] - v[1] * w[0]);
  return std::abs(det) / 6.0;
}

double tri_area3d(const Point& a, const Point& b, const Point& c) {
  const double u[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const double v[3] = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
  const double cx = u[1] * v[2] - u[2] * v[1];
  const double cy = u[2] * v[0] - u[0] * v[2];
  const double cz = u[0] * v[1] - u[1] * v[0];
  return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

struct FaceName {
  int axis;
  int side;  // 0 = lower plane, 1 = upper plane
};

std::map<std::string, FaceName> face_table(int dim) {
  std::map<std::string, FaceName> t;
  t["left"] = {0, 0};
  t["right"] = {0, 1};
  t["x0"] = {0, 0};
  t["x1"] = {0, 1};
  if (dim == 2) {
    t["bottom"] = {1, 0};
    t["top"] = {1, 1};
    t["y0"] = {1, 0};
    t["y1"] = {1, 1};
  } else {
    t["front"] = {1, 0};
    t["back"] = {1, 1};
    t["y0"] = {1, 0};
    t["y1"] = {1, 1};
    t["bottom"] = {2, 0};
    t["top"] = {2, 1};
    t["z0"] = {2, 0};
    t["z1"] = {2, 1};
  }
  return t;
}

// Facets whose vertices all lie on a selected face plane are tagged gamma.
FacetTag classify_facet(const std::vector<Point>& verts,
                        const std::array<int, 3>& fv, int nfv,
                        const std::vector<double>& extents,
                        const std::set<std::pair<int, int>>& gamma) {
  const double tol = 1e-12;
  const int dim = static_cast<int>(extents.size());
  for (int axis = 0; axis < dim; ++axis) {
    for (int side = 0; side < 2; ++side) {
      const double plane = side == 0 ? 0.0 : extents[axis];
      bool on = true;
      for (int k = 0; k < nfv; ++k) {
        if (std::abs(verts[fv[k]][axis] - plane) > tol) {
          on = false;
          break;
        }
      }
      if (on) {
        return gamma.count({axis, side}) ? FacetTag::gamma : FacetTag::rest;
      }
    }
  }
  throw GeometryError("boundary facet does not lie on any box face");
}

}  // namespace

double Mesh::cell_measure(int c) const {
  const int* v = cell(c);
  if (dimension == 2) return tri_area(vertices[v[0]], vertices[v[1]], vertices[v[2]]);
  return tet_volume(vertices[v[0]], vertices[v[1]], vertices[v[2]],
                    vertices[v[3]]);
}

double Mesh::facet_measure(const Facet& f) const {
  if (dimension == 2) {
    const Point& a = vertices[f.v[0]];
    const Point& b = vertices[f.v[1]];
    return std::hypot(b[0] - a[0], b[1] - a[1]);
  }
  return tri_area3d(vertices[f.v[0]], vertices[f.v[1]], vertices[f.v[2]]);
}

std::vector<std::string> box_face_names(int dimension) {
  std::vector<std::string> names;
  for (const auto& [name, fn] : face_table(dimension)) names.push_back(name);
  return names;
}

Mesh build_box_mesh(const DomainSpec& spec, double target_h) {
  const int dim = spec.dimension;
  if (dim != 2 && dim != 3)
    throw GeometryError("only dimensions 2 and 3 are supported");
  if (static_cast<int>(spec.extents.size()) != dim)
    throw GeometryError("extents size does not match dimension");
  for (double L : spec.extents)
    if (!(L > 0.0)) throw GeometryError("degenerate box extent");
  if (!(spec.time_horizon > 0.0)) throw GeometryError("time horizon must be positive");
  if (!(target_h > 0.0)) throw GeometryError("target_h must be positive");
  const double min_extent = *std::min_element(spec.extents.begin(), spec.extents.end());
  if (target_h > min_extent)
    throw GeometryError("target_h exceeds the smallest box extent");

  // Resolve the Gamma face selection.
  const auto table = face_table(dim);
  std::set<std::pair<int, int>> gamma;
  bool all = false;
  for (const auto& name : spec.gamma_faces) {
    if (name == "all") {
      all = true;
      continue;
    }
    if (name == "none") continue;
    auto it = table.find(name);
    if (it == table.end())
      throw GeometryError("unknown face name in gamma selection: " + name);
    gamma.insert({it->second.axis, it->second.side});
  }
  if (all)
    for (int a = 0; a < dim; ++a)
      for (int s = 0; s < 2; ++s) gamma.insert({a, s});
  const bool wants_gamma =
      !spec.gamma_faces.empty() &&
      !(spec.gamma_faces.size() == 1 && spec.gamma_faces[0] == "none");
  if (wants_gamma && gamma.empty())
    throw GeometryError("gamma selector matches no face");

  Mesh mesh;
  mesh.dimension = dim;
  mesh.extents = spec.extents;

  // Per-axis divisions so that the cell diameter stays below target_h.
  std::array<int, 3> m{1, 1, 1};
  for (int a = 0; a < dim; ++a) {
    m[a] = std::max(1, static_cast<int>(
                           std::ceil(spec.extents[a] * std::sqrt(double(dim)) /
                                     target_h)));
  }
  mesh.divisions = m;

  std::array<double, 3> h{0, 0, 0};
  for (int a = 0; a < dim; ++a) h[a] = spec.extents[a] / m[a];

  if (dim == 2) {
    const int nx = m[0], ny = m[1];
    auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
    mesh.vertices.resize((nx + 1) * (ny + 1));
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        mesh.vertices[vid(i, j)] = {i * h[0], j * h[1], 0.0};
    // Uniform diagonal split: two right triangles per grid square.
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const int v00 = vid(i, j), v10 = vid(i + 1, j);
        const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
        mesh.cells.insert(mesh.cells.end(), {v00, v10, v11});
        mesh.cells.insert(mesh.cells.end(), {v00, v11, v01});
      }
    }
    mesh.resolution = std::hypot(h[0], h[1]);
  } else {
    const int nx = m[0], ny = m[1], nz = m[2];
    auto vid = [&](int i, int j, int k) {
      return (k * (ny + 1) + j) * (nx + 1) + i;
    };
    mesh.vertices.resize((nx + 1) * (ny + 1) * (nz + 1));
    for (int k = 0; k <= nz; ++k)
      for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
          mesh.vertices[vid(i, j, k)] = {i * h[0], j * h[1], k * h[2]};
    // Kuhn split: six tetrahedra per grid cube, one per axis permutation.
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                             {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int k = 0; k < nz; ++k) {
      for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
          const int base[3] = {i, j, k};
          for (const auto& perm : perms) {
            int idx[3] = {base[0], base[1], base[2]};
            int tet[4];
            tet[0] = vid(idx[0], idx[1], idx[2]);
            for (int s = 0; s < 3; ++s) {
              idx[perm[s]] += 1;
              tet[s + 1] = vid(idx[0], idx[1], idx[2]);
            }
            mesh.cells.insert(mesh.cells.end(), tet, tet + 4);
          }
        }
      }
    }
    mesh.resolution = std::sqrt(h[0] * h[0] + h[1] * h[1] + h[2] * h[2]);
  }

  // Extract boundary facets as cell faces that appear exactly once.
  std::map<std::vector<int>, std::array<int, 3>> face_count;
  const int ss = mesh.simplex_size();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const int* v = mesh.cell(c);
    for (int drop = 0; drop < ss; ++drop) {
      std::array<int, 3> face{-1, -1, -1};
      int idx = 0;
      for (int k = 0; k < ss; ++k)
        if (k != drop) face[idx++] = v[k];
      std::vector<int> key(face.begin(), face.begin() + (ss - 1));
      std::sort(key.begin(), key.end());
      auto it = face_count.find(key);
      if (it == face_count.end())
        face_count.emplace(std::move(key), face);
      else
        face_count.erase(it);
    }
  }
  for (const auto& [key, face] : face_count) {
    Facet f;
    f.v = face;
    f.tag = classify_facet(mesh.vertices, f.v, mesh.facet_size(), mesh.extents,
                           gamma);
    mesh.boundary_facets.push_back(f);
  }
  std::sort(mesh.boundary_facets.begin(), mesh.boundary_facets.end(),
            [](const Facet& a, const Facet& b) { return a.v < b.v; });

  return mesh;
}

DomainMeasures measures(const Mesh& mesh, double T) {
  if (!(T > 0.0)) throw GeometryError("T must be positive");
  DomainMeasures dm;
  KahanSum vol, gam, rest;
  for (int c = 0; c < mesh.num_cells(); ++c) vol.add(mesh.cell_measure(c));
  for (const Facet& f : mesh.boundary_facets) {
    const double a = mesh.facet_measure(f);
    if (f.tag == FacetTag::gamma)
      gam.add(a);
    else
      rest.add(a);
  }
  dm.vol_omega = vol.value();
  dm.area_gamma = gam.value();
  dm.area_rest = rest.value();
  dm.vol_QT = dm.vol_omega * T;
  dm.area_SigmaT = dm.area_gamma * T;
  return dm;
}

void export_mesh(const Mesh& mesh, std::ostream& os) {
  os << "dim " << mesh.dimension << "\n";
  for (int i = 0; i < mesh.num_vertices(); ++i) {
    os << "v " << i;
    for (int a = 0; a < mesh.dimension; ++a) os << ' ' << mesh.vertices[i][a];
    os << "\n";
  }
  for (int c = 0; c < mesh.num_cells(); ++c) {
    os << "c " << c;
    const int* v = mesh.cell(c);
    for (int k = 0; k < mesh.simplex_size(); ++k) os << ' ' << v[k];
    os << "\n";
  }
  for (const Facet& f : mesh.boundary_facets) {
    os << "f";
    for (int k = 0; k < mesh.facet_size(); ++k) os << ' ' << f.v[k];
    os << ' ' << (f.tag == FacetTag::gamma ? "gamma" : "rest") << "\n";
  }
}

std::string domain_fingerprint(const DomainSpec& spec) {
  std::ostringstream os;
  os << "box" << spec.dimension << ":";
  for (std::size_t i = 0; i < spec.extents.size(); ++i) {
    if (i) os << "x";
    os << spec.extents[i];
  }
  os << ":gamma=";
  auto faces = spec.gamma_faces;
  std::sort(faces.begin(), faces.end());
  for (std::size_t i = 0; i < faces.size(); ++i) {
    if (i) os << ",";
    os << faces[i];
  }
  return os.str();
}

}  // namespace parabound
