#ifndef PARABOUND_GEOMETRY_HPP
#define PARABOUND_GEOMETRY_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "parabound/util.hpp"

namespace parabound {

/// Axis-aligned box domain with a facewise boundary split into the radiative
/// part Gamma and the no-flux remainder.
struct DomainSpec {
  int dimension = 2;
  std::vector<double> extents;              // box side lengths, one per axis
  std::vector<std::string> gamma_faces;     // face names, or {"all"}
  double time_horizon = 1.0;

  bool is_unit_square() const {
    return dimension == 2 && extents.size() == 2 && extents[0] == 1.0 &&
           extents[1] == 1.0;
  }
};

enum class FacetTag { gamma, rest };

struct Facet {
  std::array<int, 3> v{-1, -1, -1};  // 2 vertices (n=2) or 3 (n=3)
  FacetTag tag = FacetTag::rest;
};

/// Conforming simplicial mesh of a box. Structured, built from a non-obtuse
/// (Delaunay) split of a tensor grid so that P1 stiffness matrices with
/// scalar coefficients are M-matrices and the discrete sign principles hold
/// sharply.
struct Mesh {
  int dimension = 2;
  std::vector<Point> vertices;
  std::vector<int> cells;  // flat connectivity, stride = dimension + 1
  std::vector<Facet> boundary_facets;
  double resolution = 0.0;  // max cell diameter
  std::vector<double> extents;
  std::array<int, 3> divisions{0, 0, 0};

  int simplex_size() const { return dimension + 1; }
  int num_cells() const {
    return static_cast<int>(cells.size()) / simplex_size();
  }
  int num_vertices() const { return static_cast<int>(vertices.size()); }
  const int* cell(int c) const { return cells.data() + c * simplex_size(); }
  int facet_size() const { return dimension; }

  double cell_measure(int c) const;
  double facet_measure(const Facet& f) const;
};

struct DomainMeasures {
  double vol_omega = 0.0;     // |Omega|
  double area_gamma = 0.0;    // |Gamma|
  double area_rest = 0.0;     // |dOmega \ Gamma|
  double vol_QT = 0.0;        // |Omega| * T
  double area_SigmaT = 0.0;   // |Gamma| * T
};

/// Builds the structured simplicial mesh with max cell diameter <= target_h
/// and boundary facets tagged per the gamma face selection.
/// Throws GeometryError on degenerate extents or when a nonempty selection
/// matches no face.
Mesh build_box_mesh(const DomainSpec& spec, double target_h);

/// Exact geometric measures (summation over cells/facets).
DomainMeasures measures(const Mesh& mesh, double T);

/// Plain-text node/element/facet dump, one record per line.
void export_mesh(const Mesh& mesh, std::ostream& os);

/// Identifies the domain a Sobolev registry was built for.
std::string domain_fingerprint(const DomainSpec& spec);

/// Face names accepted by gamma_faces for the given dimension.
std::vector<std::string> box_face_names(int dimension);

}  // namespace parabound

#endif
