// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "helmdd/sparse_matrix.hpp"
#include "helmdd/types.hpp"

namespace helmdd
{

using Point = std::array<double, 3>;
using GridIndex = std::array<int, 3>;

// Structured simplicial mesh of the unit square (dim 2) or unit cube (dim 3).
//
// Vertex (i, j[, l]) has id i + (m+1) j [+ (m+1)^2 l] and coordinates (i/m, j/m[, l/m]).
// Every cell is split along its main diagonal (Kuhn subdivision), which keeps
// uniformly refined meshes conforming and nested. Unused coordinates are zero.
class SimplicialMesh
{
public:
  SimplicialMesh() = default;

  int dim() const noexcept { return dim_; }
  int intervals_per_edge() const noexcept { return m_; }
  Index num_vertices() const noexcept { return static_cast<Index>(vertices_.size()); }
  Index num_simplices() const noexcept
  {
    return static_cast<Index>(simplices_.size()) / (dim_ + 1);
  }
  Index num_boundary_facets() const noexcept
  {
    return static_cast<Index>(boundary_facets_.size()) / dim_;
  }
  // Simplices per grid cell: 2 in 2d, 6 in 3d.
  int simplices_per_cell() const noexcept { return dim_ == 2 ? 2 : 6; }
  Index num_cells() const noexcept;

  const Point &vertex(Index v) const { return vertices_[static_cast<std::size_t>(v)]; }
  const std::vector<Point> &vertices() const noexcept { return vertices_; }

  // Vertex ids of simplex s (dim + 1 entries).
  const Index *simplex(Index s) const { return simplices_.data() + s * (dim_ + 1); }
  // Vertex ids of boundary facet f (dim entries).
  const Index *boundary_facet(Index f) const { return boundary_facets_.data() + f * dim_; }

  GridIndex grid_index(Index v) const noexcept;
  Index vertex_id(const GridIndex &g) const noexcept;
  // Grid cell that simplex s belongs to; simplices of cell c are numbered
  // [c * simplices_per_cell(), (c + 1) * simplices_per_cell()).
  GridIndex cell_of_simplex(Index s) const noexcept;
  Index cell_id(const GridIndex &c) const noexcept;

  bool on_physical_boundary(Index v) const noexcept;
  double simplex_volume(Index s) const;

  friend SimplicialMesh build_uniform_mesh(int dim, int intervals);

private:
  int dim_ = 0;
  int m_ = 0;
  std::vector<Point> vertices_;
  std::vector<Index> simplices_;
  std::vector<Index> boundary_facets_;
};

SimplicialMesh build_uniform_mesh(int dim, int intervals);

// Coarse/fine pair used by the grid coarse space. fine.m = r * coarse.m.
struct MeshHierarchy
{
  SimplicialMesh coarse;
  SimplicialMesh fine;
  int refinement_factor = 1;
};

MeshHierarchy build_hierarchy(int dim, int coarse_intervals, int refinement_factor);

// floor(k^alpha): subdomains per coordinate direction.
int subdomains_per_dimension(double k, double alpha);
// Smallest multiple of subdomains_1d that is >= ceil(k^{3/2}).
int fine_resolution(double k, int subdomains_1d);
// floor(k^alpha_prime): coarse-grid intervals per edge.
int coarse_resolution(double k, double alpha_prime);
// Coarse intervals for a requested coarse-space size: round(n^{1/d}) - 1.
int coarse_resolution_for_size(int dim, Index target_size);

// P1 nodal interpolation from `coarse` onto the vertices of `fine`: one row per
// fine vertex, one column per coarse vertex. The meshes need not be nested;
// each fine vertex is located in the coarse Kuhn simplex containing it.
ComplexSparseMatrix nodal_interpolation_matrix(const SimplicialMesh &coarse,
                                               const SimplicialMesh &fine);
ComplexSparseMatrix nodal_interpolation_matrix(const MeshHierarchy &hierarchy);

// Plain-text dump: header line, vertex coordinates, simplex vertex lists.
void write_mesh(std::ostream &os, const SimplicialMesh &mesh);

}  // namespace helmdd
