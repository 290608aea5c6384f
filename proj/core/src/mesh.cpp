// SPDX-License-Identifier: Apache-2.0

#include "helmdd/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>

namespace helmdd
{

namespace
{

// Tolerance for floor/ceil of k^p so that e.g. 10^1 = 9.999999999 still floors to 10.
constexpr double kPowerSlack = 1e-9;

int floor_power(double k, double p)
{
  return static_cast<int>(std::floor(std::pow(k, p) + kPowerSlack));
}

// Permutations of the coordinate axes; each one walks a cell from its origin to
// the opposite corner and defines one Kuhn simplex.
const std::vector<std::array<int, 3>> &kuhn_paths(int dim)
{
  static const std::vector<std::array<int, 3>> paths2 = {{0, 1, 2}, {1, 0, 2}};
  static const std::vector<std::array<int, 3>> paths3 = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                                         {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
  return dim == 2 ? paths2 : paths3;
}

}  // namespace

Index SimplicialMesh::num_cells() const noexcept
{
  Index n = 1;
  for (int a = 0; a < dim_; a++)
  {
    n *= m_;
  }
  return n;
}

GridIndex SimplicialMesh::grid_index(Index v) const noexcept
{
  const Index np = m_ + 1;
  GridIndex g{0, 0, 0};
  g[0] = static_cast<int>(v % np);
  g[1] = static_cast<int>((v / np) % np);
  if (dim_ == 3)
  {
    g[2] = static_cast<int>(v / (np * np));
  }
  return g;
}

Index SimplicialMesh::vertex_id(const GridIndex &g) const noexcept
{
  const Index np = m_ + 1;
  return g[0] + np * (g[1] + np * (dim_ == 3 ? g[2] : 0));
}

GridIndex SimplicialMesh::cell_of_simplex(Index s) const noexcept
{
  const Index c = s / simplices_per_cell();
  GridIndex g{0, 0, 0};
  g[0] = static_cast<int>(c % m_);
  g[1] = static_cast<int>((c / m_) % m_);
  if (dim_ == 3)
  {
    g[2] = static_cast<int>(c / (static_cast<Index>(m_) * m_));
  }
  return g;
}

Index SimplicialMesh::cell_id(const GridIndex &c) const noexcept
{
  return c[0] + static_cast<Index>(m_) * (c[1] + static_cast<Index>(m_) * (dim_ == 3 ? c[2] : 0));
}

bool SimplicialMesh::on_physical_boundary(Index v) const noexcept
{
  const GridIndex g = grid_index(v);
  for (int a = 0; a < dim_; a++)
  {
    if (g[a] == 0 || g[a] == m_)
    {
      return true;
    }
  }
  return false;
}

double SimplicialMesh::simplex_volume(Index s) const
{
  const Index *vs = simplex(s);
  const Point &p0 = vertex(vs[0]);
  double e[3][3] = {};
  for (int r = 0; r < dim_; r++)
  {
    const Point &p = vertex(vs[r + 1]);
    for (int c = 0; c < dim_; c++)
    {
      e[r][c] = p[c] - p0[c];
    }
  }
  if (dim_ == 2)
  {
    return std::abs(e[0][0] * e[1][1] - e[0][1] * e[1][0]) / 2.0;
  }
  const double det = e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) -
                     e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0]) +
                     e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
  return std::abs(det) / 6.0;
}

SimplicialMesh build_uniform_mesh(int dim, int intervals)
{
  if (dim != 2 && dim != 3)
  {
    throw ArgumentError("mesh dimension must be 2 or 3, got " + std::to_string(dim));
  }
  if (intervals < 1)
  {
    throw ArgumentError("intervals per edge must be positive, got " + std::to_string(intervals));
  }

  SimplicialMesh mesh;
  mesh.dim_ = dim;
  mesh.m_ = intervals;
  const int m = intervals;
  const int nz = dim == 3 ? m + 1 : 1;
  const double h = 1.0 / m;

  mesh.vertices_.reserve(static_cast<std::size_t>((m + 1) * (m + 1) * nz));
  for (int l = 0; l < nz; l++)
  {
    for (int j = 0; j <= m; j++)
    {
      for (int i = 0; i <= m; i++)
      {
        // i == m gives exactly 1.0.
        mesh.vertices_.push_back({i * h, j * h, dim == 3 ? l * h : 0.0});
        if (i == m)
        {
          mesh.vertices_.back()[0] = 1.0;
        }
        if (j == m)
        {
          mesh.vertices_.back()[1] = 1.0;
        }
        if (dim == 3 && l == m)
        {
          mesh.vertices_.back()[2] = 1.0;
        }
      }
    }
  }

  const auto &paths = kuhn_paths(dim);
  const Index ncells = mesh.num_cells();
  mesh.simplices_.reserve(static_cast<std::size_t>(ncells) * paths.size() * (dim + 1));
  for (Index c = 0; c < ncells; c++)
  {
    GridIndex origin{static_cast<int>(c % m), static_cast<int>((c / m) % m),
                     dim == 3 ? static_cast<int>(c / (static_cast<Index>(m) * m)) : 0};
    for (const auto &path : paths)
    {
      GridIndex g = origin;
      mesh.simplices_.push_back(mesh.vertex_id(g));
      for (int step = 0; step < dim; step++)
      {
        g[path[step]]++;
        mesh.simplices_.push_back(mesh.vertex_id(g));
      }
    }
  }

  // A facet is on the boundary iff all of its vertices share a grid coordinate 0 or m.
  const Index ns = mesh.num_simplices();
  for (Index s = 0; s < ns; s++)
  {
    const Index *vs = mesh.simplex(s);
    for (int drop = 0; drop <= dim; drop++)
    {
      std::array<Index, 3> facet{};
      int n = 0;
      for (int a = 0; a <= dim; a++)
      {
        if (a != drop)
        {
          facet[n++] = vs[a];
        }
      }
      for (int axis = 0; axis < dim; axis++)
      {
        const int c0 = mesh.grid_index(facet[0])[axis];
        if (c0 != 0 && c0 != m)
        {
          continue;
        }
        bool planar = true;
        for (int a = 1; a < dim; a++)
        {
          planar = planar && mesh.grid_index(facet[a])[axis] == c0;
        }
        if (planar)
        {
          mesh.boundary_facets_.insert(mesh.boundary_facets_.end(), facet.begin(),
                                       facet.begin() + dim);
          break;
        }
      }
    }
  }
  return mesh;
}

MeshHierarchy build_hierarchy(int dim, int coarse_intervals, int refinement_factor)
{
  if (refinement_factor < 1)
  {
    throw ArgumentError("refinement factor must be positive");
  }
  return {build_uniform_mesh(dim, coarse_intervals),
          build_uniform_mesh(dim, coarse_intervals * refinement_factor), refinement_factor};
}

int subdomains_per_dimension(double k, double alpha)
{
  if (!(k > 0.0) || !(alpha > 0.0) || alpha > 1.0)
  {
    throw ArgumentError("subdomains_per_dimension needs k > 0 and 0 < alpha <= 1");
  }
  const int n = floor_power(k, alpha);
  if (n < 1)
  {
    throw ArgumentError("k^alpha < 1: no subdomains");
  }
  return n;
}

int fine_resolution(double k, int subdomains_1d)
{
  if (!(k > 0.0) || subdomains_1d < 1)
  {
    throw ArgumentError("fine_resolution needs k > 0 and at least one subdomain");
  }
  const int base = static_cast<int>(std::ceil(std::pow(k, 1.5) - kPowerSlack));
  const int blocks = (std::max(base, 1) + subdomains_1d - 1) / subdomains_1d;
  return blocks * subdomains_1d;
}

int coarse_resolution(double k, double alpha_prime)
{
  if (!(k > 0.0) || !(alpha_prime > 0.0) || alpha_prime > 1.0)
  {
    throw ArgumentError("coarse_resolution needs k > 0 and 0 < alpha' <= 1");
  }
  const int n = floor_power(k, alpha_prime);
  if (n < 1)
  {
    throw ArgumentError("k^alpha' < 1: empty coarse grid");
  }
  return n;
}

int coarse_resolution_for_size(int dim, Index target_size)
{
  if ((dim != 2 && dim != 3) || target_size < 1)
  {
    throw ArgumentError("coarse_resolution_for_size: bad dimension or size");
  }
  const int m = static_cast<int>(std::lround(std::pow(static_cast<double>(target_size), 1.0 / dim))) - 1;
  if (m < 1)
  {
    throw ArgumentError("requested coarse-space size too small for a coarse grid");
  }
  return m;
}

ComplexSparseMatrix nodal_interpolation_matrix(const SimplicialMesh &coarse,
                                               const SimplicialMesh &fine)
{
  if (coarse.dim() != fine.dim())
  {
    throw ArgumentError("interpolation between meshes of different dimension");
  }
  const int dim = fine.dim();
  const Index mc = coarse.intervals_per_edge();
  const Index mf = fine.intervals_per_edge();

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(fine.num_vertices() * (dim + 1)));
  for (Index v = 0; v < fine.num_vertices(); v++)
  {
    const GridIndex g = fine.grid_index(v);
    GridIndex cell{0, 0, 0};
    std::array<double, 3> t{0.0, 0.0, 0.0};
    for (int a = 0; a < dim; a++)
    {
      // Coarse position g/mf * mc computed in integers: cell + remainder/mf.
      const Index num = g[a] * mc;
      Index c = num / mf;
      Index rem = num % mf;
      if (c == mc)
      {
        c = mc - 1;
        rem = mf;
      }
      cell[a] = static_cast<int>(c);
      t[a] = static_cast<double>(rem) / static_cast<double>(mf);
    }
    // Kuhn simplex containing t: walk axes in order of decreasing local coordinate.
    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.begin() + dim, [&](int a, int b) { return t[a] > t[b]; });

    GridIndex corner = cell;
    double previous = 1.0;
    for (int step = 0; step <= dim; step++)
    {
      const double next = step < dim ? t[order[step]] : 0.0;
      const double weight = previous - next;
      if (weight != 0.0)
      {
        entries.push_back({v, coarse.vertex_id(corner), weight});
      }
      if (step < dim)
      {
        corner[order[step]]++;
        previous = next;
      }
    }
  }
  return ComplexSparseMatrix::from_triplets(fine.num_vertices(), coarse.num_vertices(), entries);
}

ComplexSparseMatrix nodal_interpolation_matrix(const MeshHierarchy &hierarchy)
{
  if (hierarchy.fine.intervals_per_edge() % hierarchy.coarse.intervals_per_edge() != 0)
  {
    throw ArgumentError("mesh hierarchy is not nested");
  }
  return nodal_interpolation_matrix(hierarchy.coarse, hierarchy.fine);
}

void write_mesh(std::ostream &os, const SimplicialMesh &mesh)
{
  const auto precision = os.precision();
  os << mesh.dim() << ' ' << mesh.intervals_per_edge() << ' ' << mesh.num_vertices() << ' '
     << mesh.num_simplices() << '\n';
  os << std::setprecision(17);
  for (const Point &p : mesh.vertices())
  {
    os << p[0];
    for (int a = 1; a < mesh.dim(); a++)
    {
      os << ' ' << p[a];
    }
    os << '\n';
  }
  for (Index s = 0; s < mesh.num_simplices(); s++)
  {
    const Index *vs = mesh.simplex(s);
    os << vs[0];
    for (int a = 1; a <= mesh.dim(); a++)
    {
      os << ' ' << vs[a];
    }
    os << '\n';
  }
  os.precision(precision);
}

}  // namespace helmdd
