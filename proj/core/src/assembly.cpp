// SPDX-License-Identifier: Apache-2.0

#include "helmdd/assembly.hpp"

#include <cmath>
#include <numeric>

namespace helmdd
{

namespace
{

constexpr double kDegenerateVolume = 1e-300;

double facet_measure(const SimplicialMesh &mesh, const Facet &f)
{
  const Point &a = mesh.vertex(f[0]);
  const Point &b = mesh.vertex(f[1]);
  if (mesh.dim() == 2)
  {
    return std::hypot(b[0] - a[0], b[1] - a[1]);
  }
  const Point &c = mesh.vertex(f[2]);
  const double u[3] = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const double v[3] = {c[0] - a[0], c[1] - a[1], c[2] - a[2]};
  const double cx = u[1] * v[2] - u[2] * v[1];
  const double cy = u[2] * v[0] - u[0] * v[2];
  const double cz = u[0] * v[1] - u[1] * v[0];
  return 0.5 * std::sqrt(cx * cx + cy * cy + cz * cz);
}

std::vector<Index> all_elements(const SimplicialMesh &mesh)
{
  std::vector<Index> ids(static_cast<std::size_t>(mesh.num_simplices()));
  std::iota(ids.begin(), ids.end(), Index{0});
  return ids;
}

std::vector<Facet> all_boundary_facets(const SimplicialMesh &mesh)
{
  std::vector<Facet> facets(static_cast<std::size_t>(mesh.num_boundary_facets()));
  for (Index f = 0; f < mesh.num_boundary_facets(); f++)
  {
    const Index *vs = mesh.boundary_facet(f);
    Facet &out = facets[static_cast<std::size_t>(f)];
    out = {0, 0, 0};
    for (int a = 0; a < mesh.dim(); a++)
    {
      out[a] = vs[a];
    }
  }
  return facets;
}

}  // namespace

HelmholtzParams HelmholtzParams::with_default_robin(double k, double epsilon)
{
  const double sign = epsilon > 0.0 ? 1.0 : (epsilon < 0.0 ? -1.0 : 1.0);
  return {k, epsilon, sign * k};
}

FormCoefficients FormCoefficients::helmholtz(const HelmholtzParams &params)
{
  return {1.0, -Complex(params.k * params.k, params.epsilon), -Complex(0.0, params.eta)};
}

std::vector<double> element_stiffness(const SimplicialMesh &mesh, Index s, double *volume)
{
  const int dim = mesh.dim();
  const Index *vs = mesh.simplex(s);
  const Point &p0 = mesh.vertex(vs[0]);
  double e[3][3] = {};
  for (int r = 0; r < dim; r++)
  {
    const Point &p = mesh.vertex(vs[r + 1]);
    for (int c = 0; c < dim; c++)
    {
      e[r][c] = p[c] - p0[c];
    }
  }

  // inv = E^{-1}; column r of inv is the gradient of barycentric coordinate r + 1.
  double inv[3][3] = {};
  double det = 0.0;
  if (dim == 2)
  {
    det = e[0][0] * e[1][1] - e[0][1] * e[1][0];
    inv[0][0] = e[1][1] / det;
    inv[0][1] = -e[0][1] / det;
    inv[1][0] = -e[1][0] / det;
    inv[1][1] = e[0][0] / det;
  }
  else
  {
    det = e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1]) -
          e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0]) +
          e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0]);
    inv[0][0] = (e[1][1] * e[2][2] - e[1][2] * e[2][1]) / det;
    inv[0][1] = (e[0][2] * e[2][1] - e[0][1] * e[2][2]) / det;
    inv[0][2] = (e[0][1] * e[1][2] - e[0][2] * e[1][1]) / det;
    inv[1][0] = (e[1][2] * e[2][0] - e[1][0] * e[2][2]) / det;
    inv[1][1] = (e[0][0] * e[2][2] - e[0][2] * e[2][0]) / det;
    inv[1][2] = (e[0][2] * e[1][0] - e[0][0] * e[1][2]) / det;
    inv[2][0] = (e[1][0] * e[2][1] - e[1][1] * e[2][0]) / det;
    inv[2][1] = (e[0][1] * e[2][0] - e[0][0] * e[2][1]) / det;
    inv[2][2] = (e[0][0] * e[1][1] - e[0][1] * e[1][0]) / det;
  }
  const double vol = std::abs(det) / (dim == 2 ? 2.0 : 6.0);
  if (!(vol > kDegenerateVolume) || !std::isfinite(vol))
  {
    throw AssemblyError("degenerate simplex " + std::to_string(s));
  }
  if (volume)
  {
    *volume = vol;
  }

  double grad[4][3] = {};
  for (int r = 0; r < dim; r++)
  {
    for (int c = 0; c < dim; c++)
    {
      grad[r + 1][c] = inv[c][r];
      grad[0][c] -= inv[c][r];
    }
  }
  const int nv = dim + 1;
  std::vector<double> k(static_cast<std::size_t>(nv * nv));
  for (int a = 0; a < nv; a++)
  {
    for (int b = 0; b < nv; b++)
    {
      double dot = 0.0;
      for (int c = 0; c < dim; c++)
      {
        dot += grad[a][c] * grad[b][c];
      }
      k[static_cast<std::size_t>(a * nv + b)] = vol * dot;
    }
  }
  return k;
}

ComplexSparseMatrix assemble_form(const SimplicialMesh &mesh, std::span<const Index> elements,
                                  std::span<const Facet> robin_facets,
                                  const FormCoefficients &coeffs,
                                  const std::function<Index(Index)> &local_of, Index size)
{
  const int dim = mesh.dim();
  const int nv = dim + 1;
  const double mass_scale = 1.0 / ((dim + 1) * (dim + 2));
  const double facet_scale = 1.0 / (dim * (dim + 1));

  std::vector<Triplet> entries;
  entries.reserve(elements.size() * static_cast<std::size_t>(nv * nv) +
                  robin_facets.size() * static_cast<std::size_t>(dim * dim));
  Index local[4];
  for (const Index s : elements)
  {
    double vol = 0.0;
    const auto k = element_stiffness(mesh, s, &vol);
    const Index *vs = mesh.simplex(s);
    for (int a = 0; a < nv; a++)
    {
      local[a] = local_of(vs[a]);
    }
    for (int a = 0; a < nv; a++)
    {
      for (int b = 0; b < nv; b++)
      {
        const double m = vol * mass_scale * (a == b ? 2.0 : 1.0);
        const Complex value =
          coeffs.stiffness * k[static_cast<std::size_t>(a * nv + b)] + coeffs.mass * m;
        entries.push_back({local[a], local[b], value});
      }
    }
  }
  if (coeffs.robin != Complex(0.0))
  {
    for (const Facet &f : robin_facets)
    {
      const double area = facet_measure(mesh, f);
      for (int a = 0; a < dim; a++)
      {
        local[a] = local_of(f[a]);
      }
      for (int a = 0; a < dim; a++)
      {
        for (int b = 0; b < dim; b++)
        {
          const double m = area * facet_scale * (a == b ? 2.0 : 1.0);
          entries.push_back({local[a], local[b], coeffs.robin * m});
        }
      }
    }
  }
  return ComplexSparseMatrix::from_triplets(size, size, entries);
}

ComplexSparseMatrix assemble_global(const SimplicialMesh &mesh, const FormCoefficients &coeffs)
{
  const auto elements = all_elements(mesh);
  const auto facets = all_boundary_facets(mesh);
  return assemble_form(mesh, elements, facets, coeffs, [](Index g) { return g; },
                       mesh.num_vertices());
}

ComplexSparseMatrix assemble_global(const SimplicialMesh &mesh, const HelmholtzParams &params)
{
  if (params.k < 0.0)
  {
    throw ArgumentError("wavenumber must be non-negative");
  }
  return assemble_global(mesh, FormCoefficients::helmholtz(params));
}

Complex SourceFunction::operator()(const Point &x) const
{
  switch (kind)
  {
    case Kind::gauss2d:
    {
      const double r2 = (x[0] - 0.5) * (x[0] - 0.5) + (x[1] - 0.5) * (x[1] - 0.5);
      return -std::exp(-100.0 * r2);
    }
    case Kind::gauss3d:
    {
      const double r2 = (x[0] - 0.5) * (x[0] - 0.5) + (x[1] - 0.5) * (x[1] - 0.5) +
                        (x[2] - 0.5) * (x[2] - 0.5);
      return -std::exp(-400.0 * r2);
    }
    case Kind::constant:
      return value;
    case Kind::custom:
      return function ? function(x) : Complex(0.0);
  }
  return 0.0;
}

ComplexVector assemble_rhs(const SimplicialMesh &mesh, const SourceFunction &source)
{
  if ((source.kind == SourceFunction::Kind::gauss2d && mesh.dim() != 2) ||
      (source.kind == SourceFunction::Kind::gauss3d && mesh.dim() != 3))
  {
    throw ArgumentError("source function dimension does not match the mesh");
  }
  if (source.kind == SourceFunction::Kind::custom && !source.function)
  {
    throw ArgumentError("custom source without a function");
  }
  const int nv = mesh.dim() + 1;
  std::vector<double> lumped(static_cast<std::size_t>(mesh.num_vertices()), 0.0);
  for (Index s = 0; s < mesh.num_simplices(); s++)
  {
    const double share = mesh.simplex_volume(s) / nv;
    const Index *vs = mesh.simplex(s);
    for (int a = 0; a < nv; a++)
    {
      lumped[static_cast<std::size_t>(vs[a])] += share;
    }
  }
  ComplexVector f(mesh.num_vertices());
  for (Index v = 0; v < mesh.num_vertices(); v++)
  {
    f[v] = source(mesh.vertex(v)) * lumped[static_cast<std::size_t>(v)];
  }
  return f;
}

ComplexSparseMatrix assemble_subdomain_robin(const SimplicialMesh &mesh, const Subdomain &sub,
                                             const HelmholtzParams &params)
{
  if (sub.elements.empty())
  {
    throw ArgumentError("subdomain " + std::to_string(sub.index) + " has no elements");
  }
  auto local_of = [&sub](Index g) { return sub.local_index(g); };
  std::vector<Facet> facets = sub.physical_facets;
  facets.insert(facets.end(), sub.interface_facets.begin(), sub.interface_facets.end());
  return assemble_form(mesh, sub.elements, facets, FormCoefficients::helmholtz(params), local_of,
                       sub.size());
}

SubdomainMatrices assemble_subdomain(const SimplicialMesh &mesh, const Subdomain &sub,
                                     const HelmholtzParams &params)
{
  if (sub.elements.empty())
  {
    throw ArgumentError("subdomain " + std::to_string(sub.index) + " has no elements");
  }
  auto local_of = [&sub](Index g) { return sub.local_index(g); };
  const auto coeffs = FormCoefficients::helmholtz(params);

  SubdomainMatrices out;
  out.neumann = assemble_form(mesh, sub.elements, sub.physical_facets, coeffs, local_of, sub.size());
  out.interface_mass = assemble_form(mesh, {}, sub.interface_facets,
                                     FormCoefficients::robin_mass_only(), local_of, sub.size());
  out.local = out.neumann + out.interface_mass.scaled(coeffs.robin);
  out.has_interface = !sub.interface_facets.empty();
  return out;
}

}  // namespace helmdd
