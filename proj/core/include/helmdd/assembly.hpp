// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <span>
#include <string>

#include "helmdd/decomposition.hpp"
#include "helmdd/mesh.hpp"
#include "helmdd/sparse_matrix.hpp"
#include "helmdd/types.hpp"

namespace helmdd
{

// Wavenumber k, absorption epsilon and Robin (impedance) coefficient eta.
struct HelmholtzParams
{
  double k = 0.0;
  double epsilon = 0.0;
  double eta = 0.0;

  // eta = sign(epsilon) k, or k when epsilon == 0.
  static HelmholtzParams with_default_robin(double k, double epsilon);
};

// Coefficients of the bilinear form
//   stiffness * (grad u, grad v) + mass * (u, v) + robin * <u, v>_{robin facets}.
// The Helmholtz form uses stiffness = 1, mass = -(k^2 + i eps), robin = -i eta.
struct FormCoefficients
{
  double stiffness = 1.0;
  Complex mass = 0.0;
  Complex robin = 0.0;

  static FormCoefficients helmholtz(const HelmholtzParams &params);
  static FormCoefficients mass_only() { return {0.0, 1.0, 0.0}; }
  static FormCoefficients robin_mass_only() { return {0.0, 0.0, 1.0}; }
};

// Assemble over `elements` and `robin_facets`, numbering vertex g as local_of(g).
// local_of must be defined for every vertex touched.
ComplexSparseMatrix assemble_form(const SimplicialMesh &mesh, std::span<const Index> elements,
                                  std::span<const Facet> robin_facets,
                                  const FormCoefficients &coeffs,
                                  const std::function<Index(Index)> &local_of, Index size);

// P1 element stiffness matrix (row-major, (dim+1)^2 entries) and volume of simplex s.
std::vector<double> element_stiffness(const SimplicialMesh &mesh, Index s, double *volume = nullptr);

// Global A_eps on the whole mesh with the Robin term on all of the boundary.
ComplexSparseMatrix assemble_global(const SimplicialMesh &mesh, const HelmholtzParams &params);
ComplexSparseMatrix assemble_global(const SimplicialMesh &mesh, const FormCoefficients &coeffs);

struct SourceFunction
{
  enum class Kind
  {
    gauss2d,  // -exp(-100 |x - c|^2), c the square's center
    gauss3d,  // -exp(-400 |x - c|^2), c the cube's center
    constant,
    custom
  };

  Kind kind = Kind::gauss2d;
  Complex value = 0.0;
  std::function<Complex(const Point &)> function;

  static SourceFunction gauss2d() { return {Kind::gauss2d, 0.0, {}}; }
  static SourceFunction gauss3d() { return {Kind::gauss3d, 0.0, {}}; }
  static SourceFunction constant(Complex c) { return {Kind::constant, c, {}}; }
  static SourceFunction custom(std::function<Complex(const Point &)> f)
  {
    return {Kind::custom, 0.0, std::move(f)};
  }
  // Default source for a dimension: gauss2d or gauss3d.
  static SourceFunction gaussian(int dim) { return dim == 3 ? gauss3d() : gauss2d(); }

  Complex operator()(const Point &x) const;
};

// (f)_v = f(x_v) * (lumped mass of vertex v).
ComplexVector assemble_rhs(const SimplicialMesh &mesh, const SourceFunction &source);

struct SubdomainMatrices
{
  // Local Robin problem: Robin term on all of the subdomain boundary.
  ComplexSparseMatrix local;
  // Robin term only on the physical part of the subdomain boundary.
  ComplexSparseMatrix neumann;
  // Mass on the interface facets (real).
  ComplexSparseMatrix interface_mass;
  bool has_interface = false;
};

SubdomainMatrices assemble_subdomain(const SimplicialMesh &mesh, const Subdomain &sub,
                                     const HelmholtzParams &params);
// Only the local Robin matrix; cheaper when the other two are not needed.
ComplexSparseMatrix assemble_subdomain_robin(const SimplicialMesh &mesh, const Subdomain &sub,
                                             const HelmholtzParams &params);

}  // namespace helmdd
