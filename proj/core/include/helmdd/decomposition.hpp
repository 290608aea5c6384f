// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <iosfwd>
#include <span>
#include <vector>

#include "helmdd/mesh.hpp"
#include "helmdd/types.hpp"

namespace helmdd
{

// Facet as vertex ids; the first mesh.dim() entries are used.
using Facet = std::array<Index, 3>;

struct Subdomain
{
  Index index = 0;
  // Non-overlapping cell box [core_lo, core_hi) and the box [cell_lo, cell_hi)
  // after overlap extension.
  GridIndex core_lo{0, 0, 0};
  GridIndex core_hi{0, 0, 0};
  GridIndex cell_lo{0, 0, 0};
  GridIndex cell_hi{0, 0, 0};
  // Fine-mesh simplices (whole cells).
  std::vector<Index> elements;
  // Global vertex ids in ascending order; position = local index.
  std::vector<Index> dofs;
  // Local indices. interior + interface + physical_boundary partition [0, n_j).
  std::vector<Index> interior_dofs;
  std::vector<Index> interface_dofs;
  std::vector<Index> physical_boundary_dofs;
  // Boundary facets of the subdomain, split into those on the physical boundary
  // and those on the interface (∂Ω_j minus ∂Ω).
  std::vector<Facet> physical_facets;
  std::vector<Facet> interface_facets;

  Index size() const noexcept { return static_cast<Index>(dofs.size()); }
  // Local index of a global vertex, -1 if absent.
  Index local_index(Index global) const;
};

enum class PartitionOfUnity
{
  multiplicity,  // 1 / number of subdomains containing the dof
  // 1 on the non-overlapping box, decaying linearly to 0 across the overlap
  // layers, then normalized to sum to 1; vanishes on the subdomain interface.
  ramp,
};

struct Decomposition
{
  int dim = 0;
  int subdomains_1d = 1;
  int overlap_layers = 0;
  PartitionOfUnity pou = PartitionOfUnity::multiplicity;
  Index num_global_dofs = 0;
  std::vector<Subdomain> subdomains;
  // pou_weights[j][l]: diagonal of D_j at local dof l.
  std::vector<std::vector<double>> pou_weights;

  Index num_subdomains() const noexcept { return static_cast<Index>(subdomains.size()); }
};

// Regular box decomposition of a structured mesh into subdomains_1d^dim boxes of
// whole cells, each extended by overlap_layers cells per side (clipped at the
// physical boundary).
Decomposition build_decomposition(const SimplicialMesh &mesh, int subdomains_1d,
                                  int overlap_layers = 2,
                                  PartitionOfUnity pou = PartitionOfUnity::multiplicity);

// R_j v
ComplexVector restrict_to(const Subdomain &sub, const ComplexVector &v);
// accumulator += R_j^T D_j w
void prolongate_weighted(const Subdomain &sub, std::span<const double> weights,
                         const ComplexVector &w, ComplexVector &accumulator);
void prolongate_weighted(const Decomposition &dd, Index j, const ComplexVector &w,
                         ComplexVector &accumulator);

// Debug summary: per-subdomain dof/interface counts and overlap statistics.
void write_decomposition_json(std::ostream &os, const Decomposition &dd);

}  // namespace helmdd
