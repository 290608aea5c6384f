// SPDX-License-Identifier: Apache-2.0

#include "helmdd/decomposition.hpp"

#include <algorithm>
#include <ostream>

#include <json.hpp>

namespace helmdd
{

Index Subdomain::local_index(Index global) const
{
  const auto it = std::lower_bound(dofs.begin(), dofs.end(), global);
  if (it == dofs.end() || *it != global)
  {
    return -1;
  }
  return static_cast<Index>(it - dofs.begin());
}

namespace
{

Subdomain make_subdomain(const SimplicialMesh &mesh, Index index, const GridIndex &lo,
                         const GridIndex &hi)
{
  const int dim = mesh.dim();
  const int m = mesh.intervals_per_edge();
  Subdomain sub;
  sub.index = index;
  sub.cell_lo = lo;
  sub.cell_hi = hi;

  const int spc = mesh.simplices_per_cell();
  const int zlo = dim == 3 ? lo[2] : 0;
  const int zhi = dim == 3 ? hi[2] : 1;
  for (int l = zlo; l < zhi; l++)
  {
    for (int j = lo[1]; j < hi[1]; j++)
    {
      for (int i = lo[0]; i < hi[0]; i++)
      {
        const Index c = mesh.cell_id({i, j, l});
        for (int s = 0; s < spc; s++)
        {
          sub.elements.push_back(c * spc + s);
        }
      }
    }
  }

  const int vzhi = dim == 3 ? hi[2] : 0;
  for (int l = zlo; l <= vzhi; l++)
  {
    for (int j = lo[1]; j <= hi[1]; j++)
    {
      for (int i = lo[0]; i <= hi[0]; i++)
      {
        const GridIndex g{i, j, l};
        const Index local = static_cast<Index>(sub.dofs.size());
        sub.dofs.push_back(mesh.vertex_id(g));
        bool on_box = false;
        for (int a = 0; a < dim; a++)
        {
          on_box = on_box || g[a] == lo[a] || g[a] == hi[a];
        }
        if (mesh.on_physical_boundary(sub.dofs.back()))
        {
          sub.physical_boundary_dofs.push_back(local);
        }
        else if (on_box)
        {
          sub.interface_dofs.push_back(local);
        }
        else
        {
          sub.interior_dofs.push_back(local);
        }
      }
    }
  }

  for (const Index s : sub.elements)
  {
    const Index *vs = mesh.simplex(s);
    for (int drop = 0; drop <= dim; drop++)
    {
      Facet facet{0, 0, 0};
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
        if (c0 != lo[axis] && c0 != hi[axis])
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
          if (c0 == 0 || c0 == m)
          {
            sub.physical_facets.push_back(facet);
          }
          else
          {
            sub.interface_facets.push_back(facet);
          }
          break;
        }
      }
    }
  }
  return sub;
}

}  // namespace

Decomposition build_decomposition(const SimplicialMesh &mesh, int subdomains_1d,
                                  int overlap_layers, PartitionOfUnity pou)
{
  const int dim = mesh.dim();
  const int m = mesh.intervals_per_edge();
  if (subdomains_1d < 1)
  {
    throw ArgumentError("need at least one subdomain per dimension");
  }
  if (overlap_layers < 1)
  {
    throw ArgumentError("overlap_layers must be at least 1");
  }
  if (subdomains_1d > m)
  {
    throw ArgumentError("more subdomains than mesh cells per dimension");
  }
  if (m % subdomains_1d != 0)
  {
    throw ArgumentError("mesh intervals (" + std::to_string(m) +
                        ") not divisible by subdomains per dimension (" +
                        std::to_string(subdomains_1d) + ")");
  }

  Decomposition dd;
  dd.dim = dim;
  dd.subdomains_1d = subdomains_1d;
  dd.overlap_layers = overlap_layers;
  dd.num_global_dofs = mesh.num_vertices();

  const int width = m / subdomains_1d;
  const int nz = dim == 3 ? subdomains_1d : 1;
  for (int bz = 0; bz < nz; bz++)
  {
    for (int by = 0; by < subdomains_1d; by++)
    {
      for (int bx = 0; bx < subdomains_1d; bx++)
      {
        const GridIndex box{bx, by, bz};
        GridIndex lo{0, 0, 0};
        GridIndex hi{0, 0, 0};
        for (int a = 0; a < dim; a++)
        {
          lo[a] = std::max(0, box[a] * width - overlap_layers);
          hi[a] = std::min(m, (box[a] + 1) * width + overlap_layers);
        }
        dd.subdomains.push_back(make_subdomain(mesh, dd.num_subdomains(), lo, hi));
        for (int a = 0; a < dim; a++)
        {
          dd.subdomains.back().core_lo[a] = box[a] * width;
          dd.subdomains.back().core_hi[a] = (box[a] + 1) * width;
        }
      }
    }
  }

  std::vector<int> multiplicity(static_cast<std::size_t>(mesh.num_vertices()), 0);
  for (const auto &sub : dd.subdomains)
  {
    for (const Index g : sub.dofs)
    {
      multiplicity[static_cast<std::size_t>(g)]++;
    }
  }
  dd.pou = pou;
  switch (pou)
  {
    case PartitionOfUnity::multiplicity:
      for (const auto &sub : dd.subdomains)
      {
        std::vector<double> w(sub.dofs.size());
        for (std::size_t l = 0; l < sub.dofs.size(); l++)
        {
          w[l] = 1.0 / multiplicity[static_cast<std::size_t>(sub.dofs[l])];
        }
        dd.pou_weights.push_back(std::move(w));
      }
      break;
    case PartitionOfUnity::ramp:
    {
      // Unnormalized ramp: 1 - (grid distance outside the core box) / overlap.
      std::vector<double> total(static_cast<std::size_t>(mesh.num_vertices()), 0.0);
      for (const auto &sub : dd.subdomains)
      {
        std::vector<double> w(sub.dofs.size());
        for (std::size_t l = 0; l < sub.dofs.size(); l++)
        {
          const GridIndex g = mesh.grid_index(sub.dofs[l]);
          int distance = 0;
          for (int a = 0; a < dim; a++)
          {
            distance = std::max({distance, sub.core_lo[a] - g[a], g[a] - sub.core_hi[a]});
          }
          w[l] = 1.0 - static_cast<double>(distance) / overlap_layers;
          total[static_cast<std::size_t>(sub.dofs[l])] += w[l];
        }
        dd.pou_weights.push_back(std::move(w));
      }
      for (std::size_t j = 0; j < dd.subdomains.size(); j++)
      {
        const auto &sub = dd.subdomains[j];
        for (std::size_t l = 0; l < sub.dofs.size(); l++)
        {
          dd.pou_weights[j][l] /= total[static_cast<std::size_t>(sub.dofs[l])];
        }
      }
      break;
    }
  }
  return dd;
}

ComplexVector restrict_to(const Subdomain &sub, const ComplexVector &v)
{
  ComplexVector local(sub.size());
  for (std::size_t l = 0; l < sub.dofs.size(); l++)
  {
    const Index g = sub.dofs[l];
    if (g >= v.size())
    {
      throw ArgumentError("restrict: global vector too short for subdomain");
    }
    local[static_cast<Index>(l)] = v[g];
  }
  return local;
}

void prolongate_weighted(const Subdomain &sub, std::span<const double> weights,
                         const ComplexVector &w, ComplexVector &accumulator)
{
  if (w.size() != sub.size() || static_cast<Index>(weights.size()) != sub.size())
  {
    throw ArgumentError("prolongate: local vector size does not match subdomain");
  }
  for (std::size_t l = 0; l < sub.dofs.size(); l++)
  {
    const Index g = sub.dofs[l];
    if (g >= accumulator.size())
    {
      throw ArgumentError("prolongate: accumulator too short for subdomain");
    }
    accumulator[g] += weights[l] * w[static_cast<Index>(l)];
  }
}

void prolongate_weighted(const Decomposition &dd, Index j, const ComplexVector &w,
                         ComplexVector &accumulator)
{
  const auto k = static_cast<std::size_t>(j);
  prolongate_weighted(dd.subdomains.at(k), dd.pou_weights.at(k), w, accumulator);
}

void write_decomposition_json(std::ostream &os, const Decomposition &dd)
{
  nlohmann::json doc;
  doc["dim"] = dd.dim;
  doc["subdomains_per_dimension"] = dd.subdomains_1d;
  doc["num_subdomains"] = dd.num_subdomains();
  doc["overlap_layers"] = dd.overlap_layers;
  doc["num_global_dofs"] = dd.num_global_dofs;

  std::vector<int> multiplicity(static_cast<std::size_t>(dd.num_global_dofs), 0);
  Index total_local = 0;
  for (const auto &sub : dd.subdomains)
  {
    total_local += sub.size();
    for (const Index g : sub.dofs)
    {
      multiplicity[static_cast<std::size_t>(g)]++;
    }
    nlohmann::json s;
    s["index"] = sub.index;
    s["dofs"] = sub.size();
    s["interior"] = sub.interior_dofs.size();
    s["interface"] = sub.interface_dofs.size();
    s["physical_boundary"] = sub.physical_boundary_dofs.size();
    s["elements"] = sub.elements.size();
    s["cell_lo"] = std::vector<int>(sub.cell_lo.begin(), sub.cell_lo.begin() + dd.dim);
    s["cell_hi"] = std::vector<int>(sub.cell_hi.begin(), sub.cell_hi.begin() + dd.dim);
    doc["subdomains"].push_back(s);
  }
  const Index shared = std::count_if(multiplicity.begin(), multiplicity.end(),
                                     [](int c) { return c > 1; });
  doc["overlap"]["shared_dofs"] = shared;
  doc["overlap"]["max_multiplicity"] =
    multiplicity.empty() ? 0 : *std::max_element(multiplicity.begin(), multiplicity.end());
  doc["overlap"]["total_local_dofs"] = total_local;
  os << doc.dump(2) << '\n';
}

}  // namespace helmdd
