// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

/**
   @file Built-in model problem: structured quad/hex meshes of the unit
   square/cube, tensor-product Lagrange elements of arbitrary order, element
   stiffness matrices for -div(kappa grad u) = f, and assembly with homogeneous
   Dirichlet conditions eliminated.
*/

#pragma once

#include "ipaux/linalg.hpp"
#include "ipaux/relations.hpp"

#include <array>

namespace ipaux
{

enum class NodeFamily
{
    equispaced,
    gauss_lobatto
};

/// The fine-scale relation tables. Only interior faces are listed.
struct FineRelations
{
    Relation element_dof;
    Relation element_face;
    Relation face_dof;
    Relation element_element;
};

struct Mesh
{
    int dim = 2;
    int order = 1;
    NodeFamily nodes = NodeFamily::equispaced;
    std::array<Index, 3> cells{1, 1, 1};   ///< unused axes hold 1
    std::array<double, 3> cell_size{1.0, 1.0, 1.0};
    std::vector<double> node_1d;           ///< reference nodes on [0,1], order+1 of them

    Index n_elements = 0;
    Index n_dofs = 0;
    Index n_faces = 0;

    /// Relations over all dofs; element_dof rows in ascending (= tensor) order.
    FineRelations rel;
    std::vector<Index> boundary_dofs;

    /// Cell multi-index of an element.
    std::array<Index, 3> element_cell(Index e) const;
    /// Physical coordinates of a dof.
    std::array<double, 3> dof_coords(Index dof) const;
    /// Nodes per axis, order * cells + 1.
    Index nodes_per_axis(int axis) const { return order * cells[axis] + 1; }
};

Mesh build_mesh(int dim, std::array<Index, 3> cells, int order, NodeFamily nodes = NodeFamily::equispaced);
Mesh build_mesh(int dim, Index cells_per_axis, int order, NodeFamily nodes = NodeFamily::equispaced);

/// Piecewise-constant positive coefficient, one value per fine element.
struct CoefficientField
{
    std::vector<double> kappa;
};

CoefficientField constant_coefficient(const Mesh& mesh, double value);

/**
   Checkerboard of pattern_cells^dim boxes over the unit square/cube; boxes
   with even index sum get 1, the others \a contrast. The pattern is fixed in
   physical space, so it does not change under refinement.
*/
CoefficientField checkerboard_coefficient(const Mesh& mesh, double contrast, Index pattern_cells);

/// Stiffness matrix of element \a e over all its dofs (rows of rel.element_dof).
DenseMat element_stiffness(const Mesh& mesh, const CoefficientField& coeff, Index e);

/// Load vector for f = 1 over all dofs of element \a e.
Vector element_load(const Mesh& mesh, Index e);

struct Discretization
{
    SparseMat A;        ///< free dofs only
    Vector D;           ///< diag(A)
    Vector W;           ///< l1 weights of A
    Vector rhs;         ///< f = 1
    /// Element matrices restricted to free dofs, in the order of rel.element_dof rows.
    std::vector<DenseMat> element_matrices;
    /// Fine relations renumbered to free dofs (faces/elements unchanged).
    FineRelations rel;
    std::vector<Index> free_to_dof;
    std::vector<Index> dof_to_free;  ///< -1 on Dirichlet dofs

    Index n_free() const { return static_cast<Index>(free_to_dof.size()); }
};

/// Assembles A and f and eliminates the Dirichlet dofs.
Discretization assemble(const Mesh& mesh, const CoefficientField& coeff);

/**
   Weighted l1 diagonal: w_i = sum_j |a_ij| sqrt(a_ii / a_jj). Satisfies
   v^T A v <= v^T W v for symmetric A with positive diagonal.
*/
Vector l1_weights(const SparseMat& a);

/// Gauss-Legendre points and weights on [0,1].
void gauss_legendre(int n, std::vector<double>& points, std::vector<double>& weights);

/// Gauss-Lobatto points on [0,1] (n >= 2 points, endpoints included).
std::vector<double> gauss_lobatto_points(int n);

} // namespace ipaux
