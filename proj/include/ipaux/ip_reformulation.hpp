// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

/**
   @file The interior-penalty (IP) reformulation with interface unknowns.

   Every dof is cloned once per Element containing it (edofs) and once per
   Face containing it (bdofs). On each Element T the local quadratic form is

       v_e^T A_T v_e + (1/delta) sum_{F in dT} (v_e|F - v_b|F)^T D_F (v_e|F - v_b|F)

   so Elements couple only through the bdofs, and the global IP matrix is an
   element-by-element assembly that accumulates only on bdof blocks.

   Adof numbering: all edofs Element by Element (interior dofs of the Element
   first, then those on Faces, ascending dof id within each group), followed
   by all bdofs Face by Face.
*/

#pragma once

#include "ipaux/agglomerate.hpp"
#include "ipaux/linalg.hpp"
#include "ipaux/mesh_fe.hpp"

namespace ipaux
{

struct AdofMap
{
    Index n_dofs = 0;
    Index n_edofs = 0;
    Index n_bdofs = 0;

    std::vector<std::vector<Index>> element_dofs;  ///< local edof order
    std::vector<Index> element_offset;             ///< adof id of the first edof
    std::vector<Index> element_n_interior;         ///< leading "i" edofs per Element
    std::vector<std::vector<Index>> face_dofs;     ///< ascending
    std::vector<Index> face_offset;                ///< adof id of the first bdof

    std::vector<Index> adof_dof;    ///< back-map to the cloned dof
    std::vector<Index> adof_owner;  ///< Element id (edof) or Face id (bdof)
    Relation dof_adof;              ///< the clone sets J_l
    std::vector<char> dof_on_face;  ///< "r" dofs (related to some bdof)
    Index kappa = 0;                ///< max_l |J_l|

    Index n_adofs() const { return n_edofs + n_bdofs; }
    bool is_edof(Index a) const { return a < n_edofs; }
    /// "i" edof: clone of a dof on no Face.
    bool is_interior_edof(Index a) const { return a < n_edofs && !dof_on_face[adof_dof[a]]; }
};

AdofMap build_adof_map(const AggTopology& topo);

/// Dense local matrix on global ids \a ids; the first \a n_e ids are edofs.
struct LocalBlockMatrix
{
    DenseMat matrix;
    std::vector<Index> ids;
    Index n_e = 0;

    Index n_b() const { return static_cast<Index>(ids.size()) - n_e; }
};

/**
   A global system on [e | b] unknowns given element by element. Unknowns
   0..n_e-1 are owned by exactly one local matrix (they are never accumulated);
   n_e..n_e+n_b-1 are shared. Fits the fine IP system, its spectral coarse
   version, and (with n_e = 0) assembled Schur complements.
*/
struct ElementSystem
{
    Index n_e = 0;
    Index n_b = 0;
    std::vector<LocalBlockMatrix> locals;

    Index size() const { return n_e + n_b; }
};

/// Sum of the local matrices; throws if some unknown is referenced by no local.
SparseMat assemble_ip(const ElementSystem& sys);

/// Agglomerate stiffness A_T in the local edof order of Element T.
DenseMat agglomerate_matrix(const Discretization& disc, const AggTopology& topo, const AdofMap& adofs, Index T);

/**
   Local IP matrix of Element T from A_T (local edof order). The penalty uses
   the entries of \a penalty_diag (indexed by dof) restricted to each Face.
   Ordered as [edofs of T | bdofs of each Face of T, Faces ascending].
*/
LocalBlockMatrix build_local_ip(const DenseMat& A_T, const Vector& penalty_diag, const AggTopology& topo,
                                const AdofMap& adofs, Index T, double delta);

/// Averaging map from adofs to dofs, (Pi v)_l = mean of v over J_l.
SparseMat build_pi(const AdofMap& adofs);

/// Injection of dofs into adofs copying each dof value to all of its clones.
SparseMat build_injection(const AdofMap& adofs);

enum class PenaltyDiagonal
{
    diagonal,   ///< diagonal of the global A
    l1_weights  ///< weighted l1 diagonal of A
};

struct IpOptions
{
    double delta = 1.0;
    PenaltyDiagonal penalty = PenaltyDiagonal::diagonal;
};

struct IpSystem
{
    double delta = 1.0;
    Vector penalty_diag;
    std::vector<DenseMat> element_matrices;  ///< A_T, local edof order
    ElementSystem system;                    ///< local IP matrices
    SparseMat A;                             ///< assembled IP matrix
    SparseMat Pi;
    SparseMat I;
};

IpSystem build_ip_system(const Discretization& disc, const AggTopology& topo, const AdofMap& adofs,
                         const IpOptions& opts = {});

/// max_T lambda_max(D_T^{-1/2} A_T D_T^{-1/2}) with D_T the penalty diagonal on T.
double measure_lambda(const IpSystem& ip, const AdofMap& adofs);

} // namespace ipaux
