// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

/**
   @file Spectral coarse auxiliary space on top of the IP reformulation.

   Each Element keeps the lowest eigenvectors of A_T q = lambda D_T q
   (D_T = diag(A_T)); each Face keeps an l2-orthonormal basis of the traces of
   the kept vectors from its two Elements. The prolongation P is block diagonal
   over Elements and Faces, and the coarse IP matrix is assembled from the
   local products P_T^T A_T P_T.
*/

#pragma once

#include "ipaux/ip_reformulation.hpp"
#include "ipaux/linalg.hpp"

namespace ipaux
{

struct ElementBasis
{
    Vector values;    ///< all generalized eigenvalues, ascending
    DenseMat vectors; ///< kept eigenvectors (columns), D_T-orthonormal
};

/**
   Generalized eigenpairs of (A_T, diag(A_T)). Keeps the smallest m with
   lambda_m <= theta * lambda_max, clamped to 1 <= m < n (m = 1 when n = 1).
   A positive \a fixed_count overrides the theta rule (still clamped).
*/
ElementBasis element_eigenbasis(const DenseMat& A_T, double theta, Index fixed_count = 0);

/// Same with an explicit positive diagonal \a d in place of diag(A_T).
ElementBasis element_eigenbasis(const DenseMat& A_T, const Vector& d, double theta, Index fixed_count = 0);

/**
   Orthonormal basis of the column span of \a traces. Singular values below
   svd_rel_tol * sigma_max are dropped; an all-zero input gives 0 columns.
*/
DenseMat face_trace_basis(const DenseMat& traces, double svd_rel_tol = 1e-10);

/// True when the columns of \a q are linearly independent (relative tolerance on singular values).
bool full_column_rank(const DenseMat& q, double rel_tol = 1e-10);

struct CoarseBases
{
    std::vector<DenseMat> element;  ///< n_e(T) x m_T, rows in the local edof order of T
    std::vector<DenseMat> face;     ///< |F| x m_F, rows in ascending dof order
    std::vector<Vector> element_values;
};

struct SpectralOptions
{
    double theta = 0.05;
    Index fixed_count = 0;  ///< > 0: keep exactly this many per Element
    double svd_rel_tol = 1e-10;
};

/// Element eigenbases from the agglomerate matrices A_T and Face bases from their traces.
CoarseBases spectral_bases(const IpSystem& ip, const AdofMap& adofs, const AggTopology& topo,
                           const SpectralOptions& opts = {});

struct CoarseSpace
{
    ElementSystem system;  ///< local coarse matrices P_T^T A_T P_T, [Edofs | Bdofs]
    SparseMat P;           ///< adofs -> Adofs
    SparseMat Pi_H;        ///< Pi_h P
    SparseMat A_H;
    std::vector<Index> element_offset;  ///< first Edof of each Element
    std::vector<Index> face_offset;     ///< first Bdof of each Face (absolute Adof id)
    std::vector<Index> m_element;
    std::vector<Index> m_face;
    Index n_Edofs = 0;
    Index n_Bdofs = 0;

    Index n_Adofs() const { return n_Edofs + n_Bdofs; }
};

/**
   Assembles the coarse space from given bases. Every Element needs at least
   one vector; Faces may be empty. Throws if a block is rank deficient.
*/
CoarseSpace build_coarse(const IpSystem& ip, const AdofMap& adofs, const AggTopology& topo,
                         const CoarseBases& bases);

} // namespace ipaux
