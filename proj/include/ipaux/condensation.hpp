// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

/**
   @file Static condensation of an element-by-element [e | b] system.

   The edofs are never shared between Elements, so A_ee is block diagonal and
   the Schur complement S = A_bb - A_be A_ee^{-1} A_eb assembles from the dense
   local complements S_T. Works unchanged on the fine IP system and on its
   spectral coarse version.
*/

#pragma once

#include "ipaux/ip_reformulation.hpp"
#include "ipaux/linalg.hpp"

namespace ipaux
{

/// S_T = A_bb - A_be A_ee^{-1} A_eb for a local matrix whose first n_e rows are edofs.
DenseMat local_schur(const DenseMat& local, Index n_e);

class SchurSystem
{
public:
    explicit SchurSystem(const ElementSystem& sys);

    Index n_e() const { return n_e_; }
    Index n_b() const { return n_b_; }

    /// Assembled Schur complement on the bdofs (indices shifted to 0..n_b-1).
    const SparseMat& S() const { return s_; }

    /// The local complements as an element system on bdofs only (n_e = 0).
    const ElementSystem& schur_elements() const { return schur_elements_; }

    /**
       Action of the block-factorized preconditioner for the full system:
       eliminate edofs, apply \a schur_solver on bdofs, back-substitute.
       With an exact schur_solver this is the exact inverse.
    */
    void apply(const Vector& r, Vector& x, const LinearOperator& schur_solver) const;

    /// Number of block-diagonal A_ee solves performed so far.
    std::size_t ee_solve_count() const { return ee_solves_; }

private:
    struct Block
    {
        std::vector<Index> e_ids;
        std::vector<Index> b_ids;  ///< shifted to 0..n_b-1
        DenseCholesky ee;
        DenseMat eb;
    };

    void solve_ee(const Vector& rhs_e, Vector& out_e) const;

    Index n_e_ = 0;
    Index n_b_ = 0;
    std::vector<Block> blocks_;
    SparseMat s_;
    ElementSystem schur_elements_;
    mutable std::size_t ee_solves_ = 0;
};

/// B_sc^{-1} as a LinearOperator on the full [e | b] space.
class CondensedSolver : public LinearOperator
{
public:
    CondensedSolver(const SchurSystem& schur, std::shared_ptr<const LinearOperator> schur_solver)
        : schur_(schur), schur_solver_(std::move(schur_solver))
    {
        require(schur_solver_ && schur_solver_->size() == schur.n_b(), "CondensedSolver: Schur solver size mismatch");
    }
    Index size() const override { return schur_.n_e() + schur_.n_b(); }
    void apply(const Vector& r, Vector& x) const override { schur_.apply(r, x, *schur_solver_); }

private:
    const SchurSystem& schur_;
    std::shared_ptr<const LinearOperator> schur_solver_;
};

} // namespace ipaux
