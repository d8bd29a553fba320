// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

/**
   @file Element-based algebraic multigrid (AMGe) with spectral coarse spaces.

   Each level keeps element matrices. Elements are optionally merged, dofs are
   grouped into minimal intersection sets (MISes, dofs owned by the same set of
   Elements), local generalized eigenproblems select smooth vectors, and an SVD
   of their MIS restrictions gives the block-diagonal prolongation. Coarse
   element matrices are local RAPs, so the hierarchy recurses on the same data.
*/

#pragma once

#include "ipaux/ip_reformulation.hpp"
#include "ipaux/linalg.hpp"
#include "ipaux/relations.hpp"
#include "ipaux/smoothers.hpp"

#include <memory>
#include <optional>
#include <string>

namespace ipaux
{

/// Element-by-element description of an SPD matrix.
struct AmgeInput
{
    Index n_dofs = 0;
    Relation element_dof;                   ///< rows sorted ascending
    std::vector<DenseMat> element_matrices; ///< in the order of element_dof rows
    std::optional<Relation> Element_element; ///< first-level agglomerates; default from options
};

/// Builds AmgeInput from an [e | b] element system (local matrices reordered to ascending ids).
AmgeInput amge_input_from(const ElementSystem& sys);

enum class AmgeAgglomeration
{
    fixed,    ///< keep Elements; spectral-only coarsening
    pairwise  ///< greedily pair neighbouring Elements on every level
};

struct AmgeOptions
{
    double theta_s = 0.05;
    Index fixed_eigenvectors = 0;  ///< > 0 overrides theta_s
    double svd_rel_tol = 1e-10;
    Index min_svd_drop = 0;
    int max_levels = 12;
    Index coarse_size_target = 100;
    int nu_s = 2;
    AmgeAgglomeration agglomeration = AmgeAgglomeration::fixed;
};

/// Greedy pairing of neighbouring elements in id order; unpaired elements stay alone.
Relation pair_elements(const Relation& element_element);

struct AmgeLevel
{
    SparseMat A;
    Relation element_dof;
    std::vector<DenseMat> element_matrices;
    SparseMat P;  ///< to the next level; empty on the coarsest
    Index n_mis = 0;
    std::unique_ptr<PolySmoother> smoother;
};

class Hierarchy : public LinearOperator
{
public:
    Index size() const override { return static_cast<Index>(levels_.front().A.rows()); }

    /// One symmetric V-cycle from a zero initial guess.
    void apply(const Vector& r, Vector& x) const override;

    std::size_t n_levels() const { return levels_.size(); }
    const AmgeLevel& level(std::size_t l) const { return levels_[l]; }

    /// nnz of every level matrix, level 0 first.
    std::vector<std::size_t> nnz_per_level() const;

    /// Plain-text per-level dims, element counts, MIS counts and nnz.
    std::string summary() const;

    /// Why the coarsening stopped.
    const std::string& stop_reason() const { return stop_reason_; }

private:
    friend Hierarchy build_hierarchy(AmgeInput input, const AmgeOptions& opts);
    void cycle(std::size_t l, const Vector& r, Vector& x) const;

    std::vector<AmgeLevel> levels_;
    std::unique_ptr<LinearOperator> coarse_solver_;
    std::string stop_reason_;
};

Hierarchy build_hierarchy(AmgeInput input, const AmgeOptions& opts = {});

} // namespace ipaux
