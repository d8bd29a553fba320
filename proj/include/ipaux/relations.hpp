// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

/**
   @file Boolean relation tables between entity classes (element_dof,
   Element_face, mis_dof, ...) and the algebra used to derive agglomerate
   topology from them.

   Rows are stored sorted and deduplicated, so two relations describing the
   same pairs compare equal.
*/

#pragma once

#include "ipaux/linalg.hpp"

#include <span>
#include <vector>

namespace ipaux
{

class Relation
{
public:
    Relation() = default;

    /// Rows are sorted and deduplicated; throws if an id is out of range.
    Relation(Index n_rows, Index n_cols, std::vector<std::vector<Index>> rows);

    static Relation identity(Index n);

    Index n_rows() const { return n_rows_; }
    Index n_cols() const { return n_cols_; }
    std::size_t nnz() const { return cols_.size(); }

    std::span<const Index> row(Index i) const
    {
        return {cols_.data() + offsets_[i], cols_.data() + offsets_[i + 1]};
    }
    Index row_size(Index i) const { return offsets_[i + 1] - offsets_[i]; }
    bool contains(Index i, Index j) const;

    std::vector<std::vector<Index>> to_rows() const;

    friend bool operator==(const Relation& a, const Relation& b) = default;

private:
    Index n_rows_ = 0;
    Index n_cols_ = 0;
    std::vector<Index> offsets_{0};
    std::vector<Index> cols_;
};

Relation transpose(const Relation& r);

/// Boolean product: (i,k) iff some j has (i,j) in a and (j,k) in b.
Relation multiply(const Relation& a, const Relation& b);

struct RowPatternPartition
{
    Relation class_dof;     ///< equivalence class -> member dofs
    Relation entity_class;  ///< entity -> classes it contains
};

/**
   Groups the columns ("dofs") of \a entity_dof into classes of dofs owned by
   identical sets of entities. This is the intersection procedure producing
   Faces (from Element_face) and minimal intersection sets (from Element_dof).

   Class ids follow the smallest member dof. Throws if a dof has no owner.
*/
RowPatternPartition partition_by_row_pattern(const Relation& entity_dof);

} // namespace ipaux
