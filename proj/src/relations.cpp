// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

#include "ipaux/relations.hpp"

#include <algorithm>
#include <map>

namespace ipaux
{

Relation::Relation(Index n_rows, Index n_cols, std::vector<std::vector<Index>> rows)
    : n_rows_(n_rows), n_cols_(n_cols)
{
    require(n_rows >= 0 && n_cols >= 0, "Relation: negative dimension");
    require(static_cast<Index>(rows.size()) == n_rows, "Relation: row count mismatch");
    offsets_.assign(1, 0);
    offsets_.reserve(n_rows + 1);
    for (auto& r : rows)
    {
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        for (Index c : r)
            require(c >= 0 && c < n_cols, "Relation: column id out of range");
        cols_.insert(cols_.end(), r.begin(), r.end());
        offsets_.push_back(static_cast<Index>(cols_.size()));
    }
}

Relation Relation::identity(Index n)
{
    std::vector<std::vector<Index>> rows(n);
    for (Index i = 0; i < n; ++i)
        rows[i] = {i};
    return Relation(n, n, std::move(rows));
}

bool Relation::contains(Index i, Index j) const
{
    const auto r = row(i);
    return std::binary_search(r.begin(), r.end(), j);
}

std::vector<std::vector<Index>> Relation::to_rows() const
{
    std::vector<std::vector<Index>> rows(n_rows_);
    for (Index i = 0; i < n_rows_; ++i)
        rows[i].assign(row(i).begin(), row(i).end());
    return rows;
}

Relation transpose(const Relation& r)
{
    std::vector<std::vector<Index>> rows(r.n_cols());
    for (Index i = 0; i < r.n_rows(); ++i)
        for (Index j : r.row(i))
            rows[j].push_back(i);
    return Relation(r.n_cols(), r.n_rows(), std::move(rows));
}

Relation multiply(const Relation& a, const Relation& b)
{
    require(a.n_cols() == b.n_rows(), "multiply: dimension mismatch");
    std::vector<std::vector<Index>> rows(a.n_rows());
    std::vector<char> seen(b.n_cols(), 0);
    for (Index i = 0; i < a.n_rows(); ++i)
    {
        auto& out = rows[i];
        for (Index j : a.row(i))
            for (Index k : b.row(j))
                if (!seen[k])
                {
                    seen[k] = 1;
                    out.push_back(k);
                }
        for (Index k : out)
            seen[k] = 0;
    }
    return Relation(a.n_rows(), b.n_cols(), std::move(rows));
}

RowPatternPartition partition_by_row_pattern(const Relation& entity_dof)
{
    const Relation dof_entity = transpose(entity_dof);
    std::map<std::vector<Index>, Index> class_of_pattern;
    std::vector<std::vector<Index>> class_members;
    std::vector<Index> dof_class(dof_entity.n_rows());
    for (Index d = 0; d < dof_entity.n_rows(); ++d)
    {
        const auto owners = dof_entity.row(d);
        require(!owners.empty(), "partition_by_row_pattern: dof " + std::to_string(d) + " has no owner");
        std::vector<Index> key(owners.begin(), owners.end());
        auto [it, inserted] = class_of_pattern.try_emplace(std::move(key), static_cast<Index>(class_members.size()));
        if (inserted)
            class_members.emplace_back();
        class_members[it->second].push_back(d);
        dof_class[d] = it->second;
    }
    const Index n_classes = static_cast<Index>(class_members.size());

    std::vector<std::vector<Index>> entity_classes(entity_dof.n_rows());
    for (Index e = 0; e < entity_dof.n_rows(); ++e)
        for (Index d : entity_dof.row(e))
            entity_classes[e].push_back(dof_class[d]);

    return {Relation(n_classes, entity_dof.n_cols(), std::move(class_members)),
            Relation(entity_dof.n_rows(), n_classes, std::move(entity_classes))};
}

} // namespace ipaux
