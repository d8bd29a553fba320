// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

#include "ipaux/agglomerate.hpp"
#include "ipaux/mesh_fe.hpp"
#include "ipaux/relations.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

using namespace ipaux;

namespace
{

using PairSet = std::set<std::pair<Index, Index>>;

PairSet pairs(const Relation& r)
{
    PairSet s;
    for (Index i = 0; i < r.n_rows(); ++i)
        for (Index j : r.row(i))
            s.emplace(i, j);
    return s;
}

Relation random_relation(Index rows, Index cols, double density, std::mt19937_64& rng)
{
    std::bernoulli_distribution coin(density);
    std::vector<std::vector<Index>> r(rows);
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            if (coin(rng))
                r[i].push_back(j);
    return Relation(rows, cols, std::move(r));
}

PairSet brute_product(const Relation& a, const Relation& b)
{
    PairSet s;
    for (auto [i, j] : pairs(a))
        for (auto [j2, k] : pairs(b))
            if (j == j2)
                s.emplace(i, k);
    return s;
}

} // namespace

TEST(Relations, RowsAreSortedAndDeduplicated)
{
    const Relation r(2, 5, {{4, 1, 1, 3}, {}});
    ASSERT_EQ(r.row_size(0), 3);
    EXPECT_EQ(r.row(0)[0], 1);
    EXPECT_EQ(r.row(0)[2], 4);
    EXPECT_EQ(r.nnz(), 3u);
    EXPECT_TRUE(r.contains(0, 3));
    EXPECT_FALSE(r.contains(1, 3));
    EXPECT_THROW(Relation(1, 2, {{2}}), Error);
}

TEST(Relations, TransposeSmall)
{
    const Relation r(2, 3, {{1}, {2}});
    const Relation t = transpose(r);
    EXPECT_EQ(t, Relation(3, 2, {{}, {0}, {1}}));
    EXPECT_EQ(transpose(Relation::identity(5)), Relation::identity(5));
}

TEST(Relations, TransposeTwiceIsIdentityOnRandom)
{
    std::mt19937_64 rng(1);
    const Relation r = random_relation(20, 30, 0.2, rng);
    EXPECT_EQ(transpose(transpose(r)), r);
    PairSet flipped;
    for (auto [i, j] : pairs(r))
        flipped.emplace(j, i);
    EXPECT_EQ(pairs(transpose(r)), flipped);
}

TEST(Relations, MultiplySmall)
{
    const Relation Ee(1, 2, {{0, 1}});
    const Relation ed(2, 3, {{0, 1}, {1, 2}});
    EXPECT_EQ(multiply(Ee, ed), Relation(1, 3, {{0, 1, 2}}));
    EXPECT_EQ(multiply(ed, Relation::identity(3)), ed);
}

TEST(Relations, MultiplyMatchesBruteForceAndIsAssociative)
{
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 5; ++trial)
    {
        const Relation a = random_relation(8, 10, 0.25, rng);
        const Relation b = random_relation(10, 12, 0.25, rng);
        const Relation c = random_relation(12, 6, 0.25, rng);
        EXPECT_EQ(pairs(multiply(a, b)), brute_product(a, b));
        EXPECT_EQ(multiply(multiply(a, b), c), multiply(a, multiply(b, c)));
    }
}

TEST(Relations, ElementDofOnQuadMeshMatchesUnion)
{
    const Mesh mesh = build_mesh(2, 2, 1);
    const Relation Ee(1, 4, {{0, 1, 2, 3}});
    const Relation Ed = multiply(Ee, mesh.rel.element_dof);
    std::set<Index> all;
    for (Index e = 0; e < 4; ++e)
        for (Index d : mesh.rel.element_dof.row(e))
            all.insert(d);
    EXPECT_EQ(static_cast<std::size_t>(Ed.row_size(0)), all.size());
}

TEST(Relations, PartitionSingleOwner)
{
    const auto p = partition_by_row_pattern(Relation(1, 4, {{0, 1, 2, 3}}));
    EXPECT_EQ(p.class_dof, Relation(1, 4, {{0, 1, 2, 3}}));
    EXPECT_EQ(p.entity_class, Relation(1, 1, {{0}}));
}

TEST(Relations, PartitionTwoOverlappingEntities)
{
    const auto p = partition_by_row_pattern(Relation(2, 5, {{0, 1, 2}, {2, 3, 4}}));
    EXPECT_EQ(p.class_dof, Relation(3, 5, {{0, 1}, {2}, {3, 4}}));
    EXPECT_EQ(p.entity_class, Relation(2, 3, {{0, 1}, {1, 2}}));
}

TEST(Relations, PartitionRejectsOrphanDof)
{
    EXPECT_THROW(partition_by_row_pattern(Relation(1, 3, {{0, 1}})), Error);
}

TEST(Relations, PartitionMatchesOwnerSetGroupingOnAgglomeratedMesh)
{
    const Mesh mesh = build_mesh(2, 4, 1);
    const AggTopology topo = build_topology(mesh.rel, partition_structured(mesh, {2, 2, 1}));
    const auto p = partition_by_row_pattern(topo.Element_dof);

    // oracle: group dofs by their owner set
    const Relation dof_Element = transpose(topo.Element_dof);
    std::map<std::vector<Index>, std::set<Index>> groups;
    for (Index d = 0; d < dof_Element.n_rows(); ++d)
    {
        const auto r = dof_Element.row(d);
        groups[std::vector<Index>(r.begin(), r.end())].insert(d);
    }
    ASSERT_EQ(static_cast<std::size_t>(p.class_dof.n_rows()), groups.size());
    std::set<std::set<Index>> expected, got;
    for (const auto& [owners, members] : groups)
        expected.insert(members);
    std::size_t total = 0;
    for (Index c = 0; c < p.class_dof.n_rows(); ++c)
    {
        const auto r = p.class_dof.row(c);
        got.emplace(r.begin(), r.end());
        total += r.size();
        // every member has the same owner set
        const auto o0 = dof_Element.row(r[0]);
        for (Index d : r)
        {
            const auto o = dof_Element.row(d);
            EXPECT_TRUE(std::equal(o.begin(), o.end(), o0.begin(), o0.end()));
        }
    }
    EXPECT_EQ(got, expected);
    EXPECT_EQ(total, static_cast<std::size_t>(mesh.n_dofs));
    // class ids follow the smallest member
    for (Index c = 1; c < p.class_dof.n_rows(); ++c)
        EXPECT_LT(p.class_dof.row(c - 1)[0], p.class_dof.row(c)[0]);
    EXPECT_EQ(partition_by_row_pattern(topo.Element_dof).class_dof, p.class_dof);
}
