// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

#include "ipaux/agglomerate.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace ipaux
{

namespace
{

// BFS order of the vertices in `members` (restricted subgraph), starting at
// `start`; unreachable vertices are appended by restarting at the smallest.
std::vector<Index> bfs_order(const Relation& graph, const std::vector<Index>& members,
                             const std::vector<char>& in_set, Index start)
{
    std::vector<char> seen(graph.n_rows(), 0);
    std::vector<Index> order;
    order.reserve(members.size());
    auto run = [&](Index s) {
        std::deque<Index> q{s};
        seen[s] = 1;
        while (!q.empty())
        {
            const Index v = q.front();
            q.pop_front();
            order.push_back(v);
            for (Index w : graph.row(v))
                if (in_set[w] && !seen[w])
                {
                    seen[w] = 1;
                    q.push_back(w);
                }
        }
    };
    run(start);
    for (Index v : members)
        if (!seen[v])
            run(v);
    return order;
}

void bisect(const Relation& graph, std::vector<Index> members, Index k, std::vector<char>& in_set,
            std::vector<std::vector<Index>>& parts)
{
    if (k <= 1 || members.size() <= 1)
    {
        parts.push_back(std::move(members));
        return;
    }
    std::sort(members.begin(), members.end());
    for (Index v : members)
        in_set[v] = 1;
    // pseudo-peripheral start: two sweeps from the smallest id
    Index start = bfs_order(graph, members, in_set, members.front()).back();
    start = bfs_order(graph, members, in_set, start).back();
    const std::vector<Index> order = bfs_order(graph, members, in_set, start);
    for (Index v : members)
        in_set[v] = 0;

    const Index k1 = k / 2;
    const auto n1 = static_cast<std::size_t>(std::llround(static_cast<double>(members.size()) * k1 / k));
    std::vector<Index> first(order.begin(), order.begin() + std::max<std::size_t>(1, n1));
    std::vector<Index> second(order.begin() + first.size(), order.end());
    bisect(graph, std::move(first), k1, in_set, parts);
    bisect(graph, std::move(second), k - k1, in_set, parts);
}

std::vector<std::vector<Index>> components(const Relation& graph, const std::vector<Index>& members)
{
    std::vector<char> in_set(graph.n_rows(), 0);
    for (Index v : members)
        in_set[v] = 1;
    std::vector<char> seen(graph.n_rows(), 0);
    std::vector<std::vector<Index>> out;
    for (Index s : members)
    {
        if (seen[s])
            continue;
        std::vector<Index> comp;
        std::deque<Index> q{s};
        seen[s] = 1;
        while (!q.empty())
        {
            const Index v = q.front();
            q.pop_front();
            comp.push_back(v);
            for (Index w : graph.row(v))
                if (in_set[w] && !seen[w])
                {
                    seen[w] = 1;
                    q.push_back(w);
                }
        }
        out.push_back(std::move(comp));
    }
    return out;
}

} // namespace

Relation partition_structured(const Mesh& mesh, std::array<Index, 3> blocks)
{
    std::array<Index, 3> per{1, 1, 1};
    std::array<Index, 3> nb{1, 1, 1};
    for (int d = 0; d < mesh.dim; ++d)
    {
        require(blocks[d] >= 1 && mesh.cells[d] % blocks[d] == 0,
                "partition_structured: " + std::to_string(blocks[d]) + " blocks do not divide " +
                    std::to_string(mesh.cells[d]) + " cells");
        per[d] = mesh.cells[d] / blocks[d];
        nb[d] = blocks[d];
    }
    std::vector<std::vector<Index>> rows(nb[0] * nb[1] * nb[2]);
    for (Index e = 0; e < mesh.n_elements; ++e)
    {
        const auto c = mesh.element_cell(e);
        const Index agg = c[0] / per[0] + nb[0] * (c[1] / per[1] + nb[1] * (c[2] / per[2]));
        rows[agg].push_back(e);
    }
    const auto n_rows = static_cast<Index>(rows.size());
    return Relation(n_rows, mesh.n_elements, std::move(rows));
}

GraphPartition partition_graph(const Relation& element_element, Index n_parts)
{
    const Index n = element_element.n_rows();
    require(n_parts >= 1 && n_parts <= n, "partition_graph: n_parts must lie in [1, n_elements]");
    std::vector<Index> all(n);
    for (Index i = 0; i < n; ++i)
        all[i] = i;
    std::vector<std::vector<Index>> parts;
    std::vector<char> in_set(n, 0);
    bisect(element_element, all, n_parts, in_set, parts);

    std::vector<std::vector<Index>> connected;
    for (const auto& p : parts)
        for (auto& c : components(element_element, p))
            connected.push_back(std::move(c));
    // deterministic order: by smallest member
    for (auto& c : connected)
        std::sort(c.begin(), c.end());
    std::sort(connected.begin(), connected.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    GraphPartition gp;
    gp.requested = n_parts;
    gp.produced = static_cast<Index>(connected.size());
    gp.Element_element = Relation(gp.produced, n, std::move(connected));
    return gp;
}

bool parts_connected(const Relation& Element_element, const Relation& element_element)
{
    for (Index t = 0; t < Element_element.n_rows(); ++t)
    {
        const auto r = Element_element.row(t);
        if (r.empty())
            return false;
        if (components(element_element, std::vector<Index>(r.begin(), r.end())).size() != 1)
            return false;
    }
    return true;
}

AggTopology build_topology(const FineRelations& fine, const Relation& Element_element)
{
    const Index n_el = fine.element_dof.n_rows();
    require(Element_element.n_cols() == n_el, "build_topology: partition size mismatch");
    {
        std::vector<int> count(n_el, 0);
        for (Index t = 0; t < Element_element.n_rows(); ++t)
            for (Index e : Element_element.row(t))
                ++count[e];
        for (Index e = 0; e < n_el; ++e)
            require(count[e] == 1, "build_topology: partition does not cover element " + std::to_string(e) +
                                       " exactly once");
    }

    AggTopology topo;
    topo.n_Elements = Element_element.n_rows();
    topo.Element_element = Element_element;
    topo.Element_face = multiply(Element_element, fine.element_face);
    topo.Element_dof = multiply(Element_element, fine.element_dof);

    const Relation face_Element = transpose(topo.Element_face);
    std::vector<Index> cross;  // fine faces between two distinct Elements
    for (Index f = 0; f < face_Element.n_rows(); ++f)
        if (face_Element.row_size(f) == 2 && fine.face_dof.row_size(f) > 0)
            cross.push_back(f);

    std::vector<Index> local_of(face_Element.n_rows(), -1);
    for (Index i = 0; i < static_cast<Index>(cross.size()); ++i)
        local_of[cross[i]] = i;
    std::vector<std::vector<Index>> el_cross(topo.n_Elements);
    for (Index t = 0; t < topo.n_Elements; ++t)
        for (Index f : topo.Element_face.row(t))
            if (local_of[f] >= 0)
                el_cross[t].push_back(local_of[f]);
    const Relation Element_cross(topo.n_Elements, static_cast<Index>(cross.size()), std::move(el_cross));

    if (cross.empty())
    {
        topo.n_Faces = 0;
        topo.Face_face = Relation(0, fine.element_face.n_cols(), {});
        topo.Element_Face = Relation(topo.n_Elements, 0, std::vector<std::vector<Index>>(topo.n_Elements));
    }
    else
    {
        const RowPatternPartition part = partition_by_row_pattern(Element_cross);
        topo.n_Faces = part.class_dof.n_rows();
        std::vector<std::vector<Index>> face_face(topo.n_Faces);
        for (Index F = 0; F < topo.n_Faces; ++F)
            for (Index i : part.class_dof.row(F))
                face_face[F].push_back(cross[i]);
        topo.Face_face = Relation(topo.n_Faces, fine.element_face.n_cols(), std::move(face_face));
        topo.Element_Face = part.entity_class;
    }
    topo.Face_Element = transpose(topo.Element_Face);
    topo.Face_dof = multiply(topo.Face_face, fine.face_dof);
    for (Index F = 0; F < topo.n_Faces; ++F)
        require(topo.Face_Element.row_size(F) == 2, "build_topology: Face not shared by exactly two Elements");
    return topo;
}

} // namespace ipaux
