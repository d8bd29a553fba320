// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

/**
   @file Agglomeration of fine elements into Elements and the derived
   agglomerate topology: Faces (sets of fine faces between two Elements) and
   the Element/Face relations with dofs.
*/

#pragma once

#include "ipaux/mesh_fe.hpp"
#include "ipaux/relations.hpp"

namespace ipaux
{

struct AggTopology
{
    Index n_Elements = 0;
    Index n_Faces = 0;
    Relation Element_element;
    Relation Element_face;   ///< interior fine faces of each Element (incl. Face members)
    Relation Face_face;
    Relation Element_Face;
    Relation Face_Element;   ///< exactly two Elements per Face
    Relation Element_dof;
    Relation Face_dof;
};

/**
   Structured blocking: \a blocks[d] Elements along axis d, each covering
   cells[d] / blocks[d] fine cells. Returns Element_element.
*/
Relation partition_structured(const Mesh& mesh, std::array<Index, 3> blocks);

struct GraphPartition
{
    Relation Element_element;
    Index requested = 0;  ///< parts asked for
    Index produced = 0;   ///< parts after splitting disconnected pieces
};

/**
   Greedy recursive BFS bisection of the dual graph \a element_element into
   \a n_parts connected parts. Disconnected pieces are split into their
   components, so \a produced can exceed \a requested.
*/
GraphPartition partition_graph(const Relation& element_element, Index n_parts);

/// True iff every part of \a Element_element is connected in \a element_element.
bool parts_connected(const Relation& Element_element, const Relation& element_element);

/**
   Builds Faces by the intersection procedure over Element_face and all derived
   relations. Fine faces between distinct Elements that carry no (free) dof are
   ignored; the resulting Faces would have an empty dof set.
*/
AggTopology build_topology(const FineRelations& fine, const Relation& Element_element);

} // namespace ipaux
