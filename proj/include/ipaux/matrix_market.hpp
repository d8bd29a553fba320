// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

/**
   @file Matrix Market coordinate I/O (real, general or symmetric).

   Values are written with 17 significant digits so a round trip is exact.
   Symmetric storage (lower triangle) is used iff the matrix is exactly
   symmetric.
*/

#pragma once

#include "ipaux/linalg.hpp"

#include <iosfwd>
#include <string>

namespace ipaux
{

void write_matrix_market(std::ostream& os, const SparseMat& a);
void write_matrix_market(const std::string& path, const SparseMat& a);

SparseMat read_matrix_market(std::istream& is);
SparseMat read_matrix_market(const std::string& path);

/// Vector as an n x 1 general coordinate matrix (zeros included).
void write_vector_market(const std::string& path, const Vector& v);

} // namespace ipaux
