// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

#include "ipaux/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ipaux
{

namespace
{

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

void write_entries(std::ostream& os, Index rows, Index cols, const std::vector<Triplet>& t, bool symmetric)
{
    os << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general") << "\n";
    os << rows << " " << cols << " " << t.size() << "\n";
    char buf[96];
    for (const auto& e : t)
    {
        std::snprintf(buf, sizeof buf, "%d %d %.17g\n", e.row() + 1, e.col() + 1, e.value());
        os << buf;
    }
    require(os.good(), "write_matrix_market: write failed");
}

} // namespace

void write_matrix_market(std::ostream& os, const SparseMat& a)
{
    SparseMat c = a;
    c.prune(0.0);
    const bool sym = c.rows() == c.cols() && is_exactly_symmetric(c);
    std::vector<Triplet> t;
    for (Index i = 0; i < c.outerSize(); ++i)
        for (SparseMat::InnerIterator it(c, i); it; ++it)
            if (!sym || it.col() <= it.row())
                t.emplace_back(it.row(), it.col(), it.value());
    write_entries(os, static_cast<Index>(c.rows()), static_cast<Index>(c.cols()), t, sym);
}

void write_matrix_market(const std::string& path, const SparseMat& a)
{
    std::ofstream f(path);
    require(f.good(), "write_matrix_market: cannot open " + path);
    write_matrix_market(f, a);
}

SparseMat read_matrix_market(std::istream& is)
{
    std::string line;
    require(static_cast<bool>(std::getline(is, line)), "read_matrix_market: empty input");
    std::istringstream hs(line);
    std::string banner, object, format, field, symmetry;
    hs >> banner >> object >> format >> field >> symmetry;
    require(banner == "%%MatrixMarket" && lower(object) == "matrix" && lower(format) == "coordinate",
            "read_matrix_market: only coordinate matrices are supported");
    require(lower(field) == "real" || lower(field) == "integer", "read_matrix_market: unsupported field");
    symmetry = lower(symmetry);
    require(symmetry == "general" || symmetry == "symmetric", "read_matrix_market: unsupported symmetry");
    const bool sym = symmetry == "symmetric";

    while (std::getline(is, line) && (line.empty() || line[0] == '%'))
    {
    }
    std::istringstream ss(line);
    long rows = 0, cols = 0, entries = 0;
    require(static_cast<bool>(ss >> rows >> cols >> entries), "read_matrix_market: bad size line");
    std::vector<Triplet> t;
    t.reserve(sym ? 2 * entries : entries);
    for (long k = 0; k < entries; ++k)
    {
        long i = 0, j = 0;
        double v = 0.0;
        require(static_cast<bool>(is >> i >> j >> v), "read_matrix_market: truncated entry list");
        require(i >= 1 && i <= rows && j >= 1 && j <= cols, "read_matrix_market: index out of range");
        t.emplace_back(static_cast<Index>(i - 1), static_cast<Index>(j - 1), v);
        if (sym && i != j)
            t.emplace_back(static_cast<Index>(j - 1), static_cast<Index>(i - 1), v);
    }
    return from_triplets(static_cast<Index>(rows), static_cast<Index>(cols), t);
}

SparseMat read_matrix_market(const std::string& path)
{
    std::ifstream f(path);
    require(f.good(), "read_matrix_market: cannot open " + path);
    return read_matrix_market(f);
}

void write_vector_market(const std::string& path, const Vector& v)
{
    std::ofstream f(path);
    require(f.good(), "write_vector_market: cannot open " + path);
    std::vector<Triplet> t;
    for (Index i = 0; i < v.size(); ++i)
        t.emplace_back(i, 0, v(i));
    write_entries(f, static_cast<Index>(v.size()), 1, t, false);
}

} // namespace ipaux
