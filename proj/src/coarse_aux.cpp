// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

#include "ipaux/coarse_aux.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace ipaux
{

ElementBasis element_eigenbasis(const DenseMat& A_T, double theta, Index fixed_count)
{
    return element_eigenbasis(A_T, Vector(A_T.diagonal()), theta, fixed_count);
}

ElementBasis element_eigenbasis(const DenseMat& A_T, const Vector& d, double theta, Index fixed_count)
{
    const Index n = static_cast<Index>(A_T.rows());
    require(n > 0 && A_T.cols() == n && d.size() == n, "element_eigenbasis: empty or non-square matrix");
    require(theta > 0.0 && theta < 1.0, "element_eigenbasis: theta must lie in (0,1)");
    Vector s(n);
    for (Index i = 0; i < n; ++i)
    {
        require(d(i) > 0.0, "element_eigenbasis: zero diagonal entry at " + std::to_string(i));
        s(i) = 1.0 / std::sqrt(d(i));
    }
    DenseMat scaled = s.asDiagonal() * A_T * s.asDiagonal();
    symmetrize(scaled);
    const SymmetricEigen es = symmetric_eigen(scaled);

    Index m = 0;
    if (fixed_count > 0)
        m = fixed_count;
    else
    {
        const double cut = theta * es.values(n - 1);
        while (m < n && es.values(m) <= cut)
            ++m;
    }
    m = std::clamp<Index>(m, 1, std::max<Index>(1, n - 1));

    ElementBasis out;
    out.values = es.values;
    out.vectors = s.asDiagonal() * es.vectors.leftCols(m);
    fix_column_signs(out.vectors);
    return out;
}

DenseMat face_trace_basis(const DenseMat& traces, double svd_rel_tol)
{
    if (traces.size() == 0)
        return DenseMat::Zero(traces.rows(), 0);
    Eigen::BDCSVD<DenseMat> svd(traces, Eigen::ComputeThinU);
    const Vector& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0)
        return DenseMat::Zero(traces.rows(), 0);
    Index r = 0;
    while (r < sv.size() && sv(r) >= svd_rel_tol * sv(0))
        ++r;
    DenseMat q = svd.matrixU().leftCols(r);
    fix_column_signs(q);
    return q;
}

bool full_column_rank(const DenseMat& q, double rel_tol)
{
    if (q.cols() == 0)
        return true;
    if (q.cols() > q.rows())
        return false;
    Eigen::BDCSVD<DenseMat> svd(q);
    const Vector& sv = svd.singularValues();
    return sv(0) > 0.0 && sv(sv.size() - 1) >= rel_tol * sv(0);
}

CoarseBases spectral_bases(const IpSystem& ip, const AdofMap& adofs, const AggTopology& topo,
                           const SpectralOptions& opts)
{
    CoarseBases b;
    b.element.resize(topo.n_Elements);
    b.element_values.resize(topo.n_Elements);
    for (Index T = 0; T < topo.n_Elements; ++T)
    {
        ElementBasis eb = element_eigenbasis(ip.element_matrices[T], opts.theta, opts.fixed_count);
        b.element[T] = std::move(eb.vectors);
        b.element_values[T] = std::move(eb.values);
    }

    b.face.resize(topo.n_Faces);
    std::vector<Index> pos(adofs.n_dofs, -1);
    for (Index F = 0; F < topo.n_Faces; ++F)
    {
        const auto& fd = adofs.face_dofs[F];
        Index total = 0;
        for (Index T : topo.Face_Element.row(F))
            total += static_cast<Index>(b.element[T].cols());
        DenseMat traces(fd.size(), total);
        Index c = 0;
        for (Index T : topo.Face_Element.row(F))
        {
            const auto& ed = adofs.element_dofs[T];
            for (Index a = 0; a < static_cast<Index>(ed.size()); ++a)
                pos[ed[a]] = a;
            const DenseMat& q = b.element[T];
            for (Index k = 0; k < static_cast<Index>(fd.size()); ++k)
                traces.block(k, c, 1, q.cols()) = q.row(pos[fd[k]]);
            c += static_cast<Index>(q.cols());
            for (Index d : ed)
                pos[d] = -1;
        }
        b.face[F] = face_trace_basis(traces, opts.svd_rel_tol);
    }
    return b;
}

CoarseSpace build_coarse(const IpSystem& ip, const AdofMap& adofs, const AggTopology& topo,
                         const CoarseBases& bases)
{
    require(static_cast<Index>(bases.element.size()) == topo.n_Elements &&
                static_cast<Index>(bases.face.size()) == topo.n_Faces,
            "build_coarse: basis count mismatch");
    CoarseSpace cs;
    cs.element_offset.resize(topo.n_Elements);
    cs.m_element.resize(topo.n_Elements);
    Index next = 0;
    for (Index T = 0; T < topo.n_Elements; ++T)
    {
        const DenseMat& q = bases.element[T];
        require(q.rows() == static_cast<Index>(adofs.element_dofs[T].size()),
                "build_coarse: Element basis has the wrong row count");
        require(q.cols() >= 1, "build_coarse: Element " + std::to_string(T) + " has an empty basis");
        require(full_column_rank(q), "build_coarse: rank-deficient basis on Element " + std::to_string(T));
        cs.element_offset[T] = next;
        cs.m_element[T] = static_cast<Index>(q.cols());
        next += cs.m_element[T];
    }
    cs.n_Edofs = next;
    cs.face_offset.resize(topo.n_Faces);
    cs.m_face.resize(topo.n_Faces);
    for (Index F = 0; F < topo.n_Faces; ++F)
    {
        const DenseMat& q = bases.face[F];
        require(q.rows() == static_cast<Index>(adofs.face_dofs[F].size()),
                "build_coarse: Face basis has the wrong row count");
        require(full_column_rank(q), "build_coarse: rank-deficient basis on Face " + std::to_string(F));
        cs.face_offset[F] = next;
        cs.m_face[F] = static_cast<Index>(q.cols());
        next += cs.m_face[F];
    }
    cs.n_Bdofs = next - cs.n_Edofs;

    std::vector<Triplet> trip;
    for (Index T = 0; T < topo.n_Elements; ++T)
    {
        const DenseMat& q = bases.element[T];
        for (Index a = 0; a < q.rows(); ++a)
            for (Index i = 0; i < q.cols(); ++i)
                trip.emplace_back(adofs.element_offset[T] + a, cs.element_offset[T] + i, q(a, i));
    }
    for (Index F = 0; F < topo.n_Faces; ++F)
    {
        const DenseMat& q = bases.face[F];
        for (Index k = 0; k < q.rows(); ++k)
            for (Index j = 0; j < q.cols(); ++j)
                trip.emplace_back(adofs.face_offset[F] + k, cs.face_offset[F] + j, q(k, j));
    }
    cs.P = from_triplets(adofs.n_adofs(), cs.n_Adofs(), trip);

    cs.system.n_e = cs.n_Edofs;
    cs.system.n_b = cs.n_Bdofs;
    cs.system.locals.resize(topo.n_Elements);
    for (Index T = 0; T < topo.n_Elements; ++T)
    {
        const LocalBlockMatrix& fine = ip.system.locals[T];
        const auto faces = topo.Element_Face.row(T);
        Index cols = cs.m_element[T];
        for (Index F : faces)
            cols += cs.m_face[F];
        DenseMat pt = DenseMat::Zero(fine.ids.size(), cols);
        LocalBlockMatrix& loc = cs.system.locals[T];
        loc.n_e = cs.m_element[T];
        pt.topLeftCorner(fine.n_e, cs.m_element[T]) = bases.element[T];
        for (Index i = 0; i < cs.m_element[T]; ++i)
            loc.ids.push_back(cs.element_offset[T] + i);
        Index r0 = fine.n_e;
        Index c0 = cs.m_element[T];
        for (Index F : faces)
        {
            const DenseMat& q = bases.face[F];
            pt.block(r0, c0, q.rows(), q.cols()) = q;
            for (Index j = 0; j < q.cols(); ++j)
                loc.ids.push_back(cs.face_offset[F] + j);
            r0 += static_cast<Index>(q.rows());
            c0 += static_cast<Index>(q.cols());
        }
        loc.matrix = pt.transpose() * fine.matrix * pt;
        symmetrize(loc.matrix);
    }
    cs.A_H = assemble_ip(cs.system);
    cs.Pi_H = SparseMat(ip.Pi * cs.P);
    return cs;
}

} // namespace ipaux
