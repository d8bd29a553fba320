// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

#include "ipaux/ip_reformulation.hpp"

#include <algorithm>
#include <cmath>

namespace ipaux
{

AdofMap build_adof_map(const AggTopology& topo)
{
    AdofMap m;
    m.n_dofs = topo.Element_dof.n_cols();
    m.dof_on_face.assign(m.n_dofs, 0);
    for (Index F = 0; F < topo.n_Faces; ++F)
        for (Index d : topo.Face_dof.row(F))
            m.dof_on_face[d] = 1;

    std::vector<std::vector<Index>> dof_adof(m.n_dofs);
    m.element_dofs.resize(topo.n_Elements);
    m.element_offset.resize(topo.n_Elements);
    m.element_n_interior.resize(topo.n_Elements);
    Index next = 0;
    for (Index T = 0; T < topo.n_Elements; ++T)
    {
        auto& local = m.element_dofs[T];
        for (Index d : topo.Element_dof.row(T))
            if (!m.dof_on_face[d])
                local.push_back(d);
        m.element_n_interior[T] = static_cast<Index>(local.size());
        for (Index d : topo.Element_dof.row(T))
            if (m.dof_on_face[d])
                local.push_back(d);
        m.element_offset[T] = next;
        for (Index d : local)
        {
            dof_adof[d].push_back(next);
            m.adof_dof.push_back(d);
            m.adof_owner.push_back(T);
            ++next;
        }
    }
    m.n_edofs = next;

    m.face_dofs.resize(topo.n_Faces);
    m.face_offset.resize(topo.n_Faces);
    for (Index F = 0; F < topo.n_Faces; ++F)
    {
        const auto fd = topo.Face_dof.row(F);
        m.face_dofs[F].assign(fd.begin(), fd.end());
        m.face_offset[F] = next;
        for (Index d : fd)
        {
            dof_adof[d].push_back(next);
            m.adof_dof.push_back(d);
            m.adof_owner.push_back(F);
            ++next;
        }
    }
    m.n_bdofs = next - m.n_edofs;
    for (const auto& j : dof_adof)
        m.kappa = std::max(m.kappa, static_cast<Index>(j.size()));
    m.dof_adof = Relation(m.n_dofs, next, std::move(dof_adof));
    return m;
}

SparseMat assemble_ip(const ElementSystem& sys)
{
    const Index n = sys.size();
    std::vector<char> touched(n, 0);
    std::vector<Triplet> trip;
    for (const auto& loc : sys.locals)
    {
        const Index k = static_cast<Index>(loc.ids.size());
        require(loc.matrix.rows() == k && loc.matrix.cols() == k, "assemble_ip: local matrix size mismatch");
        for (Index a = 0; a < k; ++a)
        {
            touched[loc.ids[a]] = 1;
            for (Index b = 0; b < k; ++b)
                trip.emplace_back(loc.ids[a], loc.ids[b], loc.matrix(a, b));
        }
    }
    for (Index i = 0; i < n; ++i)
        require(touched[i], "assemble_ip: unknown " + std::to_string(i) + " is referenced by no Element");
    return from_triplets(n, n, trip);
}

DenseMat agglomerate_matrix(const Discretization& disc, const AggTopology& topo, const AdofMap& adofs, Index T)
{
    const auto& local = adofs.element_dofs[T];
    std::vector<Index> pos(disc.n_free(), -1);
    for (Index a = 0; a < static_cast<Index>(local.size()); ++a)
        pos[local[a]] = a;
    DenseMat at = DenseMat::Zero(local.size(), local.size());
    for (Index e : topo.Element_element.row(T))
    {
        const auto dofs = disc.rel.element_dof.row(e);
        const DenseMat& ae = disc.element_matrices[e];
        for (Index a = 0; a < static_cast<Index>(dofs.size()); ++a)
            for (Index b = 0; b < static_cast<Index>(dofs.size()); ++b)
                at(pos[dofs[a]], pos[dofs[b]]) += ae(a, b);
    }
    return at;
}

LocalBlockMatrix build_local_ip(const DenseMat& A_T, const Vector& penalty_diag, const AggTopology& topo,
                                const AdofMap& adofs, Index T, double delta)
{
    require(delta > 0.0, "build_local_ip: delta must be positive");
    const auto& edofs = adofs.element_dofs[T];
    const Index n_e = static_cast<Index>(edofs.size());
    require(A_T.rows() == n_e && A_T.cols() == n_e, "build_local_ip: A_T size mismatch");

    LocalBlockMatrix loc;
    loc.n_e = n_e;
    for (Index a = 0; a < n_e; ++a)
        loc.ids.push_back(adofs.element_offset[T] + a);
    for (Index F : topo.Element_Face.row(T))
    {
        require(!adofs.face_dofs[F].empty(), "build_local_ip: Face " + std::to_string(F) + " has no dofs");
        for (Index b = 0; b < static_cast<Index>(adofs.face_dofs[F].size()); ++b)
            loc.ids.push_back(adofs.face_offset[F] + b);
    }
    const Index n = static_cast<Index>(loc.ids.size());
    loc.matrix = DenseMat::Zero(n, n);
    loc.matrix.topLeftCorner(n_e, n_e) = A_T;

    // local position of each dof among T's edofs
    std::vector<std::pair<Index, Index>> epos;
    epos.reserve(n_e);
    for (Index a = 0; a < n_e; ++a)
        epos.emplace_back(edofs[a], a);
    std::sort(epos.begin(), epos.end());
    auto edof_pos = [&](Index d) {
        auto it = std::lower_bound(epos.begin(), epos.end(), std::make_pair(d, Index{-1}));
        require(it != epos.end() && it->first == d, "build_local_ip: Face dof outside its Element");
        return it->second;
    };

    const double w = 1.0 / delta;
    Index b0 = n_e;
    for (Index F : topo.Element_Face.row(T))
    {
        const auto& fd = adofs.face_dofs[F];
        for (Index k = 0; k < static_cast<Index>(fd.size()); ++k)
        {
            const Index pe = edof_pos(fd[k]);
            const Index pb = b0 + k;
            const double c = w * penalty_diag(fd[k]);
            loc.matrix(pe, pe) += c;
            loc.matrix(pe, pb) -= c;
            loc.matrix(pb, pe) -= c;
            loc.matrix(pb, pb) += c;
        }
        b0 += static_cast<Index>(fd.size());
    }
    symmetrize(loc.matrix);
    return loc;
}

SparseMat build_pi(const AdofMap& adofs)
{
    std::vector<Triplet> trip;
    for (Index l = 0; l < adofs.n_dofs; ++l)
    {
        const auto j = adofs.dof_adof.row(l);
        const double w = 1.0 / static_cast<double>(j.size());
        for (Index a : j)
            trip.emplace_back(l, a, w);
    }
    return from_triplets(adofs.n_dofs, adofs.n_adofs(), trip);
}

SparseMat build_injection(const AdofMap& adofs)
{
    std::vector<Triplet> trip;
    for (Index a = 0; a < adofs.n_adofs(); ++a)
        trip.emplace_back(a, adofs.adof_dof[a], 1.0);
    return from_triplets(adofs.n_adofs(), adofs.n_dofs, trip);
}

IpSystem build_ip_system(const Discretization& disc, const AggTopology& topo, const AdofMap& adofs,
                         const IpOptions& opts)
{
    IpSystem ip;
    ip.delta = opts.delta;
    ip.penalty_diag = opts.penalty == PenaltyDiagonal::diagonal ? disc.D : disc.W;
    ip.system.n_e = adofs.n_edofs;
    ip.system.n_b = adofs.n_bdofs;
    ip.element_matrices.resize(topo.n_Elements);
    ip.system.locals.resize(topo.n_Elements);
    for (Index T = 0; T < topo.n_Elements; ++T)
    {
        ip.element_matrices[T] = agglomerate_matrix(disc, topo, adofs, T);
        ip.system.locals[T] = build_local_ip(ip.element_matrices[T], ip.penalty_diag, topo, adofs, T, opts.delta);
    }
    ip.A = assemble_ip(ip.system);
    ip.Pi = build_pi(adofs);
    ip.I = build_injection(adofs);
    return ip;
}

double measure_lambda(const IpSystem& ip, const AdofMap& adofs)
{
    double lambda = 0.0;
    for (std::size_t T = 0; T < ip.element_matrices.size(); ++T)
    {
        const auto& dofs = adofs.element_dofs[T];
        if (dofs.empty())
            continue;
        Vector s(dofs.size());
        for (std::size_t a = 0; a < dofs.size(); ++a)
            s(a) = 1.0 / std::sqrt(ip.penalty_diag(dofs[a]));
        const DenseMat scaled = s.asDiagonal() * ip.element_matrices[T] * s.asDiagonal();
        const SymmetricEigen es = symmetric_eigen(scaled);
        lambda = std::max(lambda, es.values(es.values.size() - 1));
    }
    return lambda;
}

} // namespace ipaux
