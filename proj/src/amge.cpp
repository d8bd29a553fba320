// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

#include "ipaux/amge.hpp"

#include "ipaux/coarse_aux.hpp"
#include "ipaux/mesh_fe.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <numeric>
#include <sstream>

namespace ipaux
{

namespace
{

constexpr Index kDenseCoarseMax = 2000;

class DenseSolver : public LinearOperator
{
public:
    explicit DenseSolver(const SparseMat& a) : chol_(to_dense(a)), n_(static_cast<Index>(a.rows())) {}
    Index size() const override { return n_; }
    void apply(const Vector& x, Vector& y) const override { y = chol_.solve(x); }

private:
    DenseCholesky chol_;
    Index n_;
};

SparseMat assemble_elements(Index n, const Relation& element_dof, const std::vector<DenseMat>& mats)
{
    std::vector<Triplet> trip;
    for (Index t = 0; t < element_dof.n_rows(); ++t)
    {
        const auto dofs = element_dof.row(t);
        const DenseMat& m = mats[t];
        for (Index a = 0; a < static_cast<Index>(dofs.size()); ++a)
            for (Index b = 0; b < static_cast<Index>(dofs.size()); ++b)
                trip.emplace_back(dofs[a], dofs[b], m(a, b));
    }
    return from_triplets(n, n, trip);
}

Relation element_adjacency(const Relation& element_dof)
{
    const Relation shared = multiply(element_dof, transpose(element_dof));
    std::vector<std::vector<Index>> rows(shared.n_rows());
    for (Index e = 0; e < shared.n_rows(); ++e)
        for (Index f : shared.row(e))
            if (f != e)
                rows[e].push_back(f);
    return Relation(shared.n_rows(), shared.n_rows(), std::move(rows));
}

// Sum of the member element matrices in the (sorted) dof order of each agglomerate.
std::vector<DenseMat> agglomerate_matrices(const Relation& Element_element, const Relation& Element_dof,
                                           const Relation& element_dof, const std::vector<DenseMat>& mats,
                                           Index n_dofs)
{
    std::vector<DenseMat> out(Element_element.n_rows());
    std::vector<Index> pos(n_dofs, -1);
    for (Index T = 0; T < Element_element.n_rows(); ++T)
    {
        const auto dofs = Element_dof.row(T);
        for (Index a = 0; a < static_cast<Index>(dofs.size()); ++a)
            pos[dofs[a]] = a;
        DenseMat at = DenseMat::Zero(dofs.size(), dofs.size());
        for (Index e : Element_element.row(T))
        {
            const auto ed = element_dof.row(e);
            for (Index a = 0; a < static_cast<Index>(ed.size()); ++a)
                for (Index b = 0; b < static_cast<Index>(ed.size()); ++b)
                    at(pos[ed[a]], pos[ed[b]]) += mats[e](a, b);
        }
        for (Index d : dofs)
            pos[d] = -1;
        out[T] = std::move(at);
    }
    return out;
}

} // namespace

AmgeInput amge_input_from(const ElementSystem& sys)
{
    AmgeInput in;
    in.n_dofs = sys.size();
    std::vector<std::vector<Index>> rows;
    rows.reserve(sys.locals.size());
    for (const auto& loc : sys.locals)
    {
        const Index n = static_cast<Index>(loc.ids.size());
        std::vector<Index> perm(n);
        std::iota(perm.begin(), perm.end(), Index{0});
        std::sort(perm.begin(), perm.end(), [&](Index a, Index b) { return loc.ids[a] < loc.ids[b]; });
        DenseMat m(n, n);
        std::vector<Index> ids(n);
        for (Index a = 0; a < n; ++a)
        {
            ids[a] = loc.ids[perm[a]];
            for (Index b = 0; b < n; ++b)
                m(a, b) = loc.matrix(perm[a], perm[b]);
        }
        for (Index a = 1; a < n; ++a)
            require(ids[a] != ids[a - 1], "amge_input_from: repeated id in a local matrix");
        rows.push_back(std::move(ids));
        in.element_matrices.push_back(std::move(m));
    }
    const auto n_rows = static_cast<Index>(rows.size());
    in.element_dof = Relation(n_rows, in.n_dofs, std::move(rows));
    return in;
}

Relation pair_elements(const Relation& element_element)
{
    const Index n = element_element.n_rows();
    std::vector<char> taken(n, 0);
    std::vector<std::vector<Index>> rows;
    for (Index e = 0; e < n; ++e)
    {
        if (taken[e])
            continue;
        taken[e] = 1;
        std::vector<Index> group{e};
        for (Index f : element_element.row(e))
            if (f != e && !taken[f])
            {
                taken[f] = 1;
                group.push_back(f);
                break;
            }
        rows.push_back(std::move(group));
    }
    const auto n_rows = static_cast<Index>(rows.size());
    return Relation(n_rows, n, std::move(rows));
}

std::vector<std::size_t> Hierarchy::nnz_per_level() const
{
    std::vector<std::size_t> out;
    for (const auto& lv : levels_)
        out.push_back(nnz(lv.A));
    return out;
}

std::string Hierarchy::summary() const
{
    std::ostringstream os;
    os << "level  dofs  elements  mises  nnz\n";
    for (std::size_t l = 0; l < levels_.size(); ++l)
        os << l << "  " << levels_[l].A.rows() << "  " << levels_[l].element_dof.n_rows() << "  "
           << levels_[l].n_mis << "  " << nnz(levels_[l].A) << "\n";
    os << "stop: " << stop_reason_ << "\n";
    return os.str();
}

void Hierarchy::apply(const Vector& r, Vector& x) const
{
    require(r.size() == size(), "Hierarchy::apply: residual length mismatch");
    cycle(0, r, x);
}

void Hierarchy::cycle(std::size_t l, const Vector& r, Vector& x) const
{
    if (l + 1 == levels_.size())
    {
        coarse_solver_->apply(r, x);
        return;
    }
    const AmgeLevel& lv = levels_[l];
    lv.smoother->apply(r, x);
    Vector res = r - lv.A * x;
    const Vector rc = lv.P.transpose() * res;
    Vector xc(rc.size());
    cycle(l + 1, rc, xc);
    x += lv.P * xc;
    res = r - lv.A * x;
    Vector corr(x.size());
    lv.smoother->apply_transpose(res, corr);
    x += corr;
}

Hierarchy build_hierarchy(AmgeInput input, const AmgeOptions& opts)
{
    require(opts.theta_s > 0.0 && opts.theta_s < 1.0, "build_hierarchy: theta_s must lie in (0,1)");
    require(opts.max_levels >= 1, "build_hierarchy: max_levels must be positive");
    require(static_cast<Index>(input.element_matrices.size()) == input.element_dof.n_rows() &&
                input.element_dof.n_cols() == input.n_dofs,
            "build_hierarchy: inconsistent input");
    for (Index e = 0; e < input.element_dof.n_rows(); ++e)
        require(input.element_matrices[e].rows() == input.element_dof.row_size(e),
                "build_hierarchy: element matrix size mismatch at " + std::to_string(e));

    Hierarchy h;
    h.levels_.reserve(opts.max_levels);
    {
        AmgeLevel l0;
        l0.A = assemble_elements(input.n_dofs, input.element_dof, input.element_matrices);
        l0.element_dof = std::move(input.element_dof);
        l0.element_matrices = std::move(input.element_matrices);
        h.levels_.push_back(std::move(l0));
    }
    std::optional<Relation> first_partition = std::move(input.Element_element);
    h.stop_reason_ = "max_levels reached";

    while (true)
    {
        AmgeLevel& cur = h.levels_.back();
        const Index n = static_cast<Index>(cur.A.rows());
        if (static_cast<int>(h.levels_.size()) >= opts.max_levels)
            break;
        if (n <= opts.coarse_size_target)
        {
            h.stop_reason_ = "coarse size target reached";
            break;
        }
        const Index n_el = cur.element_dof.n_rows();
        Relation part;
        if (first_partition)
        {
            part = std::move(*first_partition);
            first_partition.reset();
            require(part.n_cols() == n_el, "build_hierarchy: Element partition size mismatch");
        }
        else if (opts.agglomeration == AmgeAgglomeration::pairwise)
            part = pair_elements(element_adjacency(cur.element_dof));
        else
            part = Relation::identity(n_el);

        const Relation Element_dof = multiply(part, cur.element_dof);
        const std::vector<DenseMat> A_T =
            agglomerate_matrices(part, Element_dof, cur.element_dof, cur.element_matrices, n);
        const RowPatternPartition mis = partition_by_row_pattern(Element_dof);
        const Relation mis_Element = transpose(mis.entity_class);
        const Index n_mis = mis.class_dof.n_rows();

        // smooth vectors per Element
        std::vector<DenseMat> q(A_T.size());
        for (std::size_t T = 0; T < A_T.size(); ++T)
        {
            Vector d = A_T[T].diagonal();
            const double dmax = d.size() > 0 ? d.maxCoeff() : 0.0;
            // a dof may carry no energy in T (coarse element matrices are RAPs); keep D_T invertible
            for (Index i = 0; i < d.size(); ++i)
                if (d(i) <= 1e-14 * dmax)
                    d(i) = dmax > 0.0 ? 1e-14 * dmax : 1.0;
            q[T] = element_eigenbasis(A_T[T], d, opts.theta_s, opts.fixed_eigenvectors).vectors;
        }

        // per-MIS SVD of the restrictions
        std::vector<DenseMat> u(n_mis);
        std::vector<Index> mis_offset(n_mis + 1, 0);
        std::vector<Index> pos(n, -1);
        for (Index M = 0; M < n_mis; ++M)
        {
            const auto mdofs = mis.class_dof.row(M);
            Index total = 0;
            for (Index T : mis_Element.row(M))
                total += static_cast<Index>(q[T].cols());
            DenseMat traces(mdofs.size(), total);
            Index c = 0;
            for (Index T : mis_Element.row(M))
            {
                const auto td = Element_dof.row(T);
                for (Index a = 0; a < static_cast<Index>(td.size()); ++a)
                    pos[td[a]] = a;
                for (Index k = 0; k < static_cast<Index>(mdofs.size()); ++k)
                    traces.block(k, c, 1, q[T].cols()) = q[T].row(pos[mdofs[k]]);
                c += static_cast<Index>(q[T].cols());
                for (Index d : td)
                    pos[d] = -1;
            }
            DenseMat basis = face_trace_basis(traces, opts.svd_rel_tol);
            const Index cap = std::max<Index>(1, static_cast<Index>(mdofs.size()) - opts.min_svd_drop);
            if (basis.cols() > cap)
                basis.conservativeResize(Eigen::NoChange, cap);
            mis_offset[M + 1] = mis_offset[M] + static_cast<Index>(basis.cols());
            u[M] = std::move(basis);
        }
        const Index nc = mis_offset[n_mis];
        if (nc >= n || nc == 0)
        {
            h.stop_reason_ = "coarsening did not reduce the dimension";
            break;
        }

        std::vector<Triplet> trip;
        for (Index M = 0; M < n_mis; ++M)
        {
            const auto mdofs = mis.class_dof.row(M);
            for (Index k = 0; k < static_cast<Index>(mdofs.size()); ++k)
                for (Index j = 0; j < u[M].cols(); ++j)
                    trip.emplace_back(mdofs[k], mis_offset[M] + j, u[M](k, j));
        }
        cur.P = from_triplets(n, nc, trip);
        cur.n_mis = n_mis;

        // coarse element matrices by local RAP
        std::vector<std::vector<Index>> coarse_rows;
        std::vector<DenseMat> coarse_mats;
        for (Index T = 0; T < static_cast<Index>(A_T.size()); ++T)
        {
            const auto td = Element_dof.row(T);
            for (Index a = 0; a < static_cast<Index>(td.size()); ++a)
                pos[td[a]] = a;
            std::vector<Index> cids;
            for (Index M : mis.entity_class.row(T))
                for (Index j = 0; j < u[M].cols(); ++j)
                    cids.push_back(mis_offset[M] + j);
            if (!cids.empty())
            {
                DenseMat pt = DenseMat::Zero(td.size(), cids.size());
                Index c0 = 0;
                for (Index M : mis.entity_class.row(T))
                {
                    const auto mdofs = mis.class_dof.row(M);
                    for (Index k = 0; k < static_cast<Index>(mdofs.size()); ++k)
                        pt.block(pos[mdofs[k]], c0, 1, u[M].cols()) = u[M].row(k);
                    c0 += static_cast<Index>(u[M].cols());
                }
                DenseMat ac = pt.transpose() * A_T[T] * pt;
                symmetrize(ac);
                coarse_rows.push_back(std::move(cids));
                coarse_mats.push_back(std::move(ac));
            }
            for (Index d : td)
                pos[d] = -1;
        }

        AmgeLevel next;
        const auto n_coarse_rows = static_cast<Index>(coarse_rows.size());

        next.element_dof = Relation(n_coarse_rows, nc, std::move(coarse_rows));
        next.element_matrices = std::move(coarse_mats);
        next.A = assemble_elements(nc, next.element_dof, next.element_matrices);
        h.levels_.push_back(std::move(next));
    }

    // smoothers reference the level matrices, so attach them once the level list is final
    for (std::size_t l = 0; l + 1 < h.levels_.size(); ++l)
    {
        AmgeLevel& lv = h.levels_[l];
        lv.smoother = std::make_unique<PolySmoother>(lv.A, l1_weights(lv.A), 1.0, opts.nu_s);
    }
    const SparseMat& ac = h.levels_.back().A;
    if (ac.rows() <= kDenseCoarseMax)
        h.coarse_solver_ = std::make_unique<DenseSolver>(ac);
    else
        h.coarse_solver_ = std::make_unique<SparseCholesky>(ac);
    return h;
}

} // namespace ipaux
