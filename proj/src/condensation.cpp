// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

#include "ipaux/condensation.hpp"

namespace ipaux
{

DenseMat local_schur(const DenseMat& local, Index n_e)
{
    const Index n = static_cast<Index>(local.rows());
    require(local.cols() == n && n_e >= 0 && n_e <= n, "local_schur: bad block split");
    const Index n_b = n - n_e;
    DenseMat s = local.bottomRightCorner(n_b, n_b);
    if (n_e > 0)
    {
        Eigen::LLT<DenseMat> llt(local.topLeftCorner(n_e, n_e));
        require(llt.info() == Eigen::Success,
                "local_schur: A_ee is not positive definite (null space of A_T vanishes on all Faces?)");
        s -= local.bottomLeftCorner(n_b, n_e) * llt.solve(local.topRightCorner(n_e, n_b));
    }
    symmetrize(s);
    return s;
}

SchurSystem::SchurSystem(const ElementSystem& sys) : n_e_(sys.n_e), n_b_(sys.n_b)
{
    schur_elements_.n_e = 0;
    schur_elements_.n_b = n_b_;
    blocks_.reserve(sys.locals.size());
    for (const auto& loc : sys.locals)
    {
        Block blk;
        const Index ne = loc.n_e;
        const Index nb = loc.n_b();
        blk.e_ids.assign(loc.ids.begin(), loc.ids.begin() + ne);
        for (Index k = ne; k < ne + nb; ++k)
        {
            require(loc.ids[k] >= n_e_, "SchurSystem: bdof id inside the edof range");
            blk.b_ids.push_back(loc.ids[k] - n_e_);
        }
        for (Index id : blk.e_ids)
            require(id < n_e_, "SchurSystem: edof id outside the edof range");
        LocalBlockMatrix s_loc;
        s_loc.matrix = local_schur(loc.matrix, ne);
        s_loc.ids = blk.b_ids;
        s_loc.n_e = 0;
        if (ne > 0)
        {
            blk.ee = DenseCholesky(loc.matrix.topLeftCorner(ne, ne));
            blk.eb = loc.matrix.topRightCorner(ne, nb);
        }
        else
            blk.eb = DenseMat::Zero(0, nb);
        blocks_.push_back(std::move(blk));
        schur_elements_.locals.push_back(std::move(s_loc));
    }
    s_ = assemble_ip(schur_elements_);
}

void SchurSystem::solve_ee(const Vector& rhs_e, Vector& out_e) const
{
    out_e.setZero(n_e_);
    for (const auto& blk : blocks_)
    {
        if (blk.e_ids.empty())
            continue;
        Vector r(blk.e_ids.size());
        for (std::size_t a = 0; a < blk.e_ids.size(); ++a)
            r(a) = rhs_e(blk.e_ids[a]);
        const Vector y = blk.ee.solve(r);
        for (std::size_t a = 0; a < blk.e_ids.size(); ++a)
            out_e(blk.e_ids[a]) = y(a);
    }
    ++ee_solves_;
}

void SchurSystem::apply(const Vector& r, Vector& x, const LinearOperator& schur_solver) const
{
    require(r.size() == n_e_ + n_b_, "SchurSystem::apply: residual length mismatch");
    // elimination
    Vector y_e;
    solve_ee(r.head(n_e_), y_e);
    Vector t_b = r.tail(n_b_);
    for (const auto& blk : blocks_)
    {
        if (blk.e_ids.empty())
            continue;
        Vector ye(blk.e_ids.size());
        for (std::size_t a = 0; a < blk.e_ids.size(); ++a)
            ye(a) = y_e(blk.e_ids[a]);
        const Vector c = blk.eb.transpose() * ye;
        for (std::size_t k = 0; k < blk.b_ids.size(); ++k)
            t_b(blk.b_ids[k]) -= c(k);
    }
    Vector y_b(n_b_);
    schur_solver.apply(t_b, y_b);

    // backward substitution
    Vector g_e = Vector::Zero(n_e_);
    for (const auto& blk : blocks_)
    {
        if (blk.e_ids.empty())
            continue;
        Vector yb(blk.b_ids.size());
        for (std::size_t k = 0; k < blk.b_ids.size(); ++k)
            yb(k) = y_b(blk.b_ids[k]);
        const Vector c = blk.eb * yb;
        for (std::size_t a = 0; a < blk.e_ids.size(); ++a)
            g_e(blk.e_ids[a]) = c(a);
    }
    Vector z_e;
    solve_ee(g_e, z_e);
    x.resize(n_e_ + n_b_);
    x.head(n_e_) = y_e - z_e;
    x.tail(n_b_) = y_b;
}

} // namespace ipaux
