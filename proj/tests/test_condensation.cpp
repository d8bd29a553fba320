// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

#include "ipaux/condensation.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace ipaux;

namespace
{

DenseMat dense_schur(const DenseMat& a, Index n_e)
{
    const Index n_b = static_cast<Index>(a.rows()) - n_e;
    const DenseMat aee = a.topLeftCorner(n_e, n_e);
    return a.bottomRightCorner(n_b, n_b) -
           a.bottomLeftCorner(n_b, n_e) * aee.inverse() * a.topRightCorner(n_e, n_b);
}

class DenseInverse : public LinearOperator
{
public:
    explicit DenseInverse(const SparseMat& a) : inv_(to_dense(a).inverse()) {}
    Index size() const override { return static_cast<Index>(inv_.rows()); }
    void apply(const Vector& x, Vector& y) const override { y = inv_ * x; }

private:
    DenseMat inv_;
};

} // namespace

TEST(Condensation, TwoByTwoHandExample)
{
    const DenseMat a = (DenseMat(2, 2) << 2, 1, 1, 2).finished();
    const DenseMat s = local_schur(a, 1);
    ASSERT_EQ(s.rows(), 1);
    EXPECT_DOUBLE_EQ(s(0, 0), 1.5);

    ElementSystem sys;
    sys.n_e = 1;
    sys.n_b = 1;
    sys.locals.push_back({a, {0, 1}, 1});
    const SchurSystem sc(sys);
    const SparseCholesky exact(sc.S());
    // r on the edof only: x = A^{-1} (1,0) = (2,-1)/3
    Vector x;
    sc.apply((Vector(2) << 1.0, 0.0).finished(), x, exact);
    EXPECT_NEAR(x(0), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(x(1), -1.0 / 3.0, 1e-15);
}

TEST(Condensation, DecoupledBlocksAndRandomOracle)
{
    DenseMat a = DenseMat::Identity(4, 4) * 3.0;
    a(2, 3) = a(3, 2) = 1.0;
    EXPECT_EQ(local_schur(a, 2), a.bottomRightCorner(2, 2));

    std::mt19937_64 rng(21);
    const DenseMat r = test::random_spd(6, rng);
    EXPECT_LT((local_schur(r, 4) - dense_schur(r, 4)).norm(), 1e-12 * r.norm());
    const DenseMat s = local_schur(r, 4);
    EXPECT_EQ(s, s.transpose());

    DenseMat bad = DenseMat::Identity(3, 3);
    bad(0, 0) = -1.0;
    EXPECT_THROW(local_schur(bad, 1), Error);
}

TEST(Condensation, AssembledSchurMatchesGlobalOracle)
{
    for (int order : {1, 2, 3})
    {
        const auto p = test::make_ip_problem(2, {12, 12, 1}, order, {3, 3, 1});
        const SchurSystem sc(p->ip.system);
        EXPECT_EQ(sc.n_b(), p->adofs.n_bdofs);
        const DenseMat oracle = dense_schur(to_dense(p->ip.A), p->adofs.n_edofs);
        EXPECT_LT((to_dense(sc.S()) - oracle).norm(), 1e-10 * oracle.norm()) << "order " << order;
    }
}

TEST(Condensation, ExactSchurSolverGivesExactInverse)
{
    const auto p = test::make_ip_problem(2, {8, 8, 1}, 2, {4, 4, 1});
    const SchurSystem sc(p->ip.system);
    const SparseCholesky exact(sc.S());
    const DenseMat Ainv = to_dense(p->ip.A).inverse();
    std::mt19937_64 rng(4);
    for (int k = 0; k < 5; ++k)
    {
        const Vector r = test::random_vector(p->adofs.n_adofs(), rng);
        Vector x;
        const std::size_t before = sc.ee_solve_count();
        sc.apply(r, x, exact);
        EXPECT_EQ(sc.ee_solve_count() - before, 2u);
        const Vector y = Ainv * r;
        EXPECT_LT((x - y).norm(), 1e-10 * y.norm());
    }
    Vector z;
    sc.apply(Vector::Zero(p->adofs.n_adofs()), z, exact);
    EXPECT_EQ(z.norm(), 0.0);
}

TEST(Condensation, CondensedSolverIsSymmetric)
{
    const auto p = test::make_ip_problem(2, {8, 8, 1}, 1, {4, 4, 1});
    const SchurSystem sc(p->ip.system);
    const auto inner = std::make_shared<DenseInverse>(sc.S());
    const CondensedSolver solver(sc, inner);
    std::mt19937_64 rng(8);
    for (int k = 0; k < 5; ++k)
    {
        const Vector r = test::random_vector(solver.size(), rng);
        const Vector q = test::random_vector(solver.size(), rng);
        const double a = r.dot(solver(q)), b = q.dot(solver(r));
        EXPECT_NEAR(a, b, 1e-12 * std::abs(a));
    }
}

TEST(Condensation, SchurCouplesOnlyFacesSharingAnElement)
{
    const auto p = test::make_ip_problem(2, {9, 9, 1}, 1, {3, 3, 1});
    const SchurSystem sc(p->ip.system);
    const Relation Face_Face = multiply(transpose(p->topo.Element_Face), p->topo.Element_Face);
    const Index off = p->adofs.n_edofs;
    for (Index i = 0; i < sc.S().outerSize(); ++i)
        for (SparseMat::InnerIterator it(sc.S(), i); it; ++it)
        {
            const Index Fi = p->adofs.adof_owner[off + i];
            const Index Fj = p->adofs.adof_owner[off + it.col()];
            EXPECT_TRUE(Face_Face.contains(Fi, Fj));
        }
    EXPECT_EQ(sc.schur_elements().n_e, 0);
    EXPECT_EQ(to_dense(assemble_ip(sc.schur_elements())), to_dense(sc.S()));
}
