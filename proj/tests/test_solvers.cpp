// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

#include "ipaux/solvers.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace ipaux;

namespace
{

FunctionOperator dense_operator(const DenseMat& m)
{
    return FunctionOperator(static_cast<Index>(m.rows()), [m](const Vector& x, Vector& y) { y = m * x; });
}

DenseMat dense_apply(const LinearOperator& op)
{
    const Index n = op.size();
    DenseMat m(n, n);
    for (Index j = 0; j < n; ++j)
        m.col(j) = op(Vector::Unit(n, j));
    return m;
}

} // namespace

TEST(Solvers, PcgWithExactInverseTakesOneStep)
{
    std::mt19937_64 rng(1);
    const DenseMat a = test::random_spd(10, rng);
    const SparseMat A = test::to_sparse(a);
    const MatrixOperator op(A);
    const auto inv = dense_operator(a.inverse());
    const Vector rhs = test::random_vector(10, rng);
    Vector x;
    const SolveReport rep = pcg(op, rhs, inv, x);
    EXPECT_EQ(rep.iterations, 1);
    EXPECT_TRUE(rep.converged);
    EXPECT_LT((a * x - rhs).norm(), 1e-10 * rhs.norm());
}

TEST(Solvers, PcgSmallExamples)
{
    // plain CG on 2x2 finishes in two steps
    const DenseMat a = (DenseMat(2, 2) << 4, 1, 1, 3).finished();
    const SparseMat A = test::to_sparse(a);
    const auto id = dense_operator(DenseMat::Identity(2, 2));
    Vector x;
    SolveReport rep = pcg(MatrixOperator(A), Vector::Ones(2), id, x);
    EXPECT_LE(rep.iterations, 2);
    EXPECT_LT((a * x - Vector::Ones(2)).norm(), 1e-12);

    // Jacobi on a diagonal matrix is exact
    const DenseMat d = Vector((Vector(3) << 1, 10, 100).finished()).asDiagonal();
    const SparseMat D = test::to_sparse(d);
    const auto jac = dense_operator(DenseMat(d.diagonal().cwiseInverse().asDiagonal()));
    x.resize(0);
    rep = pcg(MatrixOperator(D), Vector::Ones(3), jac, x);
    EXPECT_EQ(rep.iterations, 1);

    // zero right-hand side
    x = Vector::Zero(3);
    rep = pcg(MatrixOperator(D), Vector::Zero(3), jac, x);
    EXPECT_EQ(rep.iterations, 0);
    EXPECT_TRUE(rep.converged);
    EXPECT_EQ(x.norm(), 0.0);
}

TEST(Solvers, PcgStopsOnSquaredMeasure)
{
    std::mt19937_64 rng(2);
    const DenseMat a = test::random_spd(40, rng) + 200.0 * DenseMat::Identity(40, 40);
    const SparseMat A = test::to_sparse(a);
    const auto id = dense_operator(DenseMat::Identity(40, 40));
    Vector x;
    PcgOptions o;
    o.rel_tol = 1e-6;
    const SolveReport rep = pcg(MatrixOperator(A), test::random_vector(40, rng), id, x, o);
    ASSERT_TRUE(rep.converged);
    const double stop = o.rel_tol * o.rel_tol * rep.measures.front();
    ASSERT_EQ(rep.measures.size(), static_cast<std::size_t>(rep.iterations + 1));
    EXPECT_LE(rep.measures.back(), stop);
    for (int k = 0; k < rep.iterations; ++k)
        EXPECT_GT(rep.measures[k], stop);
    EXPECT_DOUBLE_EQ(rep.final_relative, std::sqrt(rep.measures.back() / rep.measures.front()));

    std::ostringstream os;
    write_residual_history(os, rep);
    const std::string s = os.str();
    EXPECT_EQ(s.rfind("iteration,measure,relative\n0,", 0), 0u);
    EXPECT_EQ(static_cast<int>(std::count(s.begin(), s.end(), '\n')), rep.iterations + 2);
}

TEST(Solvers, IndefinitePreconditionerThrows)
{
    const SparseMat A = test::to_sparse(DenseMat::Identity(3, 3));
    const auto neg = dense_operator(-DenseMat::Identity(3, 3));
    Vector x;
    EXPECT_THROW(pcg(MatrixOperator(A), Vector::Ones(3), neg, x), Error);
}

TEST(Solvers, MultiplicativeWithoutAuxIsSymmetrizedSmoother)
{
    const auto p = test::make_ip_problem(2, {4, 4, 1}, 2, {2, 2, 1});
    const SparseMat& A = p->disc.A;
    auto sm = std::make_shared<PolySmoother>(PolySmoother::make(A, SmootherScaling::l1, 1));
    const AuxPreconditioner B(A, sm, p->ip.Pi, nullptr, AuxMode::multiplicative);
    const DenseMat Minv = dense_apply(*sm);
    const DenseMat M = Minv.inverse();
    const DenseMat oracle = Minv.transpose() * (M + M.transpose() - to_dense(A)) * Minv;
    EXPECT_LT((dense_apply(B) - oracle).norm(), 1e-9 * oracle.norm());
    Vector z;
    B.apply(Vector::Zero(B.size()), z);
    EXPECT_EQ(z.norm(), 0.0);
}

TEST(Solvers, AuxiliaryPreconditionersOnTwoElements)
{
    const auto p = test::make_ip_problem(2, {8, 4, 1}, 2, {2, 1, 1});
    const SparseMat& A = p->disc.A;
    auto sm = std::make_shared<PolySmoother>(PolySmoother::make(A, SmootherScaling::l1, 2));
    auto inner = std::make_shared<SparseCholesky>(p->ip.A);
    const AuxPreconditioner mult(A, sm, p->ip.Pi, inner, AuxMode::multiplicative);
    const AuxPreconditioner add(A, sm, p->ip.Pi, inner, AuxMode::additive);

    for (const AuxPreconditioner* B : {&mult, &add})
    {
        const DenseMat b = dense_apply(*B);
        EXPECT_LT((b - b.transpose()).norm(), 1e-10 * b.norm());
        Eigen::SelfAdjointEigenSolver<DenseMat> es(0.5 * (b + b.transpose()));
        EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
    }

    // additive oracle: M^{-1} + Pi A_h^{-1} Pi^T
    const DenseMat pi = to_dense(p->ip.Pi);
    const DenseMat add_oracle = dense_apply(*sm) + pi * to_dense(p->ip.A).inverse() * pi.transpose();
    EXPECT_LT((dense_apply(add) - add_oracle).norm(), 1e-9 * add_oracle.norm());

    std::mt19937_64 rng(4);
    const Vector rhs = test::random_vector(A.rows(), rng);
    Vector x;
    const SolveReport rep = pcg(MatrixOperator(A), rhs, mult, x);
    EXPECT_TRUE(rep.converged);
    EXPECT_LT((A * x - rhs).norm(), 1e-6 * rhs.norm());
}

TEST(Solvers, FlexiblePcgWithInnerPcg)
{
    const auto p = test::make_ip_problem(2, {8, 8, 1}, 1, {2, 2, 1});
    const SparseMat& A = p->disc.A;
    auto sm = std::make_shared<PolySmoother>(PolySmoother::make(A, SmootherScaling::l1, 2));
    auto aux_sm = std::make_shared<PolySmoother>(PolySmoother::make(p->ip.A, SmootherScaling::l1, 2));
    auto inner = std::make_shared<InnerPcg>(p->ip.A, aux_sm, 3);
    const AuxPreconditioner B(A, sm, p->ip.Pi, inner, AuxMode::multiplicative);
    std::mt19937_64 rng(5);
    const Vector rhs = test::random_vector(A.rows(), rng);
    Vector x;
    PcgOptions o;
    o.flexible = true;
    const SolveReport rep = pcg(MatrixOperator(A), rhs, B, x, o);
    EXPECT_TRUE(rep.converged);
    EXPECT_LT((A * x - rhs).norm(), 1e-6 * rhs.norm());
    EXPECT_THROW(InnerPcg(p->ip.A, aux_sm, 0), Error);
}

TEST(Solvers, ExtremeEigenvalueEstimates)
{
    std::mt19937_64 rng(6);
    const DenseMat a = test::random_spd(8, rng);
    const SparseMat A = test::to_sparse(a);
    const MatrixOperator op(A);

    EigenEstimate e = extreme_eigs(op, dense_operator(a.inverse()), 8);
    EXPECT_NEAR(e.lambda_min, 1.0, 1e-10);
    EXPECT_NEAR(e.lambda_max, 1.0, 1e-10);
    EXPECT_TRUE(e.breakdown);

    e = extreme_eigs(op, dense_operator(0.5 * a.inverse()), 8);
    EXPECT_NEAR(e.lambda_max, 0.5, 1e-10);

    // Jacobi: Ritz values lie inside the spectrum and converge to its ends
    const DenseMat dinv = a.diagonal().cwiseInverse().asDiagonal();
    const Vector s = a.diagonal().cwiseSqrt().cwiseInverse();
    Eigen::SelfAdjointEigenSolver<DenseMat> es(s.asDiagonal() * a * s.asDiagonal());
    const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
    const EigenEstimate part = extreme_eigs(op, dense_operator(dinv), 4);
    EXPECT_GE(part.lambda_min, lo - 1e-12);
    EXPECT_LE(part.lambda_max, hi + 1e-12);
    const EigenEstimate full = extreme_eigs(op, dense_operator(dinv), 8);
    EXPECT_NEAR(full.lambda_min, lo, 1e-8 * hi);
    EXPECT_NEAR(full.lambda_max, hi, 1e-8 * hi);
}
