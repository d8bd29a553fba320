// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

#include "ipaux/solvers.hpp"

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

namespace ipaux
{

SolveReport pcg(const LinearOperator& A, const Vector& rhs, const LinearOperator& Binv, Vector& x,
                const PcgOptions& opts)
{
    const auto t0 = std::chrono::steady_clock::now();
    const Index n = A.size();
    require(rhs.size() == n && Binv.size() == n, "pcg: size mismatch");
    if (x.size() != n)
        x = Vector::Zero(n);

    SolveReport rep;
    Vector r = rhs - A(x);
    Vector z(n);
    Binv.apply(r, z);
    double rho = r.dot(z);
    require(rho >= 0.0, "pcg: indefinite preconditioner (r^T B^{-1} r < 0 at the start)");
    rep.measures.push_back(rho);
    const double rho0 = rho;
    if (rho0 == 0.0)
    {
        rep.converged = true;
        rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        return rep;
    }
    const double stop = opts.rel_tol * opts.rel_tol * rho0;

    Vector p = z;
    Vector q(n);
    Vector r_old;
    for (int k = 0; k < opts.max_iter; ++k)
    {
        A.apply(p, q);
        const double pq = p.dot(q);
        require(pq > 0.0, "pcg: p^T A p <= 0, operator not positive definite");
        const double alpha = rho / pq;
        x += alpha * p;
        if (opts.flexible)
            r_old = r;
        r -= alpha * q;
        Binv.apply(r, z);
        const double rho_new = r.dot(z);
        require(rho_new >= 0.0, "pcg: indefinite preconditioner (negative r^T B^{-1} r at iteration " +
                                    std::to_string(k + 1) + ")");
        rep.measures.push_back(rho_new);
        rep.iterations = k + 1;
        const double beta = opts.flexible ? z.dot(r - r_old) / rho : rho_new / rho;
        if (opts.record_coefficients)
        {
            rep.alphas.push_back(alpha);
            rep.betas.push_back(beta);
        }
        if (rho_new <= stop)
        {
            rep.converged = true;
            rho = rho_new;
            break;
        }
        p = z + beta * p;
        rho = rho_new;
    }
    rep.final_relative = std::sqrt(rep.measures.back() / rho0);
    rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

AuxPreconditioner::AuxPreconditioner(const SparseMat& A, std::shared_ptr<const PolySmoother> smoother,
                                     const SparseMat& Pi, std::shared_ptr<const LinearOperator> aux_solver,
                                     AuxMode mode)
    : a_(A), smoother_(std::move(smoother)), pi_(Pi), aux_(std::move(aux_solver)), mode_(mode)
{
    require(smoother_ && smoother_->size() == A.rows(), "AuxPreconditioner: smoother size mismatch");
    require(Pi.rows() == A.rows(), "AuxPreconditioner: Pi must map the auxiliary space onto the dofs");
    require(!aux_ || aux_->size() == Pi.cols(), "AuxPreconditioner: inner solver size mismatch");
}

void AuxPreconditioner::apply(const Vector& v0, Vector& v) const
{
    const Index n = size();
    require(v0.size() == n, "AuxPreconditioner: length mismatch");
    if (mode_ == AuxMode::additive)
    {
        smoother_->apply(v0, v);
        if (aux_)
        {
            const Vector rhat = pi_.transpose() * v0;
            Vector vhat(rhat.size());
            aux_->apply(rhat, vhat);
            v += pi_ * vhat;
        }
        return;
    }
    // (i)
    Vector v1(n);
    smoother_->apply(v0, v1);
    // (ii)-(iv)
    Vector v2 = v1;
    if (aux_)
    {
        const Vector rhat = pi_.transpose() * (v0 - a_ * v1);
        Vector vhat(rhat.size());
        aux_->apply(rhat, vhat);
        v2 += pi_ * vhat;
    }
    // (v)
    Vector corr(n);
    smoother_->apply_transpose(v0 - a_ * v2, corr);
    v = v2 + corr;
}

void InnerPcg::apply(const Vector& r, Vector& x) const
{
    x = Vector::Zero(size());
    PcgOptions o;
    o.rel_tol = 0.0;
    o.max_iter = iterations_;
    pcg(op_, r, *prec_, x, o);
}

EigenEstimate extreme_eigs(const LinearOperator& A, const LinearOperator& Binv, int n_iter, unsigned seed)
{
    require(n_iter >= 1, "extreme_eigs: need at least one step");
    const Index n = A.size();
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vector rhs(n);
    for (Index i = 0; i < n; ++i)
        rhs(i) = dist(rng);
    Vector x = Vector::Zero(n);
    PcgOptions o;
    o.rel_tol = 1e-14;
    o.max_iter = std::min<int>(n_iter, static_cast<int>(n));
    o.record_coefficients = true;
    const SolveReport rep = pcg(A, rhs, Binv, x, o);

    EigenEstimate est;
    const int m = static_cast<int>(rep.alphas.size());
    est.steps = m;
    est.breakdown = rep.converged && m < n_iter;
    if (m == 0)
        return est;
    // Lanczos tridiagonal from the CG coefficients
    Vector diag(m), off(std::max(0, m - 1));
    for (int j = 0; j < m; ++j)
    {
        diag(j) = 1.0 / rep.alphas[j];
        if (j > 0)
            diag(j) += rep.betas[j - 1] / rep.alphas[j - 1];
        if (j + 1 < m)
            off(j) = std::sqrt(rep.betas[j]) / rep.alphas[j];
    }
    Eigen::SelfAdjointEigenSolver<DenseMat> es;
    es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
    est.lambda_min = es.eigenvalues()(0);
    est.lambda_max = es.eigenvalues()(m - 1);
    return est;
}

void write_residual_history(std::ostream& os, const SolveReport& report)
{
    os << "iteration,measure,relative\n";
    const double r0 = report.measures.empty() ? 0.0 : report.measures.front();
    char buf[128];
    for (std::size_t k = 0; k < report.measures.size(); ++k)
    {
        const double rel = r0 > 0.0 ? std::sqrt(report.measures[k] / r0) : 0.0;
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", k, report.measures[k], rel);
        os << buf;
    }
}

} // namespace ipaux
