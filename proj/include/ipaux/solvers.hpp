// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

/**
   @file PCG, the auxiliary space preconditioners, and spectral diagnostics.
*/

#pragma once

#include "ipaux/linalg.hpp"
#include "ipaux/smoothers.hpp"

#include <iosfwd>
#include <memory>

namespace ipaux
{

struct PcgOptions
{
    double rel_tol = 1e-8;
    int max_iter = 2000;
    /// Polak-Ribiere beta, for preconditioners that are not fixed linear maps.
    bool flexible = false;
    /// Keep alpha/beta for Lanczos estimates.
    bool record_coefficients = false;
};

struct SolveReport
{
    int iterations = 0;
    std::vector<double> measures;  ///< r_k^T B^{-1} r_k, k = 0..iterations
    double final_relative = 0.0;   ///< sqrt(measure_k / measure_0)
    bool converged = false;
    double wall_ms = 0.0;
    std::vector<double> alphas;
    std::vector<double> betas;
};

/**
   Preconditioned CG for A x = rhs starting from x. Stops when
   r^T B^{-1} r <= rel_tol^2 r_0^T B^{-1} r_0. Throws on a negative
   r^T B^{-1} r (indefinite preconditioner) or nonpositive p^T A p.
*/
SolveReport pcg(const LinearOperator& A, const Vector& rhs, const LinearOperator& Binv, Vector& x,
                const PcgOptions& opts = {});

enum class AuxMode
{
    additive,
    multiplicative
};

/**
   Auxiliary space preconditioner for A with smoother M, transfer Pi from the
   auxiliary space, and an inner solver C^{-1} there (null: C^{-1} = 0).

   multiplicative: v1 = M^{-1} v0, rhat = Pi^T (v0 - A v1), vhat = C^{-1} rhat,
                   v2 = v1 + Pi vhat, v = v2 + M^{-T} (v0 - A v2)
   additive:       v = M^{-1} v0 + Pi C^{-1} Pi^T v0
*/
class AuxPreconditioner : public LinearOperator
{
public:
    AuxPreconditioner(const SparseMat& A, std::shared_ptr<const PolySmoother> smoother, const SparseMat& Pi,
                      std::shared_ptr<const LinearOperator> aux_solver, AuxMode mode);
    Index size() const override { return static_cast<Index>(a_.rows()); }
    void apply(const Vector& v0, Vector& v) const override;

private:
    const SparseMat& a_;
    std::shared_ptr<const PolySmoother> smoother_;
    const SparseMat& pi_;
    std::shared_ptr<const LinearOperator> aux_;
    AuxMode mode_;
};

/// A fixed number of PCG steps from a zero guess; a nonlinear operator, use flexible outer PCG.
class InnerPcg : public LinearOperator
{
public:
    InnerPcg(const SparseMat& A, std::shared_ptr<const LinearOperator> prec, int iterations)
        : a_(A), op_(A), prec_(std::move(prec)), iterations_(iterations)
    {
        require(iterations_ >= 1, "InnerPcg: need at least one iteration");
    }
    Index size() const override { return static_cast<Index>(a_.rows()); }
    void apply(const Vector& r, Vector& x) const override;

private:
    const SparseMat& a_;
    MatrixOperator op_;
    std::shared_ptr<const LinearOperator> prec_;
    int iterations_;
};

struct EigenEstimate
{
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    int steps = 0;
    bool breakdown = false;  ///< Krylov space exhausted early; estimates from the partial tridiagonal
};

/// Lanczos estimates of the extreme eigenvalues of B^{-1} A from the CG coefficients.
EigenEstimate extreme_eigs(const LinearOperator& A, const LinearOperator& Binv, int n_iter,
                           unsigned seed = 2026);

/// Writes "iteration,measure,relative" rows.
void write_residual_history(std::ostream& os, const SolveReport& report);

} // namespace ipaux
