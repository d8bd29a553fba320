// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

// Acceptance driver: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "ipaux/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

using namespace ipaux;

namespace
{

struct Outcome
{
    bool ok = true;
    std::ostringstream detail;

    void check(bool cond, const std::string& what)
    {
        if (!cond)
        {
            ok = false;
            detail << " [violated: " << what << "]";
        }
    }
};

Vector random_vector(Index n, std::mt19937_64& rng)
{
    std::normal_distribution<double> nd;
    Vector v(n);
    for (Index i = 0; i < n; ++i)
        v(i) = nd(rng);
    return v;
}

DenseMat dense_apply(const LinearOperator& op)
{
    const Index n = op.size();
    DenseMat m(n, n);
    for (Index j = 0; j < n; ++j)
        m.col(j) = op(Vector::Unit(n, j));
    return m;
}

ExperimentConfig ip_config(int dim, Index cells, Index agg)
{
    ExperimentConfig c;
    c.dim = dim;
    c.cells = cells;
    c.agg_cells = agg;
    c.coarse = false;
    return c;
}

std::string join(const std::vector<ExperimentRow>& rows)
{
    std::string s;
    for (const auto& r : rows)
        s += (s.empty() ? "" : ",") + std::to_string(r.n_it);
    return s;
}

void rows_ok(Outcome& o, const std::vector<ExperimentRow>& rows)
{
    for (const auto& r : rows)
    {
        o.check(r.error.empty(), "step " + std::to_string(r.step) + " failed: " + r.error);
        o.check(r.converged, "step " + std::to_string(r.step) + " did not converge");
    }
}

// -- 1 ---------------------------------------------------------------------

void exact_identities(Outcome& o)
{
    const auto p = build_problem(ip_config(2, 16, 4), 0, 2);
    std::mt19937_64 rng(1);
    double worst_pi = 0.0, worst_energy = 0.0;
    for (int k = 0; k < 100; ++k)
    {
        const Vector v = random_vector(p->disc.n_free(), rng);
        const Vector iv = p->ip.I * v;
        worst_pi = std::max(worst_pi, (p->ip.Pi * iv - v).cwiseAbs().maxCoeff() / v.cwiseAbs().maxCoeff());
        const double a = v.dot(p->disc.A * v), b = iv.dot(p->ip.A * iv);
        worst_energy = std::max(worst_energy, std::abs(a - b) / a);
    }
    o.check(worst_pi <= 4 * std::numeric_limits<double>::epsilon(), "Pi I = I");
    o.check(worst_energy <= 1e-12, "energy equality");

    // two Elements sharing one Face, Face values set to the trace average
    const Mesh mesh = build_mesh(2, {8, 4, 1}, 2);
    const Discretization disc = assemble(mesh, checkerboard_coefficient(mesh, 1e4, 2));
    const AggTopology topo = build_topology(disc.rel, partition_structured(mesh, {2, 1, 1}));
    const AdofMap ad = build_adof_map(topo);
    const IpSystem ip = build_ip_system(disc, topo, ad, {});
    const Index faces = topo.n_Faces;
    double worst_jump = 0.0;
    if (faces == 1)
    {
        const auto& fd = ad.face_dofs[0];
        for (int trial = 0; trial < 20; ++trial)
        {
            Vector x = Vector::Zero(ad.n_adofs());
            double expected = 0.0;
            std::vector<Vector> trace;
            for (Index T = 0; T < 2; ++T)
            {
                const auto& ed = ad.element_dofs[T];
                const Vector ve = random_vector(static_cast<Index>(ed.size()), rng);
                x.segment(ad.element_offset[T], ve.size()) = ve;
                expected += ve.dot(ip.element_matrices[T] * ve);
                Vector t(static_cast<Index>(fd.size()));
                for (std::size_t k = 0; k < fd.size(); ++k)
                    t(static_cast<Index>(k)) = ve(static_cast<Index>(std::find(ed.begin(), ed.end(), fd[k]) - ed.begin()));
                trace.push_back(t);
            }
            for (std::size_t k = 0; k < fd.size(); ++k)
            {
                const double t0 = trace[0](static_cast<Index>(k)), t1 = trace[1](static_cast<Index>(k));
                x(ad.face_offset[0] + static_cast<Index>(k)) = 0.5 * (t0 + t1);
                expected += 0.5 * ip.penalty_diag(fd[k]) * (t0 - t1) * (t0 - t1) / ip.delta;
            }
            worst_jump = std::max(worst_jump, std::abs(x.dot(ip.A * x) - expected) / expected);
        }
    }
    o.check(faces == 1, "two Elements share one Face");
    o.check(worst_jump <= 1e-12, "half-jump recovery");
    o.detail << " Pi-I " << worst_pi << ", energy " << worst_energy << ", jump " << worst_jump;
}

// -- 2 ---------------------------------------------------------------------

double p_trig(int nu, double t)
{
    const int n = 2 * nu + 1;
    const double s = std::sqrt(t);
    const double T = std::cos(n * std::acos(s));
    return (nu % 2 ? -1.0 : 1.0) / n * T / s * (1.0 - T * T);
}

void oracle_equivalences(Outcome& o)
{
    double worst_schur = 0.0, worst_bsc = 0.0, worst_smoother = 0.0, worst_eig = 0.0, worst_svd = 0.0;
    std::mt19937_64 rng(2);
    for (int order : {1, 2, 3})
    {
        const auto p = build_problem(ip_config(2, 12, 4), 0, order);
        const Index ne = p->adofs.n_edofs;
        const Index nb = p->adofs.n_bdofs;
        const DenseMat A = to_dense(p->ip.A);
        const DenseMat oracle = A.bottomRightCorner(nb, nb) -
                                A.bottomLeftCorner(nb, ne) *
                                    A.topLeftCorner(ne, ne).llt().solve(A.topRightCorner(ne, nb));
        const SchurSystem sc(p->ip.system);
        worst_schur = std::max(worst_schur, (to_dense(sc.S()) - oracle).norm() / oracle.norm());

        const SparseCholesky exact(sc.S());
        const auto llt = A.llt();
        for (int k = 0; k < 5; ++k)
        {
            const Vector r = random_vector(A.rows(), rng);
            Vector x;
            sc.apply(r, x, exact);
            const Vector y = llt.solve(r);
            worst_bsc = std::max(worst_bsc, (x - y).norm() / y.norm());
        }

        // local eigenpairs on the Element matrices
        for (Index T = 0; T < p->topo.n_Elements; ++T)
        {
            const DenseMat& at = p->ip.element_matrices[T];
            const Vector d = at.diagonal();
            const ElementBasis eb = element_eigenbasis(at, d, 0.05);
            for (Index i = 0; i < eb.vectors.cols(); ++i)
            {
                const Vector q = eb.vectors.col(i);
                worst_eig = std::max(worst_eig, (at * q - eb.values(i) * d.cwiseProduct(q)).norm() / at.norm());
            }
            const Vector s = d.cwiseSqrt().cwiseInverse();
            Eigen::SelfAdjointEigenSolver<DenseMat> es(s.asDiagonal() * at * s.asDiagonal(), Eigen::EigenvaluesOnly);
            worst_eig = std::max(worst_eig, (eb.values - es.eigenvalues()).norm() / es.eigenvalues().norm());
        }
    }

    // smoother error operator against p_nu evaluated through a dense eigendecomposition
    {
        const auto p = build_problem(ip_config(2, 6, 3), 0, 2);
        const SparseMat& A = p->disc.A;
        const Index n = static_cast<Index>(A.rows());
        for (int nu : {1, 2, 3})
        {
            const PolySmoother sm = PolySmoother::make(A, SmootherScaling::diagonal, nu);
            const DenseMat E = DenseMat::Identity(n, n) - dense_apply(sm) * to_dense(A);
            const Vector s = sm.scaling().cwiseSqrt();
            Eigen::SelfAdjointEigenSolver<DenseMat> es(s.cwiseInverse().asDiagonal() * to_dense(A) *
                                                       s.cwiseInverse().asDiagonal() / sm.b());
            Vector pl(n);
            for (Index i = 0; i < n; ++i)
                pl(i) = p_trig(nu, std::clamp(es.eigenvalues()(i), 1e-300, 1.0));
            const DenseMat ref = s.cwiseInverse().asDiagonal() * es.eigenvectors() * pl.asDiagonal() *
                                 es.eigenvectors().transpose() * s.asDiagonal();
            worst_smoother = std::max(worst_smoother, (E - ref).norm());
        }
    }

    // Face SVD bases: same span as a dense SVD oracle
    for (int k = 0; k < 10; ++k)
    {
        const Index rows = 6 + 3 * k, cols = 2 + k % 4;
        DenseMat t(rows, 2 * cols);
        const DenseMat half = Eigen::MatrixXd::NullaryExpr(rows, cols, [&]() {
            return std::normal_distribution<double>()(rng);
        });
        t << half, 2.0 * half;
        const DenseMat b = face_trace_basis(t);
        Eigen::JacobiSVD<DenseMat> svd(t, Eigen::ComputeThinU);
        const DenseMat u = svd.matrixU().leftCols(cols);
        worst_svd = std::max(worst_svd, (b * b.transpose() - u * u.transpose()).norm());
        worst_svd = std::max(worst_svd, (t - b * (b.transpose() * t)).norm() / t.norm());
        o.check(b.cols() == cols, "Face basis rank");
    }

    o.check(worst_schur <= 1e-10, "assembled Schur complement");
    o.check(worst_bsc <= 1e-10, "B_sc equals inverse");
    o.check(worst_smoother <= 1e-10, "smoother error operator");
    o.check(worst_eig <= 1e-10, "local eigenpairs");
    o.check(worst_svd <= 1e-10, "Face SVD bases");
    o.detail << " schur " << worst_schur << ", B_sc " << worst_bsc << ", smoother " << worst_smoother
             << ", eig " << worst_eig << ", svd " << worst_svd;
}

// -- 3 ---------------------------------------------------------------------

void empirical_bounds(Outcome& o)
{
    std::mt19937_64 rng(3);
    int violations = 0;
    double max_approx = 0.0, max_cont = 0.0;
    for (int dim : {2, 3})
        for (int order : {1, 3})
        {
            ExperimentConfig c = ip_config(dim, dim == 2 ? 16 : 8, dim == 2 ? 4 : 2);
            c.contrast = 1e4;
            c.delta = 1.0;
            const auto p = build_problem(c, 0, order);
            const double Lambda = measure_lambda(p->ip, p->adofs);
            const double kap = static_cast<double>(p->adofs.kappa);
            const double approx_bound = 1.0 + Lambda * c.delta * kap * kap;
            const double cont_bound = 2.0 * (2.0 + Lambda * c.delta * kap * kap);
            // samples in blocks so each sparse product streams the matrix once per block
            constexpr int kSamples = 1000, kBlock = 50;
            for (int k0 = 0; k0 < kSamples; k0 += kBlock)
            {
                DenseMat V(p->adofs.n_adofs(), kBlock);
                for (int j = 0; j < kBlock; ++j)
                    V.col(j) = random_vector(V.rows(), rng);
                const DenseMat W = p->ip.Pi * V;
                const DenseMat Dv = p->ip.I * W - V;
                const DenseMat AV = p->ip.A * V, AD = p->ip.A * Dv, AW = p->disc.A * W;
                for (int j = 0; j < kBlock; ++j)
                {
                    const double e = V.col(j).dot(AV.col(j));
                    const double r1 = Dv.col(j).dot(AD.col(j)) / e, r2 = W.col(j).dot(AW.col(j)) / e;
                    violations += (r1 > approx_bound) + (r2 > cont_bound);
                    max_approx = std::max(max_approx, r1 / approx_bound);
                    max_cont = std::max(max_cont, r2 / cont_bound);
                }
            }
        }
    o.check(violations == 0, std::to_string(violations) + " bound violations");
    o.detail << " 4000 samples, max ratio/bound " << max_approx << " (approximation), " << max_cont
             << " (continuity)";
}

// -- 4, 6, 8, 9 ------------------------------------------------------------

std::vector<OcMetrics> g_oc;

void record_oc(const std::vector<ExperimentRow>& rows)
{
    for (const auto& r : rows)
        g_oc.push_back(r.oc);
}

std::vector<ExperimentRow> g_low;

void mesh_independence(Outcome& o)
{
    const ExperimentConfig c = preset("loworder-2d-exact");
    g_low = run_experiment(c);
    record_oc(g_low);
    rows_ok(o, g_low);
    o.check(g_low.size() == 4, "four refinements");
    for (std::size_t i = 0; i < g_low.size(); ++i)
    {
        o.check(g_low[i].n_it <= 25, "n_it <= 25 at step " + std::to_string(i));
        if (i > 0)
            o.check(g_low[i].n_it - g_low[i - 1].n_it <= 5, "growth <= 5 at step " + std::to_string(i));
    }
    o.detail << " n_it " << join(g_low) << " on 16^2..128^2";
}

void condensation_consistency(Outcome& o)
{
    ExperimentConfig c = preset("loworder-2d-exact");
    c.condense = true;
    const auto rows = run_experiment(c);
    record_oc(rows);
    rows_ok(o, rows);
    o.check(rows.size() == g_low.size(), "same steps");
    for (std::size_t i = 0; i < std::min(rows.size(), g_low.size()); ++i)
        o.check(std::abs(rows[i].n_it - g_low[i].n_it) <= 1, "step " + std::to_string(i) + " differs by > 1");
    o.detail << " full " << join(g_low) << ", condensed " << join(rows);
}

void spectral_equivalence(Outcome& o)
{
    ExperimentConfig c = preset("loworder-2d-exact");
    c.refinements = {0, 1, 2};
    c.eig_steps = 200;
    const auto rows = run_experiment(c);
    record_oc(rows);
    rows_ok(o, rows);
    std::vector<double> kappa;
    for (const auto& r : rows)
    {
        o.check(r.lambda_min > 0.0, "positive lambda_min");
        kappa.push_back(r.lambda_max / r.lambda_min);
        o.detail << " " << r.lambda_min << ".." << r.lambda_max;
    }
    for (std::size_t i = 1; i < kappa.size(); ++i)
    {
        const double q = std::max(kappa[i] / kappa[i - 1], kappa[i - 1] / kappa[i]);
        o.check(q < 2.0, "ratio between steps " + std::to_string(i - 1) + " and " + std::to_string(i));
        o.detail << (i == 1 ? "; successive ratios " : ", ") << q;
    }
}

// -- 5, 7 ------------------------------------------------------------------

std::vector<ExperimentRow> g_high;

void high_order(Outcome& o)
{
    g_high = run_experiment(preset("highorder-schur"));
    record_oc(g_high);
    rows_ok(o, g_high);
    o.check(g_high.size() == 8, "orders 1..8");
    for (const auto& r : g_high)
        o.check(r.n_it <= 12, "n_it <= 12 at order " + std::to_string(r.order));
    o.detail << " n_it " << join(g_high) << " for orders 1..8";
}

void amge_inner(Outcome& o)
{
    const auto rows = run_experiment(preset("highorder-schur-amge"));
    record_oc(rows);
    rows_ok(o, rows);
    o.check(rows.size() == g_high.size(), "same steps as the exact run");
    for (std::size_t i = 0; i < std::min(rows.size(), g_high.size()); ++i)
        o.check(rows[i].n_it <= 3 * g_high[i].n_it, "order " + std::to_string(rows[i].order) + " above 3x");
    o.detail << " n_it " << join(rows) << " vs exact " << join(g_high);
}

void oc_ledger(Outcome& o)
{
    o.check(!g_oc.empty(), "runs recorded");
    double worst = 0.0;
    for (const auto& m : g_oc)
    {
        worst = std::max(worst, std::abs(m.oc_orig - (1.0 + m.oc_aux * (m.oc_ip - 1.0))));
        o.check(m.oc_ip >= 1.0 && m.oc_aux >= 1.0 && m.oc_orig >= 1.0, "OC >= 1");
    }
    o.check(worst <= 1e-15, "identity");
    o.detail << " " << g_oc.size() << " runs, worst identity residual " << worst;
}

} // namespace

int main()
{
    struct Criterion
    {
        int id;
        const char* name;
        double limit_s;  // 0: no runtime bound
        std::function<void(Outcome&)> run;
    };
    const std::vector<Criterion> criteria{
        {1, "exact identities", 1.0, exact_identities},
        {2, "oracle equivalences", 30.0, oracle_equivalences},
        {3, "empirical approximation and continuity bounds", 60.0, empirical_bounds},
        {4, "mesh independence", 180.0, mesh_independence},
        {6, "condensation consistency", 0.0, condensation_consistency},
        {9, "spectral equivalence diagnostic", 0.0, spectral_equivalence},
        {5, "high-order robustness", 300.0, high_order},
        {7, "AMGe inner solver", 0.0, amge_inner},
        {8, "operator complexity ledger", 0.0, oc_ledger},
    };
    int failed = 0;
    for (const auto& c : criteria)
    {
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try
        {
            c.run(o);
        }
        catch (const std::exception& e)
        {
            o.check(false, std::string("exception: ") + e.what());
        }
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_s > 0.0)
            o.check(s < c.limit_s, "runtime above " + std::to_string(static_cast<int>(c.limit_s)) + " s");
        failed += !o.ok;
        std::printf("%s criterion %d (%s, %.2f s):%s\n", o.ok ? "PASS" : "FAIL", c.id, c.name, s,
                    o.detail.str().c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
