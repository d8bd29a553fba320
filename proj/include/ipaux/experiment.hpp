// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

/**
   @file Experiment harness: configuration, problem and solver composition,
   operator complexities, CSV reports, and matrix export.
*/

#pragma once

#include "ipaux/agglomerate.hpp"
#include "ipaux/amge.hpp"
#include "ipaux/coarse_aux.hpp"
#include "ipaux/condensation.hpp"
#include "ipaux/ip_reformulation.hpp"
#include "ipaux/mesh_fe.hpp"
#include "ipaux/smoothers.hpp"
#include "ipaux/solvers.hpp"

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace ipaux
{

enum class AuxSolverKind
{
    exact,
    amge,
    pcg_amge
};

struct ExperimentConfig
{
    std::string name = "custom";
    int dim = 2;
    Index cells = 16;               ///< cells per axis before refinement
    std::vector<int> refinements{0};
    std::vector<int> orders{1};
    NodeFamily nodes = NodeFamily::equispaced;
    double contrast = 1e4;          ///< checkerboard contrast; 1 gives a constant coefficient
    Index pattern_cells = 2;        ///< checkerboard boxes per axis
    Index agg_cells = 4;            ///< fine cells per Element per axis

    double delta = 1.0;
    PenaltyDiagonal penalty = PenaltyDiagonal::diagonal;
    bool coarse = true;             ///< spectral coarse space; off uses the fine IP space
    double theta = 0.05;
    Index eig_per_element = 0;      ///< > 0 overrides theta
    double svd_rel_tol = 1e-10;
    bool condense = false;

    AuxMode mode = AuxMode::multiplicative;
    int nu = 2;
    SmootherScaling smoother_scaling = SmootherScaling::l1;

    AuxSolverKind aux = AuxSolverKind::exact;
    int aux_pcg_iters = 3;
    double theta_s = 0.05;
    Index amge_eigenvectors = 0;
    Index amge_min_svd_drop = 0;
    int amge_max_levels = 12;
    Index amge_coarse_size = 100;
    AmgeAgglomeration amge_agglomeration = AmgeAgglomeration::fixed;
    int nu_s = 2;

    double tol = 1e-8;
    int max_iter = 2000;
    int eig_steps = 0;              ///< > 0 adds Lanczos estimates of B^{-1}A to each row
    bool timing = false;            ///< off keeps the CSV byte-identical across reruns
    int jobs = 1;                   ///< steps run concurrently

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Names of the built-in presets.
std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name);

/// Applies one "key=value" assignment; "preset=<name>" resets to that preset.
void apply_setting(ExperimentConfig& cfg, const std::string& assignment);

/// key=value lines; '#' starts a comment.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string to_text(const ExperimentConfig& cfg);

struct OcMetrics
{
    double oc_ip = 1.0;
    double oc_aux = 1.0;
    double oc_orig = 1.0;
    std::size_t nnz_A = 0;
    std::vector<std::size_t> nnz_aux;  ///< H_0 first, then the AMGe levels
};

/// oc_ip = 1 + nnz(H0)/nnz(A), oc_aux = 1 + sum_{l>=1} nnz(H_l)/nnz(H0), oc_orig = 1 + oc_aux (oc_ip - 1).
OcMetrics compute_oc(std::size_t nnz_A, std::size_t nnz_H0, const std::vector<std::size_t>& nnz_levels);

/// Everything built for one mesh/order step. Members reference each other; not movable.
struct Problem
{
    Mesh mesh;
    Discretization disc;
    AggTopology topo;
    AdofMap adofs;
    IpSystem ip;
    std::unique_ptr<CoarseSpace> coarse;
    std::unique_ptr<SchurSystem> schur;  ///< of the auxiliary system, when condensed

    Problem() = default;
    Problem(const Problem&) = delete;
    Problem& operator=(const Problem&) = delete;

    const ElementSystem& aux_system() const { return coarse ? coarse->system : ip.system; }
    const SparseMat& aux_matrix() const { return coarse ? coarse->A_H : ip.A; }
    const SparseMat& transfer() const { return coarse ? coarse->Pi_H : ip.Pi; }
    /// Matrix handed to the inner solver: the Schur complement when condensed.
    const SparseMat& inner_matrix() const { return schur ? schur->S() : aux_matrix(); }
};

std::unique_ptr<Problem> build_problem(const ExperimentConfig& cfg, int refinement, int order);

/// Largest system the "exact" inner solver accepts.
inline constexpr Index kMaxExactSize = 20000;

struct SolverSetup
{
    std::shared_ptr<PolySmoother> smoother;
    std::shared_ptr<Hierarchy> hierarchy;
    std::shared_ptr<LinearOperator> inner;  ///< C^{-1} on the auxiliary space
    std::unique_ptr<AuxPreconditioner> preconditioner;
    bool flexible = false;
    OcMetrics oc;
};

SolverSetup build_solver(const Problem& problem, const ExperimentConfig& cfg);

struct ExperimentRow
{
    int step = 0;
    int refinement = 0;
    int order = 1;
    Index n_dofs = 0;
    Index n_aux = 0;  ///< Adofs, or Bdofs when condensed
    OcMetrics oc;
    int n_it = 0;
    double final_measure = 0.0;
    double wall_ms = 0.0;
    bool converged = false;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    std::vector<double> measures;  ///< PCG residual history
    std::string hierarchy;         ///< AMGe summary, when one was built
    std::string error;
};

/// Runs every (refinement, order) step; rows with a solver failure are kept and flagged.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr);

void write_csv(std::ostream& os, const ExperimentConfig& cfg, const std::vector<ExperimentRow>& rows);

/// Writes the requested matrices ("A", "ip", "schur", "coarse") of the first step into \a dir.
std::vector<std::string> export_matrices(const ExperimentConfig& cfg, const std::string& what,
                                         const std::string& dir);

} // namespace ipaux
