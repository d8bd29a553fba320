// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

#include "ipaux/experiment.hpp"

#include "ipaux/matrix_market.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace ipaux
{

namespace
{

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
    try
    {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        require(used == v.size(), "");
        return d;
    }
    catch (const std::exception&)
    {
        throw Error("config: '" + key + "' expects a number, got '" + v + "'");
    }
}

long to_long(const std::string& key, const std::string& v)
{
    try
    {
        std::size_t used = 0;
        const long i = std::stol(v, &used);
        require(used == v.size(), "");
        return i;
    }
    catch (const std::exception&)
    {
        throw Error("config: '" + key + "' expects an integer, got '" + v + "'");
    }
}

std::vector<int> to_int_list(const std::string& key, const std::string& v)
{
    std::vector<int> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        item = trim(item);
        if (item.empty())
            continue;
        const auto dots = item.find("..");
        if (dots != std::string::npos)
        {
            const long a = to_long(key, trim(item.substr(0, dots)));
            const long b = to_long(key, trim(item.substr(dots + 2)));
            require(a <= b, "config: '" + key + "' has an empty range " + item);
            for (long i = a; i <= b; ++i)
                out.push_back(static_cast<int>(i));
        }
        else
            out.push_back(static_cast<int>(to_long(key, item)));
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "on" || v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "off" || v == "false" || v == "0" || v == "no")
        return false;
    throw Error("config: '" + key + "' expects on/off, got '" + v + "'");
}

std::string fmt_double(double d)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
}

std::string fmt_list(const std::vector<int>& v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

template <class E>
struct EnumNames
{
    std::vector<std::pair<E, std::string>> names;

    E parse(const std::string& key, const std::string& v) const
    {
        for (const auto& [e, n] : names)
            if (n == v)
                return e;
        std::string allowed;
        for (const auto& p : names)
            allowed += " " + p.second;
        throw Error("config: '" + key + "' must be one of" + allowed + ", got '" + v + "'");
    }
    std::string str(E e) const
    {
        for (const auto& [x, n] : names)
            if (x == e)
                return n;
        return "?";
    }
};

const EnumNames<NodeFamily> kNodes{{{NodeFamily::equispaced, "equispaced"}, {NodeFamily::gauss_lobatto, "gll"}}};
const EnumNames<PenaltyDiagonal> kPenalty{
    {{PenaltyDiagonal::diagonal, "diagonal"}, {PenaltyDiagonal::l1_weights, "l1"}}};
const EnumNames<AuxMode> kMode{{{AuxMode::multiplicative, "mult"}, {AuxMode::additive, "add"}}};
const EnumNames<SmootherScaling> kScaling{{{SmootherScaling::l1, "l1"}, {SmootherScaling::diagonal, "diagonal"}}};
const EnumNames<AuxSolverKind> kAux{
    {{AuxSolverKind::exact, "exact"}, {AuxSolverKind::amge, "amge"}, {AuxSolverKind::pcg_amge, "pcg-amge"}}};
const EnumNames<AmgeAgglomeration> kAgg{
    {{AmgeAgglomeration::fixed, "fixed"}, {AmgeAgglomeration::pairwise, "pairwise"}}};

struct Field
{
    std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const ExperimentConfig&)> get;
};

// Ordered as written by to_text().
const std::vector<std::pair<std::string, Field>>& fields()
{
    using C = ExperimentConfig;
    using S = const std::string&;
    static const std::vector<std::pair<std::string, Field>> f = {
        {"name", {[](C& c, S, S v) { c.name = v; }, [](const C& c) { return c.name; }}},
        {"dim",
         {[](C& c, S k, S v) { c.dim = static_cast<int>(to_long(k, v)); },
          [](const C& c) { return std::to_string(c.dim); }}},
        {"cells",
         {[](C& c, S k, S v) { c.cells = static_cast<Index>(to_long(k, v)); },
          [](const C& c) { return std::to_string(c.cells); }}},
        {"refinements",
         {[](C& c, S k, S v) { c.refinements = to_int_list(k, v); },
          [](const C& c) { return fmt_list(c.refinements); }}},
        {"orders",
         {[](C& c, S k, S v) { c.orders = to_int_list(k, v); }, [](const C& c) { return fmt_list(c.orders); }}},
        {"nodes",
         {[](C& c, S k, S v) { c.nodes = kNodes.parse(k, v); }, [](const C& c) { return kNodes.str(c.nodes); }}},
        {"contrast",
         {[](C& c, S k, S v) { c.contrast = to_double(k, v); },
          [](const C& c) { return fmt_double(c.contrast); }}},
        {"pattern_cells",
         {[](C& c, S k, S v) { c.pattern_cells = static_cast<Index>(to_long(k, v)); },
          [](const C& c) { return std::to_string(c.pattern_cells); }}},
        {"agg_cells",
         {[](C& c, S k, S v) { c.agg_cells = static_cast<Index>(to_long(k, v)); },
          [](const C& c) { return std::to_string(c.agg_cells); }}},
        {"delta",
         {[](C& c, S k, S v) { c.delta = to_double(k, v); }, [](const C& c) { return fmt_double(c.delta); }}},
        {"penalty_diag",
         {[](C& c, S k, S v) { c.penalty = kPenalty.parse(k, v); },
          [](const C& c) { return kPenalty.str(c.penalty); }}},
        {"coarse",
         {[](C& c, S k, S v) {
              if (v == "spectral")
                  c.coarse = true;
              else if (v == "none")
                  c.coarse = false;
              else
                  throw Error("config: '" + k + "' must be spectral or none, got '" + v + "'");
          },
          [](const C& c) { return std::string(c.coarse ? "spectral" : "none"); }}},
        {"theta",
         {[](C& c, S k, S v) { c.theta = to_double(k, v); }, [](const C& c) { return fmt_double(c.theta); }}},
        {"eig_per_element",
         {[](C& c, S k, S v) { c.eig_per_element = static_cast<Index>(to_long(k, v)); },
          [](const C& c) { return std::to_string(c.eig_per_element); }}},
        {"svd_rel_tol",
         {[](C& c, S k, S v) { c.svd_rel_tol = to_double(k, v); },
          [](const C& c) { return fmt_double(c.svd_rel_tol); }}},
        {"condense",
         {[](C& c, S k, S v) { c.condense = to_bool(k, v); },
          [](const C& c) { return std::string(c.condense ? "on" : "off"); }}},
        {"mode",
         {[](C& c, S k, S v) { c.mode = kMode.parse(k, v); }, [](const C& c) { return kMode.str(c.mode); }}},
        {"nu",
         {[](C& c, S k, S v) { c.nu = static_cast<int>(to_long(k, v)); },
          [](const C& c) { return std::to_string(c.nu); }}},
        {"smoother_scaling",
         {[](C& c, S k, S v) { c.smoother_scaling = kScaling.parse(k, v); },
          [](const C& c) { return kScaling.str(c.smoother_scaling); }}},
        {"aux",
         {[](C& c, S k, S v) { c.aux = kAux.parse(k, v); }, [](const C& c) { return kAux.str(c.aux); }}},
        {"aux_pcg_iters",
         {[](C& c, S k, S v) { c.aux_pcg_iters = static_cast<int>(to_long(k, v)); },
          [](const C& c) { return std::to_string(c.aux_pcg_iters); }}},
        {"theta_s",
         {[](C& c, S k, S v) { c.theta_s = to_double(k, v); }, [](const C& c) { return fmt_double(c.theta_s); }}},
        {"amge_eigenvectors",
         {[](C& c, S k, S v) { c.amge_eigenvectors = static_cast<Index>(to_long(k, v)); },
          [](const C& c) { return std::to_string(c.amge_eigenvectors); }}},
        {"amge_min_svd_drop",
         {[](C& c, S k, S v) { c.amge_min_svd_drop = static_cast<Index>(to_long(k, v)); },
          [](const C& c) { return std::to_string(c.amge_min_svd_drop); }}},
        {"amge_max_levels",
         {[](C& c, S k, S v) { c.amge_max_levels = static_cast<int>(to_long(k, v)); },
          [](const C& c) { return std::to_string(c.amge_max_levels); }}},
        {"amge_coarse_size",
         {[](C& c, S k, S v) { c.amge_coarse_size = static_cast<Index>(to_long(k, v)); },
          [](const C& c) { return std::to_string(c.amge_coarse_size); }}},
        {"amge_agglomeration",
         {[](C& c, S k, S v) { c.amge_agglomeration = kAgg.parse(k, v); },
          [](const C& c) { return kAgg.str(c.amge_agglomeration); }}},
        {"nu_s",
         {[](C& c, S k, S v) { c.nu_s = static_cast<int>(to_long(k, v)); },
          [](const C& c) { return std::to_string(c.nu_s); }}},
        {"tol", {[](C& c, S k, S v) { c.tol = to_double(k, v); }, [](const C& c) { return fmt_double(c.tol); }}},
        {"max_iter",
         {[](C& c, S k, S v) { c.max_iter = static_cast<int>(to_long(k, v)); },
          [](const C& c) { return std::to_string(c.max_iter); }}},
        {"eig_steps",
         {[](C& c, S k, S v) { c.eig_steps = static_cast<int>(to_long(k, v)); },
          [](const C& c) { return std::to_string(c.eig_steps); }}},
        {"timing",
         {[](C& c, S k, S v) { c.timing = to_bool(k, v); },
          [](const C& c) { return std::string(c.timing ? "on" : "off"); }}},
        {"jobs",
         {[](C& c, S k, S v) { c.jobs = static_cast<int>(to_long(k, v)); },
          [](const C& c) { return std::to_string(c.jobs); }}},
    };
    return f;
}

void validate(const ExperimentConfig& c)
{
    require(c.dim == 2 || c.dim == 3, "config: dim must be 2 or 3");
    require(c.cells >= 1, "config: cells must be positive");
    for (int r : c.refinements)
        require(r >= 0 && r <= 10, "config: refinements must lie in [0,10]");
    for (int p : c.orders)
        require(p >= 1 && p <= 16, "config: orders must lie in [1,16]");
    require(c.contrast > 0.0, "config: contrast must be positive");
    require(c.pattern_cells >= 1 && c.agg_cells >= 1, "config: pattern_cells and agg_cells must be positive");
    require(c.delta > 0.0, "config: delta must be positive");
    require(c.theta > 0.0 && c.theta < 1.0, "config: theta must lie in (0,1)");
    require(c.theta_s > 0.0 && c.theta_s < 1.0, "config: theta_s must lie in (0,1)");
    require(c.nu >= 1 && c.nu_s >= 1, "config: nu and nu_s must be at least 1");
    require(c.tol > 0.0 && c.tol < 1.0, "config: tol must lie in (0,1)");
    require(c.max_iter >= 1 && c.aux_pcg_iters >= 1, "config: iteration counts must be positive");
    require(c.eig_per_element >= 0 && c.amge_eigenvectors >= 0 && c.amge_min_svd_drop >= 0 && c.eig_steps >= 0,
            "config: counts must be nonnegative");
    require(c.amge_max_levels >= 1, "config: amge_max_levels must be positive");
    require(c.jobs >= 1, "config: jobs must be positive");
}

Index cells_at(const ExperimentConfig& cfg, int refinement) { return cfg.cells << refinement; }

} // namespace

std::vector<std::string> preset_names()
{
    return {"loworder-exact", "loworder-2d-exact", "highorder-exact", "highorder-schur", "highorder-schur-amge",
            "highorder-schur-pcg-amge"};
}

ExperimentConfig preset(const std::string& name)
{
    ExperimentConfig c;
    c.name = name;
    if (name == "loworder-exact")
    {
        c.dim = 3;
        c.cells = 8;
        c.refinements = {0, 1};
        c.orders = {1};
        c.agg_cells = 2;
        c.eig_per_element = 1;
        c.nu = 4;
    }
    else if (name == "loworder-2d-exact")
    {
        c.dim = 2;
        c.cells = 16;
        c.refinements = {0, 1, 2, 3};
        c.orders = {1};
        c.agg_cells = 4;
        c.eig_per_element = 1;
        c.nu = 6;
    }
    else if (name == "highorder-exact" || name == "highorder-schur" || name == "highorder-schur-amge" ||
             name == "highorder-schur-pcg-amge")
    {
        c.dim = 2;
        c.cells = 16;
        c.refinements = {0};
        c.orders = {1, 2, 3, 4, 5, 6, 7, 8};
        c.agg_cells = 2;
        c.theta = 0.05;
        c.nu = 2;
        c.condense = name != "highorder-exact";
        if (name == "highorder-schur-amge" || name == "highorder-schur-pcg-amge")
        {
            c.aux = name == "highorder-schur-amge" ? AuxSolverKind::amge : AuxSolverKind::pcg_amge;
            c.theta_s = 0.05;
            c.amge_min_svd_drop = 2;
        }
    }
    else
        throw Error("unknown preset '" + name + "'");
    return c;
}

void apply_setting(ExperimentConfig& cfg, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    require(eq != std::string::npos, "config: expected key=value, got '" + assignment + "'");
    const std::string key = trim(assignment.substr(0, eq));
    const std::string value = trim(assignment.substr(eq + 1));
    if (key == "preset")
    {
        cfg = preset(value);
        return;
    }
    for (const auto& [k, f] : fields())
        if (k == key)
        {
            f.set(cfg, key, value);
            return;
        }
    throw Error("config: unknown key '" + key + "'");
}

ExperimentConfig parse_config(const std::string& text)
{
    ExperimentConfig cfg;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line))
    {
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.resize(hash);
        line = trim(line);
        if (!line.empty())
            apply_setting(cfg, line);
    }
    validate(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream f(path);
    require(f.good(), "cannot open config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string to_text(const ExperimentConfig& cfg)
{
    std::string s;
    for (const auto& [k, f] : fields())
        s += k + " = " + f.get(cfg) + "\n";
    return s;
}

OcMetrics compute_oc(std::size_t nnz_A, std::size_t nnz_H0, const std::vector<std::size_t>& nnz_levels)
{
    require(nnz_A > 0 && nnz_H0 > 0, "compute_oc: nnz counts must be positive");
    OcMetrics oc;
    oc.nnz_A = nnz_A;
    oc.nnz_aux.push_back(nnz_H0);
    oc.oc_ip = 1.0 + static_cast<double>(nnz_H0) / static_cast<double>(nnz_A);
    double sum = 0.0;
    for (std::size_t n : nnz_levels)
    {
        require(n > 0, "compute_oc: nnz counts must be positive");
        sum += static_cast<double>(n);
        oc.nnz_aux.push_back(n);
    }
    oc.oc_aux = 1.0 + sum / static_cast<double>(nnz_H0);
    oc.oc_orig = 1.0 + oc.oc_aux * (oc.oc_ip - 1.0);
    return oc;
}

std::unique_ptr<Problem> build_problem(const ExperimentConfig& cfg, int refinement, int order)
{
    validate(cfg);
    auto pb = std::make_unique<Problem>();
    const Index n = cells_at(cfg, refinement);
    require(n % cfg.agg_cells == 0, "config: agg_cells must divide the cell count " + std::to_string(n));
    pb->mesh = build_mesh(cfg.dim, n, order, cfg.nodes);
    const CoefficientField kappa = cfg.contrast == 1.0 ? constant_coefficient(pb->mesh, 1.0)
                                                       : checkerboard_coefficient(pb->mesh, cfg.contrast,
                                                                                  cfg.pattern_cells);
    pb->disc = assemble(pb->mesh, kappa);
    std::array<Index, 3> blocks{1, 1, 1};
    for (int d = 0; d < cfg.dim; ++d)
        blocks[d] = n / cfg.agg_cells;
    pb->topo = build_topology(pb->disc.rel, partition_structured(pb->mesh, blocks));
    pb->adofs = build_adof_map(pb->topo);
    IpOptions ipo;
    ipo.delta = cfg.delta;
    ipo.penalty = cfg.penalty;
    pb->ip = build_ip_system(pb->disc, pb->topo, pb->adofs, ipo);
    if (cfg.coarse)
    {
        SpectralOptions so;
        so.theta = cfg.theta;
        so.fixed_count = cfg.eig_per_element;
        so.svd_rel_tol = cfg.svd_rel_tol;
        pb->coarse = std::make_unique<CoarseSpace>(
            build_coarse(pb->ip, pb->adofs, pb->topo, spectral_bases(pb->ip, pb->adofs, pb->topo, so)));
    }
    if (cfg.condense)
        pb->schur = std::make_unique<SchurSystem>(pb->aux_system());
    return pb;
}

SolverSetup build_solver(const Problem& pb, const ExperimentConfig& cfg)
{
    SolverSetup s;
    s.smoother = std::make_shared<PolySmoother>(PolySmoother::make(pb.disc.A, cfg.smoother_scaling, cfg.nu));

    const SparseMat& K = pb.inner_matrix();
    std::shared_ptr<LinearOperator> k_solver;
    std::vector<std::size_t> level_nnz;
    if (cfg.aux == AuxSolverKind::exact)
    {
        require(K.rows() <= kMaxExactSize, "exact inner solve limited to " + std::to_string(kMaxExactSize) +
                                               " unknowns; use aux=amge or aux=pcg-amge");
        k_solver = std::make_shared<SparseCholesky>(K);
    }
    else
    {
        AmgeOptions ao;
        ao.theta_s = cfg.theta_s;
        ao.fixed_eigenvectors = cfg.amge_eigenvectors;
        ao.svd_rel_tol = cfg.svd_rel_tol;
        ao.min_svd_drop = cfg.amge_min_svd_drop;
        ao.max_levels = cfg.amge_max_levels;
        ao.coarse_size_target = cfg.amge_coarse_size;
        ao.nu_s = cfg.nu_s;
        ao.agglomeration = cfg.amge_agglomeration;
        const ElementSystem& sys = pb.schur ? pb.schur->schur_elements() : pb.aux_system();
        s.hierarchy = std::make_shared<Hierarchy>(build_hierarchy(amge_input_from(sys), ao));
        const auto all = s.hierarchy->nnz_per_level();
        level_nnz.assign(all.begin() + 1, all.end());
        if (cfg.aux == AuxSolverKind::amge)
            k_solver = s.hierarchy;
        else
        {
            k_solver = std::make_shared<InnerPcg>(s.hierarchy->level(0).A, s.hierarchy, cfg.aux_pcg_iters);
            s.flexible = true;
        }
    }
    if (pb.schur)
        s.inner = std::make_shared<CondensedSolver>(*pb.schur, k_solver);
    else
        s.inner = k_solver;
    s.preconditioner = std::make_unique<AuxPreconditioner>(pb.disc.A, s.smoother, pb.transfer(), s.inner, cfg.mode);
    s.oc = compute_oc(nnz(pb.disc.A), nnz(K), level_nnz);
    return s;
}

namespace
{

ExperimentRow run_step(const ExperimentConfig& cfg, int step, int r, int p)
{
    ExperimentRow row;
    row.step = step;
    row.refinement = r;
    row.order = p;
    const auto t0 = std::chrono::steady_clock::now();
    try
    {
        const auto pb = build_problem(cfg, r, p);
        row.n_dofs = pb->disc.n_free();
        row.n_aux = pb->schur ? pb->schur->n_b() : static_cast<Index>(pb->aux_matrix().rows());
        const SolverSetup s = build_solver(*pb, cfg);
        row.oc = s.oc;
        if (s.hierarchy)
            row.hierarchy = s.hierarchy->summary();
        const MatrixOperator A(pb->disc.A);
        Vector x = Vector::Zero(row.n_dofs);
        PcgOptions po;
        po.rel_tol = cfg.tol;
        po.max_iter = cfg.max_iter;
        po.flexible = s.flexible;
        SolveReport rep = pcg(A, pb->disc.rhs, *s.preconditioner, x, po);
        row.n_it = rep.iterations;
        row.final_measure = rep.final_relative;
        row.converged = rep.converged;
        row.measures = std::move(rep.measures);
        if (cfg.eig_steps > 0)
        {
            const EigenEstimate est = extreme_eigs(A, *s.preconditioner, cfg.eig_steps);
            row.lambda_min = est.lambda_min;
            row.lambda_max = est.lambda_max;
        }
    }
    catch (const std::exception& e)
    {
        row.converged = false;
        row.error = e.what();
    }
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

} // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg, std::ostream* log)
{
    validate(cfg);
    std::vector<std::pair<int, int>> steps;
    for (int r : cfg.refinements)
        for (int p : cfg.orders)
            steps.emplace_back(r, p);
    std::vector<ExperimentRow> rows(steps.size());
    std::mutex log_mutex;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < steps.size(); k = next++)
        {
            rows[k] = run_step(cfg, static_cast<int>(k), steps[k].first, steps[k].second);
            if (!log)
                continue;
            const ExperimentRow& row = rows[k];
            std::lock_guard<std::mutex> lock(log_mutex);
            *log << cfg.name << " step " << row.step << " (ref " << row.refinement << ", order " << row.order
                 << "): dofs " << row.n_dofs << ", aux " << row.n_aux << ", n_it " << row.n_it
                 << (row.converged ? "" : " FAILED") << (row.error.empty() ? "" : " [" + row.error + "]") << "\n";
            if (!row.hierarchy.empty())
                *log << row.hierarchy;
        }
    };
    const std::size_t n_threads = std::min<std::size_t>(static_cast<std::size_t>(cfg.jobs), steps.size());
    if (n_threads <= 1)
        worker();
    else
    {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < n_threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    return rows;
}

void write_csv(std::ostream& os, const ExperimentConfig& cfg, const std::vector<ExperimentRow>& rows)
{
    os << "step,refinement,order,n_dofs,n_adofs_or_bdofs,oc_ip,oc_aux,oc_orig,n_it,final_measure,wall_ms,converged";
    if (cfg.eig_steps > 0)
        os << ",lambda_min,lambda_max";
    os << "\n";
    char buf[512];
    for (const auto& r : rows)
    {
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%d,%.6f,%.6f,%.6f,%d,%.6e,%.3f,%d", r.step, r.refinement,
                      r.order, r.n_dofs, r.n_aux, r.oc.oc_ip, r.oc.oc_aux, r.oc.oc_orig, r.n_it, r.final_measure,
                      cfg.timing ? r.wall_ms : 0.0, r.converged ? 1 : 0);
        os << buf;
        if (cfg.eig_steps > 0)
        {
            std::snprintf(buf, sizeof buf, ",%.6e,%.6e", r.lambda_min, r.lambda_max);
            os << buf;
        }
        os << "\n";
    }
}

std::vector<std::string> export_matrices(const ExperimentConfig& cfg, const std::string& what,
                                         const std::string& dir)
{
    require(what == "A" || what == "ip" || what == "schur" || what == "coarse",
            "export: --what must be one of A, ip, schur, coarse");
    require(!cfg.refinements.empty() && !cfg.orders.empty(), "export: config has no steps");
    std::filesystem::create_directories(dir);
    ExperimentConfig c = cfg;
    c.condense = false;
    c.coarse = cfg.coarse || what == "coarse";
    const auto pb = build_problem(c, cfg.refinements.front(), cfg.orders.front());
    std::vector<std::string> written;
    auto put = [&](const std::string& file, const SparseMat& m) {
        const std::string path = (std::filesystem::path(dir) / file).string();
        write_matrix_market(path, m);
        written.push_back(path);
    };
    auto put_vector = [&](const std::string& file, const Vector& v) {
        const std::string path = (std::filesystem::path(dir) / file).string();
        write_vector_market(path, v);
        written.push_back(path);
    };
    if (what == "A")
    {
        put("A.mtx", pb->disc.A);
        put_vector("D.mtx", pb->disc.D);
        put_vector("W.mtx", pb->disc.W);
        put_vector("rhs.mtx", pb->disc.rhs);
    }
    else if (what == "ip")
    {
        put("ip.mtx", pb->ip.A);
        put("Pi.mtx", pb->ip.Pi);
        put("I.mtx", pb->ip.I);
    }
    else if (what == "schur")
    {
        const SchurSystem s(pb->aux_system());
        put(pb->coarse ? "schur_coarse.mtx" : "schur.mtx", s.S());
    }
    else
    {
        put("coarse.mtx", pb->coarse->A_H);
        put("Pi_H.mtx", pb->coarse->Pi_H);
        put("P.mtx", pb->coarse->P);
    }
    return written;
}

} // namespace ipaux
