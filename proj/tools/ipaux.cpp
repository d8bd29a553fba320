// Copyright (c) 2026, the ipaux authors.
// SPDX-License-Identifier: LGPL-2.1-or-later

// Command-line driver: run experiment sweeps and export matrices.

#include "ipaux/experiment.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace
{

ipaux::ExperimentConfig make_config(const std::string& config_path, const std::string& preset_name,
                                    const std::vector<std::string>& settings)
{
    ipaux::ExperimentConfig cfg;
    if (!preset_name.empty())
        cfg = ipaux::preset(preset_name);
    if (!config_path.empty())
    {
        // file settings apply on top of the preset; "preset = ..." inside the file restarts from it
        std::ifstream f(config_path);
        std::string line;
        while (std::getline(f, line))
        {
            line = line.substr(0, line.find('#'));
            if (line.find_first_not_of(" \t\r") != std::string::npos)
                ipaux::apply_setting(cfg, line);
        }
    }
    for (const auto& s : settings)
        ipaux::apply_setting(cfg, s);
    return ipaux::parse_config(ipaux::to_text(cfg));  // validates
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Auxiliary space preconditioners built on an interior-penalty reformulation"};
    app.require_subcommand(1);

    std::string config_path, preset_name, csv_path, history_dir;
    std::vector<std::string> settings;
    bool quiet = false;

    auto* run = app.add_subcommand("run", "Run an experiment sweep and write one CSV row per step");
    run->add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
    run->add_option("--preset", preset_name, "start from a built-in preset");
    run->add_option("--set", settings, "override a setting, key=value (repeatable)");
    run->add_option("--csv", csv_path, "output CSV path ('-' for stdout)")->required();
    run->add_option("--history", history_dir, "write each step's PCG residual history as CSV into this directory");
    run->add_flag("--quiet", quiet, "no progress log on stderr");

    std::string what, dir;
    auto* exp = app.add_subcommand("export", "Write matrices of the first step in Matrix Market format");
    exp->add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
    exp->add_option("--preset", preset_name, "start from a built-in preset");
    exp->add_option("--set", settings, "override a setting, key=value (repeatable)");
    exp->add_option("--what", what, "matrix to export")
        ->required()
        ->check(CLI::IsMember({"A", "ip", "schur", "coarse"}));
    exp->add_option("--dir", dir, "output directory")->required();

    auto* show = app.add_subcommand("show-config", "Print the effective configuration");
    show->add_option("--config", config_path, "key=value configuration file")->check(CLI::ExistingFile);
    show->add_option("--preset", preset_name, "start from a built-in preset");
    show->add_option("--set", settings, "override a setting, key=value (repeatable)");

    app.add_subcommand("presets", "List the built-in presets");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (app.got_subcommand("presets"))
        {
            for (const auto& n : ipaux::preset_names())
                std::cout << n << "\n";
            return 0;
        }
        const ipaux::ExperimentConfig cfg = make_config(config_path, preset_name, settings);
        if (*show)
        {
            std::cout << ipaux::to_text(cfg);
            return 0;
        }
        if (*exp)
        {
            for (const auto& p : ipaux::export_matrices(cfg, what, dir))
                std::cout << p << "\n";
            return 0;
        }
        const auto rows = ipaux::run_experiment(cfg, quiet ? nullptr : &std::cerr);
        if (csv_path == "-")
            ipaux::write_csv(std::cout, cfg, rows);
        else
        {
            std::ofstream f(csv_path);
            if (!f)
            {
                std::cerr << "error: cannot write " << csv_path << "\n";
                return 2;
            }
            ipaux::write_csv(f, cfg, rows);
        }
        if (!history_dir.empty())
        {
            std::filesystem::create_directories(history_dir);
            for (const auto& r : rows)
            {
                ipaux::SolveReport rep;
                rep.measures = r.measures;
                std::ofstream h(std::filesystem::path(history_dir) / ("step_" + std::to_string(r.step) + ".csv"));
                ipaux::write_residual_history(h, rep);
            }
        }
        for (const auto& r : rows)
            if (!r.converged)
                return 1;
        return 0;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
