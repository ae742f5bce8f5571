// dualpath: batch experiment runner for the interior point solver.
//
//   dualpath run           solve problems under one or more strategies,
//                          writing per-run trace CSVs and summary JSONs
//   dualpath netlib        batch a list of NETLIB problems, writing
//                          summaries.csv and ecdf.csv
//   dualpath interior-scan strict-relative-interior verdicts for a list
//   dualpath ecdf          recompute an ECDF from a summaries.csv

#include <dualpath/experiment.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::vector<std::string> split_commas(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (const auto& arg : args) {
        std::stringstream ss(arg);
        std::string tok;
        while (std::getline(ss, tok, ','))
            if (!tok.empty()) out.push_back(tok);
    }
    return out;
}

std::vector<std::string> read_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read list file " + path);
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto last = line.find_last_not_of(" \t\r");
        names.push_back(line.substr(first, last - first + 1));
    }
    return names;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"infeasible-start interior point experiments"};
    app.require_subcommand(1);

    std::vector<std::string> problems, strategy_args;
    std::string list_file, out_dir = "out", cache_dir, deltas_arg = "1e-4,1e-6,1e-8";
    std::string in_csv, out_csv = "ecdf.csv";
    double tol = 1e-6, tau = 0.995, tail_frac = 0.2;
    int max_iter = 300, jobs = 1;

    auto add_solver_flags = [&](CLI::App* cmd) {
        cmd->add_option("--tol", tol, "termination tolerance");
        cmd->add_option("--max-iter", max_iter, "iteration limit");
        cmd->add_option("--tau", tau, "fraction-to-boundary parameter");
        cmd->add_option("--tail-frac", tail_frac, "trailing fraction for summaries");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--cache", cache_dir, "MPS cache directory (default $DUALPATH_CACHE)");
        cmd->add_option("--jobs", jobs, "worker threads");
    };

    CLI::App* run = app.add_subcommand("run", "solve problems and write traces");
    run->add_option("--problem", problems, "built-in name, .mps path or NETLIB name")
        ->required();
    run->add_option("--strategy", strategy_args,
                    "same-rate | aggressive | slow-shift:<beta> | fixed-perturb:<delta>")
        ->required();
    add_solver_flags(run);

    CLI::App* netlib = app.add_subcommand("netlib", "batch NETLIB problems");
    netlib->add_option("--list", list_file, "file with one problem name per line")->required();
    netlib->add_option("--strategy", strategy_args, "strategies to run")->required();
    add_solver_flags(netlib);

    CLI::App* scan = app.add_subcommand("interior-scan", "strict-interior verdicts");
    scan->add_option("--list", list_file, "file with one problem name per line");
    scan->add_option("--problem", problems, "problem names (alternative to --list)");
    scan->add_option("--deltas", deltas_arg, "comma-separated tightening values");
    add_solver_flags(scan);

    CLI::App* ecdf_cmd = app.add_subcommand("ecdf", "ECDF from a summaries.csv");
    ecdf_cmd->add_option("--in", in_csv, "summaries.csv produced by `netlib`")->required();
    ecdf_cmd->add_option("--out", out_csv, "output csv");

    CLI11_PARSE(app, argc, argv);

    try {
        dualpath::ExperimentSpec spec;
        spec.base_config.tol = tol;
        spec.base_config.max_iter = max_iter;
        spec.base_config.tau = tau;
        spec.tail_frac = tail_frac;
        spec.out_dir = out_dir;
        if (!cache_dir.empty()) spec.cache_dir = cache_dir;
        spec.jobs = jobs;
        for (const auto& s : split_commas(strategy_args))
            spec.strategies.push_back(dualpath::parse_strategy(s));

        if (run->parsed()) {
            spec.problems = split_commas(problems);
            return dualpath::cmd_run(spec);
        }
        if (netlib->parsed()) {
            return dualpath::cmd_netlib_batch(read_list_file(list_file), spec);
        }
        if (scan->parsed()) {
            std::vector<std::string> names = split_commas(problems);
            if (!list_file.empty())
                for (auto& n : read_list_file(list_file)) names.push_back(n);
            std::vector<double> deltas;
            for (const auto& d : split_commas({deltas_arg})) deltas.push_back(std::stod(d));
            return dualpath::cmd_interior_scan(names, deltas, spec);
        }
        if (ecdf_cmd->parsed()) {
            return dualpath::cmd_ecdf(in_csv, out_csv);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
