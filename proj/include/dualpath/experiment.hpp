#pragma once

#include "dualpath/diagnostics.hpp"
#include "dualpath/examples.hpp"
#include "dualpath/interior.hpp"
#include "dualpath/mps.hpp"
#include "dualpath/netlib.hpp"
#include "dualpath/problem.hpp"
#include "dualpath/solver.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace dualpath {

namespace experiment {

inline constexpr const char* kTraceHeader =
    "iter,mu,eta,alpha,primal_inf,dual_inf,comp_max,comp_min,dual_l1,max_dual,"
    "strict_comp,feas_over_mu,objective";

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::string trace_csv(const Trace& trace) {
    std::ostringstream out;
    out << kTraceHeader << "\n";
    for (const auto& r : trace.records) {
        out << r.iter << ',' << fmt(r.mu) << ',' << fmt(r.eta) << ',' << fmt(r.alpha) << ','
            << fmt(r.residuals.primal_inf) << ',' << fmt(r.residuals.dual_inf) << ','
            << fmt(r.residuals.comp_max) << ',' << fmt(r.residuals.comp_min) << ','
            << fmt(r.residuals.dual_l1) << ',' << fmt(r.max_dual) << ','
            << fmt(r.residuals.strict_comp) << ',' << fmt(r.residuals.feas_over_mu) << ','
            << fmt(r.objective) << "\n";
    }
    return out.str();
}

inline nlohmann::ordered_json summary_json(const Trace& trace, double tail_frac) {
    const SummaryMetrics s = summary(trace, tail_frac);
    nlohmann::ordered_json j;
    j["problem"] = trace.problem_name;
    j["strategy"] = trace.strategy;
    j["status"] = to_string(trace.status);
    j["iterations"] = s.iterations;
    j["tail_frac"] = tail_frac;
    j["max_dual_tail"] = s.max_dual_tail;
    j["strict_comp_tail"] = s.strict_comp_tail;
    try {
        const RateCertificate cert = certify(trace, 0.5);
        j["certificate"] = {{"b", cert.b},
                            {"c", cert.c},
                            {"ell", cert.ell},
                            {"u", cert.u},
                            {"d", cert.d},
                            {"tail_start", cert.tail_start},
                            {"holds_comp", cert.holds_comp},
                            {"holds_primal", cert.holds_primal},
                            {"holds_dual", cert.holds_dual}};
    } catch (const std::exception& e) {
        j["certificate"] = nullptr;
    }
    try {
        const RegimeClass rc = classify_regime(trace, 0.5);
        j["regime"] = {{"class", to_string(rc.regime)}, {"p", rc.p}, {"r_squared", rc.r_squared}};
    } catch (const std::exception& e) {
        j["regime"] = nullptr;
    }
    return j;
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

inline std::string sanitize(const std::string& label) {
    std::string out = label;
    for (auto& c : out)
        if (c == ':' || c == '/' || c == ' ') c = '-';
    return out;
}

} // namespace experiment

struct ExperimentSpec {
    std::vector<std::string> problems;  // builtin name | .mps path | NETLIB name
    std::vector<Strategy> strategies;
    SolverConfig base_config;
    std::filesystem::path out_dir = "out";
    std::filesystem::path cache_dir;
    double tail_frac = 0.2;
    int jobs = 1;
};

namespace experiment {

inline std::filesystem::path default_cache() {
    if (const char* env = std::getenv("DUALPATH_CACHE"); env && *env) return env;
    return std::filesystem::path(".") / "netlib-cache";
}

inline std::optional<ExampleProblem> builtin_example(const std::string& name) {
    if (name == "toy_lp") return toy_lp();
    if (name == "duplicated_lp") return duplicated_constraint_lp();
    if (name == "circles") return circles();
    if (name == "lpcc") return lpcc();
    if (name == "water_network") return water_network();
    return std::nullopt;
}

/// Resolves a problem token to an InequalityProblem: built-in example, .mps
/// file path, or NETLIB name (fetched through the cache).
inline InequalityProblem resolve_problem(const std::string& token,
                                         const std::filesystem::path& cache) {
    if (auto ex = builtin_example(token)) return ex->problem;
    const bool is_file = token.find('/') != std::string::npos ||
                         (token.size() >= 4 && token.substr(token.size() - 4) == ".mps");
    if (is_file) {
        std::ifstream in(token, std::ios::binary);
        if (!in) throw std::runtime_error("cannot read " + token);
        std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        LinearProgram lp = parse_mps(text);
        if (lp.name.empty()) lp.name = token;
        return to_inequality_form(lp);
    }
    LinearProgram lp = parse_mps(fetch_netlib(token, cache));
    if (lp.name.empty()) lp.name = token;
    return to_inequality_form(lp);
}

inline Trace run_one(const InequalityProblem& p, const Strategy& strategy,
                     const SolverConfig& base) {
    SolverConfig cfg = base;
    cfg.strategy = strategy;
    return p.provenance == Provenance::NativeNlp ? solve_nlp(p, cfg) : solve(p, cfg);
}

/// Runs tasks 0..count-1 on a bounded pool; results land in caller-indexed
/// storage so output order is independent of scheduling.
template <typename Fn> inline void parallel_for(int count, int jobs, Fn&& fn) {
    const int workers = std::max(1, std::min(jobs, count));
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace experiment

/// Solves every (problem, strategy) pair and writes one trace CSV plus one
/// summary JSON per run. Exit code 0 iff every run completed (any status).
inline int cmd_run(const ExperimentSpec& spec) {
    using namespace experiment;
    if (spec.problems.empty() || spec.strategies.empty()) {
        std::cerr << "run: need at least one problem and one strategy\n";
        return 2;
    }
    const auto cache = spec.cache_dir.empty() ? default_cache() : spec.cache_dir;
    struct Task {
        std::string problem;
        Strategy strategy;
    };
    std::vector<Task> tasks;
    for (const auto& prob : spec.problems)
        for (const auto& strat : spec.strategies) tasks.push_back({prob, strat});

    std::vector<std::string> errors(tasks.size());
    std::vector<Trace> traces(tasks.size());
    experiment::parallel_for(static_cast<int>(tasks.size()), spec.jobs, [&](int i) {
        try {
            const InequalityProblem p = resolve_problem(tasks[i].problem, cache);
            traces[i] = run_one(p, tasks[i].strategy, spec.base_config);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });

    int rc = 0;
    for (size_t i = 0; i < tasks.size(); ++i) {
        const std::string label =
            sanitize(tasks[i].problem) + "__" + sanitize(strategy_label(tasks[i].strategy));
        if (!errors[i].empty()) {
            std::cerr << "run " << label << " failed: " << errors[i] << "\n";
            rc = 1;
            continue;
        }
        write_file(spec.out_dir / (label + ".trace.csv"), trace_csv(traces[i]));
        write_file(spec.out_dir / (label + ".summary.json"),
                   summary_json(traces[i], spec.tail_frac).dump(2) + "\n");
        std::cout << label << ": " << to_string(traces[i].status) << " in "
                  << traces[i].iterations() << " iterations\n";
    }
    return rc;
}

/// Fetch + parse + convert + solve each listed NETLIB problem under every
/// strategy; failures are recorded per problem and never abort the batch.
/// Writes summaries.csv and ecdf.csv under out_dir.
inline int cmd_netlib_batch(const std::vector<std::string>& names_in,
                            const ExperimentSpec& spec) {
    using namespace experiment;
    if (names_in.empty()) {
        std::cerr << "netlib: empty problem list\n";
        return 2;
    }
    if (spec.strategies.empty()) {
        std::cerr << "netlib: need at least one strategy\n";
        return 2;
    }
    std::vector<std::string> names;
    std::set<std::string> seen;
    for (const auto& n : names_in)
        if (seen.insert(n).second) names.push_back(n);

    const auto cache = spec.cache_dir.empty() ? default_cache() : spec.cache_dir;

    struct Row {
        std::string name;
        std::string strategy;
        std::string status;
        int iterations = 0;
        double max_dual_tail = 0;
        double strict_comp_tail = 0;
        bool usable = false;
    };
    const int ns = static_cast<int>(spec.strategies.size());
    std::vector<Row> rows(names.size() * ns);

    experiment::parallel_for(static_cast<int>(names.size()), spec.jobs, [&](int i) {
        std::optional<InequalityProblem> p;
        std::string failure;
        try {
            LinearProgram lp = parse_mps(fetch_netlib(names[i], cache));
            if (lp.name.empty()) lp.name = names[i];
            p = to_inequality_form(lp);
        } catch (const FetchError&) {
            failure = "fetch_error";
        } catch (const MpsParseError&) {
            failure = "parse_error";
        } catch (const std::exception&) {
            failure = "convert_error";
        }
        for (int k = 0; k < ns; ++k) {
            Row& row = rows[i * ns + k];
            row.name = names[i];
            row.strategy = strategy_label(spec.strategies[k]);
            if (!p) {
                row.status = failure;
                continue;
            }
            try {
                const Trace t = run_one(*p, spec.strategies[k], spec.base_config);
                const SummaryMetrics s = summary(t, spec.tail_frac);
                row.status = to_string(t.status);
                row.iterations = s.iterations;
                row.max_dual_tail = s.max_dual_tail;
                row.strict_comp_tail = s.strict_comp_tail;
                row.usable = true;
            } catch (const std::exception&) {
                row.status = "solve_error";
            }
        }
    });

    std::ostringstream sm;
    sm << "name,strategy,status,iterations,max_dual_tail,strict_comp_tail\n";
    for (const auto& r : rows)
        sm << r.name << ',' << r.strategy << ',' << r.status << ',' << r.iterations << ','
           << fmt(r.max_dual_tail) << ',' << fmt(r.strict_comp_tail) << "\n";
    write_file(spec.out_dir / "summaries.csv", sm.str());

    std::ostringstream ec;
    ec << "value,fraction,strategy\n";
    for (int k = 0; k < ns; ++k) {
        std::vector<SummaryMetrics> ms;
        for (size_t i = 0; i < names.size(); ++i)
            if (rows[i * ns + k].usable) {
                SummaryMetrics s;
                s.max_dual_tail = rows[i * ns + k].max_dual_tail;
                ms.push_back(s);
            }
        if (ms.empty()) continue;
        for (const auto& [v, f] : ecdf(ms))
            ec << fmt(v) << ',' << fmt(f) << ',' << strategy_label(spec.strategies[k]) << "\n";
    }
    write_file(spec.out_dir / "ecdf.csv", ec.str());
    return 0;
}

/// Strict-interior scan: one CSV row per distinct problem.
inline int cmd_interior_scan(const std::vector<std::string>& names_in,
                             const std::vector<double>& deltas, const ExperimentSpec& spec) {
    using namespace experiment;
    if (names_in.empty()) {
        std::cerr << "interior-scan: empty problem list\n";
        return 2;
    }
    std::vector<std::string> names;
    std::set<std::string> seen;
    for (const auto& n : names_in)
        if (seen.insert(n).second) names.push_back(n);
    const auto cache = spec.cache_dir.empty() ? default_cache() : spec.cache_dir;

    std::vector<std::string> lines(names.size());
    experiment::parallel_for(static_cast<int>(names.size()), spec.jobs, [&](int i) {
        try {
            std::optional<LinearProgram> lp;
            if (auto ex = builtin_example(names[i]); ex && ex->lp)
                lp = *ex->lp;
            else
                lp = parse_mps(fetch_netlib(names[i], cache));
            const InteriorVerdict v =
                deltas.empty() ? has_strict_interior(*lp) : has_strict_interior(*lp, deltas);
            std::ostringstream line;
            line << names[i] << ',' << (v.determinate ? (v.has_interior ? "true" : "false") : "error")
                 << ',' << (v.agreement ? "true" : "false");
            lines[i] = line.str();
        } catch (const std::exception& e) {
            lines[i] = names[i] + ",error,false";
        }
    });

    std::ostringstream out;
    out << "name,has_interior,agreement\n";
    for (const auto& l : lines) out << l << "\n";
    write_file(spec.out_dir / "interior.csv", out.str());
    std::cout << out.str();
    return 0;
}

/// Recomputes the ECDF from a summaries.csv produced by the batch runner.
inline int cmd_ecdf(const std::filesystem::path& summaries_csv,
                    const std::filesystem::path& out_path) {
    using namespace experiment;
    std::ifstream in(summaries_csv);
    if (!in) {
        std::cerr << "ecdf: cannot read " << summaries_csv << "\n";
        return 2;
    }
    std::string line;
    std::getline(in, line); // header
    std::map<std::string, std::vector<SummaryMetrics>> by_strategy;
    std::vector<std::string> order;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string name, strategy, status, iters, maxdual, strict;
        std::getline(ss, name, ',');
        std::getline(ss, strategy, ',');
        std::getline(ss, status, ',');
        std::getline(ss, iters, ',');
        std::getline(ss, maxdual, ',');
        std::getline(ss, strict, ',');
        if (status == "fetch_error" || status == "parse_error" || status == "convert_error" ||
            status == "solve_error")
            continue;
        if (!by_strategy.count(strategy)) order.push_back(strategy);
        SummaryMetrics s;
        s.max_dual_tail = std::stod(maxdual);
        by_strategy[strategy].push_back(s);
    }
    std::ostringstream ec;
    ec << "value,fraction,strategy\n";
    for (const auto& strat : order)
        for (const auto& [v, f] : ecdf(by_strategy[strat]))
            ec << fmt(v) << ',' << fmt(f) << ',' << strat << "\n";
    write_file(out_path, ec.str());
    return 0;
}

} // namespace dualpath
