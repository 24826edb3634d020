#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "nocsched/config.hpp"
#include "nocsched/metrics.hpp"
#include "nocsched/oracle.hpp"

namespace fs = std::filesystem;
using namespace nocsched;

namespace {

struct RunJob {
    ExperimentConfig cfg;
    std::string scheduler;
    uint64_t seed;
    std::string tag;  // filename stem
};

RunSummary execute_job(const RunJob& job, std::vector<DecisionRow>* trace_out) {
    const Mesh mesh(job.cfg.sim.rows, job.cfg.sim.cols);
    const SchedMode mode = sched_mode_from_string(job.scheduler);
    auto sched = make_scheduler(mode, job.cfg.learner(job.scheduler), mesh,
                                job.cfg.sim.levels);
    RunSummary summary;
    for (int trial = 0; trial < job.cfg.trials; ++trial) {
        SimConfig sc = job.cfg.resolved_sim(job.scheduler, job.seed);
        sc.seed = job.seed + static_cast<uint64_t>(trial) * 1000003ull;
        sc.keep_trace = trace_out != nullptr && trial == job.cfg.trials - 1;
        Simulator sim(sc, *sched);
        if (job.cfg.heatmap_every_s > 0 && trial == job.cfg.trials - 1)
            sim.enable_heatmap(job.cfg.out_dir + "/heatmap_" + job.tag + ".txt",
                               job.cfg.heatmap_every_s);
        RunResult res = sim.run();
        summary = res.summary;
        summary.seed = job.seed;
        if (sc.keep_trace && trace_out) *trace_out = std::move(res.trace);
    }
    if (auto* learner = dynamic_cast<LinearLearnerScheduler*>(sched.get()))
        learner->save_theta(job.cfg.out_dir + "/theta_" + job.tag + ".txt");
    return summary;
}

void run_jobs(const std::vector<RunJob>& jobs, int workers, bool traces,
              std::vector<RunSummary>* summaries) {
    summaries->resize(jobs.size());
    std::atomic<size_t> next{0};
    std::mutex io;
    auto worker = [&] {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            std::vector<DecisionRow> trace;
            (*summaries)[i] = execute_job(jobs[i], traces ? &trace : nullptr);
            if (traces)
                write_trace_csv(jobs[i].cfg.out_dir + "/trace_" + jobs[i].tag +
                                    ".csv",
                                trace, jobs[i].cfg.resolved_lines());
            std::lock_guard<std::mutex> lock(io);
            std::cout << "done " << jobs[i].tag << ": avg_peak_K="
                      << (*summaries)[i].avg_peak_k << "\n";
        }
    };
    workers = std::max(1, workers);
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
}

std::string tag_for(const std::string& sched, const ExperimentConfig& c,
                    uint64_t seed) {
    std::ostringstream os;
    os << sched << "_" << c.sim.rows << "x" << c.sim.cols << "_s" << seed;
    return os.str();
}

int cmd_run(ExperimentConfig cfg, int workers) {
    fs::create_directories(cfg.out_dir);
    std::vector<RunJob> jobs;
    for (uint64_t seed : cfg.seeds)
        jobs.push_back({cfg, cfg.scheduler, seed, tag_for(cfg.scheduler, cfg, seed)});
    std::vector<RunSummary> summaries;
    run_jobs(jobs, workers, /*traces=*/true, &summaries);
    write_summary_csv(cfg.out_dir + "/summary.csv", summaries,
                      cfg.resolved_lines());
    std::cout << "wrote " << cfg.out_dir << "/summary.csv (" << summaries.size()
              << " rows)\n";
    return 0;
}

int cmd_sweep(ExperimentConfig cfg, int workers) {
    fs::create_directories(cfg.out_dir);
    auto lambdas = cfg.grid.lambdas;
    if (lambdas.empty()) lambdas.push_back(cfg.lambda);
    auto meshes = cfg.grid.meshes;
    if (meshes.empty()) meshes.push_back({cfg.sim.rows, cfg.sim.cols});
    auto scheds = cfg.grid.schedulers;
    if (scheds.empty()) scheds.push_back(cfg.scheduler);
    auto centers = cfg.grid.centers;
    if (centers.empty()) centers.push_back(cfg.bank_x);

    const size_t total = lambdas.size() * meshes.size() * scheds.size() *
                         centers.size() * cfg.seeds.size();
    if (total > static_cast<size_t>(cfg.sweep_cap)) {
        std::cerr << "sweep would launch " << total << " runs, above the cap of "
                  << cfg.sweep_cap << "\n";
        return 2;
    }

    std::vector<RunJob> jobs;
    for (const auto& sched : scheds)
        for (const auto& mesh : meshes)
            for (double lam : lambdas)
                for (int x : centers)
                    for (uint64_t seed : cfg.seeds) {
                        ExperimentConfig c = cfg;
                        c.scheduler = sched;
                        c.sim.rows = mesh[0];
                        c.sim.cols = mesh[1];
                        c.lambda = lam;
                        c.bank_x = x;
                        std::ostringstream os;
                        os << tag_for(sched, c, seed) << "_x" << x << "_lam"
                           << lam;
                        jobs.push_back({c, sched, seed, os.str()});
                    }
    std::vector<RunSummary> summaries;
    run_jobs(jobs, workers, /*traces=*/false, &summaries);
    write_summary_csv(cfg.out_dir + "/sweep_runs.csv", summaries,
                      cfg.resolved_lines());

    // Aggregate over seeds: mean with 95% confidence half-widths.
    std::map<std::string, std::vector<size_t>> groups;
    for (size_t i = 0; i < jobs.size(); ++i) {
        std::ostringstream key;
        key << jobs[i].scheduler << ',' << jobs[i].cfg.sim.rows << 'x'
            << jobs[i].cfg.sim.cols << ',' << jobs[i].cfg.lambda << ','
            << jobs[i].cfg.bank_x;
        groups[key.str()].push_back(i);
    }
    std::ofstream agg(cfg.out_dir + "/sweep.csv");
    agg.precision(10);
    for (const auto& line : cfg.resolved_lines()) agg << "# " << line << '\n';
    agg << "scheduler,mesh,lambda,bank_x,seeds,avg_peak_K,avg_peak_K_ci95,"
           "avg_service_s,avg_service_s_ci95,total_dyn_energy_J,"
           "total_dyn_energy_J_ci95,mean_queue_len,mean_queue_len_ci95\n";
    for (const auto& [key, idx] : groups) {
        std::vector<double> peak, service, energy, queue;
        for (size_t i : idx) {
            peak.push_back(summaries[i].avg_peak_k);
            if (summaries[i].has_service)
                service.push_back(summaries[i].avg_service_s);
            energy.push_back(summaries[i].total_dyn_energy_j);
            queue.push_back(summaries[i].mean_queue_len);
        }
        const MeanCi p = mean_ci95(peak), e = mean_ci95(energy),
                     q = mean_ci95(queue);
        agg << key << ',' << idx.size() << ',' << p.mean << ',' << p.half_width;
        if (!service.empty()) {
            const MeanCi s = mean_ci95(service);
            agg << ',' << s.mean << ',' << s.half_width;
        } else {
            agg << ",,";
        }
        agg << ',' << e.mean << ',' << e.half_width << ',' << q.mean << ','
            << q.half_width << '\n';
    }
    std::cout << "wrote " << cfg.out_dir << "/sweep.csv (" << groups.size()
              << " groups over " << jobs.size() << " runs)\n";
    return 0;
}

int cmd_oracle_check(uint64_t seed) {
    const ToySmdp toy;
    const RviResult rvi = relative_value_iteration(toy);
    const ToyLearningReport rep = run_toy_learning(toy, rvi, 200000, seed);
    const double rel = std::abs(rep.rho_hat - rvi.rho) / rvi.rho;
    std::cout << "rho* = " << rvi.rho << "\nrho_hat = " << rep.rho_hat
              << " (relative error " << rel << ")\npolicy agreement: "
              << rep.agreeing_states << "/" << rep.decision_states
              << " decision states\n";
    const bool ok = rep.agreeing_states == rep.decision_states && rel <= 0.05;
    std::cout << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 1;
}

int cmd_report(const std::string& csv_path) {
    std::ifstream in(csv_path);
    if (!in) {
        std::cerr << "cannot read " << csv_path << "\n";
        return 2;
    }
    // group rows by (scheduler, mesh, lambda) and print mean +/- 95% CI
    std::map<std::string, std::array<std::vector<double>, 4>> groups;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("scheduler", 0) == 0)
            continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() < 8) continue;
        const std::string key = cells[0] + "," + cells[1] + "," + cells[2];
        auto& g = groups[key];
        g[0].push_back(std::stod(cells[4]));
        if (!cells[5].empty()) g[1].push_back(std::stod(cells[5]));
        g[2].push_back(std::stod(cells[6]));
        g[3].push_back(std::stod(cells[7]));
    }
    std::printf("%-28s %6s %22s %18s %20s %16s\n", "scheduler,mesh,lambda", "n",
                "avg_peak_K", "avg_service_s", "dyn_energy_J", "queue_len");
    for (const auto& [key, g] : groups) {
        auto fmt = [](const std::vector<double>& xs) {
            if (xs.empty()) return std::string("-");
            const MeanCi c = mean_ci95(xs);
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.3f±%.3f", c.mean, c.half_width);
            return std::string(buf);
        };
        std::printf("%-28s %6zu %22s %18s %20s %16s\n", key.c_str(), g[0].size(),
                    fmt(g[0]).c_str(), fmt(g[1]).c_str(), fmt(g[2]).c_str(),
                    fmt(g[3]).c_str());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermal-aware task scheduling simulator for NoC meshes"};
    app.require_subcommand(1);

    std::string config_path, out_dir, scheduler, report_csv;
    int64_t seed = -1;
    int workers = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON experiment config");
        sub->add_option("--seed", seed, "single master seed (overrides config)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--workers", workers, "parallel runs");
        sub->add_option("--scheduler", scheduler,
                        "dvfs|ir|rand|tbo|lct|ldt (overrides config)");
    };
    CLI::App* run = app.add_subcommand("run", "execute one experiment per seed");
    add_common(run);
    CLI::App* sweep = app.add_subcommand("sweep", "run the configured grid");
    add_common(sweep);
    CLI::App* oracle =
        app.add_subcommand("oracle-check", "toy-model exact-solver comparison");
    oracle->add_option("--seed", seed, "learner seed");
    CLI::App* report = app.add_subcommand("report", "aggregate a summary CSV");
    report->add_option("csv", report_csv, "summary or sweep_runs CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (oracle->parsed()) return cmd_oracle_check(seed >= 0 ? seed : 7);

        if (report->parsed()) return cmd_report(report_csv);

        ExperimentConfig cfg = config_path.empty()
                                   ? ExperimentConfig{}
                                   : ExperimentConfig::load(config_path);
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (!scheduler.empty()) {
            sched_mode_from_string(scheduler);
            cfg.scheduler = scheduler;
        }
        if (seed >= 0) cfg.seeds = {static_cast<uint64_t>(seed)};
        if (run->parsed()) return cmd_run(std::move(cfg), workers);
        return cmd_sweep(std::move(cfg), workers);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
