// Acceptance suite: end-to-end checks of the shipped engine, one line per
// criterion. Run via ctest (target `acceptance`) or directly:
//   acceptance_tests --cli path/to/lexitune --repo path/to/checkout

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lexitune/experiment.hpp"

namespace fs = std::filesystem;
using namespace lexitune;
using clock_type = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report_line(int idx, bool pass, const std::string& what, double seconds) {
    std::printf("%s  [%d] %s (%.2fs)\n", pass ? "PASS" : "FAIL", idx, what.c_str(), seconds);
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

struct Timer {
    clock_type::time_point start = clock_type::now();
    double seconds() const {
        return std::chrono::duration<double>(clock_type::now() - start).count();
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// --- criterion 1: comparator equivalence over the full value grid ---------

void criterion_1() {
    Timer timer;
    std::vector<ObjectiveVector> grid;
    for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 10; ++j) grid.push_back({i / 10.0, j / 10.0});

    const Targets below{{-1.0, -1.0}};
    std::size_t checked = 0;
    bool ok = true;
    for (const ObjectiveVector& a : grid) {
        for (const ObjectiveVector& b : grid) {
            const std::pair<double, double> ta{a[0], a[1]};
            const std::pair<double, double> tb{b[0], b[1]};
            Ordering expected = Ordering::equal;
            if (ta < tb)
                expected = Ordering::strictly_better;
            else if (tb < ta)
                expected = Ordering::strictly_worse;
            if (lexi_compare(a, b) != expected) ok = false;
            if (targeted_compare(a, b, below) != expected) ok = false;
            ++checked;
        }
    }
    std::ostringstream what;
    what << "comparator oracle equivalence on " << checked << " ordered pairs";
    report_line(1, ok && timer.seconds() < 1.0, what.str(), timer.seconds());
}

// --- criterion 2: tolerance filtering vs brute force ----------------------

std::vector<std::size_t> brute_force_optimal(const std::vector<ObjectiveVector>& points,
                                             const std::vector<double>& kappa) {
    std::vector<std::size_t> tier(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) tier[i] = i;
    for (std::size_t level = 0; level < kappa.size(); ++level) {
        double best = points[tier[0]][level];
        for (std::size_t idx : tier) best = std::min(best, points[idx][level]);
        std::vector<std::size_t> next;
        for (std::size_t idx : tier)
            if (points[idx][level] <= best * (1.0 + kappa[level])) next.push_back(idx);
        tier = next;
    }
    double best = points[tier[0]].back();
    for (std::size_t idx : tier) best = std::min(best, points[idx].back());
    std::vector<std::size_t> out;
    for (std::size_t idx : tier)
        if (points[idx].back() == best) out.push_back(idx);
    return out;
}

void criterion_2() {
    Timer timer;
    SeededRng rng(4242);
    const double kappa_pool[] = {0.0, 0.01, 0.05};
    bool ok = true;
    for (int instance = 0; instance < 1000; ++instance) {
        std::vector<std::pair<Configuration, ObjectiveVector>> points;
        std::vector<ObjectiveVector> raw;
        for (int i = 0; i < 20; ++i) {
            ObjectiveVector v = {rng.uniform(0.0, 1.0), rng.uniform(0.0, 1.0)};
            if (rng.uniform01() < 0.3) v[0] = std::round(v[0] * 10.0) / 10.0;
            if (rng.uniform01() < 0.3) v[1] = std::round(v[1] * 10.0) / 10.0;
            raw.push_back(v);
            points.emplace_back(Configuration{}, std::move(v));
        }
        const std::vector<double> kappa = {kappa_pool[rng.uniform_int(0, 2)],
                                           kappa_pool[rng.uniform_int(0, 2)]};
        if (lexi_optimal_set(points, Tolerance{{kappa[0], kappa[1]}}) !=
            brute_force_optimal(raw, kappa))
            ok = false;
    }
    report_line(2, ok && timer.seconds() < 5.0,
                "tolerance-optimal set matches brute force on 1000 random instances",
                timer.seconds());
}

// --- criterion 3: optimizer convergence on toy objectives -----------------

void criterion_3() {
    Timer timer;
    SearchSpace space;
    space.add("x", ParamDomain::make_continuous(0.0, 1.0));

    // Dense-grid oracle for the quadratic.
    double quad_oracle = 0.0, quad_best = 1e18;
    for (int i = 0; i <= 10000; ++i) {
        const double x = i / 10000.0;
        const double f = (x - 0.3) * (x - 0.3);
        if (f < quad_best) {
            quad_best = f;
            quad_oracle = x;
        }
    }
    // Grid oracle for the plateau pair at zero tolerance: level-1 minimizers
    // first, then the level-2 minimizer among them.
    double plateau_l1_min = 1e18;
    for (int i = 0; i <= 10000; ++i) {
        const double x = i / 10000.0;
        plateau_l1_min = std::min(plateau_l1_min, std::max(0.0, std::fabs(x - 0.5) - 0.2));
    }
    double plateau_oracle = 0.0, plateau_best = 1e18;
    for (int i = 0; i <= 10000; ++i) {
        const double x = i / 10000.0;
        const double l1 = std::max(0.0, std::fabs(x - 0.5) - 0.2);
        if (l1 > plateau_l1_min) continue;
        const double l2 = (x - 0.65) * (x - 0.65);
        if (l2 < plateau_best) {
            plateau_best = l2;
            plateau_oracle = x;
        }
    }

    int quad_hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        OptimizerParams p;
        p.budget = 300;
        p.seed = seed;
        p.mode.kind = ObjectiveModeKind::single_avg;
        p.kappa.kappa = {0.0};
        const Evaluator f = [&space](const Configuration& c) {
            const double x = c.get_double(space, "x");
            return FoldLosses{(x - 0.3) * (x - 0.3)};
        };
        const OptimizerResult r = run_lexiflow(space, f, p);
        if (std::fabs(r.best.get_double(space, "x") - quad_oracle) <= 1e-2) ++quad_hits;
    }

    int plateau_hits = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        OptimizerParams p;
        p.budget = 500;
        p.seed = seed;
        p.raw_objectives = true;  // tune on the exact [l1, l2] pair
        p.kappa.kappa = {0.0, 0.0};
        const Evaluator pair_eval = [&space](const Configuration& c) {
            const double x = c.get_double(space, "x");
            return FoldLosses{std::max(0.0, std::fabs(x - 0.5) - 0.2),
                              (x - 0.65) * (x - 0.65)};
        };
        const OptimizerResult r = run_lexiflow(space, pair_eval, p);
        if (std::fabs(r.best.get_double(space, "x") - plateau_oracle) <= 2e-2) ++plateau_hits;
    }

    std::ostringstream what;
    what << "optimizer convergence: quadratic " << quad_hits << "/20 within 1e-2 of "
         << quad_oracle << ", lexicographic plateau " << plateau_hits << "/20 within 2e-2 of "
         << plateau_oracle;
    report_line(3, quad_hits >= 18 && plateau_hits >= 16 && timer.seconds() < 30.0, what.str(),
                timer.seconds());
}

// --- criteria 4 + 5: directional results on the shipped benchmark ---------

ExperimentConfig benchmark_config(const std::string& repo) {
    ConfigFile file = ConfigFile::parse_file(repo + "/configs/drift4_bench.cfg");
    file.set("dataset", "scenario", repo + "/scenarios/drift4_regression.json");
    return parse_experiment_config(file);
}

void criteria_4_and_5(const std::string& repo) {
    Timer timer;
    const ExperimentConfig cfg = benchmark_config(repo);

    const ExperimentReport chrono = compare_methods(
        cfg, {MethodVariant::hypertime, MethodVariant::cfo_avg, MethodVariant::cfo_worst,
              MethodVariant::hypertime_reverse, MethodVariant::cfo_weighted});
    const MethodResult& ht = chrono.methods[0];
    const MethodResult& avg = chrono.methods[1];

    int worst_wins = 0;
    for (std::size_t s = 0; s < ht.per_seed.size(); ++s)
        if (ht.per_seed[s].test_worst <= avg.per_seed[s].test_worst) ++worst_wins;
    const bool avg_close = ht.test_average_mean <= 1.05 * avg.test_average_mean;
    const double t4 = timer.seconds();
    {
        std::ostringstream what;
        what << "drift benchmark: hypertime test-worst <= cfo_avg on " << worst_wins
             << "/5 seeds, test-average " << ht.test_average_mean << " vs "
             << avg.test_average_mean;
        report_line(4, worst_wins >= 4 && avg_close && t4 < 180.0, what.str(), t4);
    }

    Timer timer5;
    ExperimentConfig shuffled_cfg = cfg;
    shuffled_cfg.chronology = Chronology::shuffled;
    const ExperimentReport shuffled =
        compare_methods(shuffled_cfg, {MethodVariant::hypertime, MethodVariant::cfo_avg});

    const bool chrono_beats_shuffled =
        ht.test_worst_mean < shuffled.methods[0].test_worst_mean &&
        avg.test_worst_mean < shuffled.methods[1].test_worst_mean;
    const bool ht_beats_ablations =
        ht.test_average_mean < chrono.methods[2].test_average_mean &&  // cfo_worst
        ht.test_average_mean < chrono.methods[3].test_average_mean &&  // reverse
        ht.test_average_mean < chrono.methods[4].test_average_mean;    // weighted
    {
        std::ostringstream what;
        what << "ablations: chronological test-worst " << ht.test_worst_mean << "/"
             << avg.test_worst_mean << " vs shuffled " << shuffled.methods[0].test_worst_mean
             << "/" << shuffled.methods[1].test_worst_mean << "; hypertime test-average "
             << ht.test_average_mean << " vs worst-only " << chrono.methods[2].test_average_mean
             << ", reversed " << chrono.methods[3].test_average_mean << ", weighted "
             << chrono.methods[4].test_average_mean;
        report_line(5,
                    chrono_beats_shuffled && ht_beats_ablations &&
                        (t4 + timer5.seconds()) < 600.0,
                    what.str(), timer5.seconds());
    }
}

// --- criterion 6: Hoeffding coverage ---------------------------------------

void criterion_6() {
    Timer timer;
    const LossSampler sampler = bernoulli_sampler(0.5, 20240501);
    const double coverage = empirical_coverage(sampler, 1000, 0.05, 1.0, 10000);
    const double floor = 0.95 - 3.0 * std::sqrt(0.05 * 0.95 / 10000.0);
    std::ostringstream what;
    what << "Hoeffding coverage " << coverage << " >= " << floor;
    report_line(6, coverage >= floor && timer.seconds() < 10.0, what.str(), timer.seconds());
}

// --- criterion 7: two-case bound on the shipped benchmark ------------------

void criterion_7(const std::string& repo) {
    Timer timer;
    const ExperimentConfig cfg = benchmark_config(repo);
    const ConfigFile file = ConfigFile::parse_file(repo + "/configs/drift4_bench.cfg");
    const TheoremConfig tc = parse_theorem_config(file);
    const TheoremRow row = run_theorem_check(cfg, tc);
    std::ostringstream what;
    what << "test-loss bound " << row.bound << " holds on " << 100.0 * row.within_bound
         << "% of " << tc.draws << " draws (observed mean " << row.observed_mean
         << ", kappa=threshold=" << row.threshold << ", case " << (row.case_flag ? 1 : 2) << ")";
    report_line(7, row.within_bound >= 0.95 && timer.seconds() < 120.0, what.str(),
                timer.seconds());
}

// --- criterion 8: byte-identical CLI outputs -------------------------------

int run_cli(const std::string& cli, const std::string& repo, const std::string& args) {
    const std::string cmd = "cd \"" + repo + "\" && \"" + cli + "\" " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

void criterion_8(const std::string& cli, const std::string& repo) {
    Timer timer;
    const std::string out1 = (fs::temp_directory_path() / "lexitune_acc_run1").string();
    const std::string out2 = (fs::temp_directory_path() / "lexitune_acc_run2").string();
    fs::remove_all(out1);
    fs::remove_all(out2);
    const std::string common =
        "bench --config configs/drift4_bench.cfg --budget 20 "
        "--seeds 0,1 --variants hypertime,cfo_avg --out ";
    const int rc1 = run_cli(cli, repo, common + "\"" + out1 + "\"");
    const int rc2 = run_cli(cli, repo, common + "\"" + out2 + "\"");
    bool ok = rc1 == 0 && rc2 == 0;
    if (ok) {
        const std::string s1 = slurp(out1 + "/summary.csv");
        const std::string s2 = slurp(out2 + "/summary.csv");
        const std::string p1 = slurp(out1 + "/per_fold.csv");
        const std::string p2 = slurp(out2 + "/per_fold.csv");
        ok = !s1.empty() && s1 == s2 && !p1.empty() && p1 == p2;
    }
    report_line(8, ok, "bench rerun produces byte-identical summary.csv and per_fold.csv",
                timer.seconds());
}

}  // namespace

int main(int argc, char** argv) {
    std::string cli, repo;
    for (int i = 1; i + 1 < argc; i += 2) {
        const std::string flag = argv[i];
        if (flag == "--cli") cli = argv[i + 1];
        if (flag == "--repo") repo = argv[i + 1];
    }
    if (repo.empty()) repo = ".";
    if (cli.empty()) cli = repo + "/build/lexitune";

    criterion_1();
    criterion_2();
    criterion_3();
    criteria_4_and_5(repo);
    criterion_6();
    criterion_7(repo);
    criterion_8(cli, repo);

    if (g_failures == 0)
        std::printf("acceptance: all criteria passed\n");
    else
        std::printf("acceptance: %d criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
