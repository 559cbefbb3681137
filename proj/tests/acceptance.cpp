// SPDX-License-Identifier: Apache-2.0
//
// mcbeam: max-min fair multicast beamforming for mmWave systems
// Copyright (C) 2026 The mcbeam authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
//
// End-to-end acceptance suite. Each criterion prints one PASS/FAIL line;
// the process exits nonzero if any criterion fails. Statistical criteria
// run with fixed seeds, so results are reproducible run to run.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <mcbeam/harness.hpp>
#include <mcbeam/lb_gdm.hpp>
#include <mcbeam/sdr_c.hpp>

using namespace mcbeam;

namespace {

int g_workers = 2;
std::string g_cli_path;
int g_failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

void report(int id, const char *name, bool pass, double seconds, const std::string &note)
{
    std::printf("%s  criterion %2d  %-34s  [%6.1f s]  %s\n", pass ? "PASS" : "FAIL", id, name, seconds,
                note.c_str());
    std::fflush(stdout);
    if (!pass)
        ++g_failures;
}

CMat random_matrix(std::size_t rows, std::size_t cols, Rng &rng)
{
    CMat m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = rng.complex_gaussian();
    return m;
}

double directional(const CMat &g, const CMat &delta)
{
    double s = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j)
            s += 2.0 * (std::conj(g(i, j)) * delta(i, j)).real();
    return s;
}

// criterion 1: central finite differences against the analytic ascent
// directions for all three block objectives at n_tx=6, n_rf=3, n_rx=2.
void criterion_gradients()
{
    Timer timer;
    Rng rng(101);
    const double h = 1e-6;
    int bad = 0;
    const auto rel_ok = [](double lhs, double rhs) {
        return std::abs(lhs - rhs) <= 1e-4 * std::max({std::abs(lhs), std::abs(rhs), 1e-9});
    };
    for (int trial = 0; trial < 50; ++trial)
    {
        const CMat f = random_matrix(6, 3, rng);
        const CMat m = random_matrix(3, 1, rng);
        const CMat w = random_matrix(2, 1, rng);
        const CMat hm = random_matrix(2, 6, rng);

        const CMat df = random_matrix(6, 3, rng);
        CMat fp = f, fm2 = f;
        for (std::size_t i = 0; i < 6; ++i)
            for (std::size_t j = 0; j < 3; ++j)
            {
                fp(i, j) += h * df(i, j);
                fm2(i, j) -= h * df(i, j);
            }
        if (!rel_ok(directional(grad_analog(f, w, hm), df),
                    (objective_analog(fp, w, hm) - objective_analog(fm2, w, hm)) / (2.0 * h)))
            ++bad;

        const CMat dm = random_matrix(3, 1, rng);
        CMat mp = m, mm = m;
        for (std::size_t i = 0; i < 3; ++i)
        {
            mp(i, 0) += h * dm(i, 0);
            mm(i, 0) -= h * dm(i, 0);
        }
        if (!rel_ok(directional(grad_digital(f, m, w, hm), dm),
                    (objective_link(f, mp, w, hm) - objective_link(f, mm, w, hm)) / (2.0 * h)))
            ++bad;

        const CMat dw = random_matrix(2, 1, rng);
        CMat wp = w, wm = w;
        for (std::size_t i = 0; i < 2; ++i)
        {
            wp(i, 0) += h * dw(i, 0);
            wm(i, 0) -= h * dw(i, 0);
        }
        if (!rel_ok(directional(grad_combiner(f, m, w, hm), dw),
                    (objective_link(f, m, wp, hm) - objective_link(f, m, wm, hm)) / (2.0 * h)))
            ++bad;
    }
    const double sec = timer.seconds();
    char note[128];
    std::snprintf(note, sizeof(note), "%d/150 direction checks failed", bad);
    report(1, "gradient correctness", bad == 0 && sec < 10.0, sec, note);
}

// criterion 2: the projected channel gain upper-bounds the power ratio on
// 100 random feasible tuples.
void criterion_upper_bound()
{
    Timer timer;
    SystemConfig cfg;
    cfg.n_tx = 6;
    cfg.n_rx = 2;
    cfg.n_rf_tx = 3;
    cfg.k_users = 1;
    ChannelParams cp;
    cp.n_tx = cfg.n_tx;
    cp.n_rx = cfg.n_rx;
    Rng rng(102);
    int bad = 0;
    for (int trial = 0; trial < 100; ++trial)
    {
        const ChannelSet ch = generate_channel(cp, 1, 20000 + std::uint64_t(trial));
        const HybridSolution sol = random_feasible(cfg, rng);
        const CMat fm = matmul(sol.analog, sol.digital);
        const double num = std::norm(inner(sol.combiners[0], matmul(ch.users[0], fm)));
        const double den = frobenius_norm(fm);
        const double tau = num / (den * den);
        if (!(tau <= objective_analog(sol.analog, sol.combiners[0], ch.users[0]) + 1e-9))
            ++bad;
    }
    const double sec = timer.seconds();
    char note[128];
    std::snprintf(note, sizeof(note), "%d/100 bound violations", bad);
    report(2, "surrogate upper bound", bad == 0 && sec < 5.0, sec, note);
}

// criteria 3+4: every emitted solution is feasible (exact phases, power
// residual < 1e-9) and every incumbent trace is non-decreasing.
void criterion_feasibility_and_monotonicity()
{
    Timer timer;
    bool feasible = true, monotone = true;
    const auto inspect = [&](const std::pair<HybridSolution, SolveTrace> &res, const SystemConfig &cfg) {
        const FeasibilityReport rep = check_feasibility(res.first, cfg);
        feasible = feasible && rep.ok();
        for (std::size_t i = 1; i < res.second.gamma_trace.size(); ++i)
            monotone = monotone && res.second.gamma_trace[i] >= res.second.gamma_trace[i - 1];
    };
    for (int r = 0; r < 3; ++r)
    {
        SystemConfig cfg;
        cfg.n_tx = 4 + r;
        cfg.n_rx = 2;
        cfg.n_rf_tx = 2;
        cfg.k_users = 3;
        ChannelParams cp;
        cp.n_tx = cfg.n_tx;
        cp.n_rx = cfg.n_rx;
        const ChannelSet ch = generate_channel(cp, cfg.k_users, 30000 + std::uint64_t(r));
        GdmHyperParams hp;
        hp.n_xpr = 8;
        hp.n_xpt = 8;
        SdrParams sp;
        sp.n_rand = 8;
        sp.seed = 40000 + std::uint64_t(r);
        inspect(run_lb_gdm(ch, cfg, hp, 1 + std::uint64_t(r)), cfg);
        inspect(run_sdr_c(ch, cfg, sp, PrecoderMode::hybrid), cfg);
        SystemConfig dcfg = cfg;
        dcfg.n_rf_tx = cfg.n_tx;
        inspect(run_lb_gdm_digital(ch, dcfg, hp, 2 + std::uint64_t(r)), dcfg);
        inspect(run_sdr_c(ch, dcfg, sp, PrecoderMode::fully_digital), dcfg);
    }
    const double sec = timer.seconds();
    report(3, "emitted solutions feasible", feasible, sec, feasible ? "exact phases, power in budget" : "violation found");
    report(4, "incumbent traces monotone", monotone, 0.0, monotone ? "all traces non-decreasing" : "decrease found");
}

// criterion 5: solver objective vs P_rx * lambda_max(C_k) on 20 random
// trace-constrained instances at n_rx = 3 (power-iteration oracle).
void criterion_sdp_oracle()
{
    Timer timer;
    Rng rng(105);
    int bad = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial)
    {
        const CMat g = random_matrix(3, 1, rng);
        const CMat c = outer(g, g);
        SdpProblem p;
        p.n = 3;
        p.ineq.push_back(c);
        p.eq.emplace_back(CMat::identity(3), 0.01);
        const SdpSolution sol = solve_maxmin_sdp(p);

        // Independent oracle: plain power iteration on C.
        CMat v(3, 1);
        for (int i = 0; i < 3; ++i)
            v(std::size_t(i), 0) = cxd(1.0 + 0.1 * double(i), 0.05 * double(i));
        double lam = 0.0;
        for (int it = 0; it < 2000; ++it)
        {
            CMat cv = matmul(c, v);
            const double nv = frobenius_norm(cv);
            if (nv <= 1e-300)
                break;
            for (int i = 0; i < 3; ++i)
                v(std::size_t(i), 0) = cv(std::size_t(i), 0) / nv;
            lam = inner(v, matmul(c, v)).real();
        }
        const double expect = 0.01 * lam;
        const double rel = std::abs(sol.t - expect) / std::max(expect, 1e-300);
        worst = std::max(worst, rel);
        if (sol.status != SdpStatus::optimal || rel > 1e-5)
            ++bad;
    }
    const double sec = timer.seconds();
    char note[128];
    std::snprintf(note, sizeof(note), "worst relative error %.2e", worst);
    report(5, "sdp objective vs eigen oracle", bad == 0 && sec < 10.0, sec, note);
}

// criterion 6: rank-one lifted inputs recover the original alphabet vector
// up to one global alphabet rotation, with identical minimum SNR.
void criterion_rank_one_recovery()
{
    Timer timer;
    SystemConfig cfg;
    cfg.n_tx = 4;
    cfg.n_rx = 2;
    cfg.n_rf_tx = 2;
    cfg.k_users = 2;
    ChannelParams cp;
    cp.n_tx = cfg.n_tx;
    cp.n_rx = cfg.n_rx;
    const PhaseAlphabet fa = cfg.tx_alphabet();
    const int n = cfg.n_tx * cfg.n_rf_tx;
    Rng rng(106);
    int bad = 0;
    for (int trial = 0; trial < 20; ++trial)
    {
        const ChannelSet ch = generate_channel(cp, cfg.k_users, 50000 + std::uint64_t(trial));
        const HybridSolution base = random_feasible(cfg, rng);
        CMat f_true(std::size_t(n), 1);
        for (int i = 0; i < n; ++i)
            f_true(std::size_t(i), 0) = fa.element(int(rng.uniform_index(std::uint64_t(fa.size))));

        SdrParams params;
        params.n_rand = 8;
        Rng rec_rng(60000 + std::uint64_t(trial));
        const CMat f_rec =
            recover_analog(outer(f_true, f_true), ch, base.digital, base.combiners, cfg, params, rec_rng);

        const CMat f_rec_vec = vec(f_rec);
        const cxd ratio0 = f_rec_vec(0, 0) / f_true(0, 0);
        bool rot_ok = false;
        for (int l = 0; l < fa.size; ++l)
            if (std::abs(ratio0 - std::polar(1.0, 6.283185307179586 * double(l) / double(fa.size))) < 1e-9)
                rot_ok = true;
        bool entries_ok = true;
        for (int i = 1; i < n; ++i)
            entries_ok = entries_ok && std::abs(f_rec_vec(std::size_t(i), 0) / f_true(std::size_t(i), 0) - ratio0) < 1e-9;

        const CMat f_true_mat = unvec(f_true, std::size_t(cfg.n_tx), std::size_t(cfg.n_rf_tx));
        const CMat m_true = power_normalize_digital(base.digital, f_true_mat, cfg.p_tx_max);
        const CMat m_rec = power_normalize_digital(base.digital, f_rec, cfg.p_tx_max);
        const double g_true =
            min_snr(ch, HybridSolution{PrecoderMode::hybrid, f_true_mat, m_true, base.combiners}, cfg.sigma2);
        const double g_rec =
            min_snr(ch, HybridSolution{PrecoderMode::hybrid, f_rec, m_rec, base.combiners}, cfg.sigma2);
        if (!rot_ok || !entries_ok || std::abs(g_true - g_rec) > 1e-9 * (1.0 + g_true))
            ++bad;
    }
    const double sec = timer.seconds();
    char note[128];
    std::snprintf(note, sizeof(note), "%d/20 round trips failed", bad);
    report(6, "rank-one recovery round trip", bad == 0 && sec < 10.0, sec, note);
}

// criterion 7: at enumeration scale the learned solution reaches 99% of the
// exhaustive optimum in at least 95 of 100 seeded trials.
void criterion_small_instance_optimality()
{
    Timer timer;
    SystemConfig cfg;
    cfg.n_tx = 2;
    cfg.n_rx = 1;
    cfg.n_rf_tx = 1;
    cfg.k_users = 2;
    ChannelParams cp;
    cp.n_tx = cfg.n_tx;
    cp.n_rx = cfg.n_rx;
    GdmHyperParams hp;
    hp.n_xpr = 30;
    hp.n_xpt = 30;
    const PhaseAlphabet fa = cfg.tx_alphabet();
    std::atomic<int> hits{0};
    detail::parallel_for(100, g_workers, [&](int trial) {
        const ChannelSet ch = generate_channel(cp, cfg.k_users, 70000 + std::uint64_t(trial));
        // Exhaustive optimum over all 8^2 analog candidates; the scalar
        // digital precoder contributes only its modulus and the scalar
        // combiner cancels entirely.
        double best = 0.0;
        for (int l0 = 0; l0 < 8; ++l0)
            for (int l1 = 0; l1 < 8; ++l1)
            {
                CMat f(2, 1);
                f(0, 0) = fa.element(l0);
                f(1, 0) = fa.element(l1);
                const double fn = frobenius_norm(f);
                double worst = 1e300;
                for (int k = 0; k < 2; ++k)
                {
                    const CMat hf = matmul(ch.users[std::size_t(k)], f);
                    worst = std::min(worst, cfg.p_tx_max * std::norm(hf(0, 0)) / (cfg.sigma2 * fn * fn));
                }
                best = std::max(best, worst);
            }
        const auto [sol, trace] = run_lb_gdm(ch, cfg, hp, 80000 + std::uint64_t(trial));
        (void)trace;
        if (min_snr(ch, sol, cfg.sigma2) >= 0.99 * best)
            hits.fetch_add(1);
    });
    const double sec = timer.seconds();
    char note[128];
    std::snprintf(note, sizeof(note), "%d/100 trials reached 99%% of optimum", hits.load());
    report(7, "small-instance optimality gap", hits.load() >= 95 && sec < 60.0, sec, note);
}

// criterion 8: receive-array gain trend, fully-digital ratio in
// [1.34, 2.23] and hybrid ratio in [1.5, 2.5] at K=50, n_tx=8.
void criterion_antenna_trend()
{
    Timer timer;
    const int realizations = 50;
    GdmHyperParams hp;
    hp.n_xpr = 40;
    hp.n_xpt = 40;

    const auto mean_min_snr = [&](int n_rx, bool digital) {
        std::vector<double> vals(std::size_t(realizations), 0.0);
        detail::parallel_for(realizations, g_workers, [&](int r) {
            SystemConfig cfg;
            cfg.n_tx = 8;
            cfg.n_rx = n_rx;
            cfg.n_rf_tx = digital ? 8 : 2;
            cfg.k_users = 50;
            ChannelParams cp;
            cp.n_tx = cfg.n_tx;
            cp.n_rx = cfg.n_rx;
            const std::uint64_t seed = mix_seed(90000 + std::uint64_t(n_rx) * 2 + (digital ? 1 : 0),
                                                std::uint64_t(r));
            const ChannelSet ch = generate_channel(cp, cfg.k_users, seed);
            const auto res = digital ? run_lb_gdm_digital(ch, cfg, hp, mix_seed(seed, 1))
                                     : run_lb_gdm(ch, cfg, hp, mix_seed(seed, 2));
            vals[std::size_t(r)] = min_snr(ch, res.first, cfg.sigma2);
        });
        double acc = 0.0;
        for (double v : vals)
            acc += v;
        return acc / double(realizations);
    };

    const double d1 = mean_min_snr(1, true);
    const double d2 = mean_min_snr(2, true);
    const double h1 = mean_min_snr(1, false);
    const double h2 = mean_min_snr(2, false);
    const double dr = d2 / d1;
    const double hr = h2 / h1;
    const bool pass = dr >= 1.34 && dr <= 2.23 && hr >= 1.5 && hr <= 2.5;
    char note[160];
    std::snprintf(note, sizeof(note), "digital ratio %.3f (d1 %.3f, d2 %.3f), hybrid ratio %.3f (h1 %.3f, h2 %.3f)",
                  dr, d1, d2, hr, h1, h2);
    report(8, "receive-antenna gain trend", pass, timer.seconds(), note);
}

// criterion 9: the learned scheme beats the relaxation baseline by at least
// 25% in mean minimum SNR, both modes, on paired realizations.
void criterion_sdr_comparison()
{
    Timer timer;
    const int realizations = 30;
    SystemConfig cfg;
    cfg.n_tx = 20;
    cfg.n_rx = 3;
    cfg.n_rf_tx = 6;
    cfg.k_users = 25;
    SystemConfig dcfg = cfg;
    dcfg.n_rf_tx = cfg.n_tx;
    GdmHyperParams hp;
    hp.n_xpr = 40;
    hp.n_xpt = 40;

    std::vector<double> lb_h(std::size_t(realizations), 0.0), lb_d(std::size_t(realizations), 0.0);
    std::vector<double> sdr_h(std::size_t(realizations), 0.0), sdr_d(std::size_t(realizations), 0.0);
    detail::parallel_for(realizations, g_workers, [&](int r) {
        ChannelParams cp;
        cp.n_tx = cfg.n_tx;
        cp.n_rx = cfg.n_rx;
        const std::uint64_t seed = mix_seed(110000, std::uint64_t(r));
        const ChannelSet ch = generate_channel(cp, cfg.k_users, seed);
        lb_h[std::size_t(r)] = min_snr(ch, run_lb_gdm(ch, cfg, hp, mix_seed(seed, 1)).first, cfg.sigma2);
        lb_d[std::size_t(r)] =
            min_snr(ch, run_lb_gdm_digital(ch, dcfg, hp, mix_seed(seed, 2)).first, dcfg.sigma2);
        SdrParams sp;
        sp.n_rand = 50;
        sp.seed = mix_seed(seed, 3);
        sdr_h[std::size_t(r)] = min_snr(ch, run_sdr_c(ch, cfg, sp, PrecoderMode::hybrid).first, cfg.sigma2);
        sp.seed = mix_seed(seed, 4);
        sdr_d[std::size_t(r)] =
            min_snr(ch, run_sdr_c(ch, dcfg, sp, PrecoderMode::fully_digital).first, dcfg.sigma2);
    });
    const auto mean = [&](const std::vector<double> &v) {
        double acc = 0.0;
        for (double x : v)
            acc += x;
        return acc / double(v.size());
    };
    const double mlh = mean(lb_h), mld = mean(lb_d), msh = mean(sdr_h), msd = mean(sdr_d);
    const bool pass = mlh >= 1.25 * msh && mld >= 1.25 * msd;
    char note[200];
    std::snprintf(note, sizeof(note),
                  "hybrid %.3f vs %.3f (x%.2f), digital %.3f vs %.3f (x%.2f)", mlh, msh,
                  msh > 0 ? mlh / msh : 0.0, mld, msd, msd > 0 ? mld / msd : 0.0);
    report(9, "learned vs relaxation baseline", pass, timer.seconds(), note);
}

// criterion 10: the fully-digital precoder dominates the hybrid one on at
// least 90% of paired realizations of the exploration-sweep configuration.
void criterion_digital_dominates()
{
    Timer timer;
    const int realizations = 50;
    SystemConfig cfg;
    cfg.n_tx = 15;
    cfg.n_rx = 2;
    cfg.n_rf_tx = 6;
    cfg.k_users = 30;
    SystemConfig dcfg = cfg;
    dcfg.n_rf_tx = cfg.n_tx;
    GdmHyperParams hp;
    hp.n_xpr = 40;
    hp.n_xpt = 40;
    std::atomic<int> wins{0};
    detail::parallel_for(realizations, g_workers, [&](int r) {
        ChannelParams cp;
        cp.n_tx = cfg.n_tx;
        cp.n_rx = cfg.n_rx;
        const std::uint64_t seed = mix_seed(120000, std::uint64_t(r));
        const ChannelSet ch = generate_channel(cp, cfg.k_users, seed);
        const double hybrid = min_snr(ch, run_lb_gdm(ch, cfg, hp, mix_seed(seed, 1)).first, cfg.sigma2);
        const double digital =
            min_snr(ch, run_lb_gdm_digital(ch, dcfg, hp, mix_seed(seed, 2)).first, dcfg.sigma2);
        if (digital >= hybrid)
            wins.fetch_add(1);
    });
    char note[128];
    std::snprintf(note, sizeof(note), "digital >= hybrid on %d/%d realizations", wins.load(), realizations);
    report(10, "fully-digital dominates hybrid", wins.load() * 10 >= realizations * 9, timer.seconds(), note);
}

// criterion 11: the CLI run subcommand produces byte-identical CSV across
// repeated invocations and across worker counts 1 and 4.
void criterion_cli_determinism()
{
    Timer timer;
    if (g_cli_path.empty())
    {
        report(11, "CLI byte-level determinism", false, 0.0, "no --cli-path provided");
        return;
    }
    const std::string spec_path = "/tmp/mcbeam_acceptance_spec.json";
    {
        std::ofstream f(spec_path);
        f << R"({
            "version": 1,
            "scenario": "custom",
            "grid": {"n_tx": [4], "n_rx": [2], "n_rf": [2], "k_users": [3]},
            "gdm": {"n_xpr": 4, "n_xpt": 4},
            "sdr": {"n_rand": 4, "n_iter_sdr": 2},
            "methods": ["lb-gdm", "sdr-c"],
            "modes": ["hybrid", "digital"],
            "realizations": 4,
            "master_seed": 31415,
            "out": "unused.csv"
        })";
    }
    const auto run_cli = [&](const std::string &out, int workers) {
        const std::string cmd = "\"" + g_cli_path + "\" run " + spec_path + " --out " + out +
                                " --workers " + std::to_string(workers) + " > /dev/null 2>&1";
        return std::system(cmd.c_str()) == 0;
    };
    const auto slurp = [](const std::string &path) {
        std::ifstream f(path, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    bool ok = run_cli("/tmp/mcbeam_acc_a.csv", 1) && run_cli("/tmp/mcbeam_acc_b.csv", 1) &&
              run_cli("/tmp/mcbeam_acc_c.csv", 4);
    std::string note = "CLI invocation failed";
    if (ok)
    {
        const std::string a = slurp("/tmp/mcbeam_acc_a.csv");
        const std::string b = slurp("/tmp/mcbeam_acc_b.csv");
        const std::string c = slurp("/tmp/mcbeam_acc_c.csv");
        ok = !a.empty() && a == b && a == c;
        note = ok ? "identical bytes across runs and workers {1, 4}" : "outputs differ";
    }
    for (const char *p : {"/tmp/mcbeam_acc_a.csv", "/tmp/mcbeam_acc_b.csv", "/tmp/mcbeam_acc_c.csv"})
        std::remove(p);
    std::remove(spec_path.c_str());
    report(11, "CLI byte-level determinism", ok, timer.seconds(), note);
}

} // namespace

int main(int argc, char **argv)
{
    int only = 0;
    for (int i = 1; i < argc; ++i)
    {
        if (std::strcmp(argv[i], "--cli-path") == 0 && i + 1 < argc)
            g_cli_path = argv[++i];
        else if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc)
            g_workers = std::atoi(argv[++i]);
        else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc)
            only = std::atoi(argv[++i]);
    }
    const auto want = [&](int id) { return only == 0 || only == id; };

    if (want(1))
        criterion_gradients();
    if (want(2))
        criterion_upper_bound();
    if (want(3) || want(4))
        criterion_feasibility_and_monotonicity();
    if (want(5))
        criterion_sdp_oracle();
    if (want(6))
        criterion_rank_one_recovery();
    if (want(7))
        criterion_small_instance_optimality();
    if (want(8))
        criterion_antenna_trend();
    if (want(9))
        criterion_sdr_comparison();
    if (want(10))
        criterion_digital_dominates();
    if (want(11))
        criterion_cli_determinism();

    std::printf("%d criterion failure%s\n", g_failures, g_failures == 1 ? "" : "s");
    return g_failures == 0 ? 0 : 1;
}
