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

#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include <mcbeam/harness.hpp>
#include <mcbeam/lb_gdm.hpp>
#include <mcbeam/sdr_c.hpp>

namespace {

using namespace mcbeam;

int run_command(const std::string &spec_path, std::uint64_t *seed_override, std::string out_override,
                int workers, int realizations_override, bool timing)
{
    ExperimentSpec spec = load_spec(spec_path);
    if (seed_override)
        spec.master_seed = *seed_override;
    if (!out_override.empty())
        spec.out_path = out_override;
    if (realizations_override > 0)
        spec.realizations = realizations_override;
    spec.validate();
    const std::vector<RunRow> rows = run_experiment(spec, workers);
    emit_csv(spec.out_path, rows, timing);
    std::printf("wrote %zu rows to %s (scenario %s, %d realizations, seed %llu)\n", rows.size(),
                spec.out_path.c_str(), spec.scenario.c_str(), spec.realizations,
                static_cast<unsigned long long>(spec.master_seed));
    return 0;
}

struct CheckContext {
    int failures = 0;

    void report(const char *name, bool ok, const std::string &note = "")
    {
        std::printf("%s  %s%s%s\n", ok ? "PASS" : "FAIL", name, note.empty() ? "" : ": ",
                    note.c_str());
        if (!ok)
            ++failures;
    }
};

void check_projection(CheckContext &ctx)
{
    Rng rng(11);
    PhaseAlphabet fa{0.5, 8};
    bool ok = true;
    for (int i = 0; i < 1000 && ok; ++i)
    {
        const cxd z(rng.gaussian(), rng.gaussian());
        const cxd p = project_to_alphabet(z, fa);
        ok = ok && (project_to_alphabet(p, fa) == p);
        if (z != cxd(0.0, 0.0))
        {
            double d = std::arg(p * std::conj(z));
            ok = ok && std::abs(d) <= 3.141592653589793 / double(fa.size) + 1e-12;
        }
    }
    ctx.report("alphabet projection (idempotent, nearest phase)", ok);
}

void check_gradients(CheckContext &ctx)
{
    Rng rng(21);
    const auto random_mat = [&](std::size_t r, std::size_t c) {
        CMat m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                m(i, j) = rng.complex_gaussian();
        return m;
    };
    bool ok = true;
    const double h = 1e-6;
    for (int trial = 0; trial < 10 && ok; ++trial)
    {
        const CMat f = random_mat(4, 2), m = random_mat(2, 1), w = random_mat(2, 1), hm = random_mat(2, 4);
        const CMat delta = random_mat(4, 2);
        const CMat g = grad_analog(f, w, hm);
        double lhs = 0.0;
        for (std::size_t i = 0; i < g.rows(); ++i)
            for (std::size_t j = 0; j < g.cols(); ++j)
                lhs += 2.0 * (std::conj(g(i, j)) * delta(i, j)).real();
        CMat fp = f, fm2 = f;
        for (std::size_t i = 0; i < f.rows(); ++i)
            for (std::size_t j = 0; j < f.cols(); ++j)
            {
                fp(i, j) += h * delta(i, j);
                fm2(i, j) -= h * delta(i, j);
            }
        const double rhs = (objective_analog(fp, w, hm) - objective_analog(fm2, w, hm)) / (2.0 * h);
        ok = ok && std::abs(lhs - rhs) <= 1e-4 * std::max({std::abs(lhs), std::abs(rhs), 1e-9});
        (void)m;
    }
    ctx.report("analog gradient vs central differences", ok);
}

void check_solvers(CheckContext &ctx)
{
    SystemConfig cfg;
    cfg.n_tx = 4;
    cfg.n_rx = 2;
    cfg.n_rf_tx = 2;
    cfg.k_users = 3;
    ChannelParams cp;
    cp.n_tx = cfg.n_tx;
    cp.n_rx = cfg.n_rx;
    const ChannelSet ch = generate_channel(cp, cfg.k_users, 5);
    GdmHyperParams hp;
    hp.n_xpr = 8;
    hp.n_xpt = 8;
    SdrParams sp;
    sp.n_rand = 8;
    sp.seed = 7;

    bool feasible = true, monotone = true;
    const auto inspect = [&](const std::pair<HybridSolution, SolveTrace> &res) {
        feasible = feasible && check_feasibility(res.first, cfg).ok();
        for (std::size_t i = 1; i < res.second.gamma_trace.size(); ++i)
            monotone = monotone && res.second.gamma_trace[i] >= res.second.gamma_trace[i - 1];
    };
    inspect(run_lb_gdm(ch, cfg, hp, 1));
    inspect(run_lb_gdm_digital(ch, cfg, hp, 2));
    inspect(run_sdr_c(ch, cfg, sp, PrecoderMode::hybrid));
    inspect(run_sdr_c(ch, cfg, sp, PrecoderMode::fully_digital));
    ctx.report("solver outputs feasible", feasible);
    ctx.report("incumbent traces non-decreasing", monotone);
}

void check_sdp(CheckContext &ctx)
{
    Rng rng(31);
    bool ok = true;
    for (int trial = 0; trial < 5 && ok; ++trial)
    {
        CMat g(3, 1);
        for (int i = 0; i < 3; ++i)
            g(std::size_t(i), 0) = rng.complex_gaussian();
        SdpProblem prob;
        prob.n = 3;
        prob.ineq.push_back(outer(g, g));
        prob.eq.emplace_back(CMat::identity(3), 0.01);
        const SdpSolution sol = solve_maxmin_sdp(prob);
        const double expect = 0.01 * inner(g, g).real();
        ok = ok && sol.status == SdpStatus::optimal &&
             std::abs(sol.t - expect) <= 1e-5 * std::max(expect, 1e-12);
    }
    ctx.report("sdp objective vs eigenvalue closed form", ok);
}

void check_determinism(CheckContext &ctx)
{
    ExperimentSpec spec;
    spec.scenario = "custom";
    spec.n_tx_grid = {4};
    spec.n_rx_grid = {2};
    spec.n_rf_grid = {2};
    spec.k_grid = {3};
    spec.gdm.n_xpr = 4;
    spec.gdm.n_xpt = 4;
    spec.sdr.n_rand = 4;
    spec.methods = {"lb-gdm", "sdr-c"};
    spec.modes = {"hybrid", "digital"};
    spec.realizations = 2;
    spec.master_seed = 99;
    const std::string a = to_csv(run_experiment(spec, 1));
    const std::string b = to_csv(run_experiment(spec, 1));
    const std::string c = to_csv(run_experiment(spec, 2));
    ctx.report("experiment determinism (repeat, worker counts)", a == b && a == c);
}

int check_command()
{
    CheckContext ctx;
    check_projection(ctx);
    check_gradients(ctx);
    check_sdp(ctx);
    check_solvers(ctx);
    check_determinism(ctx);
    std::printf("%s (%d failure%s)\n", ctx.failures == 0 ? "all checks passed" : "checks FAILED",
                ctx.failures, ctx.failures == 1 ? "" : "s");
    return ctx.failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"max-min fair multicast beamforming experiments"};
    app.require_subcommand(1);

    std::string spec_path;
    std::string out_override;
    std::uint64_t seed_value = 0;
    bool seed_set = false;
    int workers = 1;
    int realizations_override = 0;
    bool timing = false;

    CLI::App *run = app.add_subcommand("run", "run an experiment spec and write CSV results");
    run->add_option("spec-file", spec_path, "experiment spec (JSON)")->required();
    run->add_option("--seed", seed_value, "override the master seed")->each([&](const std::string &) {
        seed_set = true;
    });
    run->add_option("--out", out_override, "override the output CSV path");
    run->add_option("--workers", workers, "worker threads for realizations")->check(CLI::PositiveNumber);
    run->add_option("--realizations", realizations_override, "override the realization count")
        ->check(CLI::PositiveNumber);
    run->add_flag("--timing", timing, "emit measured wall times (breaks byte reproducibility)");

    CLI::App *check = app.add_subcommand("check", "run the built-in invariant suite");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (run->parsed())
            return run_command(spec_path, seed_set ? &seed_value : nullptr, out_override, workers,
                               realizations_override, timing);
        if (check->parsed())
            return check_command();
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
