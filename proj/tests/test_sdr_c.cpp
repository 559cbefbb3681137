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

#include <catch2/catch.hpp>

#include <mcbeam/sdr_c.hpp>

#include "oracles.hpp"

using namespace mcbeam;
using oracles::random_matrix;

namespace {

double trace_product(const CMat &a, const CMat &x)
{
    cxd t(0.0, 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            t += a(r, c) * x(c, r);
    return t.real();
}

} // namespace

TEST_CASE("analog lifting identities", "[sdrc]")
{
    // m = [1, 0]^T selects the first column block.
    CMat m(2, 1);
    m(0, 0) = 1.0;
    Rng rng(40);
    const CMat h = random_matrix(2, 2, rng);
    const CMat w = random_matrix(2, 1, rng);
    const AnalogLift lift = lift_analog(m, h, w, 2);
    REQUIRE(lift.p.rows() == 2);
    REQUIRE(lift.p.cols() == 4);
    const CMat f = random_matrix(2, 2, rng);
    const CMat pf = matmul(lift.p, vec(f));
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(std::abs(pf(i, 0) - f(i, 0)) < 1e-15);

    // General vec identity against F m.
    const CMat m2 = random_matrix(3, 1, rng);
    const CMat f2 = random_matrix(4, 3, rng);
    const CMat h2 = random_matrix(2, 4, rng);
    const CMat w2 = random_matrix(2, 1, rng);
    const AnalogLift lift2 = lift_analog(m2, h2, w2, 4);
    CHECK(frobenius_norm(matmul(lift2.p, vec(f2)) - matmul(f2, m2)) < 1e-12);

    // Rank-one and Hermitian; zero channel or combiner gives a zero matrix.
    CHECK(is_hermitian(lift2.r, 1e-10));
    const AnalogLift zero = lift_analog(m2, CMat(2, 4), w2, 4);
    CHECK(frobenius_norm(zero.r) == 0.0);
}

TEST_CASE("analog SDP honors the diagonal constraint and the relaxation bound", "[sdrc]")
{
    SystemConfig cfg;
    cfg.n_tx = 3;
    cfg.n_rx = 2;
    cfg.n_rf_tx = 2;
    cfg.k_users = 2;
    ChannelParams cp;
    cp.n_tx = cfg.n_tx;
    cp.n_rx = cfg.n_rx;
    const ChannelSet ch = generate_channel(cp, cfg.k_users, 41);
    CMat m(2, 1);
    m(0, 0) = 1.0;
    Rng rng(42);
    const std::vector<CMat> w = random_feasible(cfg, rng).combiners;

    const CMat d = solve_sdr_analog(ch, m, w, cfg);
    const int n = cfg.n_tx * cfg.n_rf_tx;
    for (int j = 0; j < n; ++j)
        CHECK(std::abs(d(std::size_t(j), std::size_t(j)).real() - cfg.delta_tx()) < 1e-6);

    std::vector<CMat> r_mats;
    for (int k = 0; k < cfg.k_users; ++k)
        r_mats.push_back(lift_analog(m, ch.users[std::size_t(k)], w[std::size_t(k)], cfg.n_tx).r);
    double t_d = 1e300;
    for (const CMat &r : r_mats)
        t_d = std::min(t_d, trace_product(r, d));

    // Relaxation upper bound: no feasible rank-one point beats the SDP value.
    const PhaseAlphabet fa = cfg.tx_alphabet();
    for (int trial = 0; trial < 20; ++trial)
    {
        CMat f(std::size_t(n), 1);
        for (int i = 0; i < n; ++i)
            f(std::size_t(i), 0) = fa.element(int(rng.uniform_index(std::uint64_t(fa.size))));
        double cand = 1e300;
        for (const CMat &r : r_mats)
            cand = std::min(cand, trace_product(r, outer(f, f)));
        CHECK(cand <= t_d + 1e-9);
    }

    // K=1 with identity-like data: the diagonal pins the trace, t = delta * n.
    SdpProblem pinned;
    pinned.n = 4;
    pinned.ineq.push_back(CMat::identity(4));
    pinned.diag_value = 0.125;
    const SdpSolution sol = solve_maxmin_sdp(pinned);
    REQUIRE(sol.status == SdpStatus::optimal);
    CHECK(sol.t == Approx(0.5).epsilon(1e-6));
    CHECK(oracles::max_abs_diff(sol.x, 0.125 * CMat::identity(4)) < 1e-6);
}

TEST_CASE("rank-one analog recovery returns the original up to a global alphabet phase", "[sdrc]")
{
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

    Rng rng(43);
    for (int trial = 0; trial < 5; ++trial)
    {
        const ChannelSet ch = generate_channel(cp, cfg.k_users, 500 + std::uint64_t(trial));
        const HybridSolution base = random_feasible(cfg, rng);
        CMat f_true(std::size_t(n), 1);
        for (int i = 0; i < n; ++i)
            f_true(std::size_t(i), 0) = fa.element(int(rng.uniform_index(std::uint64_t(fa.size))));
        const CMat d = outer(f_true, f_true);

        SdrParams params;
        params.n_rand = 8;
        Rng rec_rng(900 + std::uint64_t(trial));
        const CMat f_rec = recover_analog(d, ch, base.digital, base.combiners, cfg, params, rec_rng);

        // Entrywise ratio must be one common alphabet rotation.
        const CMat f_rec_vec = vec(f_rec);
        const cxd ratio0 = f_rec_vec(0, 0) / f_true(0, 0);
        bool alphabet_rotation = false;
        for (int l = 0; l < fa.size; ++l)
            if (std::abs(ratio0 - std::polar(1.0, 2.0 * 3.14159265358979323846 * double(l) / double(fa.size))) <
                1e-9)
                alphabet_rotation = true;
        CHECK(alphabet_rotation);
        for (int i = 1; i < n; ++i)
            CHECK(std::abs(f_rec_vec(std::size_t(i), 0) / f_true(std::size_t(i), 0) - ratio0) < 1e-9);

        // Identical minimum SNR after renormalizing the digital part.
        const CMat f_true_mat = unvec(f_true, std::size_t(cfg.n_tx), std::size_t(cfg.n_rf_tx));
        const CMat m_true = power_normalize_digital(base.digital, f_true_mat, cfg.p_tx_max);
        const CMat m_rec = power_normalize_digital(base.digital, f_rec, cfg.p_tx_max);
        const HybridSolution sol_true{PrecoderMode::hybrid, f_true_mat, m_true, base.combiners};
        const HybridSolution sol_rec{PrecoderMode::hybrid, f_rec, m_rec, base.combiners};
        const double g_true = min_snr(ch, sol_true, cfg.sigma2);
        const double g_rec = min_snr(ch, sol_rec, cfg.sigma2);
        CHECK(std::abs(g_true - g_rec) <= 1e-9 * (1.0 + g_true));
    }
}

TEST_CASE("single-element analog recovery is the fixed modulus", "[sdrc]")
{
    SystemConfig cfg;
    cfg.n_tx = 1;
    cfg.n_rx = 1;
    cfg.n_rf_tx = 1;
    cfg.k_users = 1;
    ChannelParams cp;
    const ChannelSet ch = generate_channel(cp, 1, 44);
    CMat m(1, 1);
    m(0, 0) = 1.0;
    std::vector<CMat> w{CMat::from_rows({{0.1}})};
    CMat d(1, 1);
    d(0, 0) = cfg.delta_tx();
    SdrParams params;
    params.n_rand = 3;
    Rng rng(45);
    const CMat f = recover_analog(d, ch, m, w, cfg, params, rng);
    CHECK(std::abs(std::abs(f(0, 0)) - std::sqrt(cfg.delta_tx())) < 1e-15);
    const PhaseAlphabet fa = cfg.tx_alphabet();
    CHECK(project_to_alphabet(f(0, 0), fa) == f(0, 0));
}

TEST_CASE("recovered objective is monotone in the randomization count", "[sdrc]")
{
    SystemConfig cfg;
    cfg.n_tx = 3;
    cfg.n_rx = 2;
    cfg.n_rf_tx = 2;
    cfg.k_users = 3;
    ChannelParams cp;
    cp.n_tx = cfg.n_tx;
    cp.n_rx = cfg.n_rx;
    const ChannelSet ch = generate_channel(cp, cfg.k_users, 46);
    Rng rng(47);
    const HybridSolution base = random_feasible(cfg, rng);
    const CMat d = solve_sdr_analog(ch, base.digital, base.combiners, cfg);

    const auto recovered_value = [&](int n_rand) {
        SdrParams params;
        params.n_rand = n_rand;
        Rng rec_rng(99);
        const CMat f = recover_analog(d, ch, base.digital, base.combiners, cfg, params, rec_rng);
        const CMat m = power_normalize_digital(base.digital, f, cfg.p_tx_max);
        return min_snr(ch, HybridSolution{PrecoderMode::hybrid, f, m, base.combiners}, cfg.sigma2);
    };
    CHECK(recovered_value(20) >= recovered_value(5));
}

TEST_CASE("digital SDP and covariance recovery", "[sdrc]")
{
    SystemConfig cfg;
    cfg.n_tx = 4;
    cfg.n_rx = 2;
    cfg.n_rf_tx = 2;
    cfg.k_users = 1;
    ChannelParams cp;
    cp.n_tx = cfg.n_tx;
    cp.n_rx = cfg.n_rx;
    const ChannelSet ch = generate_channel(cp, 1, 48);
    Rng rng(49);
    const HybridSolution base = random_feasible(cfg, rng);

    // Rank-one lifted input: the eigen candidate recovers m up to phase.
    const CMat m_true = power_normalize_digital(random_matrix(2, 1, rng), base.analog, cfg.p_tx_max);
    const CMat m_lift = outer(m_true, m_true);
    SdrParams params;
    params.n_rand = 4;
    Rng rec_rng(50);
    const CMat m_rec = recover_digital(m_lift, ch, base.analog, base.combiners, cfg, params, rec_rng);
    const double p = frobenius_norm(matmul(base.analog, m_rec));
    CHECK(std::abs(p * p - cfg.p_tx_max) / cfg.p_tx_max < 1e-9);
    const HybridSolution st{PrecoderMode::hybrid, base.analog, m_true, base.combiners};
    const HybridSolution sr{PrecoderMode::hybrid, base.analog, m_rec, base.combiners};
    CHECK(min_snr(ch, sr, cfg.sigma2) == Approx(min_snr(ch, st, cfg.sigma2)).epsilon(1e-9));

    // K=1: the relaxation is tight, so recovery reaches the SDP value.
    const CMat m_sdp = solve_sdr_digital(ch, base.analog, base.combiners, cfg);
    Rng rec_rng2(51);
    const CMat m_opt = recover_digital(m_sdp, ch, base.analog, base.combiners, cfg, params, rec_rng2);
    const CMat zc = matmul(hermitian(base.analog), matmul(hermitian(ch.users[0]), base.combiners[0]));
    const CMat z_mat = outer(zc, zc);
    const double t_star = trace_product(z_mat, m_sdp);
    const double achieved = std::norm(inner(base.combiners[0], matmul(ch.users[0], matmul(base.analog, m_opt))));
    CHECK(achieved >= (1.0 - 1e-3) * t_star);
}

TEST_CASE("combiner SDP and alphabet recovery", "[sdrc]")
{
    SystemConfig cfg;
    cfg.n_tx = 4;
    cfg.n_rx = 3;
    cfg.n_rf_tx = 2;
    cfg.k_users = 2;
    ChannelParams cp;
    cp.n_tx = cfg.n_tx;
    cp.n_rx = cfg.n_rx;
    const ChannelSet ch = generate_channel(cp, cfg.k_users, 52);
    Rng rng(53);
    const HybridSolution base = random_feasible(cfg, rng);

    const std::vector<CMat> lifted = solve_sdr_combiner(ch, base.analog, base.digital, cfg);
    REQUIRE(lifted.size() == 2);
    for (int k = 0; k < 2; ++k)
    {
        const CMat g = matmul(ch.users[std::size_t(k)], matmul(base.analog, base.digital));
        // Pre-projection eigen candidate attains P_rx * lambda_max(C_k).
        const auto [lam, v] = principal_eigenpair(lifted[std::size_t(k)]);
        (void)lam;
        const CMat cand = std::sqrt(cfg.p_rx_max) * v;
        const double attained = std::norm(inner(cand, g));
        const double expect = cfg.p_rx_max * inner(g, g).real();
        CHECK(attained == Approx(expect).epsilon(1e-4));

        SdrParams params;
        params.n_rand = 6;
        Rng rec_rng(54 + std::uint64_t(k));
        const CMat w = recover_combiner(lifted[std::size_t(k)], ch.users[std::size_t(k)], base.analog,
                                        base.digital, cfg, params, rec_rng);
        const PhaseAlphabet wa = cfg.rx_alphabet();
        for (std::size_t i = 0; i < w.rows(); ++i)
            CHECK(project_to_alphabet(w(i, 0), wa) == w(i, 0));
    }
}

TEST_CASE("full alternation: scalar exactness, feasibility, monotone incumbent", "[sdrc]")
{
    SystemConfig scalar;
    scalar.n_tx = 1;
    scalar.n_rx = 1;
    scalar.n_rf_tx = 1;
    scalar.k_users = 1;
    ChannelParams cp1;
    const ChannelSet ch1 = generate_channel(cp1, 1, 55);
    SdrParams params;
    params.n_rand = 4;
    params.n_iter_sdr = 2;
    params.seed = 7;
    const auto [sol1, trace1] = run_sdr_c(ch1, scalar, params, PrecoderMode::hybrid);
    const double expect = scalar.p_tx_max * std::norm(ch1.users[0](0, 0)) / scalar.sigma2;
    CHECK(min_snr(ch1, sol1, scalar.sigma2) == Approx(expect).epsilon(1e-9));
    for (std::size_t i = 1; i < trace1.gamma_trace.size(); ++i)
        CHECK(trace1.gamma_trace[i] >= trace1.gamma_trace[i - 1]);

    SystemConfig cfg;
    cfg.n_tx = 4;
    cfg.n_rx = 2;
    cfg.n_rf_tx = 2;
    cfg.k_users = 3;
    ChannelParams cp;
    cp.n_tx = cfg.n_tx;
    cp.n_rx = cfg.n_rx;
    const ChannelSet ch = generate_channel(cp, cfg.k_users, 56);
    const auto [hyb, ht] = run_sdr_c(ch, cfg, params, PrecoderMode::hybrid);
    CHECK(check_feasibility(hyb, cfg).ok());
    for (std::size_t i = 1; i < ht.gamma_trace.size(); ++i)
        CHECK(ht.gamma_trace[i] >= ht.gamma_trace[i - 1]);

    SystemConfig dcfg = cfg;
    dcfg.n_rf_tx = cfg.n_tx;
    const auto [dig, dt] = run_sdr_c(ch, dcfg, params, PrecoderMode::fully_digital);
    (void)dt;
    CHECK(dig.mode == PrecoderMode::fully_digital);
    CHECK(check_feasibility(dig, dcfg).ok());
    CHECK(oracles::max_abs_diff(dig.analog, CMat::identity(4)) == 0.0);

    // Determinism: identical seed, identical output.
    const auto [hyb2, ht2] = run_sdr_c(ch, cfg, params, PrecoderMode::hybrid);
    (void)ht2;
    CHECK(oracles::max_abs_diff(hyb.analog, hyb2.analog) == 0.0);
    CHECK(oracles::max_abs_diff(hyb.digital, hyb2.digital) == 0.0);
}
