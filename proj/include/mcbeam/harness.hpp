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
// Deterministic Monte-Carlo experiment runner. A spec file (JSON, versioned)
// names a scenario grid, the solvers to run and a master seed; every
// (grid point, realization) pair derives its channel seed through a fixed
// mix chain, all solvers see identical channels per realization (paired
// comparison), and the CSV output is byte-reproducible across runs and
// worker counts.

#ifndef MCBEAM_HARNESS_HPP
#define MCBEAM_HARNESS_HPP

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "channel.hpp"
#include "lb_gdm.hpp"
#include "sdr_c.hpp"
#include "system.hpp"

namespace mcbeam {

struct ExperimentSpec {
    std::string scenario = "custom"; // sweep-xpr-xpt | sweep-antennas | compare-sdr | custom
    std::vector<int> n_tx_grid{8};
    std::vector<int> n_rx_grid{2};
    std::vector<int> n_rf_grid{2};
    std::vector<int> k_grid{4};
    std::vector<int> n_xpr_grid; // empty means: use gdm.n_xpr
    std::vector<int> n_xpt_grid;
    double p_tx_max = 1.0;
    double p_rx_max = 0.01;
    double sigma2 = 1.0;
    int l_tx = 8;
    int l_rx = 4;
    int n_paths = 5;
    double spacing = 0.5;
    GdmHyperParams gdm;
    SdrParams sdr;
    std::vector<std::string> methods{"lb-gdm"};
    std::vector<std::string> modes{"hybrid"};
    int realizations = 1;
    std::uint64_t master_seed = 0;
    std::string out_path = "results.csv";

    void validate() const
    {
        if (scenario != "sweep-xpr-xpt" && scenario != "sweep-antennas" && scenario != "compare-sdr" &&
            scenario != "custom")
            throw std::invalid_argument("ExperimentSpec: unknown scenario '" + scenario + "'");
        if (n_tx_grid.empty() || n_rx_grid.empty() || n_rf_grid.empty() || k_grid.empty())
            throw std::invalid_argument("ExperimentSpec: grids must be non-empty");
        if (realizations < 1)
            throw std::invalid_argument("ExperimentSpec: realizations must be >= 1");
        if (methods.empty() || modes.empty())
            throw std::invalid_argument("ExperimentSpec: methods/modes must be non-empty");
        for (const std::string &m : methods)
            if (m != "lb-gdm" && m != "sdr-c")
                throw std::invalid_argument("ExperimentSpec: unknown method '" + m + "'");
        for (const std::string &m : modes)
            if (m != "hybrid" && m != "digital")
                throw std::invalid_argument("ExperimentSpec: unknown mode '" + m + "'");
        gdm.validate();
        sdr.validate();
    }
};

struct GridPoint {
    int index = 0;
    int n_tx = 0, n_rx = 0, n_rf = 0, k_users = 0;
    int n_xpr = 0, n_xpt = 0;
};

/// Row-major cartesian product: n_tx, then n_rx, n_rf, k_users, n_xpr, n_xpt.
inline std::vector<GridPoint> expand_grid(const ExperimentSpec &spec)
{
    const std::vector<int> xpr = spec.n_xpr_grid.empty() ? std::vector<int>{spec.gdm.n_xpr} : spec.n_xpr_grid;
    const std::vector<int> xpt = spec.n_xpt_grid.empty() ? std::vector<int>{spec.gdm.n_xpt} : spec.n_xpt_grid;
    std::vector<GridPoint> out;
    int idx = 0;
    for (int n_tx : spec.n_tx_grid)
        for (int n_rx : spec.n_rx_grid)
            for (int n_rf : spec.n_rf_grid)
                for (int k : spec.k_grid)
                    for (int nx : xpr)
                        for (int nt : xpt)
                            out.push_back({idx++, n_tx, n_rx, n_rf, k, nx, nt});
    return out;
}

/// Channel seed for one (grid point, realization) cell. Solver streams fork
/// from it with fixed tags, so every method/mode sees the same channels.
inline std::uint64_t cell_seed(std::uint64_t master, int grid_index, int realization)
{
    return mix_seed(mix_seed(master, std::uint64_t(grid_index)), std::uint64_t(realization));
}

struct RunRow {
    std::string scenario;
    int n_tx = 0, n_rx = 0, n_rf = 0, k_users = 0;
    std::string method, mode;
    long long realization = 0; // -1 mean row, -2 stddev row
    std::uint64_t seed = 0;
    double min_snr = 0.0;
    double se = 0.0;
    double wall_ms = 0.0;
};

namespace detail {

template <typename Body> inline void parallel_for(int n, int workers, Body &&body)
{
    if (workers <= 1 || n <= 1)
    {
        for (int i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    const int count = std::min(workers, n);
    pool.reserve(std::size_t(count));
    for (int t = 0; t < count; ++t)
        pool.emplace_back([&]() {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                body(i);
        });
    for (std::thread &th : pool)
        th.join();
}

inline std::string format_double(double v)
{
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace detail

/// Execute the whole grid. Per-realization rows come first within each
/// (grid point, method, mode) group, followed by a mean row (realization
/// -1) and a sample-stddev row (realization -2). Solver failures yield NaN
/// metrics rather than aborting the run. Output is identical for any
/// worker count.
inline std::vector<RunRow> run_experiment(const ExperimentSpec &spec, int workers = 1)
{
    spec.validate();
    const std::vector<GridPoint> grid = expand_grid(spec);
    const int n_cells = int(grid.size()) * spec.realizations;
    const int n_combos = int(spec.methods.size() * spec.modes.size());

    std::vector<RunRow> cell_rows(std::size_t(n_cells) * std::size_t(n_combos));
    detail::parallel_for(n_cells, workers, [&](int cell) {
        const GridPoint &gp = grid[std::size_t(cell) / std::size_t(spec.realizations)];
        const int realization = cell % spec.realizations;
        const std::uint64_t seed = cell_seed(spec.master_seed, gp.index, realization);

        SystemConfig cfg;
        cfg.n_tx = gp.n_tx;
        cfg.n_rx = gp.n_rx;
        cfg.n_rf_tx = gp.n_rf;
        cfg.k_users = gp.k_users;
        cfg.l_tx = spec.l_tx;
        cfg.l_rx = spec.l_rx;
        cfg.p_tx_max = spec.p_tx_max;
        cfg.p_rx_max = spec.p_rx_max;
        cfg.sigma2 = spec.sigma2;

        ChannelParams cp;
        cp.n_paths = spec.n_paths;
        cp.n_tx = gp.n_tx;
        cp.n_rx = gp.n_rx;
        cp.spacing = spec.spacing;
        const ChannelSet channels = generate_channel(cp, gp.k_users, seed);

        GdmHyperParams hp = spec.gdm;
        hp.n_xpr = gp.n_xpr;
        hp.n_xpt = gp.n_xpt;

        int combo = 0;
        for (const std::string &method : spec.methods)
            for (const std::string &mode_name : spec.modes)
            {
                RunRow row;
                row.scenario = spec.scenario;
                row.n_tx = gp.n_tx;
                row.n_rx = gp.n_rx;
                row.n_rf = gp.n_rf;
                row.k_users = gp.k_users;
                row.method = method;
                row.mode = mode_name;
                row.realization = realization;
                row.seed = seed;
                const PrecoderMode mode =
                    (mode_name == "hybrid") ? PrecoderMode::hybrid : PrecoderMode::fully_digital;
                try
                {
                    HybridSolution sol;
                    SolveTrace trace;
                    if (method == "lb-gdm")
                    {
                        const std::uint64_t s = mix_seed(seed, mode == PrecoderMode::hybrid ? 1 : 2);
                        auto res = (mode == PrecoderMode::hybrid) ? run_lb_gdm(channels, cfg, hp, s)
                                                                  : run_lb_gdm_digital(channels, cfg, hp, s);
                        sol = std::move(res.first);
                        trace = std::move(res.second);
                    }
                    else
                    {
                        SdrParams sp = spec.sdr;
                        sp.seed = mix_seed(seed, mode == PrecoderMode::hybrid ? 3 : 4);
                        auto res = run_sdr_c(channels, cfg, sp, mode);
                        sol = std::move(res.first);
                        trace = std::move(res.second);
                    }
                    const std::vector<double> snrs = all_snrs(channels, sol, cfg.sigma2);
                    row.min_snr = *std::min_element(snrs.begin(), snrs.end());
                    row.se = spectral_efficiency(snrs);
                    row.wall_ms = trace.wall_ms;
                }
                catch (const std::exception &)
                {
                    row.min_snr = std::numeric_limits<double>::quiet_NaN();
                    row.se = std::numeric_limits<double>::quiet_NaN();
                    row.wall_ms = 0.0;
                }
                cell_rows[std::size_t(cell) * std::size_t(n_combos) + std::size_t(combo)] = row;
                ++combo;
            }
    });

    // Canonical assembly: grid point, method, mode, realizations ascending,
    // then the aggregate rows.
    std::vector<RunRow> out;
    out.reserve(cell_rows.size() + cell_rows.size() / std::size_t(std::max(spec.realizations, 1)) * 2);
    for (const GridPoint &gp : grid)
    {
        int combo = 0;
        for (const std::string &method : spec.methods)
            for (const std::string &mode_name : spec.modes)
            {
                (void)method;
                (void)mode_name;
                double sum_snr = 0.0, sum_se = 0.0, sum_ms = 0.0;
                std::vector<const RunRow *> group;
                group.reserve(std::size_t(spec.realizations));
                for (int r = 0; r < spec.realizations; ++r)
                {
                    const std::size_t cell = std::size_t(gp.index) * std::size_t(spec.realizations) + std::size_t(r);
                    const RunRow &row = cell_rows[cell * std::size_t(n_combos) + std::size_t(combo)];
                    out.push_back(row);
                    group.push_back(&row);
                    sum_snr += row.min_snr;
                    sum_se += row.se;
                    sum_ms += row.wall_ms;
                }
                const double n = double(spec.realizations);
                RunRow mean = *group.front();
                mean.realization = -1;
                mean.seed = 0;
                mean.min_snr = sum_snr / n;
                mean.se = sum_se / n;
                mean.wall_ms = sum_ms / n;
                RunRow sd = mean;
                sd.realization = -2;
                if (spec.realizations > 1)
                {
                    double vs = 0.0, ve = 0.0, vm = 0.0;
                    for (const RunRow *row : group)
                    {
                        vs += (row->min_snr - mean.min_snr) * (row->min_snr - mean.min_snr);
                        ve += (row->se - mean.se) * (row->se - mean.se);
                        vm += (row->wall_ms - mean.wall_ms) * (row->wall_ms - mean.wall_ms);
                    }
                    sd.min_snr = std::sqrt(vs / (n - 1.0));
                    sd.se = std::sqrt(ve / (n - 1.0));
                    sd.wall_ms = std::sqrt(vm / (n - 1.0));
                }
                else
                {
                    sd.min_snr = 0.0;
                    sd.se = 0.0;
                    sd.wall_ms = 0.0;
                }
                out.push_back(mean);
                out.push_back(sd);
                ++combo;
            }
    }
    return out;
}

/// Serialize rows. Column order is fixed; doubles print in shortest
/// round-trip form with C-locale decimal points; every row is
/// newline-terminated. With timing disabled (the default) wall_ms prints as
/// 0 so outputs stay byte-reproducible.
inline std::string to_csv(const std::vector<RunRow> &rows, bool timing = false)
{
    std::string out = "scenario,n_tx,n_rx,n_rf,K,method,mode,realization,seed,min_snr,se,wall_ms\n";
    for (const RunRow &r : rows)
    {
        out += r.scenario;
        out += ',';
        out += std::to_string(r.n_tx);
        out += ',';
        out += std::to_string(r.n_rx);
        out += ',';
        out += std::to_string(r.n_rf);
        out += ',';
        out += std::to_string(r.k_users);
        out += ',';
        out += r.method;
        out += ',';
        out += r.mode;
        out += ',';
        out += std::to_string(r.realization);
        out += ',';
        out += std::to_string(r.seed);
        out += ',';
        out += detail::format_double(r.min_snr);
        out += ',';
        out += detail::format_double(r.se);
        out += ',';
        out += detail::format_double(timing ? r.wall_ms : 0.0);
        out += '\n';
    }
    return out;
}

inline void emit_csv(const std::string &path, const std::vector<RunRow> &rows, bool timing = false)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("emit_csv: cannot open '" + path + "' for writing");
    const std::string text = to_csv(rows, timing);
    f.write(text.data(), std::streamsize(text.size()));
    if (!f)
        throw std::runtime_error("emit_csv: write failed for '" + path + "'");
}

namespace detail {

inline void reject_unknown_keys(const nlohmann::json &obj, std::initializer_list<const char *> known,
                                const std::string &where)
{
    for (auto it = obj.begin(); it != obj.end(); ++it)
    {
        bool ok = false;
        for (const char *k : known)
            ok = ok || (it.key() == k);
        if (!ok)
            throw std::invalid_argument("spec: unknown key '" + it.key() + "' in " + where);
    }
}

inline std::vector<int> int_list(const nlohmann::json &v, const std::string &where)
{
    std::vector<int> out;
    if (v.is_array())
        for (const auto &e : v)
            out.push_back(e.get<int>());
    else
        out.push_back(v.get<int>());
    if (out.empty())
        throw std::invalid_argument("spec: empty list for " + where);
    return out;
}

} // namespace detail

/// Parse and validate a versioned JSON experiment spec.
inline ExperimentSpec parse_spec(const std::string &json_text)
{
    nlohmann::json j = nlohmann::json::parse(json_text);
    detail::reject_unknown_keys(j,
                                {"version", "scenario", "grid", "system", "gdm", "sdr", "methods", "modes",
                                 "realizations", "master_seed", "out"},
                                "top level");
    if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != 1)
        throw std::invalid_argument("spec: missing or unsupported version (expected 1)");
    ExperimentSpec spec;
    if (j.contains("scenario"))
        spec.scenario = j["scenario"].get<std::string>();
    if (j.contains("grid"))
    {
        const auto &g = j["grid"];
        detail::reject_unknown_keys(g, {"n_tx", "n_rx", "n_rf", "k_users", "n_xpr", "n_xpt"}, "grid");
        if (g.contains("n_tx"))
            spec.n_tx_grid = detail::int_list(g["n_tx"], "grid.n_tx");
        if (g.contains("n_rx"))
            spec.n_rx_grid = detail::int_list(g["n_rx"], "grid.n_rx");
        if (g.contains("n_rf"))
            spec.n_rf_grid = detail::int_list(g["n_rf"], "grid.n_rf");
        if (g.contains("k_users"))
            spec.k_grid = detail::int_list(g["k_users"], "grid.k_users");
        if (g.contains("n_xpr"))
            spec.n_xpr_grid = detail::int_list(g["n_xpr"], "grid.n_xpr");
        if (g.contains("n_xpt"))
            spec.n_xpt_grid = detail::int_list(g["n_xpt"], "grid.n_xpt");
    }
    if (j.contains("system"))
    {
        const auto &s = j["system"];
        detail::reject_unknown_keys(
            s, {"p_tx_max", "p_rx_max", "sigma2", "l_tx", "l_rx", "n_paths", "spacing"}, "system");
        if (s.contains("p_tx_max"))
            spec.p_tx_max = s["p_tx_max"].get<double>();
        if (s.contains("p_rx_max"))
            spec.p_rx_max = s["p_rx_max"].get<double>();
        if (s.contains("sigma2"))
            spec.sigma2 = s["sigma2"].get<double>();
        if (s.contains("l_tx"))
            spec.l_tx = s["l_tx"].get<int>();
        if (s.contains("l_rx"))
            spec.l_rx = s["l_rx"].get<int>();
        if (s.contains("n_paths"))
            spec.n_paths = s["n_paths"].get<int>();
        if (s.contains("spacing"))
            spec.spacing = s["spacing"].get<double>();
    }
    if (j.contains("gdm"))
    {
        const auto &g = j["gdm"];
        detail::reject_unknown_keys(g,
                                    {"rho_f", "rho_m", "rho_w", "alpha_f0", "alpha_m0", "alpha_w0", "decay",
                                     "xi", "n_xpr", "n_xpt"},
                                    "gdm");
        if (g.contains("rho_f"))
            spec.gdm.rho_f = g["rho_f"].get<double>();
        if (g.contains("rho_m"))
            spec.gdm.rho_m = g["rho_m"].get<double>();
        if (g.contains("rho_w"))
            spec.gdm.rho_w = g["rho_w"].get<double>();
        if (g.contains("alpha_f0"))
            spec.gdm.alpha_f0 = g["alpha_f0"].get<double>();
        if (g.contains("alpha_m0"))
            spec.gdm.alpha_m0 = g["alpha_m0"].get<double>();
        if (g.contains("alpha_w0"))
            spec.gdm.alpha_w0 = g["alpha_w0"].get<double>();
        if (g.contains("decay"))
            spec.gdm.decay = g["decay"].get<double>();
        if (g.contains("xi"))
            spec.gdm.xi = g["xi"].get<double>();
        if (g.contains("n_xpr"))
            spec.gdm.n_xpr = g["n_xpr"].get<int>();
        if (g.contains("n_xpt"))
            spec.gdm.n_xpt = g["n_xpt"].get<int>();
    }
    if (j.contains("sdr"))
    {
        const auto &s = j["sdr"];
        detail::reject_unknown_keys(s, {"n_rand", "n_iter_sdr"}, "sdr");
        if (s.contains("n_rand"))
            spec.sdr.n_rand = s["n_rand"].get<int>();
        if (s.contains("n_iter_sdr"))
            spec.sdr.n_iter_sdr = s["n_iter_sdr"].get<int>();
    }
    if (j.contains("methods"))
    {
        spec.methods.clear();
        for (const auto &m : j["methods"])
            spec.methods.push_back(m.get<std::string>());
    }
    if (j.contains("modes"))
    {
        spec.modes.clear();
        for (const auto &m : j["modes"])
            spec.modes.push_back(m.get<std::string>());
    }
    if (j.contains("realizations"))
        spec.realizations = j["realizations"].get<int>();
    if (j.contains("master_seed"))
        spec.master_seed = j["master_seed"].get<std::uint64_t>();
    if (j.contains("out"))
        spec.out_path = j["out"].get<std::string>();
    spec.validate();
    return spec;
}

inline ExperimentSpec load_spec(const std::string &path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("load_spec: cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    return parse_spec(text);
}

} // namespace mcbeam

#endif // MCBEAM_HARNESS_HPP
