// SPDX-License-Identifier: Apache-2.0
//
// pdcchlab - link-level simulation toolkit for the 5G NR downlink control channel
// Copyright (C) 2026 pdcchlab developers
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

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <pdcchlab/pdcchlab.hpp>

namespace
{

using namespace pdcchlab;

size_t default_workers()
{
    if (const char *env = std::getenv("PDCCHLAB_WORKERS"))
    {
        const long v = std::atol(env);
        if (v >= 1)
            return static_cast<size_t>(v);
    }
    return 1;
}

struct GlobalOpts
{
    size_t workers = default_workers();
    std::optional<uint64_t> seed;
};

RunSpec load_spec(const std::string &path, const GlobalOpts &g)
{
    RunSpec spec = load_run_spec(path);
    if (g.seed)
        spec.sim.master_seed = *g.seed;
    return spec;
}

void print_required(const RequiredCnr &req, double target)
{
    switch (req.status)
    {
    case RequiredCnrStatus::ok:
        std::printf("required_cnr_db = %.3f (target bler %g)\n", req.cnr_db, target);
        break;
    case RequiredCnrStatus::unreliable:
        std::printf("unreliable link: bler stays above %g on the sweep grid\n", target);
        break;
    case RequiredCnrStatus::always_reliable:
        std::printf("bler already below %g at the lowest grid point (%.3f dB)\n", target,
                    req.cnr_db);
        break;
    }
}

int cmd_analyze(size_t mu, bool extended, double tcp_us, double carrier_hz, double dmax_hz)
{
    OfdmConfig ofdm;
    ofdm.mu = mu;
    ofdm.extended_cp = extended;
    const double t_u = ofdm.t_u_s();
    const double t_cp = tcp_us > 0.0 ? tcp_us * 1e-6 : ofdm.t_cp_s();

    std::printf("t_u_us = %.6f\n", t_u * 1e6);
    std::printf("t_cp_us = %.6f\n", t_cp * 1e6);
    if (dmax_hz > 0.0)
    {
        const TimePilotSpacing sp = max_time_pilot_spacing(t_u, t_cp, dmax_hz);
        std::printf("max_time_pilot_spacing = %lld (exact %.4f)\n", sp.floor_value,
                    sp.real_value);
    }
    const double fd = max_doppler_hz(1, t_u, t_cp);
    std::printf("max_doppler_hz = %.4f\n", fd);
    if (carrier_hz > 0.0)
        std::printf("max_speed_kmh = %.4f (carrier %.4g Hz)\n",
                    doppler_to_speed_kmh(fd, carrier_hz), carrier_hz);
    std::printf("max_delay_spread_us = %.6f\n", max_delay_spread_s(t_u, kPilotSpacing) * 1e6);
    std::printf("cp_cnr_loss_db = %.6f\n", cp_cnr_loss_db(t_cp, t_u));
    return 0;
}

int cmd_bler(const std::string &config, double cnr_db, const GlobalOpts &g)
{
    const RunSpec spec = load_spec(config, g);
    const BlerPoint pt = run_bler_point(spec.sim, cnr_db, 0, g.workers);
    std::printf("%s\n%s\n", kCsvHeader, csv_row(spec.experiment, pt).c_str());
    return 0;
}

int cmd_sweep(const std::string &config, const std::string &out, const GlobalOpts &g)
{
    const RunSpec spec = load_spec(config, g);
    ExperimentResult r = run_experiment(spec.sim, spec.cnr_grid_db, spec.experiment, g.workers);
    write_text_file(out, render_csv({r}));
    std::printf("%zu points -> %s\n", r.points.size(), out.c_str());
    print_required(r.required, spec.sim.target_bler);
    return 0;
}

int cmd_required_cnr(const std::string &config, double target, const GlobalOpts &g)
{
    RunSpec spec = load_spec(config, g);
    if (target > 0.0)
        spec.sim.target_bler = target;
    const ExperimentResult r =
        run_experiment(spec.sim, spec.cnr_grid_db, spec.experiment, g.workers);
    print_required(r.required, spec.sim.target_bler);
    return r.required.status == RequiredCnrStatus::unreliable ? 2 : 0;
}

int cmd_campaign(const std::string &config, const std::string &out_base, const GlobalOpts &g)
{
    const RunSpec spec = load_spec(config, g);
    const std::vector<ExperimentResult> results = run_campaign(spec, g.workers);
    write_campaign_files(spec, results, out_base);
    std::printf("%zu experiments -> %s.csv, %s.json\n", results.size(), out_base.c_str(),
                out_base.c_str());
    for (const auto &r : results)
    {
        std::printf("%s: ", r.name.c_str());
        print_required(r.required, spec.sim.target_bler);
    }
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"pdcchlab - 5G NR downlink control channel link simulator"};
    app.require_subcommand(1);
    // Let the global options (--workers, --seed) appear after the subcommand
    // too; without fallthrough CLI11 rejects "sweep --config c.json --workers 3".
    app.fallthrough();

    GlobalOpts g;
    app.add_option("--workers", g.workers, "worker threads (env PDCCHLAB_WORKERS)")
        ->check(CLI::PositiveNumber);
    uint64_t seed_opt = 0;
    auto *seed_flag = app.add_option("--seed", seed_opt, "override the config master seed");

    auto *analyze = app.add_subcommand("analyze", "closed-form DMRS lattice limits");
    size_t mu = 0;
    std::string cp = "normal";
    double tcp_us = 0.0, carrier_hz = 0.0, dmax_hz = 0.0;
    analyze->add_option("--mu", mu, "numerology index");
    analyze->add_option("--cp", cp, "cyclic prefix")->check(CLI::IsMember({"normal", "extended"}));
    analyze->add_option("--tcp-us", tcp_us, "cyclic prefix duration override, microseconds");
    analyze->add_option("--carrier-hz", carrier_hz, "carrier frequency for the speed limit");
    analyze->add_option("--dmax-hz", dmax_hz, "target Doppler for the pilot spacing limit");

    std::string config, out = "sweep.csv", out_base = "campaign";
    double cnr_db = 0.0, target = 0.0;

    auto *bler = app.add_subcommand("bler", "single BLER point");
    bler->add_option("--config", config, "JSON run description")->required();
    bler->add_option("--cnr", cnr_db, "operating point, dB")->required();

    auto *sweep = app.add_subcommand("sweep", "BLER curve over the config CNR grid");
    sweep->add_option("--config", config, "JSON run description")->required();
    sweep->add_option("--out", out, "output CSV path");

    auto *required = app.add_subcommand("required-cnr", "CNR needed for the target BLER");
    required->add_option("--config", config, "JSON run description")->required();
    required->add_option("--target", target, "target BLER (default: config target_bler)");

    auto *campaign = app.add_subcommand("campaign", "named experiment grid, CSV + JSON output");
    campaign->add_option("--config", config, "JSON run description with a campaign block")
        ->required();
    campaign->add_option("--out", out_base, "output base path (.csv / .json appended)");

    CLI11_PARSE(app, argc, argv);
    if (seed_flag->count())
        g.seed = seed_opt;

    try
    {
        if (analyze->parsed())
            return cmd_analyze(mu, cp == "extended", tcp_us, carrier_hz, dmax_hz);
        if (bler->parsed())
            return cmd_bler(config, cnr_db, g);
        if (sweep->parsed())
            return cmd_sweep(config, out, g);
        if (required->parsed())
            return cmd_required_cnr(config, target, g);
        if (campaign->parsed())
            return cmd_campaign(config, out_base, g);
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
