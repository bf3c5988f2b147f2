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

#ifndef PDCCHLAB_CAMPAIGN_HPP
#define PDCCHLAB_CAMPAIGN_HPP

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "config_json.hpp"
#include "sim.hpp"

#ifndef PDCCHLAB_GIT_DESCRIBE
#define PDCCHLAB_GIT_DESCRIBE "unknown"
#endif

namespace pdcchlab
{

inline const char *kCsvHeader =
    "experiment,cnr_db,blocks,block_errors,bit_errors,bler,ber,wilson_halfwidth,seed,wall_ms";

// One CSV row per point. Everything except wall_ms is a deterministic
// function of (config, master_seed); fixed printf formats keep reruns
// byte-identical up to that column.
inline std::string csv_row(const std::string &experiment, const BlerPoint &p)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s,%.6g,%zu,%zu,%zu,%.9e,%.9e,%.9e,%llu,%.3f",
                  experiment.c_str(), p.cnr_db, p.blocks, p.block_errors, p.bit_errors, p.bler,
                  p.ber, p.wilson_halfwidth, static_cast<unsigned long long>(p.seed), p.wall_ms);
    return buf;
}

struct ExperimentResult
{
    std::string name;
    std::vector<BlerPoint> points;
    RequiredCnr required;
    double wall_ms = 0.0;
};

inline std::string render_csv(const std::vector<ExperimentResult> &results)
{
    std::string out = std::string(kCsvHeader) + "\n";
    for (const auto &r : results)
        for (const auto &p : r.points)
            out += csv_row(r.name, p) + "\n";
    return out;
}

inline nlohmann::json render_sidecar(const RunSpec &spec,
                                     const std::vector<ExperimentResult> &results)
{
    nlohmann::json j;
    j["tool"] = "pdcchlab";
    j["git_describe"] = PDCCHLAB_GIT_DESCRIBE;
    j["config"] = run_spec_to_json(spec);
    j["master_seed"] = spec.sim.master_seed;
    nlohmann::json exps = nlohmann::json::array();
    for (const auto &r : results)
    {
        nlohmann::json e;
        e["name"] = r.name;
        e["points"] = r.points.size();
        e["wall_ms"] = r.wall_ms;
        switch (r.required.status)
        {
        case RequiredCnrStatus::ok:
            e["required_cnr_db"] = r.required.cnr_db;
            break;
        case RequiredCnrStatus::unreliable:
            e["required_cnr_db"] = "unreliable";
            break;
        case RequiredCnrStatus::always_reliable:
            e["required_cnr_db"] = "below_grid";
            break;
        }
        exps.push_back(e);
    }
    j["experiments"] = exps;
    return j;
}

inline void write_text_file(const std::string &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
    if (!out)
        throw std::runtime_error("write failed: " + path);
}

inline ExperimentResult run_experiment(const SimConfig &cfg,
                                       const std::vector<double> &cnr_grid_db,
                                       const std::string &name, size_t workers)
{
    ExperimentResult r;
    r.name = name;
    r.points = run_sweep(cfg, cnr_grid_db, workers);
    r.required = required_cnr(r.points, cfg.target_bler);
    for (const auto &p : r.points)
        r.wall_ms += p.wall_ms;
    return r;
}

inline std::string grid_label(const char *prefix, double value)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%g", prefix, value);
    return buf;
}

// Fans the base config out over the campaign grid: one sweep per Doppler
// (mobility) or per echo-delay factor (coverage), all sharing the base
// master seed so curves are comparable under common randomness.
inline std::vector<ExperimentResult> run_campaign(const RunSpec &spec, size_t workers)
{
    require(spec.campaign.kind != CampaignSpec::Kind::none, "run_campaign: no campaign block");
    require(!spec.cnr_grid_db.empty(), "run_campaign: empty CNR grid");

    std::vector<ExperimentResult> results;
    if (spec.campaign.kind == CampaignSpec::Kind::mobility)
    {
        for (size_t i = 0; i < spec.campaign.doppler_grid_hz.size(); ++i)
        {
            SimConfig cfg = spec.sim;
            cfg.channel.kind = ChannelKind::tdl;
            cfg.channel.doppler_hz = spec.campaign.doppler_grid_hz[i];
            const std::string name =
                spec.experiment + "_" +
                (i < spec.campaign.speed_grid_kmh.size()
                     ? grid_label("kmh", spec.campaign.speed_grid_kmh[i])
                     : grid_label("fd", cfg.channel.doppler_hz));
            results.push_back(run_experiment(cfg, spec.cnr_grid_db, name, workers));
        }
    }
    else
    {
        for (double alpha : spec.campaign.alpha_grid)
        {
            SimConfig cfg = spec.sim;
            cfg.channel.kind = ChannelKind::echo;
            cfg.channel.echo_alpha = alpha;
            results.push_back(run_experiment(cfg, spec.cnr_grid_db,
                                             spec.experiment + "_" + grid_label("a", alpha),
                                             workers));
        }
    }
    return results;
}

inline void write_campaign_files(const RunSpec &spec,
                                 const std::vector<ExperimentResult> &results,
                                 const std::string &out_base)
{
    write_text_file(out_base + ".csv", render_csv(results));
    write_text_file(out_base + ".json", render_sidecar(spec, results).dump(2) + "\n");
}

} // namespace pdcchlab

#endif
