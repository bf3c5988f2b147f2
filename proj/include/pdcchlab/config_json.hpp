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

#ifndef PDCCHLAB_CONFIG_JSON_HPP
#define PDCCHLAB_CONFIG_JSON_HPP

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"
#include "sim.hpp"

namespace pdcchlab
{

// JSON run description: one SimConfig, a CNR grid, an experiment label and
// (optionally) a campaign block that fans the base config out over a Doppler
// or echo-delay grid. Units at this boundary are the plot-facing ones
// (ns, µs, km/h); the in-memory structs hold SI seconds.

struct CampaignSpec
{
    enum class Kind
    {
        none,
        mobility,
        coverage
    };

    Kind kind = Kind::none;
    std::vector<double> doppler_grid_hz; // mobility, possibly derived from speeds
    std::vector<double> speed_grid_kmh;  // mobility, needs carrier_hz
    double carrier_hz = 0.0;
    std::vector<double> alpha_grid; // coverage
};

struct RunSpec
{
    SimConfig sim;
    std::vector<double> cnr_grid_db;
    std::string experiment = "link";
    CampaignSpec campaign;
};

namespace detail
{

using json = nlohmann::json;

[[noreturn]] inline void config_error(const std::string &path, const std::string &what)
{
    throw std::runtime_error("config: " + path + ": " + what);
}

inline void reject_unknown(const json &obj, const std::string &path,
                           const std::set<std::string> &allowed)
{
    for (const auto &item : obj.items())
        if (!allowed.count(item.key()))
            config_error(path + item.key(), "unknown key");
}

template <typename T>
inline T get_field(const json &obj, const std::string &path, const std::string &key, T fallback)
{
    if (!obj.contains(key))
        return fallback;
    try
    {
        return obj.at(key).get<T>();
    }
    catch (const json::exception &e)
    {
        config_error(path + key, e.what());
    }
}

inline std::string get_choice(const json &obj, const std::string &path, const std::string &key,
                              const std::set<std::string> &choices, const std::string &fallback)
{
    const std::string v = get_field<std::string>(obj, path, key, fallback);
    if (!choices.count(v))
    {
        std::string msg = "must be one of {";
        for (const auto &c : choices)
            msg += c + " ";
        msg.back() = '}';
        config_error(path + key, msg);
    }
    return v;
}

inline OfdmConfig parse_ofdm(const json &j, const std::string &path)
{
    reject_unknown(j, path, {"mu", "cp", "fft_size"});
    OfdmConfig cfg;
    cfg.mu = get_field<size_t>(j, path, "mu", cfg.mu);
    cfg.extended_cp = get_choice(j, path, "cp", {"normal", "extended"}, "normal") == "extended";
    cfg.fft_size = get_field<size_t>(j, path, "fft_size", cfg.fft_size);
    return cfg;
}

inline CoresetConfig parse_coreset(const json &j, const std::string &path)
{
    reject_unknown(j, path, {"n_rb", "n_sym", "aggregation_level"});
    CoresetConfig cfg;
    cfg.n_rb = get_field<size_t>(j, path, "n_rb", cfg.n_rb);
    cfg.n_sym = get_field<size_t>(j, path, "n_sym", cfg.n_sym);
    cfg.aggregation_level = get_field<size_t>(j, path, "aggregation_level", cfg.aggregation_level);
    return cfg;
}

inline double speed_to_doppler_hz(double speed_kmh, double carrier_hz)
{
    return speed_kmh / 3.6 * carrier_hz / kSpeedOfLight;
}

inline ChannelModelConfig parse_channel(const json &j, const std::string &path)
{
    reject_unknown(j, path,
                   {"kind", "echo_alpha", "echo_tcp_ref_us", "profile", "delay_spread_ns",
                    "doppler_hz", "speed_kmh", "carrier_hz"});
    ChannelModelConfig cfg;
    const std::string kind = get_choice(j, path, "kind", {"awgn", "echo", "tdl"}, "awgn");
    cfg.kind = kind == "awgn" ? ChannelKind::awgn
                              : (kind == "echo" ? ChannelKind::echo : ChannelKind::tdl);
    cfg.echo_alpha = get_field<double>(j, path, "echo_alpha", cfg.echo_alpha);
    cfg.echo_tcp_ref_s = get_field<double>(j, path, "echo_tcp_ref_us", 0.0) * 1e-6;
    cfg.profile = get_choice(j, path, "profile", {"tdl_a", "tdl_c"}, "tdl_a") == "tdl_a"
                      ? TdlProfile::tdl_a
                      : TdlProfile::tdl_c;
    cfg.delay_spread_s = get_field<double>(j, path, "delay_spread_ns", 100.0) * 1e-9;
    cfg.doppler_hz = get_field<double>(j, path, "doppler_hz", cfg.doppler_hz);
    const double speed = get_field<double>(j, path, "speed_kmh", 0.0);
    if (speed > 0.0)
    {
        if (j.contains("doppler_hz"))
            config_error(path + "speed_kmh", "give either doppler_hz or speed_kmh, not both");
        const double carrier = get_field<double>(j, path, "carrier_hz", 0.0);
        if (carrier <= 0.0)
            config_error(path + "speed_kmh", "needs carrier_hz");
        cfg.doppler_hz = speed_to_doppler_hz(speed, carrier);
    }
    return cfg;
}

inline CampaignSpec parse_campaign(const json &j, const std::string &path)
{
    reject_unknown(j, path,
                   {"kind", "doppler_grid_hz", "speed_grid_kmh", "carrier_hz", "alpha_grid"});
    CampaignSpec cfg;
    const std::string kind = get_choice(j, path, "kind", {"mobility", "coverage"}, "mobility");
    cfg.kind = kind == "mobility" ? CampaignSpec::Kind::mobility : CampaignSpec::Kind::coverage;
    cfg.doppler_grid_hz =
        get_field<std::vector<double>>(j, path, "doppler_grid_hz", {});
    cfg.speed_grid_kmh = get_field<std::vector<double>>(j, path, "speed_grid_kmh", {});
    cfg.carrier_hz = get_field<double>(j, path, "carrier_hz", 0.0);
    cfg.alpha_grid = get_field<std::vector<double>>(j, path, "alpha_grid", {});
    if (cfg.kind == CampaignSpec::Kind::mobility)
    {
        if (!cfg.speed_grid_kmh.empty())
        {
            if (!cfg.doppler_grid_hz.empty())
                config_error(path, "give either doppler_grid_hz or speed_grid_kmh, not both");
            if (cfg.carrier_hz <= 0.0)
                config_error(path + "speed_grid_kmh", "needs carrier_hz");
            for (double v : cfg.speed_grid_kmh)
                cfg.doppler_grid_hz.push_back(speed_to_doppler_hz(v, cfg.carrier_hz));
        }
        if (cfg.doppler_grid_hz.empty())
            config_error(path, "mobility campaign needs a Doppler or speed grid");
    }
    else if (cfg.alpha_grid.empty())
        config_error(path, "coverage campaign needs alpha_grid");
    return cfg;
}

} // namespace detail

inline RunSpec parse_run_spec(const std::string &text)
{
    using detail::get_choice;
    using detail::get_field;
    using json = nlohmann::json;

    json j;
    try
    {
        j = json::parse(text);
    }
    catch (const json::exception &e)
    {
        throw std::runtime_error(std::string("config: ") + e.what());
    }
    if (!j.is_object())
        throw std::runtime_error("config: top level must be an object");

    detail::reject_unknown(j, "",
                           {"ofdm", "coreset", "payload_bits", "list_size", "channel",
                            "estimator", "window_taps", "sigma2", "cnr_grid_db", "stop",
                            "master_seed", "trial_spacing_us", "target_bler", "experiment",
                            "campaign"});

    RunSpec spec;
    if (j.contains("ofdm"))
        spec.sim.ofdm = detail::parse_ofdm(j.at("ofdm"), "ofdm.");
    if (j.contains("coreset"))
        spec.sim.coreset = detail::parse_coreset(j.at("coreset"), "coreset.");
    spec.sim.payload_bits = get_field<size_t>(j, "", "payload_bits", spec.sim.payload_bits);
    spec.sim.list_size = get_field<size_t>(j, "", "list_size", spec.sim.list_size);
    if (j.contains("channel"))
        spec.sim.channel = detail::parse_channel(j.at("channel"), "channel.");

    const std::string est =
        get_choice(j, "", "estimator", {"perfect", "ls_linear", "ls_dft"}, "perfect");
    spec.sim.estimator = est == "perfect"
                             ? EstimatorKind::perfect
                             : (est == "ls_linear" ? EstimatorKind::ls_linear
                                                   : EstimatorKind::ls_dft);
    spec.sim.window_taps = get_field<size_t>(j, "", "window_taps", spec.sim.window_taps);
    spec.sim.sigma2_mode =
        get_choice(j, "", "sigma2", {"genie", "estimated"}, "genie") == "genie"
            ? Sigma2Mode::genie
            : Sigma2Mode::estimated;

    spec.cnr_grid_db = get_field<std::vector<double>>(j, "", "cnr_grid_db", {});
    if (j.contains("stop"))
    {
        const auto &s = j.at("stop");
        detail::reject_unknown(s, "stop.", {"min_block_errors", "max_blocks"});
        spec.sim.stop.min_block_errors =
            get_field<size_t>(s, "stop.", "min_block_errors", spec.sim.stop.min_block_errors);
        spec.sim.stop.max_blocks =
            get_field<size_t>(s, "stop.", "max_blocks", spec.sim.stop.max_blocks);
    }
    spec.sim.master_seed = get_field<uint64_t>(j, "", "master_seed", spec.sim.master_seed);
    spec.sim.trial_spacing_s = get_field<double>(j, "", "trial_spacing_us", 0.0) * 1e-6;
    spec.sim.target_bler = get_field<double>(j, "", "target_bler", spec.sim.target_bler);
    spec.experiment = get_field<std::string>(j, "", "experiment", spec.experiment);
    if (j.contains("campaign"))
        spec.campaign = detail::parse_campaign(j.at("campaign"), "campaign.");

    spec.sim.validate();
    return spec;
}

inline RunSpec load_run_spec(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("config: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_run_spec(buf.str());
}

// Canonical JSON echo of a parsed spec, written into result sidecars so a
// result file pins down the exact run that produced it.
inline nlohmann::json run_spec_to_json(const RunSpec &spec)
{
    nlohmann::json j;
    j["ofdm"] = {{"mu", spec.sim.ofdm.mu},
                 {"cp", spec.sim.ofdm.extended_cp ? "extended" : "normal"},
                 {"fft_size", spec.sim.ofdm.fft_size}};
    j["coreset"] = {{"n_rb", spec.sim.coreset.n_rb},
                    {"n_sym", spec.sim.coreset.n_sym},
                    {"aggregation_level", spec.sim.coreset.aggregation_level}};
    j["payload_bits"] = spec.sim.payload_bits;
    j["list_size"] = spec.sim.list_size;
    switch (spec.sim.channel.kind)
    {
    case ChannelKind::awgn:
        j["channel"] = {{"kind", "awgn"}};
        break;
    case ChannelKind::echo:
        j["channel"] = {{"kind", "echo"},
                        {"echo_alpha", spec.sim.channel.echo_alpha},
                        {"echo_tcp_ref_us", spec.sim.channel.echo_tcp_ref_s * 1e6}};
        break;
    case ChannelKind::tdl:
        j["channel"] = {{"kind", "tdl"},
                        {"profile",
                         spec.sim.channel.profile == TdlProfile::tdl_a ? "tdl_a" : "tdl_c"},
                        {"delay_spread_ns", spec.sim.channel.delay_spread_s * 1e9},
                        {"doppler_hz", spec.sim.channel.doppler_hz}};
        break;
    }
    j["estimator"] = spec.sim.estimator == EstimatorKind::perfect
                         ? "perfect"
                         : (spec.sim.estimator == EstimatorKind::ls_linear ? "ls_linear"
                                                                           : "ls_dft");
    j["window_taps"] = spec.sim.window_taps;
    j["sigma2"] = spec.sim.sigma2_mode == Sigma2Mode::genie ? "genie" : "estimated";
    j["cnr_grid_db"] = spec.cnr_grid_db;
    j["stop"] = {{"min_block_errors", spec.sim.stop.min_block_errors},
                 {"max_blocks", spec.sim.stop.max_blocks}};
    j["master_seed"] = spec.sim.master_seed;
    j["trial_spacing_us"] = spec.sim.trial_spacing_s * 1e6;
    j["target_bler"] = spec.sim.target_bler;
    j["experiment"] = spec.experiment;
    if (spec.campaign.kind != CampaignSpec::Kind::none)
    {
        nlohmann::json c;
        c["kind"] = spec.campaign.kind == CampaignSpec::Kind::mobility ? "mobility" : "coverage";
        if (!spec.campaign.doppler_grid_hz.empty())
            c["doppler_grid_hz"] = spec.campaign.doppler_grid_hz;
        if (!spec.campaign.speed_grid_kmh.empty())
            c["speed_grid_kmh"] = spec.campaign.speed_grid_kmh;
        if (spec.campaign.carrier_hz > 0.0)
            c["carrier_hz"] = spec.campaign.carrier_hz;
        if (!spec.campaign.alpha_grid.empty())
            c["alpha_grid"] = spec.campaign.alpha_grid;
        j["campaign"] = c;
    }
    return j;
}

} // namespace pdcchlab

#endif
