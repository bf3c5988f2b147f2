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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

#include <pdcchlab/campaign.hpp>
#include <pdcchlab/config_json.hpp>
#include <pdcchlab/sim.hpp>

using namespace pdcchlab;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

// Valid random operating points for the end-to-end chain. Real estimation is
// restricted to flat channels, where interpolation is exact; dispersive and
// fading channels pair with the genie estimate so a noiseless trial has no
// error mechanism left.
SimConfig random_config(Rng &rng)
{
    SimConfig cfg;
    cfg.ofdm.mu = rng.next_u64() % 2;
    cfg.ofdm.extended_cp = rng.uniform() < 0.25;
    cfg.ofdm.fft_size = rng.uniform() < 0.5 ? 512 : 1024;

    const size_t al_pick[4] = {1, 2, 4, 8};
    const size_t L = al_pick[rng.next_u64() % 4];
    const size_t regs = kRegsPerCce * L;
    size_t n_sym = 1 + rng.next_u64() % 3;
    while ((regs + n_sym - 1) / n_sym > 24)
        ++n_sym;
    const size_t min_rb = (regs + n_sym - 1) / n_sym;
    cfg.coreset.aggregation_level = L;
    cfg.coreset.n_sym = n_sym;
    cfg.coreset.n_rb = min_rb + rng.next_u64() % (24 - min_rb + 1);

    const size_t a_max = std::min<size_t>(140, cfg.coreset.coded_bits() - kCrcBits - 1);
    cfg.payload_bits = 1 + rng.next_u64() % a_max;
    const size_t list_pick[4] = {1, 2, 4, 8};
    cfg.list_size = list_pick[rng.next_u64() % 4];
    cfg.sigma2_mode = rng.uniform() < 0.5 ? Sigma2Mode::genie : Sigma2Mode::estimated;

    const double kind = rng.uniform();
    if (kind < 0.4)
    {
        cfg.channel.kind = ChannelKind::awgn;
        const double est = rng.uniform();
        cfg.estimator = est < 0.34   ? EstimatorKind::perfect
                        : est < 0.67 ? EstimatorKind::ls_linear
                                     : EstimatorKind::ls_dft;
    }
    else if (kind < 0.7)
    {
        cfg.channel.kind = ChannelKind::echo;
        cfg.estimator = EstimatorKind::perfect;
        // Redraw delays whose echo puts an exact spectral null on an occupied
        // subcarrier: a perfect null erases that subcarrier outright, and a
        // near-unit-rate code has no redundancy to absorb the erasure.
        const size_t n = cfg.ofdm.fft_size;
        const size_t n_occ = cfg.coreset.n_occupied();
        for (int tries = 0; tries < 100; ++tries)
        {
            cfg.channel.echo_alpha = rng.uniform();
            EchoChannel probe;
            probe.alpha = cfg.channel.echo_alpha;
            probe.tcp_ref_s = cfg.ofdm.t_cp_s();
            const size_t d = probe.delay_samples(cfg.ofdm.sample_rate_hz());
            bool null_hit = false;
            for (size_t q = 0; q < n_occ && !null_hit; ++q)
                null_hit = (q + n - n_occ / 2) % n * d % n == n / 2;
            if (!null_hit)
                break;
        }
    }
    else
    {
        cfg.channel.kind = ChannelKind::tdl;
        cfg.channel.profile = rng.uniform() < 0.5 ? TdlProfile::tdl_a : TdlProfile::tdl_c;
        // Keep the whole profile inside the cyclic prefix: taps past the
        // prefix are real intersymbol interference that no estimator models,
        // which would give a noiseless trial an error mechanism after all.
        const auto &prof =
            cfg.channel.profile == TdlProfile::tdl_a ? tdl_a_profile() : tdl_c_profile();
        double max_norm = 0.0;
        for (const TdlTapSpec &tap : prof)
            max_norm = std::max(max_norm, tap.delay_norm);
        const double ds_cap = std::min(1000e-9, 0.9 * cfg.ofdm.t_cp_s() / max_norm);
        cfg.channel.delay_spread_s = 30e-9 + rng.uniform() * (ds_cap - 30e-9);
        cfg.channel.doppler_hz = rng.uniform() < 0.5 ? 0.0 : rng.uniform() * 200.0;
        cfg.estimator = EstimatorKind::perfect;
    }
    cfg.master_seed = rng.next_u64();
    return cfg;
}

BlerPoint make_point(double cnr_db, double bler, size_t blocks = 1000000)
{
    BlerPoint p;
    p.cnr_db = cnr_db;
    p.blocks = blocks;
    p.bler = bler;
    p.block_errors = static_cast<size_t>(bler * static_cast<double>(blocks));
    return p;
}

std::vector<std::string> split_csv(const std::string &line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ','))
        out.push_back(field);
    return out;
}

} // namespace

TEST_CASE("wilson interval matches textbook values")
{
    CHECK_THAT(wilson_halfwidth(5, 100), WithinAbs(0.0451, 2e-4));
    CHECK_THAT(wilson_halfwidth(0, 100), WithinAbs(0.0185, 2e-4));
    CHECK_THAT(wilson_halfwidth(50, 100), WithinAbs(0.0962, 2e-4));
    CHECK(wilson_halfwidth(0, 1000000) < 1e-5);
    CHECK_THROWS_AS(wilson_halfwidth(0, 0), std::invalid_argument);
}

TEST_CASE("trial spacing follows the block length and the fading rate")
{
    SimConfig cfg; // AL2, one symbol, mu 0
    CHECK(trial_spacing_samples(cfg) == cfg.ofdm.symbol_samples());

    cfg.coreset.n_sym = 2;
    cfg.coreset.n_rb = 12;
    CHECK(trial_spacing_samples(cfg) == 2 * cfg.ofdm.symbol_samples());

    cfg.coreset.n_sym = 1;
    cfg.channel.kind = ChannelKind::tdl;
    cfg.channel.doppler_hz = 2000.0;
    CHECK(trial_spacing_samples(cfg) ==
          static_cast<uint64_t>(std::ceil(0.383 / 2000.0 * cfg.ofdm.sample_rate_hz())));

    cfg.channel.doppler_hz = 1e6; // decorrelation shorter than a block
    CHECK(trial_spacing_samples(cfg) == cfg.ofdm.symbol_samples());

    cfg.trial_spacing_s = 1e-3;
    CHECK(trial_spacing_samples(cfg) ==
          static_cast<uint64_t>(std::llround(1e-3 * cfg.ofdm.sample_rate_hz())));
}

TEST_CASE("required cnr interpolates log-linearly between bracketing points")
{
    const std::vector<BlerPoint> curve = {make_point(0.0, 1e-2), make_point(2.0, 1e-4)};
    const RequiredCnr r = required_cnr(curve, 1e-3);
    REQUIRE(r.ok());
    CHECK_THAT(r.cnr_db, WithinAbs(1.0, 1e-12));
}

TEST_CASE("required cnr uses the last crossing of a noisy curve")
{
    const std::vector<BlerPoint> curve = {make_point(0.0, 1e-2), make_point(1.0, 2e-4),
                                          make_point(2.0, 3e-3), make_point(3.0, 1e-5)};
    const RequiredCnr r = required_cnr(curve, 1e-3);
    REQUIRE(r.ok());
    CHECK_THAT(r.cnr_db, WithinAbs(2.192612, 1e-4));
}

TEST_CASE("required cnr treats zero-error points at half a block error")
{
    const std::vector<BlerPoint> curve = {make_point(0.0, 1e-2, 1000), make_point(2.0, 0.0, 1000)};
    const RequiredCnr r = required_cnr(curve, 1e-3);
    REQUIRE(r.ok());
    // interpolation endpoint sits at 0.5/1000
    const double expect = (std::log10(1e-3) - std::log10(1e-2)) /
                          (std::log10(5e-4) - std::log10(1e-2)) * 2.0;
    CHECK_THAT(r.cnr_db, WithinAbs(expect, 1e-9));
}

TEST_CASE("required cnr reports curves that never reach the target")
{
    const std::vector<BlerPoint> high = {make_point(0.0, 1e-1), make_point(2.0, 1e-2)};
    CHECK(required_cnr(high, 1e-3).status == RequiredCnrStatus::unreliable);
    CHECK_FALSE(required_cnr(high, 1e-3).ok());

    const std::vector<BlerPoint> low = {make_point(0.0, 1e-4), make_point(2.0, 1e-5)};
    const RequiredCnr r = required_cnr(low, 1e-3);
    CHECK(r.status == RequiredCnrStatus::always_reliable);
    CHECK(r.cnr_db == 0.0);
}

TEST_CASE("noiseless chain returns the payload across random configurations")
{
    Rng rng(0x70726F70ull);
    for (int rep = 0; rep < 1000; ++rep)
    {
        const SimConfig cfg = random_config(rng);
        INFO("rep " << rep << " AL " << cfg.coreset.aggregation_level << " payload "
                    << cfg.payload_bits);
        LinkRunner runner(cfg);
        const TrialResult r = runner.run_trial(300.0, 0, static_cast<uint64_t>(rep));
        REQUIRE(r.crc_ok);
        REQUIRE(r.bit_errors == 0);
        REQUIRE_FALSE(r.block_error);
    }
}

TEST_CASE("noise disabled gives zero block errors over a thousand blocks")
{
    SimConfig cfg;
    cfg.channel.kind = ChannelKind::echo;
    cfg.channel.echo_alpha = 0.3;
    cfg.stop.min_block_errors = 1;
    cfg.stop.max_blocks = 1000;
    const BlerPoint pt = run_bler_point(cfg, 300.0, 0);
    CHECK(pt.blocks == 1000);
    CHECK(pt.block_errors == 0);
    CHECK(pt.bit_errors == 0);
    CHECK(pt.bler == 0.0);
    CHECK(pt.wall_ms > 0.0);
}

TEST_CASE("identical configuration and seed reproduce the point bit for bit")
{
    SimConfig cfg;
    cfg.coreset.aggregation_level = 1;
    cfg.coreset.n_rb = 6;
    cfg.stop.max_blocks = 2048;
    cfg.master_seed = 77;
    const BlerPoint a = run_bler_point(cfg, -4.0, 0);
    const BlerPoint b = run_bler_point(cfg, -4.0, 0);
    CHECK(a.blocks == b.blocks);
    CHECK(a.block_errors == b.block_errors);
    CHECK(a.bit_errors == b.bit_errors);
    CHECK(a.bler == b.bler);
    CHECK(a.ber == b.ber);
    CHECK(a.wilson_halfwidth == b.wilson_halfwidth);
    CHECK(a.seed == b.seed);
    CHECK(a.block_errors > 0); // the comparison is vacuous on an all-zero point
}

TEST_CASE("worker count does not change the outcome")
{
    SimConfig cfg;
    cfg.coreset.aggregation_level = 1;
    cfg.coreset.n_rb = 6;
    cfg.channel.kind = ChannelKind::tdl;
    cfg.channel.delay_spread_s = 300e-9;
    cfg.channel.doppler_hz = 500.0;
    cfg.estimator = EstimatorKind::ls_linear;
    cfg.stop.max_blocks = 2048;
    cfg.master_seed = 9;
    const BlerPoint serial = run_bler_point(cfg, 2.0, 0, 1);
    const BlerPoint parallel = run_bler_point(cfg, 2.0, 0, 3);
    CHECK(serial.blocks == parallel.blocks);
    CHECK(serial.block_errors == parallel.block_errors);
    CHECK(serial.bit_errors == parallel.bit_errors);
    CHECK(serial.block_errors > 0);
}

TEST_CASE("sweep walks the grid in order and exits once far below target")
{
    SimConfig cfg;
    cfg.coreset.aggregation_level = 4;
    cfg.coreset.n_rb = 24;
    cfg.stop.min_block_errors = 30;
    cfg.stop.max_blocks = 4096;
    cfg.target_bler = 1e-2;
    const std::vector<double> grid = {-9.0, -5.0, -3.0, -1.0};
    const std::vector<BlerPoint> pts = run_sweep(cfg, grid, 1);
    REQUIRE(pts.size() >= 2);
    CHECK(pts.size() < grid.size());
    for (size_t i = 0; i < pts.size(); ++i)
        CHECK(pts[i].cnr_db == grid[i]);
    CHECK(pts.back().bler < cfg.target_bler / 10.0);
    CHECK_THROWS_AS(run_sweep(cfg, {}, 1), std::invalid_argument);
    CHECK_THROWS_AS(run_sweep(cfg, {0.0, -1.0}, 1), std::invalid_argument);
}

TEST_CASE("error indicators of neighbouring trials are uncorrelated")
{
    SimConfig cfg;
    cfg.coreset.aggregation_level = 1;
    cfg.coreset.n_rb = 6;
    LinkRunner runner(cfg);
    const size_t n = 4000;
    std::vector<double> e(n);
    double mean = 0.0;
    for (size_t i = 0; i < n; ++i)
    {
        e[i] = runner.run_trial(1.5, 0, i).block_error ? 1.0 : 0.0;
        mean += e[i];
    }
    mean /= static_cast<double>(n);
    REQUIRE(mean > 0.05);
    REQUIRE(mean < 0.95);
    double num = 0.0;
    for (size_t i = 0; i + 1 < n; ++i)
        num += (e[i] - mean) * (e[i + 1] - mean);
    const double r = num / (static_cast<double>(n - 1) * mean * (1.0 - mean));
    CHECK(std::abs(r) * std::sqrt(static_cast<double>(n)) < 3.0);
}

TEST_CASE("config defaults, full documents and unit conversions")
{
    const RunSpec d = parse_run_spec("{}");
    CHECK(d.sim.coreset.aggregation_level == 2);
    CHECK(d.sim.payload_bits == 40);
    CHECK(d.sim.list_size == 8);
    CHECK(d.sim.channel.kind == ChannelKind::awgn);
    CHECK(d.sim.estimator == EstimatorKind::perfect);
    CHECK(d.sim.sigma2_mode == Sigma2Mode::genie);
    CHECK(d.sim.master_seed == 1);
    CHECK(d.experiment == "link");
    CHECK(d.campaign.kind == CampaignSpec::Kind::none);

    const RunSpec s = parse_run_spec(R"({
        "ofdm": {"mu": 1, "cp": "extended", "fft_size": 2048},
        "coreset": {"n_rb": 24, "n_sym": 2, "aggregation_level": 8},
        "payload_bits": 57,
        "list_size": 4,
        "channel": {"kind": "tdl", "profile": "tdl_c", "delay_spread_ns": 300,
                    "speed_kmh": 120, "carrier_hz": 700e6},
        "estimator": "ls_dft",
        "window_taps": 7,
        "sigma2": "estimated",
        "cnr_grid_db": [-4, -2, 0],
        "stop": {"min_block_errors": 50, "max_blocks": 20000},
        "master_seed": 123,
        "trial_spacing_us": 250.5,
        "target_bler": 1e-2,
        "experiment": "mobility"
    })");
    CHECK(s.sim.ofdm.mu == 1);
    CHECK(s.sim.ofdm.extended_cp);
    CHECK(s.sim.coreset.n_rb == 24);
    CHECK(s.sim.payload_bits == 57);
    CHECK(s.sim.channel.kind == ChannelKind::tdl);
    CHECK(s.sim.channel.profile == TdlProfile::tdl_c);
    CHECK_THAT(s.sim.channel.delay_spread_s, WithinRel(300e-9, 1e-12));
    CHECK_THAT(s.sim.channel.doppler_hz,
               WithinRel(120.0 / 3.6 * 700e6 / kSpeedOfLight, 1e-12));
    CHECK(s.sim.estimator == EstimatorKind::ls_dft);
    CHECK(s.sim.window_taps == 7);
    CHECK(s.sim.sigma2_mode == Sigma2Mode::estimated);
    CHECK(s.cnr_grid_db == std::vector<double>{-4.0, -2.0, 0.0});
    CHECK(s.sim.stop.min_block_errors == 50);
    CHECK_THAT(s.sim.trial_spacing_s, WithinRel(250.5e-6, 1e-12));
    CHECK(s.experiment == "mobility");

    // canonical echo reparses to the same document; the unit-scaled fields
    // round-trip through doubles and are compared numerically
    const RunSpec back = parse_run_spec(run_spec_to_json(s).dump());
    nlohmann::json ja = run_spec_to_json(back);
    nlohmann::json jb = run_spec_to_json(s);
    CHECK_THAT(double(ja["channel"]["delay_spread_ns"]),
               WithinRel(double(jb["channel"]["delay_spread_ns"]), 1e-12));
    CHECK_THAT(double(ja["trial_spacing_us"]), WithinRel(double(jb["trial_spacing_us"]), 1e-12));
    ja["channel"].erase("delay_spread_ns");
    jb["channel"].erase("delay_spread_ns");
    ja.erase("trial_spacing_us");
    jb.erase("trial_spacing_us");
    CHECK(ja == jb);
}

TEST_CASE("config rejects unknown keys, conflicts and bad types by path")
{
    CHECK_THROWS_WITH(parse_run_spec(R"({"coresett": {}})"),
                      Catch::Matchers::ContainsSubstring("coresett"));
    CHECK_THROWS_WITH(parse_run_spec(R"({"channel": {"dopler_hz": 5}})"),
                      Catch::Matchers::ContainsSubstring("channel.dopler_hz"));
    CHECK_THROWS_WITH(parse_run_spec(R"({"payload_bits": "many"})"),
                      Catch::Matchers::ContainsSubstring("payload_bits"));
    CHECK_THROWS_WITH(
        parse_run_spec(R"({"channel": {"kind": "tdl", "doppler_hz": 10, "speed_kmh": 3,
                           "carrier_hz": 1e9}})"),
        Catch::Matchers::ContainsSubstring("not both"));
    CHECK_THROWS_WITH(parse_run_spec(R"({"channel": {"kind": "tdl", "speed_kmh": 3}})"),
                      Catch::Matchers::ContainsSubstring("carrier_hz"));
    CHECK_THROWS_WITH(parse_run_spec(R"({"estimator": "genie"})"),
                      Catch::Matchers::ContainsSubstring("estimator"));
    CHECK_THROWS_WITH(parse_run_spec(R"({"campaign": {"kind": "mobility"}})"),
                      Catch::Matchers::ContainsSubstring("grid"));
    CHECK_THROWS_WITH(parse_run_spec(R"({"campaign": {"kind": "coverage"}})"),
                      Catch::Matchers::ContainsSubstring("alpha_grid"));
    CHECK_THROWS_AS(parse_run_spec("[1, 2]"), std::runtime_error);
    CHECK_THROWS_AS(parse_run_spec("not json"), std::runtime_error);
    // validated cross-consistency still applies to parsed documents
    CHECK_THROWS_AS(parse_run_spec(R"({"coreset": {"n_rb": 6, "aggregation_level": 8}})"),
                    std::invalid_argument);
}

TEST_CASE("csv rows carry the exact column set in order")
{
    CHECK(std::string(kCsvHeader) ==
          "experiment,cnr_db,blocks,block_errors,bit_errors,bler,ber,wilson_halfwidth,"
          "seed,wall_ms");

    BlerPoint p;
    p.cnr_db = -3.25;
    p.blocks = 2048;
    p.block_errors = 17;
    p.bit_errors = 123;
    p.bler = 17.0 / 2048.0;
    p.ber = 123.0 / (2048.0 * 40.0);
    p.wilson_halfwidth = 0.004;
    p.seed = 42;
    p.wall_ms = 1.5;
    const auto fields = split_csv(csv_row("walk", p));
    REQUIRE(fields.size() == 10);
    CHECK(fields[0] == "walk");
    CHECK(fields[1] == "-3.25");
    CHECK(fields[2] == "2048");
    CHECK(fields[3] == "17");
    CHECK(fields[4] == "123");
    CHECK_THAT(std::stod(fields[5]), WithinRel(p.bler, 1e-9));
    CHECK_THAT(std::stod(fields[6]), WithinRel(p.ber, 1e-9));
    CHECK_THAT(std::stod(fields[7]), WithinRel(p.wilson_halfwidth, 1e-9));
    CHECK(fields[8] == "42");
    CHECK_THAT(std::stod(fields[9]), WithinRel(1.5, 1e-9));

    const std::string csv = render_csv({{"a", {p, p}, {}, 0.0}, {"b", {p}, {}, 0.0}});
    size_t lines = 0;
    for (char c : csv)
        lines += c == '\n';
    CHECK(lines == 4);
    CHECK(csv.substr(0, csv.find('\n')) == kCsvHeader);
}

TEST_CASE("campaign fans the base config out over its grid")
{
    RunSpec spec = parse_run_spec(R"({
        "coreset": {"n_rb": 24, "n_sym": 2, "aggregation_level": 8},
        "cnr_grid_db": [0],
        "stop": {"min_block_errors": 10, "max_blocks": 512},
        "experiment": "cov",
        "campaign": {"kind": "coverage", "alpha_grid": [0.1, 0.2]}
    })");
    const std::vector<ExperimentResult> results = run_campaign(spec, 1);
    REQUIRE(results.size() == 2);
    CHECK(results[0].name == "cov_a0.1");
    CHECK(results[1].name == "cov_a0.2");
    CHECK(results[0].points.size() == 1);
    CHECK(results[0].points[0].blocks == 512);

    const nlohmann::json side = render_sidecar(spec, results);
    CHECK(side.contains("git_describe"));
    CHECK(side["config"]["experiment"] == "cov");
    CHECK(side["experiments"].size() == 2);
    CHECK(side["master_seed"] == 1);

    write_campaign_files(spec, results, "campaign_selftest");
    std::ifstream csv("campaign_selftest.csv");
    REQUIRE(csv.good());
    std::string header;
    std::getline(csv, header);
    CHECK(header == kCsvHeader);
    std::ifstream json_in("campaign_selftest.json");
    REQUIRE(json_in.good());
    nlohmann::json parsed;
    json_in >> parsed;
    CHECK(parsed["config"] == run_spec_to_json(spec));
}

TEST_CASE("mobility campaigns resolve speed grids against the carrier")
{
    RunSpec spec = parse_run_spec(R"({
        "coreset": {"n_rb": 6, "aggregation_level": 1},
        "cnr_grid_db": [30],
        "stop": {"min_block_errors": 5, "max_blocks": 256},
        "channel": {"kind": "tdl", "delay_spread_ns": 100},
        "estimator": "ls_linear",
        "experiment": "mob",
        "campaign": {"kind": "mobility", "speed_grid_kmh": [3, 120], "carrier_hz": 700e6}
    })");
    REQUIRE(spec.campaign.doppler_grid_hz.size() == 2);
    CHECK_THAT(spec.campaign.doppler_grid_hz[0], WithinRel(3.0 / 3.6 * 700e6 / kSpeedOfLight, 1e-12));
    const std::vector<ExperimentResult> results = run_campaign(spec, 1);
    REQUIRE(results.size() == 2);
    CHECK(results[0].name == "mob_kmh3");
    CHECK(results[1].name == "mob_kmh120");
    for (const auto &r : results)
        CHECK(r.points[0].blocks == 256);
}

TEST_CASE("rejected configurations surface as validation errors")
{
    SimConfig cfg;
    cfg.list_size = 3;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SimConfig{};
    cfg.payload_bits = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = SimConfig{};
    cfg.coreset.n_rb = 6;
    cfg.coreset.aggregation_level = 2;
    CHECK_THROWS_AS(LinkRunner(cfg), std::invalid_argument);
    cfg = SimConfig{};
    cfg.stop.max_blocks = 0;
    CHECK_THROWS_AS(run_bler_point(cfg, 0.0, 0), std::invalid_argument);
}
