// SPDX-License-Identifier: Apache-2.0
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


#include "experiment.hpp"

#include <otfsjrc/io.hpp>
#include <otfsjrc/json_codec.hpp>
#include <otfsjrc/random.hpp>

#include <fmt/format.h>

#include <algorithm>

namespace jrc {

using nlohmann::json;
using namespace otfsjrc;

namespace {

template <typename T>
void read_opt(const json& j, const char* key, T& out)
{
    if (auto it = j.find(key); it != j.end() && !it->is_null()) it->get_to(out);
}

std::pair<double, double> read_range(const json& j, const char* key, std::pair<double, double> fallback)
{
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return fallback;
    if (!it->is_array() || it->size() != 2) raise(ErrorKind::Validation, fmt::format("'{}' must be [min, max]", key));
    return {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

SymbolAlphabet alphabet_from_json(const json& j)
{
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "qpsk") return SymbolAlphabet::qpsk();
        if (s == "unit_impulse") return SymbolAlphabet::unit_impulse();
        raise(ErrorKind::Validation, "alphabet must be \"qpsk\", \"unit_impulse\" or a list of [re, im] points");
    }
    std::vector<cplx> points;
    for (const auto& p : j) {
        if (!p.is_array() || p.size() != 2) raise(ErrorKind::Validation, "custom alphabet points must be [re, im]");
        points.emplace_back(p[0].get<double>(), p[1].get<double>());
    }
    return SymbolAlphabet::custom(std::move(points));
}

json alphabet_to_json(const SymbolAlphabet& a)
{
    switch (a.kind) {
    case AlphabetKind::Qpsk: return "qpsk";
    case AlphabetKind::UnitImpulse: return "unit_impulse";
    case AlphabetKind::Custom: break;
    }
    json pts = json::array();
    for (const auto& p : a.points) pts.push_back({p.real(), p.imag()});
    return pts;
}

double strongest_gain(const ChannelConfig& c)
{
    double g = 0.0;
    for (const auto& t : c.targets)
        if (!t.is_self_interference) g = std::max(g, std::abs(t.gain));
    return g;
}

} // namespace

void ExperimentConfig::validate() const
{
    frame.validate();
    alphabet.validate();
    channel.validate();
    detector.validate();
    vitals.br_band.validate(channel.dwell_interval_s);
    vitals.hb_band.validate(channel.dwell_interval_s);
    if (vitals.num_dwells < 1) raise(ErrorKind::Validation, "vitals.num_dwells must be >= 1");
    if (vitals.fft_size < vitals.num_dwells)
        raise(ErrorKind::Validation, "vitals.fft_size must be >= vitals.num_dwells");
    if (vitals.track_bin && (vitals.track_bin->delay >= frame.m_bins || vitals.track_bin->doppler >= frame.n_bins))
        raise(ErrorKind::Range, "vitals.track_bin lies outside the frame");
    classifier.validate();
    if (dataset.n_human < 1 || dataset.n_nonhuman < 1)
        raise(ErrorKind::Validation, "dataset.n_human and dataset.n_nonhuman must be >= 1");
    dataset.recipe.validate(channel.dwell_interval_s);
}

ExperimentConfig experiment_from_json(const json& j)
{
    if (!j.is_object()) raise(ErrorKind::Validation, "config must be a JSON object");
    ExperimentConfig c;
    read_opt(j, "seed", c.seed);
    read_opt(j, "frame", c.frame);
    if (auto it = j.find("alphabet"); it != j.end() && !it->is_null()) c.alphabet = alphabet_from_json(*it);
    if (auto it = j.find("channel"); it != j.end() && !it->is_null()) {
        c.channel = it->get<ChannelConfig>();
        if (auto snr = it->find("snr_db"); snr != it->end() && !snr->is_null()) {
            const double g = strongest_gain(c.channel);
            if (g <= 0.0) raise(ErrorKind::Validation, "channel.snr_db needs at least one non-leakage target");
            c.channel.noise_power = noise_power_for_snr(g, snr->get<double>());
        }
    }
    read_opt(j, "detector", c.detector);
    if (auto it = j.find("vitals"); it != j.end() && !it->is_null()) {
        const auto& v = *it;
        read_opt(v, "br_band", c.vitals.br_band);
        read_opt(v, "hb_band", c.vitals.hb_band);
        read_opt(v, "fft_size", c.vitals.fft_size);
        read_opt(v, "num_dwells", c.vitals.num_dwells);
        read_opt(v, "gate", c.vitals.gate);
        if (auto tb = v.find("track_bin"); tb != v.end() && !tb->is_null()) {
            if (!tb->is_array() || tb->size() != 2) raise(ErrorKind::Validation, "vitals.track_bin must be [l, k]");
            c.vitals.track_bin = BinIndex{(*tb)[0].get<std::size_t>(), (*tb)[1].get<std::size_t>()};
        }
    }
    read_opt(j, "classifier", c.classifier);
    if (auto it = j.find("dataset"); it != j.end() && !it->is_null()) {
        const auto& d = *it;
        auto& r = c.dataset.recipe;
        read_opt(d, "n_human", c.dataset.n_human);
        read_opt(d, "n_nonhuman", c.dataset.n_nonhuman);
        read_opt(d, "trace_len", r.trace_len);
        std::tie(r.snr_min_db, r.snr_max_db) = read_range(d, "snr_db", {r.snr_min_db, r.snr_max_db});
        read_opt(d, "static_share", r.static_share);
        read_opt(d, "robot_share", r.robot_share);
        std::tie(r.robot_speed_min_mps, r.robot_speed_max_mps) =
            read_range(d, "robot_speed_mps", {r.robot_speed_min_mps, r.robot_speed_max_mps});
        read_opt(d, "robot_min_alias_hz", r.robot_min_alias_hz);
        read_opt(d, "jitter_step_rad", r.jitter_step_rad);
    }
    if (auto it = j.find("output_dir"); it != j.end() && !it->is_null()) c.output_dir = it->get<std::string>();

    c.channel.seed = noise_seed(c);
    c.dataset.recipe.frame = c.frame;
    c.dataset.recipe.detector = c.detector;
    return c;
}

json experiment_to_json(const ExperimentConfig& c)
{
    const auto& r = c.dataset.recipe;
    json vitals{{"br_band", c.vitals.br_band},
                {"hb_band", c.vitals.hb_band},
                {"fft_size", c.vitals.fft_size},
                {"num_dwells", c.vitals.num_dwells},
                {"gate", c.vitals.gate}};
    if (c.vitals.track_bin) vitals["track_bin"] = {c.vitals.track_bin->delay, c.vitals.track_bin->doppler};
    return json{{"seed", c.seed},
                {"frame", c.frame},
                {"alphabet", alphabet_to_json(c.alphabet)},
                {"channel", c.channel},
                {"detector", c.detector},
                {"vitals", vitals},
                {"classifier", c.classifier},
                {"dataset",
                 {{"n_human", c.dataset.n_human},
                  {"n_nonhuman", c.dataset.n_nonhuman},
                  {"trace_len", r.trace_len},
                  {"snr_db", {r.snr_min_db, r.snr_max_db}},
                  {"static_share", r.static_share},
                  {"robot_share", r.robot_share},
                  {"robot_speed_mps", {r.robot_speed_min_mps, r.robot_speed_max_mps}},
                  {"robot_min_alias_hz", r.robot_min_alias_hz},
                  {"jitter_step_rad", r.jitter_step_rad}}},
                {"output_dir", c.output_dir.generic_string()}};
}

ExperimentConfig load_experiment(const std::filesystem::path& path)
{
    const auto j = parse_json(io::read_file(path), path.string());
    ExperimentConfig c;
    try {
        c = experiment_from_json(j);
        c.validate();
    } catch (const json::exception& e) {
        raise(ErrorKind::Validation, path.string() + ": " + e.what());
    } catch (const Error& e) {
        raise(e.kind(), path.string() + ": " + e.what());
    }
    return c;
}

std::string config_hash(const json& canonical)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return fmt::format("{:016x}", h);
}

void set_seed(ExperimentConfig& cfg, std::uint64_t seed)
{
    cfg.seed = seed;
    cfg.channel.seed = noise_seed(cfg);
}

std::uint64_t frame_seed(const ExperimentConfig& cfg) { return derive_seed(cfg.seed, "frame"); }
std::uint64_t noise_seed(const ExperimentConfig& cfg) { return derive_seed(cfg.seed, "noise"); }
std::uint64_t dataset_seed(const ExperimentConfig& cfg) { return derive_seed(cfg.seed, "dataset"); }

} // namespace jrc
