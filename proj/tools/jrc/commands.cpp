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


#include "commands.hpp"

#include <otfsjrc/io.hpp>
#include <otfsjrc/json_codec.hpp>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <iostream>

namespace jrc {

using nlohmann::json;
using namespace otfsjrc;

namespace {

std::string dwell_file(std::size_t d) { return fmt::format("y_dwell_{:04d}.grid", d); }

void write_json(const fs::path& path, const json& j) { io::write_file_atomic(path, dump_json(j)); }

bool on_grid(const ChannelConfig& c)
{
    auto integral = [](double v) { return v == std::round(v); };
    return std::all_of(c.targets.begin(), c.targets.end(),
                       [&](const TargetSpec& t) { return integral(t.delay_bins) && integral(t.doppler_bins); });
}

// Run manifest. The output location is left out so that the same config and
// seed produce the same bytes wherever they are written.
json run_manifest(const char* command, const ExperimentConfig& cfg)
{
    json canonical = experiment_to_json(cfg);
    canonical.erase("output_dir");
    return json{{"command", command}, {"seed", cfg.seed}, {"config_hash", config_hash(canonical)}, {"config", canonical}};
}

json read_run_manifest(const fs::path& run_dir)
{
    const auto path = run_dir / "run.json";
    return parse_json(io::read_file(path), path.string());
}

ExperimentConfig config_from_run(const json& run, const fs::path& run_dir)
{
    try {
        return experiment_from_json(run.at("config"));
    } catch (const json::exception& e) {
        raise(ErrorKind::Decode, (run_dir / "run.json").string() + ": " + e.what());
    }
}

} // namespace

ExperimentConfig resolve_config(const GlobalOptions& g)
{
    ExperimentConfig cfg = g.config ? load_experiment(*g.config) : experiment_from_json(json::object());
    if (g.seed) set_seed(cfg, *g.seed);
    if (g.out) cfg.output_dir = *g.out;
    cfg.validate();
    return cfg;
}

int cmd_simulate(const GlobalOptions& g, std::optional<std::size_t> dwells)
{
    ExperimentConfig cfg = resolve_config(g);
    if (dwells) {
        cfg.vitals.num_dwells = *dwells;
        cfg.validate();
    }
    const fs::path dir = cfg.output_dir;
    const std::size_t n_dwells = cfg.vitals.num_dwells;
    const bool grid_model = on_grid(cfg.channel);

    const DDGrid x = generate_frame(cfg.frame, cfg.alphabet, frame_seed(cfg));
    io::write_grid(dir / "x.grid", x);

    // Off-grid targets go through the serialized-stream model.
    const DDGrid x_dt = grid_model ? x : modulate(x);
    json files = json::array();
    for (std::size_t d = 0; d < n_dwells; ++d) {
        const DDGrid y = grid_model ? apply_dd_channel(x, cfg.channel, d)
                                    : demodulate(apply_dt_channel(x_dt, cfg.channel, d));
        io::write_grid(dir / dwell_file(d), y);
        files.push_back(dwell_file(d));
    }

    json run = run_manifest("simulate", cfg);
    run["channel_model"] = grid_model ? "grid" : "stream";
    run["dwell_interval_s"] = cfg.channel.dwell_interval_s;
    run["num_dwells"] = n_dwells;
    run["x"] = "x.grid";
    run["dwells"] = files;
    write_json(dir / "run.json", run);
    std::cout << fmt::format("simulate: {} dwells of {}x{} -> {}\n", n_dwells, cfg.frame.m_bins, cfg.frame.n_bins,
                             dir.string());
    return kOk;
}

int cmd_detect(const GlobalOptions& g, const fs::path& x_path, const fs::path& y_path, bool no_cancel)
{
    const ExperimentConfig cfg = resolve_config(g);
    const DDGrid x = io::read_grid(x_path);
    const DDGrid y = io::read_grid(y_path);
    require_domain(x, Domain::DelayDoppler, "detect");
    require_domain(y, Domain::DelayDoppler, "detect");
    if (!(x.config() == y.config()))
        raise(ErrorKind::Dimension,
              fmt::format("{} and {} have different frame configurations", x_path.string(), y_path.string()));

    DetectorParams params = cfg.detector;
    if (no_cancel) params.cancel_si = false;
    const FaorDetector detector(x, params);
    const Rdm rdm = detector.rdm(y);
    const auto detections = extract_peaks(rdm, params);

    const fs::path dir = cfg.output_dir;
    write_json(dir / "detections.json", json(detections));
    io::write_file_atomic(dir / "rdm.csv", io::rdm_csv(rdm));
    std::cout << fmt::format("detect: {} detection(s), cancellation {}\n", detections.size(),
                             params.cancel_si ? "on" : "off");
    for (const auto& d : detections)
        std::cout << fmt::format("  bin ({}, {})  range {:.3f} m  speed {:+.3f} m/s  |R| {:.4g}\n", d.delay_bin,
                                 d.doppler_bin_signed, d.range_m, d.speed_mps, d.magnitude);
    return kOk;
}

int cmd_vitals(const GlobalOptions& g, const fs::path& run_dir)
{
    const json run = read_run_manifest(run_dir);
    ExperimentConfig cfg = config_from_run(run, run_dir);
    if (g.config) {
        const ExperimentConfig over = load_experiment(*g.config);
        cfg.detector = over.detector;
        cfg.vitals = over.vitals;
    }
    const fs::path out = g.out.value_or(run_dir);

    std::vector<std::string> dwell_names;
    try {
        const auto grid_name = run.at("x").get<std::string>();
        dwell_names = run.at("dwells").get<std::vector<std::string>>();
        if (dwell_names.size() < kMinTraceLength)
            raise(ErrorKind::InsufficientData, fmt::format("{}: run holds {} dwells, vitals needs >= {}",
                                                           run_dir.string(), dwell_names.size(), kMinTraceLength));
        const DDGrid x = io::read_grid(run_dir / grid_name);
        const FaorDetector detector(x, cfg.detector);
        std::vector<Rdm> rdms;
        rdms.reserve(dwell_names.size());
        for (const auto& name : dwell_names) rdms.push_back(detector.rdm(io::read_grid(run_dir / name)));

        const double dwell = cfg.channel.dwell_interval_s;
        const auto trace = extract_phase_trace(rdms, dwell, {cfg.vitals.track_bin, cfg.vitals.gate});
        io::write_file_atomic(out / "phase_trace.csv", io::phase_trace_csv(trace));

        const std::size_t L = std::max(cfg.vitals.fft_size, trace.size());
        const auto br = band_spectrum(trace, cfg.vitals.br_band, L);
        const auto hb = band_spectrum(trace, cfg.vitals.hb_band, L);
        fmt::memory_buffer csv;
        fmt::format_to(std::back_inserter(csv), "bin,freq_hz,br_mag,hb_mag\n");
        for (std::size_t k = 0; 2 * k <= L; ++k)
            fmt::format_to(std::back_inserter(csv), "{},{:.17g},{:.17g},{:.17g}\n", k,
                           static_cast<double>(k) / (static_cast<double>(L) * dwell), br[k], hb[k]);
        io::write_file_atomic(out / "spectrum.csv", fmt::to_string(csv));

        try {
            const auto est = estimate_vitals(trace, cfg.vitals.br_band, cfg.vitals.hb_band, L);
            json j = est;
            j["peak_bin"] = {trace.peak_bin.delay, trace.peak_bin.doppler};
            write_json(out / "vitals.json", j);
            std::cout << fmt::format("vitals: breathing {:.4f} Hz ({:.1f}/min), heartbeat {:.4f} Hz ({:.1f}/min)\n",
                                     est.f_br_hz, 60.0 * est.f_br_hz, est.f_hb_hz, 60.0 * est.f_hb_hz);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::NoSignal) throw;
            write_json(out / "vitals.json", json{{"error", "no_signal"}, {"message", e.what()}});
            std::cerr << "jrc: no_signal: " << e.what() << "\n";
            return kNoSignal;
        }
    } catch (const json::exception& e) {
        raise(ErrorKind::Decode, (run_dir / "run.json").string() + ": " + e.what());
    }
    return kOk;
}

int cmd_dataset(const GlobalOptions& g, std::optional<std::size_t> n_human, std::optional<std::size_t> n_nonhuman)
{
    ExperimentConfig cfg = resolve_config(g);
    if (n_human) cfg.dataset.n_human = *n_human;
    if (n_nonhuman) cfg.dataset.n_nonhuman = *n_nonhuman;
    cfg.validate();

    ChannelConfig tmpl = cfg.channel;
    const bool has_target = std::any_of(tmpl.targets.begin(), tmpl.targets.end(),
                                        [](const TargetSpec& t) { return !t.is_self_interference; });
    if (!has_target) tmpl.targets.insert(tmpl.targets.begin(), TargetSpec{});

    const auto data =
        generate_dataset(cfg.dataset.n_human, cfg.dataset.n_nonhuman, tmpl, dataset_seed(cfg), cfg.dataset.recipe);
    const fs::path dir = cfg.output_dir;
    io::write_dataset(dir, data);

    const auto humans = static_cast<std::size_t>(
        std::count_if(data.begin(), data.end(), [](const LabeledTrace& t) { return t.label == Label::Human; }));
    json run = run_manifest("dataset", cfg);
    run["label_counts"] = {{"HUMAN", humans}, {"NON_HUMAN", data.size() - humans}};
    write_json(dir / "run.json", run);
    std::cout << fmt::format("dataset: {} traces ({} HUMAN / {} NON_HUMAN) -> {}\n", data.size(), humans,
                             data.size() - humans, dir.string());
    return kOk;
}

int cmd_classify(const GlobalOptions& g, const fs::path& input)
{
    const ExperimentConfig cfg = resolve_config(g);
    const fs::path out = g.out.value_or(input);
    json verdicts = json::array();

    if (fs::exists(input / "manifest.json")) {
        const auto manifest = io::read_manifest(input);
        const auto data = io::read_dataset(input);
        for (std::size_t i = 0; i < data.size(); ++i) {
            const auto v = classify_sp(data[i].trace, cfg.classifier);
            verdicts.push_back({{"file", manifest.entries[i].file},
                                {"label", to_string(v.label)},
                                {"score", v.score},
                                {"truth", to_string(data[i].label)}});
        }
        const auto counts = evaluate(data, cfg.classifier);
        json confusion = counts;
        confusion["recall"] = counts.recall();
        confusion["specificity"] = counts.specificity();
        write_json(out / "verdicts.json", verdicts);
        write_json(out / "confusion.json", confusion);
        std::cout << fmt::format("classify: HUMAN {}/{} correct, NON_HUMAN {}/{} correct\n", counts.tp,
                                 counts.tp + counts.fn, counts.tn, counts.tn + counts.fp);
        return kOk;
    }

    if (fs::exists(input / "phase_trace.csv")) {
        double dwell = cfg.channel.dwell_interval_s;
        if (fs::exists(input / "run.json")) dwell = config_from_run(read_run_manifest(input), input).channel.dwell_interval_s;
        const auto path = input / "phase_trace.csv";
        const auto trace = io::parse_phase_trace_csv(io::read_file(path), dwell, path.string());
        const auto v = classify_sp(trace, cfg.classifier);
        verdicts.push_back({{"file", "phase_trace.csv"}, {"label", to_string(v.label)}, {"score", v.score}});
        write_json(out / "verdicts.json", verdicts);
        std::cout << fmt::format("classify: {} (score {:.3f})\n", to_string(v.label), v.score);
        return kOk;
    }

    raise(ErrorKind::Io, input.string() + ": holds neither manifest.json nor phase_trace.csv");
}

int cmd_e2e(const GlobalOptions& g)
{
    const ExperimentConfig cfg = resolve_config(g);
    GlobalOptions sub = g;
    sub.out = cfg.output_dir;
    const fs::path dir = cfg.output_dir;

    cmd_simulate(sub, std::nullopt);
    cmd_detect(sub, dir / "x.grid", dir / dwell_file(0), false);
    const int vitals_rc = cmd_vitals(sub, dir);
    cmd_classify(sub, dir);
    return vitals_rc;
}

int exit_code_for(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::DomainMismatch:
    case ErrorKind::Dimension:
    case ErrorKind::Range:
    case ErrorKind::Validation:
    case ErrorKind::InsufficientData: return kValidation;
    case ErrorKind::NoSignal: return kNoSignal;
    case ErrorKind::Io: return kIo;
    case ErrorKind::Decode: return kDecode;
    }
    return kFailure;
}

int run(int argc, const char* const* argv)
{
    CLI::App app{"OTFS joint radar and communication simulator", "jrc"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    auto* opt_config = app.add_option("--config", config_path, "Experiment config (JSON)");
    auto* opt_seed = app.add_option("--seed", seed, "Master seed; overrides the config");
    auto* opt_out = app.add_option("--out", out_dir, "Output directory");

    std::size_t dwells = 0;
    auto* sim = app.add_subcommand("simulate", "Transmit frame and received grids for every dwell");
    auto* opt_dwells = sim->add_option("--dwells", dwells, "Number of dwells; overrides vitals.num_dwells");

    std::string x_path;
    std::string y_path;
    bool no_cancel = false;
    auto* det = app.add_subcommand("detect", "Range-Doppler map and detections for one received grid");
    det->add_option("x", x_path, "Transmitted grid")->required();
    det->add_option("y", y_path, "Received grid")->required();
    det->add_flag("--no-cancel", no_cancel, "Skip self-interference cancellation");

    std::string run_dir;
    auto* vit = app.add_subcommand("vitals", "Breathing and heartbeat rates from a simulate run");
    vit->add_option("run_dir", run_dir, "Directory written by simulate")->required();

    std::size_t n_human = 0;
    std::size_t n_nonhuman = 0;
    auto* ds = app.add_subcommand("dataset", "Labeled synthetic phase-trace dataset");
    auto* opt_nh = ds->add_option("--n-human", n_human, "Human traces");
    auto* opt_nn = ds->add_option("--n-nonhuman", n_nonhuman, "Non-human traces");

    std::string input;
    auto* cls = app.add_subcommand("classify", "Human / non-human verdicts for a dataset or run directory");
    cls->add_option("input", input, "Dataset directory or run directory")->required();

    auto* e2e = app.add_subcommand("e2e", "simulate, detect, vitals and classify in one directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kValidation;
    }

    GlobalOptions g;
    if (*opt_config) g.config = config_path;
    if (*opt_seed) g.seed = seed;
    if (*opt_out) g.out = out_dir;

    try {
        if (*sim) return cmd_simulate(g, *opt_dwells ? std::optional<std::size_t>(dwells) : std::nullopt);
        if (*det) return cmd_detect(g, x_path, y_path, no_cancel);
        if (*vit) return cmd_vitals(g, run_dir);
        if (*ds)
            return cmd_dataset(g, *opt_nh ? std::optional<std::size_t>(n_human) : std::nullopt,
                               *opt_nn ? std::optional<std::size_t>(n_nonhuman) : std::nullopt);
        if (*cls) return cmd_classify(g, input);
        if (*e2e) return cmd_e2e(g);
    } catch (const Error& e) {
        std::cerr << "jrc: " << to_string(e.kind()) << ": " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "jrc: " << e.what() << "\n";
        return kFailure;
    }
    return kFailure;
}

int run(const std::vector<std::string>& args)
{
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

} // namespace jrc
