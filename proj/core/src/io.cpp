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

#include "otfsjrc/io.hpp"

#include "otfsjrc/json_codec.hpp"

#include <fmt/format.h>

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace otfsjrc::io {

namespace {

constexpr char kMagic[8] = {'O', 'T', 'F', 'S', 'G', 'R', 'I', 'D'};

template <typename T>
void put_le(std::string& out, T value)
{
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t,
                                                    std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint8_t>>>;
    const auto bits = std::bit_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(T); ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

template <typename T>
T get_le(std::string_view in, std::size_t offset)
{
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t,
                                 std::conditional_t<sizeof(T) == 4, std::uint32_t,
                                                    std::conditional_t<sizeof(T) == 2, std::uint16_t, std::uint8_t>>>;
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        bits |= static_cast<U>(static_cast<unsigned char>(in[offset + i])) << (8 * i);
    return std::bit_cast<T>(bits);
}

std::vector<std::string_view> split_lines(std::string_view text)
{
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        auto line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

double parse_double(std::string_view field, const std::string& source, std::size_t line_no)
{
    double v = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (field.empty() || ec != std::errc{} || ptr != end)
        raise(ErrorKind::Decode, fmt::format("{}:{}: '{}' is not a number", source, line_no, field));
    return v;
}

} // namespace

std::string encode_grid(const DDGrid& grid)
{
    std::string out;
    out.reserve(kGridHeaderBytes + 8 * grid.cells().size());
    out.append(kMagic, sizeof(kMagic));
    put_le<std::uint16_t>(out, kGridVersion);
    put_le<std::uint8_t>(out, static_cast<std::uint8_t>(grid.domain()));
    put_le<std::uint8_t>(out, 0);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(grid.m_bins()));
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(grid.n_bins()));
    put_le<double>(out, grid.config().scs_hz);
    put_le<double>(out, grid.config().fc_hz);
    for (const auto& v : grid.cells().values()) {
        put_le<float>(out, static_cast<float>(v.real()));
        put_le<float>(out, static_cast<float>(v.imag()));
    }
    return out;
}

DDGrid decode_grid(std::string_view bytes, const std::string& source)
{
    if (bytes.size() < kGridHeaderBytes) raise(ErrorKind::Decode, source + ": truncated OTFSGRID header");
    if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
        raise(ErrorKind::Decode, source + ": bad magic, not an OTFSGRID file");
    const auto version = get_le<std::uint16_t>(bytes, 8);
    if (version != kGridVersion) raise(ErrorKind::Decode, fmt::format("{}: unsupported OTFSGRID version {}", source, version));
    const auto tag = get_le<std::uint8_t>(bytes, 10);
    if (tag > 1) raise(ErrorKind::Decode, fmt::format("{}: unknown domain tag {}", source, tag));

    FrameConfig cfg;
    cfg.m_bins = get_le<std::uint32_t>(bytes, 12);
    cfg.n_bins = get_le<std::uint32_t>(bytes, 16);
    cfg.scs_hz = get_le<double>(bytes, 20);
    cfg.fc_hz = get_le<double>(bytes, 28);
    try {
        cfg.validate();
    } catch (const Error& e) {
        raise(ErrorKind::Decode, source + ": " + e.what());
    }
    const std::size_t expected = kGridHeaderBytes + 8 * cfg.m_bins * cfg.n_bins;
    if (bytes.size() != expected)
        raise(ErrorKind::Decode, fmt::format("{}: payload is {} bytes, header implies {}", source, bytes.size(), expected));

    ComplexMatrix cells(cfg.m_bins, cfg.n_bins);
    std::size_t off = kGridHeaderBytes;
    for (auto& v : cells.values()) {
        const float re = get_le<float>(bytes, off);
        const float im = get_le<float>(bytes, off + 4);
        v = {static_cast<double>(re), static_cast<double>(im)};
        off += 8;
    }
    return DDGrid(cfg, static_cast<Domain>(tag), std::move(cells));
}

void write_file_atomic(const fs::path& path, std::string_view contents)
{
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) raise(ErrorKind::Io, path.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) raise(ErrorKind::Io, tmp.string() + ": cannot open for writing");
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!f) raise(ErrorKind::Io, tmp.string() + ": write failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) raise(ErrorKind::Io, path.string() + ": " + ec.message());
}

std::string read_file(const fs::path& path)
{
    std::ifstream f(path, std::ios::binary);
    if (!f) raise(ErrorKind::Io, path.string() + ": cannot open for reading");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void write_grid(const fs::path& path, const DDGrid& grid) { write_file_atomic(path, encode_grid(grid)); }

DDGrid read_grid(const fs::path& path) { return decode_grid(read_file(path), path.string()); }

std::string rdm_csv(const Rdm& rdm)
{
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "m,n,re,im,mag\n");
    for (std::size_t m = 0; m < rdm.r.rows(); ++m)
        for (std::size_t n = 0; n < rdm.r.cols(); ++n) {
            const cplx v = rdm.r(m, n);
            fmt::format_to(std::back_inserter(buf), "{},{},{:.17g},{:.17g},{:.17g}\n", m, n, v.real(), v.imag(),
                           std::abs(v));
        }
    return fmt::to_string(buf);
}

std::string phase_trace_csv(const PhaseTrace& trace)
{
    fmt::memory_buffer buf;
    fmt::format_to(std::back_inserter(buf), "l,phi_rad,re,im\n");
    for (std::size_t l = 0; l < trace.size(); ++l) {
        const cplx p = l < trace.complex_peaks.size() ? trace.complex_peaks[l] : cplx{};
        fmt::format_to(std::back_inserter(buf), "{},{:.17g},{:.17g},{:.17g}\n", l, trace.phases_rad[l], p.real(),
                       p.imag());
    }
    return fmt::to_string(buf);
}

PhaseTrace parse_phase_trace_csv(std::string_view text, double dwell_interval_s, const std::string& source)
{
    const auto lines = split_lines(text);
    if (lines.empty() || lines.front() != "l,phi_rad,re,im")
        raise(ErrorKind::Decode, source + ": expected header 'l,phi_rad,re,im'");
    PhaseTrace trace;
    trace.dwell_interval_s = dwell_interval_s;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        std::vector<std::string_view> fields;
        std::string_view rest = lines[i];
        while (true) {
            const auto comma = rest.find(',');
            fields.push_back(rest.substr(0, comma));
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (fields.size() != 4) raise(ErrorKind::Decode, fmt::format("{}:{}: expected 4 fields", source, i + 1));
        const double idx = parse_double(fields[0], source, i + 1);
        if (idx != static_cast<double>(i - 1))
            raise(ErrorKind::Decode, fmt::format("{}:{}: dwell index out of sequence", source, i + 1));
        trace.phases_rad.push_back(parse_double(fields[1], source, i + 1));
        trace.complex_peaks.emplace_back(parse_double(fields[2], source, i + 1), parse_double(fields[3], source, i + 1));
    }
    return trace;
}

void write_dataset(const fs::path& dir, std::span<const LabeledTrace> dataset)
{
    if (dataset.empty()) raise(ErrorKind::Validation, "write_dataset: empty dataset");
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        const std::string file = fmt::format("traces/trace_{:05d}.csv", i);
        write_file_atomic(dir / file, phase_trace_csv(dataset[i].trace));
        entries.push_back({{"file", file}, {"label", to_string(dataset[i].label)}, {"scenario", dataset[i].scenario}});
    }
    nlohmann::json manifest{{"version", 1},
                            {"n_traces", dataset.size()},
                            {"dwell_interval_s", dataset.front().trace.dwell_interval_s},
                            {"trace_len", dataset.front().trace.size()},
                            {"entries", entries}};
    write_file_atomic(dir / "manifest.json", dump_json(manifest));
}

DatasetManifest read_manifest(const fs::path& dir)
{
    const auto path = dir / "manifest.json";
    const auto j = parse_json(read_file(path), path.string());
    DatasetManifest m;
    try {
        m.version = j.at("version").get<int>();
        m.n_traces = j.at("n_traces").get<std::size_t>();
        m.dwell_interval_s = j.at("dwell_interval_s").get<double>();
        m.trace_len = j.at("trace_len").get<std::size_t>();
        for (const auto& e : j.at("entries"))
            m.entries.push_back({e.at("file").get<std::string>(), label_from_string(e.at("label").get<std::string>()),
                                 e.value("scenario", std::string{})});
    } catch (const nlohmann::json::exception& e) {
        raise(ErrorKind::Decode, path.string() + ": " + e.what());
    }
    if (m.version != 1) raise(ErrorKind::Decode, path.string() + ": unsupported manifest version");
    if (m.entries.size() != m.n_traces) raise(ErrorKind::Decode, path.string() + ": n_traces does not match entries");
    return m;
}

std::vector<LabeledTrace> read_dataset(const fs::path& dir)
{
    const auto manifest = read_manifest(dir);
    std::vector<LabeledTrace> out;
    out.reserve(manifest.entries.size());
    for (const auto& e : manifest.entries) {
        const auto path = dir / e.file;
        LabeledTrace t;
        t.trace = parse_phase_trace_csv(read_file(path), manifest.dwell_interval_s, path.string());
        if (t.trace.size() != manifest.trace_len)
            raise(ErrorKind::Decode, path.string() + ": trace length differs from manifest trace_len");
        t.label = e.label;
        t.scenario = e.scenario;
        out.push_back(std::move(t));
    }
    return out;
}

} // namespace otfsjrc::io
