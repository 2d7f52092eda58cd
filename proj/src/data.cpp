/*
 * Copyright 2026 The movkl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "movkl/data.hpp"
#include "movkl/draws.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string_view>
#include <vector>

#include "movkl/errors.hpp"

namespace movkl {

void CurveDataset::validate() const
{
    require(inputs.count() == targets.count(), ErrorKind::Data, "dataset: input and target counts differ");
    require(channels >= 1, ErrorKind::Data, "dataset: channel count must be >= 1");
    if (labels) {
        require(labels->count() == targets.count(), ErrorKind::Data, "dataset: label count differs from target count");
        require(same_grid(labels->grid(), targets.grid()), ErrorKind::Data, "dataset: labels are not on the output grid");
        const auto& l = labels->rows();
        for (Eigen::Index i = 0; i < l.rows(); ++i)
            for (Eigen::Index j = 0; j < l.cols(); ++j)
                require(l(i, j) == 0.0 || l(i, j) == 1.0, ErrorKind::Data,
                        "dataset: label record " + std::to_string(i) + " is not 0/1-valued");
    }
}

CurveDataset CurveDataset::select(std::span<const std::size_t> indices) const
{
    CurveDataset out{inputs.select(indices), targets.select(indices), std::nullopt, channels};
    if (labels)
        out.labels = labels->select(indices);
    return out;
}

// ---------------------------------------------------------------- text format

namespace {

void put_values(std::string& out, std::span<const double> values)
{
    char buf[32];
    for (double v : values) {
        const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
        out.push_back(',');
        out.append(buf, static_cast<std::size_t>(len));
    }
}

void put_row(std::string& out, const char* tag, std::size_t i, const Eigen::MatrixXd& rows)
{
    out += tag;
    out += ',' + std::to_string(i);
    const Eigen::RowVectorXd r = rows.row(static_cast<Eigen::Index>(i));
    put_values(out, {r.data(), static_cast<std::size_t>(r.size())});
    out += '\n';
}

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

class Reader {
public:
    explicit Reader(const std::string& text) : text_(text) {}

    std::vector<std::string_view> next(const char* expecting)
    {
        while (pos_ < text_.size()) {
            auto end = text_.find('\n', pos_);
            if (end == std::string::npos)
                end = text_.size();
            std::string_view line(text_.data() + pos_, end - pos_);
            pos_ = end + 1;
            ++line_no_;
            if (!line.empty() && line.back() == '\r')
                line.remove_suffix(1);
            if (line.empty())
                continue;
            return split(line);
        }
        error(std::string("unexpected end of file, expecting ") + expecting);
    }

    [[noreturn]] void error(const std::string& msg) const
    {
        fail(ErrorKind::Data, "dataset line " + std::to_string(line_no_) + ": " + msg);
    }

    double number(std::string_view tok, const std::string& what) const
    {
        double v = 0.0;
        const auto* first = tok.data();
        const auto* last = tok.data() + tok.size();
        const auto res = std::from_chars(first, last, v);
        if (res.ec != std::errc() || res.ptr != last)
            error("cannot parse " + what + " '" + std::string(tok) + "'");
        if (!std::isfinite(v))
            error("non-finite value in " + what);
        return v;
    }

    std::size_t count(std::string_view tok, const std::string& what) const
    {
        std::size_t v = 0;
        const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (res.ec != std::errc() || res.ptr != tok.data() + tok.size())
            error("cannot parse " + what + " '" + std::string(tok) + "'");
        return v;
    }

    std::vector<double> values(const std::vector<std::string_view>& f, std::size_t skip, std::size_t expect,
                               const std::string& what) const
    {
        if (f.size() != skip + expect)
            error(what + " has " + std::to_string(f.size() - skip) + " values, expected " + std::to_string(expect));
        std::vector<double> out(expect);
        for (std::size_t j = 0; j < expect; ++j)
            out[j] = number(f[skip + j], what + " value " + std::to_string(j));
        return out;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;
    std::size_t line_no_ = 0;
};

GridPtr read_grid(Reader& rd, const char* points_tag, const char* weights_tag, std::size_t m)
{
    auto p = rd.next(points_tag);
    if (p.front() != points_tag)
        rd.error(std::string("expected ") + points_tag);
    auto pts = rd.values(p, 1, m, points_tag);
    auto w = rd.next(weights_tag);
    if (w.front() != weights_tag)
        rd.error(std::string("expected ") + weights_tag);
    auto wts = rd.values(w, 1, m, weights_tag);
    try {
        return std::make_shared<const Grid>(std::move(pts), std::move(wts));
    } catch (const Error& e) {
        rd.error(std::string("invalid grid: ") + e.what());
    }
}

} // namespace

std::string dataset_to_text(const CurveDataset& ds)
{
    ds.validate();
    std::string out = "movkl-dataset," + std::to_string(kDatasetFormatVersion) + "\n";
    out += "n," + std::to_string(ds.size()) + ",m_in," + std::to_string(ds.input_grid()->size()) + ",m_out," +
           std::to_string(ds.output_grid()->size()) + ",labels," + (ds.labels ? "1" : "0") + ",channels," +
           std::to_string(ds.channels) + "\n";
    auto grid_lines = [&](const Grid& g, const char* pt, const char* wt) {
        out += pt;
        put_values(out, g.points());
        out += '\n';
        out += wt;
        put_values(out, g.weights());
        out += '\n';
    };
    grid_lines(*ds.input_grid(), "input_points", "input_weights");
    grid_lines(*ds.output_grid(), "output_points", "output_weights");
    for (std::size_t i = 0; i < ds.size(); ++i) {
        put_row(out, "x", i, ds.inputs.rows());
        put_row(out, "y", i, ds.targets.rows());
        if (ds.labels)
            put_row(out, "l", i, ds.labels->rows());
    }
    return out;
}

CurveDataset dataset_from_text(const std::string& text)
{
    Reader rd(text);
    auto head = rd.next("header");
    if (head.size() != 2 || head[0] != "movkl-dataset")
        rd.error("missing movkl-dataset header");
    if (rd.count(head[1], "format version") != static_cast<std::size_t>(kDatasetFormatVersion))
        rd.error("unsupported dataset format version " + std::string(head[1]));

    auto dims = rd.next("dimensions");
    if (dims.size() != 10 || dims[0] != "n" || dims[2] != "m_in" || dims[4] != "m_out" || dims[6] != "labels" ||
        dims[8] != "channels")
        rd.error("malformed dimension record");
    const std::size_t n = rd.count(dims[1], "n");
    const std::size_t m_in = rd.count(dims[3], "m_in");
    const std::size_t m_out = rd.count(dims[5], "m_out");
    const std::size_t has_labels = rd.count(dims[7], "labels");
    const std::size_t channels = rd.count(dims[9], "channels");
    if (has_labels > 1)
        rd.error("labels flag must be 0 or 1");

    const GridPtr in_grid = read_grid(rd, "input_points", "input_weights", m_in);
    const GridPtr out_grid = read_grid(rd, "output_points", "output_weights", m_out);

    Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m_in));
    Eigen::MatrixXd y(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m_out));
    Eigen::MatrixXd l(static_cast<Eigen::Index>(has_labels ? n : 0), static_cast<Eigen::Index>(m_out));
    auto read_record = [&](const char* tag, std::size_t i, std::size_t m, Eigen::MatrixXd& dst) {
        auto f = rd.next(tag);
        if (f.size() < 2 || f[0] != tag)
            rd.error(std::string("expected record '") + tag + "' for sample " + std::to_string(i));
        if (rd.count(f[1], "record index") != i)
            rd.error("record index " + std::string(f[1]) + " out of order, expected " + std::to_string(i));
        const auto v = rd.values(f, 2, m, std::string("record ") + tag + "[" + std::to_string(i) + "]");
        for (std::size_t j = 0; j < m; ++j)
            dst(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[j];
    };
    for (std::size_t i = 0; i < n; ++i) {
        read_record("x", i, m_in, x);
        read_record("y", i, m_out, y);
        if (has_labels)
            read_record("l", i, m_out, l);
    }

    CurveDataset ds{CurveVec(in_grid, std::move(x)), CurveVec(out_grid, std::move(y)), std::nullopt, channels};
    if (has_labels)
        ds.labels = CurveVec(out_grid, std::move(l));
    ds.validate();
    return ds;
}

void save_dataset(const std::filesystem::path& path, const CurveDataset& ds)
{
    const std::string text = dataset_to_text(ds);
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::Io, "cannot write dataset " + path.string());
    out << text;
    require(static_cast<bool>(out), ErrorKind::Io, "failed writing dataset " + path.string());
}

CurveDataset load_dataset(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::Io, "cannot open dataset " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return dataset_from_text(ss.str());
}

CurveDataset import_feature_csv(const std::filesystem::path& path, std::size_t channels, std::size_t m_in,
                                std::size_t m_out, bool has_labels)
{
    require(channels >= 1 && m_in >= 2 && m_out >= 2, ErrorKind::Config, "import: invalid feature shape");
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorKind::Io, "cannot open feature csv " + path.string());
    const std::size_t width = channels * m_in + m_out * (has_labels ? 2 : 1);

    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const auto f = split(line);
        require(f.size() == width, ErrorKind::Data,
                "feature csv line " + std::to_string(line_no) + ": " + std::to_string(f.size()) + " fields, expected " +
                    std::to_string(width));
        std::vector<double> v(width);
        for (std::size_t c = 0; c < width; ++c) {
            const auto res = std::from_chars(f[c].data(), f[c].data() + f[c].size(), v[c]);
            require(res.ec == std::errc() && res.ptr == f[c].data() + f[c].size() && std::isfinite(v[c]),
                    ErrorKind::Data, "feature csv line " + std::to_string(line_no) + ": bad value in field " + std::to_string(c));
        }
        rows.push_back(std::move(v));
    }

    const GridPtr base_in = Grid::uniform(0.0, 1.0, m_in);
    const GridPtr in_grid = channels == 1 ? base_in : Grid::stacked(*base_in, channels, 2.0);
    const GridPtr out_grid = Grid::uniform(0.0, 1.0, m_out);
    const auto n = static_cast<Eigen::Index>(rows.size());
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(channels * m_in)), y(n, static_cast<Eigen::Index>(m_out)),
        l(has_labels ? n : 0, static_cast<Eigen::Index>(m_out));
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& v = rows[static_cast<std::size_t>(i)];
        std::size_t c = 0;
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            x(i, j) = v[c++];
        for (Eigen::Index j = 0; j < y.cols(); ++j)
            y(i, j) = v[c++];
        if (has_labels)
            for (Eigen::Index j = 0; j < l.cols(); ++j)
                l(i, j) = v[c++];
    }
    CurveDataset ds{CurveVec(in_grid, std::move(x)), CurveVec(out_grid, std::move(y)), std::nullopt, channels};
    if (has_labels)
        ds.labels = CurveVec(out_grid, std::move(l));
    ds.validate();
    return ds;
}

// ---------------------------------------------------------------- synthetic

void SynthSpec::validate() const
{
    require(n_samples >= 1, ErrorKind::Config, "synth: n_samples must be >= 1");
    require(grid_size >= 2, ErrorKind::Config, "synth: grid_size must be >= 2");
    require(latency < grid_size, ErrorKind::Config, "synth: latency must be < grid_size");
    require(channel_count >= 1, ErrorKind::Config, "synth: channel_count must be >= 1");
    require(std::isfinite(noise_std) && noise_std >= 0.0, ErrorKind::Config, "synth: noise_std must be >= 0");
}

namespace {

using detail::Draws;

struct Amplitude {
    double offset = 0.0;
    double amp[3]{};
    double freq[3]{};
    double phase[3]{};

    double operator()(double t) const
    {
        double v = offset;
        for (int k = 0; k < 3; ++k)
            v += amp[k] * std::sin(2.0 * std::numbers::pi * freq[k] * t + phase[k]);
        return std::max(v, 0.0);
    }
};

struct ChannelFilter {
    double gain = 1.0;
    std::vector<double> taps{1.0};  // symmetric, centred, sums to one
};

} // namespace

CurveDataset generate_synthetic(const SynthSpec& spec)
{
    spec.validate();
    Draws rng(spec.seed);
    const std::size_t m = spec.grid_size;
    const auto mi = static_cast<Eigen::Index>(m);
    const GridPtr out_grid = Grid::uniform(0.0, 1.0, m);
    const GridPtr in_grid = spec.channel_count == 1 ? Grid::uniform(0.0, 1.0, m)
                                                    : Grid::stacked(*out_grid, spec.channel_count, 2.0);
    const double dt = 1.0 / static_cast<double>(m - 1);
    const auto t = out_grid->points();

    std::vector<ChannelFilter> filters(spec.channel_count);
    for (auto& f : filters) {
        if (spec.identity_filter)
            continue;
        f.gain = rng.uniform(0.5, 1.5);
        const std::size_t half = rng.index(1, 3);
        f.taps.assign(2 * half + 1, 0.0);
        double sum = 0.0;
        for (std::size_t l = 0; l <= 2 * half; ++l) {
            const double dist = std::abs(static_cast<double>(l) - static_cast<double>(half));
            f.taps[l] = static_cast<double>(half + 1) - dist;
            sum += f.taps[l];
        }
        for (double& v : f.taps)
            v /= sum;
    }

    const auto n = static_cast<Eigen::Index>(spec.n_samples);
    Eigen::MatrixXd x(n, static_cast<Eigen::Index>(in_grid->size()));
    Eigen::MatrixXd y(n, mi);
    Eigen::MatrixXd lab(n, mi);
    const double shift = static_cast<double>(spec.latency) * dt;
    for (Eigen::Index i = 0; i < n; ++i) {
        Amplitude a;
        a.offset = rng.uniform(-0.3, 0.3);
        for (int k = 0; k < 3; ++k) {
            a.amp[k] = rng.uniform(0.3, 1.0);
            a.freq[k] = rng.uniform(0.5, 3.0);
            a.phase[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
        }
        double peak = 0.0;
        for (Eigen::Index j = 0; j < mi; ++j) {
            y(i, j) = a(t[static_cast<std::size_t>(j)]);
            peak = std::max(peak, y(i, j));
        }
        for (Eigen::Index j = 0; j < mi; ++j)
            lab(i, j) = (peak > 0.0 && y(i, j) > 0.1 * peak) ? 1.0 : 0.0;

        for (std::size_t c = 0; c < spec.channel_count; ++c) {
            const auto& f = filters[c];
            const auto half = static_cast<double>(f.taps.size() / 2);
            for (Eigen::Index j = 0; j < mi; ++j) {
                double v = 0.0;
                for (std::size_t l = 0; l < f.taps.size(); ++l)
                    v += f.taps[l] * a(t[static_cast<std::size_t>(j)] - shift + (static_cast<double>(l) - half) * dt);
                x(i, static_cast<Eigen::Index>(c) * mi + j) = f.gain * v;
            }
        }
        if (spec.noise_std > 0.0)
            for (Eigen::Index j = 0; j < x.cols(); ++j)
                x(i, j) += spec.noise_std * rng.normal();
    }

    CurveDataset ds{CurveVec(in_grid, std::move(x)), CurveVec(out_grid, std::move(y)), CurveVec(out_grid, std::move(lab)),
                    spec.channel_count};
    ds.validate();
    return ds;
}

} // namespace movkl
