// Copyright 2026 The tgbs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tgbs/io.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "tgbs/error.h"

namespace tgbs {

namespace fs = std::filesystem;

namespace {

std::ifstream open_input(const fs::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open " + path.string());
    }
    return in;
}

std::ofstream open_output(const fs::path &path) {
    std::ofstream out(path);
    if (!out) {
        throw InputError("cannot write " + path.string());
    }
    return out;
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

std::string where(const fs::path &path, std::size_t line) { return path.string() + ":" + std::to_string(line); }

double parse_double(std::string_view s, const fs::path &path, std::size_t line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw InputError(where(path, line) + ": cannot parse number '" + std::string(s) + "'");
    }
    if (!std::isfinite(v)) {
        throw InputError(where(path, line) + ": non-finite entry '" + std::string(s) + "'");
    }
    return v;
}

std::size_t parse_size(std::string_view s, const fs::path &path, std::size_t line) {
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw InputError(where(path, line) + ": cannot parse count '" + std::string(s) + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

SqueezeSpec read_squeezing(const fs::path &path) {
    std::ifstream in = open_input(path);
    std::vector<double> r;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string_view t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        r.push_back(parse_double(t, path, n));
    }
    try {
        return SqueezeSpec(std::move(r));
    } catch (const InputError &e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void write_squeezing(const fs::path &path, const SqueezeSpec &spec) {
    std::ofstream out = open_output(path);
    for (double r : spec.pair_squeezing()) {
        out << format_double(r) << '\n';
    }
}

TransmissionMatrix read_transmission(const fs::path &path) {
    std::ifstream in = open_input(path);
    std::string line;
    std::size_t n = 0;
    std::size_t rows = 0, cols = 0;
    bool have_header = false;
    ComplexMatrix t;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string_view s = trim(line);
        if (s.empty() || s.front() == '#') {
            continue;
        }
        const auto f = fields(s);
        if (!have_header) {
            if (f.size() != 2) {
                throw InputError(where(path, n) + ": expected header 'M K'");
            }
            rows = parse_size(f[0], path, n);
            cols = parse_size(f[1], path, n);
            t.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
            have_header = true;
            continue;
        }
        if (row >= rows) {
            throw InputError(where(path, n) + ": more than the declared " + std::to_string(rows) + " rows");
        }
        if (f.size() != 2 * cols) {
            throw InputError(where(path, n) + ": expected " + std::to_string(2 * cols) + " numbers, found " +
                             std::to_string(f.size()));
        }
        for (std::size_t k = 0; k < cols; ++k) {
            t(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k)) = {parse_double(f[2 * k], path, n),
                                                                                parse_double(f[2 * k + 1], path, n)};
        }
        ++row;
    }
    if (!have_header) {
        throw InputError(path.string() + ": empty transmission file");
    }
    if (row != rows) {
        throw InputError(path.string() + ": declared " + std::to_string(rows) + " rows, found " + std::to_string(row));
    }
    try {
        return TransmissionMatrix(std::move(t));
    } catch (const InputError &e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void write_transmission(const fs::path &path, const TransmissionMatrix &t) {
    std::ofstream out = open_output(path);
    const ComplexMatrix &m = t.matrix();
    out << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            out << (k ? " " : "") << format_double(m(i, k).real()) << ' ' << format_double(m(i, k).imag());
        }
        out << '\n';
    }
}

SampleSet read_samples(const fs::path &path, std::size_t modes, SampleSource source) {
    std::ifstream in = open_input(path);
    SampleSet set(modes, source);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string_view s = trim(line);
        if (s.empty()) {
            continue;
        }
        if (modes == 0) {
            modes = s.size();
            set = SampleSet(modes, source);
        }
        if (s.size() != modes) {
            throw InputError(where(path, n) + ": pattern has " + std::to_string(s.size()) + " bits, expected " +
                             std::to_string(modes));
        }
        try {
            set.push_back(ClickPattern::from_string(s));
        } catch (const InputError &e) {
            throw InputError(where(path, n) + ": " + e.what());
        }
    }
    return set;
}

void write_samples(const fs::path &path, const SampleSet &samples) {
    std::ofstream out = open_output(path);
    for (const ClickPattern &p : samples.patterns()) {
        out << p.to_string() << '\n';
    }
}

ExperimentBundle load_bundle(const fs::path &manifest) {
    std::ifstream in = open_input(manifest);
    ExperimentBundle b;
    b.manifest = manifest;
    const fs::path base = manifest.parent_path();
    auto resolve = [&](std::string_view v) {
        fs::path p{std::string(v)};
        return p.is_relative() ? base / p : p;
    };
    fs::path squeezing, transmission;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        std::string_view s = trim(line);
        if (s.empty() || s.front() == '#') {
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string_view::npos) {
            throw InputError(where(manifest, n) + ": expected 'key = value'");
        }
        const std::string_view key = trim(s.substr(0, eq));
        const std::string_view value = trim(s.substr(eq + 1));
        if (key == "name") {
            b.name = value;
        } else if (key == "squeezing") {
            squeezing = resolve(value);
        } else if (key == "transmission") {
            transmission = resolve(value);
        } else if (key == "samples") {
            b.sample_paths.push_back(resolve(value));
        } else if (key == "note") {
            b.notes.emplace_back(value);
        } else {
            throw InputError(where(manifest, n) + ": unknown key '" + std::string(key) + "'");
        }
    }
    if (squeezing.empty() || transmission.empty()) {
        throw InputError(manifest.string() + ": manifest needs both 'squeezing' and 'transmission'");
    }
    b.spec = read_squeezing(squeezing);
    b.t = read_transmission(transmission);
    if (b.t.input_modes() != b.spec.input_modes()) {
        throw InputError(manifest.string() + ": transmission matrix has " + std::to_string(b.t.input_modes()) +
                         " columns but " + std::to_string(b.spec.pairs()) + " squeezing values expand to " +
                         std::to_string(b.spec.input_modes()) + " input modes");
    }
    for (const fs::path &p : b.sample_paths) {
        b.samples.push_back(read_samples(p, b.t.output_modes()));
    }
    if (b.name.empty()) {
        b.name = manifest.stem().string();
    }
    return b;
}

fs::path write_bundle(const fs::path &dir, const std::string &name, const SqueezeSpec &spec,
                      const TransmissionMatrix &t, const std::vector<SampleSet> &samples) {
    fs::create_directories(dir);
    write_squeezing(dir / (name + ".squeezing"), spec);
    write_transmission(dir / (name + ".transmission"), t);
    const fs::path manifest = dir / (name + ".manifest");
    std::ofstream out = open_output(manifest);
    out << "name = " << name << '\n';
    out << "squeezing = " << name << ".squeezing\n";
    out << "transmission = " << name << ".transmission\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const std::string file = name + ".samples" + (samples.size() > 1 ? "." + std::to_string(i) : "");
        write_samples(dir / file, samples[i]);
        out << "samples = " << file << '\n';
    }
    return manifest;
}

}  // namespace tgbs
