// Copyright 2026 The gtomo Authors
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

#include "gtomo/io.h"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gtomo {

namespace {

static_assert(std::endian::native == std::endian::little, "binary format assumes a little-endian host");

constexpr char kMagic[4] = {'G', 'T', 'M', '1'};

template <typename T>
void put(std::ostream &out, T v) {
    out.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T>
T get(std::istream &in) {
    T v{};
    in.read(reinterpret_cast<char *>(&v), sizeof(T));
    if (!in) {
        throw std::runtime_error("truncated matrix file");
    }
    return v;
}

void put_header(std::ostream &out, Index rows, Index cols, uint8_t dtype) {
    if (rows > UINT32_MAX || cols > UINT32_MAX) {
        throw std::invalid_argument("matrix too large for the binary container");
    }
    out.write(kMagic, 4);
    put<uint32_t>(out, static_cast<uint32_t>(rows));
    put<uint32_t>(out, static_cast<uint32_t>(cols));
    put<uint8_t>(out, dtype);
}

struct Header {
    uint32_t rows = 0;
    uint32_t cols = 0;
    uint8_t dtype = 0;
};

Header get_header(std::istream &in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::runtime_error("not a GTM1 matrix file");
    }
    Header h;
    h.rows = get<uint32_t>(in);
    h.cols = get<uint32_t>(in);
    h.dtype = get<uint8_t>(in);
    if (h.dtype > 1) {
        throw std::runtime_error("unknown matrix dtype tag");
    }
    return h;
}

std::ofstream open_out(const std::filesystem::path &path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) {
        throw std::runtime_error("cannot open " + path.string() + " for writing");
    }
    return out;
}

std::ifstream open_in(const std::filesystem::path &path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) {
        throw std::runtime_error("cannot open " + path.string());
    }
    return in;
}

}  // namespace

void write_matrix(std::ostream &out, const RealMatrix &m) {
    put_header(out, m.rows(), m.cols(), 0);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            put<double>(out, m(i, j));
        }
    }
}

void write_matrix(std::ostream &out, const ComplexMatrix &m) {
    put_header(out, m.rows(), m.cols(), 1);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            put<double>(out, m(i, j).real());
            put<double>(out, m(i, j).imag());
        }
    }
}

void write_matrix(const std::filesystem::path &path, const RealMatrix &m) {
    auto out = open_out(path, std::ios::binary);
    write_matrix(out, m);
}

void write_matrix(const std::filesystem::path &path, const ComplexMatrix &m) {
    auto out = open_out(path, std::ios::binary);
    write_matrix(out, m);
}

ComplexMatrix read_complex_matrix(std::istream &in) {
    Header h = get_header(in);
    ComplexMatrix m(h.rows, h.cols);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            double re = get<double>(in);
            double im = h.dtype == 1 ? get<double>(in) : 0.0;
            m(i, j) = {re, im};
        }
    }
    return m;
}

ComplexMatrix read_complex_matrix(const std::filesystem::path &path) {
    auto in = open_in(path, std::ios::binary);
    return read_complex_matrix(in);
}

RealMatrix read_real_matrix(std::istream &in) {
    Header h = get_header(in);
    if (h.dtype != 0) {
        throw std::runtime_error("matrix file holds complex data");
    }
    RealMatrix m(h.rows, h.cols);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            m(i, j) = get<double>(in);
        }
    }
    return m;
}

RealMatrix read_real_matrix(const std::filesystem::path &path) {
    auto in = open_in(path, std::ios::binary);
    return read_real_matrix(in);
}

void write_dataset(std::ostream &out, const ShotDataset &dataset, const nlohmann::json &extra) {
    nlohmann::json header = extra.is_object() ? extra : nlohmann::json::object();
    header["format_version"] = kFormatVersion;
    header["seed"] = dataset.seed;
    header["ensemble_hash"] = dataset.ensemble_hash;
    header["n_total"] = dataset.n_total;
    header["R"] = dataset.size();
    out << "# " << header.dump() << "\n";
    out << "r,s";
    for (std::size_t i = 0; i < dataset.n_total; ++i) {
        out << ",n_" << i;
    }
    out << "\n";
    for (std::size_t r = 0; r < dataset.size(); ++r) {
        const ShotRecord &rec = dataset.records[r];
        out << r << ',' << rec.member + 1;
        for (uint8_t v : rec.n) {
            out << ',' << static_cast<int>(v);
        }
        out << "\n";
    }
}

void write_dataset(const std::filesystem::path &path, const ShotDataset &dataset, const nlohmann::json &extra) {
    auto out = open_out(path);
    write_dataset(out, dataset, extra);
}

ShotDataset read_dataset(std::istream &in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
        throw std::runtime_error("dataset CSV is missing its JSON header line");
    }
    nlohmann::json header = nlohmann::json::parse(line.substr(2));
    ShotDataset out;
    out.seed = header.value("seed", uint64_t{0});
    out.ensemble_hash = header.at("ensemble_hash").get<std::string>();
    out.n_total = header.at("n_total").get<std::size_t>();
    if (!std::getline(in, line) || line.rfind("r,s", 0) != 0) {
        throw std::runtime_error("dataset CSV is missing its column header");
    }
    std::size_t lineno = 2;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) {
            continue;
        }
        std::vector<long long> fields;
        const char *p = line.data();
        const char *end = p + line.size();
        while (p <= end) {
            long long v = 0;
            auto [next, ec] = std::from_chars(p, end, v);
            if (ec != std::errc()) {
                throw std::runtime_error("malformed dataset row at line " + std::to_string(lineno));
            }
            fields.push_back(v);
            p = next;
            if (p < end && *p == ',') {
                ++p;
            } else {
                break;
            }
        }
        if (fields.size() != out.n_total + 2 || fields[1] < 1) {
            throw std::runtime_error("dataset row has wrong shape at line " + std::to_string(lineno));
        }
        ShotRecord rec;
        rec.member = static_cast<std::size_t>(fields[1] - 1);
        rec.n.resize(out.n_total);
        for (std::size_t i = 0; i < out.n_total; ++i) {
            long long v = fields[i + 2];
            if (v != 0 && v != 1) {
                throw std::runtime_error("occupation must be 0 or 1 at line " + std::to_string(lineno));
            }
            rec.n[i] = static_cast<uint8_t>(v);
        }
        out.records.push_back(std::move(rec));
    }
    return out;
}

ShotDataset read_dataset(const std::filesystem::path &path) {
    auto in = open_in(path);
    return read_dataset(in);
}

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

CsvWriter::CsvWriter(const std::filesystem::path &path)
    : out_(std::make_unique<std::ofstream>(open_out(path))) {
}

std::ofstream *CsvWriter::stream() {
    return out_.get();
}

void CsvWriter::header(const std::vector<std::string> &columns) {
    for (const auto &c : columns) {
        cell(c);
    }
    end_row();
}

CsvWriter &CsvWriter::cell(const std::string &value) {
    if (!first_) {
        *stream() << ',';
    }
    *stream() << value;
    first_ = false;
    return *this;
}

CsvWriter &CsvWriter::cell(double value) {
    return cell(format_double(value));
}

CsvWriter &CsvWriter::cell(long long value) {
    return cell(std::to_string(value));
}

void CsvWriter::end_row() {
    *stream() << '\n';
    first_ = true;
}

void write_json(const std::filesystem::path &path, const nlohmann::json &j) {
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

nlohmann::json read_json(const std::filesystem::path &path) {
    auto in = open_in(path);
    return nlohmann::json::parse(in);
}

}  // namespace gtomo
