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

#ifndef GTOMO_IO_H
#define GTOMO_IO_H

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "gtomo/experiment.h"
#include "gtomo/gaussian.h"

namespace gtomo {

inline constexpr int kFormatVersion = 1;

// Binary matrix container: "GTM1", u32 rows, u32 cols, u8 dtype
// (0 = f64, 1 = interleaved complex f64), little-endian row-major payload.
void write_matrix(const std::filesystem::path &path, const RealMatrix &m);
void write_matrix(const std::filesystem::path &path, const ComplexMatrix &m);
void write_matrix(std::ostream &out, const RealMatrix &m);
void write_matrix(std::ostream &out, const ComplexMatrix &m);

/// Reads either dtype; real files load with zero imaginary part.
ComplexMatrix read_complex_matrix(const std::filesystem::path &path);
ComplexMatrix read_complex_matrix(std::istream &in);
/// Throws std::runtime_error for complex payloads.
RealMatrix read_real_matrix(const std::filesystem::path &path);
RealMatrix read_real_matrix(std::istream &in);

/// Dataset CSV: a "# " line holding a JSON header, then r,s,n_0,...
/// with s one-based.
void write_dataset(const std::filesystem::path &path, const ShotDataset &dataset, const nlohmann::json &extra = {});
void write_dataset(std::ostream &out, const ShotDataset &dataset, const nlohmann::json &extra = {});
ShotDataset read_dataset(const std::filesystem::path &path);
ShotDataset read_dataset(std::istream &in);

/// Minimal CSV table writer; doubles use round-trip precision.
class CsvWriter {
   public:
    explicit CsvWriter(const std::filesystem::path &path);
    void header(const std::vector<std::string> &columns);
    CsvWriter &cell(const std::string &value);
    CsvWriter &cell(double value);
    CsvWriter &cell(long long value);
    void end_row();

   private:
    std::ofstream *stream();
    std::unique_ptr<std::ofstream> out_;
    bool first_ = true;
};

std::string format_double(double v);

void write_json(const std::filesystem::path &path, const nlohmann::json &j);
nlohmann::json read_json(const std::filesystem::path &path);

}  // namespace gtomo

#endif
