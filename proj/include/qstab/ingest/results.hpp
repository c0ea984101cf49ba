// Copyright 2026 The qstab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qstab/bench/fit.hpp"
#include "qstab/bench/infidelity.hpp"
#include "qstab/circuits/circuit.hpp"
#include "qstab/core/error.hpp"
#include "qstab/core/format.hpp"
#include "qstab/qcap/qcap.hpp"

namespace qstab::ingest {

using bench::DecayFit;
using bench::DecayRecord;
using bench::InfidelityEstimate;
using qcap::QcapCurve;

inline constexpr std::string_view kDecayHeader = "pauli,m,circuit_index,expectation,shot_error";
inline constexpr std::string_view kFitHeader = "pauli,A,p,sigma_p";
inline constexpr std::string_view kCurveHeader = "source,steps,bound,sigma";
inline constexpr std::string_view kEstimateHeader = "source,target,day,epoch,e_F,sigma";

namespace detail {

using qstab::detail::require;

/// Rows of a headed CSV (no quoting; fields never contain commas).
class CsvReader {
 public:
  CsvReader(std::string_view text, std::string_view header, std::size_t columns) : columns_(columns) {
    std::size_t pos = 0;
    int line = 0;
    while (pos < text.size()) {
      std::size_t end = text.find('\n', pos);
      if (end == std::string_view::npos) end = text.size();
      std::string_view row = text.substr(pos, end - pos);
      if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
      pos = end + 1;
      ++line;
      if (line == 1) {
        if (row != header) throw ParseError(1, "schema mismatch: expected header '" + std::string(header) + "'");
        continue;
      }
      if (row.empty()) throw ParseError(line, "empty row");
      auto fields = circuits::detail::split_on(row, ',');
      if (fields.size() != columns_)
        throw ParseError(line, "expected " + std::to_string(columns_) + " fields, got " + std::to_string(fields.size()));
      rows_.push_back({line, std::vector<std::string>(fields.begin(), fields.end())});
    }
    if (line == 0) throw ParseError(1, "missing header '" + std::string(header) + "'");
  }

  struct Row {
    int line;
    std::vector<std::string> fields;

    double num(std::size_t i) const {
      try {
        return parse_double(fields[i]);
      } catch (const ValidationError& e) {
        throw ParseError(line, e.what());
      }
    }
    int integer(std::size_t i) const {
      try {
        return static_cast<int>(parse_int(fields[i]));
      } catch (const ValidationError& e) {
        throw ParseError(line, e.what());
      }
    }
    qsim::PauliString pauli(std::size_t i) const {
      try {
        return qsim::PauliString::parse(fields[i]);
      } catch (const ValidationError& e) {
        throw ParseError(line, e.what());
      }
    }
  };

  const std::vector<Row>& rows() const { return rows_; }

 private:
  std::size_t columns_;
  std::vector<Row> rows_;
};

inline void check_field(const std::string& s) {
  require(s.find_first_of(",\n\r") == std::string::npos, "CSV field may not contain separators: '" + s + "'");
}

}  // namespace detail

inline std::string decays_to_csv(const std::vector<DecayRecord>& rows) {
  std::ostringstream os;
  os << kDecayHeader << '\n';
  for (const auto& r : rows)
    os << r.pauli.str() << ',' << r.m << ',' << r.circuit_index << ',' << format_double(r.expectation) << ','
       << format_double(r.shot_error) << '\n';
  return os.str();
}

inline std::vector<DecayRecord> decays_from_csv(std::string_view text) {
  std::vector<DecayRecord> out;
  const detail::CsvReader csv(text, kDecayHeader, 5);
  for (const auto& r : csv.rows())
    out.push_back({r.pauli(0), r.integer(1), r.integer(2), r.num(3), r.num(4)});
  return out;
}

inline std::string fits_to_csv(const std::vector<DecayFit>& rows) {
  std::ostringstream os;
  os << kFitHeader << '\n';
  for (const auto& f : rows)
    os << f.pauli.str() << ',' << format_double(f.A) << ',' << format_double(f.p) << ',' << format_double(f.sigma_p)
       << '\n';
  return os.str();
}

inline std::vector<DecayFit> fits_from_csv(std::string_view text) {
  std::vector<DecayFit> out;
  const detail::CsvReader csv(text, kFitHeader, 4);
  for (const auto& r : csv.rows()) out.push_back({r.pauli(0), r.num(1), r.num(2), r.num(3)});
  return out;
}

/// One row per (curve, step); several curves may share a file.
inline std::string curves_to_csv(const std::vector<QcapCurve>& curves) {
  std::ostringstream os;
  os << kCurveHeader << '\n';
  for (const auto& c : curves) {
    qstab::detail::require(c.bound.size() == c.size() && c.sigma.size() == c.size(), "malformed curve");
    for (std::size_t i = 0; i < c.size(); ++i)
      os << bench::source_name(c.source) << ',' << c.steps[i] << ',' << format_double(c.bound[i]) << ','
         << format_double(c.sigma[i]) << '\n';
  }
  return os.str();
}

/// A new curve starts when the source changes or the step count does not increase.
inline std::vector<QcapCurve> curves_from_csv(std::string_view text) {
  std::vector<QcapCurve> out;
  const detail::CsvReader csv(text, kCurveHeader, 4);
  for (const auto& r : csv.rows()) {
    bench::Source src;
    try {
      src = bench::source_from_name(r.fields[0]);
    } catch (const ValidationError& e) {
      throw ParseError(r.line, e.what());
    }
    const int step = r.integer(1);
    if (out.empty() || out.back().source != src || out.back().steps.back() >= step) {
      out.emplace_back();
      out.back().source = src;
    }
    out.back().steps.push_back(step);
    out.back().bound.push_back(r.num(2));
    out.back().sigma.push_back(r.num(3));
  }
  return out;
}

inline std::string estimates_to_csv(const std::vector<InfidelityEstimate>& rows) {
  std::ostringstream os;
  os << kEstimateHeader << '\n';
  for (const auto& e : rows) {
    detail::check_field(e.target);
    detail::check_field(e.epoch);
    os << bench::source_name(e.source) << ',' << e.target << ',' << e.day << ',' << e.epoch << ','
       << format_double(e.e_F) << ',' << format_double(e.sigma) << '\n';
  }
  return os.str();
}

inline std::vector<InfidelityEstimate> estimates_from_csv(std::string_view text) {
  std::vector<InfidelityEstimate> out;
  const detail::CsvReader csv(text, kEstimateHeader, 6);
  for (const auto& r : csv.rows()) {
    InfidelityEstimate e;
    try {
      e.source = bench::source_from_name(r.fields[0]);
    } catch (const ValidationError& ex) {
      throw ParseError(r.line, ex.what());
    }
    e.target = r.fields[1];
    e.day = r.integer(2);
    e.epoch = r.fields[3];
    e.e_F = r.num(4);
    e.sigma = r.num(5);
    out.push_back(std::move(e));
  }
  return out;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string() + " for reading");
  std::ostringstream os;
  os << in.rdbuf();
  if (in.bad()) throw std::runtime_error("read failed: " + path.string());
  return os.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

inline void write_results(const std::filesystem::path& p, const std::vector<DecayRecord>& rows) { write_file(p, decays_to_csv(rows)); }
inline void write_results(const std::filesystem::path& p, const std::vector<DecayFit>& rows) { write_file(p, fits_to_csv(rows)); }
inline void write_results(const std::filesystem::path& p, const std::vector<QcapCurve>& rows) { write_file(p, curves_to_csv(rows)); }
inline void write_results(const std::filesystem::path& p, const std::vector<InfidelityEstimate>& rows) {
  write_file(p, estimates_to_csv(rows));
}

inline std::vector<DecayRecord> read_decays(const std::filesystem::path& p) { return decays_from_csv(read_file(p)); }
inline std::vector<DecayFit> read_fits(const std::filesystem::path& p) { return fits_from_csv(read_file(p)); }
inline std::vector<QcapCurve> read_curves(const std::filesystem::path& p) { return curves_from_csv(read_file(p)); }
inline std::vector<InfidelityEstimate> read_estimates(const std::filesystem::path& p) {
  return estimates_from_csv(read_file(p));
}

}  // namespace qstab::ingest
