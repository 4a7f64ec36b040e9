// Copyright 2026 The qdiscord Authors
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

// Text serialization of bipartite density matrices.
//
//   {
//     "format": "qdiscord-matrix",
//     "version": 1,
//     "dims": [N, M],
//     "entries": [[[re, im], ...], ...],   // NM rows of NM pairs
//     "metadata": {"family": "xstate", "x": 0.25, ...}
//   }
//
// Rows and columns follow |1_A 1_B>, ..., |1_A M_B>, |2_A 1_B>, ...: the A
// index varies slowest. Doubles are written with round-trip precision, so
// write -> read reproduces every entry bit for bit.

#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qdiscord/density.hpp"
#include "qdiscord/linalg.hpp"

namespace qdiscord {

struct MatrixFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MatrixFile {
    std::size_t dim_a = 0;
    std::size_t dim_b = 0;
    ComplexMatrix matrix;
    nlohmann::json metadata = nlohmann::json::object();

    /// Runs the density-matrix checks on the payload.
    BipartiteDensityMatrix state(double tol = kDefaultValidationTolerance) const {
        return validate(matrix, dim_a, dim_b, tol);
    }
};

inline constexpr const char *kMatrixFileFormat = "qdiscord-matrix";

inline nlohmann::json to_json(const MatrixFile &f) {
    nlohmann::json entries = nlohmann::json::array();
    for (std::size_t r = 0; r < f.matrix.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < f.matrix.cols(); ++c) {
            row.push_back({f.matrix(r, c).real(), f.matrix(r, c).imag()});
        }
        entries.push_back(std::move(row));
    }
    return {{"format", kMatrixFileFormat},
            {"version", 1},
            {"dims", {f.dim_a, f.dim_b}},
            {"entries", std::move(entries)},
            {"metadata", f.metadata}};
}

inline MatrixFile matrix_file_from_json(const nlohmann::json &j) {
    try {
        if (j.value("format", std::string{}) != kMatrixFileFormat) {
            throw MatrixFileError("matrix file: missing or unknown \"format\"");
        }
        const auto &dims = j.at("dims");
        if (!dims.is_array() || dims.size() != 2) {
            throw MatrixFileError("matrix file: \"dims\" must be [N, M]");
        }
        MatrixFile f;
        f.dim_a = dims.at(0).get<std::size_t>();
        f.dim_b = dims.at(1).get<std::size_t>();
        if (f.dim_a == 0 || f.dim_b == 0) {
            throw MatrixFileError("matrix file: dimensions must be positive");
        }
        const std::size_t d = f.dim_a * f.dim_b;
        const auto &entries = j.at("entries");
        if (!entries.is_array() || entries.size() != d) {
            throw MatrixFileError("matrix file: expected " + std::to_string(d) + " rows in \"entries\"");
        }
        std::vector<complex_t> values;
        values.reserve(d * d);
        for (const auto &row : entries) {
            if (!row.is_array() || row.size() != d) {
                throw MatrixFileError("matrix file: expected " + std::to_string(d) + " entries per row");
            }
            for (const auto &z : row) {
                if (!z.is_array() || z.size() != 2 || !z.at(0).is_number() || !z.at(1).is_number()) {
                    throw MatrixFileError("matrix file: entries must be [re, im] number pairs");
                }
                values.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
            }
        }
        f.matrix = ComplexMatrix(d, d, std::move(values));
        if (j.contains("metadata")) {
            f.metadata = j.at("metadata");
        }
        return f;
    } catch (const nlohmann::json::exception &e) {
        throw MatrixFileError(std::string("matrix file: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw MatrixFileError(std::string("matrix file: ") + e.what());
    }
}

inline std::string dump_matrix_file(const MatrixFile &f) { return to_json(f).dump(2) + "\n"; }

inline MatrixFile parse_matrix_file(std::istream &in) {
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw MatrixFileError(std::string("matrix file: ") + e.what());
    }
    return matrix_file_from_json(j);
}

/// "-" reads standard input.
inline MatrixFile read_matrix_file(const std::string &path) {
    if (path == "-") {
        return parse_matrix_file(std::cin);
    }
    std::ifstream in(path);
    if (!in) {
        throw MatrixFileError("cannot open " + path);
    }
    return parse_matrix_file(in);
}

/// "-" writes standard output.
inline void write_matrix_file(const MatrixFile &f, const std::string &path) {
    if (path == "-") {
        std::cout << dump_matrix_file(f);
        return;
    }
    std::ofstream out(path);
    if (!out) {
        throw MatrixFileError("cannot write " + path);
    }
    out << dump_matrix_file(f);
    if (!out) {
        throw MatrixFileError("write failed: " + path);
    }
}

inline MatrixFile to_matrix_file(const BipartiteDensityMatrix &rho, nlohmann::json metadata = nlohmann::json::object()) {
    return {rho.dim_a(), rho.dim_b(), rho.matrix(), std::move(metadata)};
}

} // namespace qdiscord
