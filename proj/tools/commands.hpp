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

// Subcommands of the `qdiscord` tool. Each command writes its report to the
// given streams and returns the process exit status:
//   0  success / zero discord / verdicts agree
//   1  nonzero discord / verdicts disagree / pointer residual too large
//   2  operational error (bad arguments, unreadable or invalid input)

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdiscord/qdiscord.hpp"

namespace qdiscord::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kError = 2 };

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Accepts plain decimals and multiples of pi: "0.25", "pi", "pi/4",
/// "3*pi/4", "2pi".
inline double parse_real(const std::string &text) {
    std::string s;
    for (std::size_t i = 0; i < text.size(); ++i) {
        // UTF-8 lowercase pi (U+03C0).
        if (static_cast<unsigned char>(text[i]) == 0xCF && i + 1 < text.size() &&
            static_cast<unsigned char>(text[i + 1]) == 0x80) {
            s += "pi";
            ++i;
        } else if (text[i] != ' ') {
            s += text[i];
        }
    }
    auto number = [&](const std::string &part) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &used);
        } catch (const std::exception &) {
            throw UsageError("not a number: '" + text + "'");
        }
        if (used != part.size()) {
            throw UsageError("not a number: '" + text + "'");
        }
        return v;
    };
    const auto pi_at = s.find("pi");
    if (pi_at == std::string::npos) {
        return number(s);
    }
    std::string head = s.substr(0, pi_at);
    std::string tail = s.substr(pi_at + 2);
    double factor = 1.0;
    if (!head.empty()) {
        if (head.back() == '*') {
            head.pop_back();
        }
        factor = head == "-" ? -1.0 : number(head);
    }
    double divisor = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/') {
            throw UsageError("not a number: '" + text + "'");
        }
        divisor = number(tail.substr(1));
    }
    return factor * std::numbers::pi / divisor;
}

/// Splits "key=value" tokens.
inline std::map<std::string, std::string> parse_params(const std::vector<std::string> &tokens) {
    std::map<std::string, std::string> out;
    for (const auto &t : tokens) {
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw UsageError("expected key=value, got '" + t + "'");
        }
        out[t.substr(0, eq)] = t.substr(eq + 1);
    }
    return out;
}

inline std::string format_real(double v, int precision = 17) {
    std::ostringstream ss;
    ss << std::setprecision(precision) << v;
    return ss.str();
}

inline std::string format_complex(complex_t z, int precision = 6) {
    std::ostringstream ss;
    ss << std::setprecision(precision) << z.real();
    if (z.imag() != 0.0) {
        ss << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    }
    return ss.str();
}

inline nlohmann::json matrix_to_json(const ComplexMatrix &m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            row.push_back({m(r, c).real(), m(r, c).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// ---------------------------------------------------------------- gen

struct GenOptions {
    std::string family;
    std::vector<std::string> params;
    std::optional<std::uint64_t> seed;
    std::string out = "-";
};

namespace detail {

class ParamReader {
  public:
    explicit ParamReader(std::map<std::string, std::string> p) : params_(std::move(p)) {}

    double real(const std::string &key) {
        const auto it = params_.find(key);
        if (it == params_.end()) {
            throw UsageError("missing parameter " + key + "=...");
        }
        used_.push_back(key);
        return parse_real(it->second);
    }

    std::size_t count(const std::string &key, std::size_t fallback) {
        const auto it = params_.find(key);
        if (it == params_.end()) {
            return fallback;
        }
        used_.push_back(key);
        const double v = parse_real(it->second);
        if (v < 1.0 || v != std::floor(v)) {
            throw UsageError(key + " must be a positive integer");
        }
        return static_cast<std::size_t>(v);
    }

    std::optional<std::uint64_t> seed() {
        const auto it = params_.find("seed");
        if (it == params_.end()) {
            return std::nullopt;
        }
        used_.push_back("seed");
        try {
            std::size_t used = 0;
            const auto v = std::stoull(it->second, &used);
            if (used != it->second.size()) {
                throw UsageError("seed must be a non-negative integer");
            }
            return v;
        } catch (const std::logic_error &) {
            throw UsageError("seed must be a non-negative integer");
        }
    }

    void require_all_used() const {
        for (const auto &[k, v] : params_) {
            if (std::find(used_.begin(), used_.end(), k) == used_.end()) {
                throw UsageError("unknown parameter '" + k + "'");
            }
        }
    }

  private:
    std::map<std::string, std::string> params_;
    std::vector<std::string> used_;
};

constexpr std::uint64_t kSeedStride = 0x9E3779B97F4A7C15ULL;

} // namespace detail

/// Builds the requested state and its metadata without touching the disk.
inline MatrixFile generate(const GenOptions &opt) {
    detail::ParamReader p(parse_params(opt.params));
    nlohmann::json meta = {{"family", opt.family}};
    auto seed_value = [&]() {
        auto s = p.seed();
        if (!s) {
            s = opt.seed;
        }
        const std::uint64_t v = s.value_or(1);
        meta["seed"] = v;
        return v;
    };

    std::optional<BipartiteDensityMatrix> rho;
    if (opt.family == "xstate") {
        const double x = p.real("x");
        meta["x"] = x;
        rho = xstate(x);
    } else if (opt.family == "photon") {
        const double theta = p.real("theta");
        meta["theta"] = theta;
        rho = photon_pair_state(theta);
    } else if (opt.family == "bell") {
        rho = bell_state();
    } else if (opt.family == "random") {
        const auto na = p.count("dim_a", 2);
        const auto nb = p.count("dim_b", 2);
        const auto rank = p.count("rank", na * nb);
        if (rank > na * nb) {
            throw UsageError("rank must not exceed dim_a * dim_b");
        }
        meta["dim_a"] = na;
        meta["dim_b"] = nb;
        meta["rank"] = rank;
        rho = random_state(na, nb, rank, seed_value());
    } else if (opt.family == "product") {
        const auto na = p.count("dim_a", 2);
        const auto nb = p.count("dim_b", 2);
        meta["dim_a"] = na;
        meta["dim_b"] = nb;
        const auto s = seed_value();
        rho = product_state(random_density(na, na, s), random_density(nb, nb, s + detail::kSeedStride));
    } else if (opt.family == "pointer") {
        const auto na = p.count("dim_a", 2);
        const auto nb = p.count("dim_b", 2);
        meta["dim_a"] = na;
        meta["dim_b"] = nb;
        const auto s = seed_value();
        rho = pointer_state(random_pointer_coefficients(na, nb, s), random_unitary(nb, s + detail::kSeedStride));
    } else {
        throw UsageError("unknown family '" + opt.family + "' (xstate, pointer, photon, product, random, bell)");
    }
    p.require_all_used();
    return to_matrix_file(*rho, std::move(meta));
}

inline int cmd_gen(const GenOptions &opt, std::ostream &out, std::ostream &err) {
    try {
        const MatrixFile f = generate(opt);
        if (opt.out == "-") {
            out << dump_matrix_file(f);
        } else {
            write_matrix_file(f, opt.out);
        }
        return kOk;
    } catch (const std::exception &e) {
        err << "gen: " << e.what() << "\n";
        return kError;
    }
}

// ---------------------------------------------------------------- check

struct CheckOptions {
    std::string in = "-";
    double tol = kDefaultCriterionTolerance;
    bool machine = false;
    bool apparatus_a = false;
    std::string report;
};

inline std::string block_name(const BlockIndex &b) {
    return "(" + std::to_string(b.i + 1) + "," + std::to_string(b.j + 1) + ")";
}

/// Loads and validates; on failure reports to `err` and returns nullopt.
inline std::optional<BipartiteDensityMatrix> load_state(const std::string &path, std::ostream &err, const char *who,
                                                        MatrixFile *file_out = nullptr) {
    try {
        MatrixFile f = read_matrix_file(path);
        auto rho = f.state();
        if (file_out) {
            *file_out = std::move(f);
        }
        return rho;
    } catch (const InvalidDensityMatrix &e) {
        err << who << ": " << e.what() << "\n";
    } catch (const std::exception &e) {
        err << who << ": " << e.what() << "\n";
    }
    return std::nullopt;
}

inline int write_report(const std::string &text, const std::string &path, std::ostream &out, std::ostream &err,
                        const char *who) {
    out << text;
    if (!path.empty()) {
        std::ofstream f(path);
        f << text;
        if (!f) {
            err << who << ": cannot write report " << path << "\n";
            return kError;
        }
    }
    return kOk;
}

inline int cmd_check(const CheckOptions &opt, std::ostream &out, std::ostream &err) {
    auto loaded = load_state(opt.in, err, "check");
    if (!loaded) {
        return kError;
    }
    const BipartiteDensityMatrix rho = opt.apparatus_a ? swap_subsystems(*loaded) : *loaded;
    const DiscordVerdict v = zero_discord_verdict(rho, opt.tol);
    const std::size_t n = rho.dim_a();
    const std::size_t m = rho.dim_b();

    std::ostringstream r;
    if (opt.machine) {
        r << "is_zero=" << (v.is_zero ? "true" : "false") << "\n"
          << "apparatus=" << (opt.apparatus_a ? "A" : "B") << "\n"
          << "dims=" << n << "," << m << "\n"
          << "blocks=" << n * n << "\n"
          << "step1_partition=pass\n"
          << "step2_normal=" << (v.all_normal ? "pass" : "fail") << "\n"
          << "step3_commute=" << (v.all_commute ? "pass" : "fail") << "\n"
          << "normality_defect=" << format_real(v.max_normality_defect) << "\n"
          << "worst_normal_block=" << v.worst_normal_block.i + 1 << "," << v.worst_normal_block.j + 1 << "\n"
          << "commutation_defect=" << format_real(v.max_commutation_defect) << "\n"
          << "worst_pair=" << v.worst_pair.first.i + 1 << "," << v.worst_pair.first.j + 1 << ";"
          << v.worst_pair.second.i + 1 << "," << v.worst_pair.second.j + 1 << "\n"
          << "adjoint_commutation_defect=" << format_real(v.max_adjoint_commutation_defect) << "\n"
          << "tolerance=" << format_real(v.tolerance_used) << "\n";
    } else {
        r << std::scientific << std::setprecision(3);
        r << "state " << n << "x" << m << ", apparatus " << (opt.apparatus_a ? "A" : "B") << ", tolerance "
          << v.tolerance_used << "\n";
        r << "  (1) partition into " << n * n << " blocks of " << m << "x" << m << "          done\n";
        r << "  (2) every block normal          max defect " << v.max_normality_defect << "  "
          << (v.all_normal ? "PASS" : "FAIL");
        if (!v.all_normal) {
            r << "  worst block " << block_name(v.worst_normal_block);
        }
        r << "\n";
        r << "  (3) blocks commute pairwise     max defect " << v.max_commutation_defect << "  "
          << (v.all_commute ? "PASS" : "FAIL");
        if (!v.all_commute) {
            r << "  worst pair " << block_name(v.worst_pair.first) << " vs " << block_name(v.worst_pair.second);
        }
        r << "\n";
        r << "verdict: " << (v.is_zero ? "zero discord" : "nonzero discord") << "\n";
    }
    if (write_report(r.str(), opt.report, out, err, "check") != kOk) {
        return kError;
    }
    return v.is_zero ? kOk : kNegative;
}

// ---------------------------------------------------------------- pointer

struct PointerOptions {
    std::string in = "-";
    double tol = kDefaultCriterionTolerance;
    bool machine = false;
    std::string report;
};

inline int cmd_pointer(const PointerOptions &opt, std::ostream &out, std::ostream &err) {
    auto loaded = load_state(opt.in, err, "pointer");
    if (!loaded) {
        return kError;
    }
    const BipartiteDensityMatrix &rho = *loaded;
    PointerBasis pb;
    try {
        pb = pointer_basis(rho, opt.tol);
    } catch (const NonzeroDiscord &e) {
        err << "pointer: " << e.what() << "\n";
        return kNegative;
    } catch (const std::exception &e) {
        err << "pointer: " << e.what() << "\n";
        return kNegative;
    }
    const double residual = verify_pointer(rho, pb);
    const bool ok = residual <= opt.tol && pb.reduced_state_residual <= opt.tol;
    const std::size_t n = rho.dim_a();
    const std::size_t m = rho.dim_b();

    std::ostringstream r;
    if (opt.machine) {
        nlohmann::json coeffs = nlohmann::json::array();
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                for (std::size_t k = 0; k < m; ++k) {
                    coeffs.push_back({i + 1, j + 1, k + 1, pb.c(i, j, k).real(), pb.c(i, j, k).imag()});
                }
            }
        }
        r << "unitary=" << matrix_to_json(pb.unitary).dump() << "\n"
          << "coefficients=" << coeffs.dump() << "\n"
          << "residual=" << format_real(residual) << "\n"
          << "reduced_state_offdiag=" << format_real(pb.reduced_state_residual) << "\n"
          << "ok=" << (ok ? "true" : "false") << "\n";
    } else {
        r << "pointer basis U (columns are |k'_B>):\n";
        for (std::size_t row = 0; row < m; ++row) {
            r << "  ";
            for (std::size_t c = 0; c < m; ++c) {
                r << std::setw(22) << format_complex(pb.unitary(row, c));
            }
            r << "\n";
        }
        r << "projectors:\n";
        for (std::size_t k = 0; k < m; ++k) {
            r << "  |" << k + 1 << "'> =";
            const char *sep = " ";
            for (std::size_t b = 0; b < m; ++b) {
                const complex_t z = pb.unitary(b, k);
                if (std::abs(z) < 1e-15) {
                    continue;
                }
                r << sep << "(" << format_complex(z) << ")|" << b + 1 << ">";
                sep = " + ";
            }
            r << "\n";
        }
        r << "coefficients C(i,j,k):\n";
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                r << "  (" << i + 1 << "," << j + 1 << ")";
                for (std::size_t k = 0; k < m; ++k) {
                    r << "  " << format_complex(pb.c(i, j, k));
                }
                r << "\n";
            }
        }
        r << std::scientific << std::setprecision(3);
        r << "reconstruction residual " << residual << (residual <= opt.tol ? "  PASS" : "  FAIL") << "\n";
        r << "U^dagger rho_B U off-diagonal " << pb.reduced_state_residual
          << (pb.reduced_state_residual <= opt.tol ? "  PASS" : "  FAIL") << "\n";
    }
    if (write_report(r.str(), opt.report, out, err, "pointer") != kOk) {
        return kError;
    }
    return ok ? kOk : kNegative;
}

// ---------------------------------------------------------------- discord

struct DiscordOptions {
    std::string in = "-";
    std::string method = "grid";
    std::optional<std::string> theta;
    std::optional<std::string> phi;
    GridSpec grid;
    int refine = kDefaultRefineSteps;
    bool machine = false;
};

inline int cmd_discord(const DiscordOptions &opt, std::ostream &out, std::ostream &err) {
    MatrixFile file;
    auto loaded = load_state(opt.in, err, "discord", &file);
    if (!loaded) {
        return kError;
    }
    const BipartiteDensityMatrix &rho = *loaded;
    std::ostringstream r;
    try {
        if (opt.method == "closed") {
            if (file.metadata.value("family", std::string{}) != "xstate" || !file.metadata.contains("x") ||
                !file.metadata["x"].is_number()) {
                throw UsageError("--method closed needs a file generated from the xstate family (metadata x)");
            }
            const double x = file.metadata["x"].get<double>();
            if (frobenius_norm(rho.matrix() - xstate(x).matrix()) > 1e-12) {
                throw UsageError("matrix entries do not match the xstate metadata");
            }
            const double d = xstate_discord_closed_form(x);
            if (opt.machine) {
                r << "method=closed\nx=" << format_real(x) << "\ndiscord=" << format_real(d) << "\n";
            } else {
                r << "X-state x = " << x << "\ndiscord (closed form) = " << std::setprecision(12) << d << " bits\n";
            }
        } else if (opt.method == "grid") {
            if (rho.dim_b() != 2) {
                throw UsageError("--method grid requires a qubit apparatus (M = 2)");
            }
            const auto est = minimize_discord_qubit(rho, opt.grid, opt.refine);
            if (opt.machine) {
                r << "method=grid\ndiscord=" << format_real(est.value) << "\ntheta=" << format_real(est.argmin.theta)
                  << "\nphi=" << format_real(est.argmin.phi) << "\ngrid=" << est.grid.n_theta << "x"
                  << est.grid.n_phi << "\nrefinement_iterations=" << est.refinement_iterations << "\n";
            } else {
                r << std::setprecision(12) << "discord (minimized over qubit projectors) = " << est.value
                  << " bits\n  argmin theta = " << est.argmin.theta << ", phi = " << est.argmin.phi << "\n  grid "
                  << est.grid.n_theta << "x" << est.grid.n_phi << ", " << est.refinement_iterations
                  << " refinement halvings\n";
            }
        } else if (opt.method == "basis") {
            if (rho.dim_b() != 2) {
                throw UsageError("--method basis requires a qubit apparatus (M = 2)");
            }
            if (!opt.theta || !opt.phi) {
                throw UsageError("--method basis requires --theta and --phi");
            }
            const QubitProjectorParams p{parse_real(*opt.theta), parse_real(*opt.phi)};
            const double d = discord_for_basis(rho, qubit_basis(p));
            if (opt.machine) {
                r << "method=basis\ntheta=" << format_real(p.theta) << "\nphi=" << format_real(p.phi)
                  << "\ndiscord=" << format_real(d) << "\n";
            } else {
                r << std::setprecision(12) << "discord for basis theta = " << p.theta << ", phi = " << p.phi << ": "
                  << d << " bits\n";
            }
        } else {
            throw UsageError("unknown method '" + opt.method + "' (closed, grid, basis)");
        }
    } catch (const std::exception &e) {
        err << "discord: " << e.what() << "\n";
        return kError;
    }
    out << r.str();
    return kOk;
}

// ---------------------------------------------------------------- sweep

struct SweepOptions {
    int points = 101;
    std::string out = "-";
    double tol = kDefaultCriterionTolerance;
    GridSpec grid;
    int refine = kDefaultRefineSteps;
};

struct SweepRow {
    double x = 0.0;
    double closed_form = 0.0;
    double grid_discord = 0.0;
    bool is_zero = false;
    double normality_defect = 0.0;
    double commutation_defect = 0.0;
    double disturbance = 0.0;
};

inline SweepRow sweep_row(double x, const SweepOptions &opt) {
    const auto rho = xstate(x);
    const auto v = zero_discord_verdict(rho, opt.tol);
    return {x,
            xstate_discord_closed_form(x),
            minimize_discord_qubit(rho, opt.grid, opt.refine).value,
            v.is_zero,
            v.max_normality_defect,
            v.max_commutation_defect,
            disturbance_min(rho, opt.grid, opt.refine)};
}

/// Rows are computed concurrently and emitted in increasing x.
inline std::vector<SweepRow> sweep_xstate(const SweepOptions &opt) {
    if (opt.points < 3) {
        throw UsageError("sweep needs at least 3 points");
    }
    std::vector<std::future<SweepRow>> jobs;
    jobs.reserve(static_cast<std::size_t>(opt.points));
    const int last = opt.points - 1;
    for (int i = 0; i < opt.points; ++i) {
        // i / last * 0.5 keeps 0, 0.25 (odd point counts) and 0.5 exact.
        const double x = 0.5 * static_cast<double>(i) / static_cast<double>(last);
        jobs.push_back(std::async(std::launch::async, [x, &opt] { return sweep_row(x, opt); }));
    }
    std::vector<SweepRow> rows;
    rows.reserve(jobs.size());
    for (auto &j : jobs) {
        rows.push_back(j.get());
    }
    return rows;
}

inline void write_sweep_csv(const std::vector<SweepRow> &rows, std::ostream &csv) {
    csv << "x,closed_form_discord,grid_discord,criterion_is_zero,normality_defect,commutation_defect,"
           "disturbance_min\n";
    csv << std::setprecision(15);
    for (const auto &row : rows) {
        csv << row.x << "," << row.closed_form << "," << row.grid_discord << "," << (row.is_zero ? "true" : "false")
            << "," << row.normality_defect << "," << row.commutation_defect << "," << row.disturbance << "\n";
    }
}

inline int cmd_sweep(const SweepOptions &opt, std::ostream &out, std::ostream &err) {
    try {
        const auto rows = sweep_xstate(opt);
        if (opt.out == "-") {
            write_sweep_csv(rows, out);
        } else {
            std::ofstream f(opt.out);
            write_sweep_csv(rows, f);
            if (!f) {
                throw std::runtime_error("cannot write " + opt.out);
            }
        }
        return kOk;
    } catch (const std::exception &e) {
        err << "sweep: " << e.what() << "\n";
        return kError;
    }
}

// ---------------------------------------------------------------- ancilla

struct AncillaOptions {
    std::string in = "-";
    std::size_t ancilla_dim = 2;
    std::uint64_t seed = 1;
    double tol = kDefaultCriterionTolerance;
    bool machine = false;
};

inline int cmd_ancilla(const AncillaOptions &opt, std::ostream &out, std::ostream &err) {
    auto loaded = load_state(opt.in, err, "ancilla");
    if (!loaded) {
        return kError;
    }
    if (opt.ancilla_dim < 1) {
        err << "ancilla: ancilla dimension must be at least 1\n";
        return kError;
    }
    const ComplexMatrix ancilla = random_density(opt.ancilla_dim, opt.ancilla_dim, opt.seed);
    const AncillaVerdicts v = extend_with_ancilla(*loaded, ancilla, opt.tol);
    auto word = [](bool zero) { return zero ? "zero" : "nonzero"; };
    if (opt.machine) {
        out << "original_is_zero=" << (v.original.is_zero ? "true" : "false") << "\n"
            << "extended_is_zero=" << (v.extended.is_zero ? "true" : "false") << "\n"
            << "original_commutation_defect=" << format_real(v.original.max_commutation_defect) << "\n"
            << "extended_commutation_defect=" << format_real(v.extended.max_commutation_defect) << "\n"
            << "ancilla_dim=" << opt.ancilla_dim << "\nseed=" << opt.seed << "\n"
            << "agree=" << (v.agree() ? "true" : "false") << "\n";
    } else {
        out << "rho_AB:      " << word(v.original.is_zero) << " discord\n"
            << "rho_AB (x) rho_C (ancilla dim " << opt.ancilla_dim << ", seed " << opt.seed
            << "): " << word(v.extended.is_zero) << " discord\n"
            << (v.agree() ? "verdicts agree\n" : "verdicts DISAGREE\n");
    }
    return v.agree() ? kOk : kNegative;
}

// ---------------------------------------------------------------- dispatch

/// Parses argv and runs one subcommand.
inline int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Zero-discord criterion, pointer bases and discord for bipartite density matrices", "qdiscord"};
    app.require_subcommand(1);

    GenOptions gen;
    std::uint64_t gen_seed = 0;
    auto *gen_cmd = app.add_subcommand("gen", "Generate a state file");
    gen_cmd->add_option("family", gen.family, "xstate | pointer | photon | product | random | bell")->required();
    gen_cmd->add_option("params", gen.params, "key=value parameters (x=, theta=, dim_a=, dim_b=, rank=, seed=)");
    auto *gen_seed_opt = gen_cmd->add_option("--seed", gen_seed, "Seed for random families");
    gen_cmd->add_option("--out,-o", gen.out, "Output path ('-' for stdout)");

    CheckOptions check;
    std::string check_side = "b";
    auto *check_cmd = app.add_subcommand("check", "Run the zero-discord criterion");
    check_cmd->add_option("input", check.in, "State file ('-' for stdin)");
    check_cmd->add_option("--tol", check.tol, "Relative defect tolerance")->capture_default_str();
    check_cmd->add_flag("--machine", check.machine, "key=value output");
    check_cmd->add_option("--apparatus", check_side, "Measured subsystem: b (default) or a")
        ->check(CLI::IsMember({"a", "b", "A", "B"}));
    check_cmd->add_option("--out,-o", check.report, "Also write the report to this file");

    PointerOptions pointer;
    auto *pointer_cmd = app.add_subcommand("pointer", "Extract the non-disturbing basis of a zero-discord state");
    pointer_cmd->add_option("input", pointer.in, "State file ('-' for stdin)");
    pointer_cmd->add_option("--tol", pointer.tol, "Tolerance")->capture_default_str();
    pointer_cmd->add_flag("--machine", pointer.machine, "key=value output");
    pointer_cmd->add_option("--out,-o", pointer.report, "Also write the report to this file");

    DiscordOptions discord;
    auto *discord_cmd = app.add_subcommand("discord", "Compute quantum discord");
    discord_cmd->add_option("input", discord.in, "State file ('-' for stdin)");
    discord_cmd->add_option("--method", discord.method, "closed | grid | basis")->capture_default_str();
    discord_cmd->add_option("--theta", discord.theta, "Bloch polar angle for --method basis");
    discord_cmd->add_option("--phi", discord.phi, "Bloch azimuth for --method basis");
    discord_cmd->add_option("--n-theta", discord.grid.n_theta, "Grid points in theta")->capture_default_str();
    discord_cmd->add_option("--n-phi", discord.grid.n_phi, "Grid points in phi")->capture_default_str();
    discord_cmd->add_option("--refine", discord.refine, "Refinement halvings")->capture_default_str();
    discord_cmd->add_flag("--machine", discord.machine, "key=value output");

    SweepOptions sweep;
    std::string sweep_family = "xstate";
    auto *sweep_cmd = app.add_subcommand("sweep", "Criterion vs closed form vs oracle over the X-state family");
    sweep_cmd->add_option("family", sweep_family, "Only 'xstate' is supported")->check(CLI::IsMember({"xstate"}));
    sweep_cmd->add_option("--points", sweep.points, "Number of x values in [0, 0.5]")->capture_default_str();
    sweep_cmd->add_option("--out,-o", sweep.out, "CSV path ('-' for stdout)");
    sweep_cmd->add_option("--tol", sweep.tol, "Criterion tolerance")->capture_default_str();
    sweep_cmd->add_option("--n-theta", sweep.grid.n_theta, "Grid points in theta")->capture_default_str();
    sweep_cmd->add_option("--n-phi", sweep.grid.n_phi, "Grid points in phi")->capture_default_str();
    sweep_cmd->add_option("--refine", sweep.refine, "Refinement halvings")->capture_default_str();

    AncillaOptions ancilla;
    auto *ancilla_cmd = app.add_subcommand("ancilla", "Check verdict invariance under attaching an ancilla to B");
    ancilla_cmd->add_option("input", ancilla.in, "State file ('-' for stdin)");
    ancilla_cmd->add_option("--ancilla-dim", ancilla.ancilla_dim, "Ancilla dimension")->capture_default_str();
    ancilla_cmd->add_option("--seed", ancilla.seed, "Seed of the random ancilla state")->capture_default_str();
    ancilla_cmd->add_option("--tol", ancilla.tol, "Criterion tolerance")->capture_default_str();
    ancilla_cmd->add_flag("--machine", ancilla.machine, "key=value output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kError;
    }

    if (*gen_cmd) {
        if (*gen_seed_opt) {
            gen.seed = gen_seed;
        }
        return cmd_gen(gen, out, err);
    }
    if (*check_cmd) {
        check.apparatus_a = check_side == "a" || check_side == "A";
        return cmd_check(check, out, err);
    }
    if (*pointer_cmd) {
        return cmd_pointer(pointer, out, err);
    }
    if (*discord_cmd) {
        return cmd_discord(discord, out, err);
    }
    if (*sweep_cmd) {
        return cmd_sweep(sweep, out, err);
    }
    if (*ancilla_cmd) {
        return cmd_ancilla(ancilla, out, err);
    }
    return kError;
}

} // namespace qdiscord::cli
