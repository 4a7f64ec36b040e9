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

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qdiscord {

using complex_t = std::complex<double>;

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct NotHermitian : std::domain_error {
    double defect;
    NotHermitian(const std::string &what, double defect) : std::domain_error(what), defect(defect) {}
};

struct NoConvergence : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense row-major complex matrix. Sizes here are small (tens of rows), so
/// every operation is a plain loop over contiguous storage.
class ComplexMatrix {
  public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<complex_t> entries)
        : rows_(rows), cols_(cols), data_(std::move(entries)) {
        if (data_.size() != rows_ * cols_) {
            throw DimensionMismatch("ComplexMatrix: entry count does not match rows*cols");
        }
        for (const auto &z : data_) {
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
                throw std::invalid_argument("ComplexMatrix: non-finite entry");
            }
        }
    }

    ComplexMatrix(std::initializer_list<std::initializer_list<complex_t>> rows) {
        rows_ = rows.size();
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto &r : rows) {
            if (r.size() != cols_) {
                throw DimensionMismatch("ComplexMatrix: ragged initializer");
            }
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static ComplexMatrix zeros(std::size_t rows, std::size_t cols) { return ComplexMatrix(rows, cols); }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    static ComplexMatrix diagonal(std::span<const complex_t> d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) {
            m(i, i) = d[i];
        }
        return m;
    }

    static ComplexMatrix diagonal(std::initializer_list<complex_t> d) {
        return diagonal(std::span<const complex_t>(d.begin(), d.size()));
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    complex_t &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const complex_t &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const complex_t> entries() const { return data_; }
    std::span<complex_t> entries() { return data_; }

    ComplexMatrix column(std::size_t c) const {
        ComplexMatrix v(rows_, 1);
        for (std::size_t r = 0; r < rows_; ++r) {
            v(r, 0) = (*this)(r, c);
        }
        return v;
    }

    /// Columns [begin, end) as a rows x (end - begin) matrix.
    ComplexMatrix columns(std::size_t begin, std::size_t end) const {
        ComplexMatrix v(rows_, end - begin);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = begin; c < end; ++c) {
                v(r, c - begin) = (*this)(r, c);
            }
        }
        return v;
    }

    void set_columns(std::size_t begin, const ComplexMatrix &src) {
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < src.cols(); ++c) {
                (*this)(r, begin + c) = src(r, c);
            }
        }
    }

    ComplexMatrix &operator+=(const ComplexMatrix &other) {
        require_same_shape(other, "operator+=");
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] += other.data_[k];
        }
        return *this;
    }

    ComplexMatrix &operator-=(const ComplexMatrix &other) {
        require_same_shape(other, "operator-=");
        for (std::size_t k = 0; k < data_.size(); ++k) {
            data_[k] -= other.data_[k];
        }
        return *this;
    }

    ComplexMatrix &operator*=(complex_t s) {
        for (auto &z : data_) {
            z *= s;
        }
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, complex_t s) { return a *= s; }
    friend ComplexMatrix operator*(complex_t s, ComplexMatrix a) { return a *= s; }

    friend bool operator==(const ComplexMatrix &, const ComplexMatrix &) = default;

  private:
    void require_same_shape(const ComplexMatrix &other, const char *op) const {
        if (rows_ != other.rows_ || cols_ != other.cols_) {
            std::ostringstream ss;
            ss << "ComplexMatrix::" << op << ": shape " << rows_ << "x" << cols_ << " vs " << other.rows_ << "x"
               << other.cols_;
            throw DimensionMismatch(ss.str());
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<complex_t> data_;
};

inline ComplexMatrix adjoint(const ComplexMatrix &a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            out(c, r) = std::conj(a(r, c));
        }
    }
    return out;
}

inline ComplexMatrix matmul(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows()) {
        std::ostringstream ss;
        ss << "matmul: inner dimensions " << a.cols() << " and " << b.rows() << " differ";
        throw DimensionMismatch(ss.str());
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const complex_t aik = a(i, k);
            if (aik == complex_t{}) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

/// A B - B A.
inline ComplexMatrix commutator(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (!a.is_square() || !b.is_square() || a.rows() != b.rows()) {
        throw DimensionMismatch("commutator: operands must be square and of equal size");
    }
    return matmul(a, b) - matmul(b, a);
}

inline double frobenius_norm(const ComplexMatrix &a) {
    double acc = 0.0;
    for (const auto &z : a.entries()) {
        acc += std::norm(z);
    }
    return std::sqrt(acc);
}

/// Frobenius mass of everything off the main diagonal.
inline double off_diagonal_norm(const ComplexMatrix &a) {
    double acc = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (r != c) {
                acc += std::norm(a(r, c));
            }
        }
    }
    return std::sqrt(acc);
}

inline complex_t trace(const ComplexMatrix &a) {
    complex_t t{};
    for (std::size_t i = 0; i < std::min(a.rows(), a.cols()); ++i) {
        t += a(i, i);
    }
    return t;
}

/// Kronecker product; the left factor indexes the slower-varying subsystem.
inline ComplexMatrix tensor_product(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar) {
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const complex_t s = a(ar, ac);
            for (std::size_t br = 0; br < b.rows(); ++br) {
                for (std::size_t bc = 0; bc < b.cols(); ++bc) {
                    out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
                }
            }
        }
    }
    return out;
}

/// A B A^dagger.
inline ComplexMatrix conjugate_by(const ComplexMatrix &a, const ComplexMatrix &b) {
    return matmul(matmul(a, b), adjoint(a));
}

/// ||A^dagger A - I||_F.
inline double unitarity_defect(const ComplexMatrix &u) {
    if (!u.is_square()) {
        return std::numeric_limits<double>::infinity();
    }
    return frobenius_norm(matmul(adjoint(u), u) - ComplexMatrix::identity(u.rows()));
}

namespace detail {

/// Scale column c so that its largest-modulus entry is real positive. Ties
/// (within 1e-10 relative) resolve to the lowest row index.
inline void fix_column_phase(ComplexMatrix &v, std::size_t c) {
    double best = 0.0;
    for (std::size_t r = 0; r < v.rows(); ++r) {
        best = std::max(best, std::abs(v(r, c)));
    }
    if (best == 0.0) {
        return;
    }
    for (std::size_t r = 0; r < v.rows(); ++r) {
        const double m = std::abs(v(r, c));
        if (m >= best * (1.0 - 1e-10)) {
            const complex_t phase = std::conj(v(r, c)) / m;
            for (std::size_t k = 0; k < v.rows(); ++k) {
                v(k, c) *= phase;
            }
            v(r, c) = m;
            return;
        }
    }
}

} // namespace detail

struct HermitianEigenResult {
    std::vector<double> eigenvalues; // descending
    ComplexMatrix eigenvectors;      // column k pairs with eigenvalues[k]
    int sweeps = 0;
};

constexpr int kMaxJacobiSweeps = 100;
constexpr double kJacobiOffDiagonalTolerance = 1e-14;

/// Cyclic complex Jacobi. Stops when the off-diagonal Frobenius mass drops
/// to 1e-14 ||H||_F; throws NoConvergence after kMaxJacobiSweeps sweeps.
inline HermitianEigenResult hermitian_eig(const ComplexMatrix &h, double tol = 1e-10) {
    if (!h.is_square()) {
        throw DimensionMismatch("hermitian_eig: matrix is not square");
    }
    const std::size_t n = h.rows();
    const double norm = frobenius_norm(h);
    const ComplexMatrix h_adj = adjoint(h);
    const double defect = frobenius_norm(h - h_adj);
    if (defect > tol * norm) {
        std::ostringstream ss;
        ss << "hermitian_eig: ||H - H^dagger||_F = " << defect << " exceeds " << tol << " * ||H||_F";
        throw NotHermitian(ss.str(), defect);
    }

    ComplexMatrix a = (h + h_adj) * 0.5;
    ComplexMatrix v = ComplexMatrix::identity(n);
    HermitianEigenResult result;

    int sweep = 0;
    const double target = kJacobiOffDiagonalTolerance * norm;
    while (off_diagonal_norm(a) > target) {
        if (sweep == kMaxJacobiSweeps) {
            throw NoConvergence("hermitian_eig: no convergence after 100 Jacobi sweeps");
        }
        ++sweep;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const complex_t apq = a(p, q);
                const double b = std::abs(apq);
                if (b == 0.0) {
                    continue;
                }
                const complex_t phase = apq / b;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double zeta = (aqq - app) / (2.0 * b);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // G = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
                const complex_t gpp = c;
                const complex_t gpq = s;
                const complex_t gqp = -s * std::conj(phase);
                const complex_t gqq = c * std::conj(phase);

                for (std::size_t r = 0; r < n; ++r) {
                    const complex_t arp = a(r, p);
                    const complex_t arq = a(r, q);
                    a(r, p) = arp * gpp + arq * gqp;
                    a(r, q) = arp * gpq + arq * gqq;
                    const complex_t vrp = v(r, p);
                    const complex_t vrq = v(r, q);
                    v(r, p) = vrp * gpp + vrq * gqp;
                    v(r, q) = vrp * gpq + vrq * gqq;
                }
                for (std::size_t col = 0; col < n; ++col) {
                    const complex_t apc = a(p, col);
                    const complex_t aqc = a(q, col);
                    a(p, col) = std::conj(gpp) * apc + std::conj(gqp) * aqc;
                    a(q, col) = std::conj(gpq) * apc + std::conj(gqq) * aqc;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });

    result.eigenvalues.resize(n);
    result.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        result.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) {
            result.eigenvectors(r, k) = v(r, order[k]);
        }
        detail::fix_column_phase(result.eigenvectors, k);
    }
    result.sweeps = sweep;
    return result;
}

/// Raised when a family handed to simultaneous_diag cannot share an
/// eigenbasis. `first`/`second` index the family; for a non-normal member
/// both are equal and `norm` is ||[A, A^dagger]||_F.
struct NonCommutingFamily : std::domain_error {
    std::size_t first;
    std::size_t second;
    double norm;
    NonCommutingFamily(const std::string &what, std::size_t first, std::size_t second, double norm)
        : std::domain_error(what), first(first), second(second), norm(norm) {}
};

struct SimultaneousDiagonalization {
    ComplexMatrix unitary;
    /// True when the family was empty or every member was zero, so any
    /// unitary would do and the identity was returned.
    bool unconstrained = false;
    /// max over members of offdiag(U^dagger A U) / ||A||_F.
    double max_relative_residual = 0.0;
};

constexpr double kDegeneracyThreshold = 1e-8;

/// One unitary that diagonalizes every member of a commuting family of
/// normal matrices. Each member is split into Hermitian and anti-Hermitian
/// parts, and the resulting Hermitian matrices refine the eigenspace
/// clusters one after another.
inline SimultaneousDiagonalization simultaneous_diag(std::span<const ComplexMatrix> family, double tol,
                                                     std::size_t dim = 0) {
    if (family.empty()) {
        if (dim == 0) {
            throw std::invalid_argument("simultaneous_diag: empty family and no dimension given");
        }
        return {ComplexMatrix::identity(dim), true, 0.0};
    }
    const std::size_t n = family.front().rows();
    std::vector<double> norms;
    double max_norm = 0.0;
    for (const auto &m : family) {
        if (!m.is_square() || m.rows() != n) {
            throw DimensionMismatch("simultaneous_diag: members must be square and of equal size");
        }
        norms.push_back(frobenius_norm(m));
        max_norm = std::max(max_norm, norms.back());
    }
    const double zero_floor = 64.0 * std::numeric_limits<double>::epsilon() * max_norm;

    for (std::size_t i = 0; i < family.size(); ++i) {
        if (norms[i] <= zero_floor) {
            continue;
        }
        const double d = frobenius_norm(commutator(family[i], adjoint(family[i])));
        if (d > tol * norms[i] * norms[i]) {
            std::ostringstream ss;
            ss << "simultaneous_diag: member " << i << " is not normal, ||[A, A^dagger]||_F = " << d;
            throw NonCommutingFamily(ss.str(), i, i, d);
        }
        for (std::size_t j = i + 1; j < family.size(); ++j) {
            if (norms[j] <= zero_floor) {
                continue;
            }
            const double c = frobenius_norm(commutator(family[i], family[j]));
            if (c > tol * norms[i] * norms[j]) {
                std::ostringstream ss;
                ss << "simultaneous_diag: members " << i << " and " << j << " do not commute, ||[A, B]||_F = " << c;
                throw NonCommutingFamily(ss.str(), i, j, c);
            }
        }
    }

    std::vector<ComplexMatrix> hermitian_parts;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (norms[i] <= zero_floor) {
            continue;
        }
        const ComplexMatrix adj = adjoint(family[i]);
        ComplexMatrix re = (family[i] + adj) * 0.5;
        ComplexMatrix im = (family[i] - adj) * complex_t(0.0, -0.5);
        for (auto *part : {&re, &im}) {
            if (frobenius_norm(*part) > zero_floor) {
                hermitian_parts.push_back(std::move(*part));
            }
        }
    }

    SimultaneousDiagonalization out{ComplexMatrix::identity(n), hermitian_parts.empty(), 0.0};
    if (hermitian_parts.empty()) {
        return out;
    }

    // Column ranges of `out.unitary` spanning one still-degenerate subspace.
    std::vector<std::pair<std::size_t, std::size_t>> clusters{{0, n}};
    for (const auto &h : hermitian_parts) {
        const auto spectrum = hermitian_eig(h, 1e-10).eigenvalues;
        const double range = spectrum.front() - spectrum.back();
        const double gap = kDegeneracyThreshold * std::max(range, frobenius_norm(h));

        std::vector<std::pair<std::size_t, std::size_t>> refined;
        for (const auto &[begin, end] : clusters) {
            if (end - begin == 1) {
                refined.emplace_back(begin, end);
                continue;
            }
            const ComplexMatrix q = out.unitary.columns(begin, end);
            ComplexMatrix restricted = matmul(matmul(adjoint(q), h), q);
            restricted = (restricted + adjoint(restricted)) * 0.5;
            const auto eig = hermitian_eig(restricted);
            out.unitary.set_columns(begin, matmul(q, eig.eigenvectors));
            std::size_t start = begin;
            for (std::size_t k = 1; k < eig.eigenvalues.size(); ++k) {
                if (eig.eigenvalues[k - 1] - eig.eigenvalues[k] >= gap) {
                    refined.emplace_back(start, begin + k);
                    start = begin + k;
                }
            }
            refined.emplace_back(start, end);
        }
        clusters = std::move(refined);
        if (clusters.size() == n) {
            break;
        }
    }
    for (std::size_t c = 0; c < n; ++c) {
        detail::fix_column_phase(out.unitary, c);
    }

    for (std::size_t i = 0; i < family.size(); ++i) {
        if (norms[i] <= zero_floor) {
            continue;
        }
        const ComplexMatrix d = matmul(matmul(adjoint(out.unitary), family[i]), out.unitary);
        const double rel = off_diagonal_norm(d) / norms[i];
        out.max_relative_residual = std::max(out.max_relative_residual, rel);
        if (rel > std::max(tol, 1e-12)) {
            std::ostringstream ss;
            ss << "simultaneous_diag: member " << i << " left with relative off-diagonal residual " << rel;
            throw NonCommutingFamily(ss.str(), i, i, rel * norms[i]);
        }
    }
    return out;
}

} // namespace qdiscord
