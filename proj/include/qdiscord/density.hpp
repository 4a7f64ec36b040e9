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

#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qdiscord/linalg.hpp"

namespace qdiscord {

constexpr double kDefaultValidationTolerance = 1e-10;

/// Everything wrong with a candidate density matrix. Unset fields were
/// either fine or could not be evaluated (size mismatch stops the rest).
struct DensityDefects {
    bool size_mismatch = false;
    bool non_finite = false;
    std::optional<double> hermiticity;     // ||rho - rho^dagger||_F
    std::optional<double> trace;           // |Tr rho - 1|
    std::optional<double> min_eigenvalue;  // only set when negative beyond tol

    std::string describe() const {
        std::ostringstream ss;
        const char *sep = "";
        if (size_mismatch) {
            ss << sep << "size mismatch";
            sep = "; ";
        }
        if (non_finite) {
            ss << sep << "non-finite entries";
            sep = "; ";
        }
        if (hermiticity) {
            ss << sep << "hermiticity defect " << *hermiticity;
            sep = "; ";
        }
        if (trace) {
            ss << sep << "trace defect " << *trace;
            sep = "; ";
        }
        if (min_eigenvalue) {
            ss << sep << "negative eigenvalue " << *min_eigenvalue;
        }
        return ss.str();
    }
};

struct InvalidDensityMatrix : std::domain_error {
    DensityDefects defects;
    explicit InvalidDensityMatrix(DensityDefects d)
        : std::domain_error("invalid density matrix: " + d.describe()), defects(std::move(d)) {}
};

/// Checks Hermiticity (relative), unit trace and positivity of a single
/// system's density matrix. Returns the defects found; empty means valid.
inline std::optional<DensityDefects> density_defects(const ComplexMatrix &m, std::size_t expected_dim, double tol) {
    DensityDefects d;
    bool bad = false;
    if (!m.is_square() || m.rows() != expected_dim) {
        d.size_mismatch = true;
        return d;
    }
    for (const auto &z : m.entries()) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            d.non_finite = true;
            return d;
        }
    }
    const double norm = frobenius_norm(m);
    const double herm = frobenius_norm(m - adjoint(m));
    if (herm > tol * norm) {
        d.hermiticity = herm;
        bad = true;
    }
    const double tr = std::abs(trace(m) - 1.0);
    if (tr > tol) {
        d.trace = tr;
        bad = true;
    }
    if (!d.hermiticity) {
        const auto eig = hermitian_eig(m, tol);
        if (eig.eigenvalues.back() < -tol) {
            d.min_eigenvalue = eig.eigenvalues.back();
            bad = true;
        }
    }
    return bad ? std::optional<DensityDefects>(d) : std::nullopt;
}

/// Throws InvalidDensityMatrix unless `m` is a dim x dim density matrix.
inline const ComplexMatrix &require_density(const ComplexMatrix &m, std::size_t dim,
                                            double tol = kDefaultValidationTolerance) {
    if (auto d = density_defects(m, dim, tol)) {
        throw InvalidDensityMatrix(*d);
    }
    return m;
}

/// A density matrix on C^N (x) C^M, stored in the basis
/// |1_A 1_B>, ..., |1_A M_B>, |2_A 1_B>, ..., |N_A M_B>: A is the slow index,
/// B the fast one.
class BipartiteDensityMatrix {
  public:
    struct unchecked_t {};

    /// Wraps a matrix the caller guarantees is already a valid state (for
    /// instance the output of a channel applied to a valid state).
    BipartiteDensityMatrix(unchecked_t, ComplexMatrix m, std::size_t dim_a, std::size_t dim_b)
        : matrix_(std::move(m)), dim_a_(dim_a), dim_b_(dim_b) {}

    std::size_t dim_a() const { return dim_a_; }
    std::size_t dim_b() const { return dim_b_; }
    std::size_t dim() const { return dim_a_ * dim_b_; }
    const ComplexMatrix &matrix() const { return matrix_; }

    /// Row/column index of |a_A b_B> (0-based).
    std::size_t index(std::size_t a, std::size_t b) const { return a * dim_b_ + b; }

    /// The M x M block <i_A| rho |j_A>.
    ComplexMatrix block(std::size_t i, std::size_t j) const {
        ComplexMatrix out(dim_b_, dim_b_);
        for (std::size_t r = 0; r < dim_b_; ++r) {
            for (std::size_t c = 0; c < dim_b_; ++c) {
                out(r, c) = matrix_(i * dim_b_ + r, j * dim_b_ + c);
            }
        }
        return out;
    }

  private:
    ComplexMatrix matrix_;
    std::size_t dim_a_;
    std::size_t dim_b_;
};

inline BipartiteDensityMatrix validate(const ComplexMatrix &m, std::size_t dim_a, std::size_t dim_b,
                                       double tol = kDefaultValidationTolerance) {
    if (dim_a == 0 || dim_b == 0) {
        DensityDefects d;
        d.size_mismatch = true;
        throw InvalidDensityMatrix(d);
    }
    require_density(m, dim_a * dim_b, tol);
    return {BipartiteDensityMatrix::unchecked_t{}, m, dim_a, dim_b};
}

/// Orthonormal measurement basis on B; column k is |k_B>.
class ProjectorBasis {
  public:
    static ProjectorBasis from_unitary(ComplexMatrix u, double tol = 1e-10) {
        if (!u.is_square()) {
            throw DimensionMismatch("ProjectorBasis: basis matrix must be square");
        }
        const double defect = unitarity_defect(u);
        if (defect > tol * static_cast<double>(u.rows())) {
            std::ostringstream ss;
            ss << "ProjectorBasis: ||B^dagger B - I||_F = " << defect;
            throw std::domain_error(ss.str());
        }
        return ProjectorBasis(std::move(u));
    }

    static ProjectorBasis computational(std::size_t dim) { return ProjectorBasis(ComplexMatrix::identity(dim)); }

    std::size_t dim() const { return basis_.rows(); }
    const ComplexMatrix &basis() const { return basis_; }

    /// |k><k|.
    ComplexMatrix projector(std::size_t k) const {
        const ComplexMatrix v = basis_.column(k);
        return matmul(v, adjoint(v));
    }

  private:
    explicit ProjectorBasis(ComplexMatrix u) : basis_(std::move(u)) {}
    ComplexMatrix basis_;
};

/// rho_B = sum_i <i_A| rho |i_A>.
inline ComplexMatrix partial_trace_a(const BipartiteDensityMatrix &rho) {
    ComplexMatrix out(rho.dim_b(), rho.dim_b());
    for (std::size_t i = 0; i < rho.dim_a(); ++i) {
        out += rho.block(i, i);
    }
    return out;
}

inline ComplexMatrix partial_trace_b(const BipartiteDensityMatrix &rho) {
    const std::size_t n = rho.dim_a();
    const std::size_t m = rho.dim_b();
    ComplexMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            complex_t t{};
            for (std::size_t b = 0; b < m; ++b) {
                t += rho.matrix()(i * m + b, j * m + b);
            }
            out(i, j) = t;
        }
    }
    return out;
}

/// -sum lambda log2 lambda over the spectrum, with 0 log 0 = 0. Eigenvalues
/// in [-tol, 0) count as zero; anything more negative is rejected.
inline double von_neumann_entropy(const ComplexMatrix &h, double tol = kDefaultValidationTolerance) {
    require_density(h, h.rows(), tol);
    double s = 0.0;
    for (double lambda : hermitian_eig(h, tol).eigenvalues) {
        if (lambda > 0.0) {
            s -= lambda * std::log2(lambda);
        }
    }
    return std::max(s, 0.0);
}

namespace detail {

/// Entropy of a matrix already known to be a density matrix up to rounding.
inline double entropy_unchecked(const ComplexMatrix &h) {
    double s = 0.0;
    for (double lambda : hermitian_eig(h, 1e-8).eigenvalues) {
        if (lambda > 0.0) {
            s -= lambda * std::log2(lambda);
        }
    }
    return std::max(s, 0.0);
}

} // namespace detail

constexpr double kNegligibleProbability = 1e-12;

struct ConditionalState {
    double probability;
    ComplexMatrix state;     // N x N; zero when `negligible`
    bool negligible = false; // probability below kNegligibleProbability
};

/// Post-measurement states of A after measuring B in `basis`:
/// p_k = Tr_A <k|rho|k>, rho_k = <k|rho|k> / p_k.
inline std::vector<ConditionalState> conditional_states(const BipartiteDensityMatrix &rho,
                                                        const ProjectorBasis &basis) {
    const std::size_t n = rho.dim_a();
    const std::size_t m = rho.dim_b();
    if (basis.dim() != m) {
        throw DimensionMismatch("conditional_states: basis dimension differs from dim_b");
    }
    const ComplexMatrix &r = rho.matrix();
    const ComplexMatrix &u = basis.basis();
    std::vector<ConditionalState> out;
    out.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        ComplexMatrix s(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                complex_t acc{};
                for (std::size_t b = 0; b < m; ++b) {
                    const complex_t left = std::conj(u(b, k));
                    for (std::size_t c = 0; c < m; ++c) {
                        acc += left * r(i * m + b, j * m + c) * u(c, k);
                    }
                }
                s(i, j) = acc;
            }
        }
        const double p = trace(s).real();
        if (p < kNegligibleProbability) {
            out.push_back({std::max(p, 0.0), ComplexMatrix(n, n), true});
        } else {
            s *= 1.0 / p;
            out.push_back({p, std::move(s), false});
        }
    }
    return out;
}

/// Exchanges the roles of A and B: the result lives on C^M (x) C^N.
inline BipartiteDensityMatrix swap_subsystems(const BipartiteDensityMatrix &rho) {
    const std::size_t n = rho.dim_a();
    const std::size_t m = rho.dim_b();
    ComplexMatrix out(n * m, n * m);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            for (std::size_t a2 = 0; a2 < n; ++a2) {
                for (std::size_t b2 = 0; b2 < m; ++b2) {
                    out(b * n + a, b2 * n + a2) = rho.matrix()(a * m + b, a2 * m + b2);
                }
            }
        }
    }
    return {BipartiteDensityMatrix::unchecked_t{}, std::move(out), m, n};
}

/// (I (x) V) rho (I (x) V)^dagger.
inline BipartiteDensityMatrix apply_local_unitary_b(const BipartiteDensityMatrix &rho, const ComplexMatrix &v) {
    if (!v.is_square() || v.rows() != rho.dim_b()) {
        throw DimensionMismatch("apply_local_unitary_b: unitary dimension differs from dim_b");
    }
    const ComplexMatrix full = tensor_product(ComplexMatrix::identity(rho.dim_a()), v);
    return {BipartiteDensityMatrix::unchecked_t{}, conjugate_by(full, rho.matrix()), rho.dim_a(), rho.dim_b()};
}

} // namespace qdiscord
