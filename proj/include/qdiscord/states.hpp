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
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "qdiscord/density.hpp"
#include "qdiscord/linalg.hpp"

namespace qdiscord {

/// Two-qubit X-state with diagonal (x, 0.5-x, x, 0.5-x) and anti-diagonal
/// sqrt(x (0.5 - x)), for x in [0, 0.5].
inline BipartiteDensityMatrix xstate(double x) {
    if (!(x >= 0.0 && x <= 0.5)) {
        throw std::domain_error("xstate: x must lie in [0, 0.5]");
    }
    const double s = std::sqrt(x * (0.5 - x));
    const double y = 0.5 - x;
    return validate({{x, 0, 0, s}, {0, y, s, 0}, {0, s, x, 0}, {s, 0, 0, y}}, 2, 2);
}

/// 0.5 |psi1><psi1| + 0.5 |psi2><psi2| with
/// psi1 = cos t |HH> + sin t |VV>, psi2 = cos t |VH> + sin t |HV>,
/// H mapped to basis index 0 and V to index 1.
inline BipartiteDensityMatrix photon_pair_state(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const ComplexMatrix psi1(4, 1, {c, 0.0, 0.0, s});
    const ComplexMatrix psi2(4, 1, {0.0, s, c, 0.0});
    ComplexMatrix rho = matmul(psi1, adjoint(psi1)) * 0.5 + matmul(psi2, adjoint(psi2)) * 0.5;
    return validate(rho, 2, 2);
}

inline BipartiteDensityMatrix bell_state() {
    const double h = 0.5;
    return validate({{h, 0, 0, h}, {0, 0, 0, 0}, {0, 0, 0, 0}, {h, 0, 0, h}}, 2, 2);
}

inline BipartiteDensityMatrix product_state(const ComplexMatrix &rho_a, const ComplexMatrix &rho_b) {
    require_density(rho_a, rho_a.rows());
    require_density(rho_b, rho_b.rows());
    return validate(tensor_product(rho_a, rho_b), rho_a.rows(), rho_b.rows());
}

namespace detail {

inline ComplexMatrix gaussian_matrix(std::size_t rows, std::size_t cols, std::mt19937_64 &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix g(rows, cols);
    for (auto &z : g.entries()) {
        const double re = normal(rng);
        const double im = normal(rng);
        z = {re, im};
    }
    return g;
}

} // namespace detail

/// G G^dagger / Tr(G G^dagger) for a dim x rank complex Gaussian G.
inline ComplexMatrix random_density(std::size_t dim, std::size_t rank, std::uint64_t seed) {
    if (dim == 0 || rank == 0 || rank > dim) {
        throw std::invalid_argument("random_density: need 1 <= rank <= dim");
    }
    std::mt19937_64 rng(seed);
    const ComplexMatrix g = detail::gaussian_matrix(dim, rank, rng);
    ComplexMatrix rho = matmul(g, adjoint(g));
    rho *= 1.0 / trace(rho).real();
    // Exact Hermiticity: average away rounding asymmetry.
    return (rho + adjoint(rho)) * 0.5;
}

inline BipartiteDensityMatrix random_state(std::size_t dim_a, std::size_t dim_b, std::size_t rank,
                                           std::uint64_t seed) {
    return validate(random_density(dim_a * dim_b, rank, seed), dim_a, dim_b);
}

/// Haar-random unitary: Gram-Schmidt on a complex Gaussian matrix.
inline ComplexMatrix random_unitary(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    ComplexMatrix q = detail::gaussian_matrix(dim, dim, rng);
    for (std::size_t c = 0; c < dim; ++c) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t prev = 0; prev < c; ++prev) {
                complex_t dot{};
                for (std::size_t r = 0; r < dim; ++r) {
                    dot += std::conj(q(r, prev)) * q(r, c);
                }
                for (std::size_t r = 0; r < dim; ++r) {
                    q(r, c) -= dot * q(r, prev);
                }
            }
        }
        double norm = 0.0;
        for (std::size_t r = 0; r < dim; ++r) {
            norm += std::norm(q(r, c));
        }
        norm = std::sqrt(norm);
        for (std::size_t r = 0; r < dim; ++r) {
            q(r, c) /= norm;
        }
    }
    return q;
}

/// C_ijk of a pointer state: for each apparatus outcome k the N x N slice
/// [C_ijk]_ij is PSD, and the diagonal sums to one overall.
class PointerCoefficients {
  public:
    PointerCoefficients(std::size_t dim_a, std::size_t dim_b, std::vector<complex_t> values, double tol = 1e-10)
        : dim_a_(dim_a), dim_b_(dim_b), values_(std::move(values)) {
        if (values_.size() != dim_a_ * dim_a_ * dim_b_) {
            throw DimensionMismatch("PointerCoefficients: expected dim_a^2 * dim_b values");
        }
        double total = 0.0;
        for (std::size_t k = 0; k < dim_b_; ++k) {
            const ComplexMatrix s = slice(k);
            if (frobenius_norm(s - adjoint(s)) > tol) {
                throw std::domain_error("PointerCoefficients: slice is not Hermitian in (i, j)");
            }
            const auto eig = hermitian_eig(s, 1.0);
            if (eig.eigenvalues.back() < -tol) {
                std::ostringstream ss;
                ss << "PointerCoefficients: slice " << k << " has negative eigenvalue " << eig.eigenvalues.back();
                throw std::domain_error(ss.str());
            }
            total += trace(s).real();
        }
        if (std::abs(total - 1.0) > tol) {
            throw std::domain_error("PointerCoefficients: diagonal coefficients do not sum to one");
        }
    }

    std::size_t dim_a() const { return dim_a_; }
    std::size_t dim_b() const { return dim_b_; }
    const complex_t &operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return values_[(i * dim_a_ + j) * dim_b_ + k];
    }

    /// The N x N matrix [C_ijk]_ij for fixed k.
    ComplexMatrix slice(std::size_t k) const {
        ComplexMatrix s(dim_a_, dim_a_);
        for (std::size_t i = 0; i < dim_a_; ++i) {
            for (std::size_t j = 0; j < dim_a_; ++j) {
                s(i, j) = (*this)(i, j, k);
            }
        }
        return s;
    }

    /// Builds coefficients from per-outcome slices (each N x N).
    static PointerCoefficients from_slices(const std::vector<ComplexMatrix> &slices) {
        if (slices.empty()) {
            throw std::invalid_argument("PointerCoefficients: no slices");
        }
        const std::size_t n = slices.front().rows();
        const std::size_t m = slices.size();
        std::vector<complex_t> values(n * n * m);
        for (std::size_t k = 0; k < m; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    values[(i * n + j) * m + k] = slices[k](i, j);
                }
            }
        }
        return {n, m, std::move(values)};
    }

  private:
    std::size_t dim_a_;
    std::size_t dim_b_;
    std::vector<complex_t> values_;
};

/// Each slice is an independent G G^dagger, then the whole family is
/// normalized to unit total trace.
inline PointerCoefficients random_pointer_coefficients(std::size_t dim_a, std::size_t dim_b, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<ComplexMatrix> slices;
    double total = 0.0;
    for (std::size_t k = 0; k < dim_b; ++k) {
        const ComplexMatrix g = detail::gaussian_matrix(dim_a, dim_a, rng);
        ComplexMatrix s = matmul(g, adjoint(g));
        s = (s + adjoint(s)) * 0.5;
        total += trace(s).real();
        slices.push_back(std::move(s));
    }
    for (auto &s : slices) {
        s *= 1.0 / total;
    }
    return PointerCoefficients::from_slices(slices);
}

/// sum_ijk C_ijk |i><j| (x) V|k><k|V^dagger: zero discord with B as
/// apparatus by construction.
inline BipartiteDensityMatrix pointer_state(const PointerCoefficients &c, const ComplexMatrix &v) {
    const std::size_t n = c.dim_a();
    const std::size_t m = c.dim_b();
    if (!v.is_square() || v.rows() != m) {
        throw DimensionMismatch("pointer_state: unitary dimension differs from dim_b");
    }
    if (unitarity_defect(v) > 1e-10 * static_cast<double>(m)) {
        throw std::domain_error("pointer_state: v is not unitary");
    }
    ComplexMatrix rho;
    for (std::size_t k = 0; k < m; ++k) {
        const ComplexMatrix col = v.column(k);
        ComplexMatrix term = tensor_product(c.slice(k), matmul(col, adjoint(col)));
        rho = k == 0 ? std::move(term) : rho + term;
    }
    rho = (rho + adjoint(rho)) * 0.5;
    return validate(rho, n, m);
}

} // namespace qdiscord
