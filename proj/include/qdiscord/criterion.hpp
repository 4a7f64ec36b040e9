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
#include <cstddef>
#include <limits>
#include <sstream>
#include <utility>
#include <vector>

#include "qdiscord/density.hpp"
#include "qdiscord/linalg.hpp"

namespace qdiscord {

constexpr double kDefaultCriterionTolerance = 1e-9;

/// The N x N grid of M x M blocks rho^(ij) = <i_A| rho |j_A>.
class BlockPartition {
  public:
    BlockPartition(std::size_t dim_a, std::size_t dim_b, std::vector<ComplexMatrix> blocks)
        : dim_a_(dim_a), dim_b_(dim_b), blocks_(std::move(blocks)) {
        if (blocks_.size() != dim_a_ * dim_a_) {
            throw DimensionMismatch("BlockPartition: expected dim_a^2 blocks");
        }
        for (const auto &b : blocks_) {
            if (b.rows() != dim_b_ || b.cols() != dim_b_) {
                throw DimensionMismatch("BlockPartition: every block must be dim_b x dim_b");
            }
        }
    }

    std::size_t dim_a() const { return dim_a_; }
    std::size_t dim_b() const { return dim_b_; }
    const ComplexMatrix &block(std::size_t i, std::size_t j) const { return blocks_[i * dim_a_ + j]; }
    /// Row-major over (i, j).
    const std::vector<ComplexMatrix> &blocks() const { return blocks_; }

  private:
    std::size_t dim_a_;
    std::size_t dim_b_;
    std::vector<ComplexMatrix> blocks_;
};

inline BlockPartition block_partition(const BipartiteDensityMatrix &rho) {
    std::vector<ComplexMatrix> blocks;
    blocks.reserve(rho.dim_a() * rho.dim_a());
    for (std::size_t i = 0; i < rho.dim_a(); ++i) {
        for (std::size_t j = 0; j < rho.dim_a(); ++j) {
            blocks.push_back(rho.block(i, j));
        }
    }
    return {rho.dim_a(), rho.dim_b(), std::move(blocks)};
}

/// sum_ij |i><j| (x) rho^(ij). Returns the raw matrix; pass it through
/// validate() to get a state back.
inline ComplexMatrix reconstruct(const BlockPartition &p) {
    const std::size_t n = p.dim_a();
    const std::size_t m = p.dim_b();
    ComplexMatrix out(n * m, n * m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const ComplexMatrix &b = p.block(i, j);
            for (std::size_t r = 0; r < m; ++r) {
                for (std::size_t c = 0; c < m; ++c) {
                    out(i * m + r, j * m + c) = b(r, c);
                }
            }
        }
    }
    return out;
}

/// Position of a block in the partition, 0-based.
struct BlockIndex {
    std::size_t i = 0;
    std::size_t j = 0;
    friend bool operator==(const BlockIndex &, const BlockIndex &) = default;
};

struct DiscordVerdict {
    bool is_zero = false;
    bool all_normal = false;
    bool all_commute = false;
    /// max ||[B, B^dagger]||_F / ||B||_F^2 over blocks.
    double max_normality_defect = 0.0;
    BlockIndex worst_normal_block;
    /// max ||[B1, B2]||_F / (||B1||_F ||B2||_F) over unordered block pairs.
    double max_commutation_defect = 0.0;
    std::pair<BlockIndex, BlockIndex> worst_pair;
    /// Diagnostic only: the same sweep against B2^dagger.
    double max_adjoint_commutation_defect = 0.0;
    double tolerance_used = kDefaultCriterionTolerance;
};

namespace detail {

/// Blocks at or below this norm (relative to the whole partition) are
/// rounding noise and treated as exactly zero.
inline double zero_block_floor(const BlockPartition &p) {
    double total = 0.0;
    for (const auto &b : p.blocks()) {
        const double nb = frobenius_norm(b);
        total += nb * nb;
    }
    return 64.0 * std::numeric_limits<double>::epsilon() * std::sqrt(total);
}

} // namespace detail

/// Zero discord with B as apparatus iff every block is normal and all
/// blocks commute pairwise. Defects are scale-normalized so a single
/// relative tolerance applies.
inline DiscordVerdict zero_discord_verdict(const BlockPartition &p, double tol = kDefaultCriterionTolerance) {
    const std::size_t n = p.dim_a();
    const auto &blocks = p.blocks();
    const double floor = detail::zero_block_floor(p);

    std::vector<double> norms(blocks.size());
    std::vector<ComplexMatrix> adjoints(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        norms[b] = frobenius_norm(blocks[b]);
        adjoints[b] = adjoint(blocks[b]);
    }
    auto at = [n](std::size_t flat) { return BlockIndex{flat / n, flat % n}; };

    DiscordVerdict v;
    v.tolerance_used = tol;
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        if (norms[b] <= floor) {
            continue;
        }
        const double d = frobenius_norm(commutator(blocks[b], adjoints[b])) / (norms[b] * norms[b]);
        if (d > v.max_normality_defect) {
            v.max_normality_defect = d;
            v.worst_normal_block = at(b);
        }
    }
    for (std::size_t b1 = 0; b1 < blocks.size(); ++b1) {
        if (norms[b1] <= floor) {
            continue;
        }
        for (std::size_t b2 = b1 + 1; b2 < blocks.size(); ++b2) {
            if (norms[b2] <= floor) {
                continue;
            }
            const double scale = norms[b1] * norms[b2];
            const double d = frobenius_norm(commutator(blocks[b1], blocks[b2])) / scale;
            if (d > v.max_commutation_defect) {
                v.max_commutation_defect = d;
                v.worst_pair = {at(b1), at(b2)};
            }
            const double da = frobenius_norm(commutator(blocks[b1], adjoints[b2])) / scale;
            v.max_adjoint_commutation_defect = std::max(v.max_adjoint_commutation_defect, da);
        }
    }
    v.all_normal = v.max_normality_defect <= tol;
    v.all_commute = v.max_commutation_defect <= tol;
    v.is_zero = v.all_normal && v.all_commute;
    return v;
}

inline DiscordVerdict zero_discord_verdict(const BipartiteDensityMatrix &rho, double tol = kDefaultCriterionTolerance) {
    return zero_discord_verdict(block_partition(rho), tol);
}

/// Verdict with A as the apparatus.
inline DiscordVerdict zero_discord_verdict_a_side(const BipartiteDensityMatrix &rho,
                                                  double tol = kDefaultCriterionTolerance) {
    return zero_discord_verdict(swap_subsystems(rho), tol);
}

/// Local basis on B that leaves a zero-discord state untouched, with the
/// coefficients C_ijk = <k'| rho^(ij) |k'>.
struct PointerBasis {
    ComplexMatrix unitary; // column k = |k'_B>
    std::size_t dim_a = 0;
    std::size_t dim_b = 0;
    std::vector<complex_t> coefficients; // flat (i, j, k)
    /// ||offdiag(U^dagger rho^(ij) U)||_F per block, row-major over (i, j).
    std::vector<double> block_residuals;
    /// ||offdiag(U^dagger rho_B U)||_F.
    double reduced_state_residual = 0.0;

    const complex_t &c(std::size_t i, std::size_t j, std::size_t k) const {
        return coefficients[(i * dim_a + j) * dim_b + k];
    }
    complex_t &c(std::size_t i, std::size_t j, std::size_t k) { return coefficients[(i * dim_a + j) * dim_b + k]; }
};

struct NonzeroDiscord : std::domain_error {
    DiscordVerdict verdict;
    explicit NonzeroDiscord(const DiscordVerdict &v)
        : std::domain_error(message(v)), verdict(v) {}

  private:
    static std::string message(const DiscordVerdict &v) {
        std::ostringstream ss;
        ss << "state has nonzero discord: ";
        if (!v.all_normal) {
            ss << "block (" << v.worst_normal_block.i + 1 << "," << v.worst_normal_block.j + 1
               << ") is not normal (defect " << v.max_normality_defect << ")";
        } else {
            ss << "blocks (" << v.worst_pair.first.i + 1 << "," << v.worst_pair.first.j + 1 << ") and ("
               << v.worst_pair.second.i + 1 << "," << v.worst_pair.second.j + 1 << ") do not commute (defect "
               << v.max_commutation_defect << ")";
        }
        return ss.str();
    }
};

struct PointerResidualError : std::runtime_error {
    double residual;
    PointerResidualError(const std::string &what, double residual) : std::runtime_error(what), residual(residual) {}
};

/// Reads the coefficients off U^dagger rho^(ij) U for an arbitrary unitary U,
/// keeping only the diagonals. This is the least-squares pointer
/// approximation when U does not actually diagonalize the blocks.
inline PointerBasis best_fit_pointer(const BipartiteDensityMatrix &rho, const ComplexMatrix &u) {
    if (!u.is_square() || u.rows() != rho.dim_b()) {
        throw DimensionMismatch("best_fit_pointer: unitary dimension differs from dim_b");
    }
    const std::size_t n = rho.dim_a();
    const std::size_t m = rho.dim_b();
    PointerBasis pb{u, n, m, std::vector<complex_t>(n * n * m), std::vector<double>(n * n), 0.0};
    const ComplexMatrix u_adj = adjoint(u);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const ComplexMatrix d = matmul(matmul(u_adj, rho.block(i, j)), u);
            for (std::size_t k = 0; k < m; ++k) {
                pb.c(i, j, k) = d(k, k);
            }
            pb.block_residuals[i * n + j] = off_diagonal_norm(d);
        }
    }
    pb.reduced_state_residual = off_diagonal_norm(matmul(matmul(u_adj, partial_trace_a(rho)), u));
    return pb;
}

/// Extracts the non-disturbing basis of a zero-discord state by jointly
/// diagonalizing every nonzero block. When one block is nondegenerate this
/// reduces to diagonalizing that block alone.
inline PointerBasis pointer_basis(const BipartiteDensityMatrix &rho, double tol = kDefaultCriterionTolerance) {
    const BlockPartition p = block_partition(rho);
    const DiscordVerdict v = zero_discord_verdict(p, tol);
    if (!v.is_zero) {
        throw NonzeroDiscord(v);
    }
    const double floor = detail::zero_block_floor(p);
    std::vector<ComplexMatrix> family;
    double max_norm = 0.0;
    for (const auto &b : p.blocks()) {
        const double nb = frobenius_norm(b);
        max_norm = std::max(max_norm, nb);
        if (nb > floor) {
            family.push_back(b);
        }
    }
    const auto sd = simultaneous_diag(family, tol, rho.dim_b());
    PointerBasis pb = best_fit_pointer(rho, sd.unitary);

    const double worst = *std::max_element(pb.block_residuals.begin(), pb.block_residuals.end());
    const double limit = std::max(tol * max_norm, 1e-14);
    if (worst > limit || pb.reduced_state_residual > limit) {
        std::ostringstream ss;
        ss << "pointer_basis: residual " << std::max(worst, pb.reduced_state_residual) << " exceeds " << limit;
        throw PointerResidualError(ss.str(), std::max(worst, pb.reduced_state_residual));
    }
    return pb;
}

/// ||rho - sum_ijk C_ijk |i><j| (x) U|k><k|U^dagger||_F.
inline double verify_pointer(const BipartiteDensityMatrix &rho, const PointerBasis &pb) {
    const std::size_t n = rho.dim_a();
    const std::size_t m = rho.dim_b();
    if (pb.dim_a != n || pb.dim_b != m || pb.unitary.rows() != m) {
        throw DimensionMismatch("verify_pointer: pointer basis dimensions differ from the state");
    }
    std::vector<ComplexMatrix> projectors;
    projectors.reserve(m);
    for (std::size_t k = 0; k < m; ++k) {
        const ComplexMatrix col = pb.unitary.column(k);
        projectors.push_back(matmul(col, adjoint(col)));
    }
    ComplexMatrix model(n * m, n * m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k < m; ++k) {
                const complex_t c = pb.c(i, j, k);
                for (std::size_t r = 0; r < m; ++r) {
                    for (std::size_t s = 0; s < m; ++s) {
                        model(i * m + r, j * m + s) += c * projectors[k](r, s);
                    }
                }
            }
        }
    }
    return frobenius_norm(rho.matrix() - model);
}

/// True when every block is diagonal to within `tol` (absolute off-diagonal
/// Frobenius mass). Sufficient for separability, not necessary.
inline bool separability_hint(const BlockPartition &p, double tol = kDefaultCriterionTolerance) {
    return std::all_of(p.blocks().begin(), p.blocks().end(),
                       [tol](const ComplexMatrix &b) { return off_diagonal_norm(b) <= tol; });
}

struct AncillaVerdicts {
    DiscordVerdict original;
    DiscordVerdict extended; // rho (x) rho_c, ancilla attached to B
    bool agree() const { return original.is_zero == extended.is_zero; }
};

/// Attaches an ancilla to the apparatus side and re-runs the criterion on
/// rho_A(BC) = rho (x) rho_c, whose blocks are rho^(ij) (x) rho_c.
inline AncillaVerdicts extend_with_ancilla(const BipartiteDensityMatrix &rho, const ComplexMatrix &ancilla,
                                           double tol = kDefaultCriterionTolerance) {
    require_density(ancilla, ancilla.rows());
    const BipartiteDensityMatrix extended{BipartiteDensityMatrix::unchecked_t{},
                                          tensor_product(rho.matrix(), ancilla), rho.dim_a(),
                                          rho.dim_b() * ancilla.rows()};
    return {zero_discord_verdict(rho, tol), zero_discord_verdict(extended, tol)};
}

} // namespace qdiscord
