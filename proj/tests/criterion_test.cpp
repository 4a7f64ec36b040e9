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

#include "qdiscord/criterion.hpp"

#include "gtest/gtest.h"
#include "qdiscord/measure.hpp"
#include "qdiscord/states.hpp"
#include "test_support.hpp"

using namespace qdiscord;
using namespace qdiscord::testing;

TEST(block_partition, xstate_blocks) {
    for (double x : {0.0, 0.1, 0.25, 0.4}) {
        const auto p = block_partition(xstate(x));
        const ComplexMatrix diag = ComplexMatrix::diagonal({x, 0.5 - x});
        const ComplexMatrix off = sigma_x() * std::sqrt(x * (0.5 - x));
        EXPECT_EQ(p.block(0, 0), diag);
        EXPECT_EQ(p.block(1, 1), diag);
        EXPECT_EQ(p.block(0, 1), off);
        EXPECT_EQ(p.block(1, 0), off);
    }
}

TEST(block_partition, product_state_blocks) {
    const ComplexMatrix ra = random_density(3, 3, 1);
    const ComplexMatrix rb = random_density(2, 2, 2);
    const auto p = block_partition(product_state(ra, rb));
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_LE(max_abs_diff(p.block(i, j), rb * ra(i, j)), 1e-16);
        }
    }
}

TEST(block_partition, index_map_and_round_trip) {
    const auto rho = random_state(2, 3, 6, 13);
    const auto p = block_partition(rho);
    ASSERT_EQ(p.blocks().size(), 4u);
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            ASSERT_EQ(p.block(i, j).rows(), 3u);
            for (std::size_t r = 0; r < 3; ++r) {
                for (std::size_t c = 0; c < 3; ++c) {
                    EXPECT_EQ(p.block(i, j)(r, c), rho.matrix()(i * 3 + r, j * 3 + c));
                }
            }
        }
    }
    EXPECT_EQ(reconstruct(p), rho.matrix());
}

TEST(block_partition, round_trip_and_hermiticity_propagation) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const std::size_t n = 1 + seed % 4;
        const std::size_t m = 1 + (seed / 4) % 4;
        const auto rho = random_state(n, m, 1 + seed % (n * m), seed);
        const auto p = block_partition(rho);
        EXPECT_EQ(reconstruct(p), rho.matrix());
        double tr = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            tr += trace(p.block(i, i)).real();
            for (std::size_t j = 0; j < n; ++j) {
                EXPECT_EQ(p.block(j, i), adjoint(p.block(i, j)));
            }
        }
        EXPECT_NEAR(tr, 1.0, 1e-10);
    }
}

TEST(block_partition, reconstruct_zero_blocks) {
    const BlockPartition zero(2, 2, std::vector<ComplexMatrix>(4, ComplexMatrix(2, 2)));
    EXPECT_EQ(reconstruct(zero), ComplexMatrix(4, 4));
    EXPECT_THROW(validate(reconstruct(zero), 2, 2), InvalidDensityMatrix);
    EXPECT_THROW(BlockPartition(2, 2, std::vector<ComplexMatrix>(3, ComplexMatrix(2, 2))), DimensionMismatch);
    EXPECT_THROW(BlockPartition(2, 2, std::vector<ComplexMatrix>(4, ComplexMatrix(3, 3))), DimensionMismatch);
}

TEST(verdict, xstate_quarter_is_zero) {
    const auto v = zero_discord_verdict(xstate(0.25), 1e-9);
    EXPECT_TRUE(v.is_zero);
    EXPECT_EQ(v.max_normality_defect, 0.0);
    EXPECT_EQ(v.max_commutation_defect, 0.0);
    EXPECT_EQ(v.tolerance_used, 1e-9);
}

TEST(verdict, xstate_tenth_is_nonzero_with_worst_pair) {
    const auto v = zero_discord_verdict(xstate(0.1), 1e-9);
    EXPECT_FALSE(v.is_zero);
    EXPECT_TRUE(v.all_normal);
    EXPECT_FALSE(v.all_commute);
    EXPECT_EQ(v.worst_pair.first, (BlockIndex{0, 0}));
    EXPECT_EQ(v.worst_pair.second, (BlockIndex{0, 1}));
    // ||[diag(0.1, 0.4), 0.2 sigma_x]||_F = 0.06 sqrt 2, normalized by
    // ||diag(0.1, 0.4)||_F * ||0.2 sigma_x||_F = sqrt(0.17) * 0.2 sqrt 2.
    EXPECT_NEAR(v.max_commutation_defect, 0.06 / (std::sqrt(0.17) * 0.2), 1e-14);
}

TEST(verdict, product_states_are_zero) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto rho = product_state(random_density(1 + seed % 4, 1 + seed % 4, seed),
                                       random_density(2 + seed % 3, 2 + seed % 3, seed + 100));
        EXPECT_TRUE(zero_discord_verdict(rho).is_zero) << seed;
    }
}

TEST(verdict, generic_states_are_nonzero) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        EXPECT_FALSE(zero_discord_verdict(random_state(2, 2 + seed % 3, 2 + seed % 3, seed)).is_zero) << seed;
    }
}

TEST(verdict, is_zero_iff_both_defects_within_tolerance) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto rho = seed % 2 ? random_state(2, 2, 4, seed)
                                  : pointer_state(random_pointer_coefficients(2, 2, seed), random_unitary(2, seed));
        for (double tol : {1e-12, 1e-9, 1e-3, 0.5, 2.0}) {
            const auto v = zero_discord_verdict(rho, tol);
            EXPECT_EQ(v.is_zero, v.max_normality_defect <= tol && v.max_commutation_defect <= tol);
        }
    }
}

// Fuglede: commuting normal blocks also commute with each other's adjoints.
TEST(verdict, adjoint_commutation_follows_for_zero_discord) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto rho = pointer_state(random_pointer_coefficients(3, 3, seed), random_unitary(3, seed));
        const auto v = zero_discord_verdict(rho);
        ASSERT_TRUE(v.is_zero);
        EXPECT_LE(v.max_adjoint_commutation_defect, 1e-12);
    }
}

TEST(verdict, local_unitary_on_b_preserves_verdict) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto rho = seed % 2 ? random_state(2, 3, 3, seed)
                                  : pointer_state(random_pointer_coefficients(2, 3, seed), random_unitary(3, seed));
        const auto rotated = apply_local_unitary_b(rho, random_unitary(3, seed + 999));
        EXPECT_EQ(zero_discord_verdict(rho).is_zero, zero_discord_verdict(rotated).is_zero);
    }
}

TEST(verdict, apparatus_side_is_asymmetric) {
    // Classical on B, coherent on A: zero discord measuring B, not measuring A.
    const ComplexMatrix plus{{0.5, 0.5}, {0.5, 0.5}};
    const ComplexMatrix zero = ComplexMatrix::diagonal({1, 0});
    const ComplexMatrix one = ComplexMatrix::diagonal({0, 1});
    const ComplexMatrix rho = tensor_product(plus, zero) * 0.5 + tensor_product(zero, one) * 0.5;
    const auto state = validate(rho, 2, 2);
    EXPECT_TRUE(zero_discord_verdict(state).is_zero);
    EXPECT_FALSE(zero_discord_verdict_a_side(state).is_zero);
}

TEST(verdict, sub_noise_blocks_count_as_zero) {
    // cos(pi/2) ~ 6e-17 leaves rounding-level off-diagonal blocks.
    const auto rho = photon_pair_state(std::numbers::pi / 2);
    EXPECT_TRUE(zero_discord_verdict(rho).is_zero);
}

TEST(pointer, xstate_quarter_gives_hadamard) {
    const auto rho = xstate(0.25);
    const auto pb = pointer_basis(rho);
    EXPECT_TRUE(same_columns_up_to_phase(pb.unitary, hadamard(), 1e-10));
    EXPECT_LE(max_abs_diff(pb.unitary, hadamard()), 1e-15); // phase convention fixes it exactly
    EXPECT_LE(verify_pointer(rho, pb), 1e-12);
    EXPECT_LE(pb.reduced_state_residual, 1e-12);
    // C(1,1,.) = (0.25, 0.25), C(1,2,.) = (0.25, -0.25).
    EXPECT_NEAR(pb.c(0, 0, 0).real(), 0.25, 1e-15);
    EXPECT_NEAR(pb.c(0, 1, 0).real(), 0.25, 1e-15);
    EXPECT_NEAR(pb.c(0, 1, 1).real(), -0.25, 1e-15);
}

TEST(pointer, xstate_edges_give_computational_basis) {
    for (double x : {0.0, 0.5}) {
        const auto pb = pointer_basis(xstate(x));
        EXPECT_TRUE(same_columns_up_to_phase(pb.unitary, ComplexMatrix::identity(2), 1e-14)) << x;
        EXPECT_LE(verify_pointer(xstate(x), pb), 1e-12);
    }
}

TEST(pointer, refuses_nonzero_discord) {
    try {
        pointer_basis(xstate(0.1));
        FAIL();
    } catch (const NonzeroDiscord &e) {
        EXPECT_FALSE(e.verdict.is_zero);
        EXPECT_NE(std::string(e.what()).find("(1,1) and (1,2)"), std::string::npos);
    }
}

TEST(pointer, construct_then_recover) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::size_t n = 1 + seed % 3;
        const std::size_t m = 2 + seed % 4;
        const ComplexMatrix v = random_unitary(m, seed + 3);
        const auto rho = pointer_state(random_pointer_coefficients(n, m, seed), v);
        const auto pb = pointer_basis(rho);
        EXPECT_TRUE(same_columns_up_to_phase(pb.unitary, v, 1e-8)) << "seed " << seed;
        EXPECT_LE(verify_pointer(rho, pb), 1e-9);
        EXPECT_LE(pb.reduced_state_residual, 1e-9);

        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t k = 0; k < m; ++k) {
                total += pb.c(i, i, k).real();
                for (std::size_t j = 0; j < n; ++j) {
                    EXPECT_NEAR(std::abs(pb.c(j, i, k) - std::conj(pb.c(i, j, k))), 0.0, 1e-12);
                }
            }
        }
        EXPECT_NEAR(total, 1.0, 1e-10);
    }
}

// Degenerate apparatus structure: two of three k-slices identical, so no
// block separates those two pointer directions and any basis of their span
// is valid.
TEST(pointer, degenerate_slices) {
    const ComplexMatrix v = random_unitary(3, 8);
    const ComplexMatrix s0 = random_density(2, 2, 1) * 0.25;
    const ComplexMatrix s2 = random_density(2, 2, 2) * 0.5;
    const auto rho = pointer_state(PointerCoefficients::from_slices({s0, s0, s2}), v);
    const auto pb = pointer_basis(rho);
    EXPECT_LE(verify_pointer(rho, pb), 1e-9);
    EXPECT_LE(unitarity_defect(pb.unitary), 1e-12);
}

TEST(pointer, zero_discord_states_always_yield_pointer) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto rho = product_state(random_density(2, 2, seed), random_density(3, 3 - seed % 2, seed + 1));
        ASSERT_TRUE(zero_discord_verdict(rho).is_zero);
        const auto pb = pointer_basis(rho);
        EXPECT_LE(verify_pointer(rho, pb), 1e-9);
        EXPECT_LE(pb.reduced_state_residual, 1e-9);
    }
}

TEST(verify_pointer, best_fit_on_nonzero_discord_leaves_residual) {
    const auto rho = xstate(0.1);
    const auto pb = best_fit_pointer(rho, hadamard());
    // Diagonal blocks lose their +-0.15 off-diagonals in the Hadamard frame.
    EXPECT_NEAR(verify_pointer(rho, pb), 0.3, 1e-12);
    EXPECT_GT(verify_pointer(rho, pb), 0.05);
}

TEST(verify_pointer, product_state_with_reduced_eigenbasis) {
    const ComplexMatrix rb = random_density(3, 3, 4);
    const auto rho = product_state(random_density(2, 2, 5), rb);
    const auto pb = best_fit_pointer(rho, hermitian_eig(rb).eigenvectors);
    EXPECT_LE(verify_pointer(rho, pb), 1e-10);
}

TEST(separability_hint, examples) {
    EXPECT_TRUE(separability_hint(block_partition(xstate(0.0))));
    EXPECT_FALSE(separability_hint(block_partition(xstate(0.1))));
    EXPECT_TRUE(separability_hint(block_partition(validate(ComplexMatrix::diagonal({0.1, 0.2, 0.3, 0.4}), 2, 2))));
    // Sufficient only: x = 0.25 is separable and zero-discord but its blocks are not diagonal.
    EXPECT_FALSE(separability_hint(block_partition(xstate(0.25))));
}

TEST(ancilla, examples) {
    const auto nonzero = extend_with_ancilla(xstate(0.1), ComplexMatrix::identity(2) * 0.5);
    EXPECT_FALSE(nonzero.original.is_zero);
    EXPECT_FALSE(nonzero.extended.is_zero);

    const auto zero = extend_with_ancilla(xstate(0.25), random_density(3, 3, 17));
    EXPECT_TRUE(zero.original.is_zero);
    EXPECT_TRUE(zero.extended.is_zero);

    const ComplexMatrix pure = ComplexMatrix::diagonal({1, 0});
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        EXPECT_TRUE(extend_with_ancilla(random_state(2, 2, 3, seed), pure).agree());
    }
    EXPECT_THROW(extend_with_ancilla(xstate(0.1), ComplexMatrix::diagonal({0.5, 0.6})), InvalidDensityMatrix);
}

TEST(ancilla, blocks_factor_through_tensor_product) {
    // [B1 (x) C, B2 (x) C] = [B1, B2] (x) C^2.
    const auto p = block_partition(xstate(0.1));
    const ComplexMatrix c = random_density(3, 3, 5);
    const ComplexMatrix lhs = commutator(tensor_product(p.block(0, 0), c), tensor_product(p.block(0, 1), c));
    const ComplexMatrix rhs = tensor_product(commutator(p.block(0, 0), p.block(0, 1)), matmul(c, c));
    EXPECT_LE(max_abs_diff(lhs, rhs), 1e-15);
}

TEST(ancilla, invariance_over_random_pairs) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto rho = seed % 2 ? random_state(2, 2, 2 + seed % 3, seed)
                                  : pointer_state(random_pointer_coefficients(2, 2, seed), random_unitary(2, seed));
        const std::size_t k = 2 + seed % 2;
        const auto v = extend_with_ancilla(rho, random_density(k, 1 + seed % k, seed + 4242));
        EXPECT_TRUE(v.agree()) << "seed " << seed;
        EXPECT_EQ(v.original.is_zero, seed % 2 == 0);
    }
}
