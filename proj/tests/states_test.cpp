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

#include "qdiscord/states.hpp"

#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "qdiscord/criterion.hpp"
#include "test_support.hpp"

using namespace qdiscord;
using namespace qdiscord::testing;

TEST(states, xstate_examples) {
    const auto q = xstate(0.25);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            const bool nonzero = r == c || r + c == 3;
            EXPECT_EQ(q.matrix()(r, c), nonzero ? complex_t(0.25) : complex_t(0.0));
        }
    }
    EXPECT_EQ(xstate(0.0).matrix(), ComplexMatrix::diagonal({0, 0.5, 0, 0.5}));
    EXPECT_NEAR(xstate(0.1).matrix()(0, 3).real(), 0.2, 1e-16);
    EXPECT_NEAR(xstate(0.1).matrix()(1, 2).real(), 0.2, 1e-16);
    EXPECT_THROW(xstate(-0.01), std::domain_error);
    EXPECT_THROW(xstate(0.51), std::domain_error);
}

TEST(states, xstate_rank_at_most_two) {
    for (int k = 0; k <= 20; ++k) {
        const auto eig = hermitian_eig(xstate(k / 40.0).matrix());
        EXPECT_NEAR(eig.eigenvalues[2], 0.0, 1e-15);
        EXPECT_NEAR(eig.eigenvalues[3], 0.0, 1e-15);
    }
}

TEST(states, xstate_criterion_grid) {
    for (int k = 0; k <= 100; ++k) {
        const double x = k / 200.0;
        const bool expected = k == 0 || k == 50 || k == 100;
        EXPECT_EQ(zero_discord_verdict(xstate(x)).is_zero, expected) << "x = " << x;
    }
}

TEST(states, photon_pair_examples) {
    const double pi = std::numbers::pi;
    EXPECT_LE(max_abs_diff(photon_pair_state(pi / 4).matrix(), xstate(0.25).matrix()), 1e-15);
    EXPECT_LE(max_abs_diff(photon_pair_state(0.0).matrix(), xstate(0.5).matrix()), 1e-15);
    EXPECT_LE(max_abs_diff(photon_pair_state(pi / 3).matrix(), xstate(0.125).matrix()), 1e-15);
}

TEST(states, photon_pair_matches_xstate_family) {
    std::mt19937_64 rng(71);
    std::uniform_real_distribution<double> angle(0.0, std::numbers::pi / 2);
    std::uniform_int_distribution<int> turns(-3, 3);
    const ComplexMatrix z_on_b = tensor_product(ComplexMatrix::identity(2), sigma_z());
    for (int trial = 0; trial < 100; ++trial) {
        const double base = angle(rng);
        const double x = 0.5 * std::cos(base) * std::cos(base);
        // Shifts by pi leave the state unchanged.
        const double theta = base + turns(rng) * std::numbers::pi;
        EXPECT_LE(frobenius_norm(photon_pair_state(theta).matrix() - xstate(x).matrix()), 1e-12) << theta;
        // In the other half period cos*sin < 0 and the anti-diagonal flips
        // sign; a local sigma_z on B maps it back.
        const double mirrored = std::numbers::pi - base;
        EXPECT_LE(frobenius_norm(conjugate_by(z_on_b, photon_pair_state(mirrored).matrix()) - xstate(x).matrix()),
                  1e-12);
    }
}

TEST(states, product_state_examples) {
    const auto mixed = product_state(ComplexMatrix::identity(2) * 0.5, ComplexMatrix::identity(2) * 0.5);
    EXPECT_EQ(mixed.matrix(), ComplexMatrix::identity(4) * 0.25);

    const ComplexMatrix zero = ComplexMatrix::diagonal({1, 0});
    const ComplexMatrix plus{{0.5, 0.5}, {0.5, 0.5}};
    const auto pure = product_state(zero, plus);
    EXPECT_NEAR(von_neumann_entropy(pure.matrix()), 0.0, 1e-12);
    EXPECT_TRUE(zero_discord_verdict(pure).is_zero);

    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto rho = product_state(random_density(2 + seed % 3, 2, seed), random_density(2 + seed % 2, 2, seed + 1));
        EXPECT_TRUE(zero_discord_verdict(rho).is_zero);
    }
    EXPECT_THROW(product_state(ComplexMatrix::diagonal({0.5, 0.6}), plus), InvalidDensityMatrix);
}

TEST(states, random_density_examples) {
    const ComplexMatrix a = random_density(2, 2, 1);
    const ComplexMatrix b = random_density(2, 2, 2);
    EXPECT_NE(a, b);
    EXPECT_NO_THROW(require_density(a, 2));
    EXPECT_NO_THROW(require_density(b, 2));
    EXPECT_NEAR(von_neumann_entropy(random_density(4, 1, 3)), 0.0, 1e-12);
    EXPECT_EQ(random_density(3, 2, 42), random_density(3, 2, 42));
    EXPECT_THROW(random_density(2, 3, 1), std::invalid_argument);
    EXPECT_THROW(random_density(2, 0, 1), std::invalid_argument);
}

TEST(states, random_density_rank) {
    for (std::size_t rank = 1; rank <= 4; ++rank) {
        const auto eig = hermitian_eig(random_density(4, rank, rank));
        for (std::size_t k = 0; k < 4; ++k) {
            if (k < rank) {
                EXPECT_GT(eig.eigenvalues[k], 1e-6);
            } else {
                EXPECT_NEAR(eig.eigenvalues[k], 0.0, 1e-14);
            }
        }
    }
}

TEST(states, random_unitary_is_unitary_and_seeded) {
    for (std::size_t n = 1; n <= 8; ++n) {
        EXPECT_LE(unitarity_defect(random_unitary(n, n)), 1e-13);
    }
    EXPECT_EQ(random_unitary(3, 5), random_unitary(3, 5));
}

TEST(states, bell_state_examples) {
    const auto bell = bell_state();
    EXPECT_NEAR(von_neumann_entropy(partial_trace_a(bell)), 1.0, 1e-15);
    const auto v = zero_discord_verdict(bell);
    EXPECT_FALSE(v.is_zero);
    EXPECT_FALSE(v.all_normal);
    // Block (1,2) = [[0, 1/2], [0, 0]] is not normal.
    EXPECT_EQ(v.worst_normal_block, (BlockIndex{0, 1}));
}

TEST(states, pointer_coefficients_invariants) {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const std::size_t n = 1 + seed % 3;
        const std::size_t m = 1 + seed % 4;
        const auto c = random_pointer_coefficients(n, m, seed);
        double total = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                total += c(i, i, k).real();
                for (std::size_t j = 0; j < n; ++j) {
                    EXPECT_EQ(c(j, i, k), std::conj(c(i, j, k)));
                }
            }
            EXPECT_GE(hermitian_eig(c.slice(k)).eigenvalues.back(), -1e-10);
        }
        EXPECT_NEAR(total, 1.0, 1e-10);
    }
    // A non-PSD slice is rejected.
    EXPECT_THROW(PointerCoefficients::from_slices({ComplexMatrix{{1.0, 0.0}, {0.0, -0.5}},
                                                   ComplexMatrix{{0.5, 0.0}, {0.0, 0.0}}}),
                 std::domain_error);
}

TEST(states, pointer_state_reproduces_quarter_xstate) {
    // X-state(0.25) = 0.5 |++><++| + 0.5 |--><--|: with v = Hadamard the
    // k-slices are 0.5 |+><+| and 0.5 |-><-| on A.
    const ComplexMatrix plus{{0.25, 0.25}, {0.25, 0.25}};
    const ComplexMatrix minus{{0.25, -0.25}, {-0.25, 0.25}};
    const auto rho = pointer_state(PointerCoefficients::from_slices({plus, minus}), hadamard());
    EXPECT_LE(max_abs_diff(rho.matrix(), xstate(0.25).matrix()), 1e-15);
}

TEST(states, pointer_state_diagonal_coefficients) {
    const auto rho = pointer_state(
        PointerCoefficients::from_slices({ComplexMatrix::diagonal({0.1, 0.2}), ComplexMatrix::diagonal({0.3, 0.4})}),
        ComplexMatrix::identity(2));
    EXPECT_EQ(rho.matrix(), ComplexMatrix::diagonal({0.1, 0.3, 0.2, 0.4}));
    EXPECT_TRUE(separability_hint(block_partition(rho)));
}

TEST(states, pointer_state_always_zero_discord) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const std::size_t n = 1 + seed % 4;
        const std::size_t m = 2 + seed % 3;
        const auto rho = pointer_state(random_pointer_coefficients(n, m, seed), random_unitary(m, seed + 1));
        EXPECT_TRUE(zero_discord_verdict(rho).is_zero) << "seed " << seed;
    }
}

TEST(states, generators_pass_validation_and_are_deterministic) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        EXPECT_EQ(random_state(2, 3, 4, seed).matrix(), random_state(2, 3, 4, seed).matrix());
        const auto a = pointer_state(random_pointer_coefficients(3, 2, seed), random_unitary(2, seed));
        const auto b = pointer_state(random_pointer_coefficients(3, 2, seed), random_unitary(2, seed));
        EXPECT_EQ(a.matrix(), b.matrix());
        EXPECT_NO_THROW(validate(a.matrix(), 3, 2, 1e-10));
    }
}
