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
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qdiscord/density.hpp"
#include "qdiscord/linalg.hpp"

namespace qdiscord {

/// Bloch angles of a qubit measurement:
/// |k1> = cos(theta/2)|1> + e^{i phi} sin(theta/2)|2>,
/// |k2> = sin(theta/2)|1> - e^{i phi} cos(theta/2)|2>.
struct QubitProjectorParams {
    double theta = 0.0;
    double phi = 0.0;
};

inline ProjectorBasis qubit_basis(QubitProjectorParams p) {
    const double c = std::cos(p.theta / 2.0);
    const double s = std::sin(p.theta / 2.0);
    const complex_t e = std::polar(1.0, p.phi);
    return ProjectorBasis::from_unitary({{c, s}, {e * s, -e * c}}, 1e-12);
}

struct GridSpec {
    int n_theta = 64;
    int n_phi = 128;
};

constexpr int kDefaultRefineSteps = 40;
constexpr double kDiscordRefineStep = 1e-6;
constexpr double kDisturbanceRefineStep = 1e-12;

/// sum_k p_k S(rho_k) over outcomes with non-negligible probability.
inline double conditional_entropy(const BipartiteDensityMatrix &rho, const ProjectorBasis &basis) {
    double h = 0.0;
    for (const auto &cs : conditional_states(rho, basis)) {
        if (!cs.negligible) {
            h += cs.probability * detail::entropy_unchecked(cs.state);
        }
    }
    return h;
}

/// H(A|{k}) - [S(rho) - S(rho_B)] for one measurement basis on B.
inline double discord_for_basis(const BipartiteDensityMatrix &rho, const ProjectorBasis &basis) {
    return conditional_entropy(rho, basis) - detail::entropy_unchecked(rho.matrix()) +
           detail::entropy_unchecked(partial_trace_a(rho));
}

/// Closed-form discord of the two-qubit X-state family.
inline double xstate_discord_closed_form(double x) {
    if (!(x >= 0.0 && x <= 0.5)) {
        throw std::domain_error("xstate_discord_closed_form: x must lie in [0, 0.5]");
    }
    auto h = [](double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; };
    const double root = std::sqrt(2.0 * x * (1.0 - 2.0 * x));
    const double value = -1.0 + h(2.0 * x) + h(1.0 - 2.0 * x) + h(0.5 - root) + h(0.5 + root);
    return std::max(value, 0.0);
}

/// sum_k p_k rho_k (x) |k><k|: the state after B is measured and the
/// outcome forgotten.
inline BipartiteDensityMatrix measured_state(const BipartiteDensityMatrix &rho, const ProjectorBasis &basis) {
    const std::size_t m = rho.dim_b();
    ComplexMatrix out(rho.dim(), rho.dim());
    const auto states = conditional_states(rho, basis);
    for (std::size_t k = 0; k < m; ++k) {
        if (states[k].negligible) {
            continue;
        }
        out += tensor_product(states[k].state * states[k].probability, basis.projector(k));
    }
    return {BipartiteDensityMatrix::unchecked_t{}, std::move(out), rho.dim_a(), m};
}

/// ||measured_state(rho, basis) - rho||_F.
inline double disturbance(const BipartiteDensityMatrix &rho, const ProjectorBasis &basis) {
    return frobenius_norm(measured_state(rho, basis).matrix() - rho.matrix());
}

struct QubitSearchResult {
    double value = 0.0;
    QubitProjectorParams argmin;
    int refinement_iterations = 0;
};

namespace detail {

/// Grid scan over theta in [0, pi), phi in [0, 2 pi), then a coordinate
/// pattern search whose step halves whenever no axis move improves.
/// Ties keep the lexicographically first (theta, phi).
inline QubitSearchResult search_qubit_bases(const std::function<double(QubitProjectorParams)> &f, GridSpec grid,
                                            int refine_steps, double min_step) {
    if (grid.n_theta < 1 || grid.n_phi < 1) {
        throw std::invalid_argument("qubit search: grid sizes must be positive");
    }
    const double pi = std::numbers::pi;
    const double dtheta = pi / grid.n_theta;
    const double dphi = 2.0 * pi / grid.n_phi;

    QubitSearchResult best{std::numeric_limits<double>::infinity(), {}, 0};
    for (int i = 0; i < grid.n_theta; ++i) {
        for (int j = 0; j < grid.n_phi; ++j) {
            const QubitProjectorParams p{i * dtheta, j * dphi};
            const double v = f(p);
            if (v < best.value) {
                best.value = v;
                best.argmin = p;
            }
        }
    }

    auto wrap_phi = [pi](double phi) {
        phi = std::fmod(phi, 2.0 * pi);
        return phi < 0.0 ? phi + 2.0 * pi : phi;
    };
    double step_theta = dtheta;
    double step_phi = dphi;
    for (int level = 0; level < refine_steps && std::max(step_theta, step_phi) >= min_step; ++level) {
        for (int moves = 0; moves < 64; ++moves) {
            const QubitProjectorParams here = best.argmin;
            const QubitProjectorParams candidates[] = {
                {std::clamp(here.theta - step_theta, 0.0, pi), here.phi},
                {std::clamp(here.theta + step_theta, 0.0, pi), here.phi},
                {here.theta, wrap_phi(here.phi - step_phi)},
                {here.theta, wrap_phi(here.phi + step_phi)},
            };
            bool improved = false;
            for (const auto &c : candidates) {
                const double v = f(c);
                if (v < best.value) {
                    best.value = v;
                    best.argmin = c;
                    improved = true;
                }
            }
            if (!improved) {
                break;
            }
        }
        step_theta *= 0.5;
        step_phi *= 0.5;
        best.refinement_iterations = level + 1;
    }
    return best;
}

inline void require_qubit_apparatus(const BipartiteDensityMatrix &rho, const char *who) {
    if (rho.dim_b() != 2) {
        throw std::invalid_argument(std::string(who) + ": apparatus subsystem B must be a qubit (dim_b = 2)");
    }
}

} // namespace detail

struct DiscordEstimate {
    double value = 0.0; // bits
    QubitProjectorParams argmin;
    GridSpec grid;
    int refinement_iterations = 0;
};

constexpr double kNegativeDiscordClamp = 1e-9;

/// Minimum of discord_for_basis over all projective qubit measurements on B.
inline DiscordEstimate minimize_discord_qubit(const BipartiteDensityMatrix &rho, GridSpec grid = {},
                                              int refine_steps = kDefaultRefineSteps) {
    detail::require_qubit_apparatus(rho, "minimize_discord_qubit");
    const double offset = detail::entropy_unchecked(partial_trace_a(rho)) - detail::entropy_unchecked(rho.matrix());
    const auto r = detail::search_qubit_bases(
        [&](QubitProjectorParams p) { return conditional_entropy(rho, qubit_basis(p)) + offset; }, grid, refine_steps,
        kDiscordRefineStep);
    double value = r.value;
    if (value < 0.0 && value > -kNegativeDiscordClamp) {
        value = 0.0;
    }
    return {value, r.argmin, grid, r.refinement_iterations};
}

struct DisturbanceEstimate {
    double value = 0.0;
    QubitProjectorParams argmin;
    int refinement_iterations = 0;
};

/// min over qubit bases on B of ||measured_state - rho||_F. Zero exactly
/// when some local projective measurement leaves the state unchanged.
inline DisturbanceEstimate disturbance_search(const BipartiteDensityMatrix &rho, GridSpec grid = {},
                                              int refine_steps = kDefaultRefineSteps) {
    detail::require_qubit_apparatus(rho, "disturbance_min");
    // Squared norm is smooth at a zero, so the pattern search can localize it.
    const auto r = detail::search_qubit_bases(
        [&](QubitProjectorParams p) {
            const double d = disturbance(rho, qubit_basis(p));
            return d * d;
        },
        grid, refine_steps, kDisturbanceRefineStep);
    return {std::sqrt(r.value), r.argmin, r.refinement_iterations};
}

inline double disturbance_min(const BipartiteDensityMatrix &rho, GridSpec grid = {},
                              int refine_steps = kDefaultRefineSteps) {
    return disturbance_search(rho, grid, refine_steps).value;
}

} // namespace qdiscord
