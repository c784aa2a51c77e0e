#pragma once

#include "ktrr/dataio.hpp"

#include <cstdint>

namespace ktrr::synthetic {

/// Concentric circles in the plane, `per_circle` points each at the given radii,
/// with isotropic Gaussian jitter of standard deviation `noise`.
Dataset concentric_circles(Index per_circle, double inner_radius, double outer_radius, double noise,
                           std::uint64_t seed);

/// Points drawn from `num_subspaces` random `sub_dim`-dimensional linear
/// subspaces of R^ambient_dim, `per_subspace` points each, unit-normalized.
Dataset linear_subspaces(Index num_subspaces, Index per_subspace, Index ambient_dim, Index sub_dim,
                         std::uint64_t seed);

/// Isotropic Gaussian blobs in R^dim around the given centers (rows).
Dataset gaussian_blobs(const Matrix& centers, Index per_blob, double spread, std::uint64_t seed);

}  // namespace ktrr::synthetic
