#pragma once

#include <cstdint>

#include <Eigen/Dense>

namespace tricho {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Largest singular value. Zero for empty matrices.
double spectral_norm(const Matrix& m);

/// Orthonormal basis (columns) of the range of a projector, taken as the left
/// singular vectors whose singular value is >= 0.5.
Matrix projector_range_basis(const Matrix& projector);

/// sup over nonzero x in span(basis) of |A x| / |x|, for an orthonormal basis.
/// Returns 0 when the basis has no columns.
double restricted_norm(const Matrix& a, const Matrix& basis);

/// Fixed seed unit vectors in R^n; identical on every platform for a given seed.
Matrix random_unit_vectors(int n, int count, std::uint64_t seed);

/// Identity followed by `samples` random unit columns.
Matrix basis_and_samples(int n, int samples, std::uint64_t seed);

} // namespace tricho
