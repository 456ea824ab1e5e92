#include "tricho/linalg.hpp"

#include <cstdint>
#include <random>

namespace tricho {

double spectral_norm(const Matrix& m)
{
    if (m.size() == 0) {
        return 0.0;
    }
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

Matrix projector_range_basis(const Matrix& projector)
{
    Eigen::JacobiSVD<Matrix> svd(projector, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    while (rank < sv.size() && sv(rank) >= 0.5) {
        ++rank;
    }
    return svd.matrixU().leftCols(rank);
}

double restricted_norm(const Matrix& a, const Matrix& basis)
{
    if (basis.cols() == 0) {
        return 0.0;
    }
    return spectral_norm(a * basis);
}

Matrix random_unit_vectors(int n, int count, std::uint64_t seed)
{
    // Raw engine output mapped by hand: the standard distributions are
    // implementation-defined and would break report determinism across toolchains.
    std::mt19937_64 engine(seed);
    Matrix out(n, count);
    for (int j = 0; j < count; ++j) {
        double norm = 0.0;
        do {
            for (int i = 0; i < n; ++i) {
                const double unit = static_cast<double>(engine() >> 11) * 0x1.0p-53;
                out(i, j) = 2.0 * unit - 1.0;
            }
            norm = out.col(j).norm();
        } while (norm < 1e-3);
        out.col(j) /= norm;
    }
    return out;
}

Matrix basis_and_samples(int n, int samples, std::uint64_t seed)
{
    Matrix out(n, n + samples);
    out.leftCols(n) = Matrix::Identity(n, n);
    if (samples > 0) {
        out.rightCols(samples) = random_unit_vectors(n, samples, seed);
    }
    return out;
}

} // namespace tricho
