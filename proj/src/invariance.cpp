#include "tricho/invariance.hpp"

#include "tricho/errors.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace tricho {

namespace {

std::string at(double t, double s)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, " at (t=%g, s=%g)", t, s);
    return buf;
}

void require_index(int j)
{
    if (j != 2 && j != 3) {
        throw ArgumentError("restricted inverses exist for j in {2,3}, got " + std::to_string(j));
    }
}

} // namespace

CheckReport check_invariance(const ProjectorFamily& family, const EvolutionOperator& op,
                             const std::vector<std::pair<double, double>>& pairs, double tol)
{
    if (family.dimension() != op.dimension()) {
        throw StructuralError("projector family and evolution operator differ in dimension");
    }
    CheckReport report;
    report.name = "invariance";
    report.tol = tol;
    report.record("commutation", 0.0);
    for (const auto& [t, s] : pairs) {
        if (!(t >= s) || !(s >= 0.0)) {
            throw DomainError("invariance pair outside Delta" + at(t, s));
        }
        const Matrix u = op(t, s);
        for (int i = 1; i <= 3; ++i) {
            report.record("commutation", spectral_norm(u * family.member(i, s) - family.member(i, t) * u));
        }
    }
    report.finalize();
    return report;
}

Matrix compute_restricted_inverse(const EvolutionOperator& op, const ProjectorFamily& family, int j, double t,
                                  double s)
{
    require_index(j);
    const int n = op.dimension();
    const Matrix pt = family.member(j, t);
    const Matrix basis_s = projector_range_basis(family.member(j, s));
    const Matrix basis_t = projector_range_basis(pt);
    if (basis_s.cols() != basis_t.cols()) {
        throw NotStronglyInvariantError("Range P" + std::to_string(j) + " changes dimension" + at(t, s));
    }
    if (basis_s.cols() == 0) {
        return Matrix::Zero(n, n);
    }
    const Matrix image = op(t, s) * basis_s;
    Eigen::JacobiSVD<Matrix> svd(image, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double largest = sv(0);
    const double smallest = sv(sv.size() - 1);
    if (!(largest > 0.0) || !(smallest > kRankTolerance * largest)) {
        throw NotStronglyInvariantError("U(t,s) restricted to Range P" + std::to_string(j) + " is rank deficient" +
                                        at(t, s));
    }
    const Matrix pinv = svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
    return basis_s * pinv * pt;
}

InverseFamily::InverseFamily(EvolutionOperator op, ProjectorFamily family, int j)
    : op_(std::move(op)), family_(std::move(family)), j_(j)
{
    require_index(j);
    if (family_.dimension() != op_.dimension()) {
        throw StructuralError("inverse family: projector family and operator differ in dimension");
    }
}

Matrix InverseFamily::evaluate(double t, double s) const
{
    return compute_restricted_inverse(op_, family_, j_, t, s);
}

SplitSystem::SplitSystem(EvolutionOperator op, ProjectorFamily family)
    : op_(op), family_(family), v2_(op, family, 2), v3_(std::move(op), std::move(family), 3)
{
}

CheckReport check_inverse_axioms(const SplitSystem& system, int j,
                                 const std::vector<std::pair<double, double>>& pairs,
                                 const std::vector<std::array<double, 3>>& triples, double tol)
{
    require_index(j);
    const auto& inv = j == 2 ? system.v2() : system.v3();
    const auto& fam = system.family();
    const auto& op = system.op();
    CheckReport report;
    report.name = "inverse_axioms_P" + std::to_string(j);
    report.tol = tol;
    for (const char* key : {"v2", "v3", "v4", "v5", "v6"}) {
        report.record(key, 0.0);
    }
    for (const auto& [t, s] : pairs) {
        const Matrix w = inv(t, s);
        const Matrix u = op(t, s);
        const Matrix ps = fam.member(j, s);
        const Matrix pt = fam.member(j, t);
        report.record("v2", spectral_norm(u * w - pt));
        report.record("v3", spectral_norm(w * u * ps - ps));
        report.record("v5", spectral_norm(w - ps * w));
        if (t == s) {
            report.record("v6", std::max(spectral_norm(w - pt), spectral_norm(pt * w - pt)));
        }
    }
    for (const auto& [t, s, t0] : triples) {
        report.record("v4", spectral_norm(inv(t, t0) - inv(s, t0) * inv(t, s)));
    }
    report.finalize();
    return report;
}

CheckReport check_compatible(const ProjectorFamily& family, const EvolutionOperator& op,
                             const std::vector<double>& grid, double tol)
{
    if (grid.empty()) {
        throw ArgumentError("check_compatible: empty grid");
    }
    if (family.dimension() != op.dimension()) {
        throw StructuralError("projector family and evolution operator differ in dimension");
    }
    CheckReport report;
    report.name = "compatibility";
    report.tol = tol;
    const auto pairs = grid_pairs(grid);
    for (const char* key : {"c1_invariance_P1", "invariance_P2", "invariance_P3", "v2_P2", "v3_P2", "v2_P3", "v3_P3"}) {
        report.record(key, 0.0);
    }
    std::array<bool, 2> collapsed{false, false};
    for (const auto& [t, s] : pairs) {
        const Matrix u = op(t, s);
        for (int i = 1; i <= 3; ++i) {
            const double r = spectral_norm(u * family.member(i, s) - family.member(i, t) * u);
            report.record(i == 1 ? "c1_invariance_P1" : "invariance_P" + std::to_string(i), r);
        }
        for (int j = 2; j <= 3; ++j) {
            auto& flag = collapsed[static_cast<std::size_t>(j - 2)];
            if (flag) {
                continue;
            }
            try {
                const Matrix w = compute_restricted_inverse(op, family, j, t, s);
                const Matrix ps = family.member(j, s);
                const Matrix pt = family.member(j, t);
                report.record("v2_P" + std::to_string(j), spectral_norm(u * w - pt));
                report.record("v3_P" + std::to_string(j), spectral_norm(w * u * ps - ps));
            } catch (const NotStronglyInvariantError& e) {
                flag = true;
                report.force_fail(std::string("c2 violated: ") + e.what());
            }
        }
    }
    report.finalize();
    return report;
}

} // namespace tricho
