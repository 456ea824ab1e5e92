#include "tricho/projectors.hpp"

#include "tricho/errors.hpp"

#include <algorithm>
#include <cmath>

namespace tricho {

void CheckReport::record(const std::string& condition, double value)
{
    for (auto& [key, worst] : residuals) {
        if (key == condition) {
            // NaN must stick: a NaN residual is a failure, not something to overwrite.
            if (std::isnan(value) || value > worst) {
                worst = value;
            }
            return;
        }
    }
    residuals.emplace_back(condition, value);
}

double CheckReport::residual(const std::string& condition) const
{
    for (const auto& [key, value] : residuals) {
        if (key == condition) {
            return value;
        }
    }
    return 0.0;
}

double CheckReport::worst() const
{
    double w = 0.0;
    for (const auto& [key, value] : residuals) {
        if (std::isnan(value)) {
            return value;
        }
        w = std::max(w, value);
    }
    return w;
}

void CheckReport::finalize()
{
    pass = !forced_fail_;
    for (const auto& [key, value] : residuals) {
        if (!(value <= tol)) {
            pass = false;
        }
    }
}

void CheckReport::force_fail(std::string note)
{
    forced_fail_ = true;
    pass = false;
    notes.push_back(std::move(note));
}

ProjectorFamily::ProjectorFamily(int n, std::array<Member, 3> members, bool constant)
    : n_(n), members_(std::move(members)), constant_(constant)
{
}

ProjectorFamily ProjectorFamily::constant(Matrix p1, Matrix p2, Matrix p3)
{
    const auto n = p1.rows();
    for (const Matrix* p : {&p1, &p2, &p3}) {
        if (p->rows() != n || p->cols() != n) {
            throw StructuralError("projector members must share one square dimension");
        }
    }
    if (n == 0) {
        throw StructuralError("projector family needs a positive dimension");
    }
    auto hold = [](Matrix m) { return [m = std::move(m)](double) { return m; }; };
    return ProjectorFamily(static_cast<int>(n), {hold(std::move(p1)), hold(std::move(p2)), hold(std::move(p3))},
                           true);
}

ProjectorFamily ProjectorFamily::coordinate_split(int n1, int n2, int n3)
{
    if (n1 < 0 || n2 < 0 || n3 < 0 || n1 + n2 + n3 == 0) {
        throw ArgumentError("coordinate split needs nonnegative block sizes with a positive sum");
    }
    const int n = n1 + n2 + n3;
    Matrix p1 = Matrix::Zero(n, n);
    Matrix p2 = Matrix::Zero(n, n);
    Matrix p3 = Matrix::Zero(n, n);
    p1.topLeftCorner(n1, n1).setIdentity();
    p2.block(n1, n1, n2, n2).setIdentity();
    p3.bottomRightCorner(n3, n3).setIdentity();
    return constant(std::move(p1), std::move(p2), std::move(p3));
}

ProjectorFamily ProjectorFamily::from_callbacks(int n, Member p1, Member p2, Member p3)
{
    if (n <= 0) {
        throw StructuralError("projector family needs a positive dimension");
    }
    if (!p1 || !p2 || !p3) {
        throw ArgumentError("projector callbacks must be callable");
    }
    return ProjectorFamily(n, {std::move(p1), std::move(p2), std::move(p3)}, false);
}

Matrix ProjectorFamily::member(int i, double t) const
{
    if (i < 1 || i > 3) {
        throw ArgumentError("projector index must be 1, 2 or 3");
    }
    Matrix m = members_[static_cast<std::size_t>(i - 1)](t);
    if (m.rows() != n_ || m.cols() != n_) {
        throw StructuralError("projector P" + std::to_string(i) + " has shape " + std::to_string(m.rows()) + "x" +
                              std::to_string(m.cols()) + ", expected " + std::to_string(n_) + "x" +
                              std::to_string(n_));
    }
    return m;
}

CheckReport check_orthogonal(const ProjectorFamily& family, const std::vector<double>& grid, double tol)
{
    if (grid.empty()) {
        throw ArgumentError("check_orthogonal: empty grid");
    }
    CheckReport report;
    report.name = "orthogonality";
    report.tol = tol;
    const int n = family.dimension();
    const Matrix id = Matrix::Identity(n, n);
    for (double t : grid) {
        const std::array<Matrix, 3> p{family.member(1, t), family.member(2, t), family.member(3, t)};
        double idem = 0.0;
        double cross = 0.0;
        for (std::size_t i = 0; i < 3; ++i) {
            idem = std::max(idem, spectral_norm(p[i] * p[i] - p[i]));
            for (std::size_t j = 0; j < 3; ++j) {
                if (i != j) {
                    cross = std::max(cross, spectral_norm(p[i] * p[j]));
                }
            }
        }
        report.record("idempotency", idem);
        report.record("sum_identity", spectral_norm(p[0] + p[1] + p[2] - id));
        report.record("mutual_annihilation", cross);
    }
    report.finalize();
    return report;
}

} // namespace tricho
