#pragma once

#include "tricho/check_report.hpp"
#include "tricho/linalg.hpp"

#include <array>
#include <functional>
#include <vector>

namespace tricho {

/// Three time-dependent projector families P1, P2, P3 on R^n.
///
/// Members are either constant matrices or callbacks sampled at query time.
/// Nothing is assumed about the members beyond what the checks establish.
class ProjectorFamily {
public:
    using Member = std::function<Matrix(double)>;

    static ProjectorFamily constant(Matrix p1, Matrix p2, Matrix p3);
    /// Coordinate projectors onto consecutive blocks of sizes n1, n2, n3.
    static ProjectorFamily coordinate_split(int n1, int n2, int n3);
    static ProjectorFamily from_callbacks(int n, Member p1, Member p2, Member p3);

    int dimension() const noexcept { return n_; }
    bool is_constant() const noexcept { return constant_; }

    /// P_i(t) for i in {1,2,3}. Throws StructuralError if a callback returns the wrong shape.
    Matrix member(int i, double t) const;

private:
    ProjectorFamily(int n, std::array<Member, 3> members, bool constant);

    int n_;
    std::array<Member, 3> members_;
    bool constant_;
};

/// Idempotency, o1 (sum is I) and o2 (pairwise products vanish) on a time grid.
CheckReport check_orthogonal(const ProjectorFamily& family, const std::vector<double>& grid, double tol);

} // namespace tricho
