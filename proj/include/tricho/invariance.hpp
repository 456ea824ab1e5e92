#pragma once

#include "tricho/check_report.hpp"
#include "tricho/evolution.hpp"
#include "tricho/projectors.hpp"

#include <array>
#include <utility>
#include <vector>

namespace tricho {

/// Smallest/largest singular value below this means "not an isomorphism".
inline constexpr double kRankTolerance = 1e-10;

/// max over pairs and members of ||U(t,s) P_i(s) - P_i(t) U(t,s)||.
CheckReport check_invariance(const ProjectorFamily& family, const EvolutionOperator& op,
                             const std::vector<std::pair<double, double>>& pairs, double tol);

/// V_j(t,s) P_j(t): the inverse of U(t,s) restricted to Range P_j(s), composed with P_j(t).
///
/// Built from an orthonormal basis Q of Range P_j(s): with M = U(t,s) Q the result is
/// Q M^+ P_j(t). Throws NotStronglyInvariantError when M is rank deficient or the two
/// ranges differ in dimension. An empty range yields the zero matrix.
Matrix compute_restricted_inverse(const EvolutionOperator& op, const ProjectorFamily& family, int j, double t,
                                  double s);

/// The maps (t,s) -> V_j(t,s) P_j(t) for one j in {2,3}.
class InverseFamily {
public:
    InverseFamily(EvolutionOperator op, ProjectorFamily family, int j);

    int index() const noexcept { return j_; }
    Matrix evaluate(double t, double s) const;
    Matrix operator()(double t, double s) const { return evaluate(t, s); }

private:
    EvolutionOperator op_;
    ProjectorFamily family_;
    int j_;
};

/// The pair (U, P) that every trichotomy and norm check consumes.
class SplitSystem {
public:
    SplitSystem(EvolutionOperator op, ProjectorFamily family);

    const EvolutionOperator& op() const noexcept { return op_; }
    const ProjectorFamily& family() const noexcept { return family_; }
    int dimension() const noexcept { return op_.dimension(); }
    const InverseFamily& v2() const noexcept { return v2_; }
    const InverseFamily& v3() const noexcept { return v3_; }

private:
    EvolutionOperator op_;
    ProjectorFamily family_;
    InverseFamily v2_;
    InverseFamily v3_;
};

/// Residuals of v2..v6 for one inverse family; v4 is checked on the triples.
CheckReport check_inverse_axioms(const SplitSystem& system, int j,
                                 const std::vector<std::pair<double, double>>& pairs,
                                 const std::vector<std::array<double, 3>>& triples, double tol);

/// c1: P1 invariant. c2: P2, P3 invariant with invertible restrictions (v2, v3 within tol).
CheckReport check_compatible(const ProjectorFamily& family, const EvolutionOperator& op,
                             const std::vector<double>& grid, double tol);

} // namespace tricho
