#pragma once

// Grid checks of class membership, the transform's coefficient identity and
// the sharpness claims. Membership verdicts are approximate: the open-disk
// condition is sampled on a finite polar grid, not certified.

#include "vlambda/bounds.hpp"
#include "vlambda/power_series.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace vlambda {

struct MembershipGrid {
    std::vector<double> radii;
    std::size_t theta_points = 720;
    std::size_t phi_points = 720;
    /// Points whose series tail bound exceeds this are excluded.
    double eval_tolerance = 1e-10;

    /// r = 0.1 .. 0.995 (20 values) x 720 angles x 720 rotations.
    static MembershipGrid standard();
    std::string describe() const;
};

struct MembershipReport {
    bool is_member = false;
    /// max over phi of min over the grid of Re e^{i phi}(H(z) - beta).
    double margin = 0.0;
    /// Rotation attaining the margin, in (-pi, pi].
    double best_phi = 0.0;
    std::size_t evaluated_points = 0;
    std::size_t excluded_points = 0;
    std::string grid;
};

/// Samples of a unit-type functional H on a grid, reusable for several beta.
class SampledFunctional {
public:
    SampledFunctional(const PowerSeries& h, const MembershipGrid& grid);

    MembershipReport margin(double beta) const;
    /// Value at a grid node, for diagnostics.
    const std::vector<Complex>& samples() const noexcept { return samples_; }

private:
    std::vector<Complex> samples_;
    std::vector<Complex> hull_;
    std::size_t excluded_ = 0;
    std::size_t phi_points_ = 720;
    std::string grid_;
};

/// H = functional_H(f, alpha, gamma, delta) tested against p.beta.
MembershipReport membership_test(const PowerSeries& f, const ClassParams& p,
                                 const MembershipGrid& grid = MembershipGrid::standard());

MembershipReport membership_test_functional(const PowerSeries& h, double beta,
                                            const MembershipGrid& grid = MembershipGrid::standard());

/// Functional of V(extremal) for the target class of Theorem 1, W^delta(1,0),
/// built in power form: coefficient n is (n+delta)/delta * 2(1-beta) delta^2 tau_n / ((delta+n mu)(delta+n nu)).
PowerSeries thm1_transformed_extremal_functional(const ClassParams& source, const MomentSequence& tau,
                                                 std::size_t order);

/// Same for Theorem 2, where the target class is W^delta(alpha,gamma): coefficient n is 2(1-beta) tau_n.
PowerSeries thm2_transformed_extremal_functional(const ClassParams& source, const MomentSequence& tau,
                                                 std::size_t order);

struct IdentityReport {
    double max_deviation = 0.0;
    std::size_t worst_index = 0;
};

/// Compares coefficient n of (F/z)^delta (zF'/F), F = V(f), with tau_n times the
/// same coefficient for f. Deviation is relative to the largest right-hand coefficient.
IdentityReport transform_identity_check(const PowerSeries& f, const WeightSpec& w, double delta);

struct SharpnessReport {
    double target = 0.0;
    double achieved = 0.0;
    double tail_estimate = 0.0;
    double beta = 0.0;
    bool pass = false;
};

/// Coefficient series of the sharpness functional at z = -1, Euler summed.
/// beta must come from beta_thm1 (or its closed form) for the same inputs.
SharpnessReport sharpness_thm1(const ClassParams& p, const WeightSpec& w, const TargetParams& t,
                               double beta);
/// Computes beta with beta_thm1 first.
SharpnessReport sharpness_thm1(const ClassParams& p, const WeightSpec& w, const TargetParams& t);

SharpnessReport sharpness_thm2(const WeightSpec& w, const TargetParams& t, double beta);
SharpnessReport sharpness_thm2(const WeightSpec& w, const TargetParams& t);

struct HohlovKernelReport {
    bool pass = false;
    double n3_at_minus_one = 0.0;  ///< beta_2 from 2F1 values at -1
    double n3_series_at_minus_one = 0.0; ///< Euler sum of the N_3 coefficients
    double min_re_n3 = 0.0;
    Complex value_at_min; ///< N_3 at the minimizing grid point
    double n3_at_zero = 0.0;
    double beta = 0.0;
    double beta_check = 0.0; ///< 1 - 2(1-beta1)(1-beta2) recomputed
    std::size_t evaluated_points = 0;
    std::size_t excluded_points = 0;
};

/// N_3 as a power series (order terms), sampled on the grid; passes when
/// Re N_3(z) > N_3(-1) - 1e-8 at every evaluated point.
HohlovKernelReport hohlov_kernel_check(const HohlovParams& h, const ClassParams& p,
                                       const MembershipGrid& grid = MembershipGrid::standard(),
                                       std::size_t order = 8192);

/// Coefficients of N_3 up to the given order.
PowerSeries hohlov_n3_series(const HohlovParams& h, const ClassParams& p, std::size_t order);

} // namespace vlambda
