#pragma once

// Sharp beta for the transform V_lambda^delta between W-classes.

#include "vlambda/class_params.hpp"
#include "vlambda/weights.hpp"

#include <string>
#include <utility>
#include <vector>

namespace vlambda {

struct HohlovParams {
    double a = 1.0;
    double b = 0.5;
    double c = 2.7;
    double beta1 = 0.0;
};

struct BoundResult {
    double beta = 0.0;
    std::string method; ///< "quadrature" or "closed-form"
    double error_estimate = 0.0;
    std::vector<std::pair<std::string, double>> diagnostics;

    /// Value of a diagnostic by name; NaN if absent.
    double diagnostic(const std::string& name) const;
};

struct Thm1Options {
    double tolerance = 1e-9;
    /// Also evaluate the formula with mu and nu exchanged (gamma > 0 only).
    bool swapped_diagnostic = true;
};

/// Theorem 1 bound by quadrature: beta = 1 - (1-xi)/2 / (1 - I). Diagnostics
/// carry I and, for gamma > 0 with mu != nu, the value with mu and nu exchanged.
BoundResult beta_thm1(const ClassParams& p, const WeightSpec& w, const TargetParams& t,
                      const Thm1Options& opt = {});

/// The Bernardi corollary: 3F2/4F3 (gamma > 0) or 2F1/3F2 (gamma = 0) at -1.
BoundResult beta_thm1_bernardi_closed(const ClassParams& p, double c, const TargetParams& t);

/// Theorem 2: r = -int lambda(t)(1 - k t)/(1 + t) dt, k = (1+xi)/(1-xi), beta = r/(1+r).
BoundResult beta_thm2(const WeightSpec& w, const TargetParams& t, double tol = 1e-11);

BoundResult beta_thm2_bernardi_closed(double c, const TargetParams& t);

struct HohlovWeights {
    double w0 = 0.0;
    double w1 = 0.0;
    double w2 = 0.0;
};

/// Coefficients of 2F1(a,b;c;.), 2F1(a+1,b;c;.), 2F1(a+2,b;c;.) in N_3; they sum to 1.
HohlovWeights hohlov_weights(const HohlovParams& h, const ClassParams& p);

/// beta_2 = w0 2F1(a,b;c;-1) + w1 2F1(a+1,b;c;-1) + w2 2F1(a+2,b;c;-1).
double beta2_hohlov(const HohlovParams& h, const ClassParams& p);

/// beta_2 of the a = 1 specialization, written out separately.
double beta2_carlson_shaffer(double b, double c, const ClassParams& p);

struct HohlovValidation {
    bool valid = true;
    /// Human-readable description of the first failed condition; empty if valid.
    std::string first_violation;
    double e1 = 0.0;
    double e2 = 0.0;
    double min_e3 = 0.0;
    long min_e3_index = 0;
    double min_n4 = 0.0;
    double min_n4_t = 0.0;
};

/// Hypotheses of the Hohlov theorem and the sign of the N_4 expansion
/// (e_1, e_2, e_3(n) for n <= 200, N_4 on 1000 interior points). Report only.
HohlovValidation validate_hohlov(const HohlovParams& h, const ClassParams& p);

/// e_3(n) of the N_4 expansion.
double hohlov_e3(const HohlovParams& h, const ClassParams& p, double n);

/// beta with 1 - beta = 2 (1 - beta1)(1 - beta2).
double combine_duality(double beta1, double beta2);

/// beta of the Hohlov theorem: combine_duality(h.beta1, beta2_hohlov(h, p)).
BoundResult beta_thm3(const HohlovParams& h, const ClassParams& p);

} // namespace vlambda
