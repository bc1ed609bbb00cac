// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ionload {

struct DataPoint {
    double x = 0.0;
    double y = 0.0;
    double sem = 0.0;
};

struct FitOptions {
    double sem_floor = 1e-3;          // replaces smaller (or zero) uncertainties
    int max_iterations = 500;
    double gradient_tolerance = 1e-9;
};

struct FitResult {
    std::string model_id;
    std::vector<std::string> names;
    Eigen::VectorXd params;
    Eigen::VectorXd sigmas;
    Eigen::MatrixXd covariance;
    double residual_norm = 0.0;   // sqrt of the weighted sum of squared residuals
    double chi_squared = 0.0;
    int dof = 0;
    int iterations = 0;

    double param(std::string_view name) const;
    double sigma(std::string_view name) const;
};

/// f(x) = a (1 - exp(-b x))
inline double saturation_curve(double x, double a, double b) { return -a * std::expm1(-b * x); }

/// Weighted Levenberg-Marquardt fit of the saturation curve, started at a = max y, b = 1 / mean x.
FitResult fit_saturation(std::span<const DataPoint> points, const FitOptions& options = {});

/// Weighted straight line y = m x + c, closed form.
FitResult fit_linear(std::span<const DataPoint> points, const FitOptions& options = {});

struct PoissonFit {
    FitResult fit;           // single parameter "lambda"
    double chi_squared = 0.0;
    int bins = 0;            // after pooling to expected >= 5
    int dof = 0;
    double p_value = 1.0;    // 1 when dof < 1
};

PoissonFit poisson_mle(std::span<const int> counts);

double mean(std::span<const double> values);
/// Sample standard deviation (n - 1) over sqrt(n).
double sem(std::span<const double> values);
double median(std::span<const double> values);

struct Measurement {
    double value = 0.0;
    double sigma = 0.0;
};

/// R' = R (P_ref / P_act) (F_ref / F_act), first-order propagation of relative errors.
Measurement normalize_rate(Measurement rate, Measurement power_actual, Measurement power_reference,
                           Measurement flux_actual, Measurement flux_reference);

/// r_a / r_b with relative errors added in quadrature.
Measurement enhancement_ratio(Measurement a, Measurement b);

/// (total - impurity) / total
double selectivity_bound(long total_ions, long impurity_ions);

}  // namespace ionload
