// Copyright 2026 The ionload Authors
// SPDX-License-Identifier: Apache-2.0
#include "ionload/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/poisson.hpp>

#include "ionload/error.hpp"

namespace ionload {

namespace {

std::size_t index_of(const FitResult& fit, std::string_view name)
{
    for (std::size_t i = 0; i < fit.names.size(); ++i)
        if (fit.names[i] == name) return i;
    throw DomainError("fit '" + fit.model_id + "' has no parameter '" + std::string(name) + "'");
}

Eigen::VectorXd weights_of(std::span<const DataPoint> points, const FitOptions& options)
{
    Eigen::VectorXd w(static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double s = std::max(points[i].sem, options.sem_floor);
        if (!(s > 0)) throw DomainError("fit: sem_floor must be > 0 when a point has zero sem");
        w[static_cast<Eigen::Index>(i)] = 1.0 / (s * s);
    }
    return w;
}

void finish(FitResult& fit, const Eigen::MatrixXd& normal)
{
    Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || std::abs(normal.determinant()) == 0.0)
        throw FitError("fit '" + fit.model_id + "': singular normal matrix");
    fit.covariance = ldlt.solve(Eigen::MatrixXd::Identity(normal.rows(), normal.cols()));
    fit.covariance = 0.5 * (fit.covariance + fit.covariance.transpose());
    fit.sigmas = fit.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
}

}  // namespace

double FitResult::param(std::string_view name) const
{
    return params[static_cast<Eigen::Index>(index_of(*this, name))];
}

double FitResult::sigma(std::string_view name) const
{
    return sigmas[static_cast<Eigen::Index>(index_of(*this, name))];
}

FitResult fit_saturation(std::span<const DataPoint> points, const FitOptions& options)
{
    if (points.size() < 3) throw FitError("fit_saturation: need at least 3 points");
    double max_y = 0.0, sum_x = 0.0;
    for (const auto& p : points) {
        if (!(p.x >= 0)) throw FitError("fit_saturation: powers must be non-negative");
        max_y = std::max(max_y, p.y);
        sum_x += p.x;
    }
    if (!(max_y > 0)) throw FitError("fit_saturation: all rates are zero or negative, nothing to fit");
    if (!(sum_x > 0)) throw FitError("fit_saturation: all powers are zero");

    const auto n = static_cast<Eigen::Index>(points.size());
    const Eigen::VectorXd w = weights_of(points, options);

    auto residuals = [&](const Eigen::Vector2d& p, Eigen::VectorXd& r, Eigen::MatrixXd* jac) {
        r.resize(n);
        if (jac) jac->resize(n, 2);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double x = points[static_cast<std::size_t>(i)].x;
            const double e = std::exp(-p[1] * x);
            r[i] = points[static_cast<std::size_t>(i)].y - p[0] * (1.0 - e);
            if (jac) {
                (*jac)(i, 0) = 1.0 - e;
                (*jac)(i, 1) = p[0] * x * e;
            }
        }
        return r.dot(w.asDiagonal() * r);
    };

    Eigen::Vector2d p(max_y, static_cast<double>(points.size()) / sum_x);
    Eigen::VectorXd r;
    Eigen::MatrixXd J;
    double chi2 = residuals(p, r, &J);
    double lambda = 1e-3;
    int it = 0;
    bool converged = false;
    for (; it < options.max_iterations; ++it) {
        const Eigen::Matrix2d A = J.transpose() * w.asDiagonal() * J;
        const Eigen::Vector2d g = J.transpose() * w.asDiagonal() * r;
        // Gradient in relative parameter units.
        const double gnorm = std::max(std::abs(g[0] * p[0]), std::abs(g[1] * p[1])) / std::max(1.0, chi2);
        if (gnorm < options.gradient_tolerance) {
            converged = true;
            break;
        }
        bool accepted = false;
        for (int tries = 0; tries < 60 && !accepted; ++tries) {
            Eigen::Matrix2d damped = A;
            damped.diagonal() *= (1.0 + lambda);
            const Eigen::Vector2d step = damped.ldlt().solve(g);
            const Eigen::Vector2d trial = p + step;
            if (trial[1] > 0 && std::isfinite(trial[0])) {
                Eigen::VectorXd r_trial;
                Eigen::MatrixXd J_trial;
                const double chi2_trial = residuals(trial, r_trial, &J_trial);
                if (chi2_trial <= chi2) {
                    const bool stalled = (step.cwiseAbs().array() <= 1e-15 * trial.cwiseAbs().array()).all();
                    p = trial;
                    r = std::move(r_trial);
                    J = std::move(J_trial);
                    chi2 = chi2_trial;
                    lambda = std::max(lambda / 10.0, 1e-12);
                    accepted = true;
                    if (stalled) converged = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if (!accepted || converged) {
            converged = true;
            ++it;
            break;
        }
    }
    if (!converged) throw FitError("fit_saturation: no convergence after " + std::to_string(it) + " iterations");

    FitResult fit;
    fit.model_id = "saturation";
    fit.names = {"a", "b"};
    fit.params = p;
    fit.chi_squared = chi2;
    fit.residual_norm = std::sqrt(chi2);
    fit.dof = static_cast<int>(n) - 2;
    fit.iterations = it;
    finish(fit, J.transpose() * w.asDiagonal() * J);
    return fit;
}

FitResult fit_linear(std::span<const DataPoint> points, const FitOptions& options)
{
    if (points.size() < 2) throw FitError("fit_linear: need at least 2 points");
    const Eigen::VectorXd w = weights_of(points, options);
    double S = 0, Sx = 0, Sy = 0, Sxx = 0, Sxy = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double wi = w[static_cast<Eigen::Index>(i)];
        const auto& p = points[i];
        S += wi;
        Sx += wi * p.x;
        Sy += wi * p.y;
        Sxx += wi * p.x * p.x;
        Sxy += wi * p.x * p.y;
    }
    const double delta = S * Sxx - Sx * Sx;
    if (!(delta > 1e-12 * S * Sxx) || !(delta > 0))
        throw FitError("fit_linear: singular design, all x values are identical");
    const double m = (S * Sxy - Sx * Sy) / delta;
    const double c = (Sxx * Sy - Sx * Sxy) / delta;

    FitResult fit;
    fit.model_id = "linear";
    fit.names = {"m", "c"};
    fit.params = Eigen::Vector2d(m, c);
    double chi2 = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double r = points[i].y - (m * points[i].x + c);
        chi2 += w[static_cast<Eigen::Index>(i)] * r * r;
    }
    fit.chi_squared = chi2;
    fit.residual_norm = std::sqrt(chi2);
    fit.dof = static_cast<int>(points.size()) - 2;
    fit.covariance.resize(2, 2);
    fit.covariance << S / delta, -Sx / delta, -Sx / delta, Sxx / delta;
    fit.sigmas = fit.covariance.diagonal().cwiseSqrt();
    return fit;
}

PoissonFit poisson_mle(std::span<const int> counts)
{
    if (counts.empty()) throw DomainError("poisson_mle: empty count list");
    long long total = 0;
    int k_max = 0;
    for (int c : counts) {
        if (c < 0) throw DomainError("poisson_mle: counts must be non-negative");
        total += c;
        k_max = std::max(k_max, c);
    }
    const double n = static_cast<double>(counts.size());
    const double lambda = static_cast<double>(total) / n;

    PoissonFit out;
    out.fit.model_id = "poisson";
    out.fit.names = {"lambda"};
    out.fit.params = Eigen::VectorXd::Constant(1, lambda);
    out.fit.covariance = Eigen::MatrixXd::Constant(1, 1, lambda / n);
    out.fit.sigmas = Eigen::VectorXd::Constant(1, std::sqrt(lambda / n));
    out.fit.dof = static_cast<int>(counts.size()) - 1;

    if (lambda == 0.0) {
        out.bins = 1;
        return out;
    }

    // Observed and expected per k, last bin holding the upper tail.
    std::vector<double> observed(static_cast<std::size_t>(k_max) + 1, 0.0);
    for (int c : counts) observed[static_cast<std::size_t>(c)] += 1.0;
    const boost::math::poisson_distribution<double> dist(lambda);
    std::vector<double> expected(observed.size());
    for (int k = 0; k < k_max; ++k) expected[static_cast<std::size_t>(k)] = n * boost::math::pdf(dist, k);
    expected.back() = n * boost::math::cdf(boost::math::complement(dist, k_max - 1));
    if (k_max == 0) expected.back() = n;

    std::vector<double> obs_bins, exp_bins;
    double o = 0.0, e = 0.0;
    for (std::size_t k = 0; k < observed.size(); ++k) {
        o += observed[k];
        e += expected[k];
        if (e >= 5.0) {
            obs_bins.push_back(o);
            exp_bins.push_back(e);
            o = e = 0.0;
        }
    }
    if (e > 0.0 || o > 0.0) {
        if (exp_bins.empty()) {
            obs_bins.push_back(o);
            exp_bins.push_back(e);
        } else {
            obs_bins.back() += o;
            exp_bins.back() += e;
        }
    }
    double chi2 = 0.0;
    for (std::size_t i = 0; i < obs_bins.size(); ++i) {
        const double d = obs_bins[i] - exp_bins[i];
        chi2 += d * d / exp_bins[i];
    }
    out.chi_squared = chi2;
    out.bins = static_cast<int>(obs_bins.size());
    out.dof = out.bins - 2;
    if (out.dof >= 1) {
        const boost::math::chi_squared_distribution<double> chi(out.dof);
        out.p_value = boost::math::cdf(boost::math::complement(chi, chi2));
    }
    out.fit.chi_squared = chi2;
    return out;
}

double mean(std::span<const double> values)
{
    if (values.empty()) throw DomainError("mean: empty input");
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sem(std::span<const double> values)
{
    if (values.size() < 2) throw DomainError("sem: need at least 2 values");
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    const double n = static_cast<double>(values.size());
    return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

double median(std::span<const double> values)
{
    if (values.empty()) throw DomainError("median: empty input");
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

Measurement normalize_rate(Measurement rate, Measurement power_actual, Measurement power_reference,
                           Measurement flux_actual, Measurement flux_reference)
{
    if (!(power_actual.value > 0) || !(flux_actual.value > 0))
        throw DomainError("normalize_rate: actual power and flux must be > 0");
    if (!(power_reference.value > 0) || !(flux_reference.value > 0))
        throw DomainError("normalize_rate: reference power and flux must be > 0");
    const double factor = (power_reference.value / power_actual.value) * (flux_reference.value / flux_actual.value);
    auto rel = [](const Measurement& m) { return m.sigma / m.value; };
    const double r2 = std::pow(rel(power_actual), 2) + std::pow(rel(power_reference), 2) +
                      std::pow(rel(flux_actual), 2) + std::pow(rel(flux_reference), 2);
    Measurement out;
    out.value = rate.value * factor;
    out.sigma = std::sqrt(std::pow(rate.sigma * factor, 2) + out.value * out.value * r2);
    return out;
}

Measurement enhancement_ratio(Measurement a, Measurement b)
{
    if (!(b.value > 0)) throw DomainError("enhancement_ratio: reference rate must be > 0");
    Measurement out;
    out.value = a.value / b.value;
    const double ra = a.value != 0 ? a.sigma / a.value : 0.0;
    const double rb = b.sigma / b.value;
    out.sigma = a.value != 0 ? std::abs(out.value) * std::sqrt(ra * ra + rb * rb) : a.sigma / b.value;
    return out;
}

double selectivity_bound(long total_ions, long impurity_ions)
{
    if (total_ions <= 0) throw DomainError("selectivity_bound: total must be > 0");
    if (impurity_ions < 0 || impurity_ions > total_ions)
        throw DomainError("selectivity_bound: impurity count must lie in [0, total]");
    return static_cast<double>(total_ions - impurity_ions) / static_cast<double>(total_ions);
}

}  // namespace ionload
