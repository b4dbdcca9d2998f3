#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "causalnet/errors.hpp"
#include "causalnet/linalg.hpp"
#include "causalnet/mathfn.hpp"

namespace causalnet {

// NB2 parameterization throughout: mean mu = exp(X beta), variance
// mu + mu^2/theta. The alternative alpha = 1/theta convention is reported
// alongside in outputs, never used internally.

namespace detail {

inline std::vector<double> linear_predictor(const dense_matrix& X,
                                            const std::vector<double>& beta) {
    std::vector<double> eta(X.rows, 0.0);
    for (std::size_t i = 0; i < X.rows; ++i)
        for (std::size_t j = 0; j < X.cols; ++j)
            eta[i] += X(i, j) * beta[j];
    return eta;
}

// -inf instead of a throw, for use inside line searches
inline double nb_loglik_guarded(const std::vector<double>& eta, double theta,
                                const std::vector<double>& y) {
    double ll = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (!(eta[i] < 700.0) || !std::isfinite(eta[i]))
            return -std::numeric_limits<double>::infinity();
        const double mu = std::exp(eta[i]);
        ll += std::lgamma(y[i] + theta) - std::lgamma(theta) - std::lgamma(y[i] + 1.0) +
              theta * std::log(theta / (theta + mu)) + y[i] * (eta[i] - std::log(theta + mu));
    }
    return ll;
}

}  // namespace detail

inline double nb_loglik(const std::vector<double>& beta, double theta, const dense_matrix& X,
                        const std::vector<double>& y) {
    if (beta.size() != X.cols || y.size() != X.rows)
        throw usage_error("nb_loglik: dimension mismatch");
    if (!(theta > 0.0))
        throw usage_error("nb_loglik: theta must be positive");
    const double ll = detail::nb_loglik_guarded(detail::linear_predictor(X, beta), theta, y);
    if (!std::isfinite(ll))
        throw convergence_error("nb_loglik: linear predictor overflow");
    return ll;
}

// analytic score in beta: sum_i (y_i - mu_i) theta / (theta + mu_i) x_i
inline std::vector<double> nb_score_beta(const std::vector<double>& beta, double theta,
                                         const dense_matrix& X, const std::vector<double>& y) {
    const auto eta = detail::linear_predictor(X, beta);
    std::vector<double> g(X.cols, 0.0);
    for (std::size_t i = 0; i < X.rows; ++i) {
        const double mu = std::exp(eta[i]);
        const double w = (y[i] - mu) * theta / (theta + mu);
        for (std::size_t j = 0; j < X.cols; ++j)
            g[j] += w * X(i, j);
    }
    return g;
}

inline double nb_dloglik_dtheta(const std::vector<double>& eta, double theta,
                                const std::vector<double>& y) {
    double d = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double mu = std::exp(eta[i]);
        d += digamma(y[i] + theta) - digamma(theta) + std::log(theta) + 1.0 -
             std::log(theta + mu) - (y[i] + theta) / (theta + mu);
    }
    return d;
}

inline double nb_d2loglik_dtheta2(const std::vector<double>& eta, double theta,
                                  const std::vector<double>& y) {
    double d = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double mu = std::exp(eta[i]);
        const double tm = theta + mu;
        d += trigamma(y[i] + theta) - trigamma(theta) + 1.0 / theta - 2.0 / tm +
             (y[i] + theta) / (tm * tm);
    }
    return d;
}

struct nb_fit {
    std::vector<std::string> names;
    std::vector<double> beta;
    std::vector<double> se;
    std::vector<double> z;
    std::vector<double> p;
    double theta = 0.0;
    double se_theta = 0.0;
    double log_likelihood = 0.0;
    double aic = 0.0;
    std::size_t n_obs = 0;
    bool converged = false;
    int outer_iterations = 0;
    std::vector<double> outer_trace;  // log-likelihood after each outer iteration
    std::string note;
};

struct nb_fit_options {
    int max_outer = 100;
    double tol_beta = 1e-8;
    double tol_log_theta = 1e-8;
    int max_irls = 60;
    double theta_floor = 1e-6;
    double theta_ceiling = 1e8;
};

namespace detail {

// One IRLS pass to convergence at fixed theta (Fisher scoring with step
// halving so the likelihood never slides backward). theta <= 0 selects the
// Poisson family, used for initialization.
inline bool irls_at_theta(const dense_matrix& X, const std::vector<double>& y, double theta,
                          std::vector<double>& beta, const nb_fit_options& opt) {
    const std::size_t n = X.rows, p = X.cols;
    auto loglik_of = [&](const std::vector<double>& b) {
        const auto eta = linear_predictor(X, b);
        if (theta > 0.0)
            return nb_loglik_guarded(eta, theta, y);
        double ll = 0.0;  // Poisson, constants dropped
        for (std::size_t i = 0; i < n; ++i) {
            if (!(eta[i] < 700.0))
                return -std::numeric_limits<double>::infinity();
            ll += y[i] * eta[i] - std::exp(eta[i]);
        }
        return ll;
    };
    double ll = loglik_of(beta);
    bool converged = false;
    for (int it = 0; it < opt.max_irls; ++it) {
        const auto eta = linear_predictor(X, beta);
        dense_matrix xtwx(p, p);
        std::vector<double> xtwz(p, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double mu = std::exp(std::min(eta[i], 700.0));
            const double w = theta > 0.0 ? mu * theta / (theta + mu) : mu;
            const double z = eta[i] + (y[i] - mu) / mu;
            for (std::size_t a = 0; a < p; ++a) {
                const double wxa = w * X(i, a);
                xtwz[a] += wxa * z;
                for (std::size_t b = a; b < p; ++b)
                    xtwx(a, b) += wxa * X(i, b);
            }
        }
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = 0; b < a; ++b)
                xtwx(a, b) = xtwx(b, a);
        std::vector<double> next;
        try {
            next = cholesky_solve(xtwx, xtwz);
        } catch (const convergence_error&) {
            return false;  // singular working information (separation etc.)
        }
        // step halving toward the previous iterate if the likelihood drops
        double step = 1.0;
        std::vector<double> cand(p);
        double cand_ll = -std::numeric_limits<double>::infinity();
        for (int h = 0; h < 40; ++h) {
            for (std::size_t j = 0; j < p; ++j)
                cand[j] = beta[j] + step * (next[j] - beta[j]);
            cand_ll = loglik_of(cand);
            if (std::isfinite(cand_ll) && cand_ll >= ll - 1e-10)
                break;
            step *= 0.5;
        }
        if (!std::isfinite(cand_ll))
            return false;
        double delta = 0.0;
        for (std::size_t j = 0; j < p; ++j)
            delta = std::max(delta, std::fabs(cand[j] - beta[j]));
        beta = cand;
        ll = cand_ll;
        if (delta < 1e-12) {
            converged = true;
            break;
        }
    }
    return converged;
}

// Safeguarded Newton ascent in log(theta) at fixed beta.
inline double newton_log_theta(const std::vector<double>& eta, const std::vector<double>& y,
                               double theta, const nb_fit_options& opt) {
    double zeta = std::log(theta);
    double ll = nb_loglik_guarded(eta, theta, y);
    for (int it = 0; it < 60; ++it) {
        const double th = std::exp(zeta);
        const double d1 = nb_dloglik_dtheta(eta, th, y) * th;
        const double d2 = nb_d2loglik_dtheta2(eta, th, y) * th * th + d1;
        double step = d2 < 0.0 ? -d1 / d2 : (d1 > 0.0 ? 1.0 : -1.0);
        if (!std::isfinite(step))
            break;
        step = std::clamp(step, -5.0, 5.0);
        double cand = zeta, cand_ll = ll;
        double scale = 1.0;
        for (int h = 0; h < 40; ++h) {
            cand = std::clamp(zeta + scale * step, std::log(opt.theta_floor),
                              std::log(opt.theta_ceiling));
            cand_ll = nb_loglik_guarded(eta, std::exp(cand), y);
            if (cand_ll >= ll - 1e-10)
                break;
            scale *= 0.5;
        }
        if (cand_ll < ll) {
            break;
        }
        const double moved = std::fabs(cand - zeta);
        zeta = cand;
        ll = cand_ll;
        if (moved < 1e-12)
            break;
    }
    return std::exp(zeta);
}

}  // namespace detail

// Joint maximum likelihood for (beta, theta): alternate IRLS for beta at
// fixed theta with safeguarded Newton for log theta. beta starts at the
// Poisson fit; theta starts at the method-of-moments estimate.
inline nb_fit fit_nb(const dense_matrix& X, const std::vector<double>& y,
                     std::vector<std::string> names, nb_fit_options opt = {}) {
    const std::size_t n = X.rows, p = X.cols;
    if (y.size() != n)
        throw usage_error("fit_nb: X and y row counts differ");
    if (p == 0 || n <= p)
        throw usage_error("fit_nb: need more observations than predictors");
    if (names.size() != p)
        throw usage_error("fit_nb: one name per column required");
    double ybar = 0.0;
    for (double v : y) {
        if (v < 0.0 || v != std::floor(v))
            throw data_error("fit_nb: y must be nonnegative integer counts");
        ybar += v;
    }
    ybar /= static_cast<double>(n);

    nb_fit fit;
    fit.names = std::move(names);
    fit.n_obs = n;

    // Poisson start for beta
    std::vector<double> beta(p, 0.0);
    {
        double base = std::log(std::max(ybar, 1e-8));
        beta[0] = base;  // assumes column 0 is the intercept; harmless otherwise
        detail::irls_at_theta(X, y, 0.0, beta, opt);
    }

    // method-of-moments start for theta
    double s2 = 0.0;
    for (double v : y)
        s2 += (v - ybar) * (v - ybar);
    s2 /= static_cast<double>(n > 1 ? n - 1 : 1);
    double theta;
    if (s2 > ybar) {
        theta = std::max(0.1, ybar * ybar / (s2 - ybar));
    } else {
        theta = 1e6;
        fit.note = "variance does not exceed mean; near-Poisson initialization";
    }

    bool converged = false;
    int outer = 0;
    for (; outer < opt.max_outer; ++outer) {
        const std::vector<double> beta_prev = beta;
        const double log_theta_prev = std::log(theta);
        detail::irls_at_theta(X, y, theta, beta, opt);
        theta = detail::newton_log_theta(detail::linear_predictor(X, beta), y, theta, opt);
        fit.outer_trace.push_back(
            detail::nb_loglik_guarded(detail::linear_predictor(X, beta), theta, y));
        double dbeta = 0.0;
        for (std::size_t j = 0; j < p; ++j)
            dbeta = std::max(dbeta, std::fabs(beta[j] - beta_prev[j]));
        const double dlt = std::fabs(std::log(theta) - log_theta_prev);
        if (dbeta < opt.tol_beta && dlt < opt.tol_log_theta) {
            converged = true;
            ++outer;
            break;
        }
    }

    fit.beta = beta;
    fit.theta = theta;
    fit.converged = converged;
    fit.outer_iterations = outer;
    fit.log_likelihood = nb_loglik(beta, theta, X, y);
    fit.aic = 2.0 * static_cast<double>(p + 1) - 2.0 * fit.log_likelihood;

    // observed information for beta at the optimum:
    // -d2l/deta2 = theta mu (theta + y) / (theta + mu)^2
    const auto eta = detail::linear_predictor(X, beta);
    dense_matrix info(p, p);
    for (std::size_t i = 0; i < n; ++i) {
        const double mu = std::exp(eta[i]);
        const double d = theta * mu * (theta + y[i]) / ((theta + mu) * (theta + mu));
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = a; b < p; ++b)
                info(a, b) += d * X(i, a) * X(i, b);
    }
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = 0; b < a; ++b)
            info(a, b) = info(b, a);
    fit.se.assign(p, std::numeric_limits<double>::quiet_NaN());
    fit.z.assign(p, std::numeric_limits<double>::quiet_NaN());
    fit.p.assign(p, std::numeric_limits<double>::quiet_NaN());
    if (converged) {
        const dense_matrix cov = spd_inverse(info);
        for (std::size_t j = 0; j < p; ++j) {
            fit.se[j] = std::sqrt(cov(j, j));
            fit.z[j] = beta[j] / fit.se[j];
            fit.p[j] = normal_two_sided_p(fit.z[j]);
        }
        const double d2 = nb_d2loglik_dtheta2(eta, theta, y);
        fit.se_theta = d2 < 0.0 ? std::sqrt(-1.0 / d2) : std::numeric_limits<double>::quiet_NaN();
    }
    return fit;
}

struct wald_row {
    std::string name;
    double z = 0.0;
    double p = 1.0;
};

inline std::vector<wald_row> wald_tests(const nb_fit& fit) {
    if (!fit.converged)
        throw convergence_error("wald_tests: fit did not converge");
    std::vector<wald_row> rows;
    for (std::size_t j = 0; j < fit.beta.size(); ++j) {
        if (!(fit.se[j] > 0.0))
            throw convergence_error("wald_tests: zero standard error for " + fit.names[j]);
        rows.push_back({fit.names[j], fit.beta[j] / fit.se[j],
                        normal_two_sided_p(fit.beta[j] / fit.se[j])});
    }
    return rows;
}

}  // namespace causalnet
