#pragma once

// Test-side oracles. Everything here is written as plain scalar loops and is
// deliberately independent of the library's kernel implementations.

#include <cmath>
#include <cstdint>
#include <vector>

#include "ebm/grbm.hpp"
#include "ebm/rng.hpp"

namespace oracle {

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Triple-loop evaluation of the Gaussian-Bernoulli energy.
inline double energy(const std::vector<double>& v, const std::vector<std::uint8_t>& h,
                     const std::vector<double>& w, std::size_t n_v, std::size_t n_h,
                     const std::vector<double>& b, const std::vector<double>& a,
                     const std::vector<double>& sigma2) {
    double quad = 0.0;
    for (std::size_t i = 0; i < n_v; ++i)
        quad += (v[i] - b[i]) * (v[i] - b[i]) / (2.0 * sigma2[i]);
    double lin = 0.0;
    for (std::size_t j = 0; j < n_h; ++j) lin += a[j] * h[j];
    double inter = 0.0;
    for (std::size_t i = 0; i < n_v; ++i)
        for (std::size_t j = 0; j < n_h; ++j)
            inter += v[i] / std::sqrt(sigma2[i]) * w[i * n_h + j] * h[j];
    return quad - lin - inter;
}

inline double energy(const ebm::grbm::FaceTexture& v, const std::vector<std::uint8_t>& h,
                     const ebm::grbm::GrbmParams& p) {
    return energy(v.pixels, h, p.W.a, p.n_v, p.n_h, p.b, p.a, p.sigma2);
}

inline std::vector<std::uint8_t> hidden_state(std::size_t bits, std::size_t n_h) {
    std::vector<std::uint8_t> h(n_h);
    for (std::size_t j = 0; j < n_h; ++j) h[j] = (bits >> j) & 1u;
    return h;
}

// Unnormalized weight of hidden state h after integrating the visibles out:
//   w_h = prod_i sqrt(2 pi sigma_i^2) * exp(a^T h + sum_i (b_i c_i / sigma_i + c_i^2 / 2)).
inline double log_state_weight(const std::vector<std::uint8_t>& h, const ebm::grbm::GrbmParams& p) {
    double t = 0.0;
    for (std::size_t i = 0; i < p.n_v; ++i) t += 0.5 * std::log(2.0 * M_PI * p.sigma2[i]);
    for (std::size_t j = 0; j < p.n_h; ++j) t += p.a[j] * h[j];
    for (std::size_t i = 0; i < p.n_v; ++i) {
        double c = 0.0;
        for (std::size_t j = 0; j < p.n_h; ++j) c += p.W.a[i * p.n_h + j] * h[j];
        t += p.b[i] * c / std::sqrt(p.sigma2[i]) + 0.5 * c * c;
    }
    return t;
}

// Marginal distribution over hidden states by enumeration.
inline std::vector<double> hidden_marginal(const ebm::grbm::GrbmParams& p) {
    const std::size_t states = std::size_t{1} << p.n_h;
    std::vector<double> logw(states);
    double mx = -1e300;
    for (std::size_t s = 0; s < states; ++s) {
        logw[s] = log_state_weight(hidden_state(s, p.n_h), p);
        mx = std::max(mx, logw[s]);
    }
    double z = 0.0;
    for (std::size_t s = 0; s < states; ++s) z += std::exp(logw[s] - mx);
    std::vector<double> out(states);
    for (std::size_t s = 0; s < states; ++s) out[s] = std::exp(logw[s] - mx) / z;
    return out;
}

inline double log_partition(const ebm::grbm::GrbmParams& p) {
    const std::size_t states = std::size_t{1} << p.n_h;
    double mx = -1e300;
    std::vector<double> logw(states);
    for (std::size_t s = 0; s < states; ++s) {
        logw[s] = log_state_weight(hidden_state(s, p.n_h), p);
        mx = std::max(mx, logw[s]);
    }
    double z = 0.0;
    for (std::size_t s = 0; s < states; ++s) z += std::exp(logw[s] - mx);
    return mx + std::log(z);
}

inline double log_likelihood(const ebm::grbm::FaceTexture& v, const ebm::grbm::GrbmParams& p) {
    const std::size_t states = std::size_t{1} << p.n_h;
    double mx = -1e300;
    std::vector<double> loge(states);
    for (std::size_t s = 0; s < states; ++s) {
        loge[s] = -energy(v, hidden_state(s, p.n_h), p);
        mx = std::max(mx, loge[s]);
    }
    double sum = 0.0;
    for (std::size_t s = 0; s < states; ++s) sum += std::exp(loge[s] - mx);
    return mx + std::log(sum) - log_partition(p);
}

// Exact gradient of log p(v) for the GRBM core parameters, model phase by
// enumeration over hidden states (conditional Gaussian means per state).
struct GrbmGrad {
    std::vector<double> w;  // n_v * n_h
    std::vector<double> a;
    std::vector<double> b;
};

inline GrbmGrad exact_gradient(const ebm::grbm::FaceTexture& v, const ebm::grbm::GrbmParams& p) {
    const std::size_t n_v = p.n_v, n_h = p.n_h;
    GrbmGrad g;
    g.w.assign(n_v * n_h, 0.0);
    g.a.assign(n_h, 0.0);
    g.b.assign(n_v, 0.0);

    // data phase
    std::vector<double> ph(n_h);
    for (std::size_t j = 0; j < n_h; ++j) {
        double z = p.a[j];
        for (std::size_t i = 0; i < n_v; ++i)
            z += p.W.a[i * n_h + j] * v.pixels[i] / std::sqrt(p.sigma2[i]);
        ph[j] = logistic(z);
    }
    for (std::size_t i = 0; i < n_v; ++i)
        for (std::size_t j = 0; j < n_h; ++j)
            g.w[i * n_h + j] = v.pixels[i] / std::sqrt(p.sigma2[i]) * ph[j];
    for (std::size_t j = 0; j < n_h; ++j) g.a[j] = ph[j];
    for (std::size_t i = 0; i < n_v; ++i) g.b[i] = (v.pixels[i] - p.b[i]) / p.sigma2[i];

    // model phase: mixture over hidden states; E[v|h] = b + sigma .* (W h)
    std::vector<double> pm = hidden_marginal(p);
    const std::size_t states = std::size_t{1} << n_h;
    for (std::size_t s = 0; s < states; ++s) {
        const auto h = hidden_state(s, n_h);
        std::vector<double> mu(n_v);
        for (std::size_t i = 0; i < n_v; ++i) {
            double c = 0.0;
            for (std::size_t j = 0; j < n_h; ++j) c += p.W.a[i * n_h + j] * h[j];
            mu[i] = p.b[i] + std::sqrt(p.sigma2[i]) * c;
        }
        for (std::size_t i = 0; i < n_v; ++i)
            for (std::size_t j = 0; j < n_h; ++j)
                g.w[i * n_h + j] -= pm[s] * mu[i] / std::sqrt(p.sigma2[i]) * h[j];
        for (std::size_t j = 0; j < n_h; ++j) g.a[j] -= pm[s] * h[j];
        for (std::size_t i = 0; i < n_v; ++i) g.b[i] -= pm[s] * (mu[i] - p.b[i]) / p.sigma2[i];
    }
    return g;
}

// Composite Simpson quadrature.
template <typename F>
double simpson(F f, double lo, double hi, std::size_t intervals) {
    if (intervals % 2 == 1) ++intervals;
    const double h = (hi - lo) / static_cast<double>(intervals);
    double acc = f(lo) + f(hi);
    for (std::size_t i = 1; i < intervals; ++i)
        acc += f(lo + h * static_cast<double>(i)) * ((i % 2 == 1) ? 4.0 : 2.0);
    return acc * h / 3.0;
}

// Dense Gaussian elimination with partial pivoting; oracle for the Poisson
// solver and for small least-squares systems.
inline std::vector<double> solve_dense(std::vector<double> a, std::vector<double> rhs, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
        if (piv != col) {
            for (std::size_t c = 0; c < n; ++c) std::swap(a[col * n + c], a[piv * n + c]);
            std::swap(rhs[col], rhs[piv]);
        }
        const double d = a[col * n + col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / d;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r * n + c] -= f * a[col * n + c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t ri = n; ri-- > 0;) {
        double acc = rhs[ri];
        for (std::size_t c = ri + 1; c < n; ++c) acc -= a[ri * n + c] * x[c];
        x[ri] = acc / a[ri * n + ri];
    }
    return x;
}

// Random tiny GRBM for property tests.
inline ebm::grbm::GrbmParams random_params(std::size_t n_v, std::size_t n_h, ebm::Rng& rng,
                                           double w_scale = 0.5, bool unit_sigma = false) {
    ebm::grbm::GrbmParams p;
    p.n_v = n_v;
    p.n_h = n_h;
    p.W = ebm::linalg::Matrix(n_v, n_h);
    for (double& w : p.W.a) w = rng.normal(0.0, w_scale);
    p.b.resize(n_v);
    for (double& x : p.b) x = rng.normal(0.0, 1.0);
    p.a.resize(n_h);
    for (double& x : p.a) x = rng.normal(0.0, 1.0);
    p.sigma2.assign(n_v, 1.0);
    if (!unit_sigma)
        for (double& s : p.sigma2) s = 0.5 + rng.uniform() * 1.5;
    return p;
}

inline ebm::grbm::FaceTexture random_texture(std::size_t n_v, ebm::Rng& rng, double scale = 1.0) {
    ebm::grbm::FaceTexture v;
    v.pixels.resize(n_v);
    for (double& x : v.pixels) x = rng.normal(0.0, scale);
    return v;
}

} // namespace oracle
