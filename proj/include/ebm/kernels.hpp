#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "ebm/errors.hpp"
#include "ebm/linalg.hpp"
#include "ebm/rng.hpp"

// Shared Gaussian-Bernoulli energy kernels. The GRBM calls them with its
// static biases; the TRBM calls them with dynamic biases. Keeping one code
// path is what makes the TRBM reduce to the GRBM bitwise when the temporal
// and reference weights are zero.
namespace ebm::detail {

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double softplus(double x) {
    // log(1 + e^x), stable for large |x|
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// View over the parameters every kernel needs. sigma / inv_sigma are caller
// supplied so repeated calls don't recompute square roots.
struct EnergyView {
    const linalg::Matrix* W;       // n_v x n_h
    const double* b_eff;           // n_v
    const double* a_eff;           // n_h
    const double* sigma2;          // n_v
    const double* sigma;           // n_v
    const double* inv_sigma;       // n_v
    std::size_t n_v;
    std::size_t n_h;
};

inline std::vector<double> sqrt_all(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::sqrt(v[i]);
    return out;
}

inline std::vector<double> invert_all(const std::vector<double>& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = 1.0 / v[i];
    return out;
}

// Sum_i (v_i - b_i)^2 / (2 sigma_i^2)
inline double quad_term(const EnergyView& m, const double* v) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.n_v; ++i) {
        const double d = v[i] - m.b_eff[i];
        acc += d * d / (2.0 * m.sigma2[i]);
    }
    return acc;
}

// z_j = a_eff_j + sum_i W_ij v_i / sigma_i
inline void hidden_preact(const EnergyView& m, const double* v, double* z) {
    for (std::size_t j = 0; j < m.n_h; ++j) z[j] = m.a_eff[j];
    for (std::size_t i = 0; i < m.n_v; ++i) linalg::axpy(v[i] * m.inv_sigma[i], m.W->row(i), z, m.n_h);
}

inline void hidden_probs(const EnergyView& m, const double* v, double* p) {
    hidden_preact(m, v, p);
    for (std::size_t j = 0; j < m.n_h; ++j) p[j] = logistic(p[j]);
}

// mean_i = b_eff_i + sigma_i * sum_j W_ij h_j; h may be probabilities.
inline void visible_mean(const EnergyView& m, const double* h, double* mean) {
    const std::size_t n_v = m.n_v, n_h = m.n_h;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n_v); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        mean[i] = m.b_eff[i] + m.sigma[i] * linalg::dot(m.W->row(i), h, n_h);
    }
}

// Eq-1-shaped energy: quad - sum_j h_j a_j - sum_ij (v_i / sigma_i) W_ij h_j
inline double energy(const EnergyView& m, const double* v, const std::uint8_t* h) {
    double e = quad_term(m, v);
    double lin = 0.0;
    for (std::size_t j = 0; j < m.n_h; ++j)
        if (h[j]) lin += m.a_eff[j];
    double inter = 0.0;
    for (std::size_t i = 0; i < m.n_v; ++i) {
        const double* wrow = m.W->row(i);
        double acc = 0.0;
        for (std::size_t j = 0; j < m.n_h; ++j)
            if (h[j]) acc += wrow[j];
        inter += v[i] * m.inv_sigma[i] * acc;
    }
    return e - lin - inter;
}

// F(v) = quad - sum_j softplus(z_j); satisfies e^{-F(v)} = sum_h e^{-E(v,h)}.
inline double free_energy(const EnergyView& m, const double* v) {
    std::vector<double> z(m.n_h);
    hidden_preact(m, v, z.data());
    double acc = quad_term(m, v);
    for (std::size_t j = 0; j < m.n_h; ++j) acc -= softplus(z[j]);
    return acc;
}

inline constexpr std::size_t kMaxEnumHidden = 20;

// log Z by enumeration over hidden states; per visible unit the Gaussian
// integral has a closed form after completing the square:
//   Z = sum_h prod_i sqrt(2 pi sigma_i^2) * exp(a^T h + sum_i b_i c_i / sigma_i + c_i^2 / 2),
// with c = W h.
inline double log_partition_enum(const EnergyView& m) {
    require(m.n_h <= kMaxEnumHidden, ErrorKind::capability,
            "exact partition function requires n_h <= 20");
    double log_gauss = 0.0;
    for (std::size_t i = 0; i < m.n_v; ++i)
        log_gauss += 0.5 * std::log(2.0 * 3.14159265358979323846 * m.sigma2[i]);

    const std::size_t states = std::size_t{1} << m.n_h;
    std::vector<double> c(m.n_v);
    double max_term = -1e300;
    std::vector<double> terms(states);
    for (std::size_t s = 0; s < states; ++s) {
        double ah = 0.0;
        for (std::size_t j = 0; j < m.n_h; ++j)
            if (s & (std::size_t{1} << j)) ah += m.a_eff[j];
        for (std::size_t i = 0; i < m.n_v; ++i) {
            const double* wrow = m.W->row(i);
            double acc = 0.0;
            for (std::size_t j = 0; j < m.n_h; ++j)
                if (s & (std::size_t{1} << j)) acc += wrow[j];
            c[i] = acc;
        }
        double t = ah;
        for (std::size_t i = 0; i < m.n_v; ++i)
            t += m.b_eff[i] * c[i] * m.inv_sigma[i] + 0.5 * c[i] * c[i];
        terms[s] = t;
        if (t > max_term) max_term = t;
    }
    double sum = 0.0;
    for (std::size_t s = 0; s < states; ++s) sum += std::exp(terms[s] - max_term);
    return log_gauss + max_term + std::log(sum);
}

inline void sample_bernoulli(const double* p, std::uint8_t* h, std::size_t n, Rng& rng) {
    for (std::size_t j = 0; j < n; ++j) h[j] = rng.bernoulli(p[j]) ? 1 : 0;
}

inline void sample_gaussian(const double* mean, const double* sigma, double* v, std::size_t n, Rng& rng) {
    for (std::size_t i = 0; i < n; ++i) v[i] = mean[i] + sigma[i] * rng.normal();
}

// One full Gibbs alternation: h ~ p(h|v), then v ~ N(mean(h), sigma^2).
inline void gibbs_step(const EnergyView& m, std::vector<double>& v, Rng& rng) {
    std::vector<double> p(m.n_h), hd(m.n_h), mean(m.n_v);
    std::vector<std::uint8_t> h(m.n_h);
    hidden_probs(m, v.data(), p.data());
    sample_bernoulli(p.data(), h.data(), m.n_h, rng);
    for (std::size_t j = 0; j < m.n_h; ++j) hd[j] = h[j];
    visible_mean(m, hd.data(), mean.data());
    sample_gaussian(mean.data(), m.sigma, v.data(), m.n_v, rng);
}

// Contrastive-divergence chain. Hidden units are sampled while the chain runs;
// visible units use conditional means (reconstructions); both phase statistics
// use hidden probabilities.
struct CdPhases {
    std::vector<double> h_data;   // p(h|v0)
    std::vector<double> v_model;  // k-step reconstruction
    std::vector<double> h_model;  // p(h|v_model)
};

// Per-sample CD statistics shared by the GRBM and TRBM trainers. Adds the
// (data - model) W outer product into d_w and writes the per-sample bias
// coefficients: coef_a = h_data - h_model, coef_b = (v0 - v_model) / sigma^2.
// The same coef vectors drive the TRBM conditioning-weight updates.
inline void cd_sample_stats(const EnergyView& m, const double* v0, const CdPhases& ph,
                            linalg::Matrix& d_w, double* coef_a, double* coef_b) {
    for (std::size_t i = 0; i < m.n_v; ++i) {
        double* wrow = d_w.row(i);
        const double vd = v0[i] * m.inv_sigma[i];
        const double vm = ph.v_model[i] * m.inv_sigma[i];
        for (std::size_t j = 0; j < m.n_h; ++j)
            wrow[j] += vd * ph.h_data[j] - vm * ph.h_model[j];
        coef_b[i] = (v0[i] - ph.v_model[i]) * m.inv_sigma[i] * m.inv_sigma[i];
    }
    for (std::size_t j = 0; j < m.n_h; ++j) coef_a[j] = ph.h_data[j] - ph.h_model[j];
}

inline CdPhases cd_chain(const EnergyView& m, const double* v0, std::size_t k, Rng& rng,
                         bool sample_visible = false) {
    CdPhases out;
    out.h_data.resize(m.n_h);
    out.h_model.resize(m.n_h);
    out.v_model.assign(v0, v0 + m.n_v);

    hidden_probs(m, v0, out.h_data.data());
    std::vector<std::uint8_t> hs(m.n_h);
    sample_bernoulli(out.h_data.data(), hs.data(), m.n_h, rng);

    std::vector<double> hd(m.n_h), mean(m.n_v);
    for (std::size_t step = 0; step < k; ++step) {
        for (std::size_t j = 0; j < m.n_h; ++j) hd[j] = hs[j];
        visible_mean(m, hd.data(), mean.data());
        if (sample_visible)
            sample_gaussian(mean.data(), m.sigma, out.v_model.data(), m.n_v, rng);
        else
            out.v_model = mean;
        hidden_probs(m, out.v_model.data(), out.h_model.data());
        if (step + 1 < k) sample_bernoulli(out.h_model.data(), hs.data(), m.n_h, rng);
    }
    return out;
}

} // namespace ebm::detail
