#include "ebm/grbm.hpp"

#include <cmath>

#include "ebm/errors.hpp"
#include "ebm/kernels.hpp"

namespace ebm::grbm {

namespace {

bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

struct ViewCache {
    std::vector<double> sigma;
    std::vector<double> inv_sigma;
    detail::EnergyView view;

    explicit ViewCache(const GrbmParams& p)
        : sigma(detail::sqrt_all(p.sigma2)), inv_sigma(detail::invert_all(sigma)) {
        view = {&p.W, p.b.data(), p.a.data(), p.sigma2.data(), sigma.data(), inv_sigma.data(), p.n_v, p.n_h};
    }
};

void check_visible(const FaceTexture& v, const GrbmParams& p) {
    require_data(v.pixels.size() == p.n_v, "visible vector length does not match n_v");
    require_data(all_finite(v.pixels), "visible vector has non-finite entries");
}

} // namespace

void GrbmParams::validate() const {
    require_data(n_v > 0 && n_h > 0, "GRBM dimensions must be positive");
    require_data(W.rows == n_v && W.cols == n_h, "GRBM weight shape mismatch");
    require_data(b.size() == n_v && a.size() == n_h && sigma2.size() == n_v,
                 "GRBM bias/variance length mismatch");
    for (double s : sigma2) require_data(s > 0.0 && std::isfinite(s), "sigma2 entries must be positive and finite");
    require_data(all_finite(W.a) && all_finite(b) && all_finite(a), "GRBM parameters must be finite");
}

void GrbmHyper::validate() const {
    require_data(k >= 1, "CD chain length must be >= 1");
    require_data(learning_rate >= 0.0 && std::isfinite(learning_rate), "learning rate must be non-negative");
    require_data(epochs >= 1 && batch_size >= 1, "epochs and batch size must be positive");
    require_data(weight_init_std > 0.0, "weight_init_std must be positive");
}

GrbmParams init_params(std::size_t n_v, std::size_t n_h, double weight_init_std, Rng& rng) {
    GrbmParams p;
    p.n_v = n_v;
    p.n_h = n_h;
    p.W = linalg::Matrix(n_v, n_h);
    for (double& w : p.W.a) w = rng.normal(0.0, weight_init_std);
    p.b.assign(n_v, 0.0);
    p.a.assign(n_h, 0.0);
    p.sigma2.assign(n_v, 1.0);
    return p;
}

double grbm_energy(const FaceTexture& v, const std::vector<std::uint8_t>& h, const GrbmParams& p) {
    p.validate();
    check_visible(v, p);
    require_data(h.size() == p.n_h, "hidden vector length does not match n_h");
    ViewCache c(p);
    return detail::energy(c.view, v.pixels.data(), h.data());
}

std::vector<double> hidden_given_visible(const FaceTexture& v, const GrbmParams& p) {
    p.validate();
    check_visible(v, p);
    ViewCache c(p);
    std::vector<double> probs(p.n_h);
    detail::hidden_probs(c.view, v.pixels.data(), probs.data());
    return probs;
}

VisibleConditional visible_given_hidden(const std::vector<double>& h, const GrbmParams& p) {
    p.validate();
    require_data(h.size() == p.n_h, "hidden vector length does not match n_h");
    ViewCache c(p);
    VisibleConditional out;
    out.mean.resize(p.n_v);
    detail::visible_mean(c.view, h.data(), out.mean.data());
    out.variance = p.sigma2;
    return out;
}

FaceTexture gibbs_chain(const FaceTexture& v0, const GrbmParams& p, std::size_t steps, Rng& rng) {
    p.validate();
    check_visible(v0, p);
    require_data(steps >= 1, "gibbs_chain requires steps >= 1");
    ViewCache c(p);
    FaceTexture v = v0;
    for (std::size_t s = 0; s < steps; ++s) detail::gibbs_step(c.view, v.pixels, rng);
    return v;
}

double free_energy(const FaceTexture& v, const GrbmParams& p) {
    p.validate();
    check_visible(v, p);
    ViewCache c(p);
    return detail::free_energy(c.view, v.pixels.data());
}

double exact_log_likelihood(const FaceTexture& v, const GrbmParams& p) {
    p.validate();
    check_visible(v, p);
    ViewCache c(p);
    return -detail::free_energy(c.view, v.pixels.data()) - detail::log_partition_enum(c.view);
}

namespace {

// Shared by cd_k_update and the TRBM trainer: accumulate (data - model) CD
// statistics for the core parameters {W, a, b} of one sample into the deltas.
void accumulate_core_stats(const detail::EnergyView& m, const double* v0, const detail::CdPhases& ph,
                           linalg::Matrix& d_w, std::vector<double>& d_a, std::vector<double>& d_b) {
    for (std::size_t i = 0; i < m.n_v; ++i) {
        double* wrow = d_w.row(i);
        const double vd = v0[i] * m.inv_sigma[i];
        const double vm = ph.v_model[i] * m.inv_sigma[i];
        for (std::size_t j = 0; j < m.n_h; ++j)
            wrow[j] += vd * ph.h_data[j] - vm * ph.h_model[j];
        d_b[i] += (v0[i] - ph.v_model[i]) * m.inv_sigma[i] * m.inv_sigma[i];
    }
    for (std::size_t j = 0; j < m.n_h; ++j) d_a[j] += ph.h_data[j] - ph.h_model[j];
}

} // namespace

GrbmParams cd_k_update(const std::vector<FaceTexture>& batch, const GrbmParams& p,
                       const GrbmHyper& hyper, Rng& rng) {
    p.validate();
    hyper.validate();
    require_data(!batch.empty(), "cd_k_update requires a non-empty batch");
    for (const auto& v : batch) check_visible(v, p);

    ViewCache c(p);
    linalg::Matrix d_w(p.n_v, p.n_h);
    std::vector<double> d_a(p.n_h, 0.0), d_b(p.n_v, 0.0);
    for (const auto& v : batch) {
        Rng sub = rng.split();
        detail::CdPhases ph = detail::cd_chain(c.view, v.pixels.data(), hyper.k, sub, hyper.sample_visible);
        accumulate_core_stats(c.view, v.pixels.data(), ph, d_w, d_a, d_b);
    }

    const double step = hyper.learning_rate / static_cast<double>(batch.size());
    GrbmParams out = p;
    for (std::size_t t = 0; t < out.W.size(); ++t) out.W.a[t] += step * d_w.a[t];
    for (std::size_t j = 0; j < p.n_h; ++j) out.a[j] += step * d_a[j];
    for (std::size_t i = 0; i < p.n_v; ++i) out.b[i] += step * d_b[i];
    return out;
}

GrbmParams train(const std::vector<FaceTexture>& data, const GrbmParams& p0,
                 const GrbmHyper& hyper, Rng& rng) {
    p0.validate();
    hyper.validate();
    require_data(!data.empty(), "training data must be non-empty");

    GrbmParams p = p0;
    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (std::size_t epoch = 0; epoch < hyper.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t start = 0; start < order.size(); start += hyper.batch_size) {
            const std::size_t end = std::min(order.size(), start + hyper.batch_size);
            std::vector<FaceTexture> batch;
            batch.reserve(end - start);
            for (std::size_t t = start; t < end; ++t) batch.push_back(data[order[t]]);
            p = cd_k_update(batch, p, hyper, rng);
        }
    }
    return p;
}

double reconstruction_error(const std::vector<FaceTexture>& data, const GrbmParams& p) {
    p.validate();
    require_data(!data.empty(), "reconstruction_error requires data");
    ViewCache c(p);
    std::vector<double> probs(p.n_h), mean(p.n_v);
    double total = 0.0;
    for (const auto& v : data) {
        check_visible(v, p);
        detail::hidden_probs(c.view, v.pixels.data(), probs.data());
        detail::visible_mean(c.view, probs.data(), mean.data());
        double err = 0.0;
        for (std::size_t i = 0; i < p.n_v; ++i) {
            const double d = mean[i] - v.pixels[i];
            err += d * d;
        }
        total += err / static_cast<double>(p.n_v);
    }
    return total / static_cast<double>(data.size());
}

FaceTexture transfer_features(const FaceTexture& v, const GrbmParams& source, const GrbmParams& target,
                              std::size_t refine_steps, Rng& rng) {
    source.validate();
    target.validate();
    require_data(source.n_h == target.n_h, "transfer_features requires matching hidden sizes");
    require_data(source.n_v == target.n_v, "transfer_features requires matching visible sizes");
    check_visible(v, source);

    ViewCache cs(source), ct(target);
    std::vector<double> probs(source.n_h);
    detail::hidden_probs(cs.view, v.pixels.data(), probs.data());

    FaceTexture out;
    out.group = v.group;
    out.pixels.resize(target.n_v);
    detail::visible_mean(ct.view, probs.data(), out.pixels.data());
    for (std::size_t s = 0; s < refine_steps; ++s) detail::gibbs_step(ct.view, out.pixels, rng);
    return out;
}

} // namespace ebm::grbm
