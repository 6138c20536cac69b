#pragma once

#include <cstdint>
#include <vector>

#include "ebm/linalg.hpp"
#include "ebm/rng.hpp"

namespace ebm::grbm {

// Real-valued texture flattened over the reference frame. group is the age
// group index, -1 when not applicable.
struct FaceTexture {
    std::vector<double> pixels;
    int group = -1;
};

// Gaussian-Bernoulli RBM parameters: real visible units with per-unit
// variance, binary hidden units.
struct GrbmParams {
    std::size_t n_v = 0;
    std::size_t n_h = 0;
    linalg::Matrix W;            // n_v x n_h
    std::vector<double> b;       // visible bias
    std::vector<double> a;       // hidden bias
    std::vector<double> sigma2;  // visible variances, all > 0

    void validate() const;
};

struct GrbmHyper {
    std::size_t k = 1;               // CD chain length
    double learning_rate = 0.01;
    std::size_t epochs = 10;
    std::size_t batch_size = 16;
    std::uint64_t seed = 0;
    double weight_init_std = 0.01;
    bool sample_visible = false;     // sample visibles in the CD chain instead of using means

    void validate() const;
};

// Zero biases, W ~ N(0, weight_init_std^2), unit variances.
GrbmParams init_params(std::size_t n_v, std::size_t n_h, double weight_init_std, Rng& rng);

double grbm_energy(const FaceTexture& v, const std::vector<std::uint8_t>& h, const GrbmParams& p);

std::vector<double> hidden_given_visible(const FaceTexture& v, const GrbmParams& p);

struct VisibleConditional {
    std::vector<double> mean;
    std::vector<double> variance;
};

// h may hold probabilities in [0,1]; sampling is the caller's separate draw.
VisibleConditional visible_given_hidden(const std::vector<double>& h, const GrbmParams& p);

FaceTexture gibbs_chain(const FaceTexture& v0, const GrbmParams& p, std::size_t steps, Rng& rng);

double free_energy(const FaceTexture& v, const GrbmParams& p);

// Requires n_h <= 20; the normalizer is enumerated in closed form.
double exact_log_likelihood(const FaceTexture& v, const GrbmParams& p);

// One parameter update from one mini-batch: learning_rate * (data-phase stats
// minus k-step reconstruction stats), averaged over the batch. sigma2 is held
// fixed.
GrbmParams cd_k_update(const std::vector<FaceTexture>& batch, const GrbmParams& p,
                       const GrbmHyper& hyper, Rng& rng);

// Full training loop: epochs x shuffled mini-batches, shuffling driven by rng.
GrbmParams train(const std::vector<FaceTexture>& data, const GrbmParams& p0,
                 const GrbmHyper& hyper, Rng& rng);

// Mean reconstruction error of the mean-field pass v -> mean(p(h|v)), averaged
// over the data; training diagnostics.
double reconstruction_error(const std::vector<FaceTexture>& data, const GrbmParams& p);

// Encode v under `source`, decode the conditional visible mean under `target`,
// then run refine_steps Gibbs steps under `target`. refine_steps = 0 is fully
// deterministic.
FaceTexture transfer_features(const FaceTexture& v, const GrbmParams& source, const GrbmParams& target,
                              std::size_t refine_steps, Rng& rng);

} // namespace ebm::grbm
