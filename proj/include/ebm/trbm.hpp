#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

#include "ebm/grbm.hpp"
#include "ebm/linalg.hpp"
#include "ebm/rng.hpp"

namespace ebm::trbm {

using grbm::FaceTexture;
using grbm::GrbmHyper;
using grbm::VisibleConditional;

// The two reference textures conditioning one transition node: the target
// stage s_t and the previous stage s_prev.
struct ReferenceWindow {
    FaceTexture s_t;
    FaceTexture s_prev;
};

// Temporal RBM parameters. On top of the GRBM core {W, b, a, sigma2} the
// conditioning pathways are: A (previous visible -> hidden), B (previous
// visible -> visible), P[l] (reference l -> visible) and Q[l] (reference l ->
// hidden), with l = 0 for s_t and l = 1 for s_prev.
struct TrbmParams {
    std::size_t n_v = 0;
    std::size_t n_h = 0;
    linalg::Matrix W;                   // n_v x n_h
    linalg::Matrix A;                   // n_h x n_v
    linalg::Matrix B;                   // n_v x n_v
    std::array<linalg::Matrix, 2> P;    // each n_v x n_v
    std::array<linalg::Matrix, 2> Q;    // each n_v x n_h
    std::vector<double> b;              // static visible bias
    std::vector<double> a;              // static hidden bias
    std::vector<double> sigma2;

    // Shape and variance checks; cheap enough for per-call use.
    void validate() const;
    // Full finiteness scan of every block; used at load and training entry.
    void validate_values() const;
};

struct DynamicBiases {
    std::vector<double> b_t;
    std::vector<double> a_t;
};

// Ordered face sequence with its age-group indices. Training sequences must
// step through consecutive groups; direction may be increasing (progression)
// or decreasing (regression on reversed banks).
struct FaceSequence {
    std::vector<FaceTexture> frames;
    std::vector<int> groups;
};

struct LikelihoodReport {
    std::vector<double> per_step;            // log p(v^t | v^{t-1}, s^{<=t}), t = 2..T
    double total = 0.0;                      // sum of per_step
    double partition = 0.0;                  // summed per-step log Z
    std::vector<double> per_step_partition;  // log Z of each step
};

// W ~ N(0, weight_init_std^2); all conditioning weights and biases zero.
TrbmParams init_params(std::size_t n_v, std::size_t n_h, double weight_init_std, Rng& rng);

// M += scale * I; warm-starts the previous-visible pathway at a copy model.
void add_identity(linalg::Matrix& m, double scale);

// b_t = b + B v_prev + sum_l P_l s_l ; a_t = a + A v_prev + sum_l Q_l s_l
DynamicBiases dynamic_biases(const FaceTexture& v_prev, const ReferenceWindow& s, const TrbmParams& p);

double trbm_energy(const FaceTexture& v_t, const std::vector<std::uint8_t>& h_t,
                   const FaceTexture& v_prev, const ReferenceWindow& s, const TrbmParams& p);

std::vector<double> hidden_given_visible(const FaceTexture& v_t, const FaceTexture& v_prev,
                                         const ReferenceWindow& s, const TrbmParams& p);

VisibleConditional visible_given_hidden(const std::vector<double>& h, const FaceTexture& v_prev,
                                        const ReferenceWindow& s, const TrbmParams& p);

// CD training over sequences. refs[i][t-1] conditions the step from frame t-1
// to frame t of sequence i. Every parameter family {W, A, B, P, Q, a, b} is
// updated; sigma2 is fixed; conditioning inputs are never resampled.
TrbmParams cd_train(const std::vector<FaceSequence>& sequences,
                    const std::vector<std::vector<ReferenceWindow>>& refs,
                    const TrbmParams& p0, const GrbmHyper& hyper, Rng& rng);

// Mean-field prediction: chain starts at b_t and alternates hidden
// probabilities / visible means gibbs_steps times. gibbs_steps = 0 returns
// b_t. With stochastic = true the chain samples instead.
FaceTexture predict_next(const FaceTexture& v_prev, const ReferenceWindow& s, const TrbmParams& p,
                         std::size_t gibbs_steps, Rng& rng, bool stochastic = false);

// Lane-batched variant of mean-field predict_next; bitwise identical results.
std::vector<FaceTexture> predict_next_many(const std::vector<const FaceTexture*>& v_prevs,
                                           const std::vector<const ReferenceWindow*>& windows,
                                           const TrbmParams& p, std::size_t gibbs_steps);

// Exact per-step conditional log-likelihoods (n_h <= 20).
LikelihoodReport sequence_log_likelihood(const FaceSequence& seq,
                                         const std::vector<ReferenceWindow>& refs,
                                         const TrbmParams& p);

// Applies predict_next node by node, feeding each output forward. group_step
// is +1 for progression nodes, -1 for regression nodes.
FaceSequence roll_forward(const FaceTexture& v_first, const std::vector<ReferenceWindow>& ref_seq,
                          const std::vector<TrbmParams>& nodes, std::size_t gibbs_steps, Rng& rng,
                          int group_step = 1, bool stochastic = false);

// Same, with nodes supplied lazily (large banks are streamed one node at a
// time).
using NodeProvider = std::function<const TrbmParams&(std::size_t)>;
FaceSequence roll_forward(const FaceTexture& v_first, const std::vector<ReferenceWindow>& ref_seq,
                          std::size_t node_count, const NodeProvider& node_at, std::size_t gibbs_steps,
                          Rng& rng, int group_step = 1, bool stochastic = false);

} // namespace ebm::trbm
