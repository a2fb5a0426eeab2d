#ifndef HYLEAR_NN_HPP_
#define HYLEAR_NN_HPP_

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hylear/config.hpp"
#include "hylear/rng.hpp"

namespace hylear {

// Encoder: three stride-2 3x3 conv layers -> flatten -> concat scalars ->
// two dense layers. Heads are linear: V (1), Q (n_actions), policy logits
// (n_actions). All math in double; checkpoints store 32-bit floats.
struct NetConfig {
  int grid_channels = 6;
  int grid_hw = 32;  // H = W, must survive three stride-2 halvings
  std::array<int, 3> conv_channels{16, 32, 32};
  int n_scalars = 6;
  int fc_width = 128;
  int n_actions = 4;

  int conv_out_hw(int layer) const {  // after `layer` stride-2 convs (pad 1)
    int hw = grid_hw;
    for (int i = 0; i < layer; ++i) hw = (hw + 1) / 2;
    return hw;
  }
  int flat_size() const { return conv_channels[2] * conv_out_hw(3) * conv_out_hw(3); }
};

struct ParamTensor {
  std::string name;
  std::vector<int> shape;
  std::vector<double> w;
  size_t size() const { return w.size(); }
};

// Fixed tensor order; checkpoints serialize in this order.
// 0..5 conv{1,2,3} weight/bias, 6..9 fc{1,2} weight/bias,
// 10/11 V head, 12/13 Q head, 14/15 policy head.
struct NetParams {
  std::vector<ParamTensor> tensors;

  size_t total_size() const;
  double get_flat(size_t idx) const;
  void set_flat(size_t idx, double v);
};

NetParams make_params(const NetConfig& cfg);
void init_params(NetParams& p, const NetConfig& cfg, Rng& rng);

// Indices of the encoder tensors vs. per-head parameter sets.
bool is_encoder_tensor(int t);
bool is_v_tensor(int t);
bool is_q_tensor(int t);
bool is_pi_tensor(int t);

struct Activations {
  std::vector<double> input;            // grid, channel-major
  std::array<double, 8> scalars{};      // up to n_scalars used
  std::vector<double> a1, a2, a3;       // post-ReLU conv outputs
  std::vector<double> z0;               // flat + scalars
  std::vector<double> h1, h2;           // post-ReLU dense outputs
  double v = 0.0;
  std::vector<double> q;
  std::vector<double> logits;
  std::vector<double> logpi;
  std::vector<double> pi;
};

void forward(const NetParams& p, const NetConfig& cfg, const std::vector<double>& grid,
             const std::vector<double>& scalars, Activations& act);

// Gradients accumulate tensor-by-tensor in the same layout as NetParams.
struct NetGrads {
  std::vector<std::vector<double>> g;
  void init(const NetParams& p);
  void zero();
  void add_scaled(const NetGrads& other, double s);
  double get_flat(const NetParams& p, size_t idx) const;
};

// Head-level loss gradients for one sample.
struct HeadGrads {
  double dv = 0.0;
  std::vector<double> dq;       // size n_actions
  std::vector<double> dlogits;  // size n_actions
};

// Head weight/bias gradients implied by hg (outer products with h2).
void head_weight_grads(const NetParams& p, const Activations& act, const HeadGrads& hg,
                       NetGrads& grads);

// Accumulates the gradient flowing from the heads into h2.
void head_flow(const NetParams& p, const HeadGrads& hg, std::vector<double>& dh2);

// Backward from dh2 through the dense trunk and conv stack.
void encoder_backward(const NetParams& p, const NetConfig& cfg, const Activations& act,
                      std::vector<double>& dh2, NetGrads& grads);

// Full backward: accumulates gradients for every tensor the loss touches
// (heads and encoder). Used by the gradient check and by the training
// update's selective accumulation.
void backward(const NetParams& p, const NetConfig& cfg, const Activations& act,
              const HeadGrads& hg, NetGrads& grads);

struct AdamState {
  std::vector<std::vector<double>> m, v;
  int64_t t = 0;
  void init(const NetParams& p);
};

// One Adam step over the tensors selected by `mask(tensor_index)`.
template <typename Mask>
void adam_step(NetParams& p, const NetGrads& grads, AdamState& st, double lr, Mask mask,
               double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8) {
  ++st.t;
  const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(st.t));
  const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(st.t));
  for (size_t ti = 0; ti < p.tensors.size(); ++ti) {
    if (!mask(static_cast<int>(ti))) continue;
    auto& w = p.tensors[ti].w;
    auto& m = st.m[ti];
    auto& v = st.v[ti];
    const auto& g = grads.g[ti];
    for (size_t i = 0; i < w.size(); ++i) {
      m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
      v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
      w[i] -= lr * (m[i] / bc1) / (std::sqrt(v[i] / bc2) + eps);
    }
  }
}

void polyak_update(NetParams& target, const NetParams& live, double tau);

// Versioned flat binary checkpoint: magic, version, layer count, then
// per-layer shape and row-major 32-bit floats. Round-trips bit-exactly.
void save_checkpoint(const NetParams& p, const std::string& path);
NetParams load_checkpoint(const std::string& path);

}  // namespace hylear

#endif  // HYLEAR_NN_HPP_
