#include "hylear/sac.hpp"

#include <algorithm>
#include <cmath>

#include "hylear/io_util.hpp"
#include "hylear/parallel.hpp"

namespace hylear {

namespace {

constexpr int kGradSlots = 8;  // fixed sample-to-slot mapping keeps reductions
                               // identical for every thread count

uint8_t quantize01(double v) {
  const double c = std::clamp(v, 0.0, 1.0);
  return static_cast<uint8_t>(std::lround(c * 255.0));
}

double class_level(CellClass c) {
  switch (c) {
    case CellClass::Lane: return 1.0;
    case CellClass::Sidewalk: return 2.0 / 3.0;
    case CellClass::Free: return 1.0 / 3.0;
    case CellClass::Obstacle: return 0.0;
  }
  return 0.0;
}

}  // namespace

Observation encode_observation(const EncodeInputs& in, const SacParams& sp,
                               const WorldParams& wp, const CostmapParams& cp) {
  const int hw = sp.obs_cells;
  const double res = sp.obs_resolution;
  Observation o;
  o.channels = 6;
  o.hw = hw;
  o.grid.assign(static_cast<size_t>(6) * hw * hw, 0);

  const CarState& car = in.obs_world->car;
  const double ch = std::cos(car.pose.heading), sh = std::sin(car.pose.heading);
  const Vec2 center = car.pose.position() +
                      car.pose.direction() * (sp.obs_forward_cells * res);

  // World point of obs cell (u lateral, v forward), and its inverse.
  const auto cell_world = [&](int v, int u) -> Vec2 {
    const double xf = (v - hw / 2 + 0.5) * res;
    const double yf = (u - hw / 2 + 0.5) * res;
    return {center.x + xf * ch - yf * sh, center.y + xf * sh + yf * ch};
  };
  const auto world_cell = [&](const Vec2& p, int& v, int& u) {
    const Vec2 d = p - center;
    const double xf = d.x * ch + d.y * sh;
    const double yf = -d.x * sh + d.y * ch;
    v = static_cast<int>(std::floor(xf / res + hw / 2.0));
    u = static_cast<int>(std::floor(yf / res + hw / 2.0));
    return v >= 0 && v < hw && u >= 0 && u < hw;
  };
  const auto stamp = [&](int channel, int v, int u, double value) {
    const size_t idx = static_cast<size_t>(channel) * hw * hw + static_cast<size_t>(v) * hw + u;
    o.grid[idx] = std::max(o.grid[idx], quantize01(value));
  };

  const double cost_cap = cp.c_offroad + cp.c_pred;
  for (int v = 0; v < hw; ++v) {
    for (int u = 0; u < hw; ++u) {
      const Vec2 p = cell_world(v, u);
      double cls = 0.0, cost = 1.0;
      if (in.source_map && in.source_map->contains(p)) {
        const int i = in.source_map->to_cell_x(p.x);
        const int j = in.source_map->to_cell_y(p.y);
        cls = class_level(in.source_map->class_at(i, j));
        const double c = in.source_map->cost_at(i, j);
        cost = std::isfinite(c) ? std::min(c / cost_cap, 1.0) : 1.0;
      }
      stamp(0, v, u, cls);
      stamp(1, v, u, cost);
    }
  }

  if (in.car_history) {
    const size_t n = in.car_history->size();
    size_t k = 0;
    for (const auto& p : *in.car_history) {
      int v, u;
      if (world_cell(p, v, u)) stamp(2, v, u, static_cast<double>(k + 1) / n);
      ++k;
    }
  }
  if (in.selected_path) {
    for (const auto& pose : in.selected_path->poses) {
      int v, u;
      if (world_cell(pose.position(), v, u)) stamp(3, v, u, 1.0);
    }
  }
  for (const auto& ped : in.obs_world->pedestrians) {
    const size_t n = ped.history.size();
    size_t k = 0;
    for (const auto& p : ped.history) {
      int v, u;
      if (world_cell(p, v, u)) stamp(4, v, u, static_cast<double>(k + 1) / n);
      ++k;
    }
    int v, u;
    if (world_cell(ped.position, v, u)) stamp(4, v, u, 1.0);
  }
  if (in.prediction) {
    const int horizon = std::max(in.prediction->horizon_steps, 1);
    for (int t = 0; t < in.prediction->horizon_steps; ++t) {
      const double decay = 1.0 - static_cast<double>(t) / horizon;
      for (const auto& d : in.prediction->steps[t]) {
        int v, u;
        if (world_cell(d.center, v, u)) stamp(5, v, u, d.weight * decay);
      }
    }
  }

  o.scalars.resize(6);
  o.scalars[0] = std::clamp((in.prev_reward / 100.0 + 1.0) / 2.0, 0.0, 1.0);
  o.scalars[1] = std::clamp(in.speed / wp.v_max, 0.0, 1.0);
  for (int a = 0; a < kNumSpeedActions; ++a) {
    o.scalars[2 + a] = (static_cast<int>(in.prev_action) == a) ? 1.0 : 0.0;
  }
  return o;
}

void ReplayBuffer::push(Transition t) {
  if (static_cast<int>(data_.size()) < capacity_) {
    data_.push_back(std::move(t));
    return;
  }
  data_[head_] = std::move(t);
  head_ = (head_ + 1) % data_.size();
}

std::vector<const Transition*> ReplayBuffer::sample(int batch, Rng& rng) const {
  const int n = size();
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  const int take = std::min(batch, n);
  // Partial Fisher-Yates: uniform without replacement.
  for (int i = 0; i < take; ++i) {
    const int j = i + static_cast<int>(rng.uniform_int(static_cast<uint64_t>(n - i)));
    std::swap(idx[i], idx[j]);
  }
  std::vector<const Transition*> out;
  out.reserve(take);
  for (int i = 0; i < take; ++i) out.push_back(&at(idx[i]));
  return out;
}

namespace {

struct SampleEval {
  Activations act;        // live net on o_t
  Activations act_next;   // target net on o_{t+1}
  double y_v = 0.0;
  double q_hat = 0.0;
  double jv = 0.0, jq = 0.0, jpi = 0.0;
  HeadGrads hg_v, hg_q, hg_pi;
};

// Per-sample losses and head gradients (1/B scaling applied by the caller).
void eval_sample(const Transition& t, const NetParams& live, const NetParams& target,
                 const NetConfig& cfg, const SacParams& sp, SampleEval& ev) {
  forward(live, cfg, t.o->grid_double(), t.o->scalars, ev.act);
  forward(target, cfg, t.o1->grid_double(), t.o1->scalars, ev.act_next);

  const auto& act = ev.act;
  const int A = cfg.n_actions;
  const double alpha = sp.alpha;

  double y_v = 0.0;
  for (int a = 0; a < A; ++a) y_v += act.pi[a] * (act.q[a] - alpha * act.logpi[a]);
  ev.y_v = y_v;
  const double resid_v = act.v - y_v;
  ev.jv = 0.5 * resid_v * resid_v;

  ev.q_hat = t.r + sp.gamma * (t.done ? 0.0 : 1.0) * ev.act_next.v;
  const int ai = static_cast<int>(t.a);
  const double resid_q = act.q[ai] - ev.q_hat;
  ev.jq = 0.5 * resid_q * resid_q;

  double jpi = 0.0;
  for (int a = 0; a < A; ++a) jpi += act.pi[a] * (alpha * act.logpi[a] - act.q[a]);
  ev.jpi = jpi;

  // J_V: d/dv, d/dq_a and d/dlogits_k of 1/2 (v - y_v)^2 with y_v live.
  ev.hg_v.dv = resid_v;
  ev.hg_v.dq.assign(A, 0.0);
  ev.hg_v.dlogits.assign(A, 0.0);
  for (int a = 0; a < A; ++a) {
    const double s_a = act.q[a] - alpha * act.logpi[a];
    ev.hg_v.dq[a] = -resid_v * act.pi[a];
    ev.hg_v.dlogits[a] = -resid_v * act.pi[a] * (s_a - y_v);
  }

  ev.hg_q.dq.assign(A, 0.0);
  ev.hg_q.dq[ai] = resid_q;

  ev.hg_pi.dq.assign(A, 0.0);
  ev.hg_pi.dlogits.assign(A, 0.0);
  for (int a = 0; a < A; ++a) {
    ev.hg_pi.dq[a] = -act.pi[a];
    ev.hg_pi.dlogits[a] = act.pi[a] * ((alpha * act.logpi[a] - act.q[a]) - jpi);
  }
}

void scale_head_grads(HeadGrads& hg, double s) {
  hg.dv *= s;
  for (auto& v : hg.dq) v *= s;
  for (auto& v : hg.dlogits) v *= s;
}

}  // namespace

Losses compute_losses(const std::vector<const Transition*>& batch, const NetParams& live,
                      const NetParams& target, const NetConfig& cfg, const SacParams& sp,
                      NetGrads* grad_v, NetGrads* grad_q, NetGrads* grad_pi) {
  if (batch.empty()) throw TrainingError("compute_losses: empty batch");
  const double inv_b = 1.0 / static_cast<double>(batch.size());
  Losses losses;
  SampleEval ev;
  for (const Transition* t : batch) {
    eval_sample(*t, live, target, cfg, sp, ev);
    losses.j_v += ev.jv * inv_b;
    losses.j_q += ev.jq * inv_b;
    losses.j_pi += ev.jpi * inv_b;
    scale_head_grads(ev.hg_v, inv_b);
    scale_head_grads(ev.hg_q, inv_b);
    scale_head_grads(ev.hg_pi, inv_b);
    if (grad_v) backward(live, cfg, ev.act, ev.hg_v, *grad_v);
    if (grad_q) backward(live, cfg, ev.act, ev.hg_q, *grad_q);
    if (grad_pi) backward(live, cfg, ev.act, ev.hg_pi, *grad_pi);
  }
  if (!std::isfinite(losses.j_v) || !std::isfinite(losses.j_q) || !std::isfinite(losses.j_pi)) {
    throw TrainingError("non-finite loss: J_V=" + format_double(losses.j_v) +
                        " J_Q=" + format_double(losses.j_q) +
                        " J_pi=" + format_double(losses.j_pi));
  }
  return losses;
}

SacState make_sac_state(const SacParams& sp, uint64_t seed) {
  SacState st;
  st.cfg.grid_channels = 6;
  st.cfg.grid_hw = sp.obs_cells;
  st.cfg.conv_channels = sp.conv_channels;
  st.cfg.n_scalars = 6;
  st.cfg.fc_width = sp.fc_width;
  st.cfg.n_actions = kNumSpeedActions;

  st.live = make_params(st.cfg);
  Rng rng(seed);
  init_params(st.live, st.cfg, rng);
  st.target = st.live;
  st.adam_v.init(st.live);
  st.adam_q.init(st.live);
  st.adam_pi.init(st.live);
  st.adam_enc.init(st.live);
  return st;
}

Losses sac_update(SacState& st, const std::vector<const Transition*>& batch,
                  const SacParams& sp, int threads) {
  if (batch.empty()) throw TrainingError("sac_update: empty batch");
  const int B = static_cast<int>(batch.size());
  const double inv_b = 1.0 / static_cast<double>(B);

  // Slot accumulators; sample i goes to slot i % kGradSlots regardless of
  // thread count, and slots reduce in order.
  std::array<NetGrads, kGradSlots> slot_grads;
  std::array<Losses, kGradSlots> slot_losses{};
  for (auto& g : slot_grads) g.init(st.live);

  parallel_for(kGradSlots, threads, [&](int64_t slot) {
    SampleEval ev;
    std::vector<double> dh2;
    for (int i = static_cast<int>(slot); i < B; i += kGradSlots) {
      eval_sample(*batch[i], st.live, st.target, st.cfg, sp, ev);
      slot_losses[slot].j_v += ev.jv * inv_b;
      slot_losses[slot].j_q += ev.jq * inv_b;
      slot_losses[slot].j_pi += ev.jpi * inv_b;
      scale_head_grads(ev.hg_v, inv_b);
      scale_head_grads(ev.hg_q, inv_b);
      scale_head_grads(ev.hg_pi, inv_b);

      NetGrads& g = slot_grads[slot];
      // Heads take only their own loss's gradient; the encoder sees the
      // combined flow of all three.
      HeadGrads own;
      own.dv = ev.hg_v.dv;
      own.dq = ev.hg_q.dq;
      own.dlogits = ev.hg_pi.dlogits;
      head_weight_grads(st.live, ev.act, own, g);

      dh2.assign(ev.act.h2.size(), 0.0);
      head_flow(st.live, ev.hg_v, dh2);
      head_flow(st.live, ev.hg_q, dh2);
      head_flow(st.live, ev.hg_pi, dh2);
      encoder_backward(st.live, st.cfg, ev.act, dh2, g);
    }
  });

  NetGrads total;
  total.init(st.live);
  Losses losses;
  for (int s = 0; s < kGradSlots; ++s) {
    total.add_scaled(slot_grads[s], 1.0);
    losses.j_v += slot_losses[s].j_v;
    losses.j_q += slot_losses[s].j_q;
    losses.j_pi += slot_losses[s].j_pi;
  }
  if (!std::isfinite(losses.j_v) || !std::isfinite(losses.j_q) || !std::isfinite(losses.j_pi)) {
    throw TrainingError("non-finite loss in sac_update: J_V=" + format_double(losses.j_v) +
                        " J_Q=" + format_double(losses.j_q) +
                        " J_pi=" + format_double(losses.j_pi));
  }

  adam_step(st.live, total, st.adam_v, sp.lr, is_v_tensor);
  adam_step(st.live, total, st.adam_q, sp.lr, is_q_tensor);
  adam_step(st.live, total, st.adam_pi, sp.lr, is_pi_tensor);
  adam_step(st.live, total, st.adam_enc, sp.lr, is_encoder_tensor);
  polyak_update(st.target, st.live, sp.tau_polyak);
  return losses;
}

std::array<double, kNumSpeedActions> softmax(const std::array<double, kNumSpeedActions>& x,
                                             double temperature) {
  std::array<double, kNumSpeedActions> out{};
  const double t = temperature > 0.0 ? temperature : 1.0;
  double mx = x[0] / t;
  for (int a = 1; a < kNumSpeedActions; ++a) mx = std::max(mx, x[a] / t);
  double sum = 0.0;
  for (int a = 0; a < kNumSpeedActions; ++a) {
    out[a] = std::exp(x[a] / t - mx);
    sum += out[a];
  }
  for (int a = 0; a < kNumSpeedActions; ++a) out[a] /= sum;
  return out;
}

ActResult act(const Observation& o, const SacState& st, const SacParams& sp,
              const std::array<double, kNumSpeedActions>* planner_values, double beta,
              ActMode mode, Rng& rng) {
  ActResult res;
  Activations a;
  forward(st.live, st.cfg, o.grid_double(), o.scalars, a);

  if (mode == ActMode::Test) {
    int arg = 0;
    for (int k = 1; k < kNumSpeedActions; ++k) {
      if (a.logits[k] > a.logits[arg]) arg = k;
    }
    res.action = static_cast<SpeedAction>(arg);
    for (int k = 0; k < kNumSpeedActions; ++k) res.distribution[k] = a.pi[k];
    return res;
  }

  if (planner_values == nullptr) {
    throw PolicyError("act: Train mode requires planner value estimates");
  }
  const auto q_planner = softmax(*planner_values, sp.t_plan);
  const double b = std::clamp(beta, 0.0, 1.0);
  double cum = 0.0;
  const double u = rng.uniform();
  int chosen = kNumSpeedActions - 1;
  for (int k = 0; k < kNumSpeedActions; ++k) {
    res.distribution[k] = (1.0 - b) * q_planner[k] + b * a.pi[k];
  }
  for (int k = 0; k < kNumSpeedActions; ++k) {
    cum += res.distribution[k];
    if (u < cum) {
      chosen = k;
      break;
    }
  }
  res.action = static_cast<SpeedAction>(chosen);
  return res;
}

}  // namespace hylear
