#include "hylear/planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <unordered_map>

#include "hylear/io_util.hpp"
#include "hylear/parallel.hpp"

namespace hylear {

namespace {

constexpr double kSampleStepFactor = 0.5;  // cost samples every res/2 along arcs

double bin_heading(int bin, int heading_bins) { return bin * (2.0 * kPi / heading_bins); }

int heading_to_bin(double heading, int heading_bins) {
  const double w = 2.0 * kPi / heading_bins;
  int b = static_cast<int>(std::lround(heading / w)) % heading_bins;
  if (b < 0) b += heading_bins;
  return b;
}

// Endpoint of a constant-curvature arc starting at (pos, heading).
Vec2 arc_point(const Vec2& pos, double heading, double curvature, double s) {
  if (std::abs(curvature) < 1e-12) {
    return {pos.x + s * std::cos(heading), pos.y + s * std::sin(heading)};
  }
  const double h1 = heading + curvature * s;
  return {pos.x + (std::sin(h1) - std::sin(heading)) / curvature,
          pos.y - (std::cos(h1) - std::cos(heading)) / curvature};
}

uint64_t state_key(const LatticeState& s) {
  return (static_cast<uint64_t>(static_cast<uint32_t>(s.i)) << 37) ^
         (static_cast<uint64_t>(static_cast<uint32_t>(s.j)) << 5) ^
         static_cast<uint64_t>(s.bin);
}

}  // namespace

std::vector<MotionPrimitive> lattice_primitives(int heading_bins) {
  const double bin_w = 2.0 * kPi / heading_bins;
  std::vector<MotionPrimitive> prims;
  prims.push_back({0, 0.0, 1.0, 0});
  prims.push_back({1, bin_w / 2.0, 2.0, 1});    // sharp left
  prims.push_back({2, -bin_w / 2.0, 2.0, -1});  // sharp right
  prims.push_back({3, bin_w / 3.0, 3.0, 1});    // gentle left
  prims.push_back({4, -bin_w / 3.0, 3.0, -1});  // gentle right
  return prims;
}

Pose lattice_pose(const CostMap& map, const LatticeState& s, int heading_bins) {
  const Vec2 c = map.cell_center(s.i, s.j);
  return {c.x, c.y, normalize_angle(bin_heading(s.bin, heading_bins))};
}

std::vector<LatticeEdge> lattice_successors(const CostMap& map, const LatticeState& s,
                                            const std::vector<MotionPrimitive>& prims,
                                            int heading_bins) {
  std::vector<LatticeEdge> out;
  const Vec2 start = map.cell_center(s.i, s.j);
  const double heading = bin_heading(s.bin, heading_bins);

  for (const auto& prim : prims) {
    const Vec2 end = arc_point(start, heading, prim.curvature, prim.length);
    const int ei = map.to_cell_x(end.x);
    const int ej = map.to_cell_y(end.y);
    if (!map.in_bounds(ei, ej)) continue;
    LatticeState to{ei, ej, (s.bin + prim.delta_bin % heading_bins + heading_bins) % heading_bins};

    // Integrate cell costs along the swept polyline: arc samples, then the
    // snap segment to the successor's canonical cell center.
    const double ds = map.resolution * kSampleStepFactor;
    const int n = std::max(1, static_cast<int>(std::ceil(prim.length / ds)));
    std::vector<Vec2> pts;
    pts.reserve(n + 2);
    pts.push_back(start);
    for (int k = 1; k <= n; ++k) {
      const double sk = std::min(prim.length, k * ds);
      pts.push_back(arc_point(start, heading, prim.curvature, sk));
    }
    pts.push_back(map.cell_center(to.i, to.j));

    double cost = 0.0;
    double length = 0.0;
    bool feasible = true;
    for (size_t k = 0; k + 1 < pts.size(); ++k) {
      const Vec2 mid = (pts[k] + pts[k + 1]) * 0.5;
      const double seg = (pts[k + 1] - pts[k]).norm();
      const double c = map.cost_at_point(mid);
      if (!std::isfinite(c)) {
        feasible = false;
        break;
      }
      cost += c * seg;
      length += seg;
    }
    if (!feasible) continue;
    out.push_back({to, cost, length, prim.id});
  }
  return out;
}

namespace {

struct Node {
  LatticeState state;
  double g = 0.0;
  int parent = -1;     // index into the node pool
  int primitive = -1;  // primitive leading here
  bool closed = false;
};

struct OpenEntry {
  double f;
  double g;
  uint64_t seq;
  int node;
  bool operator>(const OpenEntry& o) const {
    if (f != o.f) return f > o.f;
    if (g != o.g) return g > o.g;
    return seq > o.seq;
  }
};

struct SearchOutcome {
  bool found = false;
  bool exhausted_open = false;  // proven unreachable on this lattice
  int goal_node = -1;
  std::vector<Node> nodes;
};

bool goal_satisfied(const CostMap& map, const LatticeState& s, const Pose& goal,
                    const PlannerParams& pp) {
  const Pose p = lattice_pose(map, s, pp.heading_bins);
  const double dx = p.x - goal.x, dy = p.y - goal.y;
  if (dx * dx + dy * dy > pp.goal_xy_tol * pp.goal_xy_tol) return false;
  return std::abs(normalize_angle(p.heading - goal.heading)) <= pp.goal_heading_tol;
}

// One weighted A* pass. Expands at most *expansions_left nodes (decremented
// as it runs); nodes are expanded once (closed on pop), admissible-consistent
// heuristic keeps the w-bound valid without re-expansions.
SearchOutcome weighted_search(const CostMap& map, const LatticeState& start, const Pose& goal,
                              double w, const std::vector<MotionPrimitive>& prims,
                              const PlannerParams& pp, int* expansions_left,
                              const std::chrono::steady_clock::time_point* deadline) {
  SearchOutcome out;
  const double floor_cost = [&] {
    double m = kInfCost;
    for (const double c : map.cells) {
      if (std::isfinite(c)) m = std::min(m, c);
    }
    return std::isfinite(m) ? m : 1.0;
  }();
  const auto heuristic = [&](const LatticeState& s) {
    const Pose p = lattice_pose(map, s, pp.heading_bins);
    return floor_cost * std::hypot(p.x - goal.x, p.y - goal.y);
  };

  std::unordered_map<uint64_t, int> index;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, std::greater<OpenEntry>> open;
  uint64_t seq = 0;

  out.nodes.push_back({start, 0.0, -1, -1, false});
  index[state_key(start)] = 0;
  open.push({w * heuristic(start), 0.0, seq++, 0});

  while (!open.empty()) {
    if (*expansions_left <= 0) return out;
    if (deadline && std::chrono::steady_clock::now() >= *deadline) return out;
    const OpenEntry top = open.top();
    open.pop();
    Node& node = out.nodes[top.node];
    if (node.closed) continue;
    node.closed = true;
    --(*expansions_left);

    if (goal_satisfied(map, node.state, goal, pp)) {
      out.found = true;
      out.goal_node = top.node;
      return out;
    }

    for (const auto& edge : lattice_successors(map, node.state, prims, pp.heading_bins)) {
      const double g2 = node.g + edge.cost;
      const uint64_t key = state_key(edge.to);
      auto it = index.find(key);
      if (it == index.end()) {
        const int id = static_cast<int>(out.nodes.size());
        out.nodes.push_back({edge.to, g2, top.node, edge.primitive, false});
        index.emplace(key, id);
        open.push({g2 + w * heuristic(edge.to), g2, seq++, id});
      } else {
        Node& existing = out.nodes[it->second];
        if (!existing.closed && g2 < existing.g) {
          existing.g = g2;
          existing.parent = top.node;
          existing.primitive = edge.primitive;
          open.push({g2 + w * heuristic(edge.to), g2, seq++, it->second});
        }
      }
    }
  }
  out.exhausted_open = true;
  return out;
}

Path reconstruct(const CostMap& map, const SearchOutcome& search, int goal_node,
                 const std::vector<MotionPrimitive>& prims, const PlannerParams& pp) {
  std::vector<int> chain;  // node indices from start to goal
  for (int n = goal_node; n >= 0; n = search.nodes[n].parent) chain.push_back(n);
  std::reverse(chain.begin(), chain.end());

  Path path;
  path.total_cost = search.nodes[goal_node].g;
  const Pose start_pose = lattice_pose(map, search.nodes[chain[0]].state, pp.heading_bins);
  path.poses.push_back(start_pose);

  for (size_t k = 1; k < chain.size(); ++k) {
    const Node& node = search.nodes[chain[k]];
    const Node& parent = search.nodes[chain[k - 1]];
    const MotionPrimitive& prim = prims[node.primitive];
    const Pose from = lattice_pose(map, parent.state, pp.heading_bins);
    const double spacing = map.resolution;
    const int n = std::max(1, static_cast<int>(std::ceil(prim.length / spacing)));
    for (int s = 1; s <= n; ++s) {
      const double sk = std::min(prim.length, s * spacing);
      const Vec2 p = arc_point(from.position(), from.heading, prim.curvature, sk);
      path.poses.push_back({p.x, p.y, normalize_angle(from.heading + prim.curvature * sk)});
    }
    path.length += prim.length;
    path.primitive_ids.push_back(prim.id);
  }
  return path;
}

}  // namespace

PlanResult plan_path(const CostMap& map, const Pose& start, const Pose& goal,
                     const SearchBudget& budget, const PlannerParams& pp) {
  PlanResult result;
  if (!map.contains(start.position()) || !map.contains(goal.position())) {
    throw ConfigError("plan_path: start or goal outside the cost map");
  }
  LatticeState s0{map.to_cell_x(start.x), map.to_cell_y(start.y),
                  heading_to_bin(start.heading, pp.heading_bins)};
  if (!std::isfinite(map.cost_at(s0.i, s0.j))) {
    result.failure = PlanFailure::Unreachable;
    return result;
  }

  const auto prims = lattice_primitives(pp.heading_bins);
  int expansions_left = budget.max_expansions;
  std::chrono::steady_clock::time_point deadline;
  const bool use_deadline = budget.deadline_ms > 0.0;
  if (use_deadline) {
    deadline = std::chrono::steady_clock::now() +
               std::chrono::microseconds(static_cast<int64_t>(budget.deadline_ms * 1000.0));
  }

  double best_cost = kInfCost;
  for (const double w : budget.weight_schedule) {
    if (expansions_left <= 0) break;
    if (use_deadline && std::chrono::steady_clock::now() >= deadline) break;
    SearchOutcome search = weighted_search(map, s0, goal, w, prims, pp, &expansions_left,
                                           use_deadline ? &deadline : nullptr);
    result.expansions = budget.max_expansions - expansions_left;
    if (search.found) {
      result.bound_weight = w;  // schedule is decreasing; last completed is tightest
      const double cost = search.nodes[search.goal_node].g;
      if (cost < best_cost) {
        best_cost = cost;
        Path path = reconstruct(map, search, search.goal_node, prims, pp);
        result.path = std::move(path);
      }
      if (w == 1.0) break;  // already optimal on the lattice
    } else if (search.exhausted_open) {
      // Complete search with no solution: the goal region is unreachable.
      if (!result.path) result.failure = PlanFailure::Unreachable;
      return result;
    } else {
      break;  // budget ran out mid-search
    }
  }
  if (!result.path) {
    result.failure = PlanFailure::BudgetExhausted;
  }
  return result;
}

Pose project_goal_into_map(const CostMap& map, const Pose& goal) {
  Pose g = goal;
  const double margin = 2.0 * map.resolution;
  g.x = std::clamp(g.x, map.origin.x + margin,
                   map.origin.x + map.width * map.resolution - margin);
  g.y = std::clamp(g.y, map.origin.y + margin,
                   map.origin.y + map.height * map.resolution - margin);
  int gi = map.to_cell_x(g.x), gj = map.to_cell_y(g.y);
  if (std::isfinite(map.cost_at(gi, gj))) return g;
  // Spiral out to the nearest finite cell.
  for (int r = 1; r < std::max(map.width, map.height); ++r) {
    for (int dj = -r; dj <= r; ++dj) {
      for (int di = -r; di <= r; ++di) {
        if (std::max(std::abs(di), std::abs(dj)) != r) continue;
        const int i = gi + di, j = gj + dj;
        if (map.in_bounds(i, j) && std::isfinite(map.cost_at(i, j))) {
          const Vec2 c = map.cell_center(i, j);
          return {c.x, c.y, g.heading};
        }
      }
    }
  }
  return g;
}

KPathResult plan_k_paths(const WorldState& obs, const RoadLayout& layout, const Pose& goal,
                         const SearchBudget& budget, const PlannerParams& pp,
                         const CostmapParams& cp, const WorldParams& wp, int threads) {
  KPathResult out;
  out.maps[0] = build_base_costmap(obs, layout, cp, wp);
  out.maps[1] = build_sidewalk_costmap(out.maps[0], obs, cp);
  out.prediction = predict_pedestrians(obs.pedestrians, layout, cp.predict_horizon, cp, wp);
  out.maps[2] = build_predictive_costmap(out.maps[0], out.prediction, cp);

  std::array<PlanResult, 3> results;
  parallel_for(3, threads, [&](int64_t v) {
    const Pose proj = project_goal_into_map(out.maps[v], goal);
    results[v] = plan_path(out.maps[v], obs.car.pose, proj, budget, pp);
  });

  for (int v = 0; v < 3; ++v) {
    if (results[v].path) {
      Path p = std::move(*results[v].path);
      p.source_map = static_cast<MapVariant>(v);
      out.paths.push_back(std::move(p));
    }
  }
  if (out.paths.empty()) {
    throw PolicyError("plan_k_paths: no feasible path on any cost-map variant");
  }
  return out;
}

double extract_steering(const Path& path, const CarState& car, const PlannerParams& pp,
                        const WorldParams& wp) {
  if (path.poses.empty()) throw PolicyError("extract_steering: empty path");
  const Vec2 pos = car.pose.position();

  size_t nearest = 0;
  double best = kInfCost;
  for (size_t k = 0; k < path.poses.size(); ++k) {
    const double d = (path.poses[k].position() - pos).norm_sq();
    if (d < best) {
      best = d;
      nearest = k;
    }
  }
  size_t target = path.poses.size() - 1;
  for (size_t k = nearest; k < path.poses.size(); ++k) {
    if ((path.poses[k].position() - pos).norm() >= pp.lookahead) {
      target = k;
      break;
    }
  }
  const Vec2 t = path.poses[target].position();
  const double alpha = normalize_angle(std::atan2(t.y - pos.y, t.x - pos.x) - car.pose.heading);
  const double steering = std::atan2(2.0 * wp.wheelbase * std::sin(alpha), pp.lookahead);
  return std::clamp(steering, -wp.steer_max, wp.steer_max);
}

}  // namespace hylear
