#include "hylear/episode.hpp"

#include <chrono>
#include <sstream>

#include <json.hpp>

#include "hylear/io_util.hpp"

namespace hylear {

using nlohmann::json;

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Goal: return "goal";
    case Outcome::Crash: return "crash";
    case Outcome::NearMissGoal: return "near_miss_goal";
    case Outcome::Timeout: return "timeout";
  }
  return "unknown";
}

std::string event_name(EventKind e) {
  switch (e) {
    case EventKind::Crash: return "crash";
    case EventKind::NearMiss: return "near_miss";
    case EventKind::Goal: return "goal";
  }
  return "unknown";
}

EpisodeTrace run_episode(const Scenario& scenario, Policy& policy, const WorldParams& wp,
                         const EpisodeOptions& opts) {
  EpisodeTrace trace;
  trace.scenario_id = scenario.id;
  trace.family = scenario.family;
  trace.seed = opts.seed != 0 ? opts.seed : scenario.seed;
  trace.dt = wp.dt;

  Rng rng(trace.seed);
  WorldState world = initial_world(scenario, scenario.layout, wp);
  trace.states.push_back(world);

  try {
    policy.reset(scenario);
  } catch (const std::exception& e) {
    throw PolicyError("policy '" + policy.name() + "' failed to reset on scenario '" +
                      scenario.id + "': " + e.what());
  }

  bool near_miss_seen = false;
  const int max_steps = static_cast<int>(wp.t_max / wp.dt + 0.5);
  for (int step = 0; step < max_steps; ++step) {
    ControlAction action;
    double dms = 0.0;
    try {
      if (opts.wall_timing) {
        const auto t0 = std::chrono::steady_clock::now();
        action = policy.act(observable_world(world));
        const auto t1 = std::chrono::steady_clock::now();
        dms = std::chrono::duration<double, std::milli>(t1 - t0).count();
      } else {
        action = policy.act(observable_world(world));
      }
    } catch (const std::exception& e) {
      throw PolicyError("policy '" + policy.name() + "' failed at t=" +
                        format_double(world.time) + " on scenario '" + scenario.id +
                        "': " + e.what());
    }

    world = step_world(world, action, rng, wp);
    trace.actions.push_back(action);
    trace.states.push_back(world);
    trace.risk_series.push_back(policy.last_step_risk());
    trace.decision_ms.push_back(dms);

    const auto events = detect_events(world, scenario.car_goal, wp);
    for (const auto e : events) trace.events.emplace_back(world.time, e);
    if (events.count(EventKind::Crash)) {
      trace.outcome = Outcome::Crash;
      return trace;
    }
    if (events.count(EventKind::NearMiss)) near_miss_seen = true;
    if (events.count(EventKind::Goal)) {
      trace.outcome = near_miss_seen ? Outcome::NearMissGoal : Outcome::Goal;
      trace.ttg = world.time;
      return trace;
    }
  }
  trace.outcome = Outcome::Timeout;
  return trace;
}

std::string trace_to_jsonl(const EpisodeTrace& trace) {
  std::ostringstream out;
  json header = {{"format", 1},
                 {"scenario_id", trace.scenario_id},
                 {"family", trace.family},
                 {"seed", trace.seed},
                 {"dt", trace.dt}};
  out << header.dump() << "\n";

  for (size_t i = 0; i < trace.states.size(); ++i) {
    const auto& w = trace.states[i];
    json rec;
    rec["t"] = w.time;
    rec["car"] = {w.car.pose.x, w.car.pose.y, w.car.pose.heading, w.car.speed,
                  w.car.acceleration};
    json peds = json::array();
    for (const auto& p : w.pedestrians) peds.push_back({p.position.x, p.position.y});
    rec["peds"] = peds;
    if (i > 0) {
      const size_t k = i - 1;
      rec["act"] = {trace.actions[k].steering,
                    static_cast<int>(trace.actions[k].speed_action)};
      rec["risk"] = trace.risk_series[k];
      rec["dms"] = trace.decision_ms[k];
      json evs = json::array();
      for (const auto& [t, e] : trace.events) {
        if (t == w.time) evs.push_back(event_name(e));
      }
      if (!evs.empty()) rec["events"] = evs;
    }
    out << rec.dump() << "\n";
  }
  json footer = {{"outcome", outcome_name(trace.outcome)}};
  if (trace.outcome == Outcome::Goal || trace.outcome == Outcome::NearMissGoal) {
    footer["ttg"] = trace.ttg;
  }
  out << footer.dump() << "\n";
  return out.str();
}

void save_trace(const EpisodeTrace& trace, const std::string& path) {
  write_file(path, trace_to_jsonl(trace));
}

TraceSummary summarize_trace(const EpisodeTrace& trace) {
  TraceSummary s;
  s.scenario_id = trace.scenario_id;
  s.family = trace.family;
  s.outcome = trace.outcome;
  s.ttg = trace.ttg;
  s.dt = trace.dt;
  for (const auto& [t, e] : trace.events) {
    if (e == EventKind::NearMiss) s.had_near_miss = true;
    if (e == EventKind::Crash) s.had_crash = true;
  }
  for (size_t i = 1; i < trace.states.size(); ++i) {
    s.accelerations.push_back(trace.states[i].car.acceleration);
  }
  s.risk_series = trace.risk_series;
  s.decision_ms = trace.decision_ms;
  return s;
}

TraceSummary load_trace_summary(const std::string& path) {
  TraceSummary s;
  std::istringstream in(read_file(path));
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw IoError("bad trace line in " + path + ": " + e.what());
    }
    if (first) {
      if (j.value("format", 0) != 1) throw IoError("unsupported trace format in " + path);
      s.scenario_id = j.at("scenario_id").get<std::string>();
      s.family = j.at("family").get<std::string>();
      s.dt = j.value("dt", 0.1);
      first = false;
      continue;
    }
    if (j.contains("outcome")) {
      const std::string o = j.at("outcome").get<std::string>();
      if (o == "goal") s.outcome = Outcome::Goal;
      else if (o == "crash") s.outcome = Outcome::Crash;
      else if (o == "near_miss_goal") s.outcome = Outcome::NearMissGoal;
      else s.outcome = Outcome::Timeout;
      s.ttg = j.value("ttg", -1.0);
      continue;
    }
    if (j.contains("car") && j.contains("act")) {
      s.accelerations.push_back(j.at("car")[4].get<double>());
      s.risk_series.push_back(j.value("risk", 0.0));
      s.decision_ms.push_back(j.value("dms", 0.0));
    }
    if (j.contains("events")) {
      for (const auto& e : j.at("events")) {
        if (e.get<std::string>() == "near_miss") s.had_near_miss = true;
        if (e.get<std::string>() == "crash") s.had_crash = true;
      }
    }
  }
  if (first) throw IoError("empty trace file: " + path);
  return s;
}

}  // namespace hylear
