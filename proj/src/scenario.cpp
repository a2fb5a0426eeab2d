#include "hylear/scenario.hpp"

#include <json.hpp>

#include "hylear/io_util.hpp"
#include "hylear/rng.hpp"

namespace hylear {

using nlohmann::json;

namespace {

json rect_to_json(const Rect& r) {
  return json{{"center", {r.center.x, r.center.y}},
              {"half_length", r.half_length},
              {"half_width", r.half_width},
              {"heading", r.heading}};
}

Rect rect_from_json(const json& j) {
  Rect r;
  r.center = {j.at("center")[0].get<double>(), j.at("center")[1].get<double>()};
  r.half_length = j.at("half_length").get<double>();
  r.half_width = j.at("half_width").get<double>();
  r.heading = j.value("heading", 0.0);
  return r;
}

json pose_to_json(const Pose& p) { return json::array({p.x, p.y, p.heading}); }

Pose pose_from_json(const json& j) {
  return Pose{j[0].get<double>(), j[1].get<double>(), normalize_angle(j[2].get<double>())};
}

LaneStrip make_lane(Vec2 a, Vec2 b, double width) {
  LaneStrip l;
  l.center_a = a;
  l.center_b = b;
  const Vec2 d = b - a;
  l.rect.center = (a + b) * 0.5;
  l.rect.half_length = d.norm() * 0.5;
  l.rect.half_width = width * 0.5;
  l.rect.heading = std::atan2(d.y, d.x);
  return l;
}

}  // namespace

std::vector<Scenario> generate_scenarios(const std::vector<ScenarioFamily>& families,
                                         uint64_t base_seed) {
  std::vector<Scenario> out;
  uint64_t index = 0;
  for (const auto& fam : families) {
    if (fam.grid_speeds.empty() || fam.grid_crossing_distances.empty()) {
      throw ConfigError("family '" + fam.name + "' has an empty parameter grid");
    }
    for (size_t si = 0; si < fam.grid_speeds.size(); ++si) {
      for (size_t di = 0; di < fam.grid_crossing_distances.size(); ++di) {
        Scenario s;
        s.id = fam.name + "_s" + std::to_string(si) + "_c" + std::to_string(di);
        s.family = fam.name;
        s.layout = fam.layout;
        s.car_start = fam.car_start;
        s.car_goal = fam.car_goal;
        for (const auto& t : fam.ped_templates) {
          PedSpec p = t;
          p.speed = fam.grid_speeds[si];
          p.crossing_distance = fam.grid_crossing_distances[di];
          s.peds.push_back(p);
        }
        s.incoming_car = fam.incoming_car;
        s.seed = Rng::derive(base_seed, index);
        ++index;

        if (s.car_start.x == s.car_goal.x && s.car_start.y == s.car_goal.y) {
          throw ConfigError("family '" + fam.name + "': car_start equals car_goal");
        }
        for (const auto& p : s.peds) {
          if (p.crossing_distance <= 0.0) {
            throw ConfigError("family '" + fam.name + "': crossing_distance must be > 0");
          }
          if (!s.layout.bounds.contains(p.spawn)) {
            throw ConfigError("family '" + fam.name + "': pedestrian spawn outside bounds");
          }
        }
        out.push_back(std::move(s));
      }
    }
  }
  return out;
}

ScenarioFamily parse_family(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("family parse error: ") + e.what());
  }
  ScenarioFamily f;
  f.format = j.value("format", 1);
  if (f.format != 1) throw ConfigError("unsupported family format");
  f.name = j.at("family").get<std::string>();
  const auto& jl = j.at("layout");
  const auto& b = jl.at("bounds");
  f.layout.bounds = {b[0].get<double>(), b[1].get<double>(), b[2].get<double>(),
                     b[3].get<double>()};
  for (const auto& lane : jl.value("lanes", json::array())) {
    f.layout.lanes.push_back(make_lane({lane.at("a")[0], lane.at("a")[1]},
                                       {lane.at("b")[0], lane.at("b")[1]},
                                       lane.at("width").get<double>()));
  }
  for (const auto& sw : jl.value("sidewalks", json::array())) {
    f.layout.sidewalks.push_back(rect_from_json(sw));
  }
  for (const auto& ob : jl.value("obstacles", json::array())) {
    f.layout.obstacles.push_back(rect_from_json(ob));
  }
  f.car_start = pose_from_json(j.at("car_start"));
  f.car_goal = pose_from_json(j.at("car_goal"));
  for (const auto& p : j.value("peds", json::array())) {
    PedSpec t;
    t.spawn = {p.at("spawn")[0].get<double>(), p.at("spawn")[1].get<double>()};
    if (p.contains("walk_dir")) {
      t.walk_dir = {p.at("walk_dir")[0].get<double>(), p.at("walk_dir")[1].get<double>()};
    }
    t.trigger_distance = p.value("trigger_distance", 20.0);
    f.ped_templates.push_back(t);
  }
  if (j.contains("incoming_car")) {
    IncomingCarSpec ic;
    ic.start = pose_from_json(j.at("incoming_car").at("start"));
    ic.speed = j.at("incoming_car").value("speed", 5.0);
    f.incoming_car = ic;
  }
  const auto& g = j.at("grid");
  f.grid_speeds = g.at("speeds").get<std::vector<double>>();
  f.grid_crossing_distances = g.at("crossing_distances").get<std::vector<double>>();
  return f;
}

ScenarioFamily load_family(const std::string& path) { return parse_family(read_file(path)); }

std::string family_to_json(const ScenarioFamily& f) {
  json j;
  j["format"] = f.format;
  j["family"] = f.name;
  json jl;
  jl["bounds"] = {f.layout.bounds.min_x, f.layout.bounds.min_y, f.layout.bounds.max_x,
                  f.layout.bounds.max_y};
  jl["lanes"] = json::array();
  for (const auto& l : f.layout.lanes) {
    jl["lanes"].push_back(json{{"a", {l.center_a.x, l.center_a.y}},
                               {"b", {l.center_b.x, l.center_b.y}},
                               {"width", l.rect.half_width * 2.0}});
  }
  jl["sidewalks"] = json::array();
  for (const auto& r : f.layout.sidewalks) jl["sidewalks"].push_back(rect_to_json(r));
  jl["obstacles"] = json::array();
  for (const auto& r : f.layout.obstacles) jl["obstacles"].push_back(rect_to_json(r));
  j["layout"] = jl;
  j["car_start"] = pose_to_json(f.car_start);
  j["car_goal"] = pose_to_json(f.car_goal);
  j["peds"] = json::array();
  for (const auto& p : f.ped_templates) {
    j["peds"].push_back(json{{"spawn", {p.spawn.x, p.spawn.y}},
                             {"walk_dir", {p.walk_dir.x, p.walk_dir.y}},
                             {"trigger_distance", p.trigger_distance}});
  }
  if (f.incoming_car) {
    j["incoming_car"] = {{"start", pose_to_json(f.incoming_car->start)},
                         {"speed", f.incoming_car->speed}};
  }
  j["grid"] = {{"speeds", f.grid_speeds}, {"crossing_distances", f.grid_crossing_distances}};
  return j.dump(2);
}

namespace {

// Shared geometry for the straight-road families: road along +x, ego lane
// center y = -1.75, oncoming lane center y = +1.75, sidewalks at y = +-4.5.
ScenarioFamily straight_base(const std::string& name, double road_len) {
  ScenarioFamily f;
  f.name = name;
  f.layout.bounds = {-5.0, -10.0, road_len + 5.0, 10.0};
  f.layout.lanes.push_back(make_lane({0.0, -1.75}, {road_len, -1.75}, 3.5));
  f.layout.lanes.push_back(make_lane({0.0, 1.75}, {road_len, 1.75}, 3.5));
  f.layout.sidewalks.push_back(Rect{{road_len / 2.0, -4.5}, road_len / 2.0, 1.0, 0.0});
  f.layout.sidewalks.push_back(Rect{{road_len / 2.0, 4.5}, road_len / 2.0, 1.0, 0.0});
  f.car_start = {4.0, -1.75, 0.0};
  f.car_goal = {road_len - 4.0, -1.75, 0.0};
  f.grid_speeds = {1.0, 1.5, 2.0};
  f.grid_crossing_distances = {3.0, 5.0, 7.0};
  return f;
}

void add_vertical_road(ScenarioFamily& f, double x_center) {
  f.layout.lanes.push_back(make_lane({x_center - 1.75, -12.0}, {x_center - 1.75, 12.0}, 3.5));
  f.layout.lanes.push_back(make_lane({x_center + 1.75, -12.0}, {x_center + 1.75, 12.0}, 3.5));
  f.layout.sidewalks.push_back(Rect{{x_center - 4.5, -7.0}, 1.0, 3.0, 0.0});
  f.layout.sidewalks.push_back(Rect{{x_center + 4.5, -7.0}, 1.0, 3.0, 0.0});
  f.layout.bounds.min_y = -12.0;
  f.layout.bounds.max_y = 12.0;
}

PedSpec ped_on_right(double x, double trigger) {
  PedSpec p;
  p.spawn = {x, -4.5};
  p.walk_dir = {1.0, 0.0};
  p.trigger_distance = trigger;
  return p;
}

PedSpec ped_on_left(double x, double trigger) {
  PedSpec p;
  p.spawn = {x, 4.5};
  p.walk_dir = {-1.0, 0.0};
  p.trigger_distance = trigger;
  return p;
}

Rect parked_car(double x, double y) { return Rect{{x, y}, 2.2, 0.9, 0.0}; }

}  // namespace

std::vector<ScenarioFamily> builtin_families() {
  std::vector<ScenarioFamily> fams;
  const double len = 80.0;

  {
    auto f = straight_base("straight_cross_right", len);
    f.ped_templates.push_back(ped_on_right(42.0, 20.0));
    fams.push_back(f);
  }
  {
    auto f = straight_base("straight_cross_left", len);
    f.ped_templates.push_back(ped_on_left(42.0, 20.0));
    fams.push_back(f);
  }
  {
    auto f = straight_base("straight_two_sided", len);
    f.ped_templates.push_back(ped_on_right(38.0, 20.0));
    f.ped_templates.push_back(ped_on_left(48.0, 22.0));
    fams.push_back(f);
  }
  {
    auto f = straight_base("occluded_parked_right", len);
    f.layout.obstacles.push_back(parked_car(36.0, -3.1));
    f.ped_templates.push_back(ped_on_right(38.5, 14.0));
    fams.push_back(f);
  }
  {
    auto f = straight_base("occluded_parked_left", len);
    f.layout.obstacles.push_back(parked_car(36.0, 3.1));
    f.ped_templates.push_back(ped_on_left(38.5, 14.0));
    fams.push_back(f);
  }
  {
    auto f = straight_base("occluded_double_parked", len);
    f.layout.obstacles.push_back(parked_car(30.0, -3.1));
    f.layout.obstacles.push_back(parked_car(40.0, -3.1));
    f.ped_templates.push_back(ped_on_right(42.5, 14.0));
    fams.push_back(f);
  }
  {
    auto f = straight_base("intersection_cross", len);
    add_vertical_road(f, 44.0);
    f.ped_templates.push_back(ped_on_right(36.0, 18.0));
    fams.push_back(f);
  }
  {
    auto f = straight_base("intersection_occluded", len);
    add_vertical_road(f, 44.0);
    f.layout.obstacles.push_back(parked_car(33.0, -3.1));
    f.ped_templates.push_back(ped_on_right(35.5, 14.0));
    fams.push_back(f);
  }
  {
    auto f = straight_base("incoming_car_cross", len);
    f.ped_templates.push_back(ped_on_right(42.0, 20.0));
    IncomingCarSpec ic;
    ic.start = {len - 2.0, 1.75, kPi};
    ic.speed = 5.0;
    f.incoming_car = ic;
    fams.push_back(f);
  }
  {
    auto f = straight_base("incoming_intersection", len);
    add_vertical_road(f, 44.0);
    f.ped_templates.push_back(ped_on_right(36.0, 18.0));
    IncomingCarSpec ic;
    ic.start = {len - 2.0, 1.75, kPi};
    ic.speed = 4.0;
    f.incoming_car = ic;
    fams.push_back(f);
  }
  {
    auto f = straight_base("staggered_pair", len);
    f.ped_templates.push_back(ped_on_right(34.0, 18.0));
    f.ped_templates.push_back(ped_on_right(50.0, 18.0));
    fams.push_back(f);
  }
  {
    auto f = straight_base("clear_road", len);
    fams.push_back(f);
  }
  return fams;
}

std::vector<ScenarioFamily> builtin_toy_families() {
  std::vector<ScenarioFamily> fams;
  const double len = 50.0;
  {
    auto f = straight_base("toy_cross", len);
    f.ped_templates.push_back(ped_on_right(26.0, 16.0));
    f.grid_speeds = {1.0, 1.4, 1.8};
    f.grid_crossing_distances = {3.2, 4.5, 6.0};
    fams.push_back(f);
  }
  {
    auto f = straight_base("toy_occluded", len);
    f.layout.obstacles.push_back(parked_car(24.0, -3.1));
    f.ped_templates.push_back(ped_on_right(26.5, 12.0));
    f.grid_speeds = {1.0, 1.4, 1.8};
    f.grid_crossing_distances = {3.2, 4.5, 6.0};
    fams.push_back(f);
  }
  {
    auto f = straight_base("toy_clear", len);
    f.grid_speeds = {1.4};
    f.grid_crossing_distances = {5.0};
    fams.push_back(f);
  }
  return fams;
}

}  // namespace hylear
