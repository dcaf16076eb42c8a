#pragma once

// The medical care robot: a facility graph of rooms, hallway junctions and a
// charging station, a discrete stepper, an episode runner comparing decision
// policies, and the generator of the per-request decision scenario.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "argdec/core.hpp"
#include "argdec/engine.hpp"
#include "argdec/random.hpp"
#include "argdec/scenario.hpp"

namespace argdec::robot {

// ---------------------------------------------------------------------------
// Facility
// ---------------------------------------------------------------------------

enum class Node { R1, R2, R3, CS, J1, J2, J3, J4 };

inline constexpr std::size_t kNodeCount = 8;
inline constexpr std::array<Node, 3> kRooms{Node::R1, Node::R2, Node::R3};
/// Where the robot may stand between decisions.
inline constexpr std::array<Node, 4> kStations{Node::R1, Node::R2, Node::R3, Node::CS};

inline const char* to_string(Node n) {
  static constexpr const char* names[] = {"R1", "R2", "R3", "CS", "J1", "J2", "J3", "J4"};
  return names[static_cast<std::size_t>(n)];
}

inline std::optional<Node> parse_node(const std::string& s) {
  for (std::size_t i = 0; i < kNodeCount; ++i)
    if (s == to_string(static_cast<Node>(i))) return static_cast<Node>(i);
  return std::nullopt;
}

struct FacilityEdge {
  Node a, b;
  int distance;
};

inline constexpr std::array<FacilityEdge, 7> kFacilityEdges{{
    {Node::R1, Node::J1, 1},
    {Node::R2, Node::J2, 1},
    {Node::R3, Node::J3, 1},
    {Node::CS, Node::J4, 1},
    {Node::J1, Node::J4, 2},
    {Node::J4, Node::J2, 2},
    {Node::J2, Node::J3, 1},
}};

namespace detail {

using DistanceTable = std::array<std::array<int, kNodeCount>, kNodeCount>;

inline DistanceTable all_pairs() {
  constexpr int inf = 1 << 20;
  DistanceTable d;
  for (std::size_t i = 0; i < kNodeCount; ++i)
    for (std::size_t j = 0; j < kNodeCount; ++j) d[i][j] = i == j ? 0 : inf;
  for (const auto& e : kFacilityEdges) {
    const auto a = static_cast<std::size_t>(e.a), b = static_cast<std::size_t>(e.b);
    d[a][b] = d[b][a] = e.distance;
  }
  for (std::size_t k = 0; k < kNodeCount; ++k)
    for (std::size_t i = 0; i < kNodeCount; ++i)
      for (std::size_t j = 0; j < kNodeCount; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

}  // namespace detail

/// Travel distance, which is also the energy the trip costs.
inline int shortest_distance(Node from, Node to) {
  static const auto table = detail::all_pairs();
  return table[static_cast<std::size_t>(from)][static_cast<std::size_t>(to)];
}

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

enum class Priority { Low, High };

inline const char* to_string(Priority p) { return p == Priority::High ? "high" : "low"; }

struct TaskSpec {
  std::string name;
  Priority priority = Priority::Low;
  int energy_cost = 1;
  double reward = 0.0;
};

struct RobotParams {
  int capacity = 10;
  std::vector<TaskSpec> tasks{
      {"fetch-water", Priority::Low, 1, 1.0},
      {"give-meds", Priority::High, 2, 3.0},
      {"reanimation", Priority::High, 3, 10.0},
  };
  /// Categorical distribution of the hidden task behind a request.
  std::vector<double> task_probabilities{0.6, 0.3, 0.1};
  /// Chance per step that a request arrives while none is pending.
  double request_rate = 0.5;
  /// Expected number of further requests a stranded robot cannot serve.
  double future_requests = 2.0;
  double depletion_penalty = 10.0;
  /// Steps a depleted robot spends being carried back and recharged.
  int recovery_steps = 2;
  /// Whether the robot heads for the charger when it has nothing to do.
  bool idle_recharge = true;
  double relevance_base = 10.0;
  Node start_location = Node::CS;
  int start_energy = 10;

  /// Penalty for serving a request without being able to reach the charger:
  /// the expected high-priority reward of the requests that follow.
  double stranding_penalty() const {
    double high = 0.0;
    for (std::size_t i = 0; i < tasks.size(); ++i)
      if (tasks[i].priority == Priority::High) high += task_probabilities[i] * tasks[i].reward;
    return future_requests * high;
  }

  std::optional<std::size_t> task_index(const std::string& name) const {
    for (std::size_t i = 0; i < tasks.size(); ++i)
      if (tasks[i].name == name) return i;
    return std::nullopt;
  }
};

inline Report validate_params(const RobotParams& p) {
  Report r;
  const std::string base = "/simulation";
  if (p.capacity <= 0) r.error(base + "/capacity", "capacity must be positive");
  if (p.tasks.empty()) r.error(base + "/tasks", "no tasks declared");
  if (p.task_probabilities.size() != p.tasks.size())
    r.error(base + "/tasks", "every task needs a probability");
  double sum = 0.0;
  for (std::size_t i = 0; i < p.tasks.size(); ++i) {
    const auto path = base + "/tasks/" + std::to_string(i);
    if (p.tasks[i].energy_cost <= 0) r.error(path + "/energy_cost", "energy cost must be positive");
    for (std::size_t j = 0; j < i; ++j)
      if (p.tasks[j].name == p.tasks[i].name) r.error(path + "/name", "duplicate task '" + p.tasks[i].name + "'");
    if (i < p.task_probabilities.size()) {
      const double q = p.task_probabilities[i];
      if (!(q >= 0.0 && q <= 1.0)) r.error(path + "/probability", "probability outside [0,1]");
      sum += q;
    }
  }
  if (p.task_probabilities.size() == p.tasks.size() && std::abs(sum - 1.0) > kTolerance)
    r.error(base + "/tasks", "task probabilities sum to " + format_weight(sum) + ", not 1");
  if (!(p.request_rate >= 0.0 && p.request_rate <= 1.0))
    r.error(base + "/request_rate", "request rate outside [0,1]");
  if (p.future_requests < 0.0) r.error(base + "/future_requests", "must be non-negative");
  if (p.depletion_penalty < 0.0) r.error(base + "/depletion_penalty", "must be non-negative");
  if (p.recovery_steps < 0) r.error(base + "/recovery_steps", "must be non-negative");
  if (!(p.relevance_base > 1.0)) r.error(base + "/relevance_base", "must exceed 1");
  if (p.start_location != Node::CS && p.start_location != Node::R1 && p.start_location != Node::R2 &&
      p.start_location != Node::R3)
    r.error(base + "/start/location", "the robot starts in a room or at the charging station");
  if (p.start_energy < 0 || p.start_energy > p.capacity)
    r.error(base + "/start/energy", "start energy outside [0, capacity]");
  return r;
}

inline nlohmann::ordered_json params_to_json(const RobotParams& p) {
  using oj = nlohmann::ordered_json;
  oj tasks = oj::array();
  for (std::size_t i = 0; i < p.tasks.size(); ++i)
    tasks.push_back(oj{{"name", p.tasks[i].name},
                       {"priority", to_string(p.tasks[i].priority)},
                       {"energy_cost", p.tasks[i].energy_cost},
                       {"reward", p.tasks[i].reward},
                       {"probability", p.task_probabilities.at(i)}});
  return oj{{"capacity", p.capacity},
            {"tasks", tasks},
            {"request_rate", p.request_rate},
            {"future_requests", p.future_requests},
            {"depletion_penalty", p.depletion_penalty},
            {"recovery_steps", p.recovery_steps},
            {"idle_recharge", p.idle_recharge},
            {"relevance_base", p.relevance_base},
            {"start", oj{{"location", to_string(p.start_location)}, {"energy", p.start_energy}}}};
}

/// Reads the `simulation` block of a scenario; absent fields keep their defaults.
inline RobotParams params_from_json(const nlohmann::json& j) {
  RobotParams p;
  auto bad = [](const std::string& path, const std::string& what) {
    throw ValidationError("/simulation" + path + ": " + what,
                          {Issue{Severity::Error, "/simulation" + path, what}});
  };
  if (!j.is_object()) bad("", "expected an object");
  try {
    if (j.contains("capacity")) p.capacity = j.at("capacity").get<int>();
    if (j.contains("tasks")) {
      p.tasks.clear();
      p.task_probabilities.clear();
      const auto& ts = j.at("tasks");
      for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto& t = ts[i];
        TaskSpec spec;
        spec.name = t.at("name").get<std::string>();
        const auto pr = t.at("priority").get<std::string>();
        if (pr != "low" && pr != "high") bad("/tasks/" + std::to_string(i) + "/priority", "expected low or high");
        spec.priority = pr == "high" ? Priority::High : Priority::Low;
        spec.energy_cost = t.at("energy_cost").get<int>();
        spec.reward = t.at("reward").get<double>();
        p.tasks.push_back(spec);
        p.task_probabilities.push_back(t.at("probability").get<double>());
      }
    }
    if (j.contains("request_rate")) p.request_rate = j.at("request_rate").get<double>();
    if (j.contains("future_requests")) p.future_requests = j.at("future_requests").get<double>();
    if (j.contains("depletion_penalty")) p.depletion_penalty = j.at("depletion_penalty").get<double>();
    if (j.contains("recovery_steps")) p.recovery_steps = j.at("recovery_steps").get<int>();
    if (j.contains("idle_recharge")) p.idle_recharge = j.at("idle_recharge").get<bool>();
    if (j.contains("relevance_base")) p.relevance_base = j.at("relevance_base").get<double>();
    if (j.contains("start")) {
      const auto& s = j.at("start");
      if (s.contains("location")) {
        auto n = parse_node(s.at("location").get<std::string>());
        if (!n) bad("/start/location", "unknown facility node");
        p.start_location = *n;
      }
      if (s.contains("energy")) p.start_energy = s.at("energy").get<int>();
    }
  } catch (const nlohmann::json::exception& e) {
    bad("", std::string("malformed simulation parameters: ") + e.what());
  }
  const auto report = validate_params(p);
  if (report.has_errors()) throw ValidationError("invalid simulation parameters", report.errors());
  return p;
}

// ---------------------------------------------------------------------------
// World stepper
// ---------------------------------------------------------------------------

enum class Action { AnsReq, Charge };

inline const char* to_string(Action a) { return a == Action::AnsReq ? "AnsReq" : "Charge"; }

struct Request {
  Node room = Node::R1;
  std::size_t task = 0;  // index into RobotParams::tasks; hidden from the decision maker

  friend bool operator==(const Request&, const Request&) = default;
};

enum class Status { Ok, Depleted };

struct RobotWorld {
  Node location = Node::CS;
  int energy = 0;
  int capacity = 0;
  std::optional<Request> pending_request;
  std::int64_t time = 0;
  Status status = Status::Ok;

  friend bool operator==(const RobotWorld&, const RobotWorld&) = default;
};

struct StepResult {
  RobotWorld world;
  double reward = 0.0;
  bool served = false;
  std::string warning;
};

/// Advances one time unit. Trips and tasks cost their energy; running short
/// on the way leaves the robot depleted, which is terminal for the stepper.
inline StepResult step(const RobotWorld& world, Action action, const RobotParams& params) {
  StepResult r{world, 0.0, false, {}};
  auto& w = r.world;
  w.time += 1;
  if (w.status == Status::Depleted) {
    r.warning = "robot is depleted";
    return r;
  }
  if (action == Action::AnsReq) {
    if (!w.pending_request) {
      r.warning = "AnsReq with no pending request";
      return r;
    }
    const auto req = *w.pending_request;
    const auto& task = params.tasks.at(req.task);
    const int cost = shortest_distance(w.location, req.room) + task.energy_cost;
    w.pending_request.reset();
    if (cost > w.energy) {
      w.energy = 0;
      w.status = Status::Depleted;
      return r;
    }
    w.energy -= cost;
    w.location = req.room;
    r.reward = task.reward;
    r.served = true;
    return r;
  }
  const int cost = shortest_distance(w.location, Node::CS);
  if (cost > w.energy) {
    w.energy = 0;
    w.status = Status::Depleted;
    return r;
  }
  w.location = Node::CS;
  w.energy = w.capacity;
  return r;
}

// ---------------------------------------------------------------------------
// Decision scenario
// ---------------------------------------------------------------------------

inline constexpr const char* kNone = "none";
inline constexpr const char* kYes = "yes";
inline constexpr const char* kNo = "no";

namespace detail {

inline std::vector<Value> symbols(std::initializer_list<const char*> names) {
  std::vector<Value> out;
  for (auto n : names) out.emplace_back(n);
  return out;
}

inline std::vector<double> one_hot(std::size_t size, std::size_t at) {
  std::vector<double> p(size, 0.0);
  p[at] = 1.0;
  return p;
}

inline std::vector<double> uniform(std::size_t size) {
  return std::vector<double>(size, 1.0 / static_cast<double>(size));
}

inline CredenceRow yes_no_row(std::vector<Value> given, bool yes) {
  return {std::move(given), yes ? std::vector<double>{0.0, 1.0} : std::vector<double>{1.0, 0.0}};
}

}  // namespace detail

/// Energy needed to serve `task` in `room` starting from `from`.
inline int serve_cost(Node from, Node room, const TaskSpec& task) {
  return shortest_distance(from, room) + task.energy_cost;
}

/// ... and then still reach the charging station.
inline int serve_and_return_cost(Node from, Node room, const TaskSpec& task) {
  return serve_cost(from, room, task) + shortest_distance(room, Node::CS);
}

/// The decision problem the robot faces whenever a request is pending.
/// Known: location, energy, request_room, served, status. Unknown: the task
/// and what follows from it (priority, serve_ok, return_ok) plus charge_ok.
inline Scenario decision_scenario(const RobotParams& params, std::string name = "care-robot") {
  using detail::symbols;
  Scenario s;
  s.name = std::move(name);

  std::vector<Value> energy;
  for (int e = 0; e <= params.capacity; ++e) energy.emplace_back(e);
  std::vector<Value> tasks, served{kNone};
  for (const auto& t : params.tasks) {
    tasks.emplace_back(t.name);
    served.emplace_back(t.name);
  }
  s.variables = VariableSet({
      {"location", symbols({"R1", "R2", "R3", "CS"})},
      {"energy", energy},
      {"request_room", symbols({"R1", "R2", "R3"})},
      {"task", tasks},
      {"priority", symbols({"low", "high"})},
      {"serve_ok", symbols({kNo, kYes})},
      {"return_ok", symbols({kNo, kYes})},
      {"charge_ok", symbols({kNo, kYes})},
      {"served", served},
      {"status", symbols({"ok", "stranded", "depleted"})},
  });

  std::vector<CredenceTable> tables;
  tables.push_back({"location", {}, {{{}, detail::uniform(kStations.size())}}});
  tables.push_back({"energy", {}, {{{}, detail::uniform(energy.size())}}});
  tables.push_back({"request_room", {}, {{{}, detail::uniform(kRooms.size())}}});
  tables.push_back({"task", {}, {{{}, params.task_probabilities}}});
  {
    CredenceTable t{"priority", {"task"}, {}};
    for (const auto& task : params.tasks)
      t.rows.push_back({{Value(task.name)}, detail::one_hot(2, task.priority == Priority::High)});
    tables.push_back(std::move(t));
  }
  CredenceTable serve{"serve_ok", {"location", "energy", "request_room", "task"}, {}};
  CredenceTable ret{"return_ok", {"location", "energy", "request_room", "task"}, {}};
  CredenceTable charge{"charge_ok", {"location", "energy"}, {}};
  for (Node loc : kStations) {
    for (int e = 0; e <= params.capacity; ++e) {
      charge.rows.push_back(
          detail::yes_no_row({Value(to_string(loc)), Value(e)}, shortest_distance(loc, Node::CS) <= e));
      for (Node room : kRooms)
        for (const auto& task : params.tasks) {
          std::vector<Value> given{Value(to_string(loc)), Value(e), Value(to_string(room)), Value(task.name)};
          serve.rows.push_back(detail::yes_no_row(given, serve_cost(loc, room, task) <= e));
          ret.rows.push_back(detail::yes_no_row(given, serve_and_return_cost(loc, room, task) <= e));
        }
    }
  }
  tables.push_back(std::move(serve));
  tables.push_back(std::move(ret));
  tables.push_back(std::move(charge));
  tables.push_back({"served", {}, {{{}, detail::one_hot(served.size(), 0)}}});
  tables.push_back({"status", {}, {{{}, detail::one_hot(3, 0)}}});
  s.credences = CredenceModel(std::move(tables));

  s.options = OptionSet{"AnsReq", "Charge"};

  const auto yes = [](const char* var) { return Condition::eq(var, kYes); };
  const auto no = [](const char* var) { return Condition::eq(var, kNo); };
  s.outcome.missing = MissingTransition::Error;
  s.outcome.rules.push_back({"AnsReq", no("serve_ok"), {{1.0, {{"status", Value("depleted")}}, {}}}});
  for (const auto& task : params.tasks) {
    s.outcome.rules.push_back({"AnsReq", Condition::all_of({Condition::eq("task", task.name), yes("return_ok")}),
                               {{1.0, {{"served", Value(task.name)}}, {}}}});
    s.outcome.rules.push_back(
        {"AnsReq", Condition::eq("task", task.name),
         {{1.0, {{"served", Value(task.name)}, {"status", Value("stranded")}}, {}}}});
  }
  s.outcome.rules.push_back({"Charge", yes("charge_ok"), {{1.0, {}, {}}}});
  s.outcome.rules.push_back({"Charge", no("charge_ok"), {{1.0, {{"status", Value("depleted")}}, {}}}});

  const double stranded = params.stranding_penalty();
  s.utility.rules.push_back({Condition::eq("status", "depleted"), -params.depletion_penalty});
  for (const auto& task : params.tasks) {
    s.utility.rules.push_back(
        {Condition::all_of({Condition::eq("served", task.name), Condition::eq("status", "stranded")}),
         task.reward - stranded});
    s.utility.rules.push_back({Condition::eq("served", task.name), task.reward});
  }
  s.utility.rules.push_back({Condition::always(), 0.0});

  s.principles.classes = {
      {{"life-first",
        Condition::all_of({Condition::eq("priority", "high"), yes("serve_ok")}),
        {{{"AnsReq"}, {"Charge"}}}}},
      {{"energy-reserve",
        Condition::all_of({Condition::eq("priority", "low"), no("return_ok")}),
        {{{"Charge"}, {"AnsReq"}}}}},
  };
  s.engine.relevance.base = params.relevance_base;
  s.simulation = nlohmann::json::parse(params_to_json(params).dump());
  return s;
}

/// What the robot knows when it decides: never the task or its priority.
inline Knowledge decision_knowledge(Node location, int energy, Node request_room) {
  Knowledge k;
  k.known.emplace("location", Value(to_string(location)));
  k.known.emplace("energy", Value(energy));
  k.known.emplace("request_room", Value(to_string(request_room)));
  k.known.emplace("served", Value(kNone));
  k.known.emplace("status", Value("ok"));
  return k;
}

/// The full world behind a decision once the hidden task is revealed.
inline WorldState true_world(const Scenario& s, const RobotParams& params, Node location, int energy,
                             Node request_room, std::size_t task) {
  const auto& spec = params.tasks.at(task);
  std::map<std::string, Value> a{
      {"location", Value(to_string(location))},
      {"energy", Value(energy)},
      {"request_room", Value(to_string(request_room))},
      {"task", Value(spec.name)},
      {"priority", Value(to_string(spec.priority))},
      {"serve_ok", Value(serve_cost(location, request_room, spec) <= energy ? kYes : kNo)},
      {"return_ok", Value(serve_and_return_cost(location, request_room, spec) <= energy ? kYes : kNo)},
      {"charge_ok", Value(shortest_distance(location, Node::CS) <= energy ? kYes : kNo)},
      {"served", Value(kNone)},
      {"status", Value("ok")},
  };
  return make_world(s.variables, a);
}

/// EU of both options computed straight from the parameters, without the
/// world enumeration the engine uses.
struct DirectEu {
  double ans_req = 0.0;
  double charge = 0.0;
};

inline DirectEu direct_expected_utility(const RobotParams& params, Node location, int energy,
                                        Node request_room) {
  DirectEu eu;
  const double stranded = params.stranding_penalty();
  for (std::size_t i = 0; i < params.tasks.size(); ++i) {
    const auto& t = params.tasks[i];
    double u;
    if (serve_cost(location, request_room, t) > energy)
      u = -params.depletion_penalty;
    else if (serve_and_return_cost(location, request_room, t) > energy)
      u = t.reward - stranded;
    else
      u = t.reward;
    eu.ans_req += params.task_probabilities[i] * u;
  }
  eu.charge = shortest_distance(location, Node::CS) <= energy ? 0.0 : -params.depletion_penalty;
  return eu;
}

// ---------------------------------------------------------------------------
// Dilemma fixture
// ---------------------------------------------------------------------------

struct DilemmaFixture {
  Scenario scenario;
  Knowledge knowledge;
  WorldState world;  // the request is in fact a reanimation
  DirectEu eu;
  RobotWorld robot;  // the same situation for the stepper
};

/// Robot at R1 with a reanimation request in R1 and 4 of 10 energy units:
/// enough for any task, not enough to reach the charger afterwards.
inline DilemmaFixture build_dilemma_fixture(const RobotParams& params = RobotParams{}) {
  const Node at = Node::R1, room = Node::R1;
  const int energy = 4;
  if (energy > params.capacity) throw ModelError("dilemma fixture needs capacity >= 4");
  const auto reanimation = params.task_index("reanimation");
  if (!reanimation) throw ModelError("dilemma fixture needs a 'reanimation' task");

  DilemmaFixture f;
  f.scenario = decision_scenario(params, "care-robot-dilemma");
  f.scenario.simulation["start"] = {{"location", "R1"}, {"energy", energy}};
  f.knowledge = decision_knowledge(at, energy, room);
  f.world = true_world(f.scenario, params, at, energy, room, *reanimation);
  f.eu = direct_expected_utility(params, at, energy, room);
  f.robot = {at, energy, params.capacity, Request{room, *reanimation}, 0, Status::Ok};

  const auto& spec = params.tasks[*reanimation];
  if (spec.priority != Priority::High || serve_cost(at, room, spec) > energy ||
      serve_and_return_cost(at, room, spec) <= energy)
    throw ModelError("dilemma fixture: reanimation must be affordable but strand the robot");
  if (!(f.eu.charge > f.eu.ans_req))
    throw ModelError("dilemma fixture: parameters do not make charging instrumentally better (EU(Charge) = " +
                     format_display(f.eu.charge) + ", EU(AnsReq) = " + format_display(f.eu.ans_req) + ")");
  return f;
}

// ---------------------------------------------------------------------------
// Episodes
// ---------------------------------------------------------------------------

enum class Policy { Instrumental, Sequential, Interlocked };

inline const char* to_string(Policy p) {
  switch (p) {
    case Policy::Instrumental: return "instrumental";
    case Policy::Sequential: return "sequential";
    case Policy::Interlocked: return "interlocked";
  }
  return "?";
}

inline std::optional<Policy> parse_policy(const std::string& s) {
  for (auto p : {Policy::Instrumental, Policy::Sequential, Policy::Interlocked})
    if (s == to_string(p)) return p;
  return std::nullopt;
}

struct EpisodeMetrics {
  std::int64_t requests = 0;
  std::int64_t served_low = 0;
  std::int64_t served_high = 0;
  std::int64_t missed = 0;
  std::int64_t reanimations = 0;
  std::int64_t reanimations_attempted = 0;
  std::int64_t reanimations_missed = 0;
  std::int64_t depletions = 0;
  double total_reward = 0.0;

  EpisodeMetrics& operator+=(const EpisodeMetrics& o) {
    requests += o.requests;
    served_low += o.served_low;
    served_high += o.served_high;
    missed += o.missed;
    reanimations += o.reanimations;
    reanimations_attempted += o.reanimations_attempted;
    reanimations_missed += o.reanimations_missed;
    depletions += o.depletions;
    total_reward += o.total_reward;
    return *this;
  }
};

struct TraceRecord {
  std::int64_t time = 0;
  std::string location;
  int energy = 0;
  std::string action;   // AnsReq, Charge, wait or recover
  std::string request;  // room of the request acted on, or "none"
  double reward = 0.0;
  std::string status;
};

struct Episode {
  std::vector<TraceRecord> trace;
  EpisodeMetrics metrics;
};

inline std::string trace_line(const TraceRecord& r) {
  nlohmann::ordered_json j{{"time", r.time},     {"location", r.location}, {"energy", r.energy},
                           {"action", r.action}, {"request", r.request},   {"reward", r.reward},
                           {"status", r.status}};
  return j.dump();
}

inline std::string trace_lines(const Episode& e) {
  std::string out;
  for (const auto& r : e.trace) out += trace_line(r) + "\n";
  return out;
}

/// Runs `steps` time units. Requests and hidden tasks come from one random
/// stream and tie-breaking picks from another, so every policy faces the same
/// requests for a given seed.
inline Episode run_episode(const Scenario& s, const RobotParams& params, Policy policy, int steps,
                           std::uint64_t seed, RobotWorld start) {
  if (steps <= 0) throw ContractViolation("an episode needs at least one step");
  Episode ep;
  SplitMix64 env(seed);
  SplitMix64 picks(seed ^ 0xa5a5a5a5a5a5a5a5ULL);

  RobotWorld w = std::move(start);
  int recovering = w.status == Status::Depleted ? params.recovery_steps : 0;
  if (w.pending_request) {
    ++ep.metrics.requests;
    if (params.tasks.at(w.pending_request->task).name == "reanimation") ++ep.metrics.reanimations;
  }

  for (int t = 0; t < steps; ++t) {
    // draw the environment unconditionally so the stream does not depend on actions
    const bool arrives = env.unit() < params.request_rate;
    const Node room = kRooms[env.below(kRooms.size())];
    const double u = env.unit();
    std::size_t task = params.tasks.size() - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < params.tasks.size(); ++i) {
      acc += params.task_probabilities[i];
      if (u < acc) {
        task = i;
        break;
      }
    }
    const std::uint64_t pick_seed = picks.next();

    if (arrives && !w.pending_request) {
      w.pending_request = Request{room, task};
      ++ep.metrics.requests;
      if (params.tasks[task].name == "reanimation") ++ep.metrics.reanimations;
    }

    TraceRecord rec;
    const auto drop_request = [&] {
      if (!w.pending_request) return;
      ++ep.metrics.missed;
      if (params.tasks[w.pending_request->task].name == "reanimation") ++ep.metrics.reanimations_missed;
      w.pending_request.reset();
    };

    if (w.status == Status::Depleted) {
      rec.action = "recover";
      rec.request = w.pending_request ? to_string(w.pending_request->room) : kNone;
      drop_request();
      w.time += 1;
      if (--recovering <= 0) {
        w.status = Status::Ok;
        w.location = Node::CS;
        w.energy = w.capacity;
      }
    } else if (!w.pending_request) {
      rec.request = kNone;
      if (params.idle_recharge && w.energy < w.capacity) {
        rec.action = "Charge";
        w = step(w, Action::Charge, params).world;
      } else {
        rec.action = "wait";
        w.time += 1;
      }
    } else {
      const auto req = *w.pending_request;
      const auto k = decision_knowledge(w.location, w.energy, req.room);
      std::string choice;
      switch (policy) {
        case Policy::Instrumental: choice = instrumental_decide(k, s, pick_seed); break;
        case Policy::Sequential:
          choice = sequential_decide(true_world(s, params, w.location, w.energy, req.room, req.task), k, s,
                                     pick_seed);
          break;
        case Policy::Interlocked: choice = decide(k, s, pick_seed).option; break;
      }
      const Action action = choice == "AnsReq" ? Action::AnsReq : Action::Charge;
      const bool reanimation = params.tasks[req.task].name == "reanimation";
      rec.action = to_string(action);
      rec.request = to_string(req.room);
      if (action == Action::Charge) drop_request();
      if (action == Action::AnsReq && reanimation) ++ep.metrics.reanimations_attempted;
      const auto result = step(w, action, params);
      w = result.world;
      rec.reward = result.reward;
      ep.metrics.total_reward += result.reward;
      if (result.served) {
        if (params.tasks[req.task].priority == Priority::High)
          ++ep.metrics.served_high;
        else
          ++ep.metrics.served_low;
      } else if (action == Action::AnsReq) {
        ++ep.metrics.missed;
        if (reanimation) ++ep.metrics.reanimations_missed;
      }
      if (w.status == Status::Depleted) {
        ++ep.metrics.depletions;
        recovering = params.recovery_steps;
        if (recovering == 0) {
          w.status = Status::Ok;
          w.location = Node::CS;
          w.energy = w.capacity;
        }
      }
    }
    rec.time = w.time;
    rec.location = to_string(w.location);
    rec.energy = w.energy;
    rec.status = w.status == Status::Depleted ? "depleted" : "ok";
    ep.trace.push_back(std::move(rec));
  }
  return ep;
}

inline RobotWorld start_world(const RobotParams& params) {
  return {params.start_location, params.start_energy, params.capacity, std::nullopt, 0, Status::Ok};
}

inline Episode run_episode(const Scenario& s, const RobotParams& params, Policy policy, int steps,
                           std::uint64_t seed) {
  return run_episode(s, params, policy, steps, seed, start_world(params));
}

inline Episode run_episode(const Scenario& s, Policy policy, int steps, std::uint64_t seed) {
  return run_episode(s, params_from_json(s.simulation), policy, steps, seed);
}

/// Aggregate metrics over `episodes` episodes seeded from `seed`.
inline EpisodeMetrics run_episodes(const Scenario& s, const RobotParams& params, Policy policy, int episodes,
                                   int steps, std::uint64_t seed) {
  EpisodeMetrics total;
  SplitMix64 seeds(seed);
  for (int i = 0; i < episodes; ++i) total += run_episode(s, params, policy, steps, seeds.next()).metrics;
  return total;
}

}  // namespace argdec::robot
