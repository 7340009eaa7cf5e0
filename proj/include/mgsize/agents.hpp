#pragma once

#include "mgsize/dispatch.hpp"
#include "mgsize/text.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Five-agent, three-level coordination of the dispatch kernel.
//
//   design level        DA  (design agent)
//   coordination level  CA  (control agent)
//   field level         GA  (generation), LA (loads), SA (refilling station)
//
// Every message passes through CA; field agents never address each other.
// The control agent drives one synchronous round per hour, so a run is fully
// deterministic and reproduces `simulate` bit for bit.
namespace mgsize::agents
{

enum class AgentId
{
    Design,
    Control,
    Generation,
    Load,
    Station,
};

enum class MessageKind
{
    SizeAssignment,
    ForecastRequest,
    GenerationForecast,
    LoadForecast,
    HydrogenDemand,
    StoreSurplusRequest,
    SupplyDeficitRequest,
    ThermalBackupRequest,
    StationDrawRequest,
    ActuationReport,
    DeferRequest,
    UpdatedDemand,
    HydrogenAllocation,
    UnsuppliedReport,
    OperationReport,
};

inline constexpr std::array<std::string_view, 5> kAgentNames = {"DA", "CA", "GA", "LA", "SA"};

inline constexpr std::array<std::string_view, 15> kKindNames = {
    "SizeAssignment",       "ForecastRequest",      "GenerationForecast", "LoadForecast",
    "HydrogenDemand",       "StoreSurplusRequest",  "SupplyDeficitRequest", "ThermalBackupRequest",
    "StationDrawRequest",   "ActuationReport",      "DeferRequest",       "UpdatedDemand",
    "HydrogenAllocation",   "UnsuppliedReport",     "OperationReport",
};

inline std::string_view name(AgentId a) { return kAgentNames[static_cast<std::size_t>(a)]; }
inline std::string_view name(MessageKind k) { return kKindNames[static_cast<std::size_t>(k)]; }

enum class Level
{
    Field,
    Coordination,
    Design,
};

inline Level level(AgentId a)
{
    switch (a) {
    case AgentId::Design: return Level::Design;
    case AgentId::Control: return Level::Coordination;
    default: return Level::Field;
    }
}

struct Field
{
    std::string name;
    double value = 0.0;

    friend bool operator==(const Field&, const Field&) = default;
};

struct Message
{
    MessageKind kind = MessageKind::ForecastRequest;
    AgentId sender = AgentId::Control;
    AgentId recipient = AgentId::Control;
    std::size_t hour = 0;
    std::vector<Field> payload;

    double at(std::string_view key) const;

    friend bool operator==(const Message&, const Message&) = default;
};

class ProtocolViolation : public Error
{
  public:
    ProtocolViolation(const Message& m, const std::string& why)
        : Error("protocol violation at hour " + std::to_string(m.hour) + " (" + std::string(name(m.kind)) + " " +
                std::string(name(m.sender)) + "->" + std::string(name(m.recipient)) + "): " + why),
          kind_(m.kind), hour_(m.hour)
    {
    }

    MessageKind kind() const { return kind_; }
    std::size_t hour() const { return hour_; }

  private:
    MessageKind kind_;
    std::size_t hour_;
};

inline double Message::at(std::string_view key) const
{
    for (const auto& f : payload) {
        if (f.name == key) {
            return f.value;
        }
    }
    throw ProtocolViolation(*this, "payload has no field '" + std::string(key) + "'");
}

/// The one reply kind a request may receive from a given recipient.
/// Notifications (SizeAssignment to field agents) take no reply.
inline std::optional<MessageKind> expected_reply(MessageKind request, AgentId recipient)
{
    switch (request) {
    case MessageKind::SizeAssignment:
        if (recipient == AgentId::Control) {
            return MessageKind::OperationReport;
        }
        return std::nullopt;
    case MessageKind::ForecastRequest:
        switch (recipient) {
        case AgentId::Generation: return MessageKind::GenerationForecast;
        case AgentId::Load: return MessageKind::LoadForecast;
        case AgentId::Station: return MessageKind::HydrogenDemand;
        default: return std::nullopt;
        }
    case MessageKind::StoreSurplusRequest:
    case MessageKind::SupplyDeficitRequest:
    case MessageKind::ThermalBackupRequest:
    case MessageKind::StationDrawRequest: return MessageKind::ActuationReport;
    case MessageKind::DeferRequest: return MessageKind::UpdatedDemand;
    case MessageKind::HydrogenAllocation: return MessageKind::UnsuppliedReport;
    default: return std::nullopt;
    }
}

/// Only the control agent talks to anyone; everybody else talks to it.
inline bool route_allowed(AgentId from, AgentId to)
{
    if (from == to) {
        return false;
    }
    return from == AgentId::Control || to == AgentId::Control;
}

class Agent
{
  public:
    virtual ~Agent() = default;
    virtual AgentId id() const = 0;
    virtual std::optional<Message> handle(const Message& m) = 0;
};

/// Carries a request to its recipient and returns the reply, if any.
class Transport
{
  public:
    virtual ~Transport() = default;
    virtual std::optional<Message> send(const Message& m) = 0;
};

inline Message make(MessageKind kind, AgentId from, AgentId to, std::size_t hour, std::vector<Field> payload = {})
{
    return {kind, from, to, hour, std::move(payload)};
}

inline Message reply_to(const Message& request, MessageKind kind, std::vector<Field> payload)
{
    return {kind, request.recipient, request.sender, request.hour, std::move(payload)};
}

inline std::vector<Field> size_fields(const SizingVector& s, double initial_fraction)
{
    std::vector<Field> out;
    const auto v = s.to_vector();
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back({std::string(SizingVector::names[i]), v[i]});
    }
    out.push_back({"initial_tank_fraction", initial_fraction});
    return out;
}

inline SizingVector sizes_from(const Message& m)
{
    std::vector<double> v;
    for (auto n : SizingVector::names) {
        v.push_back(m.at(n));
    }
    return SizingVector::from_vector(v);
}

/// In-process router. Checks the hierarchy and reply legality and keeps the
/// ordered message log.
class MessageBus : public Transport
{
  public:
    explicit MessageBus(bool record = true) : record_(record) {}

    void attach(Agent& a) { agents_[static_cast<std::size_t>(a.id())] = &a; }

    std::optional<Message> send(const Message& m) override
    {
        if (!route_allowed(m.sender, m.recipient)) {
            throw ProtocolViolation(m, "route not allowed by the agent hierarchy");
        }
        if (!trace_.empty() && m.hour < last_hour_) {
            throw ProtocolViolation(m, "hour went backwards");
        }
        Agent* target = agents_[static_cast<std::size_t>(m.recipient)];
        if (target == nullptr) {
            throw ProtocolViolation(m, "recipient not attached");
        }
        log(m);
        auto reply = target->handle(m);
        const auto expected = expected_reply(m.kind, m.recipient);
        if (reply.has_value() != expected.has_value() || (reply && reply->kind != *expected)) {
            throw ProtocolViolation(m, "illegal reply");
        }
        if (reply) {
            log(*reply);
        }
        return reply;
    }

    const std::vector<Message>& trace() const { return trace_; }
    std::vector<Message> take_trace() { return std::move(trace_); }

  private:
    void log(const Message& m)
    {
        last_hour_ = m.hour;
        if (record_) {
            trace_.push_back(m);
        } else if (trace_.empty()) {
            trace_.push_back(m); // keeps the hour-monotonicity check armed
        }
    }

    bool record_;
    std::array<Agent*, 5> agents_{};
    std::vector<Message> trace_;
    std::size_t last_hour_ = 0;
};

/// Owns the PV array, wind farm, electrolyzer, tank, fuel cell, heater and
/// boiler. Acts on control requests; never decides the strategy itself.
class GenerationAgent : public Agent
{
  public:
    GenerationAgent(const DeviceCatalog& cat, const ScenarioPolicy& policy, const HourlySeries& irradiance,
                    const HourlySeries& wind)
        : cat_(cat), policy_(policy), irradiance_(irradiance), wind_(wind)
    {
    }

    AgentId id() const override { return AgentId::Generation; }

    std::optional<Message> handle(const Message& m) override
    {
        switch (m.kind) {
        case MessageKind::SizeAssignment:
            sizes_ = sizes_from(m);
            tank_ = components::TankState::at_fraction(cat_, sizes_.m_tank, m.at("initial_tank_fraction"));
            return std::nullopt;
        case MessageKind::ForecastRequest: {
            charge_ = 0.0;
            fc_draw_ = 0.0;
            const auto g = stage::generation(cat_, sizes_, irradiance_[m.hour], wind_[m.hour]);
            return reply_to(m, MessageKind::GenerationForecast, {{"p_pv", g.p_pv}, {"p_wg", g.p_wg}});
        }
        case MessageKind::SupplyDeficitRequest: {
            const auto a = stage::supply_deficit(cat_, sizes_, tank_, m.at("ac_needed"));
            fc_draw_ = a.p_tank_fc;
            return reply_to(m, MessageKind::ActuationReport,
                            {{"p_tank_fc", a.p_tank_fc},
                             {"p_fc_conv", a.p_fc_conv},
                             {"served_ac", a.served_ac},
                             {"q_fc", a.q_fc}});
        }
        case MessageKind::StoreSurplusRequest: {
            const auto a = stage::store_surplus(cat_, sizes_, tank_, m.at("surplus_dc"), m.at("heat_gap"));
            charge_ = a.p_el_tank;
            return reply_to(m, MessageKind::ActuationReport,
                            {{"p_ren_el", a.p_ren_el},
                             {"p_el_tank", a.p_el_tank},
                             {"p_ren_h", a.p_ren_h},
                             {"q_h_tl", a.q_h_tl},
                             {"curtailed", a.curtailed}});
        }
        case MessageKind::ThermalBackupRequest: {
            const auto a = stage::thermal_backup(cat_, sizes_, m.at("heat_gap"));
            return reply_to(m, MessageKind::ActuationReport,
                            {{"q_b_tl", a.q_b_tl}, {"fuel", a.fuel}, {"unserved", a.unserved}});
        }
        case MessageKind::StationDrawRequest: {
            const auto mid = components::tank_step(cat_, tank_, charge_, fc_draw_, 0.0);
            const auto a = stage::station_draw(cat_, policy_, mid, m.at("request"));
            tank_ = components::tank_step(cat_, tank_, charge_, fc_draw_, a.p_tank_sta);
            return reply_to(m, MessageKind::ActuationReport,
                            {{"p_tank_sta", a.p_tank_sta},
                             {"delivered", a.delivered},
                             {"tank_energy_end", tank_.energy}});
        }
        default: throw ProtocolViolation(m, "generation agent cannot handle this kind");
        }
    }

    const components::TankState& tank() const { return tank_; }

  private:
    const DeviceCatalog& cat_;
    const ScenarioPolicy& policy_;
    const HourlySeries& irradiance_;
    const HourlySeries& wind_;
    SizingVector sizes_;
    components::TankState tank_;
    double charge_ = 0.0;
    double fc_draw_ = 0.0;
};

/// Aggregates the residential electric and thermal demand (simple reflex
/// agent; the forecast is the profile value).
class LoadAgent : public Agent
{
  public:
    LoadAgent(const ScenarioPolicy& policy, const HourlySeries& electric, const HourlySeries& thermal)
        : policy_(policy), electric_(electric), thermal_(thermal)
    {
    }

    AgentId id() const override { return AgentId::Load; }

    std::optional<Message> handle(const Message& m) override
    {
        if (m.kind != MessageKind::ForecastRequest) {
            throw ProtocolViolation(m, "load agent only answers forecasts");
        }
        const double p = electric_[m.hour];
        const auto split = stage::split_load(policy_, p);
        return reply_to(m, MessageKind::LoadForecast,
                        {{"p_load", p},
                         {"q_load", thermal_[m.hour]},
                         {"interruptible", split.interruptible},
                         {"uninterruptible", split.uninterruptible}});
    }

  private:
    const ScenarioPolicy& policy_;
    const HourlySeries& electric_;
    const HourlySeries& thermal_;
};

/// Keeps the refill queue: reports demand, computes what can be deferred on
/// request, and reports what the allocated hydrogen could not cover.
class StationAgent : public Agent
{
  public:
    StationAgent(const ScenarioPolicy& policy, const HourlySeries& demand) : policy_(policy), demand_(demand) {}

    AgentId id() const override { return AgentId::Station; }

    std::optional<Message> handle(const Message& m) override
    {
        switch (m.kind) {
        case MessageKind::SizeAssignment:
            queue_ = RefillQueue{};
            return std::nullopt;
        case MessageKind::ForecastRequest: {
            const double arrived = demand_[m.hour];
            queue_.arrive(arrived);
            return reply_to(m, MessageKind::HydrogenDemand, {{"arrived", arrived}, {"pending", queue_.pending()}});
        }
        case MessageKind::DeferRequest: {
            const int max_age = static_cast<int>(m.at("max_age"));
            return reply_to(m, MessageKind::UpdatedDemand, {{"request", queue_.overdue(max_age)}});
        }
        case MessageKind::HydrogenAllocation: {
            queue_.deliver(m.at("delivered"));
            const auto s = queue_.close_hour(policy_.managed_mode(), policy_.max_defer_hours);
            return reply_to(m, MessageKind::UnsuppliedReport, {{"unserved", s.unserved}, {"deferred", s.deferred}});
        }
        default: throw ProtocolViolation(m, "station agent cannot handle this kind");
        }
    }

    const RefillQueue& queue() const { return queue_; }

  private:
    const ScenarioPolicy& policy_;
    const HourlySeries& demand_;
    RefillQueue queue_;
};

inline constexpr std::array<std::string_view, 18> kReportFields = {
    "hours",          "electric_load",       "served_load",       "shed_interruptible", "shed_uninterruptible",
    "thermal_load",   "unserved_thermal",    "hydrogen_demand",   "hydrogen_delivered", "unserved_hydrogen",
    "pending_hydrogen_end", "boiler_heat",   "boiler_fuel",       "curtailed",          "elf_el_sum",
    "elf_th_sum",     "tank_initial",        "tank_end",
};

inline std::vector<Field> report_fields(const SimulationTotals& t)
{
    const double v[] = {static_cast<double>(t.hours), t.electric_load, t.served_load, t.shed_interruptible,
                        t.shed_uninterruptible, t.thermal_load, t.unserved_thermal, t.hydrogen_demand,
                        t.hydrogen_delivered, t.unserved_hydrogen, t.pending_hydrogen_end, t.boiler_heat,
                        t.boiler_fuel, t.curtailed, t.elf_el_sum, t.elf_th_sum, t.tank_initial, t.tank_end};
    std::vector<Field> out;
    for (std::size_t i = 0; i < kReportFields.size(); ++i) {
        out.push_back({std::string(kReportFields[i]), v[i]});
    }
    out.push_back({"tank_capacity", t.tank_capacity});
    return out;
}

/// Runs the energy-management strategy: gathers forecasts from the field
/// agents each hour, decides the cascade and issues actuation requests.
class ControlAgent : public Agent
{
  public:
    ControlAgent(const DeviceCatalog& cat, const ScenarioPolicy& policy, std::size_t hours, Transport& transport,
                 bool keep_ledger = true)
        : cat_(cat), policy_(policy), hours_(hours), net_(transport), keep_ledger_(keep_ledger)
    {
    }

    AgentId id() const override { return AgentId::Control; }

    std::optional<Message> handle(const Message& m) override
    {
        if (m.kind != MessageKind::SizeAssignment || m.sender != AgentId::Design) {
            throw ProtocolViolation(m, "control agent only accepts size assignments from the design agent");
        }
        sizes_ = sizes_from(m);
        const double initial = m.at("initial_tank_fraction");
        check_sizes(sizes_);
        check_initial_fraction(cat_, initial);

        result_ = SimulationResult{};
        const auto tank = components::TankState::at_fraction(cat_, sizes_.m_tank, initial);
        result_.totals.tank_initial = tank.energy;
        result_.totals.tank_end = tank.energy;
        result_.totals.tank_capacity = tank.capacity_energy(cat_.hydrogen_hhv);

        for (AgentId field : {AgentId::Generation, AgentId::Station}) {
            net_.send(make(MessageKind::SizeAssignment, AgentId::Control, field, 0, m.payload));
        }
        if (keep_ledger_) {
            result_.ledger.reserve(hours_);
        }
        for (std::size_t t = 0; t < hours_; ++t) {
            const auto f = run_hour(t);
            result_.totals.add(f);
            if (keep_ledger_) {
                result_.ledger.push_back(f);
            }
        }
        const std::size_t last = hours_ == 0 ? 0 : hours_ - 1;
        return Message{MessageKind::OperationReport, AgentId::Control, AgentId::Design, last,
                       report_fields(result_.totals)};
    }

    const SimulationResult& result() const { return result_; }
    SimulationResult take_result() { return std::move(result_); }

  private:
    Message ask(MessageKind kind, AgentId to, std::size_t hour, std::vector<Field> payload = {})
    {
        auto reply = net_.send(make(kind, AgentId::Control, to, hour, std::move(payload)));
        if (!reply) {
            throw ProtocolViolation(make(kind, AgentId::Control, to, hour), "no reply");
        }
        return std::move(*reply);
    }

    HourlyFlows run_hour(std::size_t t)
    {
        const int hod = static_cast<int>(t % 24);
        HourlyFlows f;

        const auto gen = ask(MessageKind::ForecastRequest, AgentId::Generation, t);
        const auto load = ask(MessageKind::ForecastRequest, AgentId::Load, t);
        const auto hyd = ask(MessageKind::ForecastRequest, AgentId::Station, t);

        f.p_pv = gen.at("p_pv");
        f.p_wg = gen.at("p_wg");
        f.p_load = load.at("p_load");
        f.q_load = load.at("q_load");
        const stage::LoadSplit split{load.at("interruptible"), load.at("uninterruptible")};
        f.p_uninterruptible = split.uninterruptible;
        f.h_demand = hyd.at("arrived");

        const auto bus = stage::plan_bus(cat_, sizes_, f.p_pv + f.p_wg, f.p_load);

        stage::FuelCellAction fc;
        if (bus.ac_deficit > 0.0 && bus.converter_room > 0.0) {
            const auto r = ask(MessageKind::SupplyDeficitRequest, AgentId::Generation, t,
                               {{"ac_needed", std::min(bus.ac_deficit, bus.converter_room)}});
            fc = {r.at("p_tank_fc"), r.at("p_fc_conv"), r.at("served_ac"), r.at("q_fc")};
        }
        f.p_tank_fc = fc.p_tank_fc;
        f.p_fc_conv = fc.p_fc_conv;
        f.served_load = bus.ren_served_ac + fc.served_ac;

        const auto shed = stage::shed_load(split, f.p_load - f.served_load);
        f.shed_interruptible = shed.interruptible;
        f.shed_uninterruptible = shed.uninterruptible;

        f.q_fc_tl = fc.q_fc;
        const double fc_heat_used = std::min(fc.q_fc, f.q_load);
        f.q_fc_vented = fc.q_fc - fc_heat_used;
        const double heat_gap = f.q_load - fc_heat_used;

        if (bus.surplus_dc > 0.0) {
            const auto r = ask(MessageKind::StoreSurplusRequest, AgentId::Generation, t,
                               {{"surplus_dc", bus.surplus_dc}, {"heat_gap", heat_gap}});
            f.p_ren_el = r.at("p_ren_el");
            f.p_el_tank = r.at("p_el_tank");
            f.p_ren_h = r.at("p_ren_h");
            f.q_h_tl = r.at("q_h_tl");
            f.curtailed = r.at("curtailed");
        }

        const double boiler_gap = heat_gap - f.q_h_tl;
        if (boiler_gap > 0.0) {
            const auto r =
                ask(MessageKind::ThermalBackupRequest, AgentId::Generation, t, {{"heat_gap", boiler_gap}});
            f.q_b_tl = r.at("q_b_tl");
            f.boiler_fuel = r.at("fuel");
            f.unserved_thermal = r.at("unserved");
        }

        double request = hyd.at("pending");
        if (stage::defer_refills(policy_, hod, fc, shed)) {
            const auto r = ask(MessageKind::DeferRequest, AgentId::Station, t,
                               {{"max_age", static_cast<double>(policy_.max_defer_hours)}});
            request = r.at("request");
        }
        const auto draw = ask(MessageKind::StationDrawRequest, AgentId::Generation, t, {{"request", request}});
        f.p_tank_sta = draw.at("p_tank_sta");
        f.h_delivered = draw.at("delivered");
        f.tank_energy_end = draw.at("tank_energy_end");

        const auto settle =
            ask(MessageKind::HydrogenAllocation, AgentId::Station, t, {{"delivered", f.h_delivered}});
        f.unserved_hydrogen = settle.at("unserved");
        f.deferred_hydrogen = settle.at("deferred");
        return f;
    }

    const DeviceCatalog& cat_;
    const ScenarioPolicy& policy_;
    std::size_t hours_;
    Transport& net_;
    bool keep_ledger_;
    SizingVector sizes_;
    SimulationResult result_;
};

/// Top of the hierarchy: hands sizes to the control agent, receives the
/// operation report and remembers the best design it has been shown.
class DesignAgent : public Agent
{
  public:
    explicit DesignAgent(Transport& transport) : net_(transport) {}

    AgentId id() const override { return AgentId::Design; }

    std::optional<Message> handle(const Message& m) override
    {
        throw ProtocolViolation(m, "design agent receives reports only as replies");
    }

    /// Sends the sizes down and returns the operation report.
    Message request_operation(const SizingVector& sizes, double initial_tank_fraction)
    {
        auto reply = net_.send(make(MessageKind::SizeAssignment, AgentId::Design, AgentId::Control, 0,
                                    size_fields(sizes, initial_tank_fraction)));
        if (!reply) {
            throw Error("control agent sent no operation report");
        }
        return std::move(*reply);
    }

    /// Keeps `sizes` if `objective` beats the best seen so far.
    bool consider(const SizingVector& sizes, double objective)
    {
        if (!best_ || objective < best_objective_) {
            best_ = sizes;
            best_objective_ = objective;
            return true;
        }
        return false;
    }

    const std::optional<SizingVector>& best() const { return best_; }
    double best_objective() const { return best_objective_; }

  private:
    Transport& net_;
    std::optional<SizingVector> best_;
    double best_objective_ = 0.0;
};

struct MasRun
{
    SimulationResult result;
    Message report;
    std::vector<Message> trace;
};

/// Runs the full agent protocol over profiles of any common length.
inline MasRun run_mas(const DeviceCatalog& cat, const ProfileSet& profiles, const SizingVector& sizes,
                      const ScenarioPolicy& policy, const SimulationOptions& opt = {}, bool record_trace = true)
{
    const std::size_t n = check_span_profiles(profiles);
    check_sizes(sizes);
    check_initial_fraction(cat, opt.initial_tank_fraction);
    policy.validate();

    MessageBus bus(record_trace);
    GenerationAgent ga(cat, policy, profiles.irradiance, profiles.wind_speed);
    LoadAgent la(policy, profiles.electric_load, profiles.thermal_load);
    StationAgent sa(policy, profiles.hydrogen_demand);
    ControlAgent ca(cat, policy, n, bus, opt.keep_ledger);
    DesignAgent da(bus);
    for (Agent* a : std::initializer_list<Agent*>{&ga, &la, &sa, &ca, &da}) {
        bus.attach(*a);
    }

    MasRun run;
    run.report = da.request_operation(sizes, opt.initial_tank_fraction);
    run.result = ca.take_result();
    if (record_trace) {
        run.trace = bus.take_trace();
    }
    return run;
}

inline MasRun run_mas_year(const DeviceCatalog& cat, const ProfileSet& profiles, const SizingVector& sizes,
                           const ScenarioPolicy& policy, const SimulationOptions& opt = {}, bool record_trace = true)
{
    profiles.validate();
    return run_mas(cat, profiles, sizes, policy, opt, record_trace);
}

/// Feeds the control agent the replies recorded in a trace instead of live
/// field agents, checking that every request it issues matches the log.
class ReplayTransport : public Transport
{
  public:
    explicit ReplayTransport(const std::vector<Message>& trace, std::size_t start) : trace_(trace), pos_(start) {}

    std::optional<Message> send(const Message& m) override
    {
        if (pos_ >= trace_.size() || !(trace_[pos_] == m)) {
            throw ProtocolViolation(m, "request diverges from the recorded trace at entry " + std::to_string(pos_));
        }
        ++pos_;
        if (!expected_reply(m.kind, m.recipient)) {
            return std::nullopt;
        }
        if (pos_ >= trace_.size()) {
            throw ProtocolViolation(m, "trace ends before the reply");
        }
        return trace_[pos_++];
    }

    std::size_t position() const { return pos_; }

  private:
    const std::vector<Message>& trace_;
    std::size_t pos_;
};

/// Rebuilds the simulation result of a recorded run. The horizon is read
/// from the final operation report.
inline SimulationResult replay(const std::vector<Message>& trace, const DeviceCatalog& cat,
                               const ScenarioPolicy& policy)
{
    if (trace.size() < 2 || trace.front().kind != MessageKind::SizeAssignment ||
        trace.back().kind != MessageKind::OperationReport) {
        throw Error("trace does not hold a complete run");
    }
    const auto hours = static_cast<std::size_t>(trace.back().at("hours"));
    ReplayTransport transport(trace, 1);
    ControlAgent ca(cat, policy, hours, transport);
    const auto report = ca.handle(trace.front());
    if (!report || !(*report == trace.back()) || transport.position() != trace.size() - 1) {
        throw Error("replayed run does not reproduce the recorded operation report");
    }
    return ca.take_result();
}

// Trace text format, one message per line:
//   seq,hour,kind,sender,recipient,payload
// where payload is `name=value` pairs joined by ';' (empty when none) and
// values use the shortest round-trip decimal form.
inline std::string trace_to_text(const std::vector<Message>& trace)
{
    std::string out = "seq,hour,kind,sender,recipient,payload\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const auto& m = trace[i];
        out += std::to_string(i) + ',' + std::to_string(m.hour) + ',' + std::string(name(m.kind)) + ',' +
               std::string(name(m.sender)) + ',' + std::string(name(m.recipient)) + ',';
        for (std::size_t j = 0; j < m.payload.size(); ++j) {
            if (j > 0) {
                out += ';';
            }
            out += m.payload[j].name + '=' + text::format_double(m.payload[j].value);
        }
        out += '\n';
    }
    return out;
}

inline std::vector<Message> trace_from_text(std::string_view content, const std::string& source = "trace")
{
    auto find_index = [&](const auto& names, std::string_view s, std::size_t line) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (names[i] == s) {
                return i;
            }
        }
        throw text::ParseError(source, line, "unknown name '" + std::string(s) + "'");
    };

    const auto ls = text::lines(content);
    std::vector<Message> out;
    for (std::size_t i = 1; i < ls.size(); ++i) {
        if (ls[i].empty()) {
            continue;
        }
        const auto cells = text::split(ls[i], ',');
        if (cells.size() != 6) {
            throw text::ParseError(source, i + 1, "expected 6 fields");
        }
        Message m;
        const auto hour = text::parse_long(cells[1]);
        if (!hour || *hour < 0) {
            throw text::ParseError(source, i + 1, "bad hour");
        }
        m.hour = static_cast<std::size_t>(*hour);
        m.kind = static_cast<MessageKind>(find_index(kKindNames, cells[2], i + 1));
        m.sender = static_cast<AgentId>(find_index(kAgentNames, cells[3], i + 1));
        m.recipient = static_cast<AgentId>(find_index(kAgentNames, cells[4], i + 1));
        if (!cells[5].empty()) {
            for (auto kv : text::split(cells[5], ';')) {
                const auto eq = kv.find('=');
                const auto v = eq == std::string_view::npos ? std::nullopt : text::parse_double(kv.substr(eq + 1));
                if (!v) {
                    throw text::ParseError(source, i + 1, "bad payload entry '" + std::string(kv) + "'");
                }
                m.payload.push_back({std::string(kv.substr(0, eq)), *v});
            }
        }
        out.push_back(std::move(m));
    }
    return out;
}

} // namespace mgsize::agents
