#include <mpfeas/io.hpp>

#include <charconv>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace mpfeas {

ParseError::ParseError(const std::string& message, std::size_t line, std::size_t column)
    : std::runtime_error(line ? message + " (line " + std::to_string(line) + ", column " +
                                    std::to_string(column) + ")"
                              : message),
      line_(line),
      column_(column) {}

namespace {

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        std::size_t line = 1, column = 1;
        const auto upto = std::min<std::size_t>(e.byte ? e.byte - 1 : 0, text.size());
        for (std::size_t i = 0; i < upto; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        throw ParseError("malformed JSON", line, column);
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::int64_t parse_int(std::string_view s, const std::string& what) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError("bad integer in " + what);
    return v;
}

Time get_int(const Json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) throw ParseError(where + ": missing \"" + key + "\"");
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw ParseError(where + ": \"" + key + "\" must be an integer");
    return v.get<Time>();
}

std::vector<Rational> parse_rate_row(const Json& row, const std::string& where) {
    if (!row.is_array()) throw ParseError(where + ": rate row must be an array");
    std::vector<Rational> out;
    for (const auto& r : row) out.push_back(parse_rational(r));
    return out;
}

}  // namespace

Rational parse_rational(const Json& value) {
    if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
    if (!value.is_string()) throw ParseError("rational must be an integer or a \"p/q\" string");
    const auto s = value.get<std::string>();
    const auto slash = s.find('/');
    if (slash == std::string::npos) return Rational(parse_int(s, "rational"));
    const auto p = parse_int(std::string_view(s).substr(0, slash), "rational numerator");
    const auto q = parse_int(std::string_view(s).substr(slash + 1), "rational denominator");
    if (q <= 0) throw ParseError("rational denominator must be positive: " + s);
    if (std::gcd(p, q) != 1) throw ParseError("rational not in lowest terms: " + s);
    return Rational(p, q);
}

Json rational_to_json(const Rational& r) {
    if (r.denominator() == 1) return r.numerator();
    return to_string(r);
}

PriorityPolicy make_policy(std::string_view name, const std::vector<std::size_t>& order) {
    if (name == "rm") return PriorityPolicy::rm();
    if (name == "dm") return PriorityPolicy::dm();
    if (name == "edf") return PriorityPolicy::edf();
    if (name == "explicit") {
        std::vector<std::size_t> zero_based;
        for (auto i : order) {
            if (i < 1) throw ParseError("explicit order entries are 1-based task indices");
            zero_based.push_back(i - 1);
        }
        return PriorityPolicy::explicit_order(std::move(zero_based));
    }
    throw ParseError("unknown policy \"" + std::string(name) + "\" (expected rm, dm, edf or explicit)");
}

std::string job_label(const JobId& id) { return std::to_string(id.task + 1) + "." + std::to_string(id.instance); }

Scenario parse_scenario(std::string_view text) {
    const auto doc = parse_json(text);
    if (!doc.is_object() || !doc.contains("tasks") || !doc.at("tasks").is_array())
        throw ParseError("task-system file needs a \"tasks\" array");
    Scenario s;
    std::size_t index = 0;
    for (const auto& t : doc.at("tasks")) {
        const std::string where = "task " + std::to_string(++index);
        if (!t.is_object()) throw ParseError(where + ": must be an object");
        Task task;
        task.period = get_int(t, "T", where);
        task.wcet = get_int(t, "C", where);
        task.offset = t.contains("O") ? get_int(t, "O", where) : 0;
        task.deadline = t.contains("D") ? get_int(t, "D", where) : task.period;
        s.tasks.push_back(task);
    }
    const auto n = s.tasks.size();
    if (doc.contains("platform")) {
        const auto& p = doc.at("platform");
        if (!p.is_object()) throw ParseError("\"platform\" must be an object");
        if (p.contains("rates")) {
            const auto& rows = p.at("rates");
            if (!rows.is_array()) throw ParseError("\"rates\" must be an array of rows");
            for (std::size_t i = 0; i < rows.size(); ++i)
                s.platform.rates.push_back(parse_rate_row(rows[i], "rates row " + std::to_string(i + 1)));
            s.platform.processors = p.contains("m") ? static_cast<std::size_t>(get_int(p, "m", "platform"))
                                    : s.platform.rates.empty() ? 0
                                                               : s.platform.rates.front().size();
        } else if (p.contains("speeds")) {
            auto speeds = parse_rate_row(p.at("speeds"), "speeds");
            s.platform = Platform::uniform(n, std::move(speeds));
            if (p.contains("m") && static_cast<std::size_t>(get_int(p, "m", "platform")) != s.platform.processors)
                throw ParseError("\"m\" differs from the number of speeds");
        } else {
            const auto m = get_int(p, "m", "platform");
            if (m < 1) throw ParseError("platform needs m >= 1");
            s.platform = Platform::identical(n, static_cast<std::size_t>(m));
        }
    } else {
        s.platform = Platform::identical(n, 1);
    }
    if (doc.contains("scheduler")) {
        const auto& sch = doc.at("scheduler");
        if (!sch.is_object() || !sch.contains("policy") || !sch.at("policy").is_string())
            throw ParseError("\"scheduler\" needs a \"policy\" string");
        std::vector<std::size_t> order;
        if (sch.contains("order")) {
            for (const auto& o : sch.at("order")) {
                if (!o.is_number_integer()) throw ParseError("\"order\" entries must be integers");
                const auto v = o.get<std::int64_t>();
                if (v < 1) throw ParseError("\"order\" entries are 1-based task indices");
                order.push_back(static_cast<std::size_t>(v));
            }
        }
        s.policy = make_policy(sch.at("policy").get<std::string>(), order);
    }
    return s;
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(read_file(path)); }

Json scenario_to_json(const Scenario& s) {
    Json doc;
    Json tasks = Json::array();
    for (const auto& t : s.tasks) tasks.push_back({{"O", t.offset}, {"T", t.period}, {"D", t.deadline}, {"C", t.wcet}});
    doc["tasks"] = std::move(tasks);
    Json rows = Json::array();
    for (const auto& row : s.platform.rates) {
        Json r = Json::array();
        for (const auto& v : row) r.push_back(rational_to_json(v));
        rows.push_back(std::move(r));
    }
    doc["platform"] = {{"m", s.platform.processors}, {"rates", std::move(rows)}};
    Json sch = {{"policy", to_string(s.policy.kind)}};
    if (s.policy.kind == PolicyKind::explicit_order) {
        Json order = Json::array();
        for (auto i : s.policy.order) order.push_back(i + 1);
        sch["order"] = std::move(order);
    }
    doc["scheduler"] = std::move(sch);
    return doc;
}

std::string serialize_scenario(const Scenario& scenario) { return scenario_to_json(scenario).dump(2) + "\n"; }

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << serialize_scenario(scenario);
}

JobSetSpec parse_job_set(std::string_view text) {
    const auto doc = parse_json(text);
    if (!doc.is_object() || !doc.contains("jobs") || !doc.at("jobs").is_array())
        throw ParseError("job-set file needs a \"jobs\" array");
    JobSetSpec spec;
    spec.platform.processors = static_cast<std::size_t>(get_int(doc, "m", "job set"));
    std::size_t index = 0;
    for (const auto& j : doc.at("jobs")) {
        const std::string where = "job " + std::to_string(++index);
        JobSpec js;
        js.release = get_int(j, "r", where);
        js.deadline = get_int(j, "d", where);
        if (!j.contains("e")) throw ParseError(where + ": missing \"e\"");
        const auto& e = j.at("e");
        if (e.is_array()) {
            if (e.size() != 2) throw ParseError(where + ": \"e\" interval needs two bounds");
            js.min_requirement = parse_rational(e[0]);
            js.max_requirement = parse_rational(e[1]);
        } else {
            js.min_requirement = js.max_requirement = parse_rational(e);
        }
        if (j.contains("rates"))
            spec.platform.rates.push_back(parse_rate_row(j.at("rates"), where));
        else
            spec.platform.rates.emplace_back(spec.platform.processors, Rational(1));
        spec.jobs.push_back(js);
    }
    return spec;
}

JobSetSpec load_job_set(const std::filesystem::path& path) { return parse_job_set(read_file(path)); }

std::string serialize_job_set(const JobSetSpec& spec) {
    Json doc;
    doc["m"] = spec.platform.processors;
    Json jobs = Json::array();
    for (std::size_t i = 0; i < spec.jobs.size(); ++i) {
        const auto& j = spec.jobs[i];
        Json rates = Json::array();
        for (const auto& r : spec.platform.rates[i]) rates.push_back(rational_to_json(r));
        jobs.push_back({{"r", j.release},
                        {"e", {rational_to_json(j.min_requirement), rational_to_json(j.max_requirement)}},
                        {"d", j.deadline},
                        {"rates", std::move(rates)}});
    }
    doc["jobs"] = std::move(jobs);
    return doc.dump(2) + "\n";
}

Json state_to_json(const SystemState& state) {
    Json out = Json::array();
    for (const auto& s : state.tasks) out.push_back({s.active, s.elapsed, rational_to_json(s.executed)});
    return out;
}

namespace {

template <typename F>
Json per_task(const PeriodicityBounds& b, F value) {
    Json a = Json::array();
    for (std::size_t r = 0; r < b.priority_order.size(); ++r) a.push_back(value(r));
    return a;
}

}  // namespace

Json bounds_to_json(const PeriodicityBounds& b) {
    Json out;
    out["P"] = b.hyperperiod;
    out["priority"] = per_task(b, [&](std::size_t r) { return b.priority_order[r] + 1; });
    out["P_prefix"] = per_task(b, [&](std::size_t r) { return b.prefix_hyperperiods[r]; });
    out["S"] = per_task(b, [&](std::size_t r) { return b.S[r]; });
    out["Shat"] = per_task(b, [&](std::size_t r) { return b.Shat[r]; });
    out["X"] = per_task(b, [&](std::size_t r) { return b.X[r]; });
    return out;
}

std::string format_bounds_text(const PeriodicityBounds& b) {
    std::ostringstream out;
    out << "P = " << b.hyperperiod << "\n";
    out << std::left << std::setw(6) << "rank" << std::setw(6) << "task" << std::setw(8) << "P_i" << std::setw(8)
        << "S_i" << std::setw(8) << "Shat_i" << "X_i\n";
    for (std::size_t r = 0; r < b.priority_order.size(); ++r)
        out << std::setw(6) << r + 1 << std::setw(6) << b.priority_order[r] + 1 << std::setw(8)
            << b.prefix_hyperperiods[r] << std::setw(8) << b.S[r] << std::setw(8) << b.Shat[r] << b.X[r] << "\n";
    return out.str();
}

Json verdict_to_json(const Verdict& v) {
    Json out;
    out["outcome"] = to_string(v.outcome);
    out["theorem"] = to_string(v.test);
    out["interval"] = {v.interval.begin, v.interval.end};
    if (v.miss) {
        out["witness"] = {{"kind", "deadline_miss"},
                          {"task", v.miss->job.task + 1},
                          {"job", v.miss->job.instance},
                          {"time", v.miss->time}};
    } else if (v.outcome == Outcome::infeasible) {
        Json w = {{"kind", "state_mismatch"}};
        if (v.mismatched_task) w["task"] = *v.mismatched_task + 1;
        out["witness"] = std::move(w);
    }
    if (v.states) {
        out["states"] = {{"first", {{"t", v.states->first_time}, {"theta", state_to_json(v.states->first)}}},
                         {"second", {{"t", v.states->second_time}, {"theta", state_to_json(v.states->second)}}}};
    }
    if (v.bounds) out["bounds"] = bounds_to_json(*v.bounds);
    if (v.test == TestKind::edf_periodicity || v.test == TestKind::brute_force) {
        out["iterations"] = v.iterations;
        out["budget"] = v.budget;
    }
    return out;
}

std::string format_verdict_text(const Verdict& v) {
    std::ostringstream out;
    out << "outcome:  " << to_string(v.outcome) << "\n";
    out << "test:     " << to_string(v.test) << "\n";
    out << "interval: [" << v.interval.begin << ", " << v.interval.end << ")\n";
    if (v.miss)
        out << "witness:  job " << job_label(v.miss->job) << " missed its deadline at t=" << v.miss->time << "\n";
    else if (v.outcome == Outcome::infeasible)
        out << "witness:  state mismatch"
            << (v.mismatched_task ? " (task " + std::to_string(*v.mismatched_task + 1) + " accumulates backlog)" : "")
            << "\n";
    if (v.states) {
        out << "theta(" << v.states->first_time << ") = " << to_string(v.states->first) << "\n";
        out << "theta(" << v.states->second_time << ") = " << to_string(v.states->second) << "\n";
    }
    if (v.test == TestKind::edf_periodicity || v.test == TestKind::brute_force)
        out << "hyperperiods: " << v.iterations << " of budget " << v.budget << "\n";
    if (v.bounds) out << format_bounds_text(*v.bounds);
    return out.str();
}

namespace {

std::string priority_header(const Scenario& s) {
    if (!s.policy.task_level()) return "edf (deadline, task index, arrival)";
    std::string out = to_string(s.policy.kind);
    for (auto i : task_priority_order(s.policy, s.tasks)) out += " " + std::to_string(i + 1);
    return out;
}

std::string event_text(const Event& e, const Trace& trace) {
    if (e.kind == EventKind::state_snapshot) {
        const auto it = trace.snapshots.find(e.time);
        return std::string("snapshot ") + (it == trace.snapshots.end() ? "?" : to_string(it->second));
    }
    return std::string(to_string(e.kind)) + " " + job_label(e.job);
}

}  // namespace

std::string format_trace_text(const Trace& trace, const Scenario& scenario, Time from) {
    std::ostringstream out;
    out << "# processors " << trace.processors << "\n";
    out << "# priority " << priority_header(scenario) << "\n";
    out << "# window [" << std::max(from, trace.start) << "," << trace.end << ")\n";
    std::size_t ev = 0;
    auto events_at = [&](Time t) {
        std::string s;
        while (ev < trace.events.size() && trace.events[ev].time < t) ++ev;
        while (ev < trace.events.size() && trace.events[ev].time == t) {
            if (!s.empty()) s += ", ";
            s += event_text(trace.events[ev++], trace);
        }
        return s;
    };
    for (Time t = std::max(from, trace.start); t < trace.end; ++t) {
        out << t << " |";
        const auto& a = trace.at(t);
        for (std::size_t j = 0; j < a.size(); ++j) out << " p" << j + 1 << ":" << (a[j] ? job_label(*a[j]) : "-");
        const auto evs = events_at(t);
        out << " |" << (evs.empty() ? "" : " " + evs) << "\n";
    }
    const auto tail = events_at(trace.end);
    if (!tail.empty()) out << "# at " << trace.end << ": " << tail << "\n";
    return out.str();
}

Json trace_to_json(const Trace& trace, const Scenario& scenario, Time from) {
    const Time begin = std::max(from, trace.start);
    Json out;
    out["start"] = begin;
    out["end"] = trace.end;
    out["processors"] = trace.processors;
    out["priority"] = priority_header(scenario);
    Json instants = Json::array();
    for (Time t = begin; t < trace.end; ++t) {
        Json sigma = Json::array();
        for (const auto& e : trace.at(t)) sigma.push_back(e ? Json(job_label(*e)) : Json(nullptr));
        instants.push_back({{"t", t}, {"sigma", std::move(sigma)}});
    }
    out["instants"] = std::move(instants);
    Json events = Json::array();
    for (const auto& e : trace.events) {
        if (e.time < begin) continue;
        Json j = {{"t", e.time}, {"kind", to_string(e.kind)}};
        if (e.kind != EventKind::state_snapshot) j["job"] = job_label(e.job);
        events.push_back(std::move(j));
    }
    out["events"] = std::move(events);
    Json snaps = Json::array();
    for (const auto& [t, s] : trace.snapshots)
        if (t >= begin) snaps.push_back({{"t", t}, {"theta", state_to_json(s)}});
    out["snapshots"] = std::move(snaps);
    return out;
}

Json predictability_to_json(const PredictabilityReport& report, const SubsetReport& subset) {
    Json out;
    out["pass"] = report.pass && subset.pass;
    out["predictable"] = report.pass;
    out["availability_subset"] = subset.pass;
    out["skipped_prefixes"] = report.skipped_prefixes;
    Json prefixes = Json::array();
    for (const auto& p : report.prefixes) {
        prefixes.push_back({{"prefix", p.prefix},
                            {"start", {p.start_min, p.start_max}},
                            {"finish", {p.finish_min, p.finish_max}},
                            {"start_sampled", p.start_sampled},
                            {"finish_sampled", p.finish_sampled}});
    }
    out["prefixes"] = std::move(prefixes);
    if (report.violating_prefix) out["violating_prefix"] = *report.violating_prefix;
    if (subset.prefix) out["subset_violation"] = {{"prefix", *subset.prefix}, {"t", *subset.time}};
    return out;
}

}  // namespace mpfeas
