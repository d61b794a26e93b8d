#include "entropic/serialize.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string_view>

#include "entropic/errors.hpp"
#include "entropic/random.hpp"
#include "entropic/tolerance.hpp"

namespace entropic {

namespace {

// JSON has no infinities; they travel as strings.
Json number(double x) {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return "nan";
    return x > 0 ? "inf" : "-inf";
}

double read_number(const Json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw ValidationError("expected a number, got " + j.dump());
}

const Json& member(const Json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
    return j.at(key);
}

int read_n(const Json& j) {
    const Json& n = member(j, "n");
    if (!n.is_number_integer()) throw ValidationError("'n' must be an integer");
    const int value = n.get<int>();
    if (value < 0 || value > caps::kMaxElementDim) throw ValidationError("'n' out of range");
    return value;
}

Json number_map(const std::map<std::string, double>& m) {
    Json out = Json::object();
    for (const auto& [k, v] : m) out[k] = number(v);
    return out;
}

std::map<std::string, double> read_number_map(const Json& j) {
    if (!j.is_object()) throw ValidationError("expected an object of numbers");
    std::map<std::string, double> out;
    for (const auto& [k, v] : j.items()) out[k] = read_number(v);
    return out;
}

// nlohmann raises its own exception types on type mismatches; surface them as ValidationError.
template <typename F>
auto guarded(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed JSON: ") + e.what());
    }
}

}  // namespace

std::string to_hex(Bits x) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%x", static_cast<unsigned>(x));
    return buf;
}

Bits parse_hex(const std::string& text) {
    std::string_view s = text;
    if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) s.remove_prefix(2);
    Bits value = 0;
    // from_chars rejects signs and whitespace, which stoul would accept.
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), value, 16);
    if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
        throw ValidationError("bad hex element '" + text + "'");
    }
    return value;
}

Json to_json(const Subspace& v) {
    Json basis = Json::array();
    for (Bits row : v.basis()) basis.push_back(to_hex(row));
    return Json{{"n", v.n()}, {"basis", basis}};
}

Subspace subspace_from_json(const Json& j) {
    return guarded([&] {
        const int n = read_n(j);
        std::vector<Bits> rows;
        for (const auto& h : member(j, "basis")) rows.push_back(parse_hex(h.get<std::string>()));
        return Subspace::from_rref(n, std::move(rows));
    });
}

Json to_json(const Dist& p) {
    const auto support = p.support();
    if (4 * support.size() >= p.size()) {
        Json mass = Json::array();
        for (double m : p.masses()) mass.push_back(m);
        return Json{{"n", p.n()}, {"mass", mass}};
    }
    Json sparse = Json::object();
    for (Bits x : support) sparse[to_hex(x)] = p[x];
    return Json{{"n", p.n()}, {"support", sparse}};
}

Dist dist_from_json(const Json& j) {
    return guarded([&] {
        const int n = read_n(j);
        check_dense_dim(n);
        std::vector<double> mass(std::size_t{1} << n, 0.0);
        if (j.contains("mass")) {
            const Json& m = j.at("mass");
            if (!m.is_array() || m.size() != mass.size()) throw ValidationError("'mass' must have 2^n entries");
            for (std::size_t i = 0; i < mass.size(); ++i) mass[i] = m[i].get<double>();
        } else {
            for (const auto& [key, value] : member(j, "support").items()) {
                const Bits x = parse_hex(key);
                check_element(x, n);
                mass[x] += value.get<double>();
            }
        }
        return Dist(n, std::move(mass));
    });
}

Json to_json(const ElementSet& a) {
    Json elems = Json::array();
    for (Bits x : a.elements) elems.push_back(to_hex(x));
    return Json{{"n", a.n}, {"elements", elems}};
}

ElementSet set_from_json(const Json& j) {
    return guarded([&] {
        const int n = read_n(j);
        std::vector<Bits> elems;
        for (const auto& h : member(j, "elements")) elems.push_back(parse_hex(h.get<std::string>()));
        if (elems.empty()) throw ValidationError("set file has no elements");
        return ElementSet::from(n, std::move(elems));
    });
}

Json to_json(const DoublingStats& s) {
    return Json{{"size", s.size}, {"sumset_size", s.sumset_size}, {"eta", s.eta}};
}

Json to_json(const FibringReport& r) {
    return Json{{"s_total", r.s_total},
                {"s_quotient", r.s_quotient},
                {"s_fiber", r.s_fiber},
                {"residual_mi", r.residual_mi},
                {"identity_residual", r.identity_gap()}};
}

Json to_json(const Inequality& q) {
    return Json{{"name", q.name},
                {"lhs", number(q.lhs)},
                {"relation", to_string(q.relation)},
                {"rhs", number(q.rhs)},
                {"tolerance", q.tolerance},
                {"kind", to_string(q.kind)},
                {"slack", number(q.slack())},
                {"holds", q.holds()}};
}

Inequality inequality_from_json(const Json& j) {
    return guarded([&] {
        Inequality q;
        q.name = member(j, "name").get<std::string>();
        q.lhs = read_number(member(j, "lhs"));
        q.rhs = read_number(member(j, "rhs"));
        q.relation = relation_from_string(member(j, "relation").get<std::string>());
        q.tolerance = read_number(member(j, "tolerance"));
        q.kind = claim_kind_from_string(member(j, "kind").get<std::string>());
        return q;
    });
}

Json to_json(const SubspaceCertificate& c) {
    Json inputs = Json::array();
    for (const auto& d : c.inputs) inputs.push_back(to_json(d));
    Json ineqs = Json::array();
    for (const auto& q : c.inequalities) ineqs.push_back(to_json(q));
    Json out{{"criterion", to_string(c.criterion)},
             {"mode", to_string(c.mode)},
             {"passed", c.passed()},
             {"subspace", to_json(c.v)},
             {"dim_v", c.v.dim()},
             {"params", number_map(c.params)},
             {"measured", number_map(c.measured)},
             {"inequalities", ineqs},
             {"tolerances",
              {{"identity", tol::kIdentity}, {"oracle", tol::kOracle}, {"mass_clamp", tol::kMassClamp}}},
             {"inputs", inputs}};
    if (c.seed) {
        out["seed"] = *c.seed;
        out["rng_algorithm"] = c.rng_algorithm.empty() ? Rng::kAlgorithm : c.rng_algorithm;
    }
    return out;
}

SubspaceCertificate certificate_from_json(const Json& j) {
    return guarded([&] {
        SubspaceCertificate c;
        c.criterion = criterion_from_string(member(j, "criterion").get<std::string>());
        c.mode = search_mode_from_string(member(j, "mode").get<std::string>());
        c.v = subspace_from_json(member(j, "subspace"));
        for (const auto& d : member(j, "inputs")) {
            c.inputs.push_back(dist_from_json(d));
            if (c.inputs.back().n() != c.v.n()) throw ValidationError("certificate input and subspace differ in n");
        }
        c.params = read_number_map(member(j, "params"));
        c.measured = read_number_map(member(j, "measured"));
        for (const auto& q : member(j, "inequalities")) c.inequalities.push_back(inequality_from_json(q));
        if (j.contains("seed")) {
            c.seed = j.at("seed").get<std::uint64_t>();
            c.rng_algorithm = j.value("rng_algorithm", std::string(Rng::kAlgorithm));
        }
        return c;
    });
}

Json to_json(const TraceStep& s) {
    return Json{{"kind", to_string(s.kind)},
                {"iteration", s.iteration},
                {"added", to_json(s.added)},
                {"accumulated", to_json(s.accumulated)},
                {"measure", s.measure},
                {"before", number(s.before)},
                {"after", number(s.after)},
                {"decrement", number(s.decrement)}};
}

Json to_json(const PipelineTrace& t) {
    Json steps = Json::array();
    for (const auto& s : t.steps) steps.push_back(to_json(s));
    Json out{{"steps", steps}, {"subsolver_calls", t.subsolver_calls}, {"monotone", t.monotone()}};
    if (t.final_certificate) out["final_subspace"] = to_json(t.final_certificate->v);
    return out;
}

Json to_json(const EndgameTranscript& t) {
    Json checks = Json::array();
    for (const auto& q : t.checks()) checks.push_back(to_json(q));
    Json table = Json::array();
    for (const auto& e : t.table) {
        table.push_back(Json{{"u", to_hex(e.u)},
                             {"w", to_hex(e.w)},
                             {"weight", e.weight},
                             {"subspace", to_json(e.v)},
                             {"h_xu", e.h_xu},
                             {"h_yw", e.h_yw},
                             {"h_proj_xu", e.h_proj_xu},
                             {"h_proj_yw", e.h_proj_yw},
                             {"h_z", e.h_z},
                             {"distance", e.distance},
                             {"dimension_within_7h", e.lemma_dimension}});
    }
    Json out{{"eta", t.eta},
             {"kappa", t.kappa},
             {"gaps", t.gaps.gaps},
             {"measured_kappa", t.gaps.kappa()},
             {"s", t.gaps.s},
             {"h_x", t.gaps.h_x},
             {"h_y", t.gaps.h_y},
             {"z_system", t.z_system}};
    if (t.z_system) {
        out["i_z1_z3_given_s"] = t.i13;
        out["i_z1_z2_given_s"] = t.i12;
        out["i_z2_z3_given_s"] = t.i23;
        out["h_z_given_s"] = t.h_z_given_s;
    }
    out["bsg_expected_distance"] = t.bsg_expected_distance;
    out["truncated"] = t.truncated;
    out["pfr_fallbacks"] = t.pfr_fallbacks;
    out["expectation"] = t.expectation;
    out["checks"] = checks;
    out["passed"] = t.passed();
    out["table"] = table;
    return out;
}

std::string inputs_digest(const std::vector<Dist>& inputs) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto mix = [&h](std::uint64_t word) {
        for (int i = 0; i < 8; ++i) {
            h ^= (word >> (8 * i)) & 0xff;
            h *= 0x100000001b3ULL;
        }
    };
    for (const auto& d : inputs) {
        mix(static_cast<std::uint64_t>(d.n()));
        for (double m : d.masses()) mix(std::bit_cast<std::uint64_t>(m));
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

Json solve_bundle(const SolveResult& r, const PipelineOptions& options) {
    return Json{{"inputs_digest", inputs_digest(r.certificate.inputs)},
                {"seed", options.seed},
                {"rng_algorithm", Rng::kAlgorithm},
                {"mode", to_string(options.mode)},
                {"trace", to_json(r.trace)},
                {"final_subspace", to_json(r.certificate.v)},
                {"certificate", to_json(r.certificate)}};
}

Json analyze_bundle(const ElementSet& a, const AnalyzeResult& r, const PipelineOptions& options) {
    Json out{{"inputs_digest", inputs_digest(r.certificate.inputs)},
             {"seed", options.seed},
             {"rng_algorithm", Rng::kAlgorithm},
             {"mode", to_string(options.mode)},
             {"set", to_json(a)},
             {"stats", to_json(r.stats)},
             {"final_subspace", to_json(r.certificate.v)}};
    if (r.solve) out["trace"] = to_json(r.solve->trace);
    out["certificate"] = to_json(r.certificate);
    return out;
}

SubspaceCertificate certificate_from_document(const Json& j) {
    if (j.is_object() && j.contains("certificate")) return certificate_from_json(j.at("certificate"));
    return certificate_from_json(j);
}

Json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
    if (!out) throw Error("write to '" + path + "' failed");
}

}  // namespace entropic
