#include "cwplan/scenario.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <utility>

#include "json.hpp"

#include "cwplan/errors.hpp"
#include "cwplan/hash.hpp"

namespace cwplan::io {

namespace {

using nlohmann::json;

double num_or_inf(const json& v, const std::string& what) {
    if (v.is_string()) {
        if (v.get<std::string>() == "inf") {
            return std::numeric_limits<double>::infinity();
        }
        throw ValidationError(what + ": only the string \"inf\" is accepted");
    }
    if (!v.is_number()) {
        throw ValidationError(what + " must be a number or \"inf\"");
    }
    return v.get<double>();
}

Vec3 vec3_from(const json& v, const std::string& what) {
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() ||
        !v[1].is_number() || !v[2].is_number()) {
        throw ValidationError(what + " must be a 3-element number array");
    }
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

cw::OrbitParams orbit_from(const json& j) {
    if (!j.is_object()) {
        throw ValidationError("orbit block must be an object");
    }
    const double mu = j.value("mu_km3_s2", cw::kEarthMu);
    const int picked = static_cast<int>(j.contains("a_ts_km")) +
                       static_cast<int>(j.contains("altitude_km")) +
                       static_cast<int>(j.contains("kappa_rad_s"));
    if (picked != 1) {
        throw ValidationError(
            "orbit needs exactly one of a_ts_km, altitude_km, kappa_rad_s");
    }
    if (j.contains("a_ts_km")) {
        return cw::OrbitParams::from_semi_major_axis(
            j.at("a_ts_km").get<double>(), mu);
    }
    if (j.contains("altitude_km")) {
        return cw::OrbitParams::from_altitude(
            j.at("altitude_km").get<double>(), mu,
            j.value("body_radius_km", cw::kEarthRadius));
    }
    return cw::OrbitParams::from_mean_motion(j.at("kappa_rad_s").get<double>(),
                                             mu);
}

constraints::PathConstraint constraint_from(const json& j, std::size_t index) {
    const std::string what = "constraints[" + std::to_string(index) + "]";
    if (!j.is_object()) {
        throw ValidationError(what + " must be an object");
    }
    constraints::PathConstraint c;
    if (j.contains("center_km")) {
        c.center = vec3_from(j.at("center_km"), what + ".center_km");
    }
    if (j.contains("rho_inner_km")) {
        c.rho_inner = j.at("rho_inner_km").get<double>();
    }
    if (j.contains("rho_outer_km")) {
        c.rho_outer = num_or_inf(j.at("rho_outer_km"), what + ".rho_outer_km");
    }
    if (j.contains("t_end_s")) {
        c.t_end = num_or_inf(j.at("t_end_s"), what + ".t_end_s");
    }
    c.instant = j.value("instant", false);
    c.validate();
    return c;
}

Scenario scenario_from(const json& j) {
    if (!j.is_object()) {
        throw ValidationError("scenario root must be an object");
    }
    Scenario sc;
    if (!j.contains("mode") || !j.at("mode").is_string()) {
        throw ValidationError("scenario needs a string \"mode\"");
    }
    sc.mode = j.at("mode").get<std::string>();
    if (sc.mode.empty()) {
        throw ValidationError("scenario mode must be nonempty");
    }
    if (!j.contains("orbit")) {
        throw ValidationError("scenario needs an \"orbit\" block");
    }
    sc.orbit = orbit_from(j.at("orbit"));

    if (j.contains("transfer")) {
        const json& t = j.at("transfer");
        if (!t.is_object()) {
            throw ValidationError("transfer block must be an object");
        }
        sc.transfer.guard_s = t.value("guard_s", sc.transfer.guard_s);
        sc.transfer.max_condition =
            t.value("max_condition", sc.transfer.max_condition);
        if (!(sc.transfer.guard_s > 0.0) || !(sc.transfer.max_condition > 1.0)) {
            throw ValidationError(
                "transfer guard must be positive and max_condition > 1");
        }
    }

    if (j.contains("constraints")) {
        const json& list = j.at("constraints");
        if (!list.is_array()) {
            throw ValidationError("constraints must be an array");
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            sc.constraint_list.push_back(constraint_from(list[i], i));
        }
    }

    if (j.contains("params")) {
        if (!j.at("params").is_object()) {
            throw ValidationError("params block must be an object");
        }
        sc.params_json = j.at("params").dump();
    }

    if (j.contains("output")) {
        const json& o = j.at("output");
        if (!o.is_object() || (o.contains("dir") && !o.at("dir").is_string())) {
            throw ValidationError("output block must be {\"dir\": string}");
        }
        sc.out_dir = o.value("dir", sc.out_dir);
    }
    return sc;
}

json inf_or_num(double v) {
    if (std::isinf(v)) {
        return "inf";
    }
    return v;
}

json to_json(const Scenario& sc, bool include_output) {
    json j;
    j["mode"] = sc.mode;
    j["orbit"] = {{"kappa_rad_s", sc.orbit.kappa}, {"mu_km3_s2", sc.orbit.mu}};
    j["transfer"] = {{"guard_s", sc.transfer.guard_s},
                     {"max_condition", sc.transfer.max_condition}};
    if (!sc.constraint_list.empty()) {
        json list = json::array();
        for (const auto& c : sc.constraint_list) {
            list.push_back({{"center_km", {c.center.x(), c.center.y(), c.center.z()}},
                            {"rho_inner_km", c.rho_inner},
                            {"rho_outer_km", inf_or_num(c.rho_outer)},
                            {"t_end_s", inf_or_num(c.t_end)},
                            {"instant", c.instant}});
        }
        j["constraints"] = std::move(list);
    }
    j["params"] = json::parse(sc.params_json);
    if (include_output) {
        j["output"] = {{"dir", sc.out_dir}};
    }
    return j;
}

/// Walk one path segment, creating object members on demand; array
/// segments must be in-range indices.
json* descend(json* node, const std::string& seg, const std::string& path) {
    if (node->is_array()) {
        std::size_t idx = 0;
        for (char c : seg) {
            if (c < '0' || c > '9') {
                throw ValidationError("override path '" + path +
                                      "' indexes an array with '" + seg + "'");
            }
            idx = idx * 10 + static_cast<std::size_t>(c - '0');
        }
        if (idx >= node->size()) {
            throw ValidationError("override path '" + path +
                                  "' runs past the end of an array");
        }
        return &(*node)[idx];
    }
    if (!node->is_object() && !node->is_null()) {
        throw ValidationError("override path '" + path +
                              "' descends into a scalar at '" + seg + "'");
    }
    return &(*node)[seg];
}

void apply_override(json& root, const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ValidationError("override must look like path.to.key=value: " +
                              kv);
    }
    const std::string path = kv.substr(0, eq);
    const std::string value = kv.substr(eq + 1);

    json parsed;
    try {
        parsed = json::parse(value);
    } catch (const json::exception&) {
        parsed = value;  // not a JSON literal: treat as string
    }

    json* node = &root;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string seg =
            path.substr(start, dot == std::string::npos ? dot : dot - start);
        if (seg.empty()) {
            throw ValidationError("override path has an empty segment: " + kv);
        }
        if (dot == std::string::npos) {
            *descend(node, seg, path) = std::move(parsed);
            return;
        }
        node = descend(node, seg, path);
        start = dot + 1;
    }
}

} // namespace

std::uint64_t Scenario::hash() const {
    return fnv1a64(to_json(*this, false).dump());
}

Scenario parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("scenario is not valid JSON: ") +
                              e.what());
    }
    return scenario_from(j);
}

Scenario load_scenario(const std::filesystem::path& path,
                       const std::vector<std::string>& overrides) {
    std::ifstream f(path);
    if (!f) {
        throw IoError("cannot read scenario file: " + path.string());
    }
    std::ostringstream buf;
    buf << f.rdbuf();

    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + " is not valid JSON: " + e.what());
    }
    for (const std::string& kv : overrides) {
        apply_override(j, kv);
    }
    return scenario_from(j);
}

std::string serialize(const Scenario& scenario) {
    return to_json(scenario, true).dump(2) + "\n";
}

} // namespace cwplan::io
