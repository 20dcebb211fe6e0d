#pragma once

// Structured run reports shared by every CLI subcommand: echoed parameters,
// results, and named pass/fail checks, serializable as JSON or flat CSV.

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace chains {

struct check_row {
    std::string name;
    bool pass = false;
    double observed = 0.0;
    double tolerance = 0.0;
};

struct run_report {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    nlohmann::json results = nlohmann::json::object();
    std::vector<check_row> checks;
    bool deterministic = false;  // suppresses wall-clock fields for byte-stable output

    void add_check(const std::string& name, bool pass, double observed, double tolerance) {
        checks.push_back({name, pass, observed, tolerance});
    }

    bool all_pass() const {
        for (const check_row& c : checks)
            if (!c.pass) return false;
        return true;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["command"] = command;
        j["parameters"] = parameters;
        j["results"] = results;
        j["checks"] = nlohmann::json::array();
        for (const check_row& c : checks)
            j["checks"].push_back(
                {{"name", c.name}, {"pass", c.pass}, {"observed", c.observed}, {"tolerance", c.tolerance}});
        j["all_pass"] = all_pass();
        if (!deterministic) {
            const auto now = std::chrono::system_clock::now();
            j["unix_time"] = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
        }
        return j;
    }

    // flat section,key,value rows; nested results are dotted
    std::string to_csv() const {
        std::string out = "section,key,value\n";
        const auto esc = [](const nlohmann::json& v) {
            std::string s = v.is_string() ? v.get<std::string>() : v.dump();
            if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
            std::string q = "\"";
            for (char ch : s) {
                if (ch == '"') q += '"';
                q += ch;
            }
            return q + "\"";
        };
        out += "run,command," + esc(command) + "\n";
        for (const auto& [k, v] : parameters.items()) out += "parameter," + k + "," + esc(v) + "\n";
        const std::function<void(const std::string&, const nlohmann::json&)> walk =
            [&](const std::string& prefix, const nlohmann::json& v) {
                if (v.is_object()) {
                    for (const auto& [k, sub] : v.items())
                        walk(prefix.empty() ? k : prefix + "." + k, sub);
                } else if (v.is_array()) {
                    for (std::size_t i = 0; i < v.size(); ++i)
                        walk(prefix + "." + std::to_string(i), v[i]);
                } else {
                    out += "result," + prefix + "," + esc(v) + "\n";
                }
            };
        walk("", results);
        for (const check_row& c : checks) {
            nlohmann::json obs = c.observed, tol = c.tolerance;
            out += "check," + c.name + "," + std::string(c.pass ? "pass" : "fail") + ";observed=" +
                   obs.dump() + ";tolerance=" + tol.dump() + "\n";
        }
        out += "run,all_pass," + std::string(all_pass() ? "true" : "false") + "\n";
        return out;
    }
};

}  // namespace chains
