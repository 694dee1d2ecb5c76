#include "jordanlab/report.hpp"

#include "jordanlab/rings.hpp"

namespace jordanlab {

std::string to_string(Status s) {
    switch (s) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Incomplete: return "incomplete";
        case Status::Skipped: return "skipped";
    }
    return "?";
}

Status status_from_string(const std::string& s) {
    if (s == "pass") return Status::Pass;
    if (s == "fail") return Status::Fail;
    if (s == "incomplete") return Status::Incomplete;
    if (s == "skipped") return Status::Skipped;
    throw ParseError("unknown status '" + s + "'");
}

CheckRecord& CheckReport::add(CheckRecord r) {
    checks.push_back(std::move(r));
    return checks.back();
}

void CheckReport::absorb(const CheckReport& other, const std::string& prefix) {
    for (auto r : other.checks) {
        if (!prefix.empty()) r.name = prefix + r.name;
        checks.push_back(std::move(r));
    }
}

Status CheckReport::status() const {
    bool incomplete = false;
    for (auto& c : checks) {
        if (c.status == Status::Fail) return Status::Fail;
        if (c.status == Status::Incomplete) incomplete = true;
    }
    return incomplete ? Status::Incomplete : Status::Pass;
}

const CheckRecord* CheckReport::find(const std::string& name) const {
    for (auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

json to_json(const CheckRecord& r) {
    json j;
    j["name"] = r.name;
    j["paper_ref"] = r.paper_ref;
    j["mode"] = r.mode;
    j["cases"] = r.cases;
    j["status"] = to_string(r.status);
    if (!r.witness.is_null()) j["witness"] = r.witness;
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

json to_json(const CheckReport& r, const std::string& command, const json& config) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command.empty() ? r.suite : command;
    json cfg = config;
    if (!cfg.contains("ring") && !r.ring.empty()) cfg["ring"] = r.ring;
    if (!cfg.contains("geometry") && !r.geometry.empty()) cfg["geometry"] = r.geometry;
    j["config"] = cfg;
    j["suite"] = r.suite;
    j["status"] = to_string(r.status());
    json checks = json::array();
    for (auto& c : r.checks) checks.push_back(to_json(c));
    j["checks"] = checks;
    j["seed"] = r.seed;
    j["elapsed_ms"] = r.elapsed_ms;
    return j;
}

CheckReport report_from_json(const json& j) {
    if (!j.contains("schema_version") || j["schema_version"].get<int>() != kSchemaVersion)
        throw ParseError("report schema version mismatch");
    CheckReport r;
    r.suite = j.value("suite", std::string());
    if (j.contains("config")) {
        r.ring = j["config"].value("ring", std::string());
        r.geometry = j["config"].value("geometry", std::string());
    }
    r.seed = j.value("seed", std::uint64_t(0));
    r.elapsed_ms = j.value("elapsed_ms", 0.0);
    for (auto& c : j["checks"]) {
        CheckRecord rec;
        rec.name = c["name"].get<std::string>();
        rec.paper_ref = c["paper_ref"].get<std::string>();
        rec.mode = c["mode"].get<std::string>();
        rec.cases = c["cases"].get<std::uint64_t>();
        rec.status = status_from_string(c["status"].get<std::string>());
        if (c.contains("witness")) rec.witness = c["witness"];
        rec.note = c.value("note", std::string());
        r.checks.push_back(std::move(rec));
    }
    return r;
}

int exit_code(Status s) {
    switch (s) {
        case Status::Pass:
        case Status::Skipped: return 0;
        case Status::Fail: return 1;
        case Status::Incomplete: return 2;
    }
    return 1;
}

}  // namespace jordanlab
