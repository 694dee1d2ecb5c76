#pragma once

#include "json.hpp"

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

namespace jordanlab {

using json = nlohmann::ordered_json;

enum class Status { Pass, Fail, Incomplete, Skipped };
std::string to_string(Status s);
Status status_from_string(const std::string& s);

struct CheckRecord {
    std::string name;
    std::string paper_ref;  // statement of the identity being checked
    std::string mode = "exhaustive";
    std::uint64_t cases = 0;
    Status status = Status::Pass;
    json witness;  // null unless failing
    std::string note;
};

struct CheckReport {
    std::string suite;
    std::string ring;
    std::string geometry;
    std::vector<CheckRecord> checks;
    std::uint64_t seed = 0;
    double elapsed_ms = 0;

    CheckRecord& add(CheckRecord r);
    // Append records of another report, prefixing their names.
    void absorb(const CheckReport& other, const std::string& prefix = "");
    Status status() const;
    bool passed() const { return status() == Status::Pass; }
    const CheckRecord* find(const std::string& name) const;
};

inline constexpr int kSchemaVersion = 1;

json to_json(const CheckRecord& r);
json to_json(const CheckReport& r, const std::string& command = "", const json& config = json::object());
CheckReport report_from_json(const json& j);
int exit_code(Status s);

class Stopwatch {
public:
    Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0_).count();
    }

private:
    std::chrono::steady_clock::time_point t0_;
};

}  // namespace jordanlab
