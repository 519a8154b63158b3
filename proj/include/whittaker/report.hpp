#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "whittaker/serialize.hpp"

namespace whittaker {

/// Result of one exact check. `residual` holds whatever witnesses the
/// verdict: a failing vector, a rank pair, a count.
struct Outcome {
  bool pass = true;
  Json residual = Json::object();
};

struct CheckRecord {
  std::string description;
  std::string anchor;
  bool pass = true;
  Json residual;
  double wall_seconds = 0;

  friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

struct Report {
  std::string suite;
  std::uint64_t seed = 0;
  Json config;
  std::vector<CheckRecord> checks;

  bool all_pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }

  friend bool operator==(const Report&, const Report&) = default;
};

inline void to_json(Json& j, const CheckRecord& c) {
  j = Json{{"description", c.description},
           {"anchor", c.anchor},
           {"status", c.pass ? "pass" : "fail"},
           {"residual", c.residual},
           {"wall_seconds", c.wall_seconds}};
}

inline void from_json(const Json& j, CheckRecord& c) {
  c.description = j.at("description").get<std::string>();
  c.anchor = j.at("anchor").get<std::string>();
  std::string status = j.at("status").get<std::string>();
  if (status != "pass" && status != "fail") throw std::invalid_argument("bad status " + status);
  c.pass = status == "pass";
  c.residual = j.at("residual");
  c.wall_seconds = j.at("wall_seconds").get<double>();
}

inline void to_json(Json& j, const Report& r) {
  j = Json{{"suite", r.suite},
           {"seed", r.seed},
           {"config", r.config},
           {"status", r.all_pass() ? "pass" : "fail"},
           {"checks", r.checks}};
}

inline void from_json(const Json& j, Report& r) {
  r.suite = j.at("suite").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.config = j.at("config");
  r.checks = j.at("checks").get<std::vector<CheckRecord>>();
}

/// Copy of the report JSON with timing fields zeroed, for determinism checks.
inline Json without_timing(Json j) {
  for (auto& c : j.at("checks")) c["wall_seconds"] = 0.0;
  return j;
}

class ReportBuilder {
 public:
  ReportBuilder(std::string suite, std::uint64_t seed, Json config) {
    report_.suite = std::move(suite);
    report_.seed = seed;
    report_.config = std::move(config);
  }

  template <class Fn>
  const CheckRecord& run(std::string description, std::string anchor, Fn&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o = fn();
    std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    report_.checks.push_back(
        {std::move(description), std::move(anchor), o.pass, std::move(o.residual), dt.count()});
    return report_.checks.back();
  }

  const Report& report() const { return report_; }
  Report take() { return std::move(report_); }

 private:
  Report report_;
};

}  // namespace whittaker
