#pragma once

#include <json.hpp>
#include <string>
#include <vector>

namespace fibrant {

using Json = nlohmann::ordered_json;

/// Three-valued result of a semi-decidable check. Holds and Fails always
/// carry machine-checkable evidence; Unknown carries only a reason. Every
/// verdict is implicitly qualified by the truncation bounds it was computed
/// at, which are collected in `bounds` and must be printed with the verdict.
struct Verdict {
  enum class Status { Holds, Fails, Unknown };
  Status status = Status::Unknown;
  Json evidence;
  std::string reason;
  std::vector<std::string> bounds;

  bool holds() const { return status == Status::Holds; }
  bool fails() const { return status == Status::Fails; }
  bool unknown() const { return status == Status::Unknown; }
  bool decided() const { return status != Status::Unknown; }

  static Verdict make_holds(Json ev) {
    Verdict v;
    v.status = Status::Holds;
    v.evidence = std::move(ev);
    return v;
  }
  static Verdict make_fails(Json ev) {
    Verdict v;
    v.status = Status::Fails;
    v.evidence = std::move(ev);
    return v;
  }
  static Verdict make_unknown(std::string why) {
    Verdict v;
    v.status = Status::Unknown;
    v.reason = std::move(why);
    return v;
  }

  Verdict& with_bound(std::string b) {
    bounds.push_back(std::move(b));
    return *this;
  }

  std::string status_str() const {
    switch (status) {
      case Status::Holds: return "holds";
      case Status::Fails: return "fails";
      default: return "unknown";
    }
  }

  Json to_json() const {
    Json j;
    j["status"] = status_str();
    if (status == Status::Holds || status == Status::Fails) j["evidence"] = evidence;
    if (status == Status::Unknown) j["reason"] = reason;
    if (!bounds.empty()) j["bounds"] = bounds;
    return j;
  }
};

/// Fails dominates; otherwise any Unknown makes the meet Unknown.
inline Verdict meet(const std::vector<Verdict>& vs) {
  for (const auto& v : vs)
    if (v.fails()) return v;
  for (const auto& v : vs)
    if (v.unknown()) return v;
  Json ev = Json::array();
  std::vector<std::string> bounds;
  for (const auto& v : vs) {
    ev.push_back(v.evidence);
    for (auto& b : v.bounds) bounds.push_back(b);
  }
  Verdict out = Verdict::make_holds(std::move(ev));
  out.bounds = std::move(bounds);
  return out;
}

inline Verdict meet(const Verdict& a, const Verdict& b) { return meet(std::vector<Verdict>{a, b}); }

}  // namespace fibrant
