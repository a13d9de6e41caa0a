#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "omni/instance.hpp"
#include "omni/netcode.hpp"

namespace omni {

/// {"n":3,"k":3,"groups":[2,3],"holdings":[[1],[2],[3]]}; packets are 1-based
/// and holdings[i] belongs to user i+1.
inline nlohmann::json instance_to_json(const Instance& inst) {
  nlohmann::json holdings = nlohmann::json::array();
  for (const auto& h : inst.all_holdings()) {
    nlohmann::json list = nlohmann::json::array();
    for (auto x : h.elements()) list.push_back(x + 1);
    holdings.push_back(std::move(list));
  }
  return {{"n", inst.n()}, {"k", inst.k()}, {"groups", inst.group_sizes()}, {"holdings", std::move(holdings)}};
}

inline Instance instance_from_json(const nlohmann::json& j) {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidInstance, what); };
  if (!j.is_object()) fail("instance must be a JSON object");
  for (const char* key : {"n", "k", "groups", "holdings"})
    if (!j.contains(key)) fail(std::string("missing field '") + key + "'");
  if (!j["n"].is_number_integer()) fail("n must be an integer");
  if (!j["k"].is_number_integer()) fail("k must be an integer");
  if (!j["groups"].is_array()) fail("groups must be an array of integers");
  if (!j["holdings"].is_array()) fail("holdings must be an array of packet lists");
  const auto n64 = j["n"].get<long long>();
  const auto k64 = j["k"].get<long long>();
  if (n64 <= 0) fail("n must be positive");
  if (n64 > kMaxUsers) fail("n must not exceed " + std::to_string(kMaxUsers));
  if (k64 <= 0) fail("k must be positive");
  if (k64 > (1LL << 30)) fail("k is too large");
  const int n = static_cast<int>(n64), k = static_cast<int>(k64);

  std::vector<int> groups;
  for (const auto& g : j["groups"]) {
    if (!g.is_number_integer()) fail("groups must be an array of integers");
    const auto v = g.get<long long>();
    if (v < 1 || v > n) fail("group sizes must lie in 1..n");
    groups.push_back(static_cast<int>(v));
  }
  if (static_cast<long long>(j["holdings"].size()) != n64) fail("holdings must list exactly n users");
  std::vector<PacketSet> holdings;
  for (const auto& list : j["holdings"]) {
    if (!list.is_array()) fail("each holding must be an array of packet indices");
    PacketSet s(static_cast<std::size_t>(k));
    for (const auto& x : list) {
      if (!x.is_number_integer()) fail("packet indices must be integers");
      const auto v = x.get<long long>();
      if (v < 1 || v > k) fail("packet index out of range 1..k");
      if (s.test(static_cast<std::size_t>(v - 1))) fail("holding lists a packet twice");
      s.set(static_cast<std::size_t>(v - 1));
    }
    holdings.push_back(std::move(s));
  }
  return Instance(n, k, std::move(holdings), std::move(groups));
}

inline nlohmann::json rationals_to_json(const std::vector<Rational>& values) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& v : values) out.push_back(to_fraction_string(v));
  return out;
}

/// Rows are rounds, entries "num/den".
inline nlohmann::json rates_to_json(const RateMatrix& rates) {
  nlohmann::json out = nlohmann::json::array();
  for (int l = 0; l < rates.rounds(); ++l) {
    std::vector<Rational> row;
    for (int i = 0; i < rates.users(); ++i) row.push_back(rates.at(l, i));
    out.push_back(rationals_to_json(row));
  }
  return out;
}

inline RateMatrix rates_from_json(const nlohmann::json& j, int rounds, int users) {
  if (!j.is_array() || static_cast<int>(j.size()) != rounds)
    throw Error(ErrorCode::InvalidArgument, "rates must have one row per round");
  RateMatrix rates(rounds, users);
  for (int l = 0; l < rounds; ++l) {
    const auto& row = j[static_cast<std::size_t>(l)];
    if (!row.is_array() || static_cast<int>(row.size()) != users)
      throw Error(ErrorCode::InvalidArgument, "each rate row must have one entry per user");
    for (int i = 0; i < users; ++i) {
      const auto& v = row[static_cast<std::size_t>(i)];
      if (!v.is_string()) throw Error(ErrorCode::InvalidArgument, "rates must be \"num/den\" strings");
      rates.at(l, i) = parse_rational(v.get<std::string>());
    }
  }
  return rates;
}

/// Users are reported 1-based.
inline nlohmann::json report_to_json(const SimReport& r) {
  nlohmann::json rounds = nlohmann::json::array();
  for (std::size_t l = 0; l < r.rounds.size(); ++l) {
    nlohmann::json users = nlohmann::json::array();
    for (const auto& o : r.rounds[l]) users.push_back({{"user", o.user + 1}, {"achieved", o.achieved}});
    rounds.push_back({{"round", l + 1}, {"achieved", r.round_achieved(l)}, {"users", std::move(users)}});
  }
  return {{"mode", std::string(to_string(r.mode))},
          {"chunks_per_packet", r.chunks_per_packet},
          {"all_achieved", r.all_achieved()},
          {"rounds", std::move(rounds)},
          {"transmissions", r.transmissions},
          {"ranks", r.ranks}};
}

}  // namespace omni
