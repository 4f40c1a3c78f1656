#pragma once

// JSON dumps of the two geometries (anchors and rectangle lists).

#include <json.hpp>

#include "dirlab/geometry.hpp"

namespace dirlab {

inline nlohmann::json to_json(const CuspProfile& profile) {
  nlohmann::json j;
  j["knots"] = std::vector<double>(profile.knots().begin(), profile.knots().end());
  j["values"] = std::vector<double>(profile.values().begin(), profile.values().end());
  if (profile.delta()) j["delta"] = *profile.delta();
  if (profile.eps()) j["eps"] = profile.eps()->values();
  return j;
}

inline nlohmann::json to_json(const Rect& r) {
  return {{"kind", to_string(r.kind)}, {"shift", r.shift}, {"index", r.index}, {"anchor", r.anchor},
          {"x1", r.x1},                {"x2", r.x2},       {"y1", r.y1},       {"y2", r.y2}};
}

inline nlohmann::json to_json(const RectilinearDomain& F) {
  nlohmann::json j;
  j["rects"] = nlohmann::json::array();
  for (const Rect& r : F.rects()) j["rects"].push_back(to_json(r));
  if (F.is_eksy()) {
    j["n_max"] = F.n_max();
    j["M"] = F.growth()->describe();
    std::vector<std::int64_t> l;
    for (int n = 1; n <= F.n_max(); ++n) l.push_back(F.tower_height(n));
    j["l"] = l;
    j["tail_bound"] = F.tail_bound();
  }
  return j;
}

}  // namespace dirlab
