#include "nehari/body_io.hpp"

#include <fstream>
#include <sstream>

#include "nehari/errors.hpp"

namespace nehari {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(where + "/" + key, "missing field");
  return j.at(key);
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) throw SchemaError(where, "expected a number");
  return j.get<double>();
}

std::vector<Vec> vec_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where, "expected an array of points");
  std::vector<Vec> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vec_from_json(j[i], where + "/" + std::to_string(i)));
  return out;
}

}  // namespace

Vec vec_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw SchemaError(where, "expected a non-empty array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = number(j[i], where + "/" + std::to_string(i));
  return v;
}

json vec_to_json(const Vec& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i] + 0.0);  // no negative zeros in output
  return out;
}

ConvexBody body_from_json(const json& j, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where.empty() ? "/" : where, "expected an object");
  const json& type_field = field(j, "type", where);
  if (!type_field.is_string()) throw SchemaError(where + "/type", "expected a string");
  const std::string type = type_field.get<std::string>();

  auto build = [&]() -> ConvexBody {
    try {
      if (type == "ball") {
        return ConvexBody::ball(vec_from_json(field(j, "center", where), where + "/center"),
                                number(field(j, "radius", where), where + "/radius"));
      }
      if (type == "hpoly") {
        const json& hs = field(j, "halfspaces", where);
        if (!hs.is_array()) throw SchemaError(where + "/halfspaces", "expected an array");
        std::vector<Hyperplane> planes;
        for (std::size_t i = 0; i < hs.size(); ++i) {
          const std::string w = where + "/halfspaces/" + std::to_string(i);
          planes.emplace_back(vec_from_json(field(hs[i], "normal", w), w + "/normal"),
                              number(field(hs[i], "offset", w), w + "/offset"));
        }
        return ConvexBody::hpolyhedron(std::move(planes));
      }
      if (type == "box") {
        return ConvexBody::box(vec_from_json(field(j, "lo", where), where + "/lo"),
                               vec_from_json(field(j, "hi", where), where + "/hi"));
      }
      if (type == "vpoly") {
        return ConvexBody::vpolytope(vec_list(field(j, "vertices", where), where + "/vertices"));
      }
      if (type == "hullrays") {
        auto points = vec_list(field(j, "points", where), where + "/points");
        std::vector<Vec> rays;
        std::vector<int> origins;
        if (j.contains("rays")) {
          const json& rs = j.at("rays");
          if (!rs.is_array()) throw SchemaError(where + "/rays", "expected an array");
          for (std::size_t i = 0; i < rs.size(); ++i) {
            const std::string w = where + "/rays/" + std::to_string(i);
            if (rs[i].is_object()) {
              rays.push_back(vec_from_json(field(rs[i], "dir", w), w + "/dir"));
              const json& o = field(rs[i], "origin", w);
              if (!o.is_number_integer()) throw SchemaError(w + "/origin", "expected an integer index");
              origins.push_back(o.get<int>());
            } else {
              rays.push_back(vec_from_json(rs[i], w));
            }
          }
          if (!origins.empty() && origins.size() != rays.size())
            throw SchemaError(where + "/rays", "either every ray or no ray carries an origin");
        }
        return ConvexBody::hull_rays(std::move(points), std::move(rays), std::move(origins));
      }
      if (type == "sum") {
        return ConvexBody::minkowski_sum(body_from_json(field(j, "left", where), where + "/left"),
                                         body_from_json(field(j, "right", where), where + "/right"));
      }
      if (type == "hull") {
        return ConvexBody::convex_hull(body_from_json(field(j, "left", where), where + "/left"),
                                       body_from_json(field(j, "right", where), where + "/right"));
      }
      if (type == "negate") {
        return ConvexBody::negate(body_from_json(field(j, "body", where), where + "/body"));
      }
      if (type == "scale") {
        return ConvexBody::scale(body_from_json(field(j, "body", where), where + "/body"),
                                 number(field(j, "factor", where), where + "/factor"));
      }
      if (type == "parabola") {
        const json& d = field(j, "dim", where);
        if (!d.is_number_integer()) throw SchemaError(where + "/dim", "expected an integer");
        const double c = j.contains("curvature") ? number(j.at("curvature"), where + "/curvature") : 1.0;
        return ConvexBody::parabolic_epigraph(d.get<int>(), c);
      }
    } catch (const std::invalid_argument& e) {
      throw SchemaError(where.empty() ? "/" : where, e.what());
    }
    throw SchemaError(where + "/type", "unknown body type '" + type + "'");
  };

  ConvexBody body = build();
  if (j.contains("open")) {
    if (!j.at("open").is_boolean()) throw SchemaError(where + "/open", "expected a boolean");
    body = body.with_open(j.at("open").get<bool>());
  }
  return body;
}

json body_to_json(const ConvexBody& body) {
  const BodyNode& n = body.node();
  json out;
  out["type"] = to_string(n.kind);
  switch (n.kind) {
    case BodyKind::Ball:
      out["center"] = vec_to_json(n.ball.center);
      out["radius"] = n.ball.radius;
      break;
    case BodyKind::HPolyhedron: {
      json hs = json::array();
      for (const auto& h : n.hpoly.halfspaces) hs.push_back({{"normal", vec_to_json(h.normal())}, {"offset", h.offset()}});
      out["halfspaces"] = hs;
      break;
    }
    case BodyKind::VPolytope: {
      json vs = json::array();
      for (const auto& v : n.vpoly.vertices) vs.push_back(vec_to_json(v));
      out["vertices"] = vs;
      break;
    }
    case BodyKind::HullRays: {
      json ps = json::array(), rs = json::array();
      for (const auto& p : n.hull_rays.points) ps.push_back(vec_to_json(p));
      for (std::size_t i = 0; i < n.hull_rays.rays.size(); ++i) {
        if (n.hull_rays.ray_origins.empty())
          rs.push_back(vec_to_json(n.hull_rays.rays[i]));
        else
          rs.push_back({{"origin", n.hull_rays.ray_origins[i]}, {"dir", vec_to_json(n.hull_rays.rays[i])}});
      }
      out["points"] = ps;
      out["rays"] = rs;
      break;
    }
    case BodyKind::MinkowskiSum:
    case BodyKind::Hull:
      out["left"] = body_to_json(n.children[0]);
      out["right"] = body_to_json(n.children[1]);
      break;
    case BodyKind::Negate:
      out["body"] = body_to_json(n.children[0]);
      break;
    case BodyKind::Scale:
      out["body"] = body_to_json(n.children[0]);
      out["factor"] = n.factor;
      break;
    case BodyKind::ParabolicEpigraph:
      out["dim"] = n.dim;
      out["curvature"] = n.factor;
      break;
  }
  if (body.is_open()) out["open"] = true;
  return out;
}

ConvexBody load_body(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open body file " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError(path, std::string("malformed JSON: ") + e.what());
  }
  return body_from_json(j, "");
}

Vec parse_point(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      vals.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw SchemaError("--point", "malformed coordinate '" + item + "'");
    }
  }
  if (vals.empty()) throw SchemaError("--point", "empty point");
  return Eigen::Map<Vec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

}  // namespace nehari
