#include "mstokes/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mstokes/errors.hpp"

namespace mstokes {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace((unsigned char)s[a])) ++a;
  while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

double to_double(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t used = 0;
    double x = std::stod(v, &used);
    if (used != v.size()) fail(line, "field `" + key + "` has trailing characters: " + v);
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "field `" + key + "` is not a number: " + v);
  }
}

int to_int(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t used = 0;
    int x = std::stoi(v, &used);
    if (used != v.size()) fail(line, "field `" + key + "` has trailing characters: " + v);
    return x;
  } catch (const ConfigError&) {
    throw;
  } catch (...) {
    fail(line, "field `" + key + "` is not an integer: " + v);
  }
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

SimConfig parse_config_text(const std::string& text) {
  SimConfig cfg;
  bool seen_nu = false;
  std::string sec;
  Colloid* col = nullptr;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(lineno, "unterminated section header");
      sec = trim(line.substr(1, line.size() - 2));
      if (sec == "colloid") {
        cfg.geom.colloids.emplace_back();
        col = &cfg.geom.colloids.back();
      } else if (sec == "notch") {
        cfg.geom.notch.enabled = true;
        col = nullptr;
      } else {
        col = nullptr;
      }
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string::npos) fail(lineno, "expected `key = value`, got: " + line);
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty()) fail(lineno, "empty key or value");

    if (sec == "fluid") {
      if (key == "nu") {
        cfg.nu = to_double(val, key, lineno);
        seen_nu = true;
      } else if (key == "order") {
        cfg.order = to_int(val, key, lineno);
      } else {
        fail(lineno, "unknown field `" + key + "` in [fluid]");
      }
    } else if (sec == "domain") {
      if (key == "shape") {
        if (val == "rect")
          cfg.geom.outer = Geometry::Outer::Rect;
        else if (val == "disk")
          cfg.geom.outer = Geometry::Outer::Disk;
        else
          fail(lineno, "field `shape` must be rect or disk");
      } else if (key == "x0") {
        cfg.geom.lo.x = to_double(val, key, lineno);
      } else if (key == "y0") {
        cfg.geom.lo.y = to_double(val, key, lineno);
      } else if (key == "length") {
        cfg.geom.length = to_double(val, key, lineno);
      } else if (key == "height") {
        cfg.geom.height = to_double(val, key, lineno);
      } else if (key == "cx") {
        cfg.geom.disk_center.x = to_double(val, key, lineno);
      } else if (key == "cy") {
        cfg.geom.disk_center.y = to_double(val, key, lineno);
      } else if (key == "radius") {
        cfg.geom.disk_radius = to_double(val, key, lineno);
      } else if (key == "omega") {
        cfg.wall_omega = to_double(val, key, lineno);
      } else {
        fail(lineno, "unknown field `" + key + "` in [domain]");
      }
    } else if (sec == "notch") {
      if (key == "x0")
        cfg.geom.notch.x0 = to_double(val, key, lineno);
      else if (key == "x1")
        cfg.geom.notch.x1 = to_double(val, key, lineno);
      else if (key == "depth")
        cfg.geom.notch.depth = to_double(val, key, lineno);
      else
        fail(lineno, "unknown field `" + key + "` in [notch]");
    } else if (sec == "refine") {
      if (key == "dx")
        cfg.refine.dx_inf = to_double(val, key, lineno);
      else if (key == "levels")
        cfg.refine.levels = to_int(val, key, lineno);
      else if (key == "layers")
        cfg.refine.layers = to_int(val, key, lineno);
      else
        fail(lineno, "unknown field `" + key + "` in [refine]");
    } else if (sec == "flow") {
      if (key == "kind") {
        if (val == "none")
          cfg.flow = FlowKind::None;
        else if (val == "poiseuille")
          cfg.flow = FlowKind::Poiseuille;
        else if (val == "couette")
          cfg.flow = FlowKind::Couette;
        else if (val == "manufactured")
          cfg.flow = FlowKind::Manufactured;
        else
          fail(lineno, "field `kind` must be none|poiseuille|couette|manufactured");
      } else if (key == "u") {
        cfg.flow_u = to_double(val, key, lineno);
      } else if (key == "gamma") {
        cfg.flow_gamma = to_double(val, key, lineno);
      } else {
        fail(lineno, "unknown field `" + key + "` in [flow]");
      }
    } else if (sec == "colloid") {
      if (!col) fail(lineno, "colloid field outside a [colloid] section");
      if (key == "shape") {
        if (val == "disk")
          col->shape = ColloidShape::Disk;
        else if (val == "square")
          col->shape = ColloidShape::Square;
        else
          fail(lineno, "field `shape` must be disk or square");
      } else if (key == "size") {
        col->size = to_double(val, key, lineno);
      } else if (key == "x") {
        col->pos.x = to_double(val, key, lineno);
      } else if (key == "y") {
        col->pos.y = to_double(val, key, lineno);
      } else if (key == "theta") {
        col->theta = to_double(val, key, lineno);
      } else if (key == "mode") {
        if (val == "free")
          col->free = true;
        else if (val == "prescribed")
          col->free = false;
        else
          fail(lineno, "field `mode` must be free or prescribed");
      } else if (key == "vx") {
        col->vel.x = to_double(val, key, lineno);
      } else if (key == "vy") {
        col->vel.y = to_double(val, key, lineno);
      } else if (key == "omega") {
        col->omega = to_double(val, key, lineno);
      } else {
        fail(lineno, "unknown field `" + key + "` in [colloid]");
      }
    } else if (sec == "time") {
      if (key == "dt") {
        cfg.dt = to_double(val, key, lineno);
      } else if (key == "steps") {
        cfg.steps = to_int(val, key, lineno);
      } else if (key == "scheme") {
        if (val == "ab2")
          cfg.scheme = SchemeKind::Ab2Trapezoid;
        else if (val == "moulton")
          cfg.scheme = SchemeKind::MoultonPC;
        else
          fail(lineno, "field `scheme` must be ab2 or moulton");
      } else {
        fail(lineno, "unknown field `" + key + "` in [time]");
      }
    } else if (sec == "solver") {
      if (key == "tol")
        cfg.lin_tol = to_double(val, key, lineno);
      else if (key == "max_iter")
        cfg.max_iter = to_int(val, key, lineno);
      else if (key == "restart")
        cfg.restart = to_int(val, key, lineno);
      else
        fail(lineno, "unknown field `" + key + "` in [solver]");
    } else if (sec == "output") {
      if (key == "dir")
        cfg.out_dir = val;
      else
        fail(lineno, "unknown field `" + key + "` in [output]");
    } else if (sec.empty()) {
      fail(lineno, "field `" + key + "` appears before any section");
    } else {
      fail(lineno, "unknown section [" + sec + "]");
    }
  }

  if (!seen_nu) throw ConfigError("missing required field `nu` in [fluid]");
  if (!(cfg.nu > 0.0)) throw ConfigError("field `nu` must be positive");
  if (cfg.order < 1 || cfg.order > 6) throw ConfigError("field `order` must be in 1..6");
  if (!(cfg.refine.dx_inf > 0.0)) throw ConfigError("field `dx` must be positive");
  if (cfg.refine.levels < 1) throw ConfigError("field `levels` must be >= 1");
  if (cfg.refine.layers < 1) throw ConfigError("field `layers` must be >= 1");
  if (!(cfg.dt > 0.0)) throw ConfigError("field `dt` must be positive");
  if (cfg.steps < 0) throw ConfigError("field `steps` must be >= 0");
  if (!(cfg.lin_tol > 0.0)) throw ConfigError("field `tol` must be positive");
  for (const Colloid& c : cfg.geom.colloids)
    if (!(c.size > 0.0)) throw ConfigError("field `size` must be positive for every colloid");
  return cfg;
}

SimConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream body;
  body << in.rdbuf();
  return parse_config_text(body.str());
}

std::string emit_config(const SimConfig& cfg) {
  std::ostringstream o;
  o << "[fluid]\n";
  o << "nu = " << fmt(cfg.nu) << "\n";
  o << "order = " << cfg.order << "\n\n";

  o << "[domain]\n";
  if (cfg.geom.outer == Geometry::Outer::Rect) {
    o << "shape = rect\n";
    o << "x0 = " << fmt(cfg.geom.lo.x) << "\n";
    o << "y0 = " << fmt(cfg.geom.lo.y) << "\n";
    o << "length = " << fmt(cfg.geom.length) << "\n";
    o << "height = " << fmt(cfg.geom.height) << "\n";
  } else {
    o << "shape = disk\n";
    o << "cx = " << fmt(cfg.geom.disk_center.x) << "\n";
    o << "cy = " << fmt(cfg.geom.disk_center.y) << "\n";
    o << "radius = " << fmt(cfg.geom.disk_radius) << "\n";
  }
  if (cfg.wall_omega != 0.0) o << "omega = " << fmt(cfg.wall_omega) << "\n";
  o << "\n";

  if (cfg.geom.notch.enabled) {
    o << "[notch]\n";
    o << "x0 = " << fmt(cfg.geom.notch.x0) << "\n";
    o << "x1 = " << fmt(cfg.geom.notch.x1) << "\n";
    o << "depth = " << fmt(cfg.geom.notch.depth) << "\n\n";
  }

  o << "[refine]\n";
  o << "dx = " << fmt(cfg.refine.dx_inf) << "\n";
  o << "levels = " << cfg.refine.levels << "\n";
  o << "layers = " << cfg.refine.layers << "\n\n";

  o << "[flow]\n";
  o << "kind = ";
  switch (cfg.flow) {
    case FlowKind::None: o << "none"; break;
    case FlowKind::Poiseuille: o << "poiseuille"; break;
    case FlowKind::Couette: o << "couette"; break;
    case FlowKind::Manufactured: o << "manufactured"; break;
  }
  o << "\n";
  o << "u = " << fmt(cfg.flow_u) << "\n";
  o << "gamma = " << fmt(cfg.flow_gamma) << "\n\n";

  for (const Colloid& c : cfg.geom.colloids) {
    o << "[colloid]\n";
    o << "shape = " << (c.shape == ColloidShape::Disk ? "disk" : "square") << "\n";
    o << "size = " << fmt(c.size) << "\n";
    o << "x = " << fmt(c.pos.x) << "\n";
    o << "y = " << fmt(c.pos.y) << "\n";
    o << "theta = " << fmt(c.theta) << "\n";
    o << "mode = " << (c.free ? "free" : "prescribed") << "\n";
    o << "vx = " << fmt(c.vel.x) << "\n";
    o << "vy = " << fmt(c.vel.y) << "\n";
    o << "omega = " << fmt(c.omega) << "\n\n";
  }

  o << "[time]\n";
  o << "dt = " << fmt(cfg.dt) << "\n";
  o << "steps = " << cfg.steps << "\n";
  o << "scheme = " << (cfg.scheme == SchemeKind::Ab2Trapezoid ? "ab2" : "moulton") << "\n\n";

  o << "[solver]\n";
  o << "tol = " << fmt(cfg.lin_tol) << "\n";
  o << "max_iter = " << cfg.max_iter << "\n";
  o << "restart = " << cfg.restart << "\n\n";

  o << "[output]\n";
  o << "dir = " << cfg.out_dir << "\n";
  return o.str();
}

}  // namespace mstokes
