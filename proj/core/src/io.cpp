#include "expanderlab/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "expanderlab/error.hpp"
#include "json.hpp"

namespace expanderlab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::InvalidInput, std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

ShootingConfig parse_config(const json& j) {
  ShootingConfig c;
  c.d0 = require(j, "d0").get<double>();
  c.theta0 = require(j, "theta0").get<double>();
  c.s_max = require(j, "s_max").get<double>();
  c.ds = require(j, "ds").get<double>();
  c.tol_residual = require(j, "tol_residual").get<double>();
  c.integrator_order = require(j, "integrator_order").get<int>();
  return c;
}

MemberRole role_from_string(const std::string& s) {
  if (s == "member") return MemberRole::Member;
  if (s == "negative_control") return MemberRole::NegativeControl;
  throw Error(ErrorCode::InvalidInput, "unknown role '" + s + "'");
}

const char* to_string(MemberRole r) { return r == MemberRole::Member ? "member" : "negative_control"; }

}  // namespace

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidInput, "cannot write " + tmp.string());
    out << content;
    if (!out) throw Error(ErrorCode::InvalidInput, "write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidInput, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_config(JsonWriter& w, const ShootingConfig& c) {
  w.begin_object()
      .field("d0", c.d0)
      .field("theta0", c.theta0)
      .field("s_max", c.s_max)
      .field("ds", c.ds)
      .field("tol_residual", c.tol_residual)
      .field("integrator_order", c.integrator_order)
      .end_object();
}

std::string geometry_file_name(const SweepMember& member) { return member.id + ".json"; }

std::string geometry_json(const SweepMember& m) {
  const auto& surface = m.surface;
  JsonWriter w;
  w.begin_object();
  w.field("id", m.id);
  w.field("kind", to_string(surface.kind));
  w.field("member_kind", m.kind);
  w.field("role", to_string(m.role));
  w.field("n", surface.n);
  w.field("ds", surface.profile ? surface.profile->ds() : 0.0);
  w.field("orientation", surface.orientation ? to_string(*surface.orientation) : "unset");
  w.key("config");
  write_config(w, m.config);
  w.key("residual").begin_object().field("max_abs", m.residual_max).end_object();
  w.field("convexity", to_string(m.convexity));
  w.field("cone_angle", m.cone_angle);
  w.key("samples").begin_array();
  if (surface.profile) {
    const auto& p = *surface.profile;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const Vec2 x = p.position(i);
      const Vec2 t = p.tangent(i);
      w.raw("{\"s\": " + format_double(p.s(i)) + ", \"x\": [" + format_double(x.x) + ", " + format_double(x.y) +
            "], \"T\": [" + format_double(t.x) + ", " + format_double(t.y) + "], \"k\": " +
            format_double(p.curvature(i)) + "}");
    }
  }
  w.end_array();
  w.end_object();
  return w.str();
}

SweepMember load_geometry(const fs::path& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, path.string() + ": " + e.what());
  }
  try {
    ExpanderSurface surface;
    surface.kind = surface_kind_from_string(require(j, "kind").get<std::string>());
    surface.n = require(j, "n").get<int>();
    const auto orientation = require(j, "orientation").get<std::string>();
    if (orientation == "unset") {
      surface.orientation.reset();
    } else {
      surface.orientation = orientation_from_string(orientation);
    }
    const auto& samples = require(j, "samples");
    if (!samples.empty()) {
      const double ds = require(j, "ds").get<double>();
      std::vector<Vec2> x, t;
      std::vector<double> k;
      for (const auto& s : samples) {
        const auto& xs = require(s, "x");
        const auto& ts = require(s, "T");
        x.push_back({xs.at(0).get<double>(), xs.at(1).get<double>()});
        t.push_back({ts.at(0).get<double>(), ts.at(1).get<double>()});
        k.push_back(require(s, "k").get<double>());
      }
      surface.profile.emplace(require(samples.at(0), "s").get<double>(), ds, std::move(x), std::move(t), std::move(k));
    }
    validate(surface);
    const std::string id = j.value("id", path.stem().string());
    const std::string member_kind = j.value("member_kind", std::string(to_string(surface.kind)));
    const auto role = role_from_string(j.value("role", std::string("member")));
    const auto config = parse_config(require(j, "config"));
    const int n = surface.n;
    return describe_member(id, member_kind, n, config, role, std::move(surface));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, path.string() + ": " + e.what());
  }
}

SweepEntry sweep_entry(const SweepMember& m, const std::string& file) {
  SweepEntry e;
  e.file = file;
  e.id = m.id;
  e.kind = m.kind;
  e.n = m.n;
  e.role = to_string(m.role);
  e.config = m.config;
  e.residual_max = m.residual_max;
  e.convexity = to_string(m.convexity);
  e.cone_angle = m.cone_angle;
  return e;
}

std::string sweep_json(std::vector<SweepEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.file < b.file; });
  JsonWriter w;
  w.begin_object();
  w.key("members").begin_array();
  for (const auto& e : entries) {
    w.begin_object();
    w.field("file", e.file).field("id", e.id).field("kind", e.kind).field("n", e.n).field("role", e.role);
    w.key("config");
    write_config(w, e.config);
    w.key("residual").begin_object().field("max_abs", e.residual_max).end_object();
    w.field("convexity", e.convexity).field("cone_angle", e.cone_angle);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str();
}

std::vector<SweepEntry> load_sweep(const fs::path& path) {
  std::vector<SweepEntry> out;
  try {
    const auto j = json::parse(read_file(path));
    for (const auto& m : require(j, "members")) {
      SweepEntry e;
      e.file = require(m, "file").get<std::string>();
      e.id = require(m, "id").get<std::string>();
      e.kind = require(m, "kind").get<std::string>();
      e.n = require(m, "n").get<int>();
      e.role = require(m, "role").get<std::string>();
      e.config = parse_config(require(m, "config"));
      e.residual_max = require(require(m, "residual"), "max_abs").get<double>();
      e.convexity = require(m, "convexity").get<std::string>();
      const auto& cone = require(m, "cone_angle");
      e.cone_angle = cone.is_null() ? 0.0 : cone.get<double>();
      out.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidInput, path.string() + ": " + e.what());
  }
  return out;
}

std::vector<SweepEntry> merge_sweep(std::vector<SweepEntry> existing, const std::vector<SweepEntry>& added) {
  for (const auto& a : added) {
    auto it = std::find_if(existing.begin(), existing.end(), [&](const auto& e) { return e.file == a.file; });
    if (it != existing.end()) {
      *it = a;
    } else {
      existing.push_back(a);
    }
  }
  return existing;
}

std::vector<SweepMember> load_sweep_members(const fs::path& path) {
  const auto base = path.parent_path();
  std::vector<SweepMember> out;
  for (const auto& e : load_sweep(path)) out.push_back(load_geometry(base / e.file));
  return out;
}

std::string spectrum_json(const SpectrumResult& r, const SpectrumMeta& meta) {
  JsonWriter w;
  w.begin_object();
  w.field("convention", "rayleigh");
  w.key("eigenvalues").numbers(r.eigenvalues);
  w.field("grid_size", r.grid_size);
  w.field("domain_radius", r.domain_radius);
  w.field("bc", to_string(r.bc));
  w.key("richardson").numbers(r.richardson);
  w.key("operator_eigenvalues").numbers(r.operator_eigenvalues);
  w.field("operator_convention", "L u = s u");
  w.field("m", r.m);
  w.field("operator", to_string(meta.kind));
  w.field("input", meta.input);
  w.field("surface_id", meta.surface_id);
  w.field("surface_kind", meta.surface_kind);
  w.field("n", meta.n);
  w.end_object();
  return w.str();
}

std::string eigenvector_csv(const SpectrumResult& r) {
  std::string out = "s";
  for (std::size_t j = 0; j < r.eigenvectors.size(); ++j) out += ",psi_" + std::to_string(j + 1);
  out += '\n';
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    out += format_double(r.grid[i]);
    for (const auto& v : r.eigenvectors) out += "," + format_double(v[i]);
    out += '\n';
  }
  return out;
}

}  // namespace expanderlab
