#include "expanderlab_cli/commands.hpp"

#include <filesystem>
#include <numbers>
#include <optional>

#include "CLI11.hpp"
#include "expanderlab/error.hpp"
#include "expanderlab/generators.hpp"
#include "expanderlab/hermite.hpp"
#include "expanderlab/io.hpp"
#include "expanderlab/json_writer.hpp"
#include "expanderlab/spectral.hpp"
#include "expanderlab/verify.hpp"
#include "expanderlab_cli/svg.hpp"

namespace expanderlab::cli {

namespace fs = std::filesystem;

namespace {

struct GlobalOptions {
  std::string out = ".";
  int threads = 1;
  double ds = 1e-3;
  std::size_t grid = 4001;
  double radius = 12.0;
};

struct GenerateOptions {
  std::string kind;
  int n = 2;
  double d0 = 1.0;
  double theta0 = std::numbers::pi / 2;
  double s_max = 20.0;
  double cap_height = 1.0;
  std::string start = "cap";
  int integrator_order = 4;
  double tol_residual = 1e-6;
  bool negative_controls = false;
};

struct SpectrumOptionsCli {
  std::string input;
  std::string op = "drift";
  std::size_t m = 5;
  bool csv = false;
  bool svg = false;
};

struct VerifyOptionsCli {
  bool default_sweep = false;
  std::string input;
  std::vector<std::string> theorems;
  bool negative_controls = false;
};

struct HermiteOptions {
  int n = 1;
  int max_order = 4;
};

fs::path resolve(const GlobalOptions& g, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : fs::path(g.out) / path;
}

void write_members(const GlobalOptions& g, const std::vector<SweepMember>& members, std::ostream& out) {
  const fs::path dir(g.out);
  std::vector<SweepEntry> added;
  for (const auto& m : members) {
    const auto file = geometry_file_name(m);
    write_file_atomic(dir / file, geometry_json(m));
    added.push_back(sweep_entry(m, file));
    out << "wrote " << (dir / file).string() << " (max residual " << format_double(m.residual_max) << ")\n";
  }
  const auto index = dir / "sweep.json";
  std::vector<SweepEntry> existing;
  if (fs::exists(index)) existing = load_sweep(index);
  write_file_atomic(index, sweep_json(merge_sweep(std::move(existing), added)));
}

int cmd_generate(const GlobalOptions& g, const GenerateOptions& o, std::ostream& out, std::ostream& err) {
  try {
    ShootingConfig config;
    config.d0 = o.d0;
    config.theta0 = o.theta0;
    config.s_max = o.s_max;
    config.ds = g.ds;
    config.tol_residual = o.tol_residual;
    config.integrator_order = o.integrator_order;

    std::vector<SweepMember> members;
    if (o.kind == "hyperplane") {
      members.push_back(describe_member(member_id("hyperplane", o.n, config), "hyperplane", o.n, config,
                                        MemberRole::Member, make_hyperplane(o.n)));
    } else if (o.kind == "curve") {
      auto curve = shoot_expander_curve(config);
      members.push_back(describe_member(member_id("curve", o.n, config), "curve", o.n, config, MemberRole::Member,
                                        make_curve_cylinder(std::move(curve), o.n)));
    } else if (o.kind == "rotational") {
      if (o.start == "cap") {
        config.d0 = o.cap_height;
        config.theta0 = std::numbers::pi / 2;
        members.push_back(describe_member(member_id("rotational", o.n, config), "rotational", o.n, config,
                                          MemberRole::Member,
                                          shoot_rotational_expander(config, o.n, RotationalStart::Cap)));
      } else {
        members.push_back(describe_member(member_id("rotational_offaxis", o.n, config), "rotational", o.n, config,
                                          MemberRole::Member,
                                          shoot_rotational_expander(config, o.n, RotationalStart::OffAxis)));
      }
    } else {
      SweepSpec spec;
      spec.ds = g.ds;
      spec.s_max = o.s_max;
      spec.include_negative_controls = o.negative_controls;
      members = generate_sweep(spec, g.threads);
    }
    write_members(g, members, out);
    return kExitOk;
  } catch (const Error& e) {
    err << "generate: " << e.what() << "\n";
    return e.code() == ErrorCode::InvalidInput ? kExitUsage : kExitGeneration;
  } catch (const std::exception& e) {
    err << "generate: " << e.what() << "\n";
    return kExitGeneration;
  }
}

int cmd_spectrum(const GlobalOptions& g, const SpectrumOptionsCli& o, std::ostream& out, std::ostream& err) {
  const auto input = resolve(g, o.input);
  SweepMember member;
  PotentialKind kind{};
  try {
    kind = potential_kind_from_string(o.op);
    member = load_geometry(input);
  } catch (const std::exception& e) {
    err << "spectrum: " << e.what() << "\n";
    return kExitUsage;
  }
  try {
    const auto op = ground_state_transform(member.surface, kind, GridOptions{g.grid, g.radius});
    const auto result = bottom_spectrum(op, o.m);
    SpectrumMeta meta{input.filename().string(), member.id, to_string(member.surface.kind), member.surface.n, kind};
    const fs::path dir(g.out);
    const std::string stem = member.id + "_" + o.op;
    write_file_atomic(dir / (stem + ".spectrum.json"), spectrum_json(result, meta));
    if (o.csv) write_file_atomic(dir / (stem + ".eigenvectors.csv"), eigenvector_csv(result));
    if (o.svg) write_file_atomic(dir / (stem + ".svg"), spectrum_plot_svg(op, result, member.id + " (" + o.op + ")"));
    for (std::size_t i = 0; i < result.eigenvalues.size(); ++i) {
      out << format_double(result.eigenvalues[i]) << "  (richardson " << format_double(result.richardson[i]) << ")\n";
    }
    out << "wrote " << (dir / (stem + ".spectrum.json")).string() << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "spectrum: " << e.what() << "\n";
    return e.code() == ErrorCode::InvalidInput ? kExitUsage : kExitSpectral;
  } catch (const std::exception& e) {
    err << "spectrum: " << e.what() << "\n";
    return kExitSpectral;
  }
}

int cmd_verify(const GlobalOptions& g, const VerifyOptionsCli& o, std::ostream& out, std::ostream& err) {
  if (o.default_sweep == !o.input.empty()) {
    err << "verify: give exactly one of --default-sweep or --input\n";
    return kExitUsage;
  }
  VerifyOptions options;
  options.grid = {g.grid, g.radius};
  options.threads = g.threads;
  try {
    for (const auto& t : o.theorems) options.checks.push_back(resolve_check_name(t));
  } catch (const std::exception& e) {
    err << "verify: " << e.what() << "\n";
    return kExitUsage;
  }

  std::vector<SweepMember> members;
  if (o.default_sweep) {
    try {
      SweepSpec spec;
      spec.ds = g.ds;
      spec.include_negative_controls = o.negative_controls;
      members = generate_sweep(spec, g.threads);
    } catch (const std::exception& e) {
      err << "verify: " << e.what() << "\n";
      return kExitGeneration;
    }
  } else {
    try {
      members = load_sweep_members(resolve(g, o.input));
    } catch (const std::exception& e) {
      err << "verify: " << e.what() << "\n";
      return kExitUsage;
    }
    if (o.negative_controls) {
      try {
        for (auto& c : negative_controls(g.ds)) members.push_back(std::move(c));
      } catch (const std::exception& e) {
        err << "verify: " << e.what() << "\n";
        return kExitGeneration;
      }
    }
  }

  const auto report = run_full_suite(members, options);
  const fs::path dir(g.out);
  write_file_atomic(dir / "report.json", report_json(report));
  write_file_atomic(dir / "report.md", report_markdown(report));
  out << report.checks.size() << " checks, " << report.unexpected() << " unexpected outcomes\n";
  for (const auto& c : report.checks) {
    if (!c.ok()) out << "FAILED " << c.surface << " " << c.name << ": " << c.note << "\n";
  }
  out << "wrote " << (dir / "report.json").string() << "\n";
  return report.all_ok() ? kExitOk : kExitVerification;
}

int cmd_hermite(const GlobalOptions& g, const HermiteOptions& o, bool write_file, std::ostream& out,
                std::ostream& err) {
  try {
    const auto indices = multi_indices(o.n, o.max_order);
    const auto op = ground_state_transform(make_hyperplane(1), PotentialKind::DriftOnly, GridOptions{g.grid, g.radius});
    const auto one_d = bottom_spectrum(op, static_cast<std::size_t>(o.max_order) + 1).eigenvalues;

    std::string csv;
    for (int i = 0; i < o.n; ++i) csv += "k" + std::to_string(i + 1) + ",";
    csv += "exact,numeric,difference\n";
    for (const auto& k : indices) {
      double numeric = 0.0;
      for (int v : k) numeric += one_d[static_cast<std::size_t>(v)];
      const double exact = hermite_eigenvalue(o.n, k);
      for (int v : k) csv += std::to_string(v) + ",";
      csv += format_double(exact) + "," + format_double(numeric) + "," + format_double(numeric - exact) + "\n";
    }
    out << csv;
    if (write_file) {
      write_file_atomic(fs::path(g.out) / ("hermite_n" + std::to_string(o.n) + ".csv"), csv);
    }
    return kExitOk;
  } catch (const Error& e) {
    err << "hermite: " << e.what() << "\n";
    return e.code() == ErrorCode::InvalidInput ? kExitUsage : kExitSpectral;
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Self-expander geometry, weighted spectra and verification"};
  app.name("expanderlab");
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions g;
  app.add_option("--out", g.out, "Output directory; relative inputs resolve against it");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_option("--ds", g.ds, "Arclength step")->check(CLI::PositiveNumber);
  app.add_option("--grid", g.grid, "Spectral grid size")->check(CLI::Range(std::size_t{101}, std::size_t{1} << 24));
  app.add_option("--radius", g.radius, "Spectral domain radius")->check(CLI::PositiveNumber);

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "Shoot expanders and write geometry files");
  generate->add_option("--kind", gen.kind, "hyperplane | curve | rotational | sweep")
      ->required()
      ->check(CLI::IsMember({"hyperplane", "curve", "rotational", "sweep"}));
  generate->add_option("--n", gen.n, "Hypersurface dimension")->check(CLI::Range(1, 64));
  generate->add_option("--d0", gen.d0, "Start distance (curve) or start radius (off-axis rotational)");
  generate->add_option("--theta0", gen.theta0, "Start tangent angle");
  generate->add_option("--smax", gen.s_max, "Arclength to integrate on each side")->check(CLI::PositiveNumber);
  generate->add_option("--cap-height", gen.cap_height, "Pole height of a rotational cap");
  generate->add_option("--start", gen.start, "Rotational start: cap | off-axis")
      ->check(CLI::IsMember({"cap", "off-axis"}));
  generate->add_option("--integrator-order", gen.integrator_order, "2 (midpoint) or 4 (classical)")
      ->check(CLI::IsMember({2, 4}));
  generate->add_option("--tol-residual", gen.tol_residual, "Acceptance tolerance")->check(CLI::PositiveNumber);
  generate->add_flag("--include-negative-controls", gen.negative_controls, "Add the designed non-expanders (sweep)");

  SpectrumOptionsCli spec;
  auto* spectrum = app.add_subcommand("spectrum", "Bottom of the spectrum of a geometry file");
  spectrum->add_option("--input", spec.input, "Geometry JSON")->required();
  spectrum->add_option("--operator", spec.op, "drift | stability")->check(CLI::IsMember({"drift", "stability"}));
  spectrum->add_option("--m", spec.m, "Number of eigenvalues")->check(CLI::Range(std::size_t{1}, std::size_t{1000}));
  spectrum->add_flag("--emit-csv", spec.csv, "Write eigenvectors as CSV");
  spectrum->add_flag("--emit-svg", spec.svg, "Write a plot of V and the first eigenfunction");

  VerifyOptionsCli ver;
  auto* verify = app.add_subcommand("verify", "Run the checks and write report.json / report.md");
  verify->add_flag("--default-sweep", ver.default_sweep, "Generate and verify the default sweep");
  verify->add_option("--input", ver.input, "sweep.json index");
  verify->add_option("--theorem", ver.theorems, "Restrict to checks (repeatable)");
  verify->add_flag("--include-negative-controls", ver.negative_controls, "Add the designed non-expanders");

  HermiteOptions her;
  auto* hermite = app.add_subcommand("hermite", "Exact and numerical Hermite eigenvalues on R^n");
  hermite->add_option("--n", her.n, "Dimension")->check(CLI::Range(1, 16));
  hermite->add_option("--max-order", her.max_order, "Largest |k|")->check(CLI::Range(0, 64));

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("expanderlab");
  for (const auto& a : args) argv_storage.push_back(a);
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*generate) return cmd_generate(g, gen, out, err);
  if (*spectrum) return cmd_spectrum(g, spec, out, err);
  if (*verify) return cmd_verify(g, ver, out, err);
  return cmd_hermite(g, her, app.count("--out") > 0, out, err);
}

}  // namespace expanderlab::cli
