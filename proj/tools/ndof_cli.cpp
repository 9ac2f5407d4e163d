// ndof: command-line front end to libndof (C API only).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ndof/ndof.h"
#include "table.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using cli::Cell;
using cli::Table;

namespace {

constexpr double kPi = 3.14159265358979323846;

enum Exit { kOk = 0, kUsage = 2, kIo = 3, kNumeric = 4 };

struct CliError {
  int code;
  std::string message;
};

int exit_for(ndof_status s) {
  switch (s) {
    case NDOF_ERR_INVALID_ARGUMENT:
    case NDOF_ERR_KIND_MISMATCH: return kUsage;
    case NDOF_ERR_IO:
    case NDOF_ERR_MALFORMED_FILE: return kIo;
    default: return kNumeric;
  }
}

void check(ndof_status s) {
  if (s != NDOF_OK)
    throw CliError{exit_for(s), std::string(ndof_status_name(s)) + ": " + ndof_last_error()};
}

[[noreturn]] void usage(const std::string& msg) { throw CliError{kUsage, msg}; }

struct SpectrumFree {
  void operator()(ndof_spectrum* p) const { ndof_spectrum_free(p); }
};
struct MeshFree {
  void operator()(ndof_mesh* p) const { ndof_mesh_free(p); }
};
struct ProblemFree {
  void operator()(ndof_problem* p) const { ndof_problem_free(p); }
};
using Spectrum = std::unique_ptr<ndof_spectrum, SpectrumFree>;
using Mesh = std::unique_ptr<ndof_mesh, MeshFree>;
using Problem = std::unique_ptr<ndof_problem, ProblemFree>;

std::vector<double> values_of(const ndof_spectrum* s) {
  std::vector<double> v(ndof_spectrum_size(s));
  if (!v.empty()) check(ndof_spectrum_values(s, v.data(), v.size()));
  return v;
}

// ---- output ----

struct OutputOptions {
  std::string path;  // empty: stdout
  std::string format = "auto";
  std::string dir;   // from --output-dir or NDOF_OUTPUT_DIR

  std::string resolve(const std::string& p) const {
    if (p.empty() || p == "-" || dir.empty() || fs::path(p).is_absolute()) return p;
    return (fs::path(dir) / p).string();
  }
  bool json_for(const std::string& p) const {
    if (format == "json") return true;
    if (format == "csv") return false;
    return fs::path(p).extension() == ".json";
  }
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  const fs::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(p.parent_path(), ec);
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw CliError{kIo, "cannot write '" + path + "'"};
  f << text;
  if (!f) throw CliError{kIo, "write failed for '" + path + "'"};
}

// Primary output: CSV table, or JSON document {summary..., <name>: [rows]}.
void emit(const OutputOptions& out, const Table& table, const json& extra = json::object(),
          const std::string& rows_key = "rows") {
  const std::string path = out.resolve(out.path);
  if (out.json_for(path)) {
    json doc = extra;
    doc[rows_key] = cli::to_json(table);
    write_text(path, doc.dump(2) + "\n");
  } else {
    write_text(path, cli::to_csv(table));
  }
}

// Secondary tables always follow their own file extension (CSV unless .json).
void emit_side(const OutputOptions& out, const std::string& path, const Table& table) {
  if (path.empty()) return;
  const std::string p = out.resolve(path);
  if (fs::path(p).extension() == ".json")
    write_text(p, cli::to_json(table).dump(2) + "\n");
  else
    write_text(p, cli::to_csv(table));
}

// ---- input tables ----

struct NumericTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int column(std::initializer_list<const char*> names) const {
    for (const char* n : names)
      for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == n) return static_cast<int>(i);
    return -1;
  }
};

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',' || c == ' ' || c == '\t' || c == ';' || c == '\r') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

bool parse_double(const std::string& s, double& v) {
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return end && *end == '\0' && end != s.c_str();
}

// Numbers separated by commas or whitespace; '#' starts a comment; a first
// line with non-numeric fields is a header.
NumericTable read_numeric_table(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw CliError{kIo, "cannot open '" + path + "'"};
  NumericTable t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    std::vector<double> row;
    bool numeric = true;
    for (const auto& s : fields) {
      double v;
      if (!parse_double(s, v)) {
        numeric = false;
        break;
      }
      row.push_back(v);
    }
    if (!numeric) {
      if (t.header.empty() && t.rows.empty()) {
        t.header = fields;
        continue;
      }
      throw CliError{kIo, path + ":" + std::to_string(lineno) + ": non-numeric field"};
    }
    if (!t.rows.empty() && row.size() != t.rows.front().size())
      throw CliError{kIo, path + ":" + std::to_string(lineno) + ": inconsistent column count"};
    t.rows.push_back(std::move(row));
  }
  if (t.rows.empty()) throw CliError{kIo, "'" + path + "' holds no data"};
  return t;
}

std::vector<double> column_values(const NumericTable& t, int col) {
  std::vector<double> v;
  for (const auto& r : t.rows) v.push_back(r.at(static_cast<std::size_t>(col)));
  return v;
}

// Eigenvalues from a file: the "rho" column, else "nu" converted, else the
// only (or first) column.
std::vector<double> read_spectrum_values(const std::string& path) {
  const auto t = read_numeric_table(path);
  if (int c = t.column({"rho"}); c >= 0) return column_values(t, c);
  if (int c = t.column({"nu"}); c >= 0) {
    auto nu = column_values(t, c);
    for (double& v : nu) {
      if (!(v >= 0.0 && v < 1.0)) throw CliError{kUsage, "efficiencies must lie in [0, 1)"};
      v = v / (1.0 - v);
    }
    return nu;
  }
  return column_values(t, 0);
}

std::vector<double> read_efficiencies(const std::string& path) {
  const auto t = read_numeric_table(path);
  if (int c = t.column({"nu"}); c >= 0) return column_values(t, c);
  if (int c = t.column({"rho"}); c >= 0) {
    auto rho = column_values(t, c);
    for (double& v : rho) v = v / (1.0 + v);
    return rho;
  }
  return column_values(t, 0);
}

// ---- shared option groups ----

struct ShapeArgs {
  std::string shape;
  std::string mesh;
  ndof_shape_options options{};

  void add(CLI::App* app, bool required) {
    ndof_shape_options_default(&options);
    auto* s = app->add_option("--shape", shape, "Built-in shape (see `ndof mesh --list`)");
    auto* m = app->add_option("--mesh", mesh, "Mesh file (.tri or .obj)");
    s->excludes(m);
    if (required) app->require_option(1, 0);
    app->add_option("--max-edge", options.max_edge, "Edge length of built-in meshes (units of a)")
        ->check(CLI::Range(1e-4, 1.0));
    app->add_option("--xi", options.xi, "Spheroid axis ratio")->check(CLI::Range(0.0, 1.0));
    app->add_option("--side", options.side, "Plate side length")->check(CLI::PositiveNumber);
    app->add_option("--separation", options.separation, "Two-plate separation")
        ->check(CLI::PositiveNumber);
    app->add_option("--plate-cells", options.plate_cells, "Plate grid cells per side")
        ->check(CLI::Range(1, 4096));
  }

  bool given() const { return !shape.empty() || !mesh.empty(); }
  std::string label() const { return shape.empty() ? mesh : shape; }

  Mesh load() const {
    ndof_mesh* m = nullptr;
    if (!shape.empty())
      check(ndof_mesh_builtin(shape.c_str(), &options, &m));
    else if (!mesh.empty())
      check(ndof_mesh_load(mesh.c_str(), &m));
    else
      usage("one of --shape or --mesh is required");
    return Mesh(m);
  }

  // Built-in bodies of revolution get a polar sweep by default.
  bool body_of_revolution() const {
    return !shape.empty() && shape != "plate" && shape != "two-plates";
  }
};

ndof_loss_kind kind_from(const std::string& s) {
  return (s == "volume" || s == "ball") ? NDOF_LOSS_VOLUME : NDOF_LOSS_SURFACE;
}

// ---- sphere ----

struct SphereArgs {
  std::vector<double> ka;
  double loss = 1e-5;
  std::string kind = "shell";
  int lmax = 0;
  std::string spectrum_out;
};

void run_sphere(const SphereArgs& a, const OutputOptions& out) {
  if (a.ka.empty()) usage("--ka needs at least one value");
  const bool ball = a.kind == "ball";

  struct Result {
    Spectrum s;
    ndof_report r;
  };
  // One task per size; results are collected in input order.
  std::vector<std::future<Result>> jobs;
  for (double ka : a.ka)
    jobs.push_back(std::async(std::launch::async, [=] {
      ndof_spectrum* s = nullptr;
      check(ndof_sphere_spectrum(ball, ka, kind_from(a.kind), a.loss, a.lmax, &s));
      Result res{Spectrum(s), {}};
      check(ndof_spectrum_report(s, 1.0, &res.r));
      return res;
    }));
  std::vector<Result> results;
  for (auto& j : jobs) results.push_back(j.get());

  // Overall trend of the normalized count with increasing ka.
  std::vector<std::size_t> order(a.ka.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return a.ka[x] < a.ka[y]; });
  const auto norm = [&](std::size_t i) {
    return double(results[i].r.threshold_count) / (2 * a.ka[i] * a.ka[i]);
  };
  const bool trend = norm(order.back()) <= norm(order.front());

  Table t{{"ka", "kind", "lmax", "total_modes", "ndof_threshold", "ties_at_one", "effective_ndof",
           "sum_efficiencies", "normalized_threshold", "normalized_effective",
           "avg_max_eff_area_over_pi_a2", "last_efficiency", "trend_nonincreasing"},
          {}};
  Table spec{{"ka", "index", "tau", "l", "m", "rho", "nu"}, {}};
  for (std::size_t i = 0; i < results.size(); ++i) {
    const double ka = a.ka[i];
    const auto& r = results[i].r;
    const double a_over_lambda = ka / (2 * kPi);
    const double pia2 = kPi * a_over_lambda * a_over_lambda;
    const int lmax = a.lmax > 0 ? a.lmax : ndof_default_lmax(ka);
    t.add({ka, a.kind, (long long)lmax, (long long)r.total_modes, (long long)r.threshold_count,
           (long long)r.ties_at_one, r.effective, r.sum_of_efficiencies, norm(i),
           r.effective / (2 * ka * ka), r.avg_max_eff_area / pia2, r.last_efficiency,
           (long long)trend});
    if (!a.spectrum_out.empty()) {
      const auto rho = values_of(results[i].s.get());
      for (std::size_t n = 0; n < rho.size(); ++n) {
        int tau = 0, l = 0, m = 0;
        check(ndof_spectrum_label(results[i].s.get(), n, &tau, &l, &m));
        spec.add({ka, (long long)(n + 1), (long long)tau, (long long)l, (long long)m, rho[n],
                  rho[n] / (1 + rho[n])});
      }
    }
  }
  emit(out, t, json{{"kind", a.kind}, {"loss", a.loss}, {"trend_nonincreasing", trend}});
  emit_side(out, a.spectrum_out, spec);
}

// ---- shadow ----

struct ShadowArgs {
  ShapeArgs shape;
  std::size_t directions = 590;
  int resolution = 512;
  std::vector<double> wavelengths{1.0};
  int sweep = -1;  // -1: automatic
  std::string sweep_out;
  std::string directions_out;
};

void run_shadow(const ShadowArgs& a, const OutputOptions& out) {
  const Mesh mesh = a.shape.load();
  ndof_mesh_info info;
  check(ndof_mesh_get_info(mesh.get(), &info));
  std::vector<double> per(a.directions);
  double avg = 0.0;
  check(ndof_average_shadow_area(mesh.get(), a.directions, a.resolution, &avg, per.data()));
  const double A = info.surface_area;

  Table t{{"shape", "triangles", "circumradius", "open_surface", "area", "avg_shadow",
           "total_shadow", "convexity_ratio", "area_over_shadow", "wavelength", "ka",
           "asymptotic_ndof", "weyl_ndof"},
          {}};
  for (double lambda : a.wavelengths) {
    double na = 0.0, weyl = 0.0;
    check(ndof_asymptotic_ndof(avg, lambda, &na));
    check(ndof_weyl_estimate(2, A, lambda, 1, &weyl));
    t.add({a.shape.label(), (long long)info.triangles, info.circumradius,
           (long long)info.open_surface, A, avg, 4 * kPi * avg, 4 * avg / A, A / avg, lambda,
           2 * kPi * info.circumradius / lambda, na, weyl});
  }

  const int n_theta = a.sweep >= 0 ? a.sweep : (a.shape.body_of_revolution() ? 90 : 0);
  Table sweep{{"theta", "theta_deg", "shadow_area"}, {}};
  json extra = json::object();
  if (n_theta > 0) {
    std::vector<double> theta(static_cast<std::size_t>(n_theta)), area(theta.size());
    double sweep_avg = 0.0;
    check(ndof_polar_sweep(mesh.get(), n_theta, a.resolution, theta.data(), area.data(),
                           &sweep_avg));
    for (std::size_t i = 0; i < theta.size(); ++i)
      sweep.add({theta[i], theta[i] * 180.0 / kPi, area[i]});
    extra["sweep_average"] = sweep_avg;
  }
  Table dirs{{"x", "y", "z", "shadow_area"}, {}};
  if (!a.directions_out.empty()) {
    std::vector<double> xyz(3 * a.directions);
    check(ndof_quadrature_directions(a.directions, xyz.data()));
    for (std::size_t i = 0; i < a.directions; ++i)
      dirs.add({xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2], per[i]});
  }

  const std::string path = out.resolve(out.path);
  if (out.json_for(path)) {
    json doc = {{"shape", a.shape.label()},
                {"directions", a.directions},
                {"resolution", a.resolution},
                {"summary", cli::to_json(t)}};
    if (n_theta > 0) {
      doc["sweep_average"] = extra["sweep_average"];
      doc["sweep"] = cli::to_json(sweep);
    }
    write_text(path, doc.dump(2) + "\n");
  } else {
    write_text(path, cli::to_csv(t));
  }
  if (n_theta > 0) emit_side(out, a.sweep_out, sweep);
  emit_side(out, a.directions_out, dirs);
}

// ---- modes ----

struct ModesArgs {
  ShapeArgs shape;
  std::string matrix;
  double wavelength = 1.0;
  double ka = 0.0;
  double density = 16.0;
  double loss = 1e-5;
  std::string kind = "surface";
  int layers = 0;
  int lmax = 0;
  std::string solver = "auto";
  double avg_shadow = 0.0;
  std::size_t directions = 590;
  int resolution = 256;
  std::string save_matrix;
  std::string points_out;
  std::string report_out;
};

void run_modes(const ModesArgs& a, const OutputOptions& out) {
  if (a.matrix.empty() == !a.shape.given())
    usage("give exactly one of --shape, --mesh or --matrix");
  Problem problem;
  double avg_shadow = a.avg_shadow;
  double circumradius = 0.0;
  double wavelength = a.wavelength;
  if (!a.matrix.empty()) {
    ndof_problem* p = nullptr;
    check(ndof_problem_load(a.matrix.c_str(), a.ka, wavelength, &p));
    problem.reset(p);
  } else {
    const Mesh mesh = a.shape.load();
    ndof_mesh_info info;
    check(ndof_mesh_get_info(mesh.get(), &info));
    circumradius = info.circumradius;
    if (a.ka > 0.0) wavelength = 2 * kPi * circumradius / a.ka;
    ndof_discretize_options d;
    ndof_discretize_options_default(&d);
    d.wavelength = wavelength;
    d.density = a.density;
    d.loss_kind = kind_from(a.kind);
    d.loss_value = a.loss;
    d.lmax = a.lmax;
    d.layers = a.layers;
    ndof_problem* p = nullptr;
    check(ndof_problem_from_mesh(mesh.get(), &d, &p));
    problem.reset(p);
    if (avg_shadow <= 0.0)
      check(ndof_average_shadow_area(mesh.get(), a.directions, a.resolution, &avg_shadow, nullptr));
  }
  ndof_problem_info info;
  check(ndof_problem_get_info(problem.get(), &info));
  if (info.low_density)
    std::cerr << "ndof: warning: sampling density " << info.achieved_density
              << " per wavelength^2 is below the recommended minimum of 8\n";
  if (!a.save_matrix.empty()) check(ndof_problem_save(problem.get(), out.resolve(a.save_matrix).c_str()));
  if (!a.points_out.empty())
    check(ndof_problem_write_points(problem.get(), out.resolve(a.points_out).c_str()));

  const ndof_solver solver = a.solver == "dense"      ? NDOF_SOLVER_DENSE
                             : a.solver == "factored" ? NDOF_SOLVER_FACTORED
                                                      : NDOF_SOLVER_AUTO;
  ndof_spectrum* sp = nullptr;
  check(ndof_problem_modes(problem.get(), solver, &sp));
  const Spectrum spectrum(sp);
  ndof_report r;
  check(ndof_spectrum_report(spectrum.get(), wavelength, &r));
  double na = std::nan("");
  if (avg_shadow > 0.0) check(ndof_asymptotic_ndof(avg_shadow, wavelength, &na));

  const auto rho = values_of(spectrum.get());
  Table t{{"index", "rho", "nu", "n_over_Na", "rho_times_loss"}, {}};
  for (std::size_t n = 0; n < rho.size(); ++n)
    t.add({(long long)(n + 1), rho[n], rho[n] / (1 + rho[n]), double(n + 1) / na, rho[n] * a.loss});

  Table rep{{"ka", "wavelength", "unknowns", "points", "lmax", "achieved_density", "low_density",
             "avg_shadow", "asymptotic_ndof", "total_modes", "ndof_threshold", "ties_at_one",
             "effective_ndof", "sum_efficiencies", "avg_max_eff_area", "last_efficiency"},
            {}};
  rep.add({info.ka, wavelength, (long long)info.unknowns, (long long)info.points,
           (long long)info.lmax, info.achieved_density, (long long)info.low_density,
           avg_shadow > 0.0 ? avg_shadow : std::nan(""), na, (long long)r.total_modes,
           (long long)r.threshold_count, (long long)r.ties_at_one, r.effective,
           r.sum_of_efficiencies, r.avg_max_eff_area, r.last_efficiency});
  emit(out, t, json{{"report", cli::to_json(rep).at(0)}}, "modes");
  emit_side(out, a.report_out, rep);
}

// ---- waterfill ----

struct WaterfillArgs {
  std::vector<double> nu;
  std::string nu_file;
  std::vector<double> snr;
  std::string snr_range;
};

std::vector<double> parse_range(const std::string& spec) {
  // lo:hi:n, logarithmically spaced
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string p;
  while (std::getline(ss, p, ':')) parts.push_back(p);
  double lo, hi, n;
  if (parts.size() != 3 || !parse_double(parts[0], lo) || !parse_double(parts[1], hi) ||
      !parse_double(parts[2], n) || n < 1 || n != std::floor(n))
    usage("--snr-range expects lo:hi:n");
  if (!(lo > 0.0 && hi >= lo)) usage("--snr-range needs 0 < lo <= hi");
  std::vector<double> v;
  const int count = static_cast<int>(n);
  for (int i = 0; i < count; ++i)
    v.push_back(count == 1 ? lo : lo * std::pow(hi / lo, double(i) / (count - 1)));
  return v;
}

void run_waterfill(const WaterfillArgs& a, const OutputOptions& out) {
  std::vector<double> nu = a.nu_file.empty() ? a.nu : read_efficiencies(a.nu_file);
  if (nu.empty()) usage("give efficiencies with --nu or --nu-file");
  std::vector<double> grid = a.snr;
  if (!a.snr_range.empty()) {
    const auto r = parse_range(a.snr_range);
    grid.insert(grid.end(), r.begin(), r.end());
  }
  if (grid.empty()) usage("give an SNR grid with --snr or --snr-range");
  for (double g : grid)
    if (!(g > 0.0) || !std::isfinite(g)) usage("SNR values must be positive");

  Table t{{"snr", "capacity_bits", "active_count", "water_level"}, {}};
  for (std::size_t i = 0; i < nu.size(); ++i) t.columns.push_back("p" + std::to_string(i + 1));
  std::vector<double> p(nu.size());
  for (double g : grid) {
    ndof_allocation alloc;
    check(ndof_waterfill(nu.data(), nu.size(), g, p.data(), &alloc));
    std::vector<Cell> row{g, alloc.capacity_bits, (long long)alloc.active_count, alloc.water_level};
    for (double v : p) row.emplace_back(v);
    t.add(std::move(row));
  }
  json nus = json::array();
  for (double v : nu) nus.push_back(v);
  emit(out, t, json{{"efficiencies", nus}});
}

// ---- invsource ----

struct InvsourceArgs {
  std::string spectrum;
  double sphere_ka = 0.0;
  double loss = 1e-5;
  std::string data;
  double noise = 0.0;
  std::uint64_t seed = 1;
  double delta = 1e-6;
  double cutoff = 1.0;
  std::string preset;
  double area = 0.0;
  double avg_shadow = 0.0;
  double wavelength = 1.0;
  std::string summary_out;
};

struct PresetGeometry {
  double area, avg_shadow;
};

// Solid hemisphere and thin bowl of radius a = 1; both project like a
// hemisphere, the bowl exposes both faces of its shell.
PresetGeometry preset_geometry(const std::string& name) {
  if (name == "hemisphere") return {3 * kPi, 0.75 * kPi};
  if (name == "bowl") return {4 * kPi, 0.75 * kPi};
  usage("unknown preset '" + name + "'");
}

std::string two_figures(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2g", v);
  return buf;
}

void run_invsource(const InvsourceArgs& a, const OutputOptions& out) {
  json summary = json::object();
  Table resolution{{"preset", "area", "avg_shadow", "wavelength", "cell_length",
                    "wavelength_over_cell", "resolution", "radiating_fraction"},
                   {}};
  double area = a.area, avg = a.avg_shadow;
  if (!a.preset.empty()) {
    const auto g = preset_geometry(a.preset);
    area = g.area;
    avg = g.avg_shadow;
  }
  if (area > 0.0 || avg > 0.0) {
    ndof_resolution r;
    check(ndof_resolution_estimate(area, avg, a.wavelength, &r));
    char frac[32];
    std::snprintf(frac, sizeof frac, "%.2f", r.radiating_fraction);
    resolution.add({a.preset.empty() ? std::string("custom") : a.preset, area, avg, a.wavelength,
                    r.cell_length, r.wavelength_over_cell,
                    "lambda/" + two_figures(r.wavelength_over_cell), std::string(frac)});
    summary["resolution"] = cli::to_json(resolution).at(0);
  }

  const bool have_spectrum = !a.spectrum.empty() || a.sphere_ka > 0.0;
  if (!have_spectrum) {
    if (resolution.rows.empty())
      usage("give --spectrum, --sphere-ka, --preset or --area/--avg-shadow");
    emit(out, resolution, json::object());
    return;
  }
  if (!a.spectrum.empty() && a.sphere_ka > 0.0) usage("--spectrum and --sphere-ka are exclusive");

  ndof_spectrum* sp = nullptr;
  if (a.sphere_ka > 0.0) {
    check(ndof_sphere_spectrum(0, a.sphere_ka, NDOF_LOSS_SURFACE, a.loss, 0, &sp));
  } else {
    const auto v = read_spectrum_values(a.spectrum);
    check(ndof_spectrum_from_values(v.data(), v.size(), 0.0, a.wavelength, &sp));
  }
  const Spectrum spectrum(sp);
  const auto rho = values_of(spectrum.get());
  const std::size_t n = rho.size();

  std::vector<double> truth, data(2 * n);
  if (!a.data.empty()) {
    const auto t = read_numeric_table(a.data);
    int re = t.column({"real", "re"}), im = t.column({"imag", "im"});
    if (re < 0 || im < 0) {
      const std::size_t cols = t.rows.front().size();
      if (cols < 2) throw CliError{kIo, "data file needs real and imaginary columns"};
      re = cols >= 3 ? 1 : 0;
      im = re + 1;
    }
    if (t.rows.size() != n)
      throw CliError{kNumeric, "dimension-mismatch: data has " + std::to_string(t.rows.size()) +
                                   " coefficients, spectrum has " + std::to_string(n)};
    for (std::size_t i = 0; i < n; ++i) {
      data[2 * i] = t.rows[i][std::size_t(re)];
      data[2 * i + 1] = t.rows[i][std::size_t(im)];
    }
  } else {
    // Synthetic source: unit-variance complex Gaussian mode currents.
    std::mt19937_64 rng(a.seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    truth.resize(2 * n);
    for (double& v : truth) v = g(rng);
    check(ndof_forward(spectrum.get(), truth.data(), a.noise, a.seed, data.data()));
  }

  std::vector<double> tik(2 * n), svd(2 * n);
  ndof_inverse_info ti, si;
  check(ndof_reconstruct(spectrum.get(), data.data(), NDOF_TIKHONOV, a.delta, tik.data(), &ti));
  check(ndof_reconstruct(spectrum.get(), data.data(), NDOF_TRUNCATED_SVD, a.cutoff, svd.data(), &si));
  ndof_report rep;
  check(ndof_spectrum_report(spectrum.get(), a.wavelength, &rep));

  Table t{{"index", "rho", "data_re", "data_im", "tikhonov_re", "tikhonov_im", "svd_re", "svd_im"},
          {}};
  if (!truth.empty()) {
    t.columns.push_back("true_re");
    t.columns.push_back("true_im");
  }
  double err = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Cell> row{(long long)(i + 1), rho[i], data[2 * i], data[2 * i + 1], tik[2 * i],
                          tik[2 * i + 1], svd[2 * i], svd[2 * i + 1]};
    if (!truth.empty()) {
      row.emplace_back(truth[2 * i]);
      row.emplace_back(truth[2 * i + 1]);
      if (rho[i] >= 1.0) {
        err += std::pow(tik[2 * i] - truth[2 * i], 2) + std::pow(tik[2 * i + 1] - truth[2 * i + 1], 2);
        ref += truth[2 * i] * truth[2 * i] + truth[2 * i + 1] * truth[2 * i + 1];
      }
    }
    t.add(std::move(row));
  }
  summary["modes"] = n;
  summary["ndof_threshold"] = rep.threshold_count;
  summary["tikhonov"] = {{"delta", a.delta}, {"residual", ti.residual}, {"penalty", ti.penalty},
                         {"retained", ti.retained}};
  summary["svd"] = {{"cutoff", a.cutoff}, {"residual", si.residual}, {"retained", si.retained}};
  if (!truth.empty()) {
    summary["noise_level"] = a.noise;
    summary["seed"] = a.seed;
    summary["recovery_error_efficient_modes"] = ref > 0.0 ? std::sqrt(err / ref) : 0.0;
  }
  emit(out, t, json{{"summary", summary}}, "solution");
  if (!a.summary_out.empty()) write_text(out.resolve(a.summary_out), summary.dump(2) + "\n");
}

// ---- mesh ----

struct MeshArgs {
  ShapeArgs shape;
  bool list = false;
};

void run_mesh(const MeshArgs& a, const OutputOptions& out) {
  if (a.list) {
    std::string text;
    for (std::size_t i = 0; i < ndof_builtin_shape_count(); ++i)
      text += std::string(ndof_builtin_shape_name(i)) + "\n";
    write_text("", text);
    return;
  }
  if (out.path.empty() || out.path == "-") usage("mesh export needs -o FILE (.tri or .obj)");
  const Mesh mesh = a.shape.load();
  check(ndof_mesh_save(mesh.get(), out.resolve(out.path).c_str()));
  ndof_mesh_info info;
  check(ndof_mesh_get_info(mesh.get(), &info));
  std::cerr << "wrote " << info.vertices << " vertices, " << info.triangles << " triangles\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degrees of freedom of radiating bodies: spherical-mode counts, shadow areas,\n"
               "radiation modes, water-filling capacity and inverse-source reconstruction."};
  app.set_version_flag("--version", std::string("ndof ") + ndof_version());
  app.set_config("--config", "", "Read options from a TOML or INI file");
  app.require_subcommand(1);
  app.fallthrough();

  OutputOptions out;
  app.add_option("-o,--output", out.path, "Output file (default: standard output)");
  app.add_option("--format", out.format, "Output format")
      ->check(CLI::IsMember({"auto", "csv", "json"}));
  app.add_option("--output-dir", out.dir, "Directory for relative output paths")
      ->envname("NDOF_OUTPUT_DIR");

  SphereArgs sphere;
  auto* s = app.add_subcommand("sphere", "NDoF of spherical shells and balls from closed forms");
  s->add_option("--ka", sphere.ka, "Electrical sizes ka (comma separated)")
      ->required()
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  s->add_option("--loss", sphere.loss, "R_s/eta0 (shell) or k rho_r/eta0 (ball)")
      ->check(CLI::PositiveNumber);
  s->add_option("--kind", sphere.kind, "shell or ball")->check(CLI::IsMember({"shell", "ball"}));
  s->add_option("--lmax", sphere.lmax, "Degree truncation (0: automatic)")->check(CLI::NonNegativeNumber);
  s->add_option("--spectrum-out", sphere.spectrum_out, "Per-mode spectra (CSV or .json)");

  ShadowArgs shadow;
  auto* sh = app.add_subcommand("shadow", "Surface area, average shadow area and NDoF estimates");
  shadow.shape.add(sh, true);
  sh->add_option("--directions", shadow.directions, "Fibonacci quadrature size")
      ->check(CLI::Range(1, 100000));
  sh->add_option("--resolution", shadow.resolution, "Raster pixels per circumradius")
      ->check(CLI::Range(64, 8192));
  sh->add_option("--wavelength", shadow.wavelengths, "Wavelengths for the NDoF estimates")
      ->delimiter(',')
      ->check(CLI::PositiveNumber);
  sh->add_option("--sweep", shadow.sweep, "Polar sweep points (0: off; default 90 for built-in "
                                          "bodies of revolution)")
      ->check(CLI::Range(0, 100000));
  sh->add_option("--sweep-out", shadow.sweep_out, "Polar sweep table (CSV or .json)");
  sh->add_option("--directions-out", shadow.directions_out, "Per-direction shadow areas");

  ModesArgs modes;
  auto* m = app.add_subcommand("modes", "Radiation modes of a discretized body or matrix pair");
  modes.shape.add(m, false);
  m->add_option("--matrix", modes.matrix, "R0/Rrho matrix container");
  m->add_option("--wavelength", modes.wavelength, "Wavelength in mesh units")
      ->check(CLI::PositiveNumber);
  m->add_option("--ka", modes.ka, "Electrical size (sets the wavelength from the circumradius)")
      ->check(CLI::PositiveNumber);
  m->add_option("--density", modes.density, "Sample points per wavelength^2")
      ->check(CLI::PositiveNumber);
  m->add_option("--loss", modes.loss, "R_s/eta0 (surface) or k rho_r/eta0 (volume)")
      ->check(CLI::PositiveNumber);
  m->add_option("--kind", modes.kind, "surface or volume")
      ->check(CLI::IsMember({"surface", "volume"}));
  m->add_option("--layers", modes.layers, "Volume layers (0: surface currents)")
      ->check(CLI::Range(0, 64));
  m->add_option("--lmax", modes.lmax, "Degree truncation (0: automatic)")->check(CLI::NonNegativeNumber);
  m->add_option("--solver", modes.solver, "auto, dense or factored")
      ->check(CLI::IsMember({"auto", "dense", "factored"}));
  m->add_option("--avg-shadow", modes.avg_shadow, "Average shadow area for n/N_a")
      ->check(CLI::PositiveNumber);
  m->add_option("--directions", modes.directions, "Quadrature size for the shadow area")
      ->check(CLI::Range(1, 100000));
  m->add_option("--resolution", modes.resolution, "Raster resolution for the shadow area")
      ->check(CLI::Range(64, 8192));
  m->add_option("--save-matrix", modes.save_matrix, "Write the R0/Rrho pair");
  m->add_option("--points-out", modes.points_out, "Write sample points (CSV)");
  m->add_option("--report-out", modes.report_out, "Write the NDoF report (CSV or .json)");

  WaterfillArgs wf;
  auto* w = app.add_subcommand("waterfill", "Water-filling capacity over an SNR grid");
  auto* nu_opt = w->add_option("--nu", wf.nu, "Efficiencies (comma separated)")->delimiter(',');
  w->add_option("--nu-file", wf.nu_file, "File with efficiencies (a 'nu' or 'rho' column)")
      ->excludes(nu_opt);
  w->add_option("--snr", wf.snr, "SNR values gamma (comma separated)")->delimiter(',');
  w->add_option("--snr-range", wf.snr_range, "Log-spaced grid lo:hi:n");

  InvsourceArgs inv;
  auto* iv = app.add_subcommand("invsource", "Inverse-source reconstruction in the mode basis");
  iv->add_option("--spectrum", inv.spectrum, "File with eigenvalues (a 'rho' or 'nu' column)");
  iv->add_option("--sphere-ka", inv.sphere_ka, "Use the shell spectrum at this ka")
      ->check(CLI::PositiveNumber);
  iv->add_option("--loss", inv.loss, "R_s/eta0 for --sphere-ka")->check(CLI::PositiveNumber);
  iv->add_option("--data", inv.data, "Far-field coefficients (index,real,imag)");
  iv->add_option("--noise", inv.noise, "Noise level for synthetic data")
      ->check(CLI::NonNegativeNumber);
  iv->add_option("--seed", inv.seed, "Seed for synthetic currents and noise");
  iv->add_option("--delta", inv.delta, "Tikhonov regularization")->check(CLI::NonNegativeNumber);
  iv->add_option("--cutoff", inv.cutoff, "Truncated-SVD cutoff on rho")->check(CLI::PositiveNumber);
  iv->add_option("--preset", inv.preset, "Resolution example: hemisphere or bowl")
      ->check(CLI::IsMember({"hemisphere", "bowl"}));
  iv->add_option("--area", inv.area, "Surface area for the resolution estimate")
      ->check(CLI::PositiveNumber);
  iv->add_option("--avg-shadow", inv.avg_shadow, "Average shadow area for the resolution estimate")
      ->check(CLI::PositiveNumber);
  iv->add_option("--wavelength", inv.wavelength, "Wavelength")->check(CLI::PositiveNumber);
  iv->add_option("--summary-out", inv.summary_out, "Write the summary as JSON");

  MeshArgs mesh;
  auto* me = app.add_subcommand("mesh", "Export a built-in mesh or list the built-in shapes");
  mesh.shape.add(me, false);
  me->add_flag("--list", mesh.list, "List built-in shapes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*s) run_sphere(sphere, out);
    else if (*sh) run_shadow(shadow, out);
    else if (*m) run_modes(modes, out);
    else if (*w) run_waterfill(wf, out);
    else if (*iv) run_invsource(inv, out);
    else if (*me) run_mesh(mesh, out);
  } catch (const CliError& e) {
    std::cerr << "ndof: error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "ndof: error: " << e.what() << "\n";
    return kNumeric;
  }
  return kOk;
}
