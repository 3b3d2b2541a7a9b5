#include "tbc2d/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace tbc2d {

namespace {

std::string fmt17(Real v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<Real> parse_real_list(const std::string& s) {
  std::vector<Real> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(std::stod(item));
  }
  return out;
}

}  // namespace

void RunConfig::finalize() {
  if (dt <= 0 && nt <= 0) throw ConfigError("config: one of dt or nt is required");
  if (!(t_max > 0)) throw ConfigError("config: t_max must be positive");
  if (dt > 0 && nt > 0) {
    if (std::abs(t_max / dt + 1.0 - nt) > 0.5)
      throw ConfigError("config: dt and nt are inconsistent (nt = t_max/dt + 1)");
  } else if (dt > 0) {
    nt = static_cast<int>(std::lround(t_max / dt)) + 1;
  } else {
    if (nt < 2) throw ConfigError("config: nt must be at least 2");
    dt = t_max / (nt - 1);
  }
  if (nt < 2) throw ConfigError("config: need at least one step");

  if (engine != "hf" && engine != "tbc")
    throw ConfigError("config: engine must be hf or tbc");
  if (stepper != "bdf1" && stepper != "bdf2" && stepper != "tr")
    throw ConfigError("config: stepper must be bdf1, bdf2 or tr");
  if (engine == "hf") {
    if (variant != "cq" && variant != "cp")
      throw ConfigError("config: hf variant must be cq or cp");
  } else {
    if (variant != "cq" && variant != "np")
      throw ConfigError("config: tbc variant must be cq or np");
    if (stepper == "bdf2")
      throw ConfigError("config: bdf2 is not available for the tbc engine");
  }
  if (pade_order < 1) throw ConfigError("config: pade_order must be >= 1");
  if (family != "cg" && family != "hg")
    throw ConfigError("config: family must be cg or hg");
  if (profile_type != "iia" && profile_type != "iib")
    throw ConfigError("config: profile_type must be iia or iib");
  if (n1 < 3 || n2 < 3) throw ConfigError("config: basis degrees must be >= 3");
  if (!(x_left < x_right) || !(x_bottom < x_top))
    throw ConfigError("config: empty domain");
  for (Real t : dump_times)
    if (t < 0 || t > t_max + 1e-12) throw ConfigError("config: dump time outside [0, t_max]");
}

DomainMap RunConfig::domain() const { return {x_left, x_right, x_bottom, x_top}; }

Profile RunConfig::profile() const {
  return profile_from_table(
      family == "cg" ? ProfileFamily::ChirpedGaussian : ProfileFamily::HermiteGaussian,
      profile_type == "iia" ? ProfileType::IIA : ProfileType::IIB, speed);
}

Stepper RunConfig::stepper_enum() const {
  if (stepper == "bdf1") return Stepper::BDF1;
  if (stepper == "bdf2") return Stepper::BDF2;
  return Stepper::TR;
}

void apply_config_entry(RunConfig& cfg, const std::string& key, const std::string& value) {
  try {
    if (key == "x_left") cfg.x_left = std::stod(value);
    else if (key == "x_right") cfg.x_right = std::stod(value);
    else if (key == "x_bottom") cfg.x_bottom = std::stod(value);
    else if (key == "x_top") cfg.x_top = std::stod(value);
    else if (key == "n1") cfg.n1 = std::stoi(value);
    else if (key == "n2") cfg.n2 = std::stoi(value);
    else if (key == "n") cfg.n1 = cfg.n2 = std::stoi(value);
    else if (key == "t_max") cfg.t_max = std::stod(value);
    else if (key == "dt") cfg.dt = std::stod(value);
    else if (key == "nt") cfg.nt = std::stoi(value);
    else if (key == "engine") cfg.engine = value;
    else if (key == "variant") cfg.variant = value;
    else if (key == "stepper") cfg.stepper = value;
    else if (key == "pade_order") cfg.pade_order = std::stoi(value);
    else if (key == "family") cfg.family = value;
    else if (key == "profile_type") cfg.profile_type = value;
    else if (key == "c0") cfg.speed = std::stod(value);
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "dump_times") cfg.dump_times = parse_real_list(value);
    else throw ConfigError("config: unknown key '" + key + "'");
  } catch (const std::invalid_argument&) {
    throw ConfigError("config: bad value for key '" + key + "'");
  } catch (const std::out_of_range&) {
    throw ConfigError("config: value out of range for key '" + key + "'");
  }
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  RunConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config: line " + std::to_string(lineno) + " is not key=value");
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

Real EvolutionResult::max_error() const {
  Real m = 0;
  for (Real e : errors) m = std::max(m, e);
  return m;
}

namespace {

template <typename Solver>
EvolutionResult evolve_loop(Solver& solver, const Basis2D& basis, const Profile& prof,
                            const RunConfig& cfg, std::ostream* csv) {
  EvolutionResult res;
  const Real norm0 =
      weighted_l2_nodal(basis, prof.eval_grid(basis.nodes1_phys, basis.nodes2_phys, 0.0));
  auto record = [&](int step, const CMatrix& coeffs) {
    const Real t = step * cfg.dt;
    const CMatrix num = evaluate_nodal(basis, coeffs);
    const CMatrix ref = prof.eval_grid(basis.nodes1_phys, basis.nodes2_phys, t);
    const Real e = weighted_l2_nodal(basis, num - ref) / norm0;
    res.times.push_back(t);
    res.errors.push_back(e);
    if (csv) *csv << fmt17(t) << "," << fmt17(e) << "\n";
  };
  if (csv) *csv << "# t,e\n";
  record(0, solver.coeffs());
  for (int i = 0; i < cfg.steps(); ++i) {
    solver.step();
    record(solver.step_index(), solver.coeffs());
  }
  return res;
}

}  // namespace

EvolutionResult run_evolution(const RunConfig& cfg_in, const std::string& csv_path) {
  RunConfig cfg = cfg_in;
  cfg.finalize();
  const Basis2D basis(cfg.domain(), cfg.n1, cfg.n2);
  const Profile prof = cfg.profile();
  const CMatrix u0 =
      interpolate(basis, prof.eval_grid(basis.nodes1_phys, basis.nodes2_phys, 0.0));

  std::ofstream csv;
  if (!csv_path.empty()) {
    csv.open(csv_path);
    if (!csv) throw std::runtime_error("run_evolution: cannot open " + csv_path);
  }
  std::ostream* out = csv_path.empty() ? nullptr : &csv;

  if (cfg.engine == "hf") {
    HFConfig hc{cfg.variant == "cq" ? HfVariant::CQ : HfVariant::CP, cfg.stepper_enum(),
                cfg.pade_order, cfg.dt, cfg.t_max};
    HFSolver solver(hc, basis, u0);
    return evolve_loop(solver, basis, prof, cfg, out);
  }
  TBCConfig tc{cfg.variant == "cq" ? TbcVariant::CQ : TbcVariant::NP, cfg.stepper_enum(),
               cfg.pade_order, cfg.dt, cfg.t_max};
  TBCSolver solver(tc, basis, u0);
  return evolve_loop(solver, basis, prof, cfg, out);
}

std::optional<Real> fit_loglog_slope(const std::vector<ConvergencePoint>& pts) {
  if (pts.empty()) return std::nullopt;
  Real emin = pts[0].max_error;
  for (const auto& p : pts) emin = std::min(emin, p.max_error);
  std::vector<ConvergencePoint> kept;
  for (const auto& p : pts)
    if (p.max_error > 2.0 * emin) kept.push_back(p);
  if (kept.size() < 3) return std::nullopt;
  // least squares on (log dt, log e)
  Real sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& p : kept) {
    const Real x = std::log(p.dt), y = std::log(p.max_error);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const Real n = static_cast<Real>(kept.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceResult run_convergence(const RunConfig& base,
                                  const std::vector<int>& step_counts,
                                  const std::string& csv_path) {
  if (step_counts.size() < 4)
    throw ConfigError("run_convergence: need at least 4 step counts");
  ConvergenceResult res;
  for (int steps : step_counts) {
    RunConfig cfg = base;
    cfg.nt = steps + 1;
    cfg.dt = 0;
    cfg.finalize();
    const EvolutionResult ev = run_evolution(cfg);
    res.points.push_back({cfg.dt, ev.max_error()});
  }
  res.slope = fit_loglog_slope(res.points);
  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw std::runtime_error("run_convergence: cannot open " + csv_path);
    csv << "# dt,e_max\n";
    for (const auto& p : res.points)
      csv << fmt17(p.dt) << "," << fmt17(p.max_error) << "\n";
    csv << "# slope," << (res.slope ? fmt17(*res.slope) : std::string("undefined"))
        << "\n";
  }
  return res;
}

namespace {

template <typename Solver>
void dump_loop(Solver& solver, const Basis2D& basis, const RunConfig& cfg,
               std::vector<Real> times) {
  std::sort(times.begin(), times.end());
  const int grid_n = 256;
  Vector pts1(grid_n), pts2(grid_n);
  for (int i = 0; i < grid_n; ++i) {
    const Real f = static_cast<Real>(i) / (grid_n - 1);
    pts1(i) = -1.0 + 2.0 * f;
    pts2(i) = -1.0 + 2.0 * f;
  }
  std::size_t next = 0;
  auto maybe_dump = [&](int step, const CMatrix& coeffs) {
    const Real t = step * cfg.dt;
    while (next < times.size() && times[next] <= t + 0.5 * cfg.dt) {
      const CMatrix vals = evaluate(basis, coeffs, pts1, pts2);
      char name[64];
      std::snprintf(name, sizeof name, "field_t%.6f.dat", t);
      std::filesystem::path path = std::filesystem::path(cfg.output_dir) / name;
      std::ofstream out(path);
      if (!out) throw std::runtime_error("dump_field: cannot open " + path.string());
      out << "# " << grid_n << " " << grid_n << " " << fmt17(cfg.x_left) << " "
          << fmt17(cfg.x_right) << " " << fmt17(cfg.x_bottom) << " "
          << fmt17(cfg.x_top) << " " << fmt17(t) << "\n";
      for (int i = 0; i < grid_n; ++i) {
        const Real x1 = basis.dom.to_physical_x(pts1(i));
        for (int j = 0; j < grid_n; ++j) {
          const Real x2 = basis.dom.to_physical_y(pts2(j));
          const Complex u = vals(i, j);
          const Real mag = std::abs(u);
          const Real logmag = mag > 1e-16 ? std::log10(mag) : -16.0;
          out << fmt17(x1) << " " << fmt17(x2) << " " << fmt17(u.real()) << " "
              << fmt17(u.imag()) << " " << fmt17(logmag) << "\n";
        }
      }
      ++next;
    }
  };
  maybe_dump(0, solver.coeffs());
  for (int i = 0; i < cfg.steps() && next < times.size(); ++i) {
    solver.step();
    maybe_dump(solver.step_index(), solver.coeffs());
  }
}

}  // namespace

void dump_field(const RunConfig& cfg_in, const std::vector<Real>& times) {
  RunConfig cfg = cfg_in;
  cfg.finalize();
  const Basis2D basis(cfg.domain(), cfg.n1, cfg.n2);
  const Profile prof = cfg.profile();
  const CMatrix u0 =
      interpolate(basis, prof.eval_grid(basis.nodes1_phys, basis.nodes2_phys, 0.0));
  if (cfg.engine == "hf") {
    HFConfig hc{cfg.variant == "cq" ? HfVariant::CQ : HfVariant::CP, cfg.stepper_enum(),
                cfg.pade_order, cfg.dt, cfg.t_max};
    HFSolver solver(hc, basis, u0);
    dump_loop(solver, basis, cfg, times);
    return;
  }
  TBCConfig tc{cfg.variant == "cq" ? TbcVariant::CQ : TbcVariant::NP, cfg.stepper_enum(),
               cfg.pade_order, cfg.dt, cfg.t_max};
  TBCSolver solver(tc, basis, u0);
  dump_loop(solver, basis, cfg, times);
}

void dump_weights_csv(std::ostream& os, int count) {
  os << "scheme,nu,k,omega\n";
  for (Stepper s : {Stepper::BDF1, Stepper::BDF2, Stepper::TR})
    for (Real nu : {0.5, -0.5}) {
      const CQWeights w = cq_weights(s, nu, count);
      for (int k = 0; k < count; ++k)
        os << stepper_name(s) << "," << (nu > 0 ? "+1/2" : "-1/2") << "," << k << ","
           << fmt17(w.w(k)) << "\n";
    }
}

namespace {

void write_triplets(std::ostream& os, const std::string& name,
                    const Eigen::SparseMatrix<Complex>& m) {
  os << "# matrix " << name << " rows " << m.rows() << " cols " << m.cols() << " nnz "
     << m.nonZeros() << "\n";
  for (int k = 0; k < m.outerSize(); ++k)
    for (Eigen::SparseMatrix<Complex>::InnerIterator it(m, k); it; ++it)
      os << (it.row() + 1) << " " << (it.col() + 1) << " " << fmt17(it.value().real())
         << " " << fmt17(it.value().imag()) << "\n";
}

Eigen::SparseMatrix<Complex> sparse_of(const Matrix& m) {
  return Matrix(m).sparseView().cast<Complex>();
}

}  // namespace

void dump_matrices(const RunConfig& cfg_in, std::ostream& os) {
  RunConfig cfg = cfg_in;
  cfg.finalize();
  const Basis2D basis(cfg.domain(), cfg.n1, cfg.n2);
  write_triplets(os, "mass1", sparse_of(basis.op1.mass));
  write_triplets(os, "stiffness1", sparse_of(basis.op1.stiffness));
  write_triplets(os, "lambda1", sparse_of(Matrix(basis.op1.lambda())));
  write_triplets(os, "mass2", sparse_of(basis.op2.mass));
  write_triplets(os, "stiffness2", sparse_of(basis.op2.stiffness));
  write_triplets(os, "lambda2", sparse_of(Matrix(basis.op2.lambda())));

  const Real rho = cq_rho(cfg.stepper_enum(), cfg.dt);
  const Complex a1 = std::sqrt(rho / basis.dom.beta1) * phase_m4;
  const Complex a2 = std::sqrt(rho / basis.dom.beta2) * phase_m4;
  KronOperator lhs;
  if (cfg.engine == "hf") {
    Real cp = 1.0, cm = 1.0;
    if (cfg.variant == "cp") {
      const auto pc = discrete_pade(cfg.stepper_enum(), cfg.dt, basis.dom.beta1,
                                    basis.dom.beta2, cfg.pade_order);
      cp = pc.varpi_plus_eff();
      cm = pc.varpi_minus_eff();
    }
    lhs = hf_lhs_operator(basis, a1, a2, cp, cm);
  } else {
    Real cp = 1.0;
    if (cfg.variant == "np") {
      const auto pc = discrete_pade(cfg.stepper_enum(), cfg.dt, basis.dom.beta1,
                                    basis.dom.beta2, cfg.pade_order);
      cp = pc.varpi_plus_eff();
    }
    lhs = tbc_lhs_operator(basis, a1, a2, cp);
  }
  write_triplets(os, "scheme_lhs", lhs.assemble_sparse());
}

}  // namespace tbc2d
