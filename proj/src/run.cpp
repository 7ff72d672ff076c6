#include "qme/run.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "qme/heom.hpp"
#include "qme/thermo.hpp"

namespace qme {

using Json = nlohmann::ordered_json;

std::optional<Check> check_from_string(const std::string& name) {
  if (name == "gkls") return Check::Gkls;
  if (name == "stationarity") return Check::Stationarity;
  if (name == "covariance") return Check::Covariance;
  if (name == "entropy") return Check::Entropy;
  if (name == "positivity") return Check::Positivity;
  return std::nullopt;
}

const char* to_string(Check c) {
  switch (c) {
    case Check::Gkls: return "gkls";
    case Check::Stationarity: return "stationarity";
    case Check::Covariance: return "covariance";
    case Check::Entropy: return "entropy";
    case Check::Positivity: return "positivity";
  }
  return "?";
}

namespace {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// ---- scenario JSON helpers -------------------------------------------------

void reject_unknown_keys(const Json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) {
      throw ConfigError("unknown key '" + key + "' in " + where);
    }
  }
}

double require_number(const Json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw ConfigError("missing or non-numeric '" + key + "' in " + where);
  }
  return j[key].get<double>();
}

Json matrix_to_json(const Cmat& m) {
  Json re = Json::array();
  Json im = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json rrow = Json::array();
    Json irow = Json::array();
    for (Index k = 0; k < m.cols(); ++k) {
      rrow.push_back(m(i, k).real());
      irow.push_back(m(i, k).imag());
    }
    re.push_back(std::move(rrow));
    im.push_back(std::move(irow));
  }
  return Json{{"re", std::move(re)}, {"im", std::move(im)}};
}

Cmat matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("re")) {
    throw ConfigError("expected a matrix object with 're' (and optional 'im') in " + where);
  }
  reject_unknown_keys(j, {"re", "im"}, where);
  const Json& re = j["re"];
  if (!re.is_array() || re.empty()) throw ConfigError("empty matrix in " + where);
  const std::size_t rows = re.size();
  const std::size_t cols = re[0].size();
  if (rows != cols) throw ConfigError("matrix must be square in " + where);
  Cmat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!re[i].is_array() || re[i].size() != cols) {
      throw ConfigError("ragged matrix rows in " + where);
    }
    for (std::size_t k = 0; k < cols; ++k) m(i, k) = Complex(re[i][k].get<double>(), 0.0);
  }
  if (j.contains("im")) {
    const Json& im = j["im"];
    if (!im.is_array() || im.size() != rows) throw ConfigError("bad 'im' block in " + where);
    for (std::size_t i = 0; i < rows; ++i) {
      if (!im[i].is_array() || im[i].size() != cols) {
        throw ConfigError("ragged matrix rows in " + where);
      }
      for (std::size_t k = 0; k < cols; ++k) {
        m(i, k) += Complex(0.0, im[i][k].get<double>());
      }
    }
  }
  return m;
}

std::pair<int, int> line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  int col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

ScenarioSpec scenario_from_json(const Json& j) {
  ScenarioSpec s;
  reject_unknown_keys(j,
                      {"name", "system", "initial_state", "baths", "couplings", "split", "grid",
                       "heom", "methods", "boltzmann_cm_per_K", "coherence"},
                      "scenario");
  s.name = j.value("name", std::string("custom"));

  if (!j.contains("system")) throw ConfigError("scenario is missing 'system'");
  const Json& sys = j["system"];
  reject_unknown_keys(sys, {"matrix_cm", "two_qubit"}, "system");
  if (sys.contains("two_qubit")) {
    const Json& tq = sys["two_qubit"];
    reject_unknown_keys(tq, {"E1_cm", "E2_cm", "J_cm"}, "system.two_qubit");
    s.h_s = two_qubit_hamiltonian(require_number(tq, "E1_cm", "system.two_qubit"),
                                  require_number(tq, "E2_cm", "system.two_qubit"),
                                  require_number(tq, "J_cm", "system.two_qubit"));
  } else if (sys.contains("matrix_cm")) {
    s.h_s = matrix_from_json(sys["matrix_cm"], "system.matrix_cm");
  } else {
    throw ConfigError("system must contain 'matrix_cm' or 'two_qubit'");
  }
  const auto dim = s.h_s.rows();

  if (!j.contains("initial_state")) throw ConfigError("scenario is missing 'initial_state'");
  const Json& init = j["initial_state"];
  reject_unknown_keys(init, {"basis_index", "matrix"}, "initial_state");
  if (init.contains("basis_index")) {
    const int idx = init["basis_index"].get<int>();
    if (idx < 0 || idx >= dim) throw ConfigError("initial_state.basis_index out of range");
    Cvec psi = Cvec::Zero(dim);
    psi(idx) = 1.0;
    s.rho0 = DensityMatrix::pure(psi).matrix();
  } else if (init.contains("matrix")) {
    s.rho0 = DensityMatrix(matrix_from_json(init["matrix"], "initial_state.matrix")).matrix();
  } else {
    throw ConfigError("initial_state must contain 'basis_index' or 'matrix'");
  }

  if (!j.contains("baths") || !j["baths"].is_array() || j["baths"].empty()) {
    throw ConfigError("scenario needs a non-empty 'baths' array");
  }
  for (std::size_t i = 0; i < j["baths"].size(); ++i) {
    const Json& jb = j["baths"][i];
    const std::string where = "baths[" + std::to_string(i) + "]";
    reject_unknown_keys(jb,
                        {"label", "model", "eta_cm", "omega_cut_cm", "omega_cut_inv_fs",
                         "temperature_K", "beta_cm", "modes"},
                        where);
    ScenarioBath b;
    if (!jb.contains("label")) throw ConfigError(where + " is missing 'label'");
    b.label = jb["label"].get<std::string>();
    b.model = jb.value("model", std::string("drude_high_temp"));
    if (b.model == "drude_high_temp" || b.model == "drude_exact_gamma") {
      b.eta_cm = require_number(jb, "eta_cm", where);
      if (jb.contains("omega_cut_cm")) {
        b.omega_cut_cm = jb["omega_cut_cm"].get<double>();
      } else if (jb.contains("omega_cut_inv_fs")) {
        b.omega_cut_cm =
            1.0 / (jb["omega_cut_inv_fs"].get<double>() * units::kWavenumberToRadPerFs);
      } else {
        throw ConfigError(where + " needs 'omega_cut_cm' or 'omega_cut_inv_fs'");
      }
      b.temperature_K = require_number(jb, "temperature_K", where);
    } else if (b.model == "exp_sum") {
      b.beta_cm = require_number(jb, "beta_cm", where);
      if (!jb.contains("modes") || !jb["modes"].is_array() || jb["modes"].empty()) {
        throw ConfigError(where + " needs a non-empty 'modes' array");
      }
      for (const auto& jm : jb["modes"]) {
        reject_unknown_keys(
            jm, {"amplitude_re_cm2", "amplitude_im_cm2", "decay_re_cm", "decay_im_cm"},
            where + ".modes");
        ExponentialMode m;
        m.amplitude = Complex(require_number(jm, "amplitude_re_cm2", where + ".modes"),
                              jm.value("amplitude_im_cm2", 0.0));
        m.decay = Complex(require_number(jm, "decay_re_cm", where + ".modes"),
                          jm.value("decay_im_cm", 0.0));
        b.modes.push_back(m);
      }
    } else {
      throw ConfigError(where + ": unknown bath model '" + b.model + "'");
    }
    s.baths.push_back(std::move(b));
  }

  if (!j.contains("couplings") || !j["couplings"].is_array() || j["couplings"].empty()) {
    throw ConfigError("scenario needs a non-empty 'couplings' array");
  }
  for (std::size_t i = 0; i < j["couplings"].size(); ++i) {
    const Json& jc = j["couplings"][i];
    const std::string where = "couplings[" + std::to_string(i) + "]";
    reject_unknown_keys(jc, {"bath", "matrix"}, where);
    if (!jc.contains("bath") || !jc.contains("matrix")) {
      throw ConfigError(where + " needs 'bath' and 'matrix'");
    }
    ScenarioCoupling c;
    c.bath_label = jc["bath"].get<std::string>();
    c.op = matrix_from_json(jc["matrix"], where + ".matrix");
    if (c.op.rows() != dim) throw ConfigError(where + ": coupling dimension mismatch");
    s.couplings.push_back(std::move(c));
  }

  if (!j.contains("split")) throw ConfigError("scenario is missing 'split'");
  const Json& sp = j["split"];
  reject_unknown_keys(sp, {"level_tolerance_cm", "h0_matrix_cm"}, "split");
  if (sp.contains("h0_matrix_cm")) {
    s.split.mode = SplitSpec::Mode::ExplicitH0;
    s.split.h0 = matrix_from_json(sp["h0_matrix_cm"], "split.h0_matrix_cm");
    if (s.split.h0.rows() != dim) throw ConfigError("split.h0_matrix_cm dimension mismatch");
  } else if (sp.contains("level_tolerance_cm")) {
    s.split.mode = SplitSpec::Mode::ByTolerance;
    s.split.level_tolerance_cm = sp["level_tolerance_cm"].get<double>();
  } else {
    throw ConfigError("split must contain 'level_tolerance_cm' or 'h0_matrix_cm'");
  }

  if (!j.contains("grid")) throw ConfigError("scenario is missing 'grid'");
  reject_unknown_keys(j["grid"], {"t_max_fs", "dt_fs"}, "grid");
  s.t_max_fs = require_number(j["grid"], "t_max_fs", "grid");
  s.dt_fs = require_number(j["grid"], "dt_fs", "grid");
  if (s.dt_fs <= 0.0 || s.t_max_fs < s.dt_fs) throw ConfigError("grid times must be positive");

  if (j.contains("heom")) {
    reject_unknown_keys(j["heom"], {"depth"}, "heom");
    s.heom_depth = j["heom"].value("depth", 6);
    if (s.heom_depth < 1) throw ConfigError("heom.depth must be at least 1");
  }
  if (j.contains("methods")) {
    if (!j["methods"].is_array()) throw ConfigError("'methods' must be an array");
    for (const auto& m : j["methods"]) s.methods.push_back(m.get<std::string>());
  }
  s.boltzmann_cm_per_K = j.value("boltzmann_cm_per_K", units::kDefaultBoltzmannCmPerK);
  if (j.contains("coherence")) {
    reject_unknown_keys(j["coherence"], {"i", "j"}, "coherence");
    s.coherence_i = j["coherence"].value("i", 0);
    s.coherence_j = j["coherence"].value("j", 1);
    if (s.coherence_i < 0 || s.coherence_i >= dim || s.coherence_j < 0 ||
        s.coherence_j >= dim) {
      throw ConfigError("coherence indices out of range");
    }
  }
  return s;
}

}  // namespace

ScenarioSpec parse_scenario_text(const std::string& text, const std::string& origin) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_of_byte(text, e.byte);
    throw ConfigError(origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " +
                      e.what());
  }
  try {
    return scenario_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

ScenarioSpec parse_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path);
}

std::string serialize_scenario(const ScenarioSpec& s) {
  Json j;
  j["name"] = s.name;
  j["system"] = Json{{"matrix_cm", matrix_to_json(s.h_s)}};
  j["initial_state"] = Json{{"matrix", matrix_to_json(s.rho0)}};
  Json baths = Json::array();
  for (const auto& b : s.baths) {
    Json jb;
    jb["label"] = b.label;
    jb["model"] = b.model;
    if (b.model == "exp_sum") {
      jb["beta_cm"] = b.beta_cm;
      Json modes = Json::array();
      for (const auto& m : b.modes) {
        modes.push_back(Json{{"amplitude_re_cm2", m.amplitude.real()},
                             {"amplitude_im_cm2", m.amplitude.imag()},
                             {"decay_re_cm", m.decay.real()},
                             {"decay_im_cm", m.decay.imag()}});
      }
      jb["modes"] = std::move(modes);
    } else {
      jb["eta_cm"] = b.eta_cm;
      jb["omega_cut_cm"] = b.omega_cut_cm;
      jb["temperature_K"] = b.temperature_K;
    }
    baths.push_back(std::move(jb));
  }
  j["baths"] = std::move(baths);
  Json couplings = Json::array();
  for (const auto& c : s.couplings) {
    couplings.push_back(Json{{"bath", c.bath_label}, {"matrix", matrix_to_json(c.op)}});
  }
  j["couplings"] = std::move(couplings);
  if (s.split.mode == SplitSpec::Mode::ExplicitH0) {
    j["split"] = Json{{"h0_matrix_cm", matrix_to_json(s.split.h0)}};
  } else {
    j["split"] = Json{{"level_tolerance_cm", s.split.level_tolerance_cm}};
  }
  j["grid"] = Json{{"t_max_fs", s.t_max_fs}, {"dt_fs", s.dt_fs}};
  j["heom"] = Json{{"depth", s.heom_depth}};
  j["methods"] = s.methods;
  j["boltzmann_cm_per_K"] = s.boltzmann_cm_per_K;
  j["coherence"] = Json{{"i", s.coherence_i}, {"j", s.coherence_j}};
  return j.dump(2) + "\n";
}

namespace {

// ---- run support ------------------------------------------------------------

struct CheckResult {
  std::string name;
  std::string method;
  std::string status;  // "pass" | "fail" | "reported" | "skipped"
  double value = 0.0;
  std::string note;
};

bool all_baths_exact_kms(const std::vector<SystemCoupling>& couplings) {
  for (const auto& c : couplings) {
    if (c.bath.gamma_mode() != GammaMode::DrudeExactGamma) return false;
  }
  return true;
}

bool uniform_temperature(const std::vector<SystemCoupling>& couplings) {
  for (const auto& c : couplings) {
    if (std::abs(c.bath.beta() - couplings.front().bath.beta()) >
        1e-12 * couplings.front().bath.beta()) {
      return false;
    }
  }
  return true;
}

std::vector<DensityMatrix> random_densities(Index dim, int count, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<DensityMatrix> out;
  for (int k = 0; k < count; ++k) {
    Cmat g(dim, dim);
    for (Index i = 0; i < dim; ++i) {
      for (Index j = 0; j < dim; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    }
    Cmat rho = g * g.adjoint();
    rho /= rho.trace();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    out.push_back(DensityMatrix(rho));
  }
  return out;
}

// Eigenbasis of H_S, ascending, with each column's largest component rotated
// to the positive real axis so output files are reproducible.
Cmat canonical_eigenbasis(const Cmat& h_s) {
  Eigen::SelfAdjointEigenSolver<Cmat> es(0.5 * (h_s + h_s.adjoint()));
  Cmat v = es.eigenvectors();
  for (Index c = 0; c < v.cols(); ++c) {
    Index imax = 0;
    double amax = 0.0;
    for (Index r = 0; r < v.rows(); ++r) {
      if (std::abs(v(r, c)) > amax) {
        amax = std::abs(v(r, c));
        imax = r;
      }
    }
    const Complex z = v(imax, c);
    if (std::abs(z) > 0.0) v.col(c) *= std::conj(z) / std::abs(z);
  }
  return v;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  const Index d = traj.dim();
  out << "t_fs";
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) out << ",rho_re_" << i << "_" << j;
  }
  for (Index i = 0; i < d; ++i) {
    for (Index j = 0; j < d; ++j) out << ",rho_im_" << i << "_" << j;
  }
  out << ",min_eig,trace\n";
  const auto mins = positivity_monitor(traj);
  for (std::size_t k = 0; k < traj.states().size(); ++k) {
    const auto& s = traj.states()[k];
    out << fmt(traj.grid().time_at(static_cast<int>(k)));
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) out << "," << fmt(s(i, j).real());
    }
    for (Index i = 0; i < d; ++i) {
      for (Index j = 0; j < d; ++j) out << "," << fmt(s(i, j).imag());
    }
    out << "," << fmt(mins[k]) << "," << fmt(s.trace().real()) << "\n";
  }
}

}  // namespace

RunOutcome run(const RunConfig& config) {
  namespace fs = std::filesystem;
  try {
    // Resolve scenario.
    ScenarioSpec spec;
    if (auto builtin = builtin_scenario(config.scenario)) {
      spec = std::move(*builtin);
    } else if (fs::exists(config.scenario)) {
      spec = parse_scenario(config.scenario);
    } else {
      throw ConfigError("scenario '" + config.scenario +
                        "' is neither a builtin name nor an existing file");
    }
    if (config.boltzmann_cm_per_K) spec.boltzmann_cm_per_K = *config.boltzmann_cm_per_K;
    if (config.dt_fs) spec.dt_fs = *config.dt_fs;
    if (config.t_max_fs) spec.t_max_fs = *config.t_max_fs;
    if (config.heom_depth) spec.heom_depth = *config.heom_depth;
    if (spec.dt_fs <= 0.0 || spec.t_max_fs < spec.dt_fs) {
      throw ConfigError("grid times must be positive");
    }
    if (spec.heom_depth < 1) throw ConfigError("heom depth must be at least 1");

    std::vector<std::string> methods = config.methods.empty() ? spec.methods : config.methods;
    if (methods.empty()) throw ConfigError("no methods requested");
    for (const auto& m : methods) {
      if (m != "heom" && !generator_kind_from_string(m)) {
        throw ConfigError("unknown method '" + m + "'");
      }
    }

    if (config.out_dir.empty()) throw ConfigError("no output directory configured");
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec || !fs::is_directory(config.out_dir)) {
      throw ConfigError("cannot create output directory '" + config.out_dir + "'");
    }
    const fs::path out_dir(config.out_dir);

    // Shared machinery.
    const HermitianOperator h_s{spec.h_s};
    const SpectralDecomposition decomp(h_s, 1e-9 * std::max(max_abs(spec.h_s), 1.0));
    const ReferenceSplit split =
        spec.split.mode == SplitSpec::Mode::ExplicitH0
            ? reference_split_explicit(decomp, HermitianOperator(spec.split.h0))
            : reference_split_by_tolerance(decomp, spec.split.level_tolerance_cm);
    const auto couplings = realize_couplings(spec);
    const DensityMatrix rho0{spec.rho0};
    const TimeGrid grid = scenario_grid(spec);

    std::vector<BathDescriptor> baths;
    for (const auto& c : couplings) baths.push_back(c.bath);
    const ValidityReport validity = validity_diagnostics(split, baths);

    // Build and propagate.
    std::map<std::string, Generator> generators;
    std::map<std::string, Trajectory> trajectories;
    std::vector<ConvergenceRow> heom_rows;
    for (const auto& m : methods) {
      if (m == "heom") {
        // The hierarchy consumes the exponential modes; the exact-gamma
        // refinement only applies to master-equation rate functions.
        auto heom_couplings = couplings;
        for (std::size_t i = 0; i < heom_couplings.size(); ++i) {
          if (heom_couplings[i].bath.gamma_mode() != GammaMode::ExpSum) {
            auto sb = spec.baths;
            for (const auto& b : sb) {
              if (b.label == heom_couplings[i].bath.label()) {
                auto ht = b;
                ht.model = "drude_high_temp";
                heom_couplings[i].bath = realize_bath(ht, spec.boltzmann_cm_per_K);
              }
            }
          }
        }
        const Hierarchy hierarchy(h_s, heom_couplings, spec.heom_depth);
        trajectories.emplace(m, propagate_heom(hierarchy, rho0, grid));
        if (spec.heom_depth > 2) {
          heom_rows = convergence_scan(h_s, heom_couplings, rho0, grid,
                                       {spec.heom_depth - 2, spec.heom_depth});
        }
        continue;
      }
      const auto kind = *generator_kind_from_string(m);
      Generator g = [&] {
        switch (kind) {
          case GeneratorKind::Redfield: return build_redfield(decomp, couplings);
          case GeneratorKind::Davies: return build_davies(decomp, couplings);
          case GeneratorKind::NonsecularDavies: return build_nonsecular_davies(decomp, couplings);
          case GeneratorKind::Unified: return build_unified(split, couplings);
          case GeneratorKind::UnifiedSimplified:
          default: return build_unified_simplified(split, couplings);
        }
      }();
      trajectories.emplace(m, propagate(g, rho0, grid, PropagationMethod::ExpmStep));
      generators.emplace(m, std::move(g));
    }

    // Output files.
    for (const auto& [name, traj] : trajectories) {
      write_trajectory_csv((out_dir / (name + ".csv")).string(), traj);
    }

    const std::string reference =
        trajectories.count("heom") ? std::string("heom") : methods.front();
    {
      std::ofstream out(out_dir / "distances.csv");
      out << "t_fs";
      for (const auto& m : methods) {
        if (m != reference) out << ",dist_" << m << "_" << reference;
      }
      out << "\n";
      std::map<std::string, std::vector<double>> dists;
      for (const auto& m : methods) {
        if (m != reference) {
          dists[m] = trace_distance_series(trajectories.at(m), trajectories.at(reference));
        }
      }
      for (int k = 0; k < grid.points(); ++k) {
        out << fmt(grid.time_at(k));
        for (const auto& m : methods) {
          if (m != reference) out << "," << fmt(dists[m][k]);
        }
        out << "\n";
      }
    }
    {
      const Cmat basis = canonical_eigenbasis(spec.h_s);
      std::ofstream out(out_dir / "coherence.csv");
      out << "t_fs";
      for (const auto& m : methods) out << ",re_" << m << ",im_" << m;
      out << "\n";
      std::map<std::string, std::vector<Complex>> series;
      for (const auto& m : methods) {
        series[m] =
            coherence_series(trajectories.at(m), basis, spec.coherence_i, spec.coherence_j);
      }
      for (int k = 0; k < grid.points(); ++k) {
        out << fmt(grid.time_at(k));
        for (const auto& m : methods) {
          out << "," << fmt(series[m][k].real()) << "," << fmt(series[m][k].imag());
        }
        out << "\n";
      }
    }

    // Checks.
    const bool exact_kms = all_baths_exact_kms(couplings);
    const bool uniform_t = uniform_temperature(couplings);
    std::vector<CheckResult> results;
    for (Check c : config.checks) {
      switch (c) {
        case Check::Gkls: {
          for (const auto& [name, g] : generators) {
            const auto cert = gkls_certificate(g);
            CheckResult r{"gkls", name, "reported", cert.min_eigenvalue, ""};
            if (is_gkls_kind(g.kind())) {
              r.status = cert.min_eigenvalue >= -1e-12 ? "pass" : "fail";
            } else {
              r.note = "non-GKLS kind, certificate reported only";
            }
            results.push_back(std::move(r));
          }
          break;
        }
        case Check::Stationarity: {
          for (const auto& [name, g] : generators) {
            CheckResult r{"stationarity", name, "reported", 0.0, ""};
            if (!(g.kind() == GeneratorKind::Unified || g.kind() == GeneratorKind::Davies)) {
              r.status = "skipped";
              r.note = "only meaningful for davies/unified kinds";
            } else if (!uniform_t) {
              r.status = "skipped";
              r.note = "baths have different temperatures";
            } else {
              const Cmat h0 = g.kind() == GeneratorKind::Unified ? split.h0_matrix() : spec.h_s;
              const auto rho_beta =
                  gibbs_state(HermitianOperator(h0), couplings.front().bath.beta());
              r.value = stationarity_residual(g, rho_beta);
              if (exact_kms) {
                r.status = r.value <= 1e-10 ? "pass" : "fail";
              } else {
                r.note = "high-temperature baths: residual reported, not asserted";
              }
            }
            results.push_back(std::move(r));
          }
          break;
        }
        case Check::Covariance: {
          const auto samples = random_densities(h_s.dim(), 20, 20240501u);
          for (const auto& [name, g] : generators) {
            CheckResult r{"covariance", name, "reported", 0.0, ""};
            const Cmat h0 = g.kind() == GeneratorKind::Unified ||
                                    g.kind() == GeneratorKind::UnifiedSimplified
                                ? split.h0_matrix()
                                : spec.h_s;
            std::vector<std::pair<double, DensityMatrix>> pairs;
            for (const double t : {10.0, 100.0, 1000.0}) {
              for (const auto& rho : samples) pairs.emplace_back(t, rho);
            }
            r.value = covariance_residual(g, HermitianOperator(h0), pairs);
            if (is_gkls_kind(g.kind())) {
              r.status = r.value <= 1e-10 ? "pass" : "fail";
            } else {
              r.note = "non-covariant kind, residual reported only";
            }
            results.push_back(std::move(r));
          }
          break;
        }
        case Check::Entropy: {
          for (const auto& [name, g] : generators) {
            CheckResult r{"entropy", name, "reported", 0.0, ""};
            const auto sigma = entropy_production(trajectories.at(name), g,
                                                  HermitianOperator(split.h0_matrix()));
            double min_sigma = 0.0;
            for (const auto& s : sigma) min_sigma = std::min(min_sigma, s.sigma);
            r.value = min_sigma;
            if (is_gkls_kind(g.kind()) && exact_kms) {
              r.status = min_sigma >= -1e-8 ? "pass" : "fail";
            } else {
              r.note = "asserted only for GKLS kinds with exact-KMS baths";
            }
            results.push_back(std::move(r));
          }
          break;
        }
        case Check::Positivity: {
          for (const auto& [name, traj] : trajectories) {
            CheckResult r{"positivity", name, "reported", 0.0, ""};
            const auto mins = positivity_monitor(traj);
            r.value = *std::min_element(mins.begin(), mins.end());
            const auto it = generators.find(name);
            if (it != generators.end() && is_gkls_kind(it->second.kind())) {
              r.status = r.value >= -1e-8 ? "pass" : "fail";
            } else {
              r.note = "monitored only";
            }
            results.push_back(std::move(r));
          }
          break;
        }
      }
    }

    // Summary.
    Json summary;
    summary["scenario"] = Json::parse(serialize_scenario(spec));
    summary["run"] = Json{{"methods", methods},
                          {"reference", reference},
                          {"out_dir", config.out_dir},
                          {"boltzmann_cm_per_K", spec.boltzmann_cm_per_K},
                          {"dt_fs", spec.dt_fs},
                          {"t_max_fs", spec.t_max_fs},
                          {"heom_depth", spec.heom_depth}};
    summary["validity"] = Json{{"weak_coupling_ratio", validity.weak_coupling_ratio},
                               {"secular_ratio", validity.secular_ratio},
                               {"cluster_flatness_re", validity.cluster_flatness_re},
                               {"cluster_flatness_im", validity.cluster_flatness_im},
                               {"delta_norm_ratio", validity.delta_norm_ratio},
                               {"collapsed", validity.collapsed}};
    {
      Json levels = Json::array();
      for (const auto& l : split.h0_levels()) {
        levels.push_back(Json{{"energy_cm", l.energy}, {"multiplicity", l.multiplicity}});
      }
      Json clusters = Json::array();
      for (const auto& c : split.clusters()) {
        Json members = Json::array();
        for (int fi : c.member_freqs) members.push_back(split.frequencies()[fi].value);
        clusters.push_back(Json{{"center_cm", c.center}, {"members_cm", std::move(members)}});
      }
      summary["split"] = Json{{"h0_levels", std::move(levels)}, {"clusters", std::move(clusters)}};
    }
    {
      Json certs;
      for (const auto& [name, g] : generators) {
        const auto cert = gkls_certificate(g);
        Json blocks = Json::array();
        for (const auto& b : cert.blocks) {
          Json jb{{"bath", b.bath_label}, {"min_eigenvalue", b.min_eigenvalue},
                  {"max_eigenvalue", b.max_eigenvalue}};
          if (std::isfinite(b.center)) jb["center_cm"] = b.center;
          blocks.push_back(std::move(jb));
        }
        certs[name] =
            Json{{"min_eigenvalue", cert.min_eigenvalue}, {"blocks", std::move(blocks)}};
      }
      summary["certificates"] = std::move(certs);
    }
    {
      Json mins;
      for (const auto& [name, traj] : trajectories) {
        const auto m = positivity_monitor(traj);
        mins[name] = *std::min_element(m.begin(), m.end());
      }
      summary["positivity_min"] = std::move(mins);
    }
    if (!heom_rows.empty()) {
      Json rows = Json::array();
      for (const auto& r : heom_rows) {
        rows.push_back(Json{{"depth_a", r.depth_a},
                            {"depth_b", r.depth_b},
                            {"max_trace_distance", r.max_trace_distance}});
      }
      summary["heom"] = Json{{"depth", spec.heom_depth}, {"convergence", std::move(rows)}};
    }
    {
      Json jr = Json::array();
      bool any_failed = false;
      for (const auto& r : results) {
        jr.push_back(Json{{"check", r.name},
                          {"method", r.method},
                          {"status", r.status},
                          {"value", r.value},
                          {"note", r.note}});
        any_failed = any_failed || r.status == "fail";
      }
      summary["checks"] = std::move(jr);
      std::ofstream out(out_dir / "summary.json");
      out << summary.dump(2) << "\n";
      if (any_failed) {
        return {4, "one or more enabled checks failed; see " +
                       (out_dir / "summary.json").string()};
      }
    }
    return {0, "wrote results to " + config.out_dir};
  } catch (const ConfigError& e) {
    return {2, std::string("configuration error: ") + e.what()};
  } catch (const PropagationDiverged& e) {
    return {3, std::string("propagation diverged: ") + e.what()};
  } catch (const InvariantViolation& e) {
    return {2, std::string("configuration error: ") + e.what()};
  } catch (const IncompatibleReference& e) {
    return {2, std::string("configuration error: ") + e.what()};
  }
}

}  // namespace qme
