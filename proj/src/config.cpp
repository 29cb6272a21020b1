#include "onebit/config.hpp"

#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <yaml-cpp/yaml.h>

#include "onebit/errors.hpp"

namespace onebit {

namespace {

constexpr std::array<std::string_view, 5> kModelNames{"brownian_constant", "gaussian_det_info",
                                                      "ornstein_uhlenbeck", "square_root_diffusion",
                                                      "correlated_diffusion"};

int line_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().line + 1; }

class Reader {
 public:
  std::vector<std::string> violations;

  void keys(const YAML::Node& n, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!n.IsMap()) throw ParseError(line_of(n), path, "expected a mapping");
    for (const auto& kv : n) {
      const auto key = kv.first.as<std::string>();
      bool ok = false;
      for (auto a : allowed) ok = ok || a == key;
      if (!ok) violations.push_back(fmt::format("{}: unknown key '{}' (line {})", join(path, key), key, line_of(kv.first)));
    }
  }

  template <class T>
  T scalar(const YAML::Node& n, const std::string& field) {
    if (!n.IsScalar()) throw ParseError(line_of(n), field, "expected a scalar");
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      throw ParseError(line_of(n), field, fmt::format("cannot read '{}'", n.Scalar()));
    }
  }

  std::vector<double> doubles(const YAML::Node& n, const std::string& field) {
    if (!n.IsSequence()) throw ParseError(line_of(n), field, "expected a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(scalar<double>(n[i], fmt::format("{}[{}]", field, i)));
    return out;
  }

  TimeFunction time_function(const YAML::Node& n, const std::string& field) {
    if (n.IsScalar()) return TimeFunction::constant(scalar<double>(n, field));
    keys(n, field, {"type", "value", "coeffs", "breaks", "values", "pieces"});
    if (!n["type"]) throw ParseError(line_of(n), field + ".type", "missing time-function type");
    const auto type = scalar<std::string>(n["type"], field + ".type");
    auto need = [&](const char* key) {
      if (!n[key]) throw ParseError(line_of(n), join(field, key), fmt::format("'{}' time function needs '{}'", type, key));
      return n[key];
    };
    try {
      if (type == "constant") return TimeFunction::constant(scalar<double>(need("value"), join(field, "value")));
      if (type == "polynomial") return TimeFunction::polynomial(doubles(need("coeffs"), join(field, "coeffs")));
      if (type == "piecewise_constant")
        return TimeFunction::piecewise_constant(doubles(need("breaks"), join(field, "breaks")),
                                                doubles(need("values"), join(field, "values")));
      if (type == "piecewise_polynomial") {
        const auto pn = need("pieces");
        if (!pn.IsSequence()) throw ParseError(line_of(pn), join(field, "pieces"), "expected a list of coefficient lists");
        std::vector<std::vector<double>> pieces;
        for (std::size_t i = 0; i < pn.size(); ++i)
          pieces.push_back(doubles(pn[i], fmt::format("{}.pieces[{}]", field, i)));
        return TimeFunction::piecewise_polynomial(doubles(need("breaks"), join(field, "breaks")), std::move(pieces));
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      violations.push_back(fmt::format("{}: {}", field, e.what()));
      return TimeFunction::constant(0.0);
    }
    throw ParseError(line_of(n), field + ".type", fmt::format("unknown time-function type '{}'", type));
  }

  std::vector<TimeFunction> function_list(const YAML::Node& n, const std::string& field) {
    if (!n.IsSequence()) throw ParseError(line_of(n), field, "expected a list");
    std::vector<TimeFunction> out;
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(time_function(n[i], fmt::format("{}[{}]", field, i)));
    return out;
  }

  std::vector<std::vector<TimeFunction>> function_matrix(const YAML::Node& n, const std::string& field) {
    if (!n.IsSequence()) throw ParseError(line_of(n), field, "expected a list of rows");
    std::vector<std::vector<TimeFunction>> out;
    for (std::size_t i = 0; i < n.size(); ++i) out.push_back(function_list(n[i], fmt::format("{}[{}]", field, i)));
    return out;
  }

  static std::string join(const std::string& a, std::string_view b) {
    return a.empty() ? std::string(b) : a + "." + std::string(b);
  }
};

ModelSpec read_model(Reader& r, const YAML::Node& n) {
  r.keys(n, "model", {"kind", "sensors", "x", "b", "rho", "alpha", "sigma", "y0", "deterministic_cross",
                      "magnitude_cap"});
  ModelSpec m;
  if (!n["kind"]) {
    r.violations.push_back("model.kind: required");
  } else {
    const auto kind = r.scalar<std::string>(n["kind"], "model.kind");
    try {
      m.kind = model_kind_from_string(kind);
    } catch (const Error&) {
      r.violations.push_back(fmt::format("model.kind: unknown kind '{}'", kind));
    }
  }
  if (!n["sensors"]) r.violations.push_back("model.sensors: required");
  else m.sensors = r.scalar<int>(n["sensors"], "model.sensors");
  if (n["x"]) m.x = r.doubles(n["x"], "model.x");
  if (n["b"]) m.b = r.function_list(n["b"], "model.b");
  if (n["rho"]) m.rho = r.function_matrix(n["rho"], "model.rho");
  if (n["alpha"]) m.alpha = r.doubles(n["alpha"], "model.alpha");
  if (n["sigma"]) m.sigma = r.function_matrix(n["sigma"], "model.sigma");
  if (n["y0"]) m.y0 = r.doubles(n["y0"], "model.y0");
  if (n["magnitude_cap"]) m.magnitude_cap = r.scalar<double>(n["magnitude_cap"], "model.magnitude_cap");
  if (const auto dc = n["deterministic_cross"]) {
    if (!dc.IsSequence()) throw ParseError(line_of(dc), "model.deterministic_cross", "expected a list of rows");
    for (std::size_t i = 0; i < dc.size(); ++i) {
      const std::string f = fmt::format("model.deterministic_cross[{}]", i);
      if (!dc[i].IsSequence()) throw ParseError(line_of(dc[i]), f, "expected a list of booleans");
      std::vector<bool> row;
      for (std::size_t j = 0; j < dc[i].size(); ++j) row.push_back(r.scalar<bool>(dc[i][j], fmt::format("{}[{}]", f, j)));
      m.deterministic_cross.push_back(std::move(row));
    }
  }

  const bool uses_x = m.kind == ModelKind::BrownianConstant || m.kind == ModelKind::SquareRootDiffusion;
  auto unused = [&](bool present, const char* key) {
    if (present)
      r.violations.push_back(fmt::format("model.{}: not used by kind {}", key, to_string(m.kind)));
  };
  unused(!uses_x && !m.x.empty(), "x");
  unused(m.kind != ModelKind::GaussianDetInfo && !m.b.empty(), "b");
  unused(m.kind != ModelKind::GaussianDetInfo && !m.rho.empty(), "rho");
  unused(m.kind != ModelKind::OrnsteinUhlenbeck && !m.alpha.empty(), "alpha");
  unused(m.kind != ModelKind::CorrelatedDiffusion && !m.sigma.empty(), "sigma");
  unused(m.kind != ModelKind::SquareRootDiffusion && !m.y0.empty(), "y0");
  // Fill the documented default so the parsed spec equals its validated form.
  if (m.kind == ModelKind::SquareRootDiffusion && m.y0.empty() && m.sensors > 0)
    m.y0.assign(static_cast<std::size_t>(m.sensors), 1.0);

  try {
    const Model built = build_model(m);
    m.deterministic_cross = built.spec().deterministic_cross;
  } catch (const Error& e) {
    r.violations.push_back(fmt::format("model: {}", e.what()));
  }
  return m;
}

TriggerConfig read_trigger(Reader& r, const YAML::Node& n, const std::string& field) {
  r.keys(n, field, {"delta_up", "delta_down", "c", "mode", "h"});
  TriggerConfig t;
  if (!n["delta_up"]) r.violations.push_back(field + ".delta_up: required");
  else t.delta_up = r.scalar<double>(n["delta_up"], field + ".delta_up");
  if (!n["delta_down"]) r.violations.push_back(field + ".delta_down: required");
  else t.delta_down = r.scalar<double>(n["delta_down"], field + ".delta_down");
  if (n["c"]) t.c = r.scalar<double>(n["c"], field + ".c");
  if (n["mode"]) {
    const auto mode = r.scalar<std::string>(n["mode"], field + ".mode");
    if (mode == "continuous") t.mode = TriggerMode::Continuous;
    else if (mode == "discrete_sampling") t.mode = TriggerMode::DiscreteSampling;
    else r.violations.push_back(fmt::format("{}.mode: unknown mode '{}'", field, mode));
  }
  if (n["h"]) t.h = r.scalar<double>(n["h"], field + ".h");
  if (!(t.delta_up > 0.0)) r.violations.push_back(fmt::format("{}.delta_up: must be positive, got {}", field, t.delta_up));
  if (!(t.delta_down > 0.0))
    r.violations.push_back(fmt::format("{}.delta_down: must be positive, got {}", field, t.delta_down));
  if (t.c && !(*t.c > 0.0)) r.violations.push_back(fmt::format("{}.c: must be positive, got {}", field, *t.c));
  if (t.mode == TriggerMode::DiscreteSampling && !(t.h > 0.0))
    r.violations.push_back(field + ".h: discrete sampling needs a positive period");
  if (t.mode == TriggerMode::Continuous && n["h"]) r.violations.push_back(field + ".h: only used with discrete sampling");
  return t;
}

PowerRule read_rule(Reader& r, const YAML::Node& n, const std::string& field) {
  r.keys(n, field, {"a", "b"});
  PowerRule p;
  if (!n["a"] || !n["b"]) r.violations.push_back(field + ": needs both 'a' and 'b'");
  if (n["a"]) p.a = r.scalar<double>(n["a"], field + ".a");
  if (n["b"]) p.b = r.scalar<double>(n["b"], field + ".b");
  return p;
}

ExperimentConfig read_experiment(Reader& r, const YAML::Node& n, const ModelSpec& model, std::uint64_t seed) {
  r.keys(n, "experiment", {"lambda", "regime", "points", "delta_rule", "c_rule", "h_list", "replications",
                           "estimators", "steps_per_unit", "horizon", "max_extensions", "audit"});
  ExperimentConfig e;
  e.model = model;
  e.master_seed = seed;
  if (!n["lambda"]) r.violations.push_back("experiment.lambda: required");
  else e.lambda_true = r.scalar<double>(n["lambda"], "experiment.lambda");
  if (n["regime"]) {
    const auto name = r.scalar<std::string>(n["regime"], "experiment.regime");
    try {
      e.regime = regime_from_string(name);
    } catch (const Error&) {
      r.violations.push_back(fmt::format("experiment.regime: unknown regime '{}'", name));
    }
  }
  if (!n["points"]) r.violations.push_back("experiment.points: required");
  else e.points = r.doubles(n["points"], "experiment.points");
  if (n["delta_rule"]) e.delta_rule = read_rule(r, n["delta_rule"], "experiment.delta_rule");
  if (n["c_rule"]) e.c_rule = read_rule(r, n["c_rule"], "experiment.c_rule");
  if (n["h_list"]) e.h_list = r.doubles(n["h_list"], "experiment.h_list");
  if (!n["replications"]) r.violations.push_back("experiment.replications: required");
  else e.replications = r.scalar<int>(n["replications"], "experiment.replications");
  if (!n["estimators"]) {
    r.violations.push_back("experiment.estimators: required");
  } else {
    const auto en = n["estimators"];
    if (!en.IsSequence()) throw ParseError(line_of(en), "experiment.estimators", "expected a list");
    for (std::size_t i = 0; i < en.size(); ++i) {
      const auto name = r.scalar<std::string>(en[i], fmt::format("experiment.estimators[{}]", i));
      try {
        e.estimators.push_back(estimator_from_string(name));
      } catch (const Error&) {
        r.violations.push_back(fmt::format("experiment.estimators[{}]: unknown estimator '{}'", i, name));
      }
    }
  }
  if (n["steps_per_unit"]) e.steps_per_unit = r.scalar<double>(n["steps_per_unit"], "experiment.steps_per_unit");
  if (n["horizon"]) e.horizon = r.scalar<double>(n["horizon"], "experiment.horizon");
  if (n["max_extensions"]) e.max_extensions = r.scalar<int>(n["max_extensions"], "experiment.max_extensions");
  if (n["audit"]) e.audit = r.scalar<bool>(n["audit"], "experiment.audit");
  return e;
}

std::string num(double v) { return fmt::format("{:.17g}", v); }

void emit_numbers(YAML::Emitter& out, const std::vector<double>& v) {
  out << YAML::Flow << YAML::BeginSeq;
  for (double x : v) out << num(x);
  out << YAML::EndSeq;
}

void emit_function(YAML::Emitter& out, const TimeFunction& f) {
  out << YAML::Flow << YAML::BeginMap;
  switch (f.form()) {
    case TimeFunction::Form::Constant:
      out << YAML::Key << "type" << YAML::Value << "constant" << YAML::Key << "value" << YAML::Value
          << num(f.pieces()[0][0]);
      break;
    case TimeFunction::Form::Polynomial:
      out << YAML::Key << "type" << YAML::Value << "polynomial" << YAML::Key << "coeffs" << YAML::Value;
      emit_numbers(out, f.pieces()[0]);
      break;
    case TimeFunction::Form::PiecewiseConstant: {
      out << YAML::Key << "type" << YAML::Value << "piecewise_constant" << YAML::Key << "breaks" << YAML::Value;
      emit_numbers(out, f.breaks());
      std::vector<double> values;
      for (const auto& p : f.pieces()) values.push_back(p[0]);
      out << YAML::Key << "values" << YAML::Value;
      emit_numbers(out, values);
      break;
    }
    case TimeFunction::Form::PiecewisePolynomial:
      out << YAML::Key << "type" << YAML::Value << "piecewise_polynomial" << YAML::Key << "breaks" << YAML::Value;
      emit_numbers(out, f.breaks());
      out << YAML::Key << "pieces" << YAML::Value << YAML::BeginSeq;
      for (const auto& p : f.pieces()) emit_numbers(out, p);
      out << YAML::EndSeq;
      break;
  }
  out << YAML::EndMap;
}

void emit_function_matrix(YAML::Emitter& out, const std::vector<std::vector<TimeFunction>>& m) {
  out << YAML::BeginSeq;
  for (const auto& row : m) {
    out << YAML::BeginSeq;
    for (const auto& f : row) emit_function(out, f);
    out << YAML::EndSeq;
  }
  out << YAML::EndSeq;
}

void emit_rule(YAML::Emitter& out, const PowerRule& p) {
  out << YAML::Flow << YAML::BeginMap << YAML::Key << "a" << YAML::Value << num(p.a) << YAML::Key << "b"
      << YAML::Value << num(p.b) << YAML::EndMap;
}

}  // namespace

std::string_view to_string(ModelKind kind) { return kModelNames[static_cast<std::size_t>(kind)]; }

ModelKind model_kind_from_string(std::string_view name) {
  for (std::size_t i = 0; i < kModelNames.size(); ++i)
    if (kModelNames[i] == name) return static_cast<ModelKind>(i);
  throw Error(ErrorKind::InvalidSpec, fmt::format("unknown model kind '{}'", name));
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RunConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.mark.line + 1, "", e.msg);
  }
  Reader r;
  RunConfig cfg;
  if (!root.IsMap()) throw ParseError(line_of(root), "", "config must be a mapping");
  r.keys(root, "", {"model", "trigger", "experiment", "output", "master_seed"});
  if (root["master_seed"]) cfg.master_seed = r.scalar<std::uint64_t>(root["master_seed"], "master_seed");
  if (root["output"]) cfg.output = r.scalar<std::string>(root["output"], "output");
  if (cfg.output.empty()) r.violations.push_back("output: must not be empty");

  if (!root["model"]) {
    r.violations.push_back("model: required section missing");
  } else {
    cfg.model = read_model(r, root["model"]);
  }

  if (const auto t = root["trigger"]) {
    if (t.IsSequence()) {
      for (std::size_t i = 0; i < t.size(); ++i) cfg.trigger.push_back(read_trigger(r, t[i], fmt::format("trigger[{}]", i)));
      if (static_cast<int>(cfg.trigger.size()) != cfg.model.sensors)
        r.violations.push_back(
            fmt::format("trigger: {} entries given for {} sensors", cfg.trigger.size(), cfg.model.sensors));
    } else {
      const auto one = read_trigger(r, t, "trigger");
      cfg.trigger.assign(static_cast<std::size_t>(std::max(cfg.model.sensors, 0)), one);
    }
  }

  if (const auto e = root["experiment"]) {
    cfg.experiment = read_experiment(r, e, cfg.model, cfg.master_seed);
    if (r.violations.empty()) {
      try {
        validate_experiment(*cfg.experiment);
      } catch (const ValidationError& ve) {
        for (const auto& v : ve.violations()) r.violations.push_back(v);
      }
    }
  }
  if (!r.violations.empty()) throw ValidationError(std::move(r.violations));
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ValidationError, fmt::format("cannot read config file '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "master_seed" << YAML::Value << cfg.master_seed;
  out << YAML::Key << "output" << YAML::Value << YAML::DoubleQuoted << cfg.output;

  const ModelSpec& m = cfg.model;
  out << YAML::Key << "model" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "kind" << YAML::Value << std::string(to_string(m.kind));
  out << YAML::Key << "sensors" << YAML::Value << m.sensors;
  if (!m.x.empty()) {
    out << YAML::Key << "x" << YAML::Value;
    emit_numbers(out, m.x);
  }
  if (!m.b.empty()) {
    out << YAML::Key << "b" << YAML::Value << YAML::BeginSeq;
    for (const auto& f : m.b) emit_function(out, f);
    out << YAML::EndSeq;
  }
  if (!m.rho.empty()) {
    out << YAML::Key << "rho" << YAML::Value;
    emit_function_matrix(out, m.rho);
  }
  if (!m.alpha.empty()) {
    out << YAML::Key << "alpha" << YAML::Value;
    emit_numbers(out, m.alpha);
  }
  if (!m.sigma.empty()) {
    out << YAML::Key << "sigma" << YAML::Value;
    emit_function_matrix(out, m.sigma);
  }
  if (!m.y0.empty()) {
    out << YAML::Key << "y0" << YAML::Value;
    emit_numbers(out, m.y0);
  }
  if (!m.deterministic_cross.empty()) {
    out << YAML::Key << "deterministic_cross" << YAML::Value << YAML::BeginSeq;
    for (const auto& row : m.deterministic_cross) {
      out << YAML::Flow << YAML::BeginSeq;
      for (bool b : row) out << b;
      out << YAML::EndSeq;
    }
    out << YAML::EndSeq;
  }
  out << YAML::Key << "magnitude_cap" << YAML::Value << num(m.magnitude_cap);
  out << YAML::EndMap;

  if (!cfg.trigger.empty()) {
    out << YAML::Key << "trigger" << YAML::Value << YAML::BeginSeq;
    for (const auto& t : cfg.trigger) {
      out << YAML::BeginMap;
      out << YAML::Key << "delta_up" << YAML::Value << num(t.delta_up);
      out << YAML::Key << "delta_down" << YAML::Value << num(t.delta_down);
      if (t.c) out << YAML::Key << "c" << YAML::Value << num(*t.c);
      out << YAML::Key << "mode" << YAML::Value
          << (t.mode == TriggerMode::Continuous ? "continuous" : "discrete_sampling");
      if (t.mode == TriggerMode::DiscreteSampling) out << YAML::Key << "h" << YAML::Value << num(t.h);
      out << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }

  if (cfg.experiment) {
    const auto& e = *cfg.experiment;
    out << YAML::Key << "experiment" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "lambda" << YAML::Value << num(e.lambda_true);
    out << YAML::Key << "regime" << YAML::Value << std::string(to_string(e.regime));
    out << YAML::Key << "points" << YAML::Value;
    emit_numbers(out, e.points);
    out << YAML::Key << "delta_rule" << YAML::Value;
    emit_rule(out, e.delta_rule);
    if (e.c_rule) {
      out << YAML::Key << "c_rule" << YAML::Value;
      emit_rule(out, *e.c_rule);
    }
    if (!e.h_list.empty()) {
      out << YAML::Key << "h_list" << YAML::Value;
      emit_numbers(out, e.h_list);
    }
    out << YAML::Key << "replications" << YAML::Value << e.replications;
    out << YAML::Key << "estimators" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (auto est : e.estimators) out << std::string(to_string(est));
    out << YAML::EndSeq;
    out << YAML::Key << "steps_per_unit" << YAML::Value << num(e.steps_per_unit);
    out << YAML::Key << "horizon" << YAML::Value << num(e.horizon);
    out << YAML::Key << "max_extensions" << YAML::Value << e.max_extensions;
    out << YAML::Key << "audit" << YAML::Value << e.audit;
    out << YAML::EndMap;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace onebit
