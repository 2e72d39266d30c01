#include "ntcp/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ntcp/units.hpp"

namespace ntcp {

using json = nlohmann::ordered_json;

namespace {

struct Unit {
  const char* name;
  double factor;
};

const std::map<Dimension, std::vector<Unit>>& unit_table() {
  static const std::map<Dimension, std::vector<Unit>> table = {
      {Dimension::kFrequency, {{"Hz", 1.0}, {"kHz", 1e3}, {"MHz", 1e6}, {"GHz", 1e9}}},
      {Dimension::kEnergy,
       {{"Hz", units::kPlanck},
        {"kHz", units::kPlanck * 1e3},
        {"MHz", units::kPlanck * 1e6},
        {"GHz", units::kPlanck * 1e9},
        {"J", 1.0},
        {"eV", units::kElectronCharge},
        {"meV", units::kElectronCharge * 1e-3},
        {"ueV", units::kElectronCharge * 1e-6}}},
      {Dimension::kTime, {{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}, {"ps", 1e-12}, {"fs", 1e-15}}},
      {Dimension::kCapacitance, {{"F", 1.0}, {"nF", 1e-9}, {"pF", 1e-12}, {"fF", 1e-15}, {"aF", 1e-18}}},
      {Dimension::kLength, {{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}, {"um", 1e-6}, {"nm", 1e-9}}},
      {Dimension::kCapacitancePerLength,
       {{"F/m", 1.0}, {"pF/m", 1e-12}, {"fF/um", 1e-15 / 1e-6}, {"aF/um", 1e-18 / 1e-6}}},
      {Dimension::kVoltage, {{"V", 1.0}, {"mV", 1e-3}, {"uV", 1e-6}, {"nV", 1e-9}}},
      {Dimension::kTemperature, {{"K", 1.0}, {"mK", 1e-3}}},
  };
  return table;
}

const char* canonical_unit(Dimension dim) {
  switch (dim) {
    case Dimension::kFrequency:
    case Dimension::kEnergy:
      return "GHz";
    case Dimension::kTime:
      return "ns";
    case Dimension::kCapacitance:
      return "aF";
    case Dimension::kLength:
      return "mm";
    case Dimension::kCapacitancePerLength:
      return "aF/um";
    case Dimension::kVoltage:
      return "uV";
    case Dimension::kTemperature:
      return "mK";
  }
  return "";
}

const char* dimension_name(Dimension dim) {
  switch (dim) {
    case Dimension::kFrequency:
      return "frequency";
    case Dimension::kEnergy:
      return "energy";
    case Dimension::kTime:
      return "time";
    case Dimension::kCapacitance:
      return "capacitance";
    case Dimension::kLength:
      return "length";
    case Dimension::kCapacitancePerLength:
      return "capacitance per length";
    case Dimension::kVoltage:
      return "voltage";
    case Dimension::kTemperature:
      return "temperature";
  }
  return "";
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Strict object reader: every key must be consumed.
class Reader {
 public:
  Reader(const json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    if (!obj_.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json& get(const std::string& key) {
    if (!obj_.contains(key)) throw ConfigError(where_ + ": missing '" + key + "'");
    used_.insert(key);
    return obj_.at(key);
  }

  double quantity(const std::string& key, Dimension dim) {
    const json& v = get(key);
    if (!v.is_string()) throw ConfigError(where_ + "." + key + ": expected a string with a unit");
    try {
      return parse_quantity(v.get<std::string>(), dim);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where_ + "." + key + ": " + e.what());
    }
  }

  std::optional<double> optional_quantity(const std::string& key, Dimension dim) {
    if (!has(key)) return std::nullopt;
    return quantity(key, dim);
  }

  double number(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number()) throw ConfigError(where_ + "." + key + ": expected a number");
    return v.get<double>();
  }

  int integer(const std::string& key) {
    const json& v = get(key);
    if (!v.is_number_integer()) throw ConfigError(where_ + "." + key + ": expected an integer");
    return v.get<int>();
  }

  std::string string(const std::string& key) {
    const json& v = get(key);
    if (!v.is_string()) throw ConfigError(where_ + "." + key + ": expected a string");
    return v.get<std::string>();
  }

  bool boolean(const std::string& key) {
    const json& v = get(key);
    if (!v.is_boolean()) throw ConfigError(where_ + "." + key + ": expected true or false");
    return v.get<bool>();
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!used_.count(key)) throw ConfigError(where_ + ": unknown key '" + key + "'");
    }
  }

  const std::string& where() const { return where_; }

 private:
  const json& obj_;
  std::string where_;
  std::set<std::string> used_;
};

DeviceParams parse_device(const json& j) {
  Reader r(j, "device");
  DeviceParams p;
  p.gate_capacitance = r.quantity("gate_capacitance", Dimension::kCapacitance);
  p.junction_capacitance = r.quantity("junction_capacitance", Dimension::kCapacitance);
  p.josephson_energy = r.quantity("josephson_energy", Dimension::kEnergy);
  p.cavity_omega = units::angular(r.quantity("cavity_frequency", Dimension::kFrequency));
  p.cavity_length = r.quantity("cavity_length", Dimension::kLength);
  p.capacitance_per_length = r.quantity("capacitance_per_length", Dimension::kCapacitancePerLength);
  if (r.has("ac_amplitude")) p.ac_amplitude = r.quantity("ac_amplitude", Dimension::kVoltage);
  if (r.has("quality_factor")) p.quality_factor = r.number("quality_factor");
  if (r.has("t1")) p.t1 = r.quantity("t1", Dimension::kTime);
  if (r.has("t2")) p.t2 = r.quantity("t2", Dimension::kTime);
  p.gap = r.optional_quantity("gap", Dimension::kEnergy);
  p.temperature = r.optional_quantity("temperature", Dimension::kTemperature);
  if (r.has("dielectric_constant")) p.dielectric_constant = r.number("dielectric_constant");
  p.charging_energy_override = r.optional_quantity("charging_energy", Dimension::kEnergy);
  if (auto g = r.optional_quantity("coupling", Dimension::kFrequency)) p.coupling_override = units::angular(*g);
  r.finish();
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return p;
}

ProtocolConfig parse_protocol(const json& j) {
  Reader r(j, "protocol");
  ProtocolConfig c;
  c.m = r.integer("m");
  c.k = r.integer("k");
  c.n = r.integer("n");
  if (auto w = r.optional_quantity("rabi", Dimension::kFrequency)) c.rabi = units::angular(*w);
  c.ac_amplitude = r.optional_quantity("ac_amplitude", Dimension::kVoltage);
  if (c.rabi.has_value() == c.ac_amplitude.has_value()) {
    throw ConfigError("protocol: give exactly one of 'rabi' and 'ac_amplitude'");
  }
  if (r.has("spectators")) c.options.spectators = r.integer("spectators");
  if (r.has("coupling_source")) {
    const std::string s = r.string("coupling_source");
    if (s == "required") {
      c.options.use_device_coupling = false;
    } else if (s == "device") {
      c.options.use_device_coupling = true;
    } else {
      throw ConfigError("protocol.coupling_source: expected 'required' or 'device'");
    }
  }
  if (r.has("phase_error")) c.options.phase_error = r.number("phase_error");
  if (r.has("step3_decoupling")) {
    const std::string s = r.string("step3_decoupling");
    if (s == "cavity") {
      c.options.step3 = Step3Decoupling::kCavityDetuned;
    } else if (s == "dc") {
      c.options.step3 = Step3Decoupling::kDcVoltage;
    } else {
      throw ConfigError("protocol.step3_decoupling: expected 'cavity' or 'dc'");
    }
  }
  r.finish();
  return c;
}

IntegratorConfig parse_integrator(const json& j) {
  Reader r(j, "simulation.integrator");
  IntegratorConfig c;
  if (r.has("method")) {
    const std::string m = r.string("method");
    if (m == "piecewise-exponential") {
      c.method = IntegratorMethod::kPiecewiseExponential;
    } else if (m == "rk4") {
      c.method = IntegratorMethod::kRk4;
    } else {
      throw ConfigError("simulation.integrator.method: expected 'piecewise-exponential' or 'rk4'");
    }
  }
  if (r.has("step")) {
    const json& s = r.get("step");
    if (s.is_string() && s.get<std::string>() == "auto") {
      c.step = 0.0;
    } else if (s.is_string()) {
      c.step = parse_quantity(s.get<std::string>(), Dimension::kTime);
      if (!(c.step > 0.0)) throw ConfigError("simulation.integrator.step must be positive");
    } else {
      throw ConfigError("simulation.integrator.step: expected 'auto' or a time");
    }
  }
  if (r.has("tolerance")) {
    c.tolerance = r.number("tolerance");
    if (!(c.tolerance > 0.0)) throw ConfigError("simulation.integrator.tolerance must be positive");
  }
  if (r.has("max_steps")) c.max_steps = r.get("max_steps").get<long>();
  if (r.has("use_periodicity")) c.use_periodicity = r.boolean("use_periodicity");
  r.finish();
  return c;
}

SimulationConfig parse_simulation(const json& j) {
  Reader r(j, "simulation");
  SimulationConfig c;
  if (r.has("fock_dim")) c.fock_dim = r.integer("fock_dim");
  if (c.fock_dim < 2) throw ConfigError("simulation.fock_dim must be at least 2");
  if (r.has("frame")) {
    try {
      c.frame = parse_frame(r.string("frame"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("simulation.frame: ") + e.what());
    }
  }
  if (r.has("integrator")) c.integrator = parse_integrator(r.get("integrator"));
  if (r.has("cavity_states")) {
    const json& list = r.get("cavity_states");
    if (!list.is_array() || list.empty()) throw ConfigError("simulation.cavity_states: expected a nonempty list");
    c.cavity_states.clear();
    for (const auto& s : list) {
      if (!s.is_string()) throw ConfigError("simulation.cavity_states: expected strings");
      try {
        c.cavity_states.push_back(parse_cavity_spec(s.get<std::string>()));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("simulation.cavity_states: ") + e.what());
      }
    }
  }
  if (r.has("max_dimension")) c.max_dimension = r.number("max_dimension");
  if (r.has("keep_idle_coupling")) c.keep_idle_coupling = r.boolean("keep_idle_coupling");
  if (r.has("truncation_check")) c.truncation_check = r.boolean("truncation_check");
  r.finish();
  return c;
}

OutputConfig parse_output(const json& j) {
  Reader r(j, "output");
  OutputConfig c;
  if (r.has("format")) {
    try {
      c.format = parse_format(r.string("format"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("output.format: ") + e.what());
    }
  }
  if (r.has("path")) c.path = r.string("path");
  r.finish();
  return c;
}

double axis_value(SweepParameter p, const json& v) {
  if (p == SweepParameter::kOmega) {
    if (!v.is_string()) throw ConfigError("sweep Omega values need units, e.g. \"600 MHz\"");
    return units::angular(parse_quantity(v.get<std::string>(), Dimension::kFrequency));
  }
  if (!v.is_number()) throw ConfigError(std::string("sweep ") + to_string(p) + " values must be numbers");
  const double x = v.get<double>();
  if (p != SweepParameter::kPhaseError && x != std::floor(x)) {
    throw ConfigError(std::string("sweep ") + to_string(p) + " values must be integers");
  }
  return x;
}

std::vector<SweepAxis> parse_sweep(const json& j) {
  Reader r(j, "sweep");
  const json& axes = r.get("axes");
  r.finish();
  if (!axes.is_array() || axes.empty() || axes.size() > 2) throw ConfigError("sweep.axes: expected one or two axes");
  std::vector<SweepAxis> out;
  for (const auto& a : axes) {
    Reader ar(a, "sweep.axes[]");
    SweepAxis axis;
    try {
      axis.parameter = parse_sweep_parameter(ar.string("name"));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    const json& values = ar.get("values");
    ar.finish();
    if (!values.is_array() || values.empty()) throw ConfigError("sweep axis values: expected a nonempty list");
    for (const auto& v : values) axis.values.push_back(axis_value(axis.parameter, v));
    out.push_back(std::move(axis));
  }
  return out;
}

json device_json(const DeviceParams& p) {
  json j;
  j["gate_capacitance"] = format_quantity(p.gate_capacitance, Dimension::kCapacitance);
  j["junction_capacitance"] = format_quantity(p.junction_capacitance, Dimension::kCapacitance);
  j["josephson_energy"] = format_quantity(p.josephson_energy, Dimension::kEnergy);
  j["cavity_frequency"] = format_quantity(units::hertz(p.cavity_omega), Dimension::kFrequency);
  j["cavity_length"] = format_quantity(p.cavity_length, Dimension::kLength);
  j["capacitance_per_length"] = format_quantity(p.capacitance_per_length, Dimension::kCapacitancePerLength);
  j["ac_amplitude"] = format_quantity(p.ac_amplitude, Dimension::kVoltage);
  j["quality_factor"] = p.quality_factor;
  j["t1"] = format_quantity(p.t1, Dimension::kTime);
  j["t2"] = format_quantity(p.t2, Dimension::kTime);
  if (p.gap) j["gap"] = format_quantity(*p.gap, Dimension::kEnergy);
  if (p.temperature) j["temperature"] = format_quantity(*p.temperature, Dimension::kTemperature);
  j["dielectric_constant"] = p.dielectric_constant;
  if (p.charging_energy_override) {
    j["charging_energy"] = format_quantity(*p.charging_energy_override, Dimension::kEnergy);
  }
  if (p.coupling_override) {
    j["coupling"] = format_quantity(units::hertz(*p.coupling_override), Dimension::kFrequency);
  }
  return j;
}

const char* method_name(IntegratorMethod m) {
  return m == IntegratorMethod::kRk4 ? "rk4" : "piecewise-exponential";
}

json checks_json(const std::vector<ValidityCheck>& checks) {
  json out = json::array();
  for (const auto& c : checks) {
    out.push_back({{"name", c.name}, {"value", c.value}, {"level", to_string(c.level)}, {"message", c.message}});
  }
  return out;
}

json row_json(const ReportRow& row) {
  json j;
  for (const auto& [name, value] : row.axes) j[name] = value;
  j["fidelity"] = row.fidelity;
  j["avg_gate_fidelity"] = row.avg_gate_fidelity;
  j["leakage"] = row.leakage;
  j["eps0"] = row.eps.eps0;
  j["eps1"] = row.eps.eps1;
  j["eps2"] = row.eps.eps2;
  j["tau_ns"] = row.tau_ns;
  j["total_ns"] = row.total_ns;
  j["g_required_mhz"] = row.g_required_mhz;
  return j;
}

}  // namespace

double parse_quantity(const std::string& text, Dimension dim) {
  static const std::regex pattern(R"(\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z/]+)\s*)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) {
    throw std::invalid_argument("cannot parse quantity '" + text + "' (expected '<number> <unit>')");
  }
  const double value = std::stod(m[1]);
  const std::string unit = m[2];
  for (const auto& u : unit_table().at(dim)) {
    if (unit == u.name) return value * u.factor;
  }
  std::string known;
  for (const auto& u : unit_table().at(dim)) known += std::string(known.empty() ? "" : ", ") + u.name;
  throw std::invalid_argument("unit '" + unit + "' is not a " + dimension_name(dim) + " unit (" + known + ")");
}

std::string format_quantity(double value, Dimension dim) {
  const char* unit = canonical_unit(dim);
  for (const auto& u : unit_table().at(dim)) {
    if (std::string(u.name) == unit) return shortest(value / u.factor) + " " + unit;
  }
  throw std::logic_error("missing canonical unit");
}

RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed config: ") + e.what());
  }
  try {
    Reader r(j, "config");
    RunConfig c;
    c.device = parse_device(r.get("device"));
    c.protocol = parse_protocol(r.get("protocol"));
    if (r.has("simulation")) c.simulation = parse_simulation(r.get("simulation"));
    if (r.has("output")) c.output = parse_output(r.get("output"));
    if (r.has("sweep")) c.sweep = parse_sweep(r.get("sweep"));
    r.finish();
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& c) {
  json j;
  j["device"] = device_json(c.device);
  json p;
  p["m"] = c.protocol.m;
  p["k"] = c.protocol.k;
  p["n"] = c.protocol.n;
  if (c.protocol.rabi) p["rabi"] = format_quantity(units::hertz(*c.protocol.rabi), Dimension::kFrequency);
  if (c.protocol.ac_amplitude) p["ac_amplitude"] = format_quantity(*c.protocol.ac_amplitude, Dimension::kVoltage);
  p["spectators"] = c.protocol.options.spectators;
  p["coupling_source"] = c.protocol.options.use_device_coupling ? "device" : "required";
  p["phase_error"] = c.protocol.options.phase_error;
  p["step3_decoupling"] = c.protocol.options.step3 == Step3Decoupling::kCavityDetuned ? "cavity" : "dc";
  j["protocol"] = p;

  const SimulationConfig& s = c.simulation;
  json sim;
  sim["fock_dim"] = s.fock_dim;
  sim["frame"] = to_string(s.frame);
  json integ;
  integ["method"] = method_name(s.integrator.method);
  integ["step"] = s.integrator.step > 0.0 ? format_quantity(s.integrator.step, Dimension::kTime) : "auto";
  integ["tolerance"] = s.integrator.tolerance;
  integ["max_steps"] = s.integrator.max_steps;
  integ["use_periodicity"] = s.integrator.use_periodicity;
  sim["integrator"] = integ;
  json states = json::array();
  for (const auto& st : s.cavity_states) states.push_back(st.label());
  sim["cavity_states"] = states;
  sim["max_dimension"] = s.max_dimension;
  sim["keep_idle_coupling"] = s.keep_idle_coupling;
  sim["truncation_check"] = s.truncation_check;
  j["simulation"] = sim;

  j["output"] = {{"format", c.output.format == OutputFormat::kCsv ? "csv" : "json"}, {"path", c.output.path}};
  if (!c.sweep.empty()) {
    json axes = json::array();
    for (const auto& a : c.sweep) {
      json values = json::array();
      for (double v : a.values) {
        if (a.parameter == SweepParameter::kOmega) {
          values.push_back(format_quantity(units::hertz(v), Dimension::kFrequency));
        } else if (a.parameter == SweepParameter::kPhaseError) {
          values.push_back(v);
        } else {
          values.push_back(static_cast<long>(v));
        }
      }
      axes.push_back({{"name", to_string(a.parameter)}, {"values", values}});
    }
    j["sweep"] = {{"axes", axes}};
  }
  return j.dump(2) + "\n";
}

double protocol_rabi(const RunConfig& c) {
  if (c.protocol.rabi) return *c.protocol.rabi;
  return rabi_omega(c.device, *c.protocol.ac_amplitude);
}

Derivation derive_from_config(const RunConfig& c) {
  return derive(c.device, c.protocol.m, c.protocol.k, c.protocol.n, protocol_rabi(c), c.protocol.options);
}

SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "Omega") return SweepParameter::kOmega;
  if (name == "m") return SweepParameter::kM;
  if (name == "k") return SweepParameter::kK;
  if (name == "fock_dim") return SweepParameter::kFockDim;
  if (name == "phase_error") return SweepParameter::kPhaseError;
  throw std::invalid_argument("unknown sweep axis '" + name + "' (Omega, m, k, fock_dim, phase_error)");
}

const char* to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::kOmega:
      return "Omega";
    case SweepParameter::kM:
      return "m";
    case SweepParameter::kK:
      return "k";
    case SweepParameter::kFockDim:
      return "fock_dim";
    case SweepParameter::kPhaseError:
      return "phase_error";
  }
  return "?";
}

SweepAxis parse_sweep_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw std::invalid_argument("sweep axis '" + text + "' must look like name=v1,v2");
  SweepAxis axis;
  axis.parameter = parse_sweep_parameter(text.substr(0, eq));
  std::stringstream ss(text.substr(eq + 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    json v;
    if (axis.parameter == SweepParameter::kOmega) {
      v = item;
    } else {
      try {
        std::size_t used = 0;
        v = std::stod(item, &used);
        if (used != item.size()) throw std::invalid_argument("trailing characters");
      } catch (const std::exception&) {
        throw std::invalid_argument("bad sweep value '" + item + "'");
      }
    }
    try {
      axis.values.push_back(axis_value(axis.parameter, v));
    } catch (const ConfigError& e) {
      throw std::invalid_argument(e.what());
    }
  }
  if (axis.values.empty()) throw std::invalid_argument("sweep axis '" + text + "' has no values");
  return axis;
}

OutputFormat parse_format(const std::string& text) {
  if (text == "csv") return OutputFormat::kCsv;
  if (text == "json") return OutputFormat::kJson;
  throw std::invalid_argument("unknown format '" + text + "' (csv, json)");
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string derivation_table(const Derivation& d, const std::vector<ValidityCheck>& checks) {
  const ProtocolParams& q = d.params;
  const ValidityReport& r = d.report;
  std::ostringstream os;
  auto line = [&](const std::string& name, const std::string& value) {
    os << "  " << name << std::string(name.size() < 24 ? 24 - name.size() : 1, ' ') << value << "\n";
  };
  auto mhz = [](double w) { return format_number(units::hertz(w) * 1e-6) + " MHz"; };
  auto ghz = [](double w) { return format_number(units::hertz(w) * 1e-9) + " GHz"; };
  auto ns = [](double t) { return format_number(t * 1e9) + " ns"; };
  os << "protocol (m = " << q.m << ", k = " << q.k << ", n = " << q.n << ", spectators = " << q.spectators << ")\n";
  line("omega_c/2pi", ghz(q.cavity_omega));
  line("|delta|/2pi", mhz(std::abs(q.delta)));
  line("delta'/2pi", mhz(q.delta_prime));
  line("tau", ns(q.tau));
  line("t_op = 3 tau", ns(q.total_time()));
  line("g_required/2pi", mhz(q.g_required));
  line("g_device/2pi", mhz(q.g_device));
  line("g_used/2pi", mhz(q.g_used));
  line("lambda/2pi", mhz(q.lambda));
  line("8 lambda tau / pi", format_number(8.0 * q.lambda * q.tau / std::numbers::pi));
  line("Omega/2pi", mhz(q.rabi));
  line("omega0 step1/2pi", ghz(q.omega0_step1));
  line("omega0 step2/2pi", ghz(q.omega0_step2));
  line("drive step1/2pi", ghz(q.drive_omega_step1));
  line("drive step2/2pi", ghz(q.drive_omega_step2));
  line("ng1_dc step3", format_number(q.ng1_dc_step3));
  line("ng_dc step3", format_number(q.ng_dc_step3));
  line("eps0", format_number(r.eps.eps0));
  line("eps1", format_number(r.eps.eps1));
  line("eps2", format_number(r.eps.eps2));
  line("kappa^-1", ns(r.cavity_lifetime));
  os << "checks\n";
  for (const auto& c : checks) os << "  [" << to_string(c.level) << "] " << c.message << "\n";
  return os.str();
}

std::string derivation_json(const Derivation& d, const std::vector<ValidityCheck>& checks) {
  const ProtocolParams& q = d.params;
  const ValidityReport& r = d.report;
  json j;
  j["m"] = q.m;
  j["k"] = q.k;
  j["n"] = q.n;
  j["spectators"] = q.spectators;
  j["delta_mhz"] = units::hertz(q.delta) * 1e-6;
  j["delta_prime_mhz"] = units::hertz(q.delta_prime) * 1e-6;
  j["tau_ns"] = q.tau * 1e9;
  j["total_ns"] = q.total_time() * 1e9;
  j["g_required_mhz"] = units::hertz(q.g_required) * 1e-6;
  j["g_device_mhz"] = units::hertz(q.g_device) * 1e-6;
  j["g_used_mhz"] = units::hertz(q.g_used) * 1e-6;
  j["lambda_mhz"] = units::hertz(q.lambda) * 1e-6;
  j["rabi_mhz"] = units::hertz(q.rabi) * 1e-6;
  j["omega0_step1_ghz"] = units::hertz(q.omega0_step1) * 1e-9;
  j["omega0_step2_ghz"] = units::hertz(q.omega0_step2) * 1e-9;
  j["ng1_dc_step3"] = q.ng1_dc_step3;
  j["ng_dc_step3"] = q.ng_dc_step3;
  j["eps0"] = r.eps.eps0;
  j["eps1"] = r.eps.eps1;
  j["eps2"] = r.eps.eps2;
  j["ratio_omega_over_delta"] = r.ratio_omega_over_delta;
  j["ratio_omega_over_g"] = r.ratio_omega_over_g;
  j["g_mismatch"] = r.g_mismatch;
  j["cavity_lifetime_ns"] = r.cavity_lifetime * 1e9;
  j["checks"] = checks_json(checks);
  return j.dump(2) + "\n";
}

std::string schedule_document(const PulseSchedule& schedule) {
  json steps = json::array();
  for (const auto& s : schedule.steps) {
    json qubits = json::array();
    for (std::size_t i = 0; i < s.knobs.size(); ++i) {
      const QubitKnobs& k = s.knobs[i];
      qubits.push_back({{"qubit", i + 1},
                        {"flux_ratio", k.flux_ratio},
                        {"ng_dc", k.ng_dc},
                        {"ac_amplitude_uV", k.ac_amplitude * 1e6},
                        {"ac_frequency_ghz", units::hertz(k.ac_frequency) * 1e-9},
                        {"ac_phase_rad", k.ac_phase}});
    }
    steps.push_back(
        {{"label", s.label}, {"duration_ns", s.duration * 1e9}, {"cavity_detuned", s.cavity_detuned}, {"qubits", qubits}});
  }
  return json{{"steps", steps}}.dump(2) + "\n";
}

std::string rows_to_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  if (rows.empty()) return "";
  for (const auto& [name, value] : rows.front().axes) os << name << ",";
  os << "fidelity,avg_gate_fidelity,leakage,eps0,eps1,eps2,tau_ns,total_ns,g_required_mhz\n";
  for (const auto& row : rows) {
    for (const auto& [name, value] : row.axes) os << value << ",";
    os << format_number(row.fidelity) << "," << format_number(row.avg_gate_fidelity) << ","
       << format_number(row.leakage) << "," << format_number(row.eps.eps0) << "," << format_number(row.eps.eps1)
       << "," << format_number(row.eps.eps2) << "," << format_number(row.tau_ns) << ","
       << format_number(row.total_ns) << "," << format_number(row.g_required_mhz) << "\n";
  }
  return os.str();
}

std::string rows_to_json(const std::vector<ReportRow>& rows) {
  json out = json::array();
  for (const auto& row : rows) out.push_back(row_json(row));
  return out.dump(2) + "\n";
}

std::vector<ReportRow> simulation_rows(const Derivation& d, const FidelityReport& report) {
  std::vector<ReportRow> rows;
  for (const auto& s : report.per_state) {
    ReportRow row;
    row.axes = {{"state", s.label}};
    row.fidelity = s.fidelity;
    row.avg_gate_fidelity = s.average_fidelity;
    row.leakage = s.leakage;
    row.eps = d.report.eps;
    row.tau_ns = d.params.tau * 1e9;
    row.total_ns = d.params.total_time() * 1e9;
    row.g_required_mhz = units::hertz(d.params.g_required) * 1e-6;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string simulation_json(const Derivation& d, const FidelityReport& report, Frame frame) {
  json j;
  j["frame"] = to_string(frame);
  j["process_fidelity"] = report.process_fidelity;
  j["avg_gate_fidelity"] = report.average_gate_fidelity;
  j["leakage"] = report.leakage;
  j["spread"] = report.spread;
  json states = json::array();
  for (const auto& row : simulation_rows(d, report)) states.push_back(row_json(row));
  j["per_state"] = states;
  if (report.truncation.computed) {
    j["truncation"] = {{"fock_dim", report.truncation.fock_dim},
                       {"half_dim", report.truncation.half_dim},
                       {"fidelity_delta", report.truncation.fidelity_delta}};
  }
  j["phase_residuals"] = report.phase_residuals;
  return j.dump(2) + "\n";
}

}  // namespace ntcp
