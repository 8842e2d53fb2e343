#include "strandcc/app/config.hpp"

#include <fstream>
#include <sstream>

#include "strandcc/error.hpp"

namespace strandcc::app {

using nlohmann::json;

namespace {

class ConfigReader {
 public:
  explicit ConfigReader(std::filesystem::path source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& where, const std::string& what) const {
    throw Error(ErrorCode::ConfigParse, source_.string() + ": " + where + ": " + what);
  }

  const json& member(const json& obj, const std::string& where, const char* key) const {
    if (!obj.is_object() || !obj.contains(key)) fail(where, std::string("missing required key '") + key + "'");
    return obj.at(key);
  }

  double number(const json& v, const std::string& where) const {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
  }

  int integer(const json& v, const std::string& where) const {
    if (!v.is_number_integer()) fail(where, "expected an integer");
    return v.get<int>();
  }

  std::vector<double> numbers(const json& v, const std::string& where) const {
    if (!v.is_array()) fail(where, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "/" + std::to_string(i)));
    return out;
  }

  std::vector<std::string> strings(const json& v, const std::string& where) const {
    if (!v.is_array()) fail(where, "expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string()) fail(where + "/" + std::to_string(i), "expected a string");
      out.push_back(v[i].get<std::string>());
    }
    return out;
  }

  double number_or(const json& obj, const std::string& where, const char* key, double fallback) const {
    return obj.contains(key) ? number(obj.at(key), where + "/" + key) : fallback;
  }

  int integer_or(const json& obj, const std::string& where, const char* key, int fallback) const {
    return obj.contains(key) ? integer(obj.at(key), where + "/" + key) : fallback;
  }

  Waveform drive(const json& v) const {
    const std::string where = "/drive";
    const double period = number(member(v, where, "period"), where + "/period");
    const double dc = number_or(v, where, "dc", 0.0);
    std::vector<Harmonic> hs;
    if (v.contains("harmonics")) {
      const json& arr = v.at("harmonics");
      if (!arr.is_array()) fail(where + "/harmonics", "expected an array");
      for (std::size_t k = 0; k < arr.size(); ++k) {
        const std::string at = where + "/harmonics/" + std::to_string(k);
        Harmonic h;
        h.order = integer(member(arr[k], at, "order"), at + "/order");
        h.amplitude = number(member(arr[k], at, "amplitude"), at + "/amplitude");
        h.phase = number_or(arr[k], at, "phase", 0.0);
        hs.push_back(h);
      }
    }
    try {
      return Waveform::from_harmonics(period, dc, std::move(hs));
    } catch (const Error& e) {
      fail(where, e.what());
    }
  }

  AnalysisOptions analysis(const json& v) const {
    const std::string where = "/analysis";
    AnalysisOptions a;
    a.grid_size = integer_or(v, where, "grid_size", a.grid_size);
    a.abs_tol = number_or(v, where, "abs_tol", a.abs_tol);
    a.rel_tol = number_or(v, where, "rel_tol", a.rel_tol);
    a.equality_tol = number_or(v, where, "equality_tol", a.equality_tol);
    a.zero_threshold = number_or(v, where, "zero_threshold", a.zero_threshold);
    if (v.contains("oracle")) {
      if (!v.at("oracle").is_boolean()) fail(where + "/oracle", "expected true or false");
      a.oracle = v.at("oracle").get<bool>();
    }
    a.oracle_steps_per_period = integer_or(v, where, "oracle_steps_per_period", a.oracle_steps_per_period);
    a.oracle_settle_periods = integer_or(v, where, "oracle_settle_periods", a.oracle_settle_periods);
    a.oracle_tolerance = number_or(v, where, "oracle_tolerance", a.oracle_tolerance);
    if (a.abs_tol < 0 || a.rel_tol < 0 || a.equality_tol < 0 || a.zero_threshold < 0) {
      fail(where, "tolerances must be >= 0");
    }
    return a;
  }

  InlineNetwork inline_network(const json& v) const {
    const std::string where = "/network";
    InlineNetwork net;
    net.resistances = numbers(member(v, where, "resistances"), where + "/resistances");
    if (v.contains("labels")) net.labels = strings(v.at("labels"), where + "/labels");
    const bool has_inline = v.contains("inductance");
    const bool has_csv = v.contains("inductance_csv");
    if (has_inline == has_csv) fail(where, "give exactly one of 'inductance' or 'inductance_csv'");
    if (has_inline) {
      // Flat row-major list, or a list of rows.
      const json& l = v.at("inductance");
      if (l.is_array() && !l.empty() && l.front().is_array()) {
        for (std::size_t i = 0; i < l.size(); ++i) {
          const std::string row_where = where + "/inductance/" + std::to_string(i);
          const auto row = numbers(l[i], row_where);
          if (row.size() != l.size()) fail(row_where, "rows must have one entry per strand");
          net.inductance.insert(net.inductance.end(), row.begin(), row.end());
        }
      } else {
        net.inductance = numbers(l, where + "/inductance");
      }
    } else {
      const json& p = v.at("inductance_csv");
      if (!p.is_string()) fail(where + "/inductance_csv", "expected a file path");
      std::size_t n = 0;
      net.inductance = read_matrix_csv(resolve(p.get<std::string>()), n);
    }
    const std::size_t n = net.resistances.size();
    if (net.inductance.size() != n * n) {
      fail(where + "/inductance", "expected " + std::to_string(n * n) + " entries for " + std::to_string(n) +
                                      " strands, got " + std::to_string(net.inductance.size()));
    }
    return net;
  }

  Placement placement(const json& v, const std::string& where) const {
    Placement p;
    p.x = number_or(v, where, "x", 0.0);
    p.y = number(member(v, where, "y"), where + "/y");
    p.polarity = integer_or(v, where, "polarity", 1);
    return p;
  }

  LayoutNetwork layout(const json& v) const {
    const std::string where = "/layout";
    LayoutNetwork out;
    out.layout.slot_width = number(member(v, where, "slot_width"), where + "/slot_width");
    out.layout.slot_depth = number(member(v, where, "slot_depth"), where + "/slot_depth");
    out.layout.stack_length = number(member(v, where, "stack_length"), where + "/stack_length");
    out.layout.end_winding_inductance = number_or(v, where, "end_winding_inductance", 0.0);
    const json& strands = member(v, where, "strands");
    if (!strands.is_array() || strands.empty()) fail(where + "/strands", "expected a non-empty array");
    for (std::size_t i = 0; i < strands.size(); ++i) {
      const std::string at = where + "/strands/" + std::to_string(i);
      const json& s = strands[i];
      if (s.contains("label")) {
        if (!s.at("label").is_string()) fail(at + "/label", "expected a string");
        out.labels.push_back(s.at("label").get<std::string>());
      }
      out.resistances.push_back(number(member(s, at, "r_dc"), at + "/r_dc"));
      const json& path = member(s, at, "path");
      if (!path.is_array()) fail(at + "/path", "expected an array of placements");
      StrandPath sp;
      for (std::size_t k = 0; k < path.size(); ++k) sp.push_back(placement(path[k], at + "/path/" + std::to_string(k)));
      out.layout.placements_per_strand.push_back(std::move(sp));
    }
    if (!out.labels.empty() && out.labels.size() != out.resistances.size()) {
      fail(where + "/strands", "either every strand or none must carry a label");
    }
    return out;
  }

  NamedSchedule schedule(const json& v, const std::string& where, std::size_t n) const {
    NamedSchedule s;
    s.name = v.contains("name") && v.at("name").is_string() ? v.at("name").get<std::string>() : "schedule";
    if (v.contains("kind")) {
      const std::string kind = v.at("kind").is_string() ? v.at("kind").get<std::string>() : "";
      if (kind == "identity") {
        s.schedule = TranspositionSchedule::identity(n);
      } else if (kind == "full_cyclic") {
        s.schedule = TranspositionSchedule::full_cyclic(n);
      } else {
        fail(where + "/kind", "expected 'identity' or 'full_cyclic'");
      }
      return s;
    }
    const json& segs = member(v, where, "segments");
    if (!segs.is_array()) fail(where + "/segments", "expected an array");
    for (std::size_t k = 0; k < segs.size(); ++k) {
      const std::string at = where + "/segments/" + std::to_string(k);
      TranspositionSegment seg;
      seg.fraction = number(member(segs[k], at, "fraction"), at + "/fraction");
      const json& perm = member(segs[k], at, "permutation");
      if (!perm.is_array()) fail(at + "/permutation", "expected an array");
      for (std::size_t i = 0; i < perm.size(); ++i) {
        // 1-based in the file.
        seg.permutation.push_back(integer(perm[i], at + "/permutation/" + std::to_string(i)) - 1);
      }
      s.schedule.segments.push_back(std::move(seg));
    }
    try {
      validate_schedule(s.schedule, n);
    } catch (const Error& e) {
      fail(where, e.what());
    }
    return s;
  }

  std::filesystem::path resolve(const std::string& p) const {
    std::filesystem::path path(p);
    if (path.is_relative()) path = source_.parent_path() / path;
    return path;
  }

 private:
  std::filesystem::path source_;
};

std::string line_context(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

std::vector<double> read_matrix_csv(const std::filesystem::path& path, std::size_t& n_out) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigParse, path.string() + ": cannot open matrix file");
  std::vector<double> values;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  for (std::size_t line_no = 1; std::getline(in, line); ++line_no) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t count = 0;
    while (std::getline(ss, cell, ',')) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(cell, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || cell.find_first_not_of(" \t\r", used) != std::string::npos) {
        throw Error(ErrorCode::ConfigParse,
                    path.string() + ":" + std::to_string(line_no) + ": invalid number '" + cell + "'");
      }
      values.push_back(v);
      ++count;
    }
    if (rows == 0) cols = count;
    if (count != cols) {
      throw Error(ErrorCode::ConfigParse, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                              std::to_string(cols) + " columns, got " + std::to_string(count));
    }
    ++rows;
  }
  if (rows == 0 || rows != cols) {
    throw Error(ErrorCode::ConfigParse, path.string() + ": matrix must be square and non-empty");
  }
  n_out = rows;
  return values;
}

SimulationConfig parse_config(const json& doc_in, const std::filesystem::path& source) {
  ConfigReader reader(source);
  const json& doc = doc_in.contains("echo") ? doc_in.at("echo") : doc_in;
  if (!doc.is_object()) reader.fail("/", "expected a JSON object");

  SimulationConfig cfg;
  cfg.source = source;
  cfg.name = doc.contains("name") && doc.at("name").is_string() ? doc.at("name").get<std::string>()
                                                                 : source.stem().string();
  const bool has_net = doc.contains("network");
  const bool has_layout = doc.contains("layout");
  if (has_net == has_layout) reader.fail("/", "give exactly one network source: 'network' or 'layout'");
  if (has_net) cfg.inline_network = reader.inline_network(doc.at("network"));
  if (has_layout) cfg.layout = reader.layout(doc.at("layout"));
  const std::size_t n = has_net ? cfg.inline_network->resistances.size() : cfg.layout->resistances.size();

  cfg.drive = reader.drive(reader.member(doc, "/", "drive"));
  if (doc.contains("analysis")) cfg.analysis = reader.analysis(doc.at("analysis"));
  if (doc.contains("transposition")) {
    if (!has_layout) reader.fail("/transposition", "transposition requires a 'layout' network source");
    cfg.transposition = reader.schedule(doc.at("transposition"), "/transposition", n);
  }
  if (doc.contains("schedules")) {
    const json& arr = doc.at("schedules");
    if (!arr.is_array()) reader.fail("/schedules", "expected an array");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      cfg.schedules.push_back(reader.schedule(arr[k], "/schedules/" + std::to_string(k), n));
    }
  }
  if (doc.contains("sweep")) {
    cfg.sweep_frequencies = reader.numbers(reader.member(doc.at("sweep"), "/sweep", "frequencies"),
                                           "/sweep/frequencies");
  }
  if (doc.contains("output") && doc.at("output").contains("dir")) {
    const json& d = doc.at("output").at("dir");
    if (!d.is_string()) reader.fail("/output/dir", "expected a path");
    cfg.out_dir = reader.resolve(d.get<std::string>());
  }
  return cfg;
}

SimulationConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigParse, path.string() + ": cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigParse, path.string() + ": " + line_context(text, e.byte) + ": syntax error");
  }
  return parse_config(doc, path);
}

namespace {

BundleNetwork checked(const SimulationConfig& config, auto&& make) {
  try {
    BundleNetwork net = make();
    validate_network(net);
    return net;
  } catch (const Error& e) {
    throw Error(ErrorCode::NetworkInvalid, config.source.string() + ": " + e.what());
  }
}

}  // namespace

BundleNetwork build_network(const SimulationConfig& config) {
  return checked(config, [&] {
    if (config.inline_network) {
      const auto& in = *config.inline_network;
      return make_network(in.resistances, in.inductance, in.labels);
    }
    const auto& lay = *config.layout;
    BundleNetwork net = network_from_layout(lay.layout, lay.resistances, lay.labels);
    if (config.transposition) net = apply_transposition(net, lay.layout, config.transposition->schedule);
    return net;
  });
}

BundleNetwork build_network(const SimulationConfig& config, const TranspositionSchedule& schedule) {
  return checked(config, [&] {
    if (!config.layout) {
      throw Error(ErrorCode::NetworkInvalid, "transposition requires a 'layout' network source");
    }
    const auto& lay = *config.layout;
    BundleNetwork net = network_from_layout(lay.layout, lay.resistances, lay.labels);
    return apply_transposition(net, lay.layout, schedule);
  });
}

json echo_config(const SimulationConfig& config, const BundleNetwork& net) {
  json network;
  json labels = json::array();
  json resistances = json::array();
  for (const auto& s : net.strands) {
    labels.push_back(s.label);
    resistances.push_back(s.r_dc);
  }
  json inductance = json::array();
  for (Eigen::Index i = 0; i < net.inductance.rows(); ++i)
    for (Eigen::Index j = 0; j < net.inductance.cols(); ++j) inductance.push_back(net.inductance(i, j));
  network["labels"] = std::move(labels);
  network["resistances"] = std::move(resistances);
  network["inductance"] = std::move(inductance);

  json harmonics = json::array();
  for (const auto& h : config.drive.harmonics()) {
    harmonics.push_back({{"order", h.order}, {"amplitude", h.amplitude}, {"phase", h.phase}});
  }
  const auto& a = config.analysis;
  return {
      {"name", config.name},
      {"network", std::move(network)},
      {"drive", {{"period", config.drive.period()}, {"dc", config.drive.dc()}, {"harmonics", std::move(harmonics)}}},
      {"analysis",
       {{"grid_size", a.grid_size},
        {"abs_tol", a.abs_tol},
        {"rel_tol", a.rel_tol},
        {"equality_tol", a.equality_tol},
        {"zero_threshold", a.zero_threshold},
        {"oracle", a.oracle},
        {"oracle_steps_per_period", a.oracle_steps_per_period},
        {"oracle_settle_periods", a.oracle_settle_periods},
        {"oracle_tolerance", a.oracle_tolerance}}},
  };
}

}  // namespace strandcc::app
