#include "armimo/emit.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "armimo/errors.hpp"

namespace armimo {
namespace {

using nlohmann::json;

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << text;
  if (!out) throw ConfigError("write to '" + path + "' failed");
}

}  // namespace

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ConfigError("format must be csv or json");
}

std::string format_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto& r : rows) {
    os << csv_field(r.sweep_var) << ',' << opt_number(r.sweep_value) << ','
       << receiver_name(r.receiver) << ',';
    if (!r.error.empty()) {
      os << "error:" << r.error << ",,,,,,";
    } else {
      os << opt_number(r.mc_mean_db) << ',' << opt_number(r.ci_lo_db) << ','
         << opt_number(r.ci_hi_db) << ',' << opt_number(r.deq_thm2_db) << ','
         << opt_number(r.deq_fp_db) << ',' << (r.fp_iters ? std::to_string(*r.fp_iters) : "") << ',';
    }
    os << r.trials << ',' << r.seed << '\n';
  }
  return os.str();
}

std::string pilot_rows_to_csv(const std::vector<PilotRow>& rows) {
  std::ostringstream os;
  os << kPilotCsvHeader << '\n';
  for (const auto& r : rows) {
    os << csv_field(r.sweep_var) << ',' << opt_number(r.sweep_value) << ',' << r.K << ',' << r.n_r
       << ',' << format_number(r.a) << ',';
    if (!r.error.empty()) {
      os << "error:" << r.error << ",,,\n";
      continue;
    }
    os << opt_number(r.p_p_opt_mw) << ',' << opt_number(r.objective) << ',' << csv_field(r.method)
       << ',' << opt_number(r.deq_thm2_db) << '\n';
  }
  return os.str();
}

std::string cdf_to_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << kCdfCsvHeader << '\n';
  for (const auto& r : rows) {
    for (const auto& [db, prob] : r.cdf) {
      os << csv_field(r.sweep_var) << ',' << opt_number(r.sweep_value) << ','
         << receiver_name(r.receiver) << ',' << format_number(db) << ',' << format_number(prob)
         << '\n';
    }
  }
  return os.str();
}

std::string result_to_csv(const ScenarioResult& result) {
  return result.mode == ScenarioMode::PilotOpt ? pilot_rows_to_csv(result.pilot_rows)
                                               : rows_to_csv(result.rows);
}

json result_to_json(const ScenarioResult& result) {
  json j;
  j["name"] = result.name;
  j["mode"] = std::string(mode_name(result.mode));
  j["metadata"] = result.metadata;
  j["rows"] = json::array();
  for (const auto& r : result.rows) {
    json row = {{"sweep_var", r.sweep_var},
                {"sweep_value", opt_json(r.sweep_value)},
                {"receiver", std::string(receiver_name(r.receiver))},
                {"mc_mean_db", opt_json(r.mc_mean_db)},
                {"ci_lo_db", opt_json(r.ci_lo_db)},
                {"ci_hi_db", opt_json(r.ci_hi_db)},
                {"deq_thm2_db", opt_json(r.deq_thm2_db)},
                {"deq_fp_db", opt_json(r.deq_fp_db)},
                {"fp_iters", r.fp_iters ? json(*r.fp_iters) : json(nullptr)},
                {"trials", r.trials},
                {"seed", r.seed},
                {"error", r.error}};
    if (!r.cdf.empty()) row["cdf"] = r.cdf;
    j["rows"].push_back(std::move(row));
  }
  j["pilot_rows"] = json::array();
  for (const auto& r : result.pilot_rows) {
    j["pilot_rows"].push_back({{"sweep_var", r.sweep_var},
                               {"sweep_value", opt_json(r.sweep_value)},
                               {"K", r.K},
                               {"N_r", r.n_r},
                               {"a", r.a},
                               {"p_p_opt_mw", opt_json(r.p_p_opt_mw)},
                               {"objective", opt_json(r.objective)},
                               {"method", r.method},
                               {"deq_thm2_db", opt_json(r.deq_thm2_db)},
                               {"error", r.error}});
  }
  return j;
}

ScenarioResult result_from_json(const json& j) {
  ScenarioResult out;
  try {
    out.name = j.at("name").get<std::string>();
    out.mode = j.at("mode").get<std::string>() == "pilot_opt" ? ScenarioMode::PilotOpt
                                                              : ScenarioMode::Simulate;
    out.metadata = j.at("metadata").get<std::map<std::string, std::string>>();
    for (const auto& row : j.at("rows")) {
      ResultRow r;
      r.sweep_var = row.at("sweep_var").get<std::string>();
      r.sweep_value = opt_from(row, "sweep_value");
      r.receiver = parse_receiver(row.at("receiver").get<std::string>());
      r.mc_mean_db = opt_from(row, "mc_mean_db");
      r.ci_lo_db = opt_from(row, "ci_lo_db");
      r.ci_hi_db = opt_from(row, "ci_hi_db");
      r.deq_thm2_db = opt_from(row, "deq_thm2_db");
      r.deq_fp_db = opt_from(row, "deq_fp_db");
      if (!row.at("fp_iters").is_null()) r.fp_iters = row.at("fp_iters").get<int>();
      r.trials = row.at("trials").get<int>();
      r.seed = row.at("seed").get<std::uint64_t>();
      r.error = row.at("error").get<std::string>();
      if (row.contains("cdf")) r.cdf = row.at("cdf").get<std::vector<std::pair<double, double>>>();
      out.rows.push_back(std::move(r));
    }
    for (const auto& row : j.at("pilot_rows")) {
      PilotRow r;
      r.sweep_var = row.at("sweep_var").get<std::string>();
      r.sweep_value = opt_from(row, "sweep_value");
      r.K = row.at("K").get<int>();
      r.n_r = row.at("N_r").get<int>();
      r.a = row.at("a").get<double>();
      r.p_p_opt_mw = opt_from(row, "p_p_opt_mw");
      r.objective = opt_from(row, "objective");
      r.method = row.at("method").get<std::string>();
      r.deq_thm2_db = opt_from(row, "deq_thm2_db");
      r.error = row.at("error").get<std::string>();
      out.pilot_rows.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed result JSON: ") + e.what());
  }
  return out;
}

void emit(const ScenarioResult& result, OutputFormat format, const std::string& path) {
  if (format == OutputFormat::Json) {
    write_file(path, result_to_json(result).dump(2) + "\n");
    return;
  }
  write_file(path, result_to_csv(result));
  bool has_cdf = false;
  for (const auto& r : result.rows) has_cdf = has_cdf || !r.cdf.empty();
  if (has_cdf) {
    std::filesystem::path p(path);
    const auto side = p.parent_path() / (p.stem().string() + "_cdf.csv");
    write_file(side.string(), cdf_to_csv(result.rows));
  }
}

}  // namespace armimo
