#pragma once

// CSV / JSON output of scenario results. Numbers are written with 9 significant
// digits in CSV and at full precision in JSON; empty CSV fields mean "not
// computed". A rejected sweep point carries "error:<Name>" in mc_mean_db.

#include <string>
#include <vector>

#include <json.hpp>

#include "armimo/scenario.hpp"

namespace armimo {

enum class OutputFormat { Csv, Json };

// Throws ConfigError for anything but "csv" / "json".
OutputFormat parse_format(std::string_view name);

inline constexpr const char* kCsvHeader =
    "sweep_var,sweep_value,receiver,mc_mean_db,ci_lo_db,ci_hi_db,deq_thm2_db,deq_fp_db,fp_iters,trials,seed";
inline constexpr const char* kPilotCsvHeader =
    "sweep_var,sweep_value,K,N_r,a,p_p_opt_mw,objective,method,deq_thm2_db";
inline constexpr const char* kCdfCsvHeader = "sweep_var,sweep_value,receiver,sinr_db,probability";

std::string format_number(double v);

std::string rows_to_csv(const std::vector<ResultRow>& rows);
std::string pilot_rows_to_csv(const std::vector<PilotRow>& rows);
std::string cdf_to_csv(const std::vector<ResultRow>& rows);
// CSV of whichever row kind the result's mode produces.
std::string result_to_csv(const ScenarioResult& result);

nlohmann::json result_to_json(const ScenarioResult& result);
ScenarioResult result_from_json(const nlohmann::json& j);

// Writes `result` to `path`. For CSV with CDF data a sibling "<stem>_cdf.csv"
// is written too. Throws ConfigError when the file cannot be written.
void emit(const ScenarioResult& result, OutputFormat format, const std::string& path);

}  // namespace armimo
