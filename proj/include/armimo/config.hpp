#pragma once

// JSON scenario files. Keys mirror Scenario one to one; anything unknown is a
// ConfigError.
//
//   {
//     "name": "fig2", "mode": "simulate",
//     "system": {"K": 5, "n_r": 100, "tau_p": 1, "tau_d": 11, "p_tot": 250,
//                "sigma_p2": 1e-7, "sigma_d2": 1e-7},
//     "user": {"path_loss_db": 90, "a": 0.95, "c": 1, "p_p": 100},
//     "receivers": ["proposed", "conventional_inst"],
//     "trials": 1000, "seed": 7, "threads": 0, "cdf": false,
//     "sweep": {"var": "p_p", "values": [25, 50, 100]}
//   }
//
// A sweep may give "range": [start, step, stop] instead of "values".

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "armimo/scenario.hpp"

namespace armimo {

Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& sc);

// Reads and parses a config file; throws ConfigError.
Scenario load_scenario(const std::string& path);

// "a=0:0.05:0.95" (start:step:stop) or "p_p=10,20,40".
SweepSpec parse_sweep(std::string_view text);

// Inclusive grid start, start+step, ..., stop (rounded to 12 decimals).
std::vector<double> make_range(double start, double step, double stop);

}  // namespace armimo
