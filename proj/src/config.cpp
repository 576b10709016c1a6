#include "armimo/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "armimo/errors.hpp"

namespace armimo {
namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : j.items()) {
    if (!ok.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

UserTemplate user_from_json(const json& j) {
  check_keys(j, {"path_loss_db", "a", "c", "p_p"}, "user");
  UserTemplate u;
  read(j, "path_loss_db", u.path_loss_db);
  read(j, "a", u.a);
  read(j, "c", u.c);
  read(j, "p_p", u.p_p);
  return u;
}

json user_to_json(const UserTemplate& u) {
  return {{"path_loss_db", u.path_loss_db}, {"a", u.a}, {"c", u.c}, {"p_p", u.p_p}};
}

}  // namespace

std::vector<double> make_range(double start, double step, double stop) {
  if (!(step > 0.0) || stop < start) throw ConfigError("range needs step > 0 and stop >= start");
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (n > 1000000) throw ConfigError("range has too many points");
  std::vector<double> out;
  for (long i = 0; i < n; ++i) out.push_back(std::round((start + i * step) * 1e12) / 1e12);
  return out;
}

SweepSpec parse_sweep(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq == 0) throw ConfigError("sweep must look like var=start:step:stop");
  SweepSpec s;
  s.var = std::string(text.substr(0, eq));
  const std::string body(text.substr(eq + 1));
  auto number = [&](const std::string& tok) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ConfigError("bad number '" + tok + "' in sweep");
    }
  };
  std::vector<std::string> parts;
  const char sep = body.find(':') != std::string::npos ? ':' : ',';
  std::stringstream ss(body);
  for (std::string tok; std::getline(ss, tok, sep);) parts.push_back(tok);
  if (sep == ':') {
    if (parts.size() != 3) throw ConfigError("range sweep needs start:step:stop");
    s.values = make_range(number(parts[0]), number(parts[1]), number(parts[2]));
  } else {
    for (const auto& p : parts) s.values.push_back(number(p));
  }
  if (s.values.empty()) throw ConfigError("sweep grid is empty");
  return s;
}

Scenario scenario_from_json(const json& j) {
  check_keys(j, {"name", "mode", "system", "user", "users", "assumed_a", "receivers", "trials", "seed",
                 "threads", "cdf", "n_r_per_user", "sweep"},
             "scenario");
  Scenario sc;
  read(j, "name", sc.name);
  if (j.contains("mode")) {
    std::string m;
    read(j, "mode", m);
    if (m == "simulate") {
      sc.mode = ScenarioMode::Simulate;
    } else if (m == "pilot_opt") {
      sc.mode = ScenarioMode::PilotOpt;
    } else {
      throw ConfigError("mode must be simulate or pilot_opt");
    }
  }
  if (j.contains("system")) {
    const json& s = j.at("system");
    check_keys(s, {"K", "n_r", "tau_p", "tau_d", "p_tot", "sigma_p2", "sigma_d2"}, "system");
    read(s, "K", sc.cfg.K);
    read(s, "n_r", sc.cfg.n_r);
    read(s, "tau_p", sc.cfg.tau_p);
    read(s, "tau_d", sc.cfg.tau_d);
    read(s, "p_tot", sc.cfg.p_tot);
    read(s, "sigma_p2", sc.cfg.sigma_p2);
    read(s, "sigma_d2", sc.cfg.sigma_d2);
  }
  if (j.contains("user")) sc.user = user_from_json(j.at("user"));
  if (j.contains("users")) {
    if (!j.at("users").is_array()) throw ConfigError("users must be an array");
    for (const auto& u : j.at("users")) sc.users.push_back(user_from_json(u));
  }
  if (j.contains("assumed_a") && !j.at("assumed_a").is_null()) {
    double a = 0.0;
    read(j, "assumed_a", a);
    sc.assumed_a = a;
  }
  if (j.contains("receivers")) {
    std::vector<std::string> names;
    read(j, "receivers", names);
    sc.receivers.clear();
    for (const auto& n : names) sc.receivers.push_back(parse_receiver(n));
  }
  read(j, "trials", sc.trials);
  read(j, "seed", sc.seed);
  read(j, "threads", sc.threads);
  read(j, "cdf", sc.cdf);
  read(j, "n_r_per_user", sc.n_r_per_user);
  if (j.contains("sweep") && !j.at("sweep").is_null()) {
    const json& s = j.at("sweep");
    check_keys(s, {"var", "values", "range"}, "sweep");
    SweepSpec sw;
    read(s, "var", sw.var);
    if (s.contains("values") == s.contains("range")) {
      throw ConfigError("sweep needs exactly one of values or range");
    }
    if (s.contains("values")) {
      read(s, "values", sw.values);
    } else {
      std::vector<double> r;
      read(s, "range", r);
      if (r.size() != 3) throw ConfigError("range is [start, step, stop]");
      sw.values = make_range(r[0], r[1], r[2]);
    }
    sc.sweep = sw;
  }
  sc.validate();
  return sc;
}

json scenario_to_json(const Scenario& sc) {
  json j;
  j["name"] = sc.name;
  j["mode"] = std::string(mode_name(sc.mode));
  j["system"] = {{"K", sc.cfg.K},           {"n_r", sc.cfg.n_r},         {"tau_p", sc.cfg.tau_p},
                 {"tau_d", sc.cfg.tau_d},   {"p_tot", sc.cfg.p_tot},     {"sigma_p2", sc.cfg.sigma_p2},
                 {"sigma_d2", sc.cfg.sigma_d2}};
  j["user"] = user_to_json(sc.user);
  if (!sc.users.empty()) {
    j["users"] = json::array();
    for (const auto& u : sc.users) j["users"].push_back(user_to_json(u));
  }
  if (sc.assumed_a) j["assumed_a"] = *sc.assumed_a;
  j["receivers"] = json::array();
  for (ReceiverKind k : sc.receivers) j["receivers"].push_back(std::string(receiver_name(k)));
  j["trials"] = sc.trials;
  j["seed"] = sc.seed;
  j["threads"] = sc.threads;
  j["cdf"] = sc.cdf;
  j["n_r_per_user"] = sc.n_r_per_user;
  if (sc.sweep) j["sweep"] = {{"var", sc.sweep->var}, {"values", sc.sweep->values}};
  return j;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return scenario_from_json(j);
}

}  // namespace armimo
