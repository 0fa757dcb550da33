#include "faultfem/study_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace faultfem {

namespace {

const char* kColumns =
    "iteration,n_cells,n_dofs,eta_total,osc_total,flux_error,postpressure_error,"
    "tnorm_error,effectivity,n_marked,endpoint_fraction";

std::string opt_str(const std::optional<double>& v) {
  if (!v || std::isnan(*v)) return "";
  return format_double(*v);
}

std::optional<double> parse_opt(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return std::strtod(s.c_str(), nullptr);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_study_csv(std::ostream& os, const StudyOutput& out) {
  for (const auto& [key, value] : out.config) os << "# " << key << '=' << value << '\n';
  os << kColumns << '\n';
  for (const StudyRecord& r : out.records) {
    os << r.iteration << ',' << r.n_cells << ',' << r.n_dofs << ','
       << format_double(r.eta_total) << ',' << format_double(r.osc_total) << ','
       << opt_str(r.flux_error) << ',' << opt_str(r.postpressure_error) << ','
       << opt_str(r.tnorm_error) << ',' << opt_str(r.effectivity) << ',' << r.n_marked << ','
       << format_double(r.endpoint_fraction) << '\n';
  }
}

StudyOutput read_study_csv(std::istream& is) {
  StudyOutput out;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::string body = line.substr(1);
      if (!body.empty() && body[0] == ' ') body.erase(0, 1);
      const auto eq = body.find('=');
      if (eq == std::string::npos) throw std::runtime_error("csv: malformed config line");
      out.config.emplace_back(body.substr(0, eq), body.substr(eq + 1));
      continue;
    }
    if (!header_seen) {
      if (line != kColumns) throw std::runtime_error("csv: unexpected column header");
      header_seen = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 11) throw std::runtime_error("csv: malformed record line");
    StudyRecord r;
    r.iteration = std::atoi(f[0].c_str());
    r.n_cells = std::atoi(f[1].c_str());
    r.n_dofs = std::atoi(f[2].c_str());
    r.eta_total = std::strtod(f[3].c_str(), nullptr);
    r.osc_total = std::strtod(f[4].c_str(), nullptr);
    r.flux_error = parse_opt(f[5]);
    r.postpressure_error = parse_opt(f[6]);
    r.tnorm_error = parse_opt(f[7]);
    r.effectivity = parse_opt(f[8]);
    r.n_marked = std::atoi(f[9].c_str());
    r.endpoint_fraction = std::strtod(f[10].c_str(), nullptr);
    out.records.push_back(r);
  }
  if (!header_seen) throw std::runtime_error("csv: missing column header");
  return out;
}

void write_study_json(std::ostream& os, const StudyOutput& out) {
  nlohmann::json j;
  j["config"] = nlohmann::json::object();
  for (const auto& [key, value] : out.config) j["config"][key] = value;
  j["records"] = nlohmann::json::array();
  const auto opt = [](const std::optional<double>& v) -> nlohmann::json {
    if (!v || std::isnan(*v)) return nullptr;
    return *v;
  };
  for (const StudyRecord& r : out.records) {
    nlohmann::json rec;
    rec["iteration"] = r.iteration;
    rec["n_cells"] = r.n_cells;
    rec["n_dofs"] = r.n_dofs;
    rec["eta_total"] = r.eta_total;
    rec["osc_total"] = r.osc_total;
    rec["flux_error"] = opt(r.flux_error);
    rec["postpressure_error"] = opt(r.postpressure_error);
    rec["tnorm_error"] = opt(r.tnorm_error);
    rec["effectivity"] = opt(r.effectivity);
    rec["n_marked"] = r.n_marked;
    rec["endpoint_fraction"] = r.endpoint_fraction;
    j["records"].push_back(rec);
  }
  os << j.dump(2) << '\n';
}

StudyOutput read_study_json(std::istream& is) {
  const nlohmann::json j = nlohmann::json::parse(is);
  StudyOutput out;
  for (auto it = j.at("config").begin(); it != j.at("config").end(); ++it)
    out.config.emplace_back(it.key(), it.value().get<std::string>());
  const auto opt = [](const nlohmann::json& v) -> std::optional<double> {
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
  };
  for (const auto& rec : j.at("records")) {
    StudyRecord r;
    r.iteration = rec.at("iteration").get<int>();
    r.n_cells = rec.at("n_cells").get<int>();
    r.n_dofs = rec.at("n_dofs").get<int>();
    r.eta_total = rec.at("eta_total").get<double>();
    r.osc_total = rec.at("osc_total").get<double>();
    r.flux_error = opt(rec.at("flux_error"));
    r.postpressure_error = opt(rec.at("postpressure_error"));
    r.tnorm_error = opt(rec.at("tnorm_error"));
    r.effectivity = opt(rec.at("effectivity"));
    r.n_marked = rec.at("n_marked").get<int>();
    r.endpoint_fraction = rec.at("endpoint_fraction").get<double>();
    out.records.push_back(r);
  }
  return out;
}

}  // namespace faultfem
