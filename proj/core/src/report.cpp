#include "smartsize/report.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "smartsize/errors.hpp"

namespace smartsize {

namespace {

constexpr const char* kReportHeader = "scenario,setting,theta0_policy,sigma0,sigma_d,power,mean_n,q1_n,q3_n,type1,reps,seed";

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  for (char c : line) {
    if (c == ',') {
      out.push_back(field);
      field.clear();
    } else if (c != '\r') {
      field.push_back(c);
    }
  }
  out.push_back(field);
  return out;
}

template <typename T>
T parse_number(const std::string& s, std::size_t line, const char* column) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(line, std::string("invalid value for ") + column + ": '" + s + "'");
  }
  return v;
}

std::optional<double> parse_optional(const std::string& s, std::size_t line, const char* column) {
  if (s.empty()) return std::nullopt;
  return parse_number<double>(s, line, column);
}

nlohmann::json optional_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> optional_from_json(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_reports_csv(std::ostream& out, std::span<const SimulationReport> reports) {
  out << kReportHeader << '\n';
  for (const auto& r : reports) {
    out << r.scenario << ',' << r.setting << ',' << r.theta0_policy << ',' << format_double(r.sigma0) << ','
        << format_double(r.sigma_d) << ',' << format_optional(r.power) << ',' << format_double(r.mean_n) << ','
        << format_double(r.q1_n) << ',' << format_double(r.q3_n) << ',' << format_optional(r.type1) << ','
        << r.reps << ',' << r.seed << '\n';
  }
}

std::vector<SimulationReport> read_reports_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) throw ParseError(0, "empty report");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kReportHeader) throw ParseError(line_no, "unexpected report header");
  std::vector<SimulationReport> reports;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto f = split(line);
    if (f.size() != 12) throw ParseError(line_no, "expected 12 columns, found " + std::to_string(f.size()));
    SimulationReport r;
    r.scenario = parse_number<int>(f[0], line_no, "scenario");
    r.setting = parse_number<int>(f[1], line_no, "setting");
    r.theta0_policy = f[2];
    r.sigma0 = parse_number<double>(f[3], line_no, "sigma0");
    r.sigma_d = parse_number<double>(f[4], line_no, "sigma_d");
    r.power = parse_optional(f[5], line_no, "power");
    r.mean_n = parse_number<double>(f[6], line_no, "mean_n");
    r.q1_n = parse_number<double>(f[7], line_no, "q1_n");
    r.q3_n = parse_number<double>(f[8], line_no, "q3_n");
    r.type1 = parse_optional(f[9], line_no, "type1");
    r.reps = parse_number<long>(f[10], line_no, "reps");
    r.seed = parse_number<std::uint64_t>(f[11], line_no, "seed");
    reports.push_back(std::move(r));
  }
  return reports;
}

void write_reports_json(std::ostream& out, std::span<const SimulationReport> reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    arr.push_back({{"scenario", r.scenario},
                   {"setting", r.setting},
                   {"theta0_policy", r.theta0_policy},
                   {"sigma0", r.sigma0},
                   {"sigma_d", r.sigma_d},
                   {"power", optional_json(r.power)},
                   {"mean_n", r.mean_n},
                   {"q1_n", r.q1_n},
                   {"q3_n", r.q3_n},
                   {"type1", optional_json(r.type1)},
                   {"reps", r.reps},
                   {"seed", r.seed},
                   {"response_perturbation", "drawn once per trial"}});
    if (r.type1) {
      arr.back()["null_construction"] =
          "continuous: A-branch cell means shifted by the oracle contrast; binary: rescue success rates on A "
          "equalized so both strategies share one success probability";
    }
  }
  out << arr.dump(2) << '\n';
}

std::vector<SimulationReport> read_reports_json(std::istream& in) {
  nlohmann::json arr;
  try {
    in >> arr;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("malformed report JSON: ") + e.what());
  }
  if (!arr.is_array()) throw ParseError(0, "report JSON must be an array");
  std::vector<SimulationReport> reports;
  try {
    for (const auto& j : arr) {
      SimulationReport r;
      r.scenario = j.at("scenario").get<int>();
      r.setting = j.at("setting").get<int>();
      r.theta0_policy = j.at("theta0_policy").get<std::string>();
      r.sigma0 = j.at("sigma0").get<double>();
      r.sigma_d = j.at("sigma_d").get<double>();
      r.power = optional_from_json(j.at("power"));
      r.mean_n = j.at("mean_n").get<double>();
      r.q1_n = j.at("q1_n").get<double>();
      r.q3_n = j.at("q3_n").get<double>();
      r.type1 = optional_from_json(j.at("type1"));
      r.reps = j.at("reps").get<long>();
      r.seed = j.at("seed").get<std::uint64_t>();
      reports.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, std::string("malformed report JSON: ") + e.what());
  }
  return reports;
}

void write_frequentist_csv(std::ostream& out, int scenario, std::span<const FrequentistCell> cells, long reps,
                           std::uint64_t seed) {
  out << "scenario,delta_bias,response_sd,n,power,reps,seed\n";
  for (const auto& c : cells) {
    out << scenario << ',' << format_double(c.delta_bias) << ',' << format_double(c.response_sd) << ',' << c.n
        << ',' << format_double(c.power) << ',' << reps << ',' << seed << '\n';
  }
}

void write_frequentist_json(std::ostream& out, int scenario, std::span<const FrequentistCell> cells, long reps,
                            std::uint64_t seed) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : cells) {
    arr.push_back({{"scenario", scenario},
                   {"delta_bias", c.delta_bias},
                   {"response_sd", c.response_sd},
                   {"n", c.n},
                   {"power", c.power},
                   {"reps", reps},
                   {"seed", seed}});
  }
  out << arr.dump(2) << '\n';
}

void write_power_curve_csv(std::ostream& out, std::span<const std::pair<long, double>> curve) {
  out << "n,power\n";
  for (const auto& [n, p] : curve) out << n << ',' << format_double(p) << '\n';
}

}  // namespace smartsize
