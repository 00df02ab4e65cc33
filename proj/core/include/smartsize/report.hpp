#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "smartsize/simulation.hpp"

namespace smartsize {

// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

// Columns: scenario,setting,theta0_policy,sigma0,sigma_d,power,mean_n,q1_n,q3_n,type1,reps,seed.
// Absent power or type1 is written as an empty field.
void write_reports_csv(std::ostream& out, std::span<const SimulationReport> reports);
std::vector<SimulationReport> read_reports_csv(std::istream& in);

// A JSON array with one object per report; absent fields are null. Each
// object also says how response rates were perturbed and, for type I error
// reports, how the null scenario was built; readers ignore those fields.
void write_reports_json(std::ostream& out, std::span<const SimulationReport> reports);
std::vector<SimulationReport> read_reports_json(std::istream& in);

// Columns: scenario,delta_bias,response_sd,n,power,reps,seed.
void write_frequentist_csv(std::ostream& out, int scenario, std::span<const FrequentistCell> cells, long reps,
                           std::uint64_t seed);
void write_frequentist_json(std::ostream& out, int scenario, std::span<const FrequentistCell> cells, long reps,
                            std::uint64_t seed);

// Columns: n,power.
void write_power_curve_csv(std::ostream& out, std::span<const std::pair<long, double>> curve);

}  // namespace smartsize
