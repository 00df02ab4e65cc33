#include "smartsize/design.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "smartsize/errors.hpp"
#include "smartsize/numerics.hpp"

namespace smartsize {

char to_char(Arm arm) { return static_cast<char>('A' + static_cast<int>(arm)); }

std::optional<Arm> arm_from_char(char c) {
  if (c < 'A' || c > 'F') return std::nullopt;
  return static_cast<Arm>(c - 'A');
}

Strategy::Strategy(Arm initial, Arm rescue) : initial_(initial), rescue_(rescue) {
  if (!is_initial(initial)) throw DomainError("strategy must start with A or B");
  if (!is_rescue_of(rescue, initial)) throw DomainError("rescue arm inconsistent with initial arm");
}

Strategy Strategy::parse(std::string_view code) {
  if (code.size() != 2) throw DomainError("strategy code must have two letters, got '" + std::string(code) + "'");
  const auto a1 = arm_from_char(code[0]);
  const auto a2 = arm_from_char(code[1]);
  if (!a1 || !a2) throw DomainError("unknown arm in strategy code '" + std::string(code) + "'");
  return Strategy(*a1, *a2);
}

std::string Strategy::code() const { return {to_char(initial_), to_char(rescue_)}; }

std::array<Strategy, 4> embedded_strategies() {
  return {Strategy(Arm::A, Arm::C), Strategy(Arm::A, Arm::D), Strategy(Arm::B, Arm::E),
          Strategy(Arm::B, Arm::F)};
}

void Trajectory::validate() const {
  if (!is_initial(a1)) throw DomainError("first-stage arm must be A or B");
  if (responder) {
    if (a2 != a1) throw DomainError("responder must continue initial treatment");
  } else if (!is_rescue_of(a2, a1)) {
    throw DomainError("rescue arm inconsistent with initial arm");
  }
}

Cell Trajectory::cell() const {
  if (a1 == Arm::A) return responder ? Cell::AResponder : (a2 == Arm::C ? Cell::AC : Cell::AD);
  return responder ? Cell::BResponder : (a2 == Arm::E ? Cell::BE : Cell::BF);
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
  return fields;
}

std::optional<double> parse_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

}  // namespace

TrialDataset parse_pilot_csv(std::istream& in, std::optional<OutcomeKind> kind) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  TrialDataset data;
  bool all_binary = true;

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = trim(line);
    if (!have_header) {
      if (view.empty()) throw ParseError(line_no, "missing header");
      const auto cols = split_commas(view);
      if (cols.size() != 5 || cols[0] != "id" || cols[1] != "a1" || cols[2] != "r" || cols[3] != "a2" ||
          cols[4] != "y") {
        throw ParseError(line_no, "header must be 'id,a1,r,a2,y'");
      }
      have_header = true;
      continue;
    }
    if (view.empty()) continue;

    const auto f = split_commas(view);
    if (f.size() != 5) {
      throw ParseError(line_no, "expected 5 columns, found " + std::to_string(f.size()));
    }
    if (f[1].size() != 1) throw ParseError(line_no, "a1 must be A or B");
    const auto a1 = arm_from_char(f[1][0]);
    if (!a1 || !is_initial(*a1)) throw ParseError(line_no, "a1 must be A or B");
    if (f[2] != "0" && f[2] != "1") throw ParseError(line_no, "r must be 0 or 1");
    const bool responder = f[2] == "1";

    Arm a2 = *a1;
    if (f[3].empty()) {
      if (!responder) throw ParseError(line_no, "non-responder requires a rescue arm");
    } else {
      const auto parsed = f[3].size() == 1 ? arm_from_char(f[3][0]) : std::nullopt;
      if (!parsed) throw ParseError(line_no, "a2 must be one of A-F or empty");
      a2 = *parsed;
    }
    const auto y = parse_double(f[4]);
    if (!y || !std::isfinite(*y)) throw ParseError(line_no, "y is not a number");

    Trajectory t{*a1, responder, a2, *y};
    try {
      t.validate();
    } catch (const DomainError& e) {
      throw ParseError(line_no, e.what());
    }
    if (*y != 0.0 && *y != 1.0) all_binary = false;
    data.trajectories.push_back(t);
  }
  if (!have_header) throw ParseError(0, "empty pilot file");
  data.outcome_kind = kind.value_or(all_binary && !data.empty() ? OutcomeKind::Binary : OutcomeKind::Continuous);
  return data;
}

TrialDataset read_pilot_csv(const std::filesystem::path& path, std::optional<OutcomeKind> kind) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "pilot file not found: " + path.string());
  return parse_pilot_csv(in, kind);
}

void write_pilot_csv(std::ostream& out, const TrialDataset& data) {
  out << "id,a1,r,a2,y\n";
  std::size_t id = 1;
  char buf[64];
  for (const auto& t : data.trajectories) {
    const auto res = std::to_chars(buf, buf + sizeof buf, t.y);
    out << id++ << ',' << to_char(t.a1) << ',' << (t.responder ? 1 : 0) << ',' << to_char(t.a2) << ','
        << std::string_view(buf, res.ptr - buf) << '\n';
  }
}

double strategy_weight(const Trajectory& t, const Strategy& s, const SmartDesign& d) {
  if (t.a1 != s.initial()) return 0.0;
  const double p1 = s.initial() == Arm::A ? d.stage1_prob : 1.0 - d.stage1_prob;
  if (t.responder) return 1.0 / p1;
  if (t.a2 != s.rescue()) return 0.0;
  const bool first_rescue = s.rescue() == Arm::C || s.rescue() == Arm::E;
  const double p2 = first_rescue ? d.stage2_prob : 1.0 - d.stage2_prob;
  return 1.0 / (p1 * p2);
}

std::array<double, 6> cell_probabilities(double p_a, double p_b, const SmartDesign& d) {
  if (!is_open_unit(p_a) || !is_open_unit(p_b)) throw DomainError("response rates must lie in (0,1)");
  const double sa = d.stage1_prob;
  const double sb = 1.0 - d.stage1_prob;
  const double r = d.stage2_prob;
  return {sa * p_a,        sa * (1.0 - p_a) * r, sa * (1.0 - p_a) * (1.0 - r),
          sb * p_b,        sb * (1.0 - p_b) * r, sb * (1.0 - p_b) * (1.0 - r)};
}

}  // namespace smartsize
