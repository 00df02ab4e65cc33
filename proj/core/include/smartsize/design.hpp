#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace smartsize {

// Treatment arms of the two-stage design. A and B are first-stage
// treatments; C and D rescue non-responders to A, E and F rescue
// non-responders to B. Responders continue their initial treatment.
enum class Arm { A, B, C, D, E, F };

char to_char(Arm arm);
std::optional<Arm> arm_from_char(char c);

constexpr bool is_initial(Arm arm) { return arm == Arm::A || arm == Arm::B; }

// True when `rescue` is one of the second-stage options offered to
// non-responders of `initial`.
constexpr bool is_rescue_of(Arm rescue, Arm initial) {
  return initial == Arm::A ? (rescue == Arm::C || rescue == Arm::D)
                           : initial == Arm::B && (rescue == Arm::E || rescue == Arm::F);
}

// The six treatment sequences, in the order used by cell_probabilities().
enum class Cell { AResponder, AC, AD, BResponder, BE, BF };
inline constexpr std::array<Cell, 6> kAllCells = {Cell::AResponder, Cell::AC, Cell::AD,
                                                  Cell::BResponder, Cell::BE, Cell::BF};

// Randomization of the two-stage design: each initial arm with
// stage1_prob, each rescue arm among non-responders with stage2_prob.
// Responders are never re-randomized.
struct SmartDesign {
  double stage1_prob = 0.5;
  double stage2_prob = 0.5;
};

// "Start with `initial`; switch non-responders to `rescue`."
class Strategy {
 public:
  // Throws DomainError when `rescue` does not belong to `initial`'s branch.
  Strategy(Arm initial, Arm rescue);

  // Parses a two-letter code such as "AC" or "BE".
  static Strategy parse(std::string_view code);

  Arm initial() const noexcept { return initial_; }
  Arm rescue() const noexcept { return rescue_; }
  std::string code() const;

  friend bool operator==(const Strategy&, const Strategy&) = default;

 private:
  Arm initial_;
  Arm rescue_;
};

// The four strategies embedded in the design.
std::array<Strategy, 4> embedded_strategies();

// One subject's path through the trial.
struct Trajectory {
  Arm a1;
  bool responder;
  Arm a2;
  double y;

  // Throws DomainError if the path is impossible under the design.
  void validate() const;
  Cell cell() const;
};

enum class OutcomeKind { Continuous, Binary };

struct TrialDataset {
  OutcomeKind outcome_kind = OutcomeKind::Continuous;
  std::vector<Trajectory> trajectories;

  std::size_t size() const noexcept { return trajectories.size(); }
  bool empty() const noexcept { return trajectories.empty(); }
};

// Reads pilot data with header `id,a1,r,a2,y`. Responders may leave a2
// empty. The outcome kind is taken from `kind` when given, otherwise it is
// binary when every y is exactly 0 or 1. Throws ParseError naming the line.
TrialDataset parse_pilot_csv(std::istream& in, std::optional<OutcomeKind> kind = std::nullopt);

// Throws ParseError("pilot file not found: ...") when the file is absent.
TrialDataset read_pilot_csv(const std::filesystem::path& path, std::optional<OutcomeKind> kind = std::nullopt);

// Writes the same format parse_pilot_csv() accepts; ids are 1-based row numbers.
void write_pilot_csv(std::ostream& out, const TrialDataset& data);

// Inverse-probability weight of `t` under strategy `s`: zero when the path
// is inconsistent with the strategy, 1 / (stage-1 prob * stage-2 prob)
// otherwise, with a stage-2 probability of one for responders.
double strategy_weight(const Trajectory& t, const Strategy& s, const SmartDesign& d = {});

// Probabilities of the six sequences for response rates p_a and p_b.
std::array<double, 6> cell_probabilities(double p_a, double p_b, const SmartDesign& d = {});

}  // namespace smartsize
