#include <doctest.h>

#include <cmath>
#include <sstream>

#include "smartsize/design.hpp"
#include "smartsize/errors.hpp"
#include "smartsize/numerics.hpp"

using namespace smartsize;

namespace {

TrialDataset parse(const std::string& text) {
  std::istringstream in(text);
  return parse_pilot_csv(in);
}

std::string parse_error(const std::string& text) {
  try {
    parse(text);
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("parse_pilot_csv accepts valid rows and normalizes responder a2") {
  const auto data = parse("id,a1,r,a2,y\n1,A,1,,15.0\n2,B,0,E,5.0\n");
  REQUIRE(data.size() == 2);
  CHECK(data.trajectories[0].a2 == Arm::A);
  CHECK(data.trajectories[0].responder);
  CHECK(data.trajectories[1].a2 == Arm::E);
  CHECK(data.trajectories[1].y == 5.0);
  CHECK(data.outcome_kind == OutcomeKind::Continuous);
}

TEST_CASE("parse_pilot_csv handles CRLF and infers binary outcomes") {
  const auto data = parse("id,a1,r,a2,y\r\n1,A,1,A,1\r\n2,B,0,F,0\r\n\r\n");
  REQUIRE(data.size() == 2);
  CHECK(data.outcome_kind == OutcomeKind::Binary);
  std::istringstream in("id,a1,r,a2,y\n1,A,1,A,1\n");
  CHECK(parse_pilot_csv(in, OutcomeKind::Continuous).outcome_kind == OutcomeKind::Continuous);
}

TEST_CASE("parse_pilot_csv reports invariant breaches with line numbers") {
  const std::string head = "id,a1,r,a2,y\n1,A,1,,15.0\n2,B,0,E,5.0\n";
  const auto e1 = parse_error(head + "3,A,1,C,10.0\n");
  CHECK(e1.find("line 4") != std::string::npos);
  CHECK(e1.find("responder must continue initial treatment") != std::string::npos);

  const auto e2 = parse_error(head + "4,A,0,E,1.0\n");
  CHECK(e2.find("rescue arm inconsistent with initial arm") != std::string::npos);

  CHECK(parse_error("id,a1,r,a2,y\n1,A,1,A\n").find("line 2") != std::string::npos);
  CHECK(parse_error("id,a1,r,a2,y\n1,A,1,A,3,4\n").find("expected 5 columns") != std::string::npos);
  CHECK(parse_error("id,a1,r,a2,y\n1,A,1,A,abc\n").find("y is not a number") != std::string::npos);
  CHECK(parse_error("id,a1,r,a2,y\n1,A,2,A,1.0\n").find("r must be 0 or 1") != std::string::npos);
  CHECK(parse_error("id,a1,r,a2,y\n1,C,1,C,1.0\n").find("a1 must be A or B") != std::string::npos);
  CHECK(parse_error("id,a1,r,y\n").find("header") != std::string::npos);
  CHECK(parse_error("").find("empty") != std::string::npos);
}

TEST_CASE("read_pilot_csv reports a missing file") {
  try {
    read_pilot_csv("/nonexistent/pilot.csv");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("pilot file not found") == 0);
  }
}

TEST_CASE("pilot CSV written by write_pilot_csv parses back") {
  TrialDataset data;
  data.trajectories = {{Arm::A, true, Arm::A, 1.25}, {Arm::B, false, Arm::F, -3.0 / 7.0}};
  std::stringstream io;
  write_pilot_csv(io, data);
  const auto back = parse_pilot_csv(io);
  REQUIRE(back.size() == 2);
  CHECK(back.trajectories[1].y == data.trajectories[1].y);
  CHECK(back.trajectories[1].a2 == Arm::F);
}

TEST_CASE("Strategy construction") {
  CHECK(Strategy::parse("AC").code() == "AC");
  CHECK_THROWS_AS(Strategy(Arm::A, Arm::E), DomainError);
  CHECK_THROWS_AS(Strategy(Arm::C, Arm::C), DomainError);
  CHECK_THROWS_AS(Strategy::parse("AXY"), DomainError);
}

TEST_CASE("strategy_weight") {
  const Strategy ac(Arm::A, Arm::C);
  CHECK(strategy_weight({Arm::A, true, Arm::A, 0.0}, ac) == 2.0);
  CHECK(strategy_weight({Arm::A, false, Arm::C, 0.0}, ac) == 4.0);
  CHECK(strategy_weight({Arm::A, false, Arm::D, 0.0}, ac) == 0.0);
  CHECK(strategy_weight({Arm::B, true, Arm::B, 0.0}, ac) == 0.0);
}

TEST_CASE("each trajectory is consistent with one or two embedded strategies") {
  for (Arm a1 : {Arm::A, Arm::B}) {
    for (bool r : {true, false}) {
      std::vector<Arm> a2s = r ? std::vector<Arm>{a1}
                               : (a1 == Arm::A ? std::vector<Arm>{Arm::C, Arm::D} : std::vector<Arm>{Arm::E, Arm::F});
      for (Arm a2 : a2s) {
        const Trajectory t{a1, r, a2, 0.0};
        int nonzero = 0;
        for (const auto& s : embedded_strategies()) {
          if (strategy_weight(t, s) > 0.0) {
            ++nonzero;
            CHECK(s.initial() == a1);
          }
        }
        CHECK(nonzero == (r ? 2 : 1));
      }
    }
  }
}

TEST_CASE("IPW weights are self-normalizing in expectation") {
  RandomStream rng(99);
  const int n = 400'000;
  for (const auto& s : embedded_strategies()) {
    double sum = 0.0;
    double sum2 = 0.0;
    RandomStream local = rng;
    for (int i = 0; i < n; ++i) {
      Trajectory t{};
      t.a1 = local.uniform() < 0.5 ? Arm::A : Arm::B;
      t.responder = local.uniform() < 0.4;
      const bool first = local.uniform() < 0.5;
      t.a2 = t.responder ? t.a1 : (t.a1 == Arm::A ? (first ? Arm::C : Arm::D) : (first ? Arm::E : Arm::F));
      const double w = strategy_weight(t, s);
      sum += w;
      sum2 += w * w;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(mean - 1.0) < 3.0 * se);
  }
}

TEST_CASE("cell_probabilities") {
  using A = std::array<double, 6>;
  CHECK(cell_probabilities(0.5, 0.5) == A{0.25, 0.125, 0.125, 0.25, 0.125, 0.125});
  const auto c7 = cell_probabilities(0.7, 0.7);
  const auto c3 = cell_probabilities(0.3, 0.3);
  const A e7{0.35, 0.075, 0.075, 0.35, 0.075, 0.075};
  const A e3{0.15, 0.175, 0.175, 0.15, 0.175, 0.175};
  for (int i = 0; i < 6; ++i) {
    CHECK(c7[i] == doctest::Approx(e7[i]).epsilon(1e-15));
    CHECK(c3[i] == doctest::Approx(e3[i]).epsilon(1e-15));
  }
  for (double pa = 0.05; pa < 1.0; pa += 0.05) {
    for (double pb = 0.05; pb < 1.0; pb += 0.05) {
      const auto c = cell_probabilities(pa, pb);
      double total = 0.0;
      for (double v : c) total += v;
      REQUIRE(std::abs(total - 1.0) < 1e-15);
    }
  }
  CHECK_THROWS_AS(cell_probabilities(0.0, 0.5), DomainError);
}
