#include <algorithm>
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "microgen/coil.hpp"
#include "microgen/device.hpp"
#include "oracles.hpp"

using namespace microgen;

namespace {

coil::CoilSpec nominal_coil() { return paper_nominal().coil; }
const magnetics::MagnetSpec kMagnet = paper_nominal().magnet;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST(TurnSides, ArithmeticProgression) {
  const auto g = coil::turn_sides(nominal_coil());
  ASSERT_EQ(g.sides.size(), 15u);
  EXPECT_DOUBLE_EQ(g.pitch, 40e-6);
  for (std::size_t i = 0; i < g.sides.size(); ++i) {
    EXPECT_NEAR(g.sides[i], 2000e-6 + 80e-6 * static_cast<double>(i), 1e-15);
  }
  EXPECT_NEAR(g.sides.back(), 3120e-6, 1e-15);
}

TEST(TurnSides, ZeroAndOneTurn) {
  auto c = nominal_coil();
  c.turns = 0;
  EXPECT_TRUE(coil::turn_sides(c).sides.empty());
  c.turns = 1;
  EXPECT_EQ(coil::turn_sides(c).sides, std::vector<double>{c.inner_side});
}

TEST(TotalLength, NominalCoil) {
  EXPECT_NEAR(coil::total_length(nominal_coil()), 0.15360, 1e-12);
}

TEST(TotalLength, EqualsPerimeterSumOverSides) {
  for (int n : {0, 1, 2, 7, 15, 40}) {
    auto c = nominal_coil();
    c.turns = n;
    double sum = 0.0;
    for (double s : coil::turn_sides(c).sides) sum += s + s + s + s;
    EXPECT_EQ(coil::total_length(c), sum) << n << " turns";
  }
}

TEST(TotalLength, ZeroAndOneTurn) {
  auto c = nominal_coil();
  c.turns = 0;
  EXPECT_EQ(coil::total_length(c), 0.0);
  c.turns = 1;
  EXPECT_NEAR(coil::total_length(c), 8e-3, 1e-15);
}

TEST(Resistance, NominalNickelCoil) {
  const double r = coil::resistance(nominal_coil());
  EXPECT_NEAR(r, 53.7, 0.05);
  EXPECT_LT(std::abs(r - 58.0) / 58.0, 0.15);
}

TEST(Resistance, SingleTurnAndZeroTurns) {
  auto c = nominal_coil();
  c.turns = 1;
  EXPECT_NEAR(coil::resistance(c), 2.796, 1e-3);
  c.turns = 0;
  EXPECT_EQ(coil::resistance(c), 0.0);
}

TEST(Resistance, CopperIsLower) {
  auto c = nominal_coil();
  c.resistivity = coil::kCopperResistivity;
  EXPECT_NEAR(coil::resistance(c), 12.90, 0.01);
}

TEST(Resistance, InvariantUnderDoublingResistivityAndThickness) {
  auto c = nominal_coil();
  const double r = coil::resistance(c);
  c.resistivity *= 2.0;
  c.trace_thickness *= 2.0;
  EXPECT_DOUBLE_EQ(coil::resistance(c), r);
}

TEST(CoilSpec, RejectsInvalidGeometry) {
  auto c = nominal_coil();
  c.trace_width = 0.0;
  EXPECT_THROW(coil::resistance(c), DomainError);
  c = nominal_coil();
  c.turns = -1;
  EXPECT_THROW(coil::turn_sides(c), DomainError);
}

TEST(OuterExtent, NominalCoil) {
  EXPECT_NEAR(coil::outer_extent(nominal_coil()), 3140e-6, 1e-15);
}

TEST(CoilFlux, ZeroRemanence) {
  auto m = kMagnet;
  m.remanence = 0.0;
  EXPECT_EQ(coil::coil_flux(m, nominal_coil(), 0.0), 0.0);
  EXPECT_EQ(coil::coil_flux_gradient(m, nominal_coil(), 0.0), 0.0);
}

TEST(CoilFlux, SumOfIndependentLoopFluxes) {
  const auto c = nominal_coil();
  const double z = kMagnet.top() + c.plane_height;
  double sum = 0.0;
  for (int i = 0; i < c.turns; ++i) {
    sum += magnetics::flux_through_rect(
        kMagnet, magnetics::RectLoop::square(c.inner_side + 80e-6 * i, z));
  }
  EXPECT_LT(rel(coil::coil_flux(kMagnet, c, 0.0), sum), 1e-12);
}

TEST(CoilFlux, IndependentOfTurnOrder) {
  const auto c = nominal_coil();
  auto sides = coil::turn_sides(c).sides;
  const double z = coil::loop_height(kMagnet, c, 0.0);
  auto total = [&](const std::vector<double>& order) {
    double s = 0.0;
    for (double side : order) s += coil::loop_flux(kMagnet, side, z);
    return s;
  };
  const double forward = total(sides);
  std::reverse(sides.begin(), sides.end());
  EXPECT_LT(rel(total(sides), forward), 1e-14);
}

TEST(CoilFlux, LinearInRemanence) {
  auto m2 = kMagnet;
  m2.remanence *= 2.0;
  const auto c = nominal_coil();
  EXPECT_LT(rel(coil::coil_flux(m2, c, 0.0), 2.0 * coil::coil_flux(kMagnet, c, 0.0)), 1e-12);
  EXPECT_LT(rel(coil::coil_flux_gradient(m2, c, 0.0),
                2.0 * coil::coil_flux_gradient(kMagnet, c, 0.0)),
            1e-12);
}

TEST(CoilFlux, NominalMatchesDenseGridOracle) {
  const auto c = nominal_coil();
  const double phi = coil::coil_flux(kMagnet, c, 0.0);
  EXPECT_LT(rel(phi, oracle::coil_flux(kMagnet, c)), 1e-6);
  EXPECT_NEAR(phi, 1.50326e-5, 1e-9);
}

TEST(CoilFluxGradient, NominalMatchesDirectDerivative) {
  const auto c = nominal_coil();
  const double g = coil::coil_flux_gradient(kMagnet, c, 0.0);
  EXPECT_GT(g, 0.0);
  EXPECT_LT(rel(g, oracle::coil_gradient(kMagnet, c)), 1e-6);
  EXPECT_NEAR(g, 0.0232126, 1e-6);
}

TEST(CoilFluxGradient, DecreasesAsStaticGapGrows) {
  auto c = nominal_coil();
  double prev = INFINITY;
  for (double gap : {10e-6, 20e-6, 50e-6, 100e-6, 200e-6, 500e-6}) {
    c.plane_height = gap;
    const double g = coil::coil_flux_gradient(kMagnet, c, 0.0);
    EXPECT_LT(g, prev) << "gap " << gap;
    prev = g;
  }
}

TEST(CoilFluxGradient, OffsetMovesTheMagnetTowardTheCoil) {
  const auto c = nominal_coil();
  const double up = coil::coil_flux_gradient(kMagnet, c, 2e-6);
  const double down = coil::coil_flux_gradient(kMagnet, c, -2e-6);
  EXPECT_GT(up, down);
  EXPECT_THROW(coil::coil_flux(kMagnet, c, 20e-6), DomainError);
}

TEST(CoilFluxChange, MatchesFluxDifference) {
  const auto c = nominal_coil();
  const double direct =
      coil::coil_flux(kMagnet, c, 3e-6, 1e-12) - coil::coil_flux(kMagnet, c, 0.0, 1e-12);
  EXPECT_LT(rel(coil::coil_flux_change(kMagnet, c, 3e-6), direct), 1e-6);
  EXPECT_EQ(coil::coil_flux_change(kMagnet, c, 0.0), 0.0);
}
