#include <cmath>

#include <gtest/gtest.h>

#include "microgen/device.hpp"
#include "microgen/suspension.hpp"

using namespace microgen;
using namespace microgen::suspension;

namespace {

const Device kNominal = paper_nominal();

double f1_with(const BeamSpec& beam) {
  return modal(kNominal.material, beam, kNominal.plate, kNominal.magnet).natural_frequency;
}

}  // namespace

TEST(BeamStiffness, NominalBeam) {
  EXPECT_NEAR(beam_stiffness(kNominal.material, kNominal.beam), 187.5, 1e-9);
  EXPECT_NEAR(total_stiffness(kNominal.material, kNominal.beam), 750.0, 1e-9);
  BeamSpec one = kNominal.beam;
  one.count = 1;
  EXPECT_NEAR(total_stiffness(kNominal.material, one), 187.5, 1e-9);
}

TEST(BeamStiffness, ScalingLaws) {
  const double k = beam_stiffness(kNominal.material, kNominal.beam);
  MaterialParams stiff = kNominal.material;
  stiff.youngs_modulus *= 2.0;
  EXPECT_DOUBLE_EQ(beam_stiffness(stiff, kNominal.beam), 2.0 * k);
  BeamSpec thick = kNominal.beam;
  thick.thickness *= 2.0;
  EXPECT_NEAR(beam_stiffness(kNominal.material, thick), 8.0 * k, 1e-12 * k);
  for (double s : {0.5, 1.5, 3.0}) {
    BeamSpec wide = kNominal.beam;
    wide.width *= s;
    EXPECT_NEAR(beam_stiffness(kNominal.material, wide), s * k, 1e-12 * k);
  }
}

TEST(EffectiveMass, NominalDevice) {
  const double m = effective_mass(kNominal.material, kNominal.plate, kNominal.magnet, kNominal.beam);
  EXPECT_NEAR(m, 1.8713e-5, 1e-9);
  EXPECT_NEAR(kNominal.material.magnet_density * kNominal.magnet.volume(), 1.80e-5, 1e-12);
  EXPECT_NEAR(kNominal.material.structure_density * kNominal.plate.volume(), 7.128e-7, 1e-12);
}

TEST(EffectiveMass, ZeroSizeMagnetLeavesPlateOnly) {
  magnetics::MagnetSpec none{0.0, 0.0, 0.0, 1.2};
  EXPECT_NEAR(effective_mass(kNominal.material, kNominal.plate, none, kNominal.beam), 7.128e-7,
              1e-12);
}

TEST(EffectiveMass, BeamParticipationIsSmall) {
  const auto& mat = kNominal.material;
  EXPECT_NEAR(mat.structure_density * kNominal.beam.volume(), 8.55e-9, 1e-11);
  const double off = effective_mass(mat, kNominal.plate, kNominal.magnet, kNominal.beam, false);
  const double on = effective_mass(mat, kNominal.plate, kNominal.magnet, kNominal.beam, true);
  EXPECT_NEAR(on - off, 13.0 / 35.0 * 4.0 * mat.structure_density * kNominal.beam.volume(), 1e-18);
  EXPECT_LT((on - off) / off, 3e-3);
}

TEST(NaturalFrequency, NominalDevice) {
  const double f = natural_frequency(750.0, 1.871e-5);
  EXPECT_NEAR(f, 1007.6, 0.1);
  const auto r = modal(kNominal.material, kNominal.beam, kNominal.plate, kNominal.magnet);
  EXPECT_NEAR(r.natural_frequency, 1007.6, 0.1);
  EXPECT_LT(std::abs(r.natural_frequency - 1012.0) / 1012.0, 0.025);
}

TEST(NaturalFrequency, ConsistentWithStiffnessAndMass) {
  const auto r = modal(kNominal.material, kNominal.beam, kNominal.plate, kNominal.magnet);
  EXPECT_EQ(r.natural_frequency, std::sqrt(r.stiffness_total / r.effective_mass) /
                                     (2.0 * std::numbers::pi));
}

TEST(NaturalFrequency, QuadruplingStiffnessDoublesFrequency) {
  EXPECT_NEAR(natural_frequency(3000.0, 1.871e-5), 2.0 * natural_frequency(750.0, 1.871e-5),
              1e-9);
}

TEST(NaturalFrequency, RejectsNonPositiveInputs) {
  EXPECT_THROW(natural_frequency(0.0, 1e-5), DomainError);
  EXPECT_THROW(natural_frequency(750.0, 0.0), DomainError);
  EXPECT_THROW(natural_frequency(-1.0, 1e-5), DomainError);
}

TEST(NaturalFrequency, MeasuredThicknessWithMassFixed) {
  BeamSpec thin = kNominal.beam;
  thin.thickness = 14e-6;
  EXPECT_NEAR(f1_with(thin), 590.0, 0.02 * 590.0);
  EXPECT_NEAR(f1_with(thin), 590.1, 0.05);
}

TEST(NaturalFrequency, ScalesAsThicknessToThreeHalves) {
  const double f0 = f1_with(kNominal.beam);
  for (int i = 0; i <= 20; ++i) {
    BeamSpec b = kNominal.beam;
    b.thickness = 5e-6 + 2e-6 * i;
    const double law = f0 * std::pow(b.thickness / kNominal.beam.thickness, 1.5);
    EXPECT_LE(std::abs(f1_with(b) - law), 1e-12 * law) << b.thickness;
  }
}

TEST(NaturalFrequency, ScalesAsLengthToMinusThreeHalves) {
  const double f0 = f1_with(kNominal.beam);
  for (double s : {0.5, 0.8, 1.25, 2.0}) {
    BeamSpec b = kNominal.beam;
    b.length *= s;
    const double law = f0 * std::pow(s, -1.5);
    EXPECT_LE(std::abs(f1_with(b) - law), 1e-12 * law) << s;
  }
}

TEST(BendingStress, AmplitudeRangeOfFiftyMicrons) {
  const double s = max_bending_stress(kNominal.material, kNominal.beam, 50e-6);
  EXPECT_NEAR(s, 937.5e6, 1e-3);
  const auto m = yield_margin(s, kNominal.material);
  EXPECT_NEAR(m.low, 0.704, 5e-4);
  EXPECT_NEAR(m.high, 1.195, 5e-4);
  EXPECT_TRUE(m.at_risk());
}

TEST(BendingStress, MeasuredAmplitude) {
  const double s = max_bending_stress(kNominal.material, kNominal.beam, 2.8e-6);
  EXPECT_NEAR(s, 52.5e6, 1e-3);
  const auto m = yield_margin(s, kNominal.material);
  EXPECT_NEAR(m.low, 12.57, 0.01);
  EXPECT_NEAR(m.high, 21.33, 0.01);
  EXPECT_FALSE(m.at_risk());
}

TEST(BendingStress, ZeroAndLinearity) {
  EXPECT_EQ(max_bending_stress(kNominal.material, kNominal.beam, 0.0), 0.0);
  for (double d : {1e-7, 3.3e-6, 1.7e-5}) {
    EXPECT_EQ(max_bending_stress(kNominal.material, kNominal.beam, 2.0 * d),
              2.0 * max_bending_stress(kNominal.material, kNominal.beam, d));
  }
  EXPECT_THROW(max_bending_stress(kNominal.material, kNominal.beam, -1e-6), DomainError);
}

TEST(YieldMargin, ZeroStressIsUnbounded) {
  const auto m = yield_margin(0.0, kNominal.material);
  EXPECT_TRUE(m.unbounded());
  EXPECT_FALSE(m.at_risk());
}
