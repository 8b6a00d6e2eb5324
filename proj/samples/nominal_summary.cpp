// Prints the headline numbers of the bundled nominal device.
//
//   nominal_summary [device.ini]

#include <cstdio>
#include <string>

#include "microgen/design.hpp"
#include "microgen/device_file.hpp"

int main(int argc, char** argv) {
  using namespace microgen;
  const Device d = argc > 1 ? io::parse_device(argv[1]) : paper_nominal();
  const auto m = modal(d);
  const double g = rest_flux_gradient(d);
  const auto at_50um = response::emf_pp(g, 50e-6, 1000.0);
  const double stress = suspension::max_bending_stress(d.material, d.beam, 50e-6);
  const auto margin = suspension::yield_margin(stress, d.material);

  std::printf("stiffness        %.4g N/m\n", m.stiffness_total);
  std::printf("effective mass   %.4g kg\n", m.effective_mass);
  std::printf("f1               %.2f Hz\n", m.natural_frequency);
  std::printf("coil resistance  %.2f ohm\n", coil::resistance(d.coil));
  std::printf("dPhi/dz at rest  %.5g Wb/m\n", g);
  std::printf("emf_pp, 50 um at 1 kHz  %.4g mV\n", at_50um * 1e3);
  std::printf("stress at 50 um  %.1f MPa (margins %.3f, %.3f)\n", stress * 1e-6, margin.low,
              margin.high);
  return 0;
}
