// Builds the explicit real seed for a parameter, checks it, and renders a
// small complex line through it.
//
//   sample_seed [p q r s] [out.ppm]

#include <cstdlib>
#include <iostream>
#include <string>

#include "fourhole/fourhole.hpp"

int main(int argc, char** argv) {
  using namespace fourhole;
  MuParams mu{0, -1, -1, 4};
  if (argc >= 5) mu = {std::atof(argv[1]), std::atof(argv[2]), std::atof(argv[3]), std::atof(argv[4])};
  const std::string out = argc == 2 ? argv[1] : argc >= 6 ? argv[5] : "seed_line.ppm";

  try {
    const RealSeed seed = construct_real_seed(mu);
    std::cout << "seed (" << seed.triple.x.real() << ", " << seed.triple.y.real() << ", " << seed.triple.z.real()
              << "), y = " << seed.y << "\n";

    const BqVerdict v = bq_test(seed.triple, mu);
    if (v.kind != VerdictKind::kAccepted) {
      std::cerr << "seed did not pass the BQ test\n";
      return 1;
    }
    std::cout << "accepted with " << v.omega.size() << " region(s) of modulus <= " << v.level << "\n";

    SliceSpec spec;
    spec.mu = mu;
    spec.mode = PlaneMode::kLine;
    spec.base = seed.triple;
    spec.direction = {0.0, 1.0, 1.0};
    const double h = seed.y / 4;
    spec.re_min = -h;
    spec.re_max = h;
    spec.im_min = -h;
    spec.im_max = h;
    spec.width = spec.height = 32;
    const SliceGrid grid = evaluate_slice(spec);
    int accepted = 0;
    for (const auto& p : grid.pixels) accepted += p.kind == PixelKind::kAccepted;
    write_ppm(grid, {}, out);
    std::cout << accepted << " of " << grid.pixels.size() << " pixels accepted, wrote " << out << "\n";
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}
