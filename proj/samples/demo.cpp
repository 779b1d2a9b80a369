// Compile sqrt(2) - 1, speed it up until it converges in real time, then
// print the network, a few trajectory samples and the stability verdict.

#include "crnreal/crnreal.hpp"

#include <cstdio>
#include <iostream>

int main(int argc, char** argv) {
  using namespace crnreal;
  const char* text = argc > 1 ? argv[1] : "sqrt(2)-1";
  try {
    SignedProgram p = compile_expression(parse_expression(text));
    std::cout << "# " << text << " = " << p.limit.describe() << "\n";

    const auto sped = auto_speedup(p);
    p = speed_up(p, sped.factor);
    std::cout << "# speed-up factor " << sped.factor << "\n" << format_crn(p.crn, p.designated_name());

    const auto traj = integrate_from_zero(p.crn, 20.0);
    const double target = p.magnitude();
    for (double t : {0.0, 1.0, 2.0, 5.0, 10.0, 20.0}) {
      const double x = traj.value_at(p.designated, t);
      std::printf("t=%5.1f  %s=%.12f  |error|=%.3e\n", t, p.designated_name().c_str(), x, std::abs(x - target));
    }
    const auto rep = check_exponential_stability(p.crn, reachable_fixed_point(p.crn));
    std::cout << "stability: " << to_string(rep.verdict) << " (max real part " << rep.max_real_part << ")\n";
  } catch (const std::exception& e) {
    std::cerr << "demo: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
