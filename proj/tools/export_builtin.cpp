// Writes a built-in model as a model file.
//   export_builtin torus|s2|s2-delta-k|torus-capped [cap] > file.json

#include <iostream>
#include <string>

#include "eqfrob/models.hpp"

int main(int argc, char** argv) {
  using namespace eqfrob;
  if (argc < 2) {
    std::cerr << "usage: export_builtin torus|s2|s2-delta-k|torus-capped [cap]\n";
    return 2;
  }
  const std::string which = argv[1];
  const unsigned cap = argc > 2 ? static_cast<unsigned>(std::stoul(argv[2])) : 6;
  try {
    ModelFile m;
    if (which == "torus") {
      m = builtin_torus();
    } else if (which == "s2") {
      m = builtin_s2(cap);
    } else if (which == "s2-delta-k") {
      m = builtin_s2(cap);
      m.name = "s2-delta-k";
      m.bv = BvChoice::metric_minus_dmu;
    } else if (which == "torus-capped") {
      // circle acting trivially, iota left undefined on the top form
      m = builtin_torus();
      m.name = "torus-capped";
      m.r = 1;
      m.iota = {detail::empty_operator(m.dim())};
      m.iota[0].undefined.back() = true;
      m.mu = {std::vector<Rational>(m.dim(), Rational(0))};
      m.omega = std::vector<Rational>(m.dim(), Rational(0));
    } else {
      std::cerr << "unknown model " << which << "\n";
      return 2;
    }
    std::cout << model_to_json(m).dump(2) << "\n";
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
}
