#pragma once

#include <string>
#include <vector>

namespace orthoroots::selftest {

/// One invariant: `value` compared against `bound` in the stated direction.
struct Check {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  bool upper = true;  ///< pass when value <= bound; otherwise value >= bound
  bool pass = false;
};

std::vector<Check> orthonormality_checks();
Check chebyshev_closed_form();
Check frostman_constancy();
std::vector<Check> kernel_checks();  // lower bound, derivative growth, delocalization
Check grid_vs_comrade(std::size_t trials = 300);
Check anticoncentration(std::size_t trials = 2000);
Check worker_reproducibility();

/// Everything above, in order.
std::vector<Check> run_all();

}  // namespace orthoroots::selftest
