// Counts posets by size and tallies the root splitting rule for connected ones.
#include <iostream>

#include "finspace/finspace.hpp"

int main(int argc, char** argv) {
  using namespace finspace;
  const int max_n = argc > 1 ? std::stoi(argv[1]) : 6;
  ClassCounts counts = count_classes(max_n);
  SweepOptions opt;
  opt.max_n = max_n;
  SweepReport r = verify_theorem(opt);
  for (const auto& row : r.rows) {
    std::cout << "n=" << row.n << "  all=" << counts.all[row.n] << "  connected=" << counts.connected[row.n]
              << "  split=" << row.successes << "/" << row.total << "\n";
    for (const auto& [rule, k] : row.root_rules) std::cout << "    " << rule << ": " << k << "\n";
  }
}
