// Prints the minimal finite models of the circle and their splittings.
#include <iostream>

#include "finspace/finspace.hpp"

int main() {
  using namespace finspace;
  for (int n = 2; n <= 8; ++n) {
    Poset s = s1_n(n);
    auto c = split(s);
    std::cout << "S1_" << n << ": " << s.size() << " points, H~ = " << reduced_homology(s).to_text()
              << ", core keeps " << core(s).core.size() << ", split -> " << to_text(c->wedge) << " via " << c->rule
              << "\n";
  }
  Poset s2 = nh_suspension(s1_n(2));
  std::cout << "\nsuspension of S1_2:\n" << write_hasse(s2) << "split -> " << to_text(split(s2)->wedge) << "\n";
}
