// Splits every bundled fixture and checks the certificate.
#include <iomanip>
#include <iostream>

#include "finspace/finspace.hpp"

int main() {
  using namespace finspace;
  int bad = 0;
  for (const auto& f : all_fixtures()) {
    auto c = split(f.space);
    bool ok = c->status == SplitStatus::Ok && validate_certificate(*c).ok;
    bad += !ok;
    std::cout << std::left << std::setw(22) << f.name << std::setw(4) << f.space.size()
              << std::setw(34) << to_text(c->wedge) << std::setw(20) << c->rule << (ok ? "ok" : "INVALID") << "\n";
  }
  return bad == 0 ? 0 : 1;
}
