#include <swanlab/acceptance.hpp>

#include <iostream>

int main() {
  try {
    auto zoo = swanlab::load_zoo();
    bool ok = true;
    for (const auto& r : swanlab::run_acceptance(zoo)) {
      std::cout << r.line() << "\n";
      ok = ok && r.pass;
    }
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance: " << e.what() << "\n";
    return 2;
  }
}
