// Compares the serial reference scan of abelian Kummer classes against the
// OpenMP kernel and checks that both produce identical output.

#include <chrono>
#include <cstring>
#include <iostream>

#include "qpadic/kummer.hpp"

using namespace qpadic;

namespace {

double time_scan(const FieldTower& K, ExecMode mode, std::vector<KummerCoordinates>& out) {
  auto t0 = std::chrono::steady_clock::now();
  out = scan_abelian_classes(K, mode);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<long> primes = {3, 5};
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--p7") == 0) primes.push_back(7);
  }

  std::cout << "prime  classes   serial[s]  parallel[s]  speedup  agree\n";
  for (long p : primes) {
    PadicContext ctx(p, kDefaultPrecision);
    FieldTower K = FieldTower::make(ctx, 1, 1);
    long total = 1;
    for (long i = 0; i <= p; ++i) total *= p;

    std::vector<KummerCoordinates> serial, parallel;
    double ts = time_scan(K, ExecMode::serial, serial);
    double tp = time_scan(K, ExecMode::parallel, parallel);
    bool agree = serial.size() == parallel.size();
    for (size_t i = 0; agree && i < serial.size(); ++i) agree = serial[i] == parallel[i];

    std::printf("%5ld  %7ld  %9.3f  %11.3f  %7.2f  %s\n", p, total - 1, ts, tp,
                tp > 0 ? ts / tp : 0.0, agree ? "yes" : "NO");
    if (!agree) return 1;
  }
  return 0;
}
