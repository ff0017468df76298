#include "optsel/bench.hpp"

#include <array>

namespace optsel {
namespace {

// MASS::cpus (Ein-Dor and Feldmesser, 1987): MMIN, MMAX (KB), CACH (KB),
// CHMIN, CHMAX, in the original row order.
constexpr std::array<std::array<int, 5>, 209> kCpuRows = {{
    {256, 6000, 256, 16, 128},
    {8000, 32000, 32, 8, 32},
    {8000, 32000, 32, 8, 32},
    {8000, 32000, 32, 8, 32},
    {8000, 16000, 32, 8, 16},
    {8000, 32000, 64, 8, 32},
    {16000, 32000, 64, 16, 32},
    {16000, 32000, 64, 16, 32},
    {16000, 64000, 64, 16, 32},
    {32000, 64000, 128, 32, 64},
    {1000, 3000, 0, 1, 2},
    {512, 3500, 4, 1, 6},
    {2000, 8000, 65, 1, 8},
    {4000, 16000, 65, 1, 8},
    {64, 64, 0, 1, 4},
    {512, 16000, 0, 4, 32},
    {524, 2000, 8, 4, 15},
    {512, 5000, 0, 7, 32},
    {1000, 2000, 0, 5, 16},
    {5000, 5000, 142, 8, 64},
    {1500, 6300, 0, 5, 32},
    {3100, 6200, 0, 5, 20},
    {2300, 6200, 0, 6, 64},
    {3100, 6200, 0, 6, 64},
    {128, 6000, 0, 1, 12},
    {512, 2000, 4, 1, 3},
    {256, 6000, 0, 1, 6},
    {256, 3000, 4, 1, 3},
    {512, 5000, 4, 1, 5},
    {256, 5000, 4, 1, 6},
    {1310, 2620, 131, 12, 24},
    {1310, 2620, 131, 12, 24},
    {2620, 10480, 30, 12, 24},
    {2620, 10480, 30, 12, 24},
    {5240, 20970, 30, 12, 24},
    {5240, 20970, 30, 12, 24},
    {500, 2000, 8, 1, 4},
    {1000, 4000, 8, 1, 5},
    {2000, 8000, 8, 1, 5},
    {1000, 4000, 8, 3, 5},
    {1000, 8000, 8, 3, 5},
    {2000, 16000, 8, 3, 5},
    {2000, 16000, 8, 3, 6},
    {2000, 16000, 8, 3, 6},
    {1000, 12000, 9, 3, 12},
    {1000, 8000, 9, 3, 12},
    {512, 512, 8, 1, 1},
    {1000, 5000, 0, 1, 1},
    {512, 8000, 4, 1, 5},
    {512, 8000, 8, 1, 8},
    {384, 8000, 0, 1, 1},
    {256, 2000, 0, 1, 1},
    {1000, 16000, 16, 1, 3},
    {1000, 8000, 0, 1, 2},
    {1000, 4000, 16, 1, 2},
    {1000, 12000, 16, 1, 2},
    {1000, 8000, 16, 1, 2},
    {256, 8000, 0, 1, 4},
    {256, 8000, 0, 1, 4},
    {256, 8000, 0, 1, 4},
    {256, 8000, 0, 1, 4},
    {256, 8000, 0, 1, 4},
    {512, 1000, 0, 8, 20},
    {2000, 8000, 64, 1, 38},
    {2000, 16000, 64, 1, 38},
    {2000, 16000, 128, 1, 38},
    {256, 1000, 0, 3, 10},
    {256, 2000, 0, 3, 10},
    {1000, 4000, 0, 3, 24},
    {2000, 4000, 8, 3, 19},
    {2000, 8000, 8, 3, 24},
    {3000, 8000, 8, 3, 48},
    {256, 2000, 0, 3, 24},
    {768, 3000, 0, 6, 24},
    {768, 3000, 6, 6, 24},
    {768, 12000, 6, 6, 24},
    {768, 4500, 0, 1, 24},
    {384, 12000, 6, 1, 24},
    {192, 768, 6, 6, 24},
    {768, 12000, 6, 1, 31},
    {1000, 3000, 0, 2, 4},
    {1000, 4000, 8, 3, 64},
    {1000, 16000, 8, 2, 112},
    {1000, 2000, 0, 1, 2},
    {1000, 4000, 0, 3, 6},
    {2000, 4000, 0, 3, 6},
    {2000, 4000, 0, 4, 8},
    {2000, 4000, 8, 1, 20},
    {2000, 32000, 32, 1, 20},
    {2000, 8000, 32, 1, 54},
    {2000, 32000, 32, 1, 54},
    {2000, 32000, 32, 1, 54},
    {2000, 4000, 8, 1, 20},
    {4000, 16000, 1, 6, 12},
    {4000, 24000, 64, 12, 16},
    {16000, 32000, 64, 16, 24},
    {16000, 32000, 64, 8, 24},
    {8000, 32000, 0, 8, 24},
    {8000, 16000, 0, 8, 16},
    {96, 512, 0, 1, 1},
    {1000, 2000, 0, 1, 5},
    {512, 6000, 16, 1, 6},
    {512, 1500, 0, 1, 1},
    {768, 2000, 0, 1, 1},
    {768, 2000, 0, 1, 1},
    {2000, 4000, 0, 1, 1},
    {4000, 8000, 0, 1, 1},
    {1000, 1000, 0, 1, 2},
    {512, 1000, 0, 1, 2},
    {1000, 4000, 4, 1, 2},
    {1000, 4000, 8, 1, 2},
    {2000, 4000, 0, 3, 6},
    {2000, 4000, 8, 3, 6},
    {2000, 4000, 8, 3, 6},
    {2000, 8000, 8, 1, 6},
    {2000, 16000, 16, 1, 6},
    {2000, 16000, 16, 1, 6},
    {1000, 4000, 2, 3, 6},
    {2000, 12000, 8, 1, 4},
    {2000, 12000, 16, 3, 5},
    {4000, 16000, 8, 6, 12},
    {4000, 16000, 32, 6, 12},
    {768, 1000, 0, 0, 0},
    {768, 2000, 0, 0, 0},
    {768, 2000, 0, 0, 0},
    {2000, 4000, 0, 3, 6},
    {2000, 8000, 8, 3, 6},
    {2000, 8000, 8, 1, 6},
    {2000, 16000, 24, 1, 6},
    {2000, 16000, 24, 1, 6},
    {8000, 16000, 48, 1, 10},
    {1000, 8000, 0, 2, 6},
    {1000, 8000, 24, 2, 6},
    {1000, 8000, 24, 3, 6},
    {2000, 16000, 12, 3, 16},
    {2000, 16000, 24, 6, 16},
    {2000, 16000, 24, 6, 16},
    {512, 4000, 0, 8, 128},
    {2000, 8000, 16, 1, 3},
    {2000, 4000, 2, 1, 5},
    {2000, 8000, 32, 1, 6},
    {2000, 8000, 32, 1, 6},
    {2000, 8000, 4, 1, 6},
    {4000, 16000, 16, 1, 6},
    {4000, 16000, 32, 1, 6},
    {2000, 16000, 64, 5, 8},
    {4000, 16000, 64, 5, 8},
    {4000, 16000, 64, 5, 10},
    {4000, 16000, 64, 8, 16},
    {2000, 8000, 16, 6, 8},
    {8000, 16000, 32, 8, 16},
    {8000, 32000, 64, 8, 24},
    {8000, 32000, 64, 8, 24},
    {16000, 32000, 128, 16, 32},
    {4000, 24000, 32, 8, 24},
    {8000, 32000, 64, 8, 24},
    {16000, 32000, 256, 16, 24},
    {1000, 1000, 0, 1, 4},
    {1000, 2000, 0, 1, 6},
    {1000, 4000, 0, 1, 6},
    {2000, 6000, 0, 1, 8},
    {2000, 8000, 0, 1, 8},
    {4000, 8000, 0, 1, 8},
    {4000, 12000, 0, 1, 8},
    {4000, 16000, 0, 1, 8},
    {4000, 8000, 32, 16, 32},
    {4000, 8000, 32, 16, 32},
    {8000, 16000, 64, 4, 8},
    {8000, 24000, 160, 4, 8},
    {4000, 16000, 128, 16, 32},
    {1000, 2000, 0, 1, 2},
    {1000, 4000, 0, 1, 4},
    {2000, 8000, 64, 1, 5},
    {512, 4000, 0, 1, 7},
    {512, 4000, 0, 4, 7},
    {1000, 16000, 1, 1, 8},
    {512, 4000, 2, 1, 5},
    {512, 2000, 2, 3, 8},
    {1000, 4000, 8, 1, 14},
    {1000, 8000, 16, 1, 14},
    {2000, 8000, 32, 1, 13},
    {512, 1000, 8, 1, 3},
    {512, 2000, 8, 1, 5},
    {2000, 4000, 8, 3, 8},
    {2000, 6000, 16, 6, 16},
    {2000, 8000, 16, 4, 14},
    {4000, 16000, 32, 4, 12},
    {4000, 12000, 8, 6, 8},
    {4000, 12000, 32, 6, 12},
    {8000, 16000, 64, 12, 24},
    {8000, 24000, 32, 8, 16},
    {8000, 32000, 64, 12, 16},
    {8000, 32000, 128, 24, 32},
    {2000, 8000, 32, 5, 28},
    {2000, 32000, 24, 6, 26},
    {2000, 32000, 48, 26, 52},
    {2000, 32000, 112, 52, 104},
    {4000, 32000, 112, 52, 104},
    {8000, 64000, 96, 12, 176},
    {8000, 64000, 128, 12, 176},
    {262, 4000, 0, 1, 3},
    {512, 4000, 0, 1, 3},
    {262, 4000, 0, 1, 3},
    {512, 4000, 0, 1, 3},
    {1000, 8000, 0, 1, 8},
    {1000, 8000, 32, 2, 8},
    {2000, 8000, 0, 2, 14},
    {512, 8000, 32, 0, 0},
    {1000, 4000, 0, 0, 0},
}};

CpuFixture build_cpu_fixture() {
  CpuFixture f;
  f.x.resize(static_cast<Index>(kCpuRows.size()), 4);
  for (std::size_t i = 0; i < kCpuRows.size(); ++i) {
    const auto& r = kCpuRows[i];
    const auto row = static_cast<Index>(i);
    f.x(row, 0) = 0.5 * (r[0] + r[1]) / 1000.0;  // average memory, MB
    f.x(row, 1) = r[2];                          // cache, KB
    f.x(row, 2) = 0.5 * (r[3] + r[4]);           // average channels
    f.x(row, 3) = 1.0;
  }
  f.beta0.resize(4);
  f.beta0 << 0.49, 0.30, 0.19, 3.78;
  return f;
}

}  // namespace

const CpuFixture& cpu_fixture() {
  static const CpuFixture fixture = build_cpu_fixture();
  return fixture;
}

}  // namespace optsel
