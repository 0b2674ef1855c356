#pragma once

// Seeded instance generators: the fixed 12-period showcase instance and the
// two randomized experiment schemes with their full factorial grids.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "lotflow/core_model.hpp"

namespace lotflow {

/// 64-bit stream generator. Each parameter family draws from its own stream,
/// keyed by (seed, stream id), so toggling one family leaves the others'
/// draws untouched. Versioned: changing any transform here changes files.
class RngStream {
 public:
  static constexpr int kVersion = 1;

  RngStream(std::uint64_t seed, std::uint64_t stream) : eng_(mix(mix(seed) ^ mix(stream + 0x5851F42D4C957F2DULL))) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

  double normal(double mu, double sigma) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return mu + sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  // Uniform over {lo, lo + step, ..., hi}.
  double discrete_uniform(int lo, int hi, int step) {
    const auto count = static_cast<std::uint64_t>((hi - lo) / step + 1);
    return static_cast<double>(lo + step * static_cast<int>(eng_() % count));
  }

 private:
  std::mt19937_64 eng_;
};

enum class Stream : std::uint64_t { Demand = 1, Cost = 2, Holding = 3, Price = 4 };

inline double round2(double x) { return std::round(x * 100.0) / 100.0; }

inline Instance gen_table1(double Bc = 200.0, double BL = 0.0, int TL = 0, double r = 0.0) {
  Instance inst;
  inst.T = 12;
  inst.p = {21, 22, 20, 15, 10, 8, 5, 10, 18, 10, 14, 18};
  inst.c = {5, 13, 10, 10, 10, 10, 10, 10, 10, 10, 10, 10};
  inst.h = {10, 5, 5, 5, 5, 5, 5, 5, 5, 5, 5, 5};
  inst.s = std::vector<double>(12, 100.0);
  inst.d = {30, 45, 50, 55, 45, 55, 90, 80, 90, 65, 80, 70};
  inst.beta = 0.5;
  inst.Bc = Bc;
  inst.BL = BL;
  inst.TL = TL;
  inst.r = r;
  return inst;
}

// ---------------------------------------------------------------- scheme 1

enum class DemandMode { Exponential, Normal, DiscreteUniform };
enum class CostMode { Constant, Seasonal };
enum class PriceMode { DiscreteUniform, Seasonal };
enum class CapitalMode { TwoPeriods, ThreePeriods };
enum class LoanMode { None, Loan };

inline constexpr std::array<int, 6> kTable2Horizons{12, 24, 36, 48, 60, 72};
inline constexpr std::array<double, 3> kTable2Betas{0.0, 0.10, 0.50};

struct Table2Config {
  int T = 12;
  DemandMode demand = DemandMode::Exponential;
  CostMode cost = CostMode::Constant;
  PriceMode price = PriceMode::DiscreteUniform;
  CapitalMode capital = CapitalMode::TwoPeriods;
  LoanMode loan = LoanMode::None;
  double beta = 0.0;
  std::uint64_t seed = 0;
};

inline double seasonal(int t, double base, double amplitude) {
  return round2(base + amplitude * std::sin(2.0 * std::numbers::pi * t / 12.0));
}

// Any positive horizon is accepted so that small instances can be compared
// against the exact oracle; the grid itself only uses kTable2Horizons.
inline Instance gen_table2(const Table2Config& cfg) {
  if (cfg.T < 1) throw InputError("table2: T must be positive");
  if (cfg.beta != 0.0 && cfg.beta != 0.10 && cfg.beta != 0.50) throw InputError("table2: beta must be 0, 0.1 or 0.5");
  Instance inst;
  inst.T = cfg.T;
  inst.beta = cfg.beta;
  RngStream demand(cfg.seed, static_cast<std::uint64_t>(Stream::Demand));
  RngStream price(cfg.seed, static_cast<std::uint64_t>(Stream::Price));
  for (int t = 1; t <= cfg.T; ++t) {
    double d = 0.0;
    switch (cfg.demand) {
      case DemandMode::Exponential: d = demand.exponential(150.0); break;
      case DemandMode::Normal:
        do d = demand.normal(150.0, 40.0); while (d < 0.0);
        break;
      case DemandMode::DiscreteUniform: d = demand.discrete_uniform(30, 270, 10); break;
    }
    inst.d.push_back(round2(d));
    if (cfg.cost == CostMode::Constant) {
      inst.c.push_back(13.0);
      inst.h.push_back(1.0);
    } else {
      inst.c.push_back(seasonal(t, 13.0, 3.0));
      inst.h.push_back(seasonal(t, 1.0, 0.5));
    }
    inst.p.push_back(cfg.price == PriceMode::Seasonal ? seasonal(t, 20.0, 5.0) : price.discrete_uniform(15, 25, 5));
    inst.s.push_back(1000.0);
  }
  const double early = inst.d[0] + (inst.T > 1 ? inst.d[1] : 0.0) +
                       (cfg.capital == CapitalMode::ThreePeriods && inst.T > 2 ? inst.d[2] : 0.0);
  inst.Bc = inst.s[0] + inst.c[0] * early;
  if (cfg.loan == LoanMode::Loan) {
    inst.BL = 2000.0;
    inst.TL = std::min(6, inst.T);
    inst.r = 0.05;
  }
  return inst;
}

/// Full factorial in the order T, demand, cost, price, capital, loan, beta;
/// the last factor varies fastest. All cells share one seed.
inline std::vector<Table2Config> table2_grid(std::uint64_t seed) {
  std::vector<Table2Config> out;
  for (int T : kTable2Horizons)
    for (auto d : {DemandMode::Exponential, DemandMode::Normal, DemandMode::DiscreteUniform})
      for (auto c : {CostMode::Constant, CostMode::Seasonal})
        for (auto p : {PriceMode::DiscreteUniform, PriceMode::Seasonal})
          for (auto k : {CapitalMode::TwoPeriods, CapitalMode::ThreePeriods})
            for (auto l : {LoanMode::None, LoanMode::Loan})
              for (double b : kTable2Betas) out.push_back(Table2Config{T, d, c, p, k, l, b, seed});
  return out;
}

// ---------------------------------------------------------------- scheme 2

struct Table5Config {
  bool demand_high = false;   // sigma 10 / 50
  bool cost_high = false;     // sigma 1 / 5
  bool holding_high = false;  // sigma 0.5 / 2.5
  bool price_high = false;    // sigma 1 / 5
  bool capital_high = false;  // two / five periods of demand
  bool rate_high = false;     // r = 0.02 / 0.05
  bool beta_high = false;     // beta = 0.10 / 0.50
  std::uint64_t seed = 0;
};

inline constexpr int kTable5Replicates = 10;

inline Instance gen_table5(const Table5Config& cfg) {
  Instance inst;
  inst.T = 12;
  RngStream demand(cfg.seed, static_cast<std::uint64_t>(Stream::Demand));
  RngStream cost(cfg.seed, static_cast<std::uint64_t>(Stream::Cost));
  RngStream holding(cfg.seed, static_cast<std::uint64_t>(Stream::Holding));
  RngStream price(cfg.seed, static_cast<std::uint64_t>(Stream::Price));
  auto nonneg = [](RngStream& g, double mu, double sigma) {
    double x;
    do x = g.normal(mu, sigma); while (x < 0.0);
    return round2(x);
  };
  for (int t = 0; t < inst.T; ++t) {
    inst.d.push_back(nonneg(demand, 150.0, cfg.demand_high ? 50.0 : 10.0));
    double c;
    do c = round2(cost.normal(13.0, cfg.cost_high ? 5.0 : 1.0)); while (c <= 0.0);
    inst.c.push_back(c);
    inst.h.push_back(nonneg(holding, 5.0, cfg.holding_high ? 2.5 : 0.5));
    inst.p.push_back(nonneg(price, 20.0, cfg.price_high ? 5.0 : 1.0));
    inst.s.push_back(1000.0);
  }
  double early = 0.0;
  for (int t = 0; t < (cfg.capital_high ? 5 : 2); ++t) early += inst.d[static_cast<std::size_t>(t)];
  inst.Bc = inst.s[0] + inst.c[0] * early;
  inst.BL = 2000.0;
  inst.TL = 6;
  inst.r = cfg.rate_high ? 0.05 : 0.02;
  inst.beta = cfg.beta_high ? 0.50 : 0.10;
  return inst;
}

/// 2^7 level combinations, demand varying slowest and beta fastest, each
/// repeated for kTable5Replicates seeds seed, seed+1, ...
inline std::vector<Table5Config> table5_grid(std::uint64_t seed) {
  std::vector<Table5Config> out;
  for (int code = 0; code < 128; ++code) {
    for (int rep = 0; rep < kTable5Replicates; ++rep) {
      auto bit = [&](int k) { return ((code >> (6 - k)) & 1) == 1; };
      out.push_back(Table5Config{bit(0), bit(1), bit(2), bit(3), bit(4), bit(5), bit(6),
                                 seed + static_cast<std::uint64_t>(rep)});
    }
  }
  return out;
}

inline const char* to_string(DemandMode m) {
  switch (m) {
    case DemandMode::Exponential: return "exponential";
    case DemandMode::Normal: return "normal";
    case DemandMode::DiscreteUniform: return "discrete_uniform";
  }
  return "?";
}
inline const char* to_string(CostMode m) { return m == CostMode::Constant ? "constant" : "seasonal"; }
inline const char* to_string(PriceMode m) { return m == PriceMode::Seasonal ? "seasonal" : "discrete_uniform"; }
inline const char* to_string(CapitalMode m) { return m == CapitalMode::TwoPeriods ? "two_periods" : "three_periods"; }
inline const char* to_string(LoanMode m) { return m == LoanMode::Loan ? "loan" : "none"; }

}  // namespace lotflow
