#include "bvkit/builtins.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace bvkit {

namespace {

GridFunction exact_monomial(const std::vector<int>& exps, int d, int m) {
  if (static_cast<int>(exps.size()) != d) {
    throw std::invalid_argument("monomial: need one exponent per axis");
  }
  const std::int64_t n = std::int64_t(1) << m;
  // Exact cell averages: prod_i (b^{e+1} - a^{e+1}) / ((e+1)(b-a)).
  std::vector<std::vector<double>> avg(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    avg[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(n));
    const int e = exps[static_cast<std::size_t>(i)];
    for (std::int64_t c = 0; c < n; ++c) {
      const double a = static_cast<double>(c) / static_cast<double>(n);
      const double b = static_cast<double>(c + 1) / static_cast<double>(n);
      avg[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] =
          (std::pow(b, e + 1) - std::pow(a, e + 1)) / ((e + 1) * (b - a));
    }
  }
  const std::int64_t total = std::int64_t(1) << (m * d);
  std::vector<double> out(static_cast<std::size_t>(total));
  for (std::int64_t flat = 0; flat < total; ++flat) {
    std::int64_t rest = flat;
    double v = 1.0;
    for (int i = 0; i < d; ++i) {
      v *= avg[static_cast<std::size_t>(i)][static_cast<std::size_t>(rest & (n - 1))];
      rest >>= m;
    }
    out[static_cast<std::size_t>(flat)] = v;
  }
  return GridFunction(d, m, std::move(out));
}

std::vector<int> parse_exponents(const std::string& spec, int d) {
  std::vector<int> exps;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) exps.push_back(std::stoi(tok));
  if (static_cast<int>(exps.size()) == 1 && d > 1) exps.resize(static_cast<std::size_t>(d), 0);
  return exps;
}

}  // namespace

GridFunction make_builtin(const std::string& id, int d, int m, std::uint64_t seed,
                          int supersample) {
  if (id == "const") return GridFunction::constant(d, m, 1.0);
  if (id == "linear") {
    return exact_monomial([&] {
      std::vector<int> e(static_cast<std::size_t>(d), 0);
      e[0] = 1;
      return e;
    }(), d, m);
  }
  if (id.rfind("monomial:", 0) == 0) {
    return exact_monomial(parse_exponents(id.substr(9), d), d, m);
  }
  if (id == "sine") {
    return sample(
        [d](std::span<const double> x) {
          double v = 1.0;
          for (int i = 0; i < d; ++i) v *= std::sin(M_PI * x[i]);
          return v;
        },
        d, m, supersample);
  }
  if (id == "step") {
    return sample([](std::span<const double> x) { return x[0] >= 1.0 / 3.0 ? 1.0 : 0.0; }, d,
                  m, supersample);
  }
  if (id == "checkerboard") {
    return sample(
        [d](std::span<const double> x) {
          long parity = 0;
          for (int i = 0; i < d; ++i) {
            parity += static_cast<long>(std::floor(std::min(x[i], 0.999999) * 4.0));
          }
          return parity % 2 == 0 ? 1.0 : -1.0;
        },
        d, m, supersample);
  }
  if (id == "random-smooth") {
    std::mt19937_64 rng(seed + 0x5eedULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    struct Mode {
      std::vector<int> freq;
      double amp;
      bool use_sin;
    };
    std::vector<Mode> modes;
    std::vector<int> freq(static_cast<std::size_t>(d), 0);
    std::function<void(int, int)> rec = [&](int axis, int budget) {
      if (axis == d) {
        int norm2 = 0;
        for (int fset : freq) norm2 += fset * fset;
        modes.push_back({freq, gauss(rng) / (1.0 + norm2), (rng() & 1) != 0});
        return;
      }
      for (int j = 0; j <= budget; ++j) {
        freq[static_cast<std::size_t>(axis)] = j;
        rec(axis + 1, budget - j);
      }
      freq[static_cast<std::size_t>(axis)] = 0;
    };
    rec(0, 3);
    return sample(
        [&modes, d](std::span<const double> x) {
          double v = 0.0;
          for (const auto& mode : modes) {
            double term = mode.amp;
            for (int i = 0; i < d; ++i) {
              const double arg = M_PI * mode.freq[static_cast<std::size_t>(i)] * x[i];
              term *= mode.use_sin ? std::sin(arg + 0.25) : std::cos(arg);
            }
            v += term;
          }
          return v;
        },
        d, m, supersample);
  }
  if (id == "random-step") {
    std::mt19937_64 rng(seed + 0x57e9ULL);
    std::uniform_real_distribution<double> uni(0.05, 0.95);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int jumps = 5;
    std::vector<double> where(jumps), height(jumps);
    for (int j = 0; j < jumps; ++j) {
      where[static_cast<std::size_t>(j)] = uni(rng);
      height[static_cast<std::size_t>(j)] = gauss(rng);
    }
    return sample(
        [&where, &height, jumps](std::span<const double> x) {
          double v = 0.0;
          for (int j = 0; j < jumps; ++j) {
            if (x[0] >= where[static_cast<std::size_t>(j)]) v += height[static_cast<std::size_t>(j)];
          }
          return v;
        },
        d, m, supersample);
  }
  throw std::invalid_argument("unknown builtin: " + id);
}

std::vector<std::string> builtin_ids() {
  return {"const",        "linear",      "sine",        "step",
          "checkerboard", "monomial:1",  "random-smooth", "random-step"};
}

}  // namespace bvkit
