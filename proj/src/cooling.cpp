#include "siqc/cooling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "siqc/error.hpp"

namespace siqc {

double binary_entropy(double q) {
  if (q <= 0.0 || q >= 1.0) return 0.0;
  return -q * std::log2(q) - (1.0 - q) * std::log2(1.0 - q);
}

double bit_capacity(double bias) { return 1.0 - binary_entropy(0.5 * (1.0 + bias)); }

double majority_bias(double pa, double pb, double pc) { return 0.5 * (pa + pb + pc - pa * pb * pc); }

namespace {

void check_bias(double p) {
  if (!(p >= -1.0 && p <= 1.0)) throw ConfigError("bias must lie in [-1, 1]");
}

}  // namespace

CoolingRegister CoolingRegister::exact(std::size_t bits, double bias) {
  return exact(std::vector<double>(bits, bias));
}

CoolingRegister CoolingRegister::exact(const std::vector<double>& biases) {
  if (biases.empty() || biases.size() > kMaxExactBits)
    throw ConfigError("exact register holds 1.." + std::to_string(kMaxExactBits) + " bits");
  CoolingRegister reg(CoolingMode::exact, biases.size());
  reg.table_.assign(std::size_t{1} << biases.size(), 1.0);
  for (std::size_t bit = 0; bit < biases.size(); ++bit) {
    check_bias(biases[bit]);
    const double p0 = 0.5 * (1.0 + biases[bit]);
    for (std::size_t s = 0; s < reg.table_.size(); ++s) reg.table_[s] *= ((s >> bit) & 1U) ? 1.0 - p0 : p0;
  }
  return reg;
}

CoolingRegister CoolingRegister::approximate(std::size_t bits, double bias) {
  return approximate(std::vector<double>(bits, bias));
}

CoolingRegister CoolingRegister::approximate(std::vector<double> biases) {
  for (double p : biases) check_bias(p);
  CoolingRegister reg(CoolingMode::approximate, biases.size());
  reg.biases_ = std::move(biases);
  return reg;
}

double CoolingRegister::bias(std::size_t bit) const {
  if (bit >= bits_) throw ConfigError("bit index out of range");
  if (mode_ == CoolingMode::approximate) return biases_[bit];
  double zero = 0.0;
  for (std::size_t s = 0; s < table_.size(); ++s) {
    if (!((s >> bit) & 1U)) zero += table_[s];
  }
  return 2.0 * zero - 1.0;
}

std::vector<double> CoolingRegister::biases() const {
  std::vector<double> out(bits_);
  for (std::size_t i = 0; i < bits_; ++i) out[i] = bias(i);
  return out;
}

double CoolingRegister::entropy() const {
  double h = 0.0;
  if (mode_ == CoolingMode::approximate) {
    for (double p : biases_) h += binary_entropy(0.5 * (1.0 + p));
    return h;
  }
  for (double prob : table_) {
    if (prob > 0.0) h -= prob * std::log2(prob);
  }
  return h;
}

void CoolingRegister::compress3(std::size_t target, std::size_t b, std::size_t c) {
  if (target >= bits_ || b >= bits_ || c >= bits_) throw ConfigError("compress3: bit index out of range");
  if (target == b || target == c || b == c) throw ConfigError("compress3: bit indices must be distinct");
  history_.push_back(CompressionStep{{target, b, c}});

  if (mode_ == CoolingMode::approximate) {
    const double pa = biases_[target], pb = biases_[b], pc = biases_[c];
    const double qa = 0.5 * (1 + pa), qb = 0.5 * (1 + pb), qc = 0.5 * (1 + pc);
    const double p011 = qa * (1 - qb) * (1 - qc);
    const double p100 = (1 - qa) * qb * qc;
    biases_[target] = majority_bias(pa, pb, pc);
    biases_[b] = pb + 2.0 * (p011 - p100);
    biases_[c] = pc + 2.0 * (p011 - p100);
    return;
  }

  const std::size_t mt = std::size_t{1} << target, mb = std::size_t{1} << b, mc = std::size_t{1} << c;
  for (std::size_t s = 0; s < table_.size(); ++s) {
    // s encodes (t,b,c) = (0,1,1); its partner (1,0,0) differs in all three.
    if (!(s & mt) && (s & mb) && (s & mc)) std::swap(table_[s], table_[s ^ (mt | mb | mc)]);
  }
}

void CoolingRegister::discard(std::vector<std::size_t> bits) {
  std::sort(bits.begin(), bits.end());
  bits.erase(std::unique(bits.begin(), bits.end()), bits.end());
  for (std::size_t bit : bits) {
    if (bit >= bits_) throw ConfigError("discard: bit index out of range");
  }
  if (bits.empty()) return;

  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < bits_; ++i) {
    if (!std::binary_search(bits.begin(), bits.end(), i)) keep.push_back(i);
  }

  if (mode_ == CoolingMode::approximate) {
    std::vector<double> next;
    for (std::size_t i : keep) next.push_back(biases_[i]);
    biases_ = std::move(next);
  } else {
    std::vector<double> next(std::size_t{1} << keep.size(), 0.0);
    for (std::size_t s = 0; s < table_.size(); ++s) {
      std::size_t t = 0;
      for (std::size_t k = 0; k < keep.size(); ++k) t |= ((s >> keep[k]) & 1U) << k;
      next[t] += table_[s];
    }
    table_ = std::move(next);
  }
  bits_ = keep.size();
}

EntropyBounds entropy_limit(double n0, double p0) {
  if (!(p0 > 0.0 && p0 <= 1.0)) throw ConfigError("entropy_limit: p0 must be in (0, 1]");
  if (!(n0 > 0.0)) throw ConfigError("entropy_limit: n0 must be > 0");
  return EntropyBounds{n0 * bit_capacity(p0), n0 * p0 * p0 / (2.0 * std::numbers::ln2)};
}

namespace {

struct WorkingBit {
  double bias;
  std::size_t bit;
};

// Bias ladder reached by r rounds of equal-bias majority compression.
double ladder(double p0, int rounds) {
  double p = p0;
  for (int r = 0; r < rounds; ++r) p = majority_bias(p, p, p);
  return p;
}

void run_discard(CoolingRegister& reg, int rounds, CoolingResult& result) {
  for (int r = 0; r < rounds; ++r) {
    const std::size_t triples = reg.size() / 3;
    if (triples == 0) throw ConfigError("cool: register too small for the requested number of rounds");
    std::vector<std::size_t> dropped;
    for (std::size_t t = 0; t < triples; ++t) {
      reg.compress3(3 * t, 3 * t + 1, 3 * t + 2);
      ++result.steps;
      dropped.push_back(3 * t + 1);
      dropped.push_back(3 * t + 2);
    }
    for (std::size_t i = 3 * triples; i < reg.size(); ++i) dropped.push_back(i);
    reg.discard(dropped);
  }
  result.cold_biases = reg.biases();
}

void run_recycle(CoolingRegister& reg, double p0, double target, CoolingResult& result) {
  // Working set sorted by decreasing bias. Bits below `floor` hold almost no
  // entropy deficit and are left out.
  const double floor = 1e-3 * p0;
  std::vector<WorkingBit> work;
  for (std::size_t i = 0; i < reg.size(); ++i) work.push_back({reg.bias(i), i});
  auto by_bias = [](const WorkingBit& l, const WorkingBit& r) {
    return l.bias != r.bias ? l.bias > r.bias : l.bit < r.bit;
  };
  std::sort(work.begin(), work.end(), by_bias);

  const std::size_t max_steps = 1000 * reg.size() + 1000;
  std::size_t resume = 0;
  while (result.steps < max_steps) {
    std::size_t found = work.size();
    for (std::size_t i = resume; i + 2 < work.size(); ++i) {
      const double predicted = majority_bias(work[i].bias, work[i + 1].bias, work[i + 2].bias);
      if (predicted > work[i].bias * (1.0 + 1e-12)) {
        found = i;
        break;
      }
    }
    if (found == work.size()) break;

    const std::array<std::size_t, 3> bits{work[found].bit, work[found + 1].bit, work[found + 2].bit};
    reg.compress3(bits[0], bits[1], bits[2]);
    ++result.steps;
    work.erase(work.begin() + static_cast<std::ptrdiff_t>(found),
               work.begin() + static_cast<std::ptrdiff_t>(found) + 3);

    std::size_t lowest_change = found;
    for (std::size_t k = 0; k < 3; ++k) {
      const double b = reg.bias(bits[k]);
      if (k == 0 && b >= target) {
        result.cold_biases.push_back(b);
        continue;
      }
      if (b < floor) continue;
      const WorkingBit entry{b, bits[k]};
      auto pos = std::lower_bound(work.begin(), work.end(), entry, by_bias);
      lowest_change = std::min(lowest_change, static_cast<std::size_t>(pos - work.begin()));
      work.insert(pos, entry);
    }
    resume = lowest_change >= 2 ? lowest_change - 2 : 0;
  }
  std::sort(result.cold_biases.begin(), result.cold_biases.end(), std::greater<>());
}

}  // namespace

CoolingResult cool(std::size_t n0, double p0, const CoolingPolicy& policy) {
  if (n0 < 3) throw ConfigError("cool: n0 must be >= 3");
  if (!(p0 > 0.0 && p0 < 1.0)) throw ConfigError("cool: p0 must be in (0, 1)");
  if (policy.rounds.has_value() == policy.target_bias.has_value())
    throw ConfigError("cool: give exactly one of rounds or target bias");
  if (policy.target_bias && !(*policy.target_bias < 1.0))
    throw ConfigError("cool: target bias >= 1 is unreachable");
  if (policy.rounds && *policy.rounds < 0) throw ConfigError("cool: rounds must be >= 0");
  if (policy.mode == CoolingMode::exact && n0 > kMaxExactBits)
    throw ConfigError("cool: exact mode supports at most " + std::to_string(kMaxExactBits) + " bits");

  CoolingResult result;
  result.bounds = entropy_limit(static_cast<double>(n0), p0);

  if (policy.rounds) {
    result.rounds = *policy.rounds;
    result.target_bias = ladder(p0, result.rounds);
  } else {
    result.target_bias = *policy.target_bias;
    while (ladder(p0, result.rounds) < result.target_bias) ++result.rounds;
  }

  CoolingRegister reg = policy.mode == CoolingMode::exact ? CoolingRegister::exact(n0, p0)
                                                          : CoolingRegister::approximate(n0, p0);

  if (result.target_bias <= p0) {
    result.cold_biases = reg.biases();
  } else if (policy.kind == CoolingPolicyKind::discard) {
    run_discard(reg, result.rounds, result);
  } else {
    // A tiny slack so bits landing exactly on a ladder value count as cold.
    run_recycle(reg, p0, result.target_bias * (1.0 - 1e-12), result);
  }

  result.cold_bits = result.cold_biases.size();
  if (result.cold_bits > 0) {
    result.bias = *std::min_element(result.cold_biases.begin(), result.cold_biases.end());
    const double used = static_cast<double>(result.cold_bits) * bit_capacity(*result.bias);
    result.capacity_fraction = used / result.bounds.exact;
    if (used > result.bounds.exact + 1e-9) throw std::logic_error("cool: cold register exceeds the entropy bound");
  }
  return result;
}

}  // namespace siqc
