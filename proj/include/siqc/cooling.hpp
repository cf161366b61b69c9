#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

namespace siqc {

/// Shannon entropy of a biased coin, bits.
double binary_entropy(double probability);

/// Extractable entropy deficit per bit at bias p: 1 - H2((1+p)/2).
double bit_capacity(double bias);

/// Bias of a 3-bit majority of independent bits.
double majority_bias(double pa, double pb, double pc);

enum class CoolingMode { exact, approximate };

inline constexpr std::size_t kMaxExactBits = 20;

struct CompressionStep {
  std::array<std::size_t, 3> bits;  // target first
};

/// A register of classical bits. Bit value 0 is the polarised state, so a
/// bit with bias p reads 0 with probability (1 + p) / 2.
///
/// Exact mode keeps the joint distribution over up to 20 bits; approximate
/// mode keeps one bias per bit and treats bits as independent after every
/// step.
class CoolingRegister {
 public:
  static CoolingRegister exact(std::size_t bits, double bias);
  static CoolingRegister exact(const std::vector<double>& biases);
  static CoolingRegister approximate(std::size_t bits, double bias);
  static CoolingRegister approximate(std::vector<double> biases);

  CoolingMode mode() const { return mode_; }
  std::size_t size() const { return bits_; }
  double bias(std::size_t bit) const;
  std::vector<double> biases() const;
  /// Joint Shannon entropy (exact) or the sum of marginal entropies, bits.
  double entropy() const;

  /// Reversible majority compression onto `target`: swaps the joint states
  /// (t,b,c) = (0,1,1) and (1,0,0), which makes the target the majority.
  void compress3(std::size_t target, std::size_t b, std::size_t c);

  /// Drops bits from tracking (marginalises them out); survivors keep their
  /// relative order and are renumbered from 0.
  void discard(std::vector<std::size_t> bits);

  const std::vector<double>& table() const { return table_; }
  const std::vector<CompressionStep>& history() const { return history_; }

 private:
  CoolingRegister(CoolingMode mode, std::size_t bits) : mode_(mode), bits_(bits) {}

  CoolingMode mode_;
  std::size_t bits_;
  std::vector<double> table_;   // exact
  std::vector<double> biases_;  // approximate
  std::vector<CompressionStep> history_;
};

enum class CoolingPolicyKind {
  /// Round-robin triples; each round keeps the targets and discards both
  /// support bits (and any leftover).
  discard,
  /// Keeps support bits in play: repeatedly compresses the highest window of
  /// three (by bias) whose target improves, until nothing improves. Bits
  /// reaching the target bias are set aside as the cold subregister.
  recycle,
};

struct CoolingPolicy {
  CoolingPolicyKind kind = CoolingPolicyKind::recycle;
  CoolingMode mode = CoolingMode::approximate;
  /// Exactly one of rounds / target_bias. For recycle, `rounds` means the
  /// target bias reached by that many majority levels from p0.
  std::optional<int> rounds;
  std::optional<double> target_bias;
};

struct EntropyBounds {
  double exact;  // n0 * (1 - H2((1 + p0)/2))
  double quadratic;  // n0 * p0^2 / (2 ln 2)
};

EntropyBounds entropy_limit(double n0, double p0);

struct CoolingResult {
  std::size_t cold_bits = 0;
  std::optional<double> bias;  // lowest bias among cold bits; empty if none
  std::size_t steps = 0;
  int rounds = 0;
  double target_bias = 0.0;
  EntropyBounds bounds{};
  /// cold_bits * capacity(bias) / (n0 * capacity(p0)); never exceeds 1.
  double capacity_fraction = 0.0;
  std::vector<double> cold_biases;
};

/// Throws ConfigError for n0 < 3, p0 outside (0,1), a target bias >= 1, or
/// exact mode above 20 bits.
CoolingResult cool(std::size_t n0, double p0, const CoolingPolicy& policy);

}  // namespace siqc
