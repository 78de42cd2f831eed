#pragma once

#include <array>
#include <string>
#include <vector>

namespace vpt {

// Uniform triangular partition with saturating end shoulders: adjacent
// centres are `half_width` apart, each triangle reaches zero at its
// neighbours' centres, and the two outermost sets stay at 1 beyond their
// centres.
class Partition {
 public:
  // Throws InvalidArgument unless the centres are strictly increasing and
  // uniformly spaced by half_width.
  Partition(std::vector<std::string> labels, std::vector<double> centers, double half_width);

  // `count` sets centred symmetrically around zero.
  static Partition symmetric(std::vector<std::string> labels, double half_width);

  std::size_t size() const { return centers_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<double>& centers() const { return centers_; }
  double half_width() const { return half_width_; }

  // Membership vector; at most two entries are non-zero and they sum to 1.
  std::vector<double> fuzzify(double value) const;

 private:
  std::vector<std::string> labels_;
  std::vector<double> centers_;
  double half_width_;
};

inline constexpr std::size_t kInputSets = 7;
inline constexpr std::size_t kOutputSets = 13;

// Output label index for each (EOA row, EOD column) pair.
using RuleTable = std::array<std::array<int, kInputSets>, kInputSets>;

const std::array<std::string, kInputSets>& input_labels();
const std::array<std::string, kOutputSets>& output_labels();

// The 7x7 rule base, row = EOA label, column = EOD label.
const RuleTable& default_rule_table();

// Mamdani min-max: rule strength min(mu_eoa[row], mu_eod[col]); each output
// set takes the max strength over the rules that map to it.
std::vector<double> infer(const RuleTable& rules, const std::vector<double>& mu_eod,
                          const std::vector<double>& mu_eoa);

// Membership-weighted mean of the output set centres. Throws NoRuleFired when
// every weight is zero.
double defuzzify_cog(const Partition& output, const std::vector<double>& weights);

struct FuzzyController {
  Partition eod_partition;  // pixels
  Partition eoa_partition;  // degrees
  Partition cte_partition;  // dimensionless
  RuleTable rules;

  static FuzzyController standard();

  // Crisp cross-track error from a distance error and an angle error.
  double evaluate(double eod_px, double eoa_deg) const;
};

}  // namespace vpt
