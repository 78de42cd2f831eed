#include "vpt/fuzzy.hpp"

#include <algorithm>
#include <cmath>

#include "vpt/errors.hpp"

namespace vpt {

Partition::Partition(std::vector<std::string> labels, std::vector<double> centers,
                     double half_width)
    : labels_(std::move(labels)), centers_(std::move(centers)), half_width_(half_width) {
  if (labels_.size() != centers_.size() || centers_.size() < 2) {
    throw InvalidArgument("partition needs one label per centre and at least two sets");
  }
  if (!(half_width_ > 0.0)) {
    throw InvalidArgument("partition half width must be positive");
  }
  for (std::size_t i = 1; i < centers_.size(); ++i) {
    const double gap = centers_[i] - centers_[i - 1];
    if (std::abs(gap - half_width_) > 1e-9 * std::max(1.0, half_width_)) {
      throw InvalidArgument("partition centres must be uniformly spaced by the half width");
    }
  }
}

Partition Partition::symmetric(std::vector<std::string> labels, double half_width) {
  const double mid = (static_cast<double>(labels.size()) - 1.0) / 2.0;
  std::vector<double> centers(labels.size());
  for (std::size_t i = 0; i < centers.size(); ++i) {
    centers[i] = (static_cast<double>(i) - mid) * half_width;
  }
  return Partition(std::move(labels), std::move(centers), half_width);
}

std::vector<double> Partition::fuzzify(double value) const {
  std::vector<double> mu(centers_.size(), 0.0);
  if (value <= centers_.front()) {
    mu.front() = 1.0;
    return mu;
  }
  if (value >= centers_.back()) {
    mu.back() = 1.0;
    return mu;
  }
  const double pos = (value - centers_.front()) / half_width_;
  auto lo = static_cast<std::size_t>(std::floor(pos));
  lo = std::min(lo, centers_.size() - 2);
  const double upper = (value - centers_[lo]) / half_width_;
  mu[lo] = 1.0 - upper;
  mu[lo + 1] = upper;
  return mu;
}

const std::array<std::string, kInputSets>& input_labels() {
  static const std::array<std::string, kInputSets> labels{"NB", "NM", "NS", "ZO",
                                                          "PS", "PM", "PB"};
  return labels;
}

const std::array<std::string, kOutputSets>& output_labels() {
  static const std::array<std::string, kOutputSets> labels{
      "NBX", "NB", "NMB", "NM", "NMS", "NS", "ZO", "PS", "PMS", "PM", "PMB", "PB", "PBX"};
  return labels;
}

const RuleTable& default_rule_table() {
  // clang-format off
  static const RuleTable table{{
      // EOD:  NB  NM  NS  ZO  PS  PM  PB
      /*NB*/ {{ 0,  1,  2,  3,  4,  5,  6}},
      /*NM*/ {{ 1,  2,  3,  4,  5,  6,  7}},
      /*NS*/ {{ 2,  3,  4,  5,  6,  7,  8}},
      /*ZO*/ {{ 3,  4,  5,  6,  7,  8,  9}},
      /*PS*/ {{ 4,  5,  6,  7,  8,  9, 10}},
      /*PM*/ {{ 5,  6,  7,  8,  9, 10, 11}},
      /*PB*/ {{ 6,  7,  8,  9, 10, 11, 12}},
  }};
  // clang-format on
  return table;
}

std::vector<double> infer(const RuleTable& rules, const std::vector<double>& mu_eod,
                          const std::vector<double>& mu_eoa) {
  if (mu_eod.size() != kInputSets || mu_eoa.size() != kInputSets) {
    throw InvalidArgument("membership vectors must have seven entries");
  }
  std::vector<double> k(kOutputSets, 0.0);
  for (std::size_t row = 0; row < kInputSets; ++row) {
    if (mu_eoa[row] == 0.0) {
      continue;
    }
    for (std::size_t col = 0; col < kInputSets; ++col) {
      const double strength = std::min(mu_eoa[row], mu_eod[col]);
      double& slot = k[static_cast<std::size_t>(rules[row][col])];
      slot = std::max(slot, strength);
    }
  }
  return k;
}

double defuzzify_cog(const Partition& output, const std::vector<double>& weights) {
  if (weights.size() != output.size()) {
    throw InvalidArgument("weight vector does not match the output partition");
  }
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    num += output.centers()[i] * weights[i];
    den += weights[i];
  }
  if (!(den > 0.0)) {
    throw NoRuleFired("no output set has positive membership");
  }
  return num / den;
}

FuzzyController FuzzyController::standard() {
  std::vector<std::string> in(input_labels().begin(), input_labels().end());
  std::vector<std::string> out(output_labels().begin(), output_labels().end());
  return FuzzyController{Partition::symmetric(in, 40.0), Partition::symmetric(in, 10.0),
                         Partition::symmetric(out, 1.0), default_rule_table()};
}

double FuzzyController::evaluate(double eod_px, double eoa_deg) const {
  return defuzzify_cog(cte_partition,
                       infer(rules, eod_partition.fuzzify(eod_px), eoa_partition.fuzzify(eoa_deg)));
}

}  // namespace vpt
