#include "simpson/mixture.h"

namespace simpson {

Probability mixture_predict(const MixtureSpec& spec) {
  if (spec.mechanisms.empty()) {
    throw Error(ErrorCode::kPriorNotNormalized, "no mechanisms; priors sum to 0 (deficit 1)");
  }
  Rational prior_sum;
  Rational prediction;
  for (const auto& m : spec.mechanisms) {
    prior_sum += m.prior.value();
    prediction += m.prior.value() * m.conditional.value();
  }
  if (prior_sum != Rational(1)) {
    throw Error(ErrorCode::kPriorNotNormalized,
                "priors sum to " + prior_sum.to_string() + " (deficit " +
                    (Rational(1) - prior_sum).to_string() + ")");
  }
  return Probability(std::move(prediction));
}

MixtureSpec mixture_spec_from_table(const StratifiedTable& stratified,
                                    const std::array<Probability, 3>& priors, Outcome outcome,
                                    Exposure given) {
  if (stratified.size() != 2) {
    throw Error(ErrorCode::kNotBinaryStratifier,
                "selection mixture needs exactly two strata, got " +
                    std::to_string(stratified.size()));
  }
  auto conditional = [&](const std::string& label, const CellCounts& t) {
    try {
      return cond_prob(t, outcome, given);
    } catch (const Error& e) {
      throw Error(e.code(), "'" + label + "': " + e.what());
    }
  };
  MixtureSpec spec;
  spec.mechanisms.push_back({stratified[0].label, priors[0],
                             conditional(stratified[0].label, stratified[0].counts)});
  spec.mechanisms.push_back({stratified[1].label, priors[1],
                             conditional(stratified[1].label, stratified[1].counts)});
  spec.mechanisms.push_back({"pooled", priors[2], conditional("pooled", pool(stratified))});
  return spec;
}

Probability mixture_from_table(const StratifiedTable& stratified,
                               const std::array<Probability, 3>& priors, Outcome outcome,
                               Exposure given) {
  return mixture_predict(mixture_spec_from_table(stratified, priors, outcome, given));
}

}  // namespace simpson
