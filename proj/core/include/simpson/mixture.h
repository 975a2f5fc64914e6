#ifndef SIMPSON_MIXTURE_H_
#define SIMPSON_MIXTURE_H_

// Predictions averaged over an unobserved selection mechanism T: which
// population (one stratum, or the pooled table) a new case is drawn from.
// T is independent of everything else, so p(x | y) = sum_t p(x | y, T=t) p(T=t).

#include <array>
#include <string>
#include <vector>

#include "simpson/tables.h"

namespace simpson {

struct Mechanism {
  std::string label;
  Probability prior;
  Probability conditional;
};

struct MixtureSpec {
  std::vector<Mechanism> mechanisms;
};

// Throws PriorNotNormalized (with the exact deficit) unless the priors sum to 1.
Probability mixture_predict(const MixtureSpec& spec);

// Mechanisms are (first stratum, second stratum, pooled table) with the given
// priors; each contributes p(outcome | given) computed from its counts.
MixtureSpec mixture_spec_from_table(const StratifiedTable& stratified,
                                    const std::array<Probability, 3>& priors,
                                    Outcome outcome = Outcome::kSuccess,
                                    Exposure given = Exposure::kExposed);

Probability mixture_from_table(const StratifiedTable& stratified,
                               const std::array<Probability, 3>& priors,
                               Outcome outcome = Outcome::kSuccess,
                               Exposure given = Exposure::kExposed);

}  // namespace simpson

#endif  // SIMPSON_MIXTURE_H_
