#pragma once

// Randomized invariant checks shared by the unit tests and the acceptance
// report. Each check runs `cases` independent seeded cases.

#include <string>
#include <vector>

namespace props {

struct Outcome {
  std::string name;
  int cases = 0;
  int failures = 0;
  double worst = 0.0;  // largest observed violation measure
  std::string first_failure;

  bool ok() const { return cases > 0 && failures == 0; }
};

Outcome psd_preservation(int cases);
Outcome gauge_invariance(int cases);
Outcome svd_reconstruction(int cases);
Outcome qr_reconstruction(int cases);
Outcome haar_unitarity(int cases);
Outcome trotter_identity_limit(int cases);
Outcome fidelity_bound(int cases);
Outcome state_preservation(int cases);
Outcome contraction_agreement(int cases);
Outcome serialization_round_trip(int cases);
Outcome sqrt_message_square(int cases);

/// Every check above with the given case count.
std::vector<Outcome> run_all(int cases);

}  // namespace props
