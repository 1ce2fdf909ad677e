#include "beampred/types.hpp"

#include <unordered_set>

namespace beampred {

void validate(const Scenario& scenario) {
  if (scenario.codebook_size < 1)
    fail(ErrorKind::InvalidInput, "codebook size must be positive");
  std::unordered_set<std::int64_t> ids;
  for (const auto& s : scenario.samples) {
    if (s.powers.size() != scenario.codebook_size)
      fail(ErrorKind::InvalidInput,
           "sample " + std::to_string(s.sample_id) + " has " +
               std::to_string(s.powers.size()) + " powers, expected " +
               std::to_string(scenario.codebook_size));
    validate(s.position);
    validate_powers(s.powers);
    if (!ids.insert(s.sample_id).second)
      fail(ErrorKind::InvalidInput,
           "duplicate sample_id " + std::to_string(s.sample_id));
  }
}

}  // namespace beampred
