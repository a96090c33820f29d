#pragma once

// Consequence banding for the collision hazard. Doses are scenario inputs,
// not computed here. Band boundaries: below 2 mSv, 2 to 20 mSv inclusive on
// both ends, above 20 mSv.

#include "pondguard/util/errors.hpp"

namespace pondguard::evidence {

enum class HazardGroup : unsigned char {
  kNuclearRadiological,
  kConventional,
  kPhysical,
  kCyberSecurity,
};

const char* hazard_group_name(HazardGroup g);

enum class Band : unsigned char { kBelow2, kBand2To20, kAbove20 };

const char* band_name(Band b);

class NegativeDose : public Error {
 public:
  NegativeDose() : Error("dose must be >= 0 mSv") {}
};

Band alarp_band(double dose_mSv);  // throws NegativeDose

struct ConsequenceProfile {
  double dose_mSv;
  Band band;

  explicit ConsequenceProfile(double dose)
      : dose_mSv(dose), band(alarp_band(dose)) {}
};

}  // namespace pondguard::evidence
