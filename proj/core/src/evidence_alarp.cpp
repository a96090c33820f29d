#include "pondguard/evidence/alarp.hpp"

namespace pondguard::evidence {

const char* hazard_group_name(HazardGroup g) {
  switch (g) {
    case HazardGroup::kNuclearRadiological: return "nuclear_radiological";
    case HazardGroup::kConventional: return "conventional";
    case HazardGroup::kPhysical: return "physical";
    case HazardGroup::kCyberSecurity: return "cyber_security";
  }
  return "physical";
}

const char* band_name(Band b) {
  switch (b) {
    case Band::kBelow2: return "below_2";
    case Band::kBand2To20: return "band_2_to_20";
    case Band::kAbove20: return "above_20";
  }
  return "below_2";
}

Band alarp_band(double dose_mSv) {
  if (dose_mSv < 0.0) throw NegativeDose();
  if (dose_mSv < 2.0) return Band::kBelow2;
  if (dose_mSv <= 20.0) return Band::kBand2To20;
  return Band::kAbove20;
}

}  // namespace pondguard::evidence
