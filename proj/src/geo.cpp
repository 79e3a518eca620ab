#include "osnrecruit/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace osnrecruit {
namespace {

constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
constexpr double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

}  // namespace

double haversine_km(LatLon a, LatLon b) {
  const double phi1 = deg2rad(a.lat);
  const double phi2 = deg2rad(b.lat);
  const double dphi = phi2 - phi1;
  const double dlambda = deg2rad(b.lon - a.lon);
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double h = std::clamp(s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

LatLon destination_point(LatLon origin, double bearing_rad, double distance_km) {
  if (distance_km == 0.0) return origin;
  const double delta = distance_km / kEarthRadiusKm;
  const double phi1 = deg2rad(origin.lat);
  const double lambda1 = deg2rad(origin.lon);
  const double sin_phi2 =
      std::sin(phi1) * std::cos(delta) + std::cos(phi1) * std::sin(delta) * std::cos(bearing_rad);
  const double phi2 = std::asin(std::clamp(sin_phi2, -1.0, 1.0));
  const double lambda2 =
      lambda1 + std::atan2(std::sin(bearing_rad) * std::sin(delta) * std::cos(phi1),
                           std::cos(delta) - std::sin(phi1) * sin_phi2);
  double lon = rad2deg(lambda2);
  lon = std::fmod(lon + 540.0, 360.0) - 180.0;
  return {rad2deg(phi2), lon};
}

}  // namespace osnrecruit
