#pragma once

namespace osnrecruit {

struct LatLon {
  double lat = 0.0;  // degrees
  double lon = 0.0;  // degrees
};

inline constexpr double kEarthRadiusKm = 6371.0088;

/// Great-circle distance in kilometres.
double haversine_km(LatLon a, LatLon b);

/// Point reached by travelling `distance_km` from `origin` along initial `bearing_rad`.
LatLon destination_point(LatLon origin, double bearing_rad, double distance_km);

}  // namespace osnrecruit
