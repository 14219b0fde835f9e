//! Geostationary geometry and the half-power ground footprint on a
//! spherical Earth.

mod footprint;
mod geodesy;
mod polygon;
mod vec3;

pub use footprint::{
    cone_footprint, half_power_footprint, ArrayFrame, FootprintContour, FootprintOptions,
    FOOTPRINT_SCHEMA_VERSION,
};
pub use geodesy::{
    boresight_geometry, ecef_to_geo, geo_to_ecef, ray_sphere_ground_point, ray_sphere_intersection,
    Boresight, GeoPoint, OrbitSlot, EARTH_RADIUS_KM, GEO_ORBIT_RADIUS_KM,
};
pub use polygon::{spherical_polygon_area_km2, spherical_polygon_contains};
pub use vec3::Vec3;
