//! Small spherical polygons: area by fan triangulation with the
//! Van Oosterom–Strackee triangle solid angle, and point containment by
//! winding number in the gnomonic projection.

use super::{geo_to_ecef, GeoPoint, Vec3};

/// Signed solid angle of the spherical triangle `(a, b, c)` of unit vectors,
/// positive when counter-clockwise seen from outside the sphere.
fn triangle_solid_angle(a: Vec3, b: Vec3, c: Vec3) -> f64 {
    // a·((b − a) × (c − a)) equals a·(b × c) with less cancellation
    let num = a.dot((b - a).cross(c - a));
    let den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * num.atan2(den)
}

/// Signed area in steradians of the closed polygon through `vertices`
/// (unit vectors, last edge implied).
pub(crate) fn signed_solid_angle(vertices: &[Vec3]) -> f64 {
    let apex = vertices
        .iter()
        .fold(Vec3::default(), |acc, v| acc + *v)
        .unit();
    (0..vertices.len())
        .map(|i| triangle_solid_angle(apex, vertices[i], vertices[(i + 1) % vertices.len()]))
        .sum()
}

/// Area of a simple polygon smaller than a hemisphere, in km² on a sphere of
/// `radius_km`.
pub fn spherical_polygon_area_km2(vertices: &[GeoPoint], radius_km: f64) -> f64 {
    if vertices.len() < 3 {
        return 0.0;
    }
    let units: Vec<Vec3> = vertices.iter().map(|p| geo_to_ecef(*p, 1.0)).collect();
    signed_solid_angle(&units).abs() * radius_km * radius_km
}

/// Whether `point` lies strictly inside the polygon.
pub fn spherical_polygon_contains(vertices: &[GeoPoint], point: GeoPoint) -> bool {
    if vertices.len() < 3 {
        return false;
    }
    let p = geo_to_ecef(point, 1.0);
    let ref_axis = if p.z.abs() < 0.9 { Vec3::Z } else { Vec3::X };
    let t1 = ref_axis.cross(p).unit();
    let t2 = p.cross(t1);
    let mut projected = Vec::with_capacity(vertices.len());
    for v in vertices {
        let v = geo_to_ecef(*v, 1.0);
        let h = v.dot(p);
        if h <= 0.0 {
            return false;
        }
        let q = v * (1.0 / h);
        projected.push((q.dot(t1), q.dot(t2)));
    }
    let mut winding = 0.0;
    for i in 0..projected.len() {
        let (x0, y0) = projected[i];
        let (x1, y1) = projected[(i + 1) % projected.len()];
        if x0 == 0.0 && y0 == 0.0 {
            return false;
        }
        winding += (x0 * y1 - y0 * x1).atan2(x0 * x1 + y0 * y1);
    }
    winding.abs() > std::f64::consts::PI
}
