use crate::error::{Error, Result};
use crate::measure::{MeasureKind, SparseSymmetricMeasure};

/// Mean Earth radius in kilometres.
pub const EARTH_RADIUS_KM: f64 = 6371.0088;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    lat: f64,
    lon: f64,
}

impl GeoPoint {
    /// Latitude in `[-90, 90]`, longitude in `[-180, 180]`, both in degrees.
    pub fn new(lat: f64, lon: f64) -> Result<Self> {
        if !(-90.0..=90.0).contains(&lat) || !(-180.0..=180.0).contains(&lon) {
            return Err(Error::CoordinateOutOfRange { lat, lon });
        }
        Ok(Self { lat, lon })
    }

    pub fn lat(&self) -> f64 {
        self.lat
    }

    pub fn lon(&self) -> f64 {
        self.lon
    }
}

/// Great-circle distance by the haversine formula.
pub fn haversine_km(a: GeoPoint, b: GeoPoint) -> f64 {
    let (p1, p2) = (a.lat.to_radians(), b.lat.to_radians());
    let dp = p2 - p1;
    let dl = (b.lon - a.lon).to_radians();
    let h = (dp / 2.0).sin().powi(2) + p1.cos() * p2.cos() * (dl / 2.0).sin().powi(2);
    let h = h.clamp(0.0, 1.0);
    2.0 * EARTH_RADIUS_KM * h.sqrt().atan2((1.0 - h).sqrt())
}

/// Dense pairwise haversine distances as a semi-metric.
pub fn haversine_matrix(points: &[GeoPoint]) -> Result<SparseSymmetricMeasure<f64>> {
    for p in points {
        GeoPoint::new(p.lat, p.lon)?;
    }
    Ok(SparseSymmetricMeasure::from_upper(points.len(), MeasureKind::Distance, |i, j| {
        if i == j {
            0.0
        } else {
            haversine_km(points[i], points[j])
        }
    }))
}

/// Symmetrizes a raw latency matrix by averaging both directions and checks
/// that the result is a semi-metric.
pub fn latency_distance(raw: &[Vec<f64>]) -> Result<SparseSymmetricMeasure<f64>> {
    SparseSymmetricMeasure::symmetrize(MeasureKind::Distance, raw)
}
