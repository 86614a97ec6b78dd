//! Solar elevation and illumination-stage classification.
//!
//! Elevation uses the low-precision fractional-year formulation: an
//! equation-of-time trig series and a declination trig series feed the
//! standard hour-angle geometry. The result is the geometric (unrefracted)
//! elevation of the sun's center, good to a few tenths of a degree over
//! 2000-2050 — ample for stage bins that are six degrees wide.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use libm::{acos, cos, sin};

use crate::corridor::DomainStage;
use crate::{CoreError, Result};

const DEG: f64 = core::f64::consts::PI / 180.0;

/// A timestamped geolocation, the input to the twilight classifier.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SolarObservation {
    /// Seconds since the Unix epoch, UTC.
    pub unix_seconds: i64,
    pub latitude_deg: f64,
    pub longitude_deg: f64,
}

impl SolarObservation {
    pub fn new(unix_seconds: i64, latitude_deg: f64, longitude_deg: f64) -> Result<Self> {
        if !latitude_deg.is_finite() || !(-90.0..=90.0).contains(&latitude_deg) {
            return Err(CoreError::InvalidInput(format!(
                "latitude {latitude_deg} outside [-90, 90]"
            )));
        }
        if !longitude_deg.is_finite() || !(-180.0..=180.0).contains(&longitude_deg) {
            return Err(CoreError::InvalidInput(format!(
                "longitude {longitude_deg} outside [-180, 180]"
            )));
        }
        Ok(Self { unix_seconds, latitude_deg, longitude_deg })
    }
}

/// Elevation thresholds separating the five stages, in degrees.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StageThresholds {
    pub day_min: f64,
    pub civil_min: f64,
    pub nautical_min: f64,
    pub astro_min: f64,
}

impl Default for StageThresholds {
    fn default() -> Self {
        Self { day_min: 0.0, civil_min: -6.0, nautical_min: -12.0, astro_min: -18.0 }
    }
}

impl StageThresholds {
    pub fn validate(&self) -> Result<()> {
        let seq = [self.day_min, self.civil_min, self.nautical_min, self.astro_min];
        if seq.iter().any(|v| !v.is_finite()) || !seq.windows(2).all(|w| w[1] < w[0]) {
            return Err(CoreError::InvalidConfig(
                "stage thresholds must be finite and strictly decreasing".into(),
            ));
        }
        Ok(())
    }
}

/// Proleptic-Gregorian civil date from a day count since 1970-01-01.
/// Integer-exact for the whole supported range.
fn civil_from_days(days: i64) -> (i64, u32, u32) {
    let z = days + 719_468;
    let era = if z >= 0 { z } else { z - 146_096 } / 146_097;
    let doe = z - era * 146_097;
    let yoe = (doe - doe / 1460 + doe / 36_524 - doe / 146_096) / 365;
    let y = yoe + era * 400;
    let doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    let mp = (5 * doy + 2) / 153;
    let d = (doy - (153 * mp + 2) / 5 + 1) as u32;
    let m = (if mp < 10 { mp + 3 } else { mp - 9 }) as u32;
    (if m <= 2 { y + 1 } else { y }, m, d)
}

fn is_leap(year: i64) -> bool {
    (year % 4 == 0 && year % 100 != 0) || year % 400 == 0
}

fn day_of_year(year: i64, month: u32, day: u32) -> u32 {
    const CUM: [u32; 12] = [0, 31, 59, 90, 120, 151, 181, 212, 243, 273, 304, 334];
    let mut doy = CUM[(month - 1) as usize] + day;
    if month > 2 && is_leap(year) {
        doy += 1;
    }
    doy
}

/// Geometric solar elevation in degrees for an observation.
pub fn solar_elevation(obs: &SolarObservation) -> Result<f64> {
    // Re-validate: observations can be built literally.
    let obs = SolarObservation::new(obs.unix_seconds, obs.latitude_deg, obs.longitude_deg)?;

    let days = obs.unix_seconds.div_euclid(86_400);
    let secs_of_day = obs.unix_seconds.rem_euclid(86_400) as f64;
    let (year, month, day) = civil_from_days(days);
    let doy = day_of_year(year, month, day) as f64;
    let year_len = if is_leap(year) { 366.0 } else { 365.0 };
    let frac_hour = secs_of_day / 3600.0;

    // Fractional year in radians.
    let g = 2.0 * core::f64::consts::PI / year_len * (doy - 1.0 + (frac_hour - 12.0) / 24.0);

    // Equation of time in minutes.
    let eqtime = 229.18
        * (0.000075 + 0.001868 * cos(g) - 0.032077 * sin(g)
            - 0.014615 * cos(2.0 * g)
            - 0.040849 * sin(2.0 * g));

    // Solar declination in radians.
    let decl = 0.006918 - 0.399912 * cos(g) + 0.070257 * sin(g) - 0.006758 * cos(2.0 * g)
        + 0.000907 * sin(2.0 * g)
        - 0.002697 * cos(3.0 * g)
        + 0.00148 * sin(3.0 * g);

    // True solar time in minutes, then the hour angle.
    let tst = frac_hour * 60.0 + eqtime + 4.0 * obs.longitude_deg;
    let hour_angle = (tst / 4.0 - 180.0) * DEG;

    let lat = obs.latitude_deg * DEG;
    let cos_zenith = sin(lat) * sin(decl) + cos(lat) * cos(decl) * cos(hour_angle);
    let zenith = acos(cos_zenith.clamp(-1.0, 1.0));
    Ok(90.0 - zenith / DEG)
}

/// Map an elevation to its stage. Boundary values belong to the darker
/// stage: exactly 0 degrees is civil twilight, exactly -6 is nautical,
/// and so on.
pub fn classify_stage(elevation_deg: f64, thresholds: &StageThresholds) -> DomainStage {
    if elevation_deg > thresholds.day_min {
        DomainStage::Day
    } else if elevation_deg > thresholds.civil_min {
        DomainStage::Civil
    } else if elevation_deg > thresholds.nautical_min {
        DomainStage::Nautical
    } else if elevation_deg > thresholds.astro_min {
        DomainStage::Astronomical
    } else {
        DomainStage::Night
    }
}

/// A frame to be assigned to a stage.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameRecord {
    pub id: String,
    pub obs: SolarObservation,
}

/// Stage assignment for a batch of frames. Each entry is the frame's
/// index in the input plus its computed elevation; input order is kept
/// within every stage.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FramePartition {
    pub assigned: [Vec<(usize, f64)>; 5],
}

impl FramePartition {
    pub fn counts(&self) -> [usize; 5] {
        [
            self.assigned[0].len(),
            self.assigned[1].len(),
            self.assigned[2].len(),
            self.assigned[3].len(),
            self.assigned[4].len(),
        ]
    }

    pub fn total(&self) -> usize {
        self.assigned.iter().map(Vec::len).sum()
    }
}

/// Assign every frame to exactly one stage by computed elevation.
pub fn partition_frames(frames: &[FrameRecord], thresholds: &StageThresholds) -> Result<FramePartition> {
    thresholds.validate()?;
    if frames.is_empty() {
        return Err(CoreError::InvalidInput("no frames to partition".into()));
    }
    let mut partition = FramePartition::default();
    for (index, frame) in frames.iter().enumerate() {
        let elevation = solar_elevation(&frame.obs)?;
        let stage = classify_stage(elevation, thresholds);
        partition.assigned[stage.index()].push((index, elevation));
    }
    Ok(partition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn obs(unix: i64, lat: f64, lon: f64) -> SolarObservation {
        SolarObservation::new(unix, lat, lon).unwrap()
    }

    #[test]
    fn civil_date_conversion_is_exact() {
        assert_eq!(civil_from_days(0), (1970, 1, 1));
        assert_eq!(civil_from_days(11_016), (2000, 2, 29));
        assert_eq!(civil_from_days(19_723), (2024, 1, 1));
        assert_eq!(civil_from_days(-1), (1969, 12, 31));
    }

    #[test]
    fn pole_at_equinox_sits_near_horizon() {
        // North pole, 2024-03-20 12:00 UTC: elevation equals the solar
        // declination, which is within a fraction of a degree of zero.
        let e = solar_elevation(&obs(1_710_936_000, 90.0, 0.0)).unwrap();
        assert!(e.abs() <= 1.0, "pole equinox elevation {e}");
    }

    #[test]
    fn zurich_summer_noon_matches_reference() {
        // 2017-06-21 12:00 UTC at 47.37N 8.54E; reference value from an
        // independent high-precision formulation.
        let e = solar_elevation(&obs(1_498_046_400, 47.37, 8.54)).unwrap();
        assert!((e - 65.21).abs() <= 0.5, "zurich solstice elevation {e}");
    }

    #[test]
    fn longitude_changes_elevation() {
        let a = solar_elevation(&obs(1_498_046_400, 47.37, 0.0)).unwrap();
        let b = solar_elevation(&obs(1_498_046_400, 47.37, 180.0)).unwrap();
        assert!((a - b).abs() > 1.0);
    }

    #[test]
    fn out_of_range_coordinates_are_rejected() {
        assert!(SolarObservation::new(0, 90.5, 0.0).is_err());
        assert!(SolarObservation::new(0, 0.0, -181.0).is_err());
        assert!(SolarObservation::new(0, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn classification_boundary_table() {
        let t = StageThresholds::default();
        let cases = [
            (-25.0, DomainStage::Night),
            (-18.0, DomainStage::Night),
            (-17.9, DomainStage::Astronomical),
            (-12.0, DomainStage::Astronomical),
            (-11.9, DomainStage::Nautical),
            (-6.0, DomainStage::Nautical),
            (-5.9, DomainStage::Civil),
            (0.0, DomainStage::Civil),
            (0.1, DomainStage::Day),
            (45.0, DomainStage::Day),
        ];
        for (e, expected) in cases {
            assert_eq!(classify_stage(e, &t), expected, "elevation {e}");
        }
    }

    #[test]
    fn thresholds_must_decrease() {
        let bad = StageThresholds { civil_min: 1.0, ..StageThresholds::default() };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn partition_covers_every_frame_once() {
        let frames: Vec<FrameRecord> = (0..40)
            .map(|i| FrameRecord {
                id: format!("f{i}"),
                obs: obs(1_502_820_000 + i * 600, 47.37, 8.54),
            })
            .collect();
        let partition = partition_frames(&frames, &StageThresholds::default()).unwrap();
        assert_eq!(partition.total(), frames.len());
        let mut seen = vec![false; frames.len()];
        for bucket in &partition.assigned {
            for &(idx, _) in bucket {
                assert!(!seen[idx]);
                seen[idx] = true;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn noon_summer_frames_are_all_day() {
        let frames: Vec<FrameRecord> = (0..5)
            .map(|i| FrameRecord {
                id: i.to_string(),
                // 2017-06-21 around 12:00 UTC, mid-latitude Europe.
                obs: obs(1_498_046_400 + i * 60, 47.37, 8.54),
            })
            .collect();
        let partition = partition_frames(&frames, &StageThresholds::default()).unwrap();
        assert_eq!(partition.counts(), [5, 0, 0, 0, 0]);
    }
}
