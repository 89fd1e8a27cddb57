//! Average nearest neighbour ratio and its z-test.
//!
//! R = r̄_O / r̄_E with r̄_E = 1 / (2√ρ) and ρ = N/|A|; the standard error
//! under CSR is 0.26136 / √(Nρ). No edge correction is applied to r̄_E.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{bounding_rect, Point, Region};

/// Standard error constant of the mean nearest-neighbour distance under CSR.
pub const SIGMA_CONSTANT: f64 = 0.26136;

/// Standard normal quantiles at 0.975, 0.95 and 0.05, fixed so decisions are
/// bit-stable across platforms.
pub const Z_0975: f64 = 1.959964;
pub const Z_095: f64 = 1.644854;
pub const Z_005: f64 = -1.644854;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tail {
    #[serde(alias = "two-sided", alias = "two_sided")]
    Two,
    Left,
    Right,
}

impl Tail {
    pub fn label(&self) -> &'static str {
        match self {
            Tail::Two => "two",
            Tail::Left => "left",
            Tail::Right => "right",
        }
    }
}

/// Which area the density is computed over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowChoice {
    /// The whole study region.
    Study,
    /// The axis-aligned bounding rectangle of the observed points.
    #[serde(alias = "bounding-rect")]
    Bbox,
}

impl WindowChoice {
    pub fn label(&self) -> &'static str {
        match self {
            WindowChoice::Study => "study",
            WindowChoice::Bbox => "bbox",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnResult {
    pub n: usize,
    pub area: f64,
    pub rho: f64,
    pub r_bar_o: f64,
    pub r_bar_e: f64,
    pub ratio: f64,
    pub sigma: f64,
    pub z: f64,
    pub tail: Tail,
    pub reject: bool,
}

/// Distance from each point to its nearest other point, in input order.
pub fn nn_distances(points: &[Point]) -> Result<Vec<f64>> {
    if points.len() < 2 {
        return Err(Error::InsufficientPoints {
            needed: 2,
            got: points.len(),
        });
    }
    Ok(points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| p.distance(q))
                .fold(f64::INFINITY, f64::min)
        })
        .collect())
}

pub fn reject_normal(z: f64, tail: Tail) -> bool {
    match tail {
        Tail::Two => z.abs() > Z_0975,
        Tail::Left => z < Z_005,
        Tail::Right => z > Z_095,
    }
}

/// Two-sided and one-sided standard normal critical values for the
/// supported significance levels.
pub fn normal_critical(alpha: f64) -> Result<(f64, f64)> {
    const TABLE: [(f64, f64, f64); 3] = [
        (0.01, 2.575829, 2.326348),
        (0.05, Z_0975, Z_095),
        (0.10, Z_095, 1.281552),
    ];
    TABLE
        .iter()
        .find(|(a, _, _)| (a - alpha).abs() < 1e-12)
        .map(|&(_, two, one)| (two, one))
        .ok_or_else(|| Error::Domain(format!("alpha {alpha} unsupported; use 0.01, 0.05 or 0.10")))
}

pub fn reject_normal_at(z: f64, tail: Tail, alpha: f64) -> Result<bool> {
    let (two, one) = normal_critical(alpha)?;
    Ok(match tail {
        Tail::Two => z.abs() > two,
        Tail::Left => z < -one,
        Tail::Right => z > one,
    })
}

pub fn ann_test(
    points: &[Point],
    study_region: &Region,
    window: WindowChoice,
    tail: Tail,
) -> Result<AnnResult> {
    let area = match window {
        WindowChoice::Study => study_region.area(),
        WindowChoice::Bbox => {
            let r = bounding_rect(points)?;
            if r.is_degenerate() {
                return Err(Error::DegenerateWindow(format!(
                    "bounding rectangle of {} points has zero area",
                    points.len()
                )));
            }
            r.area()
        }
    };
    ann_with_area(points, area, tail)
}

/// The test with an explicit window area.
pub fn ann_with_area(points: &[Point], area: f64, tail: Tail) -> Result<AnnResult> {
    if !(area > 0.0) || !area.is_finite() {
        return Err(Error::DegenerateWindow(format!("window area {area}")));
    }
    let d = nn_distances(points)?;
    let n = points.len();
    let rho = n as f64 / area;
    let r_bar_o = d.iter().sum::<f64>() / n as f64;
    let r_bar_e = 1.0 / (2.0 * rho.sqrt());
    let sigma = SIGMA_CONSTANT / (n as f64 * rho).sqrt();
    let z = (r_bar_o - r_bar_e) / sigma;
    Ok(AnnResult {
        n,
        area,
        rho,
        r_bar_o,
        r_bar_e,
        ratio: r_bar_o / r_bar_e,
        sigma,
        z,
        tail,
        reject: reject_normal(z, tail),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Rect;
    use approx::assert_relative_eq;

    fn lattice(n: usize) -> Vec<Point> {
        (0..n)
            .flat_map(|i| (0..n).map(move |j| Point::new(i as f64, j as f64)))
            .collect()
    }

    fn region(w: f64, h: f64) -> Region {
        Region::from_rect(Rect::new(0.0, 0.0, w, h)).unwrap()
    }

    #[test]
    fn nn_examples() {
        let tri = [Point::new(0.0, 0.0), Point::new(0.0, 3.0), Point::new(4.0, 0.0)];
        assert_eq!(nn_distances(&tri).unwrap(), vec![3.0, 3.0, 4.0]);
        let dup = [Point::new(2.0, 2.0), Point::new(2.0, 2.0)];
        assert_eq!(nn_distances(&dup).unwrap(), vec![0.0, 0.0]);
        assert!(nn_distances(&lattice(10)).unwrap().iter().all(|&d| d == 1.0));
        assert!(nn_distances(&tri[..1]).is_err());
    }

    #[test]
    fn lattice_closed_form() {
        let r = ann_test(&lattice(10), &region(10.0, 10.0), WindowChoice::Study, Tail::Two).unwrap();
        assert_eq!(r.rho, 1.0);
        assert_eq!(r.r_bar_o, 1.0);
        assert_eq!(r.r_bar_e, 0.5);
        assert_eq!(r.ratio, 2.0);
        assert_relative_eq!(r.sigma, 0.026136, epsilon = 1e-15);
        assert_relative_eq!(r.z, 0.5 / 0.026136, epsilon = 1e-12);
        assert!((r.z - 19.13).abs() < 0.01);
        assert!(r.reject);
    }

    #[test]
    fn coincident_points_are_clustered() {
        let pts = vec![Point::new(3.0, 3.0); 12];
        let r = ann_test(&pts, &region(10.0, 10.0), WindowChoice::Study, Tail::Left).unwrap();
        assert_eq!(r.r_bar_o, 0.0);
        assert_eq!(r.ratio, 0.0);
        assert!(r.z < 0.0);
        assert!(r.reject);
    }

    #[test]
    fn ratio_one_construction() {
        let pts = [Point::new(0.0, 0.0), Point::new(1.0, 0.0)];
        let r = ann_with_area(&pts, 8.0, Tail::Two).unwrap();
        assert_eq!(r.r_bar_e, 1.0);
        assert_eq!(r.ratio, 1.0);
        assert_eq!(r.z, 0.0);
        assert!(!r.reject);
    }

    #[test]
    fn window_two_uses_bbox() {
        let pts = [Point::new(1.0, 1.0), Point::new(3.0, 1.0), Point::new(1.0, 5.0)];
        let study = region(100.0, 100.0);
        let w1 = ann_test(&pts, &study, WindowChoice::Study, Tail::Two).unwrap();
        let w2 = ann_test(&pts, &study, WindowChoice::Bbox, Tail::Two).unwrap();
        assert_eq!(w1.area, 10_000.0);
        assert_eq!(w2.area, 8.0);
        assert_eq!(w1.r_bar_o, w2.r_bar_o);
    }

    #[test]
    fn degenerate_window_two() {
        let line = [Point::new(0.0, 1.0), Point::new(2.0, 1.0), Point::new(5.0, 1.0)];
        let e = ann_test(&line, &region(10.0, 10.0), WindowChoice::Bbox, Tail::Two);
        assert!(matches!(e, Err(Error::DegenerateWindow(_))));
        let same = [Point::new(1.0, 1.0); 3];
        let e = ann_test(&same, &region(10.0, 10.0), WindowChoice::Bbox, Tail::Two);
        assert!(matches!(e, Err(Error::DegenerateWindow(_))));
    }

    #[test]
    fn decision_thresholds() {
        assert!(reject_normal(1.96, Tail::Two));
        assert!(!reject_normal(1.9599, Tail::Two));
        assert!(reject_normal(-1.65, Tail::Left));
        assert!(!reject_normal(-1.64, Tail::Left));
        assert!(reject_normal(1.65, Tail::Right));
        assert!(!reject_normal(-3.0, Tail::Right));
        assert!(reject_normal_at(2.0, Tail::Two, 0.05).unwrap());
        assert!(!reject_normal_at(2.0, Tail::Two, 0.01).unwrap());
        assert!(reject_normal_at(-1.3, Tail::Left, 0.10).unwrap());
        assert!(reject_normal_at(0.0, Tail::Two, 0.2).is_err());
    }
}
