//! Lattice-point counts on the infinite unit grid.
//!
//! With unit spacing between centroids, the number of centroids within
//! distance t of a fixed centroid is the Gauss circle count
//!
//!   N(t) = 1 + 4 Σ_{i≥0} (⌊t²/(4i+1)⌋ − ⌊t²/(4i+3)⌋)
//!
//! and K(t) for the infinite grid equals N(t) whatever the probability p with
//! which units are observed: p·N(t) observed neighbours divided by the
//! density p. The functions here therefore take no p. Compare with
//! K(t) = πt² under CSR; the gap Er(t) = N(t) − πt² satisfies
//! |Er(t)| ≤ C·t^θ for some 1/2 < θ ≤ 131/208, which is documented but not
//! computed.

use std::f64::consts::PI;

use serde::Serialize;

/// Upper end of the known range for the error-term exponent.
pub const THETA_UPPER: f64 = 131.0 / 208.0;

// t² within this relative distance of an integer is taken to be that integer.
const SNAP_RTOL: f64 = 1e-9;

/// ⌊t²⌋, with values within 1e-9 (relative) of an integer snapped to it so
/// that t = √m counts the points on the circle x² + y² = m.
pub fn radius_squared_floor(t: f64) -> u64 {
    assert!(
        t >= 0.0 && t.is_finite(),
        "radius must be finite and nonnegative, got {t}"
    );
    let s = t * t;
    let nearest = s.round();
    if (s - nearest).abs() <= SNAP_RTOL * nearest.max(1.0) {
        nearest as u64
    } else {
        s.floor() as u64
    }
}

/// N(t) from the alternating divisor series, in exact integer arithmetic.
///
/// For d ≥ 1, ⌊s/d⌋ = ⌊⌊s⌋/d⌋, so the series only needs m = ⌊t²⌋. Terms with
/// 4i + 1 > m vanish.
pub fn lattice_count_closed(t: f64) -> u64 {
    let m = radius_squared_floor(t);
    let mut sum: u64 = 0;
    let mut d = 1u64;
    while d <= m {
        sum += m / d - m / (d + 2);
        d += 4;
    }
    1 + 4 * sum
}

/// N(t) by scanning every lattice point in the bounding square.
pub fn lattice_count_oracle(t: f64) -> u64 {
    let m = radius_squared_floor(t) as i64;
    let r = t.ceil() as i64;
    let mut count = 0;
    for x in -r..=r {
        for y in -r..=r {
            if x * x + y * y <= m {
                count += 1;
            }
        }
    }
    count
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LatticeCount {
    pub t: f64,
    pub n_of_t: u64,
    pub k_csr: f64,
    pub error: f64,
    /// |Er(t)| / √t
    pub scaled_error: f64,
}

impl LatticeCount {
    pub fn at(t: f64) -> Self {
        let n_of_t = lattice_count_closed(t);
        let k_csr = PI * t * t;
        let error = n_of_t as f64 - k_csr;
        LatticeCount {
            t,
            n_of_t,
            k_csr,
            error,
            scaled_error: if t > 0.0 { error.abs() / t.sqrt() } else { 0.0 },
        }
    }
}

/// Rows at t = step, 2·step, …, up to t_max.
pub fn divergence_table(t_max: f64, step: f64) -> Vec<LatticeCount> {
    assert!(step > 0.0, "step must be positive");
    let rows = ((t_max / step) * (1.0 + 1e-12)).floor().max(0.0) as u64;
    (1..=rows).map(|k| LatticeCount::at(k as f64 * step)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn spot_values() {
        assert_eq!(lattice_count_closed(0.0), 1);
        assert_eq!(lattice_count_closed(1.0), 5);
        assert_eq!(lattice_count_closed(2.0), 13);
        assert_eq!(lattice_count_closed(3.0), 29);
        assert_eq!(lattice_count_oracle(0.0), 1);
        assert_eq!(lattice_count_oracle(2f64.sqrt()), 9);
        assert_eq!(lattice_count_oracle(2.5), lattice_count_closed(2.5));
    }

    #[test]
    fn error_at_three() {
        let row = LatticeCount::at(3.0);
        assert_relative_eq!(row.error, 29.0 - 9.0 * PI, epsilon = 1e-12);
        assert!((row.error - 0.726).abs() < 1e-3);
    }

    #[test]
    fn agrees_with_oracle_on_nonintegral_radii() {
        for k in 0..400 {
            let t = 0.037 * k as f64;
            assert_eq!(lattice_count_closed(t), lattice_count_oracle(t), "t = {t}");
        }
    }

    #[test]
    fn table_shape_and_symmetry() {
        let rows = divergence_table(10.0, 0.1);
        assert_eq!(rows.len(), 100);
        assert!((rows.last().unwrap().t - 10.0).abs() < 1e-9);
        assert!(rows.iter().all(|r| r.n_of_t % 4 == 1));
        assert!(rows.windows(2).all(|w| w[1].n_of_t >= w[0].n_of_t));
        let pos = rows.iter().any(|r| r.error > 0.0);
        let neg = rows.iter().any(|r| r.error < 0.0);
        assert!(pos && neg);
    }

    #[test]
    fn jumps_only_at_sums_of_two_squares() {
        let is_sum_of_two_squares = |m: u64| {
            (0..=m).take_while(|a| a * a <= m).any(|a| {
                let b2 = m - a * a;
                let b = (b2 as f64).sqrt().round() as u64;
                b * b == b2
            })
        };
        for m in 1..300u64 {
            let before = lattice_count_closed(((m as f64) - 0.5).sqrt());
            let at = lattice_count_closed((m as f64).sqrt());
            assert_eq!(at > before, is_sum_of_two_squares(m), "m = {m}");
        }
    }
}
