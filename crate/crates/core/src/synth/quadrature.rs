//! Reference surface areas for ground truth.
//!
//! With `x = a·√(1-u²)·cos φ`, `y = b·√(1-u²)·sin φ`, `z = c·u` the area
//! element of the ellipsoid is
//! `√((1-u²)(b²c²cos²φ + a²c²sin²φ) + a²b²u²) du dφ`,
//! smooth on the whole domain. Composite Simpson in `u`, trapezoid in `φ`
//! (spectrally accurate for periodic integrands).

use rayon::prelude::*;

/// Default grid: 2000 × 1000 samples.
pub const DEFAULT_U_SAMPLES: usize = 2000;
pub const DEFAULT_PHI_SAMPLES: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapQuadrature {
    pub area: f64,
    /// Same integral on a grid with half the samples in each direction.
    pub coarse_area: f64,
    pub samples: usize,
}

impl CapQuadrature {
    /// Relative change between the coarse and the full grid.
    pub fn relative_change(&self) -> f64 {
        (self.area - self.coarse_area).abs() / self.area.abs().max(f64::MIN_POSITIVE)
    }
}

/// Surface area of the ellipsoid `(x/a)² + (y/b)² + (z/c)² = 1` below `z = z0`.
pub fn ellipsoid_area_below(a: f64, b: f64, c: f64, z0: f64) -> CapQuadrature {
    ellipsoid_area_below_with(a, b, c, z0, DEFAULT_U_SAMPLES, DEFAULT_PHI_SAMPLES)
}

pub fn ellipsoid_area_below_with(
    a: f64,
    b: f64,
    c: f64,
    z0: f64,
    u_samples: usize,
    phi_samples: usize,
) -> CapQuadrature {
    let u_top = (z0 / c).clamp(-1.0, 1.0);
    let area = integrate(a, b, c, u_top, u_samples, phi_samples);
    let coarse_area = integrate(a, b, c, u_top, u_samples / 2, phi_samples / 2);
    CapQuadrature {
        area,
        coarse_area,
        samples: (u_samples + 1) * phi_samples,
    }
}

fn integrate(a: f64, b: f64, c: f64, u_top: f64, nu: usize, nphi: usize) -> f64 {
    let nu = (nu.max(2) + 1) & !1; // Simpson needs an even interval count
    let nphi = nphi.max(3);
    let h = (u_top + 1.0) / nu as f64;
    if h <= 0.0 {
        return 0.0;
    }
    let dphi = std::f64::consts::TAU / nphi as f64;
    let trig: Vec<(f64, f64)> = (0..nphi)
        .map(|j| {
            let p = j as f64 * dphi;
            (p.cos().powi(2), p.sin().powi(2))
        })
        .collect();
    let (a2, b2, c2) = (a * a, b * b, c * c);
    let sum: f64 = (0..=nu)
        .into_par_iter()
        .map(|i| {
            let u = -1.0 + i as f64 * h;
            let s = 1.0 - u * u;
            let ring: f64 = trig
                .iter()
                .map(|&(cc, ss)| (s * (b2 * c2 * cc + a2 * c2 * ss) + a2 * b2 * u * u).sqrt())
                .sum::<f64>()
                * dphi;
            let w = if i == 0 || i == nu {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            w * ring
        })
        .sum();
    sum * h / 3.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sphere_cap_matches_closed_form() {
        let r = 10.0;
        for h in [1.0, 5.0, 10.0, 17.0, 20.0] {
            let q = ellipsoid_area_below(r, r, r, h - r);
            let want = 2.0 * PI * r * h;
            assert!((q.area - want).abs() / want < 1e-9, "h={h}: {} vs {want}", q.area);
        }
    }

    #[test]
    fn spheroid_total_area() {
        // oblate spheroid a = b = 10, c = 5: closed form with e² = 1 - c²/a²
        let (a, c) = (10.0f64, 5.0f64);
        let e = (1.0 - c * c / (a * a)).sqrt();
        let want = 2.0 * PI * a * a * (1.0 + (1.0 - e * e) / e * e.atanh());
        let q = ellipsoid_area_below(a, a, c, c);
        assert!((q.area - want).abs() / want < 1e-9);
        let half = ellipsoid_area_below(a, a, c, 0.0);
        assert!((half.area - want / 2.0).abs() / want < 1e-9);
    }

    #[test]
    fn vanishing_cap() {
        let q = ellipsoid_area_below(4.0, 6.0, 3.0, -3.0 + 1e-9);
        assert!(q.area < 1e-6);
        assert!(q.relative_change() < 1e-3);
    }
}
