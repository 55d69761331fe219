//! The shell point set Θ, the radius `R`, the gluing length `L` and the
//! residues `r_p`.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::{Error, Point, Result};

/// Smallest supported charge.
pub const MIN_CHARGE: usize = 8;
/// Below this charge the asymptotic constants are visibly off; a warning is recorded.
pub const WARN_CHARGE: usize = 64;
/// Multiplicative slack on the residue window.
pub const RESIDUE_SLACK: f64 = 2.0;

/// `n_k` for `k = 1..K−1`: the largest integer strictly below `2K sin(kπ/K)`.
pub fn band_sizes(k_bands: usize) -> Result<Vec<usize>> {
    if k_bands < 2 {
        return Err(Error::InvalidParameter(format!("band count must be at least 2, got {k_bands}")));
    }
    let kf = k_bands as f64;
    Ok((1..k_bands)
        .map(|k| {
            // evaluate on the short side so n_k = n_{K−k} holds bit for bit
            let kk = k.min(k_bands - k) as f64;
            let v = 2.0 * kf * (kk * PI / kf).sin();
            let near = v.round();
            if (v - near).abs() < 1e-9 {
                near as usize - 1
            } else {
                v.floor() as usize
            }
        })
        .collect())
}

/// Band count `K` together with the diagnostic `|K − ½√(πN)|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandChoice {
    pub bands: usize,
    pub capacity: usize,
    pub z_diag: f64,
}

/// Smallest `K` whose bands hold at least `N` points.
pub fn choose_band_count(n: usize) -> Result<BandChoice> {
    if n < MIN_CHARGE {
        return Err(Error::UnsupportedCharge(n));
    }
    let mut k = 2;
    loop {
        let capacity: usize = band_sizes(k)?.iter().sum();
        if capacity >= n {
            let z_diag = (k as f64 - 0.5 * (PI * n as f64).sqrt()).abs();
            return Ok(BandChoice { bands: k, capacity, z_diag });
        }
        k += 1;
    }
}

/// A point of Θ with its lattice labels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShellPoint {
    /// Band `k ∈ 1..K−1`.
    pub band: usize,
    /// Longitude index `j`; the point sits at longitude `2πj/n_k`.
    pub longitude: usize,
    pub position: Point,
}

/// Θ before residues are attached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub bands: usize,
    pub band_sizes: Vec<usize>,
    /// Points removed from each band.
    pub removed: Vec<usize>,
    pub points: Vec<ShellPoint>,
}

/// Lay out `N` points on the radius-`R` sphere.
pub fn place_points(n: usize, radius: f64) -> Result<Placement> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!("radius must be positive, got {radius}")));
    }
    let choice = choose_band_count(n)?;
    let k_bands = choice.bands;
    let sizes = band_sizes(k_bands)?;
    let mut kept = sizes.clone();
    let mut removed = vec![0; sizes.len()];
    let mut excess = choice.capacity - n;
    let mut k = 0;
    while excess > 0 {
        if kept[k] > 0 {
            kept[k] -= 1;
            removed[k] += 1;
            excess -= 1;
        }
        k = (k + 1) % sizes.len();
    }
    let mut points = Vec::with_capacity(n);
    for (i, (&nk, &keep)) in sizes.iter().zip(&kept).enumerate() {
        let band = i + 1;
        let theta = band as f64 * PI / k_bands as f64;
        for j in 0..keep {
            let lon = 2.0 * PI * j as f64 / nk as f64;
            let position = Point::new(theta.sin() * lon.cos(), theta.sin() * lon.sin(), theta.cos()) * radius;
            points.push(ShellPoint { band, longitude: j, position });
        }
    }
    Ok(Placement { bands: k_bands, band_sizes: sizes, removed, points })
}

/// `r_p = 1 − Σ_{q≠p} 1/|p − q|`. Non-positive values are returned as they are.
pub fn residues(points: &[Point]) -> Result<Vec<f64>> {
    let mut out = vec![1.0; points.len()];
    for (i, p) in points.iter().enumerate() {
        let mut s = 0.0;
        for (j, q) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = (p - q).norm();
            if d == 0.0 {
                return Err(Error::InvalidConfiguration {
                    reason: format!("points {i} and {j} coincide"),
                    point: Some(i),
                });
            }
            s += 1.0 / d;
        }
        out[i] -= s;
    }
    Ok(out)
}

/// The four Coulomb-type sums used by the shell lemma.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoulombSums {
    /// `Σ_{q≠x} 1/|x − q|`
    pub s1: f64,
    /// `Σ_{q≠x} 1/|x − q|²`
    pub s2: f64,
    /// `Σ 1/(|x − q| + L)`
    pub s3: f64,
    /// `Σ 1/(|x − q| + L)²`
    pub s4: f64,
}

/// Brute-force sums at `x`. Points of Θ coinciding with `x` are left out of
/// `s1` and `s2` only.
pub fn coulomb_sums(points: &[Point], x: &Point, glue_length: f64) -> CoulombSums {
    let mut c = CoulombSums { s1: 0.0, s2: 0.0, s3: 0.0, s4: 0.0 };
    for q in points {
        let d = (x - q).norm();
        if d > 0.0 {
            c.s1 += 1.0 / d;
            c.s2 += 1.0 / (d * d);
        }
        let e = 1.0 / (d + glue_length);
        c.s3 += e;
        c.s4 += e * e;
    }
    c
}

/// Smallest pairwise distance.
pub fn min_separation(points: &[Point]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            best = best.min((points[i] - points[j]).norm());
        }
    }
    best
}

/// A shell point together with its residue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BagPoint {
    pub band: usize,
    pub longitude: usize,
    pub position: Point,
    pub residue: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellDiagnostics {
    /// `|K − ½√(πN)|`
    pub z_diag: f64,
    /// `Σ n_k − N`
    pub removed: usize,
    pub removed_per_band: Vec<usize>,
    pub min_residue: f64,
    pub max_residue: f64,
    /// `m N^{−1/2} ln N`
    pub mu: f64,
    /// `1 − N/R`, the value the residues cluster around.
    pub residue_target: f64,
    pub residue_window: (f64, f64),
    pub min_separation: f64,
    pub separation_bound: f64,
    /// `min_p L r_p` against `(1 − 2^{−10}) m^{1/4} ln N`.
    pub min_l_residue: f64,
    pub l_residue_bound: f64,
    pub warnings: Vec<String>,
}

/// The bag configuration: charge, parameters, Θ and residues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShellConfig {
    pub n: usize,
    pub m: f64,
    /// `R = N(1 + m N^{−1/2} ln N)`
    pub radius: f64,
    pub bands: usize,
    /// `L = m^{−3/4} N^{1/2}`
    pub glue_length: f64,
    pub points: Vec<BagPoint>,
    pub diagnostics: ShellDiagnostics,
}

/// `m N^{−1/2} ln N`.
pub fn mu(n: usize, m: f64) -> f64 {
    let nf = n as f64;
    m * nf.ln() / nf.sqrt()
}

pub fn shell_radius(n: usize, m: f64) -> f64 {
    n as f64 * (1.0 + mu(n, m))
}

pub fn glue_length(n: usize, m: f64) -> f64 {
    m.powf(-0.75) * (n as f64).sqrt()
}

/// Build and validate the configuration for charge `N` and thickness parameter `m`.
pub fn make_shell_config(n: usize, m: f64) -> Result<ShellConfig> {
    if n < MIN_CHARGE {
        return Err(Error::UnsupportedCharge(n));
    }
    if !(m > 1.0 && m.is_finite()) {
        return Err(Error::InvalidParameter(format!("m must exceed 1, got {m}")));
    }
    ShellConfig::with_radius(n, m, shell_radius(n, m))
}

impl ShellConfig {
    /// Same construction with an explicit shell radius.
    pub fn with_radius(n: usize, m: f64, radius: f64) -> Result<ShellConfig> {
        let placement = place_points(n, radius)?;
        let positions: Vec<Point> = placement.points.iter().map(|p| p.position).collect();
        let res = residues(&positions)?;
        let glue = glue_length(n, m);

        for (i, p) in positions.iter().enumerate() {
            if (p.norm() - radius).abs() > 1e-12 * radius {
                return Err(Error::InvalidConfiguration {
                    reason: format!("point off the shell: |p| = {}", p.norm()),
                    point: Some(i),
                });
            }
        }
        let sep = min_separation(&positions);
        let sep_bound = radius * (PI / (2.0 * placement.bands as f64)).sin();
        if sep < sep_bound * (1.0 - 1e-12) {
            return Err(Error::InvalidConfiguration {
                reason: format!("min separation {sep} below R sin(π/2K) = {sep_bound}"),
                point: None,
            });
        }
        if let Some((i, r)) = res.iter().enumerate().find(|(_, r)| **r <= 0.0) {
            return Err(Error::InvalidConfiguration {
                reason: format!("non-positive residue r_p = {r}"),
                point: Some(i),
            });
        }
        let target = 1.0 - n as f64 / radius;
        let window = ((1.0 - 2f64.powi(-10)) * target / RESIDUE_SLACK, (1.0 + 2f64.powi(-10)) * target * RESIDUE_SLACK);
        if let Some((i, r)) = res.iter().enumerate().find(|(_, r)| **r < window.0 || **r > window.1) {
            return Err(Error::InvalidConfiguration {
                reason: format!("residue {r} outside [{}, {}]", window.0, window.1),
                point: Some(i),
            });
        }
        if 2.0 * glue >= sep {
            return Err(Error::InvalidConfiguration {
                reason: format!("2L = {} not below the min separation {sep}", 2.0 * glue),
                point: None,
            });
        }

        let min_residue = res.iter().cloned().fold(f64::INFINITY, f64::min);
        let max_residue = res.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut warnings = Vec::new();
        if n < WARN_CHARGE {
            warnings.push(format!("N = {n} is below {WARN_CHARGE}; asymptotic constants are loose"));
        }
        let choice = choose_band_count(n)?;
        let diagnostics = ShellDiagnostics {
            z_diag: choice.z_diag,
            removed: choice.capacity - n,
            removed_per_band: placement.removed.clone(),
            min_residue,
            max_residue,
            mu: mu(n, m),
            residue_target: target,
            residue_window: window,
            min_separation: sep,
            separation_bound: sep_bound,
            min_l_residue: glue * min_residue,
            l_residue_bound: (1.0 - 2f64.powi(-10)) * m.powf(0.25) * (n as f64).ln(),
            warnings,
        };
        let points = placement
            .points
            .iter()
            .zip(&res)
            .map(|(p, &r)| BagPoint { band: p.band, longitude: p.longitude, position: p.position, residue: r })
            .collect();
        Ok(ShellConfig { n, m, radius, bands: placement.bands, glue_length: glue, points, diagnostics })
    }

    pub fn positions(&self) -> Vec<Point> {
        self.points.iter().map(|p| p.position).collect()
    }

    /// Index and distance of the nearest point of Θ.
    pub fn nearest(&self, x: &Point) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (i, p) in self.points.iter().enumerate() {
            let d = (x - p.position).norm();
            if d < best.1 {
                best = (i, d);
            }
        }
        best
    }

    /// Θ as CSV: `index,band,x,y,z,r_p`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "index,band,x,y,z,r_p")?;
        for (i, p) in self.points.iter().enumerate() {
            writeln!(
                w,
                "{i},{},{:.16e},{:.16e},{:.16e},{:.16e}",
                p.band, p.position.x, p.position.y, p.position.z, p.residue
            )?;
        }
        Ok(())
    }
}
