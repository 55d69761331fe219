//! Gauge-invariant diagnostics: sphere statistics, radial profiles, critical
//! radii, flux, local degree, PS energy and the `|Φ|²` Laplacian identity.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bag::{mu, ShellConfig};
use crate::glued::{higgs_norm, phi_theta_gradient, BallChart};
use crate::monopole::{ps_pair, DiracMonopole, PairField, ScaledMonopole};
use crate::operators::{fd_curvature, FdScheme};
use crate::quadrature::{solid_angle, GaussLegendre, IcoSphere};
use crate::su2::AlgVec;
use crate::verify::Check;
use crate::{Error, Point, Result};

pub use crate::quadrature::SphereQuadrature;

/// Something with a gauge-invariant `|Φ|`.
pub trait HiggsField: Sync {
    fn higgs_norm(&self, x: &Point) -> f64;
    /// Length scale used for the radial resolution of critical radii.
    fn length_scale(&self) -> f64 {
        1.0
    }

    /// Extra unit directions where `|Φ|` is likely extremal on origin-centred
    /// spheres. They enter min and max but not the mean.
    fn hint_directions(&self) -> Vec<Point> {
        Vec::new()
    }
}

impl HiggsField for ShellConfig {
    fn higgs_norm(&self, x: &Point) -> f64 {
        higgs_norm(x, self)
    }

    fn length_scale(&self) -> f64 {
        self.n as f64
    }

    fn hint_directions(&self) -> Vec<Point> {
        self.points.iter().map(|p| p.position.normalize()).collect()
    }
}

impl HiggsField for ScaledMonopole {
    fn higgs_norm(&self, x: &Point) -> f64 {
        ps_pair(x, self).phi.norm()
    }
}

impl HiggsField for DiracMonopole {
    fn higgs_norm(&self, x: &Point) -> f64 {
        (self.residue - 1.0 / (x - self.center).norm()).abs()
    }
}

/// min / mean / max of `|Φ|` over one sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphereStats {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

/// Statistics of `|Φ|` on the origin-centred sphere of radius `r`.
pub fn sphere_stats<H: HiggsField + ?Sized>(r: f64, field: &H, quad: &SphereQuadrature) -> Result<SphereStats> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidParameter(format!("sphere radius must be positive, got {r}")));
    }
    let vals: Vec<f64> = quad.points.par_iter().map(|u| field.higgs_norm(&(u * r))).collect();
    let mut st = SphereStats { min: f64::INFINITY, mean: 0.0, max: f64::NEG_INFINITY };
    for v in &vals {
        st.min = st.min.min(*v);
        st.max = st.max.max(*v);
        st.mean += v;
    }
    for u in field.hint_directions() {
        let v = field.higgs_norm(&(u * r));
        st.min = st.min.min(v);
        st.max = st.max.max(v);
    }
    // summation rounding can push the mean of equal values past the extremes
    st.mean = (st.mean / vals.len() as f64).clamp(st.min, st.max);
    Ok(st)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub radius: f64,
    pub min_phi: f64,
    pub mean_phi: f64,
    pub max_phi: f64,
}

/// `|Φ|` statistics on a sequence of spheres.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub rows: Vec<ProfileRow>,
}

impl RadialProfile {
    /// `steps` equally spaced radii from `r_min` to `r_max` inclusive.
    pub fn compute<H: HiggsField + ?Sized>(
        field: &H,
        r_min: f64,
        r_max: f64,
        steps: usize,
        quad: &SphereQuadrature,
    ) -> Result<RadialProfile> {
        if !(r_min > 0.0 && r_max > r_min) || steps < 2 {
            return Err(Error::InvalidParameter(format!(
                "radial grid needs 0 < r_min < r_max and at least two steps, got [{r_min}, {r_max}] × {steps}"
            )));
        }
        let rows = (0..steps)
            .map(|i| {
                let radius = r_min + (r_max - r_min) * i as f64 / (steps - 1) as f64;
                let s = sphere_stats(radius, field, quad)?;
                Ok(ProfileRow { radius, min_phi: s.min, mean_phi: s.mean, max_phi: s.max })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(RadialProfile { rows })
    }

    /// CSV with header `radius,min_phi,mean_phi,max_phi`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "radius,min_phi,mean_phi,max_phi")?;
        for r in &self.rows {
            writeln!(w, "{:.16e},{:.16e},{:.16e},{:.16e}", r.radius, r.min_phi, r.mean_phi, r.max_phi)?;
        }
        Ok(())
    }
}

/// Radial scan used by [`critical_radii`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialScan {
    pub r_max: f64,
    pub steps: usize,
}

/// The three critical radii with the bisection resolution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalRadii {
    /// Smallest radius beyond which `min |Φ| > ε` on every sampled sphere.
    pub big_r: f64,
    /// Largest radius below which `max |Φ| < ε`.
    pub small_r: f64,
    /// Largest radius below which the sphere mean of `|Φ|` is `< ε`.
    pub small_r_hat: f64,
    pub resolution: f64,
}

/// Shrink `[good, bad]` (in either order) until shorter than `tol`; returns the good end.
fn bisect<F: Fn(f64) -> bool>(mut good: f64, mut bad: f64, tol: f64, pred: F) -> f64 {
    while (bad - good).abs() > tol {
        let mid = 0.5 * (good + bad);
        if pred(mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

/// Scan plus bisection estimates of `R_ε`, `r_ε` and `r̂_ε`.
pub fn critical_radii<H: HiggsField + ?Sized>(
    eps: f64,
    field: &H,
    quad: &SphereQuadrature,
    scan: &RadialScan,
) -> Result<CriticalRadii> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("eps must lie in (0, 1), got {eps}")));
    }
    if !(scan.r_max > 0.0) || scan.steps < 2 {
        return Err(Error::InvalidParameter("radial scan needs r_max > 0 and two steps".into()));
    }
    let resolution = 1e-3 * field.length_scale();
    let grid: Vec<f64> = (1..=scan.steps).map(|i| scan.r_max * i as f64 / scan.steps as f64).collect();
    let stats: Vec<SphereStats> = grid.iter().map(|&r| sphere_stats(r, field, quad)).collect::<Result<_>>()?;
    let stat = |r: f64| sphere_stats(r, field, quad).expect("positive radius");

    // R_ε: outermost sphere where min |Φ| ≤ ε
    let big_r = match stats.iter().rposition(|s| s.min <= eps) {
        None => 0.0,
        Some(i) if i + 1 == grid.len() => grid[i],
        Some(i) => bisect(grid[i + 1], grid[i], resolution, |r| stat(r).min > eps),
    };
    let first_fail =
        |pred: &dyn Fn(&SphereStats) -> bool, sample: &dyn Fn(f64) -> bool| match stats.iter().position(|s| !pred(s)) {
            None => scan.r_max,
            Some(0) => bisect(0.0, grid[0], resolution, sample),
            Some(i) => bisect(grid[i - 1], grid[i], resolution, sample),
        };
    let small_r = first_fail(&|s| s.max < eps, &|r| stat(r).max < eps);
    let small_r_hat = first_fail(&|s| s.mean < eps, &|r| stat(r).mean < eps);
    Ok(CriticalRadii { big_r, small_r, small_r_hat, resolution })
}

/// `(1/4π) ∮ n̂·Σ_p (x − p)/|x − p|³` over the sphere `|x − c| = r`.
pub fn point_charge_flux(points: &[Point], center: &Point, r: f64, quad: &SphereQuadrature) -> f64 {
    let total: f64 = quad
        .points
        .par_iter()
        .map(|u| {
            let x = center + u * r;
            points
                .iter()
                .map(|p| {
                    let y = x - p;
                    u.dot(&y) / y.norm().powi(3)
                })
                .sum::<f64>()
        })
        .collect::<Vec<_>>()
        .iter()
        .sum();
    total * quad.weight * r * r / (4.0 * PI)
}

/// Flux of `⟨σ̂, *F⟩ = ∇φ_Θ` through `|x| = r`, divided by 4π.
pub fn flux_charge(r: f64, cfg: &ShellConfig, quad: &SphereQuadrature) -> Result<f64> {
    if !(r > cfg.radius + cfg.glue_length) {
        return Err(Error::InvalidParameter(format!(
            "flux sphere radius {r} is not outside the shell (R + L = {})",
            cfg.radius + cfg.glue_length
        )));
    }
    let vals: Vec<f64> =
        quad.points.par_iter().map(|u| phi_theta_gradient(&(u * r), cfg).map(|g| g.dot(u))).collect::<Result<_>>()?;
    Ok(vals.iter().sum::<f64>() * quad.weight * r * r / (4.0 * PI))
}

/// Degree of `x ↦ v(x)/|v(x)|` on the sphere `|x − c| = radius`, by signed
/// solid angles of the image of a 1280-face icosphere.
pub fn map_degree<F: Fn(&Point) -> Point>(center: &Point, radius: f64, v: F) -> Result<i32> {
    let ico = IcoSphere::new(3);
    let img: Vec<Point> = ico
        .vertices
        .iter()
        .map(|u| {
            let w = v(&(center + u * radius));
            w / w.norm()
        })
        .collect();
    if img.iter().any(|w| !w.iter().all(|c| c.is_finite())) {
        return Err(Error::NumericFailure("map vanishes on the degree sphere".into()));
    }
    let total: f64 = ico.faces.iter().map(|f| solid_angle(&img[f[0]], &img[f[1]], &img[f[2]])).sum();
    let deg = total / (4.0 * PI);
    let rounded = deg.round();
    if (deg - rounded).abs() > 0.1 {
        return Err(Error::NumericFailure(format!("degree estimate {deg} is not near an integer")));
    }
    Ok(rounded as i32)
}

fn alg_to_point(v: &AlgVec) -> Point {
    Point::new(v[0], v[1], v[2])
}

/// Local degree of `Φ_G/|Φ_G|` around point `idx` of Θ, on the sphere of radius `L/16`.
pub fn local_degree(idx: usize, cfg: &ShellConfig) -> Result<i32> {
    let p = cfg.points.get(idx).ok_or_else(|| Error::InvalidParameter(format!("no point with index {idx}")))?;
    let chart = BallChart { cfg, index: idx };
    map_degree(&p.position, cfg.glue_length / 16.0, |x| alg_to_point(&chart.sample(x).phi))
}

/// Local degree of a PS monopole about its center.
pub fn local_degree_ps(mono: &ScaledMonopole, radius: f64) -> Result<i32> {
    map_degree(&mono.center, radius, |x| alg_to_point(&ps_pair(x, mono).phi))
}

/// `∫|F|²` and `∫|d_AΦ|²` for the unit PS monopole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsEnergy {
    pub e_f: f64,
    pub e_dphi: f64,
    /// The analytic `4π/r_max` tail included in both.
    pub tail: f64,
}

/// Radial Gauss–Legendre panels of unit width times a Fibonacci sphere rule,
/// with FD derivatives, plus the `4π/r_max` tail.
pub fn ps_energy(r_max: f64, quad: &SphereQuadrature, fd: &FdScheme) -> Result<PsEnergy> {
    if !(r_max >= 20.0) {
        return Err(Error::InvalidParameter(format!("r_max must be at least 20, got {r_max}")));
    }
    let mono = ScaledMonopole::unit();
    let panels = r_max.ceil() as usize;
    let gl = GaussLegendre::new(12);
    let nodes: Vec<(f64, f64)> = (0..panels)
        .flat_map(|k| gl.mapped(r_max * k as f64 / panels as f64, r_max * (k + 1) as f64 / panels as f64))
        .collect();
    let sums: Vec<(f64, f64)> = nodes
        .par_iter()
        .map(|&(r, w)| {
            let mut acc = (0.0, 0.0);
            for u in &quad.points {
                let c = fd_curvature(&mono, &(u * r), fd);
                // |F|² over 2-forms equals |*F|²
                acc.0 += c.star_f.norm_sq();
                acc.1 += c.d_phi.norm_sq();
            }
            (acc.0 * w * r * r * quad.weight, acc.1 * w * r * r * quad.weight)
        })
        .collect();
    let tail = 4.0 * PI / r_max;
    let (e_f, e_dphi) = sums.iter().fold((tail, tail), |a, s| (a.0 + s.0, a.1 + s.1));
    Ok(PsEnergy { e_f, e_dphi, tail })
}

/// `|Δ|Φ|² − 2|d_AΦ|²|` with a 7-point Laplacian of step `h`.
pub fn laplacian_identity<P: PairField + ?Sized>(x: &Point, field: &P, h: f64) -> f64 {
    let sq = |y: &Point| field.sample(y).phi.norm_sq();
    let mut lap = -6.0 * sq(x);
    for j in 0..3 {
        let mut e = Point::zeros();
        e[j] = h;
        lap += sq(&(x + e)) + sq(&(x - e));
    }
    lap /= h * h;
    let d = fd_curvature(field, x, &FdScheme::new(h)).d_phi.norm_sq();
    (lap - 2.0 * d).abs()
}

/// Smallest sampled `|Φ_G|` at distance `≥ L` from Θ: spheres of radius `L`
/// about every point, the origin, and `random` uniform points in the slab
/// `R − 3L ≤ |x| ≤ R + 3L` that keep distance `L`.
pub fn higgs_floor_beyond_glue(cfg: &ShellConfig, per_point: usize, random: usize, seed: u64) -> f64 {
    use rand::SeedableRng;
    let glue = cfg.glue_length;
    let dirs = SphereQuadrature::fibonacci(per_point);
    let around: f64 = cfg
        .points
        .par_iter()
        .map(|p| dirs.points.iter().map(|u| higgs_norm(&(p.position + u * glue), cfg)).fold(f64::INFINITY, f64::min))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    let mut floor = around.min(higgs_norm(&Point::zeros(), cfg));
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (r0, r1) = (cfg.radius - 3.0 * glue, cfg.radius + 3.0 * glue);
    let mut taken = 0;
    while taken < random {
        let x = crate::glued::random_in_shell(&mut rng, &Point::zeros(), r0, r1);
        if cfg.nearest(&x).1 < glue {
            continue;
        }
        floor = floor.min(higgs_norm(&x, cfg));
        taken += 1;
    }
    floor
}

/// Shell-geometry checks on the glued pair plus informational comparisons
/// with the critical-radius bounds for exact solutions.
pub fn theorem_report(cfg: &ShellConfig, eps_list: &[f64], quad: &SphereQuadrature) -> Result<Vec<Check>> {
    use crate::constants::{INTERIOR_MAX_C, SHELL_MEAN_C};
    let n = cfg.n as f64;
    let mu = mu(cfg.n, cfg.m);
    let (big_r, glue) = (cfg.radius, cfg.glue_length);
    let mut out = Vec::new();

    let at_r = sphere_stats(big_r, cfg, quad)?;
    out.push(Check::le("shell.mean_phi_at_R", at_r.mean, SHELL_MEAN_C * mu));

    let mut interior_max: f64 = 0.0;
    for k in 0..=8 {
        let r = big_r * k as f64 / 16.0;
        interior_max =
            interior_max.max(if k == 0 { cfg.higgs_norm(&Point::zeros()) } else { sphere_stats(r, cfg, quad)?.max });
    }
    out.push(Check::le("shell.interior_max_phi", interior_max, INTERIOR_MAX_C * mu));

    let off_shell = cfg.points.iter().map(|p| (p.position.norm() - big_r).abs()).fold(0.0, f64::max);
    out.push(Check::le("shell.zeros_on_R_sphere", off_shell, 1e-9 * big_r));
    let ray = Point::new(0.3, -0.4, 0.866);
    let extra =
        (0..cfg.points.len()).filter_map(|i| crate::glued::annulus_higgs_zero(cfg, i, &ray)).fold(0.0, f64::max);
    out.push(Check::le("shell.extra_zeros_within_L", extra, glue));

    // floor of |Φ_G| at distance ≥ L from Θ, sampled on spheres outside R + L
    let mut floor = f64::INFINITY;
    for k in 0..=8 {
        let r = big_r + glue * (1.0 + k as f64 * 0.5);
        floor = floor.min(sphere_stats(r, cfg, quad)?.min);
    }
    let scan = RadialScan { r_max: 2.0 * big_r, steps: 400 };
    let eps_floor = 0.5 * floor;
    if eps_floor > 0.0 && eps_floor < 1.0 {
        let cr = critical_radii(eps_floor, cfg, quad, &scan)?;
        out.push(Check::le("shell.R_eps_at_half_floor", cr.big_r, big_r + 2.0 * glue));
    }

    let eps_mean = at_r.mean;
    if eps_mean < 1.0 {
        let cr = critical_radii(eps_mean, cfg, quad, &scan)?;
        out.push(Check::ge("shell.rhat_at_mean_R", cr.small_r_hat, big_r - cr.resolution));
    }

    for &eps in eps_list {
        let cr = critical_radii(eps, cfg, quad, &scan)?;
        out.push(Check::info(
            &format!("info.R_eps[{eps}]_vs_N/(1-eps)"),
            cr.big_r,
            n / (1.0 - eps),
            cr.big_r > n / (1.0 - eps),
        ));
        out.push(Check::info(
            &format!("info.r_eps[{eps}]_vs_N/(1-eps)"),
            cr.small_r,
            n / (1.0 - eps),
            cr.small_r < n / (1.0 - eps),
        ));
        out.push(Check::info(
            &format!("info.rhat_eps[{eps}]_vs_N/(1-eps)^2"),
            cr.small_r_hat,
            n / (1.0 - eps).powi(2),
            cr.small_r_hat < n / (1.0 - eps).powi(2),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bag::make_shell_config;

    #[test]
    fn ps_sphere_stats() {
        let q = SphereQuadrature::fibonacci(256);
        let s = sphere_stats(2.0, &ScaledMonopole::unit(), &q).unwrap();
        let exact = 1.0 / 2f64.tanh() - 0.5;
        assert!((s.mean - exact).abs() < 1e-12);
        assert!((s.max - s.min).abs() < 1e-12);
        assert!((exact - 0.537315).abs() < 1e-6);
        assert!(sphere_stats(0.0, &ScaledMonopole::unit(), &q).is_err());
    }

    #[test]
    fn glued_far_sphere_mean() {
        let cfg = make_shell_config(25, 16.0).unwrap();
        let q = SphereQuadrature::fibonacci(1024);
        let r = 10.0 * cfg.radius;
        let s = sphere_stats(r, &cfg, &q).unwrap();
        let oracle = 1.0 - 25.0 / r;
        assert!((s.mean - oracle).abs() < 0.02 * oracle);
    }

    #[test]
    fn ps_critical_radii() {
        let q = SphereQuadrature::fibonacci(64);
        let scan = RadialScan { r_max: 40.0, steps: 200 };
        let c = critical_radii(0.5, &ScaledMonopole::unit(), &q, &scan).unwrap();
        assert!((c.small_r - 1.797).abs() < 0.01, "{c:?}");
        assert!((c.small_r_hat - c.small_r).abs() <= c.resolution);
        assert!(c.small_r < 2.0 && c.small_r_hat < 4.0);
        let mut prev = (0.0, 0.0);
        for eps in [0.05, 0.1, 0.3, 0.5, 0.7, 0.9] {
            let c = critical_radii(eps, &ScaledMonopole::unit(), &q, &scan).unwrap();
            assert!(c.small_r >= prev.0 && c.big_r >= prev.1);
            prev = (c.small_r, c.big_r);
        }
        let tiny = critical_radii(1e-3, &ScaledMonopole::unit(), &q, &scan).unwrap();
        assert!(tiny.small_r < 0.01);
        assert!(critical_radii(1.0, &ScaledMonopole::unit(), &q, &scan).is_err());
        assert!(critical_radii(0.0, &ScaledMonopole::unit(), &q, &scan).is_err());
    }

    #[test]
    fn dirac_flux_and_shell_flux() {
        let q = SphereQuadrature::fibonacci(4096);
        let f = point_charge_flux(&[Point::new(0.1, -0.2, 0.05)], &Point::zeros(), 2.0, &q);
        assert!((f - 1.0).abs() < 1e-3);
        let cfg = make_shell_config(25, 16.0).unwrap();
        let v = flux_charge(2.0 * cfg.radius, &cfg, &q).unwrap();
        assert!((v - 25.0).abs() < 1e-3, "{v}");
        assert!(flux_charge(cfg.radius, &cfg, &q).is_err());
    }

    #[test]
    fn degree_of_model_maps() {
        let c = Point::new(1.0, 2.0, 3.0);
        assert_eq!(map_degree(&c, 0.5, |x| x - c).unwrap(), 1);
        assert_eq!(map_degree(&c, 0.5, |x| c - x).unwrap(), -1);
        assert_eq!(map_degree(&c, 0.5, |_| Point::new(0.0, 0.0, 1.0)).unwrap(), 0);
        assert_eq!(local_degree_ps(&ScaledMonopole::unit(), 0.1).unwrap(), 1);
        assert!(map_degree(&c, 0.5, |_| Point::zeros()).is_err());
    }

    #[test]
    fn local_degrees_sum_to_charge() {
        let cfg = make_shell_config(25, 16.0).unwrap();
        let total: i32 = (0..25).map(|i| local_degree(i, &cfg).unwrap()).sum();
        assert_eq!(total, 25);
    }

    #[test]
    fn laplacian_identity_on_exact_pairs() {
        let ps = ScaledMonopole::unit();
        let x = Point::new(1.2, -1.4, 0.6).normalize() * 2.0;
        let d1 = laplacian_identity(&x, &ps, 1e-3);
        assert!(d1 <= 1e-5, "{d1}");
        let (a, b) = (laplacian_identity(&x, &ps, 2e-2), laplacian_identity(&x, &ps, 1e-2));
        assert!((3.5..=4.5).contains(&(a / b)), "{}", a / b);
        let dirac = DiracMonopole { center: Point::zeros(), residue: 1.0 };
        let y = Point::new(0.0, 3.0, 0.0);
        assert!(laplacian_identity(&y, &dirac, 1e-3) <= 1e-5);
    }

    #[test]
    fn profile_csv() {
        let q = SphereQuadrature::fibonacci(64);
        let p = RadialProfile::compute(&ScaledMonopole::unit(), 0.5, 4.0, 8, &q).unwrap();
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("radius,min_phi,mean_phi,max_phi\n"));
        assert_eq!(text.lines().count(), 9);
        for w in p.rows.windows(2) {
            assert!(w[1].radius > w[0].radius);
        }
        for r in &p.rows {
            assert!(r.min_phi <= r.mean_phi && r.mean_phi <= r.max_phi);
        }
    }

    #[test]
    fn ps_energy_is_four_pi() {
        let e = ps_energy(40.0, &SphereQuadrature::fibonacci(32), &FdScheme::new(1e-4)).unwrap();
        assert!((e.e_dphi / (4.0 * PI) - 1.0).abs() < 5e-3, "{e:?}");
        assert!((e.e_f / e.e_dphi - 1.0).abs() < 5e-3);
        assert!(e.tail < 4.0 * PI / 40.0 + 1e-15);
        assert!(ps_energy(10.0, &SphereQuadrature::fibonacci(32), &FdScheme::default()).is_err());
    }
}
