//! Quadrature rules: Gauss–Legendre on intervals, adaptive 1-D integration,
//! equal-weight Fibonacci lattices on S², and icosahedral sphere meshes.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Point, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi initial guess, then Newton on P_n.
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    /// Integrate `f` over `[a, b]`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> Vec<(f64, f64)> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(|(x, w)| (mid + half * x, w * half)).collect()
    }
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = if n == 0 { 0.0 } else { n as f64 * (x * p1 - p0) / (x * x - 1.0) };
    (p, d)
}

/// Adaptive Gauss–Legendre integration (10-point vs 20-point panels).
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<f64> {
    let lo = GaussLegendre::new(10);
    let hi = GaussLegendre::new(20);
    let mut stack = vec![(a, b, abs_tol, 0usize)];
    let mut total = 0.0;
    while let Some((a, b, tol, depth)) = stack.pop() {
        let coarse = lo.integrate(a, b, &f);
        let fine = hi.integrate(a, b, &f);
        if !fine.is_finite() {
            return Err(Error::NumericFailure(format!("non-finite integrand on [{a}, {b}]")));
        }
        if (fine - coarse).abs() <= tol {
            total += fine;
        } else if depth >= 40 {
            return Err(Error::NumericFailure(format!("adaptive quadrature did not converge on [{a}, {b}]")));
        } else {
            let mid = 0.5 * (a + b);
            stack.push((a, mid, 0.5 * tol, depth + 1));
            stack.push((mid, b, 0.5 * tol, depth + 1));
        }
    }
    Ok(total)
}

/// Equal-weight Fibonacci-lattice rule on the unit sphere.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SphereQuadrature {
    pub points: Vec<Point>,
    pub weight: f64,
}

impl SphereQuadrature {
    pub fn fibonacci(m: usize) -> Self {
        assert!(m >= 1, "sphere quadrature needs at least one point");
        let golden = PI * (1.0 + 5f64.sqrt());
        let points = (0..m)
            .map(|i| {
                let t = i as f64 + 0.5;
                let z = 1.0 - 2.0 * t / m as f64;
                let s = (1.0 - z * z).max(0.0).sqrt();
                let phi = golden * t;
                Point::new(s * phi.cos(), s * phi.sin(), z)
            })
            .collect();
        SphereQuadrature { points, weight: 4.0 * PI / m as f64 }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `∫_{|x−c|=r} f dA`.
    pub fn integrate_sphere<F: Fn(&Point) -> f64>(&self, center: &Point, r: f64, f: F) -> f64 {
        let s: f64 = self.points.iter().map(|u| f(&(center + u * r))).sum();
        s * self.weight * r * r
    }
}

/// Triangulated unit sphere from a subdivided icosahedron (`20·4^levels` faces).
#[derive(Debug, Clone)]
pub struct IcoSphere {
    pub vertices: Vec<Point>,
    pub faces: Vec<[usize; 3]>,
}

impl IcoSphere {
    pub fn new(levels: usize) -> Self {
        let t = (1.0 + 5f64.sqrt()) / 2.0;
        let mut vertices: Vec<Point> = [
            (-1.0, t, 0.0),
            (1.0, t, 0.0),
            (-1.0, -t, 0.0),
            (1.0, -t, 0.0),
            (0.0, -1.0, t),
            (0.0, 1.0, t),
            (0.0, -1.0, -t),
            (0.0, 1.0, -t),
            (t, 0.0, -1.0),
            (t, 0.0, 1.0),
            (-t, 0.0, -1.0),
            (-t, 0.0, 1.0),
        ]
        .iter()
        .map(|&(x, y, z)| Point::new(x, y, z).normalize())
        .collect();
        let mut faces: Vec<[usize; 3]> = vec![
            [0, 11, 5],
            [0, 5, 1],
            [0, 1, 7],
            [0, 7, 10],
            [0, 10, 11],
            [1, 5, 9],
            [5, 11, 4],
            [11, 10, 2],
            [10, 7, 6],
            [7, 1, 8],
            [3, 9, 4],
            [3, 4, 2],
            [3, 2, 6],
            [3, 6, 8],
            [3, 8, 9],
            [4, 9, 5],
            [2, 4, 11],
            [6, 2, 10],
            [8, 6, 7],
            [9, 8, 1],
        ];
        for _ in 0..levels {
            let mut cache = std::collections::HashMap::new();
            let mut midpoint = |a: usize, b: usize, verts: &mut Vec<Point>| -> usize {
                let key = (a.min(b), a.max(b));
                *cache.entry(key).or_insert_with(|| {
                    verts.push(((verts[a] + verts[b]) * 0.5).normalize());
                    verts.len() - 1
                })
            };
            let mut next = Vec::with_capacity(faces.len() * 4);
            for &[a, b, c] in &faces {
                let ab = midpoint(a, b, &mut vertices);
                let bc = midpoint(b, c, &mut vertices);
                let ca = midpoint(c, a, &mut vertices);
                next.extend_from_slice(&[[a, ab, ca], [b, bc, ab], [c, ca, bc], [ab, bc, ca]]);
            }
            faces = next;
        }
        IcoSphere { vertices, faces }
    }
}

/// Signed solid angle of the spherical triangle spanned by unit vectors.
pub fn solid_angle(a: &Point, b: &Point, c: &Point) -> f64 {
    let num = a.dot(&b.cross(c));
    let den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
    2.0 * num.atan2(den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let gl = GaussLegendre::new(8);
        // degree 15 is the exactness limit for 8 nodes
        let v = gl.integrate(-1.0, 2.0, |x| x.powi(15) - 3.0 * x.powi(4) + 1.0);
        let exact = (2f64.powi(16) - 1.0) / 16.0 - 3.0 * (32.0 + 1.0) / 5.0 + 3.0;
        assert!((v - exact).abs() < 1e-9 * exact.abs());
        assert!((gl.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_sharp_integrand() {
        let v = integrate_adaptive(|x| 1.0 / (1e-4 + x * x), -1.0, 1.0, 1e-10).unwrap();
        let exact = 2.0 * (1.0 / 1e-2) * (1.0 / 1e-2f64).atan();
        assert!((v - exact).abs() < 1e-8, "{v} vs {exact}");
    }

    #[test]
    fn sphere_rule_constants_and_dipole() {
        let q = SphereQuadrature::fibonacci(1000);
        let r = 3.7;
        let c = Point::new(1.0, -2.0, 0.5);
        let area = q.integrate_sphere(&c, r, |_| 1.0);
        assert!((area - 4.0 * PI * r * r).abs() < 1e-10 * area);
        let dip = q.integrate_sphere(&c, r, |x| (x.z - c.z) / r);
        assert!(dip.abs() < 1e-10 * area);
    }

    #[test]
    fn icosphere_faces_tile_the_sphere() {
        let ico = IcoSphere::new(3);
        assert_eq!(ico.faces.len(), 1280);
        let total: f64 =
            ico.faces.iter().map(|f| solid_angle(&ico.vertices[f[0]], &ico.vertices[f[1]], &ico.vertices[f[2]])).sum();
        assert!((total - 4.0 * PI).abs() < 1e-10);
    }
}
