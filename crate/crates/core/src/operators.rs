//! Finite-difference realisation of the curvature, the deformation operator
//! `D` and its adjoint, the quadratic term `#`, and the identities tying them
//! together (deformation identity, Weitzenböck formula, formal adjointness).
//!
//! Conventions, all fixed by the deformation identity on the PS background:
//!
//! ```text
//! F_jl      = ∂_j a_l − ∂_l a_j + [a_j, a_l]        (*F)_m = ½ ε_jlm F_jl
//! (d_AΦ)_j  = ∂_j Φ + [a_j, Φ]
//! (*d_Aα)_m = ε_jlm (∂_j α_l + [a_j, α_l])
//! D(α, η)   = (*d_Aα − d_Aη + [Φ, α],  Σ_j ∇_j α_j + [Φ, η])
//! ```

use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::monopole::{FieldSample, PairField};
use crate::quadrature::GaussLegendre;
use crate::su2::{bracket, bracket_form, inner, levi_civita, wedge_dual, AlgOneForm, AlgVec};
use crate::{Error, Point, Result};

/// Central second-order differences with step `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdScheme {
    pub h: f64,
}

impl FdScheme {
    pub const DEFAULT_STEP: f64 = 1e-4;

    pub fn new(h: f64) -> Self {
        assert!(h > 0.0 && h.is_finite(), "FD step must be positive");
        FdScheme { h }
    }

    pub fn halved(&self) -> Self {
        FdScheme { h: 0.5 * self.h }
    }

    /// `∂_j f(x)`.
    pub fn partial<T, F>(&self, f: F, x: &Point, j: usize) -> T
    where
        T: Copy + Sub<Output = T> + Mul<f64, Output = T>,
        F: Fn(&Point) -> T,
    {
        let mut e = Point::zeros();
        e[j] = self.h;
        (f(&(x + e)) - f(&(x - e))) * (0.5 / self.h)
    }
}

impl Default for FdScheme {
    fn default() -> Self {
        FdScheme { h: Self::DEFAULT_STEP }
    }
}

/// Curvature data of a pair at one point.
#[derive(Debug, Clone, Copy)]
pub struct Curvature {
    pub sample: FieldSample,
    /// `F_jl` as an antisymmetric table.
    pub f: [[AlgVec; 3]; 3],
    pub star_f: AlgOneForm,
    pub d_phi: AlgOneForm,
}

impl Curvature {
    /// `g = *F − d_AΦ`.
    pub fn residual(&self) -> AlgOneForm {
        self.star_f - self.d_phi
    }
}

pub fn fd_curvature<P: PairField + ?Sized>(field: &P, x: &Point, fd: &FdScheme) -> Curvature {
    let s = field.sample(x);
    let mut da = [AlgOneForm::ZERO; 3];
    let mut dphi = [AlgVec::ZERO; 3];
    for j in 0..3 {
        let mut e = Point::zeros();
        e[j] = fd.h;
        let (p, m) = (field.sample(&(x + e)), field.sample(&(x - e)));
        da[j] = (p.a - m.a) * (0.5 / fd.h);
        dphi[j] = (p.phi - m.phi) * (0.5 / fd.h);
    }
    let mut f = [[AlgVec::ZERO; 3]; 3];
    for j in 0..3 {
        for l in 0..3 {
            if j != l {
                f[j][l] = da[j][l] - da[l][j] + bracket(&s.a[j], &s.a[l]);
            }
        }
    }
    let mut star_f = AlgOneForm::ZERO;
    let mut d_phi = AlgOneForm::ZERO;
    for m in 0..3 {
        let (j, l) = ((m + 1) % 3, (m + 2) % 3);
        star_f[m] = f[j][l];
        d_phi[m] = dphi[m] + bracket(&s.a[m], &s.phi);
    }
    Curvature { sample: s, f, star_f, d_phi }
}

/// FD residual `*F − d_AΦ` of a pair.
pub fn fd_residual<P: PairField + ?Sized>(field: &P, x: &Point, fd: &FdScheme) -> AlgOneForm {
    fd_curvature(field, x, fd).residual()
}

/// An element `(α, η)` of the deformation space at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CPairValue {
    pub alpha: AlgOneForm,
    pub eta: AlgVec,
}

impl CPairValue {
    pub const ZERO: CPairValue = CPairValue { alpha: AlgOneForm::ZERO, eta: AlgVec::ZERO };

    pub fn norm_sq(&self) -> f64 {
        self.alpha.norm_sq() + self.eta.norm_sq()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Pointwise inner product on 𝒞.
    pub fn dot(&self, o: &CPairValue) -> f64 {
        (0..3).map(|j| inner(&self.alpha[j], &o.alpha[j])).sum::<f64>() + inner(&self.eta, &o.eta)
    }

    /// `[v, ·]` applied to both components.
    fn ad(&self, v: &AlgVec) -> CPairValue {
        CPairValue { alpha: self.alpha.bracket_left(v), eta: bracket(v, &self.eta) }
    }
}

impl Add for CPairValue {
    type Output = CPairValue;
    fn add(self, o: CPairValue) -> CPairValue {
        CPairValue { alpha: self.alpha + o.alpha, eta: self.eta + o.eta }
    }
}

impl Sub for CPairValue {
    type Output = CPairValue;
    fn sub(self, o: CPairValue) -> CPairValue {
        CPairValue { alpha: self.alpha - o.alpha, eta: self.eta - o.eta }
    }
}

impl Neg for CPairValue {
    type Output = CPairValue;
    fn neg(self) -> CPairValue {
        CPairValue { alpha: -self.alpha, eta: -self.eta }
    }
}

impl Mul<f64> for CPairValue {
    type Output = CPairValue;
    fn mul(self, s: f64) -> CPairValue {
        CPairValue { alpha: self.alpha * s, eta: self.eta * s }
    }
}

/// Closed ball containing the support of a field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    pub center: Point,
    pub radius: f64,
}

/// A smooth field of deformation-space elements.
pub trait CPair: Sync {
    fn eval(&self, x: &Point) -> CPairValue;

    /// Compact support, if known.
    fn support(&self) -> Option<Support> {
        None
    }
}

impl<F> CPair for F
where
    F: Fn(&Point) -> CPairValue + Sync,
{
    fn eval(&self, x: &Point) -> CPairValue {
        self(x)
    }
}

/// The zero element.
pub struct ZeroPair;

impl CPair for ZeroPair {
    fn eval(&self, _: &Point) -> CPairValue {
        CPairValue::ZERO
    }
}

/// A bump-supported test element: `b(x) · (c + M·(x − center))` componentwise,
/// with `b = exp(−1/(1 − |y|²/ρ²))` inside the ball of radius ρ.
#[derive(Debug, Clone)]
pub struct BumpPair {
    pub center: Point,
    pub radius: f64,
    /// 12 slots: 9 for α (form index × algebra index), 3 for η.
    pub constant: [f64; 12],
    pub linear: [[f64; 3]; 12],
}

impl BumpPair {
    /// Deterministic random coefficients in `[-1, 1]`.
    pub fn random(center: Point, radius: f64, seed: u64) -> Self {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut constant = [0.0; 12];
        let mut linear = [[0.0; 3]; 12];
        for i in 0..12 {
            constant[i] = rng.gen_range(-1.0..1.0);
            for d in 0..3 {
                linear[i][d] = rng.gen_range(-1.0..1.0) / radius;
            }
        }
        BumpPair { center, radius, constant, linear }
    }

    pub fn scaled(mut self, s: f64) -> Self {
        for i in 0..12 {
            self.constant[i] *= s;
            for d in 0..3 {
                self.linear[i][d] *= s;
            }
        }
        self
    }
}

impl CPair for BumpPair {
    fn eval(&self, x: &Point) -> CPairValue {
        let y = x - self.center;
        let t = y.norm_squared() / (self.radius * self.radius);
        if t >= 1.0 {
            return CPairValue::ZERO;
        }
        let b = (-1.0 / (1.0 - t)).exp();
        let slot = |i: usize| {
            b * (self.constant[i] + self.linear[i][0] * y.x + self.linear[i][1] * y.y + self.linear[i][2] * y.z)
        };
        let mut out = CPairValue::ZERO;
        for j in 0..3 {
            for k in 0..3 {
                out.alpha[j][k] = slot(3 * j + k);
            }
        }
        for k in 0..3 {
            out.eta[k] = slot(9 + k);
        }
        out
    }

    fn support(&self) -> Option<Support> {
        Some(Support { center: self.center, radius: self.radius })
    }
}

/// A pair perturbed by a deformation element: `(A + α, Φ + η)`.
pub struct Deformed<'a, P: ?Sized, Q: ?Sized> {
    pub base: &'a P,
    pub delta: &'a Q,
}

impl<P: PairField + ?Sized, Q: CPair + ?Sized> PairField for Deformed<'_, P, Q> {
    fn sample(&self, x: &Point) -> FieldSample {
        let s = self.base.sample(x);
        let d = self.delta.eval(x);
        FieldSample { a: s.a + d.alpha, phi: s.phi + d.eta }
    }
}

fn apply_signed<Q, P>(q: &Q, bg: &P, x: &Point, fd: &FdScheme, higgs_sign: f64) -> CPairValue
where
    Q: CPair + ?Sized,
    P: PairField + ?Sized,
{
    let s = bg.sample(x);
    let phi = s.phi * higgs_sign;
    let v = q.eval(x);
    let d: [CPairValue; 3] = [0, 1, 2].map(|j| fd.partial(|y| q.eval(y), x, j));
    let mut first = AlgOneForm::ZERO;
    for m in 0..3 {
        let mut curl = AlgVec::ZERO;
        for j in 0..3 {
            for l in 0..3 {
                let e = levi_civita(j, l, m);
                if e != 0.0 {
                    curl += (d[j].alpha[l] + bracket(&s.a[j], &v.alpha[l])) * e;
                }
            }
        }
        let d_eta = d[m].eta + bracket(&s.a[m], &v.eta);
        first[m] = curl - d_eta + bracket(&phi, &v.alpha[m]);
    }
    let mut second = bracket(&phi, &v.eta);
    for j in 0..3 {
        second += d[j].alpha[j] + bracket(&s.a[j], &v.alpha[j]);
    }
    CPairValue { alpha: first, eta: second }
}

/// `D(α, η)` at `x` over the background pair `bg`.
pub fn apply_d<Q: CPair + ?Sized, P: PairField + ?Sized>(q: &Q, bg: &P, x: &Point, fd: &FdScheme) -> CPairValue {
    apply_signed(q, bg, x, fd, 1.0)
}

/// The formal adjoint: `D` with `Φ ↦ −Φ`.
pub fn apply_d_dagger<Q: CPair + ?Sized, P: PairField + ?Sized>(q: &Q, bg: &P, x: &Point, fd: &FdScheme) -> CPairValue {
    apply_signed(q, bg, x, fd, -1.0)
}

/// `q # q′ = (½ wedge_dual(α, α′) − ½([α, η′] + [α′, η]), 0)`.
pub fn hash(q: &CPairValue, q2: &CPairValue) -> CPairValue {
    let alpha = wedge_dual(&q.alpha, &q2.alpha) * 0.5
        - (bracket_form(&q.alpha, &q2.eta) + bracket_form(&q2.alpha, &q.eta)) * 0.5;
    CPairValue { alpha, eta: AlgVec::ZERO }
}

/// Terms of the deformation identity `*F_{A+α} − d_{A+α}(Φ+η) = g + Dĥ + ĥ#ĥ`.
#[derive(Debug, Clone, Copy)]
pub struct DeformationCheck {
    pub lhs: AlgOneForm,
    pub rhs: AlgOneForm,
}

impl DeformationCheck {
    pub fn defect(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }

    pub fn relative_defect(&self) -> f64 {
        self.defect() / self.lhs.norm().max(self.rhs.norm()).max(1.0)
    }
}

pub fn deformation_check<Q: CPair + ?Sized, P: PairField + ?Sized>(
    q: &Q,
    bg: &P,
    x: &Point,
    fd: &FdScheme,
) -> DeformationCheck {
    let lhs = fd_residual(&Deformed { base: bg, delta: q }, x, fd);
    let v = q.eval(x);
    let rhs = fd_residual(bg, x, fd) + apply_d(q, bg, x, fd).alpha + hash(&v, &v).alpha;
    DeformationCheck { lhs, rhs }
}

/// `|LHS − RHS|` of the deformation identity.
pub fn deformation_identity<Q: CPair + ?Sized, P: PairField + ?Sized>(q: &Q, bg: &P, x: &Point, fd: &FdScheme) -> f64 {
    deformation_check(q, bg, x, fd).defect()
}

/// The curvature endomorphism built from `g`:
/// `(wedge_dual(g, q) − [g, τ],  Σ_k [g_k, q_k])` for `u = (q, τ)`.
pub fn curvature_endomorphism(g: &AlgOneForm, u: &CPairValue) -> CPairValue {
    let alpha = wedge_dual(g, &u.alpha) - bracket_form(g, &u.eta);
    let eta = (0..3).fold(AlgVec::ZERO, |acc, k| acc + bracket(&g[k], &u.alpha[k]));
    CPairValue { alpha, eta }
}

/// Pieces of the Weitzenböck identity at a point.
#[derive(Debug, Clone, Copy)]
pub struct WeitzenbockCheck {
    pub dd_dagger: CPairValue,
    pub laplacian: CPairValue,
    pub potential: CPairValue,
    pub curvature: CPairValue,
}

impl WeitzenbockCheck {
    pub fn defect(&self) -> f64 {
        (self.dd_dagger - self.laplacian - self.potential - self.curvature).norm()
    }
}

/// Covariant Laplacian `∇†∇u = −Σ_j ∇_j∇_j u` by nested central differences.
pub fn covariant_laplacian<Q: CPair + ?Sized, P: PairField + ?Sized>(
    u: &Q,
    bg: &P,
    x: &Point,
    fd: &FdScheme,
) -> CPairValue {
    let nabla = |j: usize, y: &Point| -> CPairValue {
        let a = bg.sample(y).a[j];
        let d = fd.partial(|z| u.eval(z), y, j);
        d + u.eval(y).ad(&a)
    };
    let mut acc = CPairValue::ZERO;
    let a0 = bg.sample(x).a;
    for j in 0..3 {
        let outer = fd.partial(|y| nabla(j, y), x, j) + nabla(j, x).ad(&a0[j]);
        acc = acc - outer;
    }
    acc
}

pub fn weitzenbock_check<Q: CPair + ?Sized, P: PairField + ?Sized>(
    u: &Q,
    bg: &P,
    x: &Point,
    fd: &FdScheme,
) -> WeitzenbockCheck {
    let inner_dag = |y: &Point| apply_d_dagger(u, bg, y, fd);
    let dd_dagger = apply_d(&inner_dag, bg, x, fd);
    let laplacian = covariant_laplacian(u, bg, x, fd);
    let s = bg.sample(x);
    let v = u.eval(x);
    // [Φ, [u, Φ]]
    let potential = CPairValue {
        alpha: bracket_form(&v.alpha, &s.phi).bracket_left(&s.phi),
        eta: bracket(&s.phi, &bracket(&v.eta, &s.phi)),
    };
    let g = fd_residual(bg, x, fd);
    let curvature = curvature_endomorphism(&g, &v);
    WeitzenbockCheck { dd_dagger, laplacian, potential, curvature }
}

/// `|DD†u − (∇†∇u + [Φ,[u,Φ]] + 𝔊(u))|`.
pub fn weitzenbock_defect<Q: CPair + ?Sized, P: PairField + ?Sized>(u: &Q, bg: &P, x: &Point, fd: &FdScheme) -> f64 {
    weitzenbock_check(u, bg, x, fd).defect()
}

/// Tensor-product composite Gauss–Legendre rule on an axis-aligned cube.
#[derive(Debug, Clone, Copy)]
pub struct BoxQuadrature {
    pub center: Point,
    pub half_width: f64,
    /// Nodes per panel.
    pub nodes_per_axis: usize,
    /// Panels per axis.
    pub panels: usize,
}

impl BoxQuadrature {
    /// `(node, weight)` pairs along axis `d`.
    pub fn axis(&self, d: usize) -> Vec<(f64, f64)> {
        let gl = GaussLegendre::new(self.nodes_per_axis);
        let panels = self.panels.max(1);
        let lo = self.center[d] - self.half_width;
        let w = 2.0 * self.half_width / panels as f64;
        (0..panels).flat_map(|k| gl.mapped(lo + k as f64 * w, lo + (k + 1) as f64 * w)).collect()
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AdjointnessGap {
    pub forward: f64,
    pub adjoint: f64,
    /// `‖q′‖·‖Dq‖` in L², used to normalise the gap.
    pub scale: f64,
}

impl AdjointnessGap {
    pub fn gap(&self) -> f64 {
        (self.forward - self.adjoint).abs()
    }

    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            self.gap() / self.scale
        }
    }
}

/// `∫⟨q′, Dq⟩` versus `∫⟨D†q′, q⟩` over a box containing both supports.
pub fn adjointness_gap<Q1, Q2, P>(
    q: &Q1,
    q2: &Q2,
    bg: &P,
    quad: &BoxQuadrature,
    fd: &FdScheme,
) -> Result<AdjointnessGap>
where
    Q1: CPair + ?Sized,
    Q2: CPair + ?Sized,
    P: PairField + ?Sized,
{
    for s in [q.support(), q2.support()] {
        let s = s.ok_or_else(|| Error::InvalidParameter("adjointness needs compactly supported pairs".into()))?;
        let inside = (0..3).all(|d| (s.center[d] - quad.center[d]).abs() + s.radius < quad.half_width);
        if !inside {
            return Err(Error::InvalidParameter("support touches the quadrature box boundary".into()));
        }
    }
    let axis: Vec<Vec<(f64, f64)>> = (0..3).map(|d| quad.axis(d)).collect();
    let n = axis[0].len();
    let sums = (0..n * n)
        .into_par_iter()
        .map(|ij| {
            let (i, j) = (ij / n, ij % n);
            let mut acc = [0.0; 4];
            for &(z, wz) in &axis[2] {
                let x = Point::new(axis[0][i].0, axis[1][j].0, z);
                let w = axis[0][i].1 * axis[1][j].1 * wz;
                let (v, v2) = (q.eval(&x), q2.eval(&x));
                if v.norm_sq() == 0.0 && v2.norm_sq() == 0.0 {
                    continue;
                }
                let dq = apply_d(q, bg, &x, fd);
                let dq2 = apply_d_dagger(q2, bg, &x, fd);
                acc[0] += w * v2.dot(&dq);
                acc[1] += w * dq2.dot(&v);
                acc[2] += w * v2.norm_sq();
                acc[3] += w * dq.norm_sq();
            }
            acc
        })
        .collect::<Vec<_>>();
    // fixed-order reduction keeps the result deterministic
    let tot = sums.iter().fold([0.0; 4], |a, s| [a[0] + s[0], a[1] + s[1], a[2] + s[2], a[3] + s[3]]);
    Ok(AdjointnessGap { forward: tot[0], adjoint: tot[1], scale: (tot[2] * tot[3]).sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monopole::ScaledMonopole;

    fn flat(c: f64) -> impl Fn(&Point) -> FieldSample + Sync {
        move |_: &Point| FieldSample { a: AlgOneForm::ZERO, phi: AlgVec::new(0.0, 0.0, c) }
    }

    #[test]
    fn constant_pure_higgs_has_no_curvature() {
        let c = fd_curvature(&flat(0.7), &Point::new(1.0, 2.0, 3.0), &FdScheme::default());
        assert_eq!(c.star_f, AlgOneForm::ZERO);
        assert_eq!(c.d_phi, AlgOneForm::ZERO);
    }

    #[test]
    fn dirac_flux_density() {
        let p = Point::new(0.1, 0.2, 0.3);
        let mono = crate::monopole::DiracMonopole { center: p, residue: 1.0 };
        let x = p + Point::new(0.0, 2.0, 0.0);
        let c = fd_curvature(&mono, &x, &FdScheme::new(1e-3));
        let s = crate::monopole::sigma_hat(&x, &p).unwrap();
        let radial = inner(&s, &c.star_f[1]);
        assert!((radial - 0.25).abs() < 1e-6);
    }

    #[test]
    fn d_of_zero_is_zero() {
        let bg = ScaledMonopole::unit();
        let v = apply_d(&ZeroPair, &bg, &Point::new(0.3, 0.1, -0.4), &FdScheme::default());
        assert_eq!(v, CPairValue::ZERO);
    }

    #[test]
    fn d_dagger_is_d_with_negated_higgs() {
        let bg = ScaledMonopole::unit();
        let neg = |x: &Point| {
            let s = bg.sample(x);
            FieldSample { a: s.a, phi: -s.phi }
        };
        let q = BumpPair::random(Point::zeros(), 2.0, 5);
        let x = Point::new(0.4, -0.3, 0.2);
        let fd = FdScheme::default();
        let a = apply_d_dagger(&q, &bg, &x, &fd);
        let b = apply_d(&q, &neg, &x, &fd);
        assert!((a - b).norm() < 1e-14);
    }

    #[test]
    fn hash_is_symmetric_and_vanishes_on_zero() {
        let q = BumpPair::random(Point::zeros(), 2.0, 1).eval(&Point::new(0.1, 0.2, 0.3));
        let q2 = BumpPair::random(Point::zeros(), 2.0, 2).eval(&Point::new(0.1, 0.2, 0.3));
        assert_eq!(hash(&q, &q2), hash(&q2, &q));
        assert_eq!(hash(&q, &CPairValue::ZERO), CPairValue::ZERO);
        // on the diagonal this is *(α∧α) − [α, η]
        let diag = hash(&q, &q);
        let expect = wedge_dual(&q.alpha, &q.alpha) * 0.5 - bracket_form(&q.alpha, &q.eta);
        assert!((diag.alpha - expect).norm() < 1e-15);
    }

    #[test]
    fn linearization_of_residual_is_d() {
        // *F_{A+tα} − d_{A+tα}(Φ+tη) = g + t·D(α,η) + O(t²)
        let bg = ScaledMonopole::unit();
        let q = BumpPair::random(Point::new(0.2, 0.0, 0.1), 2.5, 9);
        let x = Point::new(0.5, 0.4, -0.3);
        let fd = FdScheme::new(1e-3);
        let g = fd_residual(&bg, &x, &fd);
        let d = apply_d(&q, &bg, &x, &fd).alpha;
        let err = |t: f64| {
            let scaled = |y: &Point| q.eval(y) * t;
            let lhs = fd_residual(&Deformed { base: &bg, delta: &scaled }, &x, &fd);
            (lhs - g - d * t).norm()
        };
        let (e1, e2) = (err(1e-2), err(5e-3));
        assert!(e1 < 1e-3);
        assert!((e1 / e2 - 4.0).abs() < 0.2, "{}", e1 / e2);
    }

    #[test]
    fn deformation_identity_zero_element() {
        let bg = ScaledMonopole::unit();
        assert!(deformation_identity(&ZeroPair, &bg, &Point::new(0.3, 0.2, 0.1), &FdScheme::default()) < 1e-12);
    }

    #[test]
    fn deformation_identity_on_ps_background() {
        let bg = ScaledMonopole::unit();
        let q = BumpPair::random(Point::new(0.1, -0.2, 0.0), 3.0, 21);
        for (i, h) in [1e-2, 1e-3, 1e-4].into_iter().enumerate() {
            let x = Point::new(0.3 + 0.1 * i as f64, -0.5, 0.7);
            let c = deformation_check(&q, &bg, &x, &FdScheme::new(h));
            assert!(c.relative_defect() < 1e-9, "h={h}: {}", c.relative_defect());
        }
    }

    #[test]
    fn deformation_identity_ignores_constant_eta_shift_on_flat_background() {
        let bg = flat(0.0);
        let x = Point::new(0.2, 0.3, 0.1);
        let fd = FdScheme::default();
        let base = |y: &Point| {
            let v = BumpPair::random(Point::zeros(), 2.0, 4).eval(y);
            CPairValue { alpha: AlgOneForm::ZERO, eta: v.eta }
        };
        let shifted = |y: &Point| {
            let mut v = base(y);
            v.eta[2] += 3.0;
            v
        };
        let d0 = deformation_identity(&base, &bg, &x, &fd);
        let d1 = deformation_identity(&shifted, &bg, &x, &fd);
        assert!((d0 - d1).abs() < 1e-12);
    }

    #[test]
    fn weitzenbock_flat_constant() {
        let bg = flat(1.3);
        let u = |_: &Point| CPairValue {
            alpha: AlgOneForm::from_table([[0.1, 0.2, 0.3], [-0.4, 0.5, 0.6], [0.7, -0.8, 0.9]]),
            eta: AlgVec::new(0.3, -0.2, 0.1),
        };
        let c = weitzenbock_check(&u, &bg, &Point::new(1.0, 2.0, 3.0), &FdScheme::default());
        assert!(c.defect() < 1e-10);
        assert!((c.dd_dagger - c.potential).norm() < 1e-10);
    }

    #[test]
    fn weitzenbock_on_ps_is_second_order() {
        let bg = ScaledMonopole::unit();
        let u = BumpPair::random(Point::new(0.2, 0.1, -0.1), 3.0, 13);
        let x = Point::new(0.6, -0.4, 0.5);
        let d1 = weitzenbock_defect(&u, &bg, &x, &FdScheme::new(2e-2));
        let d2 = weitzenbock_defect(&u, &bg, &x, &FdScheme::new(1e-2));
        assert!(d1 < 1e-2, "{d1}");
        let ratio = d1 / d2;
        assert!((3.5..=4.5).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn dd_dagger_is_flat_laplacian_without_higgs() {
        let bg = flat(0.0);
        let u = BumpPair::random(Point::zeros(), 2.0, 3);
        let x = Point::new(0.3, -0.2, 0.4);
        let fd = FdScheme::new(1e-2);
        let c = weitzenbock_check(&u, &bg, &x, &fd);
        // independent 7-point Laplacian with step 2h
        let h = 2.0 * fd.h;
        let mut lap = u.eval(&x) * (-6.0);
        for j in 0..3 {
            let mut e = Point::zeros();
            e[j] = h;
            lap = lap + u.eval(&(x + e)) + u.eval(&(x - e));
        }
        let neg_lap = lap * (-1.0 / (h * h));
        assert!((c.dd_dagger - neg_lap).norm() < 1e-10 * neg_lap.norm().max(1.0));
    }

    #[test]
    fn adjointness_on_flat_background() {
        let bg = flat(0.8);
        let q = BumpPair::random(Point::new(0.1, 0.0, -0.1), 1.0, 31);
        let q2 = BumpPair::random(Point::new(-0.1, 0.2, 0.0), 1.0, 32);
        let quad = BoxQuadrature { center: Point::zeros(), half_width: 1.5, nodes_per_axis: 8, panels: 12 };
        let fd = FdScheme::default();
        let g = adjointness_gap(&q, &q2, &bg, &quad, &fd).unwrap();
        assert!(g.relative() < 1e-6, "{g:?}");
        let (nq, nq2) = (q.clone().scaled(-1.0), q2.clone().scaled(-1.0));
        let gn = adjointness_gap(&nq, &nq2, &bg, &quad, &fd).unwrap();
        assert!((gn.gap() - g.gap()).abs() < 1e-12);
        let z = adjointness_gap(&ZeroPairBump(q.clone()), &q2, &bg, &quad, &fd).unwrap();
        assert_eq!(z.forward, 0.0);
    }

    struct ZeroPairBump(BumpPair);
    impl CPair for ZeroPairBump {
        fn eval(&self, _: &Point) -> CPairValue {
            CPairValue::ZERO
        }
        fn support(&self) -> Option<Support> {
            self.0.support()
        }
    }

    #[test]
    fn adjointness_rejects_support_on_boundary() {
        let bg = flat(0.0);
        let q = BumpPair::random(Point::new(1.0, 0.0, 0.0), 1.0, 1);
        let quad = BoxQuadrature { center: Point::zeros(), half_width: 1.5, nodes_per_axis: 8, panels: 1 };
        assert!(matches!(adjointness_gap(&q, &q, &bg, &quad, &FdScheme::default()), Err(Error::InvalidParameter(_))));
    }
}
