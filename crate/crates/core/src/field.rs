//! Polynomial spinor fields and vector fields on Sⁿ ⊂ ℝ^{n+1}.
//!
//! A spinor field is stored as a vector of polynomials in the ambient
//! coordinates x₁, …, x_{n+1}, one per component of the spinor module Δ
//! (dim Δ = 2^{⌊(n+1)/2⌋}).  Restriction to the sphere identifies two
//! polynomials iff they differ by a multiple of |x|² − 1, so every field has
//! a canonical representative with harmonic homogeneous components of
//! pairwise distinct degrees; [`PolySpinorField::harmonic_reduce`] computes
//! it.  Vector fields carry n+1 polynomial coefficients; the tangent ones
//! satisfy ⟨V, x⟩ ≡ 0 mod (|x|² − 1), e.g. the projected coordinate fields
//! V_a = ε_a − x_a x which frame TSⁿ redundantly.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::gamma::MatrixRep;
use crate::matrix::Mat;
use crate::poly::{harmonic_basis, harmonic_dim, Poly};
use crate::scalar::{Scalar, C64};

/// Spinor module dimension over Sⁿ: 2^{⌊(n+1)/2⌋}.
pub fn spinor_dim(n: usize) -> usize {
    1 << ((n + 1) / 2)
}

/// Hard cap on the number of basis fields a degree window may request.
pub const BASIS_CAP: usize = 20_000;

const POINT_TOL: f64 = 1e-12;

/// A point of Sⁿ, validated to lie on the unit sphere of ℝ^{n+1}.
#[derive(Debug, Clone, PartialEq)]
pub struct SpherePoint {
    coords: Vec<f64>,
}

impl SpherePoint {
    /// Checks | |x|² − 1 | ≤ 1e−12.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let norm2: f64 = coords.iter().map(|c| c * c).sum();
        let defect = (norm2 - 1.0).abs();
        if defect > POINT_TOL {
            return Err(Error::NotOnSphere {
                defect,
                tol: POINT_TOL,
            });
        }
        Ok(SpherePoint { coords })
    }

    /// The a-th standard basis point ε_a (0-based) of Sⁿ ⊂ ℝ^{n+1}.
    pub fn basis(n: usize, a: usize) -> Self {
        let mut coords = vec![0.0; n + 1];
        coords[a] = 1.0;
        SpherePoint { coords }
    }

    /// Uniform random point, by normalizing a standard Gaussian vector.
    pub fn random<R: Rng>(n: usize, rng: &mut R) -> Self {
        loop {
            let coords: Vec<f64> = (0..n + 1).map(|_| rng.sample(StandardNormal)).collect();
            let norm: f64 = coords.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm > 1e-6 {
                return SpherePoint {
                    coords: coords.iter().map(|c| c / norm).collect(),
                };
            }
        }
    }

    pub fn antipode(&self) -> Self {
        SpherePoint {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Sphere dimension n (one less than the ambient dimension).
    pub fn n(&self) -> usize {
        self.coords.len() - 1
    }
}

/// A polynomial vector field on ℝ^{n+1}, one coefficient per ambient axis.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField<S> {
    n: usize,
    comps: Vec<Poly<S>>,
}

impl<S: Scalar> VectorField<S> {
    /// No tangency requirement; use [`new_tangent`](Self::new_tangent) when
    /// the field must be tangent to the sphere.
    pub fn new(n: usize, comps: Vec<Poly<S>>) -> Self {
        assert_eq!(comps.len(), n + 1, "vector field needs n+1 components");
        for c in &comps {
            assert_eq!(c.nvars(), n + 1);
        }
        VectorField { n, comps }
    }

    /// Requires ⟨V, x⟩ ≡ 0 mod (|x|² − 1).
    pub fn new_tangent(n: usize, comps: Vec<Poly<S>>) -> Result<Self> {
        let v = VectorField::new(n, comps);
        let defect = v.tangency_defect();
        let tol = S::tol(1e-9);
        if defect > tol {
            return Err(Error::NotTangent { defect, tol });
        }
        Ok(v)
    }

    /// Largest coefficient magnitude of ⟨V, x⟩ reduced mod the sphere.
    pub fn tangency_defect(&self) -> f64 {
        let mut ip = Poly::zero(self.n + 1);
        for (a, c) in self.comps.iter().enumerate() {
            ip = ip.add(&c.mul_var(a));
        }
        ip.reduce_mod_sphere().max_abs()
    }

    /// The position field x (not tangent).
    pub fn position(n: usize) -> Self {
        let comps = (0..n + 1).map(|a| Poly::var(n + 1, a)).collect();
        VectorField { n, comps }
    }

    /// The constant field ε_a (0-based; not tangent).
    pub fn coordinate(n: usize, a: usize) -> Self {
        let mut comps = vec![Poly::zero(n + 1); n + 1];
        comps[a] = Poly::constant(n + 1, S::one());
        VectorField { n, comps }
    }

    /// The projected coordinate field V_a = ε_a − x_a x, tangent mod sphere.
    pub fn projected_coordinate(n: usize, a: usize) -> Self {
        let xa = Poly::<S>::var(n + 1, a);
        let comps = (0..n + 1)
            .map(|b| {
                let mut c = xa.mul(&Poly::var(n + 1, b)).neg();
                if b == a {
                    c = c.add(&Poly::constant(n + 1, S::one()));
                }
                c
            })
            .collect();
        VectorField { n, comps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn comps(&self) -> &[Poly<S>] {
        &self.comps
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.add(b))
            .collect();
        VectorField { n: self.n, comps }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.sub(b))
            .collect();
        VectorField { n: self.n, comps }
    }

    pub fn scale(&self, s: &S) -> Self {
        VectorField {
            n: self.n,
            comps: self.comps.iter().map(|c| c.scale(s)).collect(),
        }
    }

    /// Pointwise inner product ⟨V, W⟩ = Σ_a V_a W_a as a polynomial
    /// (bilinear; geometric fields have real coefficients).
    pub fn inner(&self, other: &Self) -> Poly<S> {
        assert_eq!(self.n, other.n);
        let mut acc = Poly::zero(self.n + 1);
        for (a, b) in self.comps.iter().zip(&other.comps) {
            acc = acc.add(&a.mul(b));
        }
        acc
    }

    /// Lie bracket [V, W]_b = Σ_a (V_a ∂_a W_b − W_a ∂_a V_b).
    pub fn bracket(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let nv = self.n + 1;
        let comps = (0..nv)
            .map(|b| {
                let mut acc = Poly::zero(nv);
                for a in 0..nv {
                    acc = acc.add(&self.comps[a].mul(&other.comps[b].derivative(a)));
                    acc = acc.sub(&other.comps[a].mul(&self.comps[b].derivative(a)));
                }
                acc
            })
            .collect();
        VectorField { n: self.n, comps }
    }

    pub fn evaluate(&self, p: &SpherePoint) -> Vec<C64> {
        assert_eq!(p.n(), self.n);
        self.comps.iter().map(|c| c.evaluate(p.coords())).collect()
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.comps.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }
}

/// A spinor field with polynomial components, Φ: ℝ^{n+1} → Δ.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySpinorField<S> {
    n: usize,
    comps: Vec<Poly<S>>,
}

impl<S: Scalar> PolySpinorField<S> {
    pub fn new(n: usize, comps: Vec<Poly<S>>) -> Self {
        assert_eq!(
            comps.len(),
            spinor_dim(n),
            "spinor field over S^{n} needs 2^{{floor((n+1)/2)}} components"
        );
        for c in &comps {
            assert_eq!(c.nvars(), n + 1);
        }
        PolySpinorField { n, comps }
    }

    pub fn zero(n: usize) -> Self {
        PolySpinorField {
            n,
            comps: vec![Poly::zero(n + 1); spinor_dim(n)],
        }
    }

    /// The constant field with value `spinor`.
    pub fn constant(n: usize, spinor: &[S]) -> Self {
        assert_eq!(spinor.len(), spinor_dim(n));
        let comps = spinor
            .iter()
            .map(|s| Poly::constant(n + 1, s.clone()))
            .collect();
        PolySpinorField { n, comps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.comps.len()
    }

    pub fn comps(&self) -> &[Poly<S>] {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.add(b))
            .collect();
        PolySpinorField { n: self.n, comps }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let comps = self
            .comps
            .iter()
            .zip(&other.comps)
            .map(|(a, b)| a.sub(b))
            .collect();
        PolySpinorField { n: self.n, comps }
    }

    pub fn neg(&self) -> Self {
        PolySpinorField {
            n: self.n,
            comps: self.comps.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        PolySpinorField {
            n: self.n,
            comps: self.comps.iter().map(|c| c.scale(s)).collect(),
        }
    }

    /// Multiply every component by a scalar polynomial.
    pub fn scale_poly(&self, f: &Poly<S>) -> Self {
        PolySpinorField {
            n: self.n,
            comps: self.comps.iter().map(|c| c.mul(f)).collect(),
        }
    }

    pub fn max_coeff_abs(&self) -> f64 {
        self.comps.iter().map(|c| c.max_abs()).fold(0.0, f64::max)
    }

    pub fn evaluate(&self, p: &SpherePoint) -> Vec<C64> {
        assert_eq!(p.n(), self.n);
        self.comps.iter().map(|c| c.evaluate(p.coords())).collect()
    }

    /// Φ ∘ (−id): substitutes x ↦ −x in every component.
    pub fn antipodal_pullback(&self) -> Self {
        PolySpinorField {
            n: self.n,
            comps: self.comps.iter().map(|c| c.reflect()).collect(),
        }
    }

    /// Canonical representative mod (|x|² − 1), componentwise.
    pub fn harmonic_reduce(&self) -> Self {
        PolySpinorField {
            n: self.n,
            comps: self.comps.iter().map(|c| c.reduce_mod_sphere()).collect(),
        }
    }

    /// Flat directional derivative (dΦ)(V) = Σ_a V_a ∂_a Φ, unreduced.
    pub fn directional_derivative(&self, v: &VectorField<S>) -> Self {
        assert_eq!(self.n, v.n());
        let nv = self.n + 1;
        let comps = self
            .comps
            .iter()
            .map(|c| {
                let mut acc = Poly::zero(nv);
                for (a, va) in v.comps().iter().enumerate() {
                    if va.is_zero() {
                        continue;
                    }
                    acc = acc.add(&va.mul(&c.derivative(a)));
                }
                acc
            })
            .collect();
        PolySpinorField { n: self.n, comps }
    }

    /// Clifford multiplication V · Φ = Σ_a V_a (γ_a Φ), unreduced.
    ///
    /// The representation must realize Cliff(n+1) on Δ; components of V are
    /// arbitrary polynomials (the position field gives x · Φ).
    pub fn clifford_mul(&self, v: &VectorField<S>, rep: &MatrixRep<S>) -> Self {
        assert_eq!(self.n, v.n());
        assert_eq!(rep.n(), self.n + 1, "representation must cover Cliff(n+1)");
        assert_eq!(rep.dim(), self.dim());
        let mut acc = PolySpinorField::zero(self.n);
        for (a, va) in v.comps().iter().enumerate() {
            if va.is_zero() {
                continue;
            }
            let gam = apply_matrix(rep.gamma(a + 1), &self.comps);
            for (out, g) in acc.comps.iter_mut().zip(&gam) {
                if g.is_zero() {
                    continue;
                }
                *out = out.add(&g.mul(va));
            }
        }
        acc
    }

    /// L² inner product over the sphere, conjugate-linear in `self`:
    /// Σ_i ∫_{Sⁿ} conj(Φ_i) Ψ_i dσ.  Exact over exact scalars.
    pub fn l2_inner(&self, other: &Self) -> S {
        assert_eq!(self.n, other.n);
        let mut acc = S::zero();
        for (a, b) in self.comps.iter().zip(&other.comps) {
            acc.add_assign(&crate::poly::sphere_inner(a, b));
        }
        acc
    }
}

/// Apply a constant matrix to a vector of polynomials: (M p)_i = Σ_j M_{ij} p_j.
pub fn apply_matrix<S: Scalar>(m: &Mat<S>, comps: &[Poly<S>]) -> Vec<Poly<S>> {
    assert_eq!(m.cols(), comps.len());
    let nvars = comps[0].nvars();
    (0..m.rows())
        .map(|i| {
            let mut acc = Poly::zero(nvars);
            for (j, p) in comps.iter().enumerate() {
                let e = m.get(i, j);
                if e.is_zero() || p.is_zero() {
                    continue;
                }
                acc = acc.add(&p.scale(e));
            }
            acc
        })
        .collect()
}

/// Basis of W_m = ⊕_{k ≤ m} H_k ⊗ Δ: harmonic polynomial times coordinate
/// spinor, ordered degree-major, then harmonic index, then spinor component.
///
/// Errors with [`Error::CombinatorialOverflow`] when the space would exceed
/// [`BASIS_CAP`] fields.
pub fn basis_fields<S: Scalar>(n: usize, m: u32) -> Result<Vec<PolySpinorField<S>>> {
    let nv = n + 1;
    let dim = spinor_dim(n);
    let total: usize = (0..=m).map(|k| harmonic_dim(nv, k) * dim).sum();
    if total > BASIS_CAP {
        return Err(Error::CombinatorialOverflow {
            n,
            m: m as usize,
            size: total,
            cap: BASIS_CAP,
        });
    }
    let mut out = Vec::with_capacity(total);
    for k in 0..=m {
        for h in harmonic_basis::<S>(nv, k) {
            for c in 0..dim {
                let mut comps = vec![Poly::zero(nv); dim];
                comps[c] = h.clone();
                out.push(PolySpinorField { n, comps });
            }
        }
    }
    Ok(out)
}
