//! Sparse multivariate polynomials and the exact harmonic calculus on them.
//!
//! Monomials pack one exponent byte per variable into a `u64` (at most 8
//! variables — ambient dimensions up to R^8), so monomial multiplication is a
//! single integer add and term lists stay sorted under the operations that
//! shift exponents uniformly.  Coefficients are generic over [`Scalar`].
//!
//! The harmonic layer implements the classical decomposition of a homogeneous
//! polynomial p of degree d in N variables,
//!
//!   p = sum_j |x|^{2j} h_{d-2j},   with each h harmonic,
//!
//! by exact linear algebra on repeated Laplacians: since
//! Delta(|x|^{2j} h_m) = 2j(2m + N + 2j - 2) |x|^{2(j-1)} h_m for harmonic h_m,
//! the top Laplacian isolates the lowest component and the rest follow by
//! back-substitution with integer constants.  Reducing modulo |x|^2 = 1 (the
//! sphere) then just drops the |x|^{2j} factors.  Everything stays in exact
//! arithmetic for exact scalars; the same code runs in floating mode.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::scalar::{Scalar, C64};

/// Hard cap on the number of polynomial variables (ambient dimension).
pub const MAX_VARS: usize = 8;

/// Packed exponent vector: byte `i` of the `u64` is the exponent of `x_{i+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono(pub u64);

impl Mono {
    pub const ONE: Mono = Mono(0);

    pub fn from_exps(exps: &[u32]) -> Self {
        assert!(exps.len() <= MAX_VARS);
        let mut v = 0u64;
        for (i, &e) in exps.iter().enumerate() {
            assert!(e < 256, "exponent overflow");
            v |= (e as u64) << (8 * i);
        }
        Mono(v)
    }

    pub fn var(i: usize) -> Self {
        assert!(i < MAX_VARS);
        Mono(1u64 << (8 * i))
    }

    #[inline]
    pub fn exp(&self, i: usize) -> u32 {
        ((self.0 >> (8 * i)) & 0xff) as u32
    }

    pub fn exps(&self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exp(i)).collect()
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.0.to_le_bytes().iter().map(|&b| b as u32).sum()
    }

    /// Product of monomials; lanes must not overflow (degrees stay tiny here).
    #[inline]
    pub fn mul(&self, o: &Mono) -> Mono {
        debug_assert!(self.degree() + o.degree() < 200);
        Mono(self.0 + o.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Poly<S> {
    nvars: usize,
    /// Sorted by monomial, no zero coefficients, no duplicates.
    terms: Vec<(Mono, S)>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(nvars: usize) -> Self {
        assert!(nvars >= 1 && nvars <= MAX_VARS);
        Poly {
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut p = Poly::zero(nvars);
        if !c.is_zero() {
            p.terms.push((Mono::ONE, c));
        }
        p
    }

    /// The coordinate polynomial x_{i+1}.
    pub fn var(nvars: usize, i: usize) -> Self {
        assert!(i < nvars);
        let mut p = Poly::zero(nvars);
        p.terms.push((Mono::var(i), S::one()));
        p
    }

    pub fn from_terms(nvars: usize, terms: Vec<(Mono, S)>) -> Self {
        let mut p = Poly {
            nvars,
            terms,
        };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        self.terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Mono, S)> = Vec::with_capacity(self.terms.len());
        for (m, c) in self.terms.drain(..) {
            match out.last_mut() {
                Some((lm, lc)) if *lm == m => {
                    lc.add_assign(&c);
                }
                _ => out.push((m, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        self.terms = out;
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Mono, S)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Mono) -> S {
        match self.terms.binary_search_by(|(tm, _)| tm.cmp(&m)) {
            Ok(idx) => self.terms[idx].1.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.abs()).fold(0.0, f64::max)
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < o.terms.len() {
            match self.terms[i].0.cmp(&o.terms[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(self.terms[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(o.terms[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = self.terms[i].1.add(&o.terms[j].1);
                    if !c.is_zero() {
                        out.push((self.terms[i].0, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend(o.terms[j..].iter().cloned());
        Poly {
            nvars: self.nvars,
            terms: out,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        if s.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, c.mul(s))).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.nvars, o.nvars);
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                terms.push((ma.mul(mb), ca.mul(cb)));
            }
        }
        Poly::from_terms(self.nvars, terms)
    }

    /// Multiply by the single monomial `m` with coefficient `c`; order-preserving.
    pub fn mul_term(&self, m: Mono, c: &S) -> Self {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(tm, tc)| (tm.mul(&m), tc.mul(c)))
                .collect(),
        }
    }

    /// Multiply by the coordinate x_{i+1}.
    pub fn mul_var(&self, i: usize) -> Self {
        self.mul_term(Mono::var(i), &S::one())
    }

    /// Multiply by |x|^2.
    pub fn mul_r2(&self) -> Self {
        let mut acc = Poly::zero(self.nvars);
        for i in 0..self.nvars {
            acc = acc.add(&self.mul_var(i).mul_var(i));
        }
        acc
    }

    /// Partial derivative with respect to x_{i+1}; order-preserving.
    pub fn derivative(&self, i: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(m, _)| m.exp(i) > 0)
            .map(|(m, c)| {
                let e = m.exp(i);
                (Mono(m.0 - (1u64 << (8 * i))), c.mul(&S::from_int(e as i64)))
            })
            .collect();
        Poly {
            nvars: self.nvars,
            terms,
        }
    }

    pub fn laplacian(&self) -> Self {
        let mut acc = Poly::zero(self.nvars);
        for i in 0..self.nvars {
            acc = acc.add(&self.derivative(i).derivative(i));
        }
        acc
    }

    /// Pull back along x -> -x: flips the sign of odd-degree terms.
    pub fn reflect(&self) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    if m.degree() % 2 == 0 {
                        (*m, c.clone())
                    } else {
                        (*m, c.neg())
                    }
                })
                .collect(),
        }
    }

    /// Conjugate all coefficients (the polynomial x -> conj(p(x)) on real x).
    pub fn conj(&self) -> Self {
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (*m, c.conj())).collect(),
        }
    }

    pub fn evaluate(&self, x: &[f64]) -> C64 {
        assert_eq!(x.len(), self.nvars);
        let mut acc = C64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut v = 1.0f64;
            for i in 0..self.nvars {
                let e = m.exp(i);
                if e > 0 {
                    v *= x[i].powi(e as i32);
                }
            }
            acc += c.to_c64() * v;
        }
        acc
    }

    /// Split into homogeneous components, ascending in degree.
    pub fn homogeneous_components(&self) -> Vec<(u32, Poly<S>)> {
        let mut map: std::collections::BTreeMap<u32, Vec<(Mono, S)>> = Default::default();
        for (m, c) in &self.terms {
            map.entry(m.degree()).or_default().push((*m, c.clone()));
        }
        map.into_iter()
            .map(|(d, terms)| {
                (
                    d,
                    Poly {
                        nvars: self.nvars,
                        terms,
                    },
                )
            })
            .collect()
    }

    /// Harmonic decomposition of a homogeneous polynomial of degree `d`:
    /// returns the harmonic pieces `h_{d-2j}` (degree, polynomial), highest
    /// degree first, such that `self = sum_j |x|^{2j} h_{d-2j}`.
    pub fn harmonic_decompose_homogeneous(&self, d: u32) -> Vec<(u32, Poly<S>)> {
        debug_assert!(self
            .terms
            .iter()
            .all(|(m, _)| m.degree() == d));
        if self.is_zero() {
            return Vec::new();
        }
        let nn = self.nvars as i64;
        let j_max = (d / 2) as usize;
        // laps[k] = Delta^k self
        let mut laps = Vec::with_capacity(j_max + 1);
        laps.push(self.clone());
        for k in 0..j_max {
            let next = laps[k].laplacian();
            laps.push(next);
        }
        // c(j, k) = prod_{i=0}^{k-1} 2(j-i) (2(d-2j) + N + 2(j-i) - 2)
        let coeff = |j: usize, k: usize| -> i64 {
            let m = d as i64 - 2 * j as i64;
            let mut c = 1i64;
            for i in 0..k {
                let ji = (j - i) as i64;
                c *= 2 * ji * (2 * m + nn + 2 * ji - 2);
            }
            c
        };
        let mut components: Vec<Option<Poly<S>>> = vec![None; j_max + 1];
        for k in (0..=j_max).rev() {
            let mut h = laps[k].clone();
            for j in (k + 1)..=j_max {
                if let Some(hj) = &components[j] {
                    if hj.is_zero() {
                        continue;
                    }
                    let mut power = hj.clone();
                    for _ in 0..(j - k) {
                        power = power.mul_r2();
                    }
                    h = h.sub(&power.scale(&S::from_int(coeff(j, k))));
                }
            }
            let ckk = coeff(k, k);
            components[k] = Some(h.scale(&S::from_ratio(1, ckk)));
        }
        let mut out = Vec::new();
        for (k, h) in components.into_iter().enumerate() {
            let h = h.unwrap();
            if !h.is_zero() {
                out.push((d - 2 * k as u32, h));
            }
        }
        out
    }

    /// Canonical form modulo |x|^2 = 1: each homogeneous component is
    /// decomposed and the |x|^{2j} factors are dropped, leaving a sum of
    /// harmonic homogeneous polynomials of pairwise distinct degrees.
    pub fn reduce_mod_sphere(&self) -> Self {
        let mut acc = Poly::zero(self.nvars);
        for (d, part) in self.homogeneous_components() {
            for (_, h) in part.harmonic_decompose_homogeneous(d) {
                acc = acc.add(&h);
            }
        }
        acc
    }
}

/// All monomials of total degree `d` in `nvars` variables, in increasing
/// packed order (deterministic).
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Mono> {
    fn rec(nvars: usize, var: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Mono>) {
        if var == nvars - 1 {
            cur.push(left);
            out.push(Mono::from_exps(cur));
            cur.pop();
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(nvars, var + 1, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    rec(nvars, 0, d, &mut cur, &mut out);
    out.sort();
    out
}

/// dim of the homogeneous polynomials of degree `d` in `nvars` variables.
pub fn homogeneous_dim(nvars: usize, d: u32) -> usize {
    // C(d + nvars - 1, nvars - 1)
    let mut num = 1usize;
    let mut den = 1usize;
    for i in 1..nvars {
        num *= d as usize + i;
        den *= i;
    }
    num / den
}

/// dim of the harmonic polynomials of degree `d` in `nvars` variables, by the
/// standard combinatorial identity (independent of the kernel computation).
pub fn harmonic_dim(nvars: usize, d: u32) -> usize {
    if d < 2 {
        homogeneous_dim(nvars, d)
    } else {
        homogeneous_dim(nvars, d) - homogeneous_dim(nvars, d - 2)
    }
}

/// Basis of the harmonic homogeneous polynomials of degree `k`, computed as
/// the kernel of the Laplacian restricted to degree-`k` monomial coefficients.
pub fn harmonic_basis<S: Scalar>(nvars: usize, k: u32) -> Vec<Poly<S>> {
    let monos = monomials_of_degree(nvars, k);
    if k < 2 {
        return monos
            .into_iter()
            .map(|m| Poly::from_terms(nvars, vec![(m, S::one())]))
            .collect();
    }
    let lower = monomials_of_degree(nvars, k - 2);
    let lower_idx: std::collections::BTreeMap<Mono, usize> =
        lower.iter().enumerate().map(|(i, m)| (*m, i)).collect();
    let mut lap = crate::matrix::Mat::<S>::zeros(lower.len(), monos.len());
    for (j, m) in monos.iter().enumerate() {
        let p = Poly::from_terms(nvars, vec![(*m, S::one())]).laplacian();
        for (lm, c) in p.terms() {
            let i = lower_idx[lm];
            let cur = lap.get(i, j).add(c);
            lap.set(i, j, cur);
        }
    }
    lap.kernel_basis(S::tol(1e-9))
        .into_iter()
        .map(|v| {
            Poly::from_terms(
                nvars,
                v.into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(j, c)| (monos[j], c))
                    .collect(),
            )
        })
        .collect()
}

fn double_factorial(k: i64) -> BigInt {
    use num_traits::One;
    // (-1)!! = 1 by convention.
    let mut acc = BigInt::one();
    let mut v = k;
    while v > 1 {
        acc *= v;
        v -= 2;
    }
    acc
}

/// Exact moment of a monomial over the unit sphere S^{nvars-1} with the
/// normalized measure:  int x^a dsigma = prod_i (a_i - 1)!! / prod_{t<B} (N + 2t)
/// when every a_i is even (B = sum a_i / 2), and 0 otherwise.
pub fn sphere_moment(nvars: usize, m: Mono) -> BigRational {
    use num_traits::One;
    let mut num = BigInt::one();
    let mut b_total = 0i64;
    for i in 0..nvars {
        let a = m.exp(i) as i64;
        if a % 2 == 1 {
            return BigRational::from_integer(BigInt::from(0));
        }
        num *= double_factorial(a - 1);
        b_total += a / 2;
    }
    let mut den = BigInt::one();
    for t in 0..b_total {
        den *= BigInt::from(nvars as i64 + 2 * t);
    }
    BigRational::new(num, den)
}

/// Normalized L^2(S^{nvars-1}) pairing of two polynomials, conjugate-linear in
/// the first argument; exact through the moment formula.
pub fn sphere_inner<S: Scalar>(a: &Poly<S>, b: &Poly<S>) -> S {
    assert_eq!(a.nvars(), b.nvars());
    let prod = a.conj().mul(b);
    let mut acc = S::zero();
    for (m, c) in prod.terms() {
        let w = sphere_moment(a.nvars(), *m);
        if !num_traits::Zero::is_zero(&w) {
            acc.add_assign(&c.mul(&S::from_big_rational(&w)));
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn x(i: usize) -> Poly<Exact> {
        Poly::var(3, i)
    }

    #[test]
    fn packing_round_trip() {
        let m = Mono::from_exps(&[3, 0, 7]);
        assert_eq!(m.exp(0), 3);
        assert_eq!(m.exp(1), 0);
        assert_eq!(m.exp(2), 7);
        assert_eq!(m.degree(), 10);
        let p = Mono::from_exps(&[1, 2, 0]);
        assert_eq!(m.mul(&p), Mono::from_exps(&[4, 2, 7]));
    }

    #[test]
    fn square_of_binomial() {
        let p = x(0).add(&x(1));
        let sq = p.mul(&p);
        assert_eq!(sq.coeff(Mono::from_exps(&[2, 0, 0])), Exact::from_int(1));
        assert_eq!(sq.coeff(Mono::from_exps(&[1, 1, 0])), Exact::from_int(2));
        assert_eq!(sq.coeff(Mono::from_exps(&[0, 2, 0])), Exact::from_int(1));
        assert_eq!(sq.terms().len(), 3);
    }

    #[test]
    fn derivative_and_laplacian() {
        // p = x1^2 x2: dp/dx1 = 2 x1 x2, Delta p = 2 x2.
        let p = x(0).mul(&x(0)).mul(&x(1));
        let d = p.derivative(0);
        assert_eq!(d.coeff(Mono::from_exps(&[1, 1, 0])), Exact::from_int(2));
        assert_eq!(d.terms().len(), 1);
        let lap = p.laplacian();
        assert_eq!(lap.coeff(Mono::from_exps(&[0, 1, 0])), Exact::from_int(2));
        assert_eq!(lap.terms().len(), 1);
        // Delta |x|^2 = 2N.
        let r2 = Poly::<Exact>::constant(3, Exact::one()).mul_r2();
        assert_eq!(r2.laplacian(), Poly::constant(3, Exact::from_int(6)));
    }

    #[test]
    fn harmonic_split_of_x1_squared() {
        // In 3 variables: x1^2 = (x1^2 - |x|^2/3) + |x|^2 · 1/3.
        let p = x(0).mul(&x(0));
        let parts = p.harmonic_decompose_homogeneous(2);
        assert_eq!(parts.len(), 2);
        let third = Exact::from_ratio(1, 3);
        let r2 = Poly::<Exact>::constant(3, Exact::one()).mul_r2();
        let h2 = p.sub(&r2.scale(&third));
        assert_eq!(parts[0], (2, h2.clone()));
        assert_eq!(parts[1], (0, Poly::constant(3, third.clone())));
        // Laplacian-kernel oracle: the top component is harmonic.
        assert!(h2.laplacian().is_zero());
        // Reduction replaces |x|^2 by 1.
        let reduced = p.reduce_mod_sphere();
        assert_eq!(reduced, h2.add(&Poly::constant(3, third)));
    }

    #[test]
    fn reduction_kills_r2_factors() {
        let one = Poly::<Exact>::constant(3, Exact::one());
        let r2 = one.mul_r2();
        assert_eq!(r2.reduce_mod_sphere(), one);
        assert_eq!(r2.mul(&r2).reduce_mod_sphere(), one);
        let p = x(0).mul(&x(1));
        assert_eq!(p.mul(&r2).reduce_mod_sphere(), p);
    }

    #[test]
    fn decomposition_reconstructs_and_is_harmonic() {
        // A messy homogeneous quartic in 4 variables.
        let y = |i| Poly::<Exact>::var(4, i);
        let p = y(0)
            .mul(&y(0))
            .mul(&y(1))
            .mul(&y(2))
            .add(&y(3).mul(&y(3)).mul(&y(3)).mul(&y(0)).scale(&Exact::from_int(3)))
            .add(&y(1).mul(&y(1)).mul(&y(1)).mul(&y(1)).scale(&Exact::from_int(-2)));
        let parts = p.harmonic_decompose_homogeneous(4);
        // Oracle: each component harmonic, and the sum with |x|^{2j} factors
        // restores the original exactly.
        let mut rebuilt = Poly::<Exact>::zero(4);
        for (deg, h) in &parts {
            assert!(h.laplacian().is_zero(), "component of degree {deg} not harmonic");
            let mut lifted = h.clone();
            let mut d = *deg;
            while d < 4 {
                lifted = lifted.mul_r2();
                d += 2;
            }
            rebuilt = rebuilt.add(&lifted);
        }
        assert_eq!(rebuilt, p);
    }

    #[test]
    fn reduction_agrees_pointwise_on_sphere() {
        let p = x(0)
            .mul(&x(0))
            .mul(&x(2))
            .add(&x(1).scale(&Exact::from_ratio(5, 7)));
        let red = p.reduce_mod_sphere();
        // A few explicit unit vectors, no RNG needed.
        let pts: [[f64; 3]; 4] = [
            [1.0, 0.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.6, 0.8, 0.0],
            [2.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0],
        ];
        for pt in pts {
            let a = p.evaluate(&pt);
            let b = red.evaluate(&pt);
            assert!((a - b).norm() < 1e-12, "mismatch at {pt:?}");
        }
    }

    #[test]
    fn harmonic_basis_dimensions() {
        for (nvars, dims) in [(3usize, [1usize, 3, 5, 7]), (4, [1, 4, 9, 16])] {
            for (k, want) in dims.iter().enumerate() {
                let basis = harmonic_basis::<Exact>(nvars, k as u32);
                assert_eq!(basis.len(), *want, "N={nvars} k={k}");
                assert_eq!(harmonic_dim(nvars, k as u32), *want);
                for h in &basis {
                    assert!(h.laplacian().is_zero());
                    assert_eq!(h.degree(), k as u32);
                }
            }
        }
    }

    #[test]
    fn sphere_moments_match_known_values() {
        use num_traits::Zero;
        let one = BigRational::from_integer(1.into());
        assert_eq!(sphere_moment(3, Mono::ONE), one);
        // int x1^2 = 1/N
        assert_eq!(
            sphere_moment(3, Mono::from_exps(&[2, 0, 0])),
            BigRational::new(1.into(), 3.into())
        );
        // circle: int cos^4 = 3/8
        assert_eq!(
            sphere_moment(2, Mono::from_exps(&[4, 0])),
            BigRational::new(3.into(), 8.into())
        );
        // S^2: int x^2 y^2 = 1/15
        assert_eq!(
            sphere_moment(3, Mono::from_exps(&[2, 2, 0])),
            BigRational::new(1.into(), 15.into())
        );
        assert!(sphere_moment(3, Mono::from_exps(&[1, 2, 0])).is_zero());
    }

    #[test]
    fn inner_product_separates_degrees() {
        // Harmonics of distinct degrees are L2-orthogonal.
        let h1 = harmonic_basis::<Exact>(3, 1);
        let h2 = harmonic_basis::<Exact>(3, 2);
        for a in &h1 {
            for b in &h2 {
                assert!(sphere_inner(a, b).is_zero());
            }
        }
        // And the pairing is positive on nonzero polynomials.
        let p = h2[0].clone();
        let norm = sphere_inner(&p, &p);
        assert!(norm.to_c64().re > 0.0);
    }
}
