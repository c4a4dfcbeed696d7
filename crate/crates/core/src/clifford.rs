//! Complex Clifford algebras in their monomial basis.
//!
//! The algebra on generators e_1, ..., e_n is taken with the relation
//! v·w + w·v = -2<v,w>, so every generator squares to -1.  A basis monomial
//! e_A = e_{i_1}···e_{i_k} (indices strictly increasing) is stored as the
//! bitmask of A; the full basis has 2^n elements.  Products are computed by
//! counting the transpositions needed to interleave two sorted index lists,
//! with each repeated generator contributing the metric sign -1:
//!
//!   e_A · e_B = sign(A, B) · e_{A xor B}.
//!
//! The canonical involution alpha sends e_A to (-1)^{|A|} e_A; it is the
//! algebra automorphism induced by v -> -v on generators.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub const MAX_GENERATORS: usize = 12;

/// The algebra itself is determined by its generator count; the multiplication
/// table is the pure function [`CliffordAlgebra::monomial_product`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CliffordAlgebra {
    n: usize,
}

/// Number of transpositions (mod 2) needed to move the generators of `a` past
/// those of `b` when concatenating a·b into a single ascending product.
fn reorder_sign(a: u32, b: u32) -> i32 {
    let mut a = a >> 1;
    let mut swaps = 0u32;
    while a != 0 {
        swaps += (a & b).count_ones();
        a >>= 1;
    }
    if swaps % 2 == 0 {
        1
    } else {
        -1
    }
}

impl CliffordAlgebra {
    pub fn build(n: usize) -> Result<Self> {
        if n < 1 || n > MAX_GENERATORS {
            return Err(Error::SizeOutOfRange {
                what: "Clifford algebra generators",
                n,
                min: 1,
                max: MAX_GENERATORS,
            });
        }
        Ok(CliffordAlgebra { n })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension of the algebra as a vector space.
    pub fn dim(&self) -> usize {
        1 << self.n
    }

    /// All basis masks in ascending order: 0 is the unit, 1<<i is e_{i+1}.
    pub fn monomials(&self) -> impl Iterator<Item = u32> {
        0..(1u32 << self.n)
    }

    /// `e_A · e_B = sign · e_{A xor B}` with every generator squaring to -1.
    pub fn monomial_product(&self, a: u32, b: u32) -> (i32, u32) {
        debug_assert!(a < (1 << self.n) && b < (1 << self.n));
        let metric = if (a & b).count_ones() % 2 == 0 { 1 } else { -1 };
        (reorder_sign(a, b) * metric, a ^ b)
    }

    /// Grade of a basis monomial.
    pub fn grade(&self, mask: u32) -> u32 {
        mask.count_ones()
    }

    /// Mask of the volume monomial e_1 e_2 ... e_n.
    pub fn volume_mask(&self) -> u32 {
        (1u32 << self.n) - 1
    }
}

/// Element of a Clifford algebra: a finite sum of scalar-weighted monomials.
/// Coefficients are kept in a sorted map so iteration (and serialization) is
/// deterministic; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement<S> {
    n: usize,
    terms: BTreeMap<u32, S>,
}

impl<S: Scalar> AlgebraElement<S> {
    pub fn zero(alg: &CliffordAlgebra) -> Self {
        AlgebraElement {
            n: alg.n(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(alg: &CliffordAlgebra) -> Self {
        Self::monomial(alg, 0, S::one())
    }

    /// Generator e_i, 1-based.
    pub fn generator(alg: &CliffordAlgebra, i: usize) -> Self {
        assert!(i >= 1 && i <= alg.n(), "generator index out of range");
        Self::monomial(alg, 1 << (i - 1), S::one())
    }

    pub fn monomial(alg: &CliffordAlgebra, mask: u32, coeff: S) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(mask, coeff);
        }
        AlgebraElement { n: alg.n(), terms }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &S)> {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn coeff(&self, mask: u32) -> S {
        self.terms.get(&mask).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).fold(0.0, f64::max)
    }

    fn insert(&mut self, mask: u32, coeff: S) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mask) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().add(&coeff);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let mut out = self.clone();
        for (m, c) in o.terms() {
            out.insert(m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let mut out = self.clone();
        for (m, c) in o.terms() {
            out.insert(m, c.neg());
        }
        Ok(out)
    }

    pub fn scale(&self, s: &S) -> Self {
        let mut out = AlgebraElement {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (m, c) in self.terms() {
            out.insert(m, c.mul(s));
        }
        out
    }

    /// Bilinear product through the monomial table.
    pub fn multiply(&self, o: &Self, alg: &CliffordAlgebra) -> Result<Self> {
        self.check_same(o)?;
        if self.n != alg.n() {
            return Err(Error::AlgebraMismatch {
                left: self.n,
                right: alg.n(),
            });
        }
        let mut out = AlgebraElement {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (ma, ca) in self.terms() {
            for (mb, cb) in o.terms() {
                let (sign, mask) = alg.monomial_product(ma, mb);
                let mut c = ca.mul(cb);
                if sign < 0 {
                    c = c.neg();
                }
                out.insert(mask, c);
            }
        }
        Ok(out)
    }

    /// Canonical involution alpha: e_A -> (-1)^{|A|} e_A.
    pub fn involution_alpha(&self) -> Self {
        let mut out = AlgebraElement {
            n: self.n,
            terms: BTreeMap::new(),
        };
        for (m, c) in self.terms() {
            if m.count_ones() % 2 == 0 {
                out.insert(m, c.clone());
            } else {
                out.insert(m, c.neg());
            }
        }
        out
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.n != o.n {
            return Err(Error::AlgebraMismatch {
                left: self.n,
                right: o.n,
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    type E = AlgebraElement<Exact>;

    #[test]
    fn generators_square_to_minus_one() {
        for n in 1..=6 {
            let alg = CliffordAlgebra::build(n).unwrap();
            for i in 1..=n {
                let e = E::generator(&alg, i);
                let sq = e.multiply(&e, &alg).unwrap();
                let expect = E::one(&alg).scale(&Exact::from_int(-1));
                assert_eq!(sq, expect, "e_{i}^2 != -1 at n={n}");
            }
        }
    }

    #[test]
    fn generators_anticommute() {
        let alg = CliffordAlgebra::build(4).unwrap();
        for i in 1..=4 {
            for j in 1..=4 {
                if i == j {
                    continue;
                }
                let ei = E::generator(&alg, i);
                let ej = E::generator(&alg, j);
                let lhs = ei.multiply(&ej, &alg).unwrap();
                let rhs = ej.multiply(&ei, &alg).unwrap().scale(&Exact::from_int(-1));
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn sample_products() {
        let alg = CliffordAlgebra::build(3).unwrap();
        let one = E::one(&alg);
        let e1 = E::generator(&alg, 1);

        // (1 + e1)(1 - e1) = 1 - e1^2 = 2
        let a = one.add(&e1).unwrap();
        let b = one.sub(&e1).unwrap();
        let p = a.multiply(&b, &alg).unwrap();
        assert_eq!(p, one.scale(&Exact::from_int(2)));

        // e1 · (e1 e2) = -e2
        let e12 = E::monomial(&alg, 0b11, Exact::one());
        let q = e1.multiply(&e12, &alg).unwrap();
        assert_eq!(q, E::generator(&alg, 2).scale(&Exact::from_int(-1)));
    }

    #[test]
    fn product_of_orthogonal_unit_vectors_squares_to_minus_one() {
        // x = e1, t = e2 orthogonal unit vectors: (x·t)^2 = -1.
        let alg = CliffordAlgebra::build(2).unwrap();
        let x = E::generator(&alg, 1);
        let t = E::generator(&alg, 2);
        let xt = x.multiply(&t, &alg).unwrap();
        let sq = xt.multiply(&xt, &alg).unwrap();
        assert_eq!(sq, E::one(&alg).scale(&Exact::from_int(-1)));
    }

    #[test]
    fn volume_square_alternates_with_k() {
        // For n = 2k+1: (e_1···e_n)^2 = (-1)^{k+1}.
        for (n, expect) in [(1usize, -1i64), (3, 1), (5, -1), (7, 1)] {
            let alg = CliffordAlgebra::build(n).unwrap();
            let vol = E::monomial(&alg, alg.volume_mask(), Exact::one());
            let sq = vol.multiply(&vol, &alg).unwrap();
            assert_eq!(sq, E::one(&alg).scale(&Exact::from_int(expect)), "n = {n}");
        }
    }

    #[test]
    fn associativity_exhaustive_small() {
        for n in 1..=4 {
            let alg = CliffordAlgebra::build(n).unwrap();
            for a in alg.monomials() {
                for b in alg.monomials() {
                    let (s_ab, m_ab) = alg.monomial_product(a, b);
                    for c in alg.monomials() {
                        let (s1, m1) = alg.monomial_product(m_ab, c);
                        let (s_bc, m_bc) = alg.monomial_product(b, c);
                        let (s2, m2) = alg.monomial_product(a, m_bc);
                        assert_eq!((s_ab * s1, m1), (s_bc * s2, m2));
                    }
                }
            }
        }
    }

    #[test]
    fn alpha_is_involutive_automorphism() {
        let alg = CliffordAlgebra::build(5).unwrap();
        // alpha(e_A e_B) = alpha(e_A) alpha(e_B) over all monomial pairs,
        // and alpha(alpha(x)) = x.
        for a in alg.monomials() {
            let ea = E::monomial(&alg, a, Exact::one());
            assert_eq!(ea.involution_alpha().involution_alpha(), ea);
            for b in alg.monomials() {
                let eb = E::monomial(&alg, b, Exact::one());
                let lhs = ea.multiply(&eb, &alg).unwrap().involution_alpha();
                let rhs = ea
                    .involution_alpha()
                    .multiply(&eb.involution_alpha(), &alg)
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn alpha_fixes_even_and_negates_odd() {
        let alg = CliffordAlgebra::build(3).unwrap();
        let e1 = E::generator(&alg, 1);
        assert_eq!(e1.involution_alpha(), e1.scale(&Exact::from_int(-1)));
        let e12 = E::monomial(&alg, 0b11, Exact::one());
        assert_eq!(e12.involution_alpha(), e12);
        let vol = E::monomial(&alg, 0b111, Exact::one());
        assert_eq!(vol.involution_alpha(), vol.scale(&Exact::from_int(-1)));
    }

    #[test]
    fn size_limits_enforced() {
        assert!(CliffordAlgebra::build(0).is_err());
        assert!(CliffordAlgebra::build(13).is_err());
        assert!(CliffordAlgebra::build(12).is_ok());
    }

    #[test]
    fn mixed_algebra_operations_rejected() {
        let a2 = CliffordAlgebra::build(2).unwrap();
        let a3 = CliffordAlgebra::build(3).unwrap();
        let x = E::generator(&a2, 1);
        let y = E::generator(&a3, 1);
        assert!(matches!(
            x.multiply(&y, &a2),
            Err(Error::AlgebraMismatch { .. })
        ));
        assert!(x.add(&y).is_err());
    }
}
