//! Concrete matrix models of the complex Clifford algebras.
//!
//! Three constructions, all with entries in {0, ±1, ±i} so that every relation
//! can be checked exactly:
//!
//! * `dirac` (n even): the faithful model on C^{2^{n/2}} built recursively;
//!   given generators g_1..g_{2m} on C^{2^m}, the next stage on C^{2^{m+1}} is
//!   sigma_1 ⊗ g_i together with the two fresh generators i·sigma_2 ⊗ I and
//!   i·sigma_3 ⊗ I.  The base case n = 0 is the scalar algebra.
//! * `pauli` (n odd): the irreducible model on C^{2^{(n-1)/2}}; the first n-1
//!   generators are the dirac ones, and the last is the scaled even-volume
//!   i^{m+1} g_1···g_{2m} (n = 2m+1), which squares to -1 and anticommutes
//!   with the rest.  Not faithful: the full volume acts as a scalar.
//! * `cartan` (n odd): the faithful doubled model diag(g_i, -g_i) on twice the
//!   pauli space, i.e. the pauli model glued to its twist by the canonical
//!   involution.
//!
//! All generators are anti-Hermitian by construction; `verify_skew_adjoint`
//! rechecks that at build time because the Hermitian pairing downstream
//! depends on it.

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RepKind {
    Dirac,
    Pauli,
    Cartan,
}

impl std::fmt::Display for RepKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RepKind::Dirac => write!(f, "dirac"),
            RepKind::Pauli => write!(f, "pauli"),
            RepKind::Cartan => write!(f, "cartan"),
        }
    }
}

/// i^k as a scalar.
/// i^k as a scalar.
pub fn i_power<S: Scalar>(k: u32) -> S {
    match k % 4 {
        0 => S::one(),
        1 => S::i(),
        2 => S::one().neg(),
        _ => S::i().neg(),
    }
}

/// sigma_1 = [[0,1],[1,0]]
fn sigma1<S: Scalar>() -> Mat<S> {
    let mut m = Mat::zeros(2, 2);
    m.set(0, 1, S::one());
    m.set(1, 0, S::one());
    m
}

/// i·sigma_2 = [[0,1],[-1,0]]
fn i_sigma2<S: Scalar>() -> Mat<S> {
    let mut m = Mat::zeros(2, 2);
    m.set(0, 1, S::one());
    m.set(1, 0, S::one().neg());
    m
}

/// i·sigma_3 = [[i,0],[0,-i]]
fn i_sigma3<S: Scalar>() -> Mat<S> {
    let mut m = Mat::zeros(2, 2);
    m.set(0, 0, S::i());
    m.set(1, 1, S::i().neg());
    m
}

/// Anti-Hermitian generators for the even algebra on 2m generators.
fn dirac_generators<S: Scalar>(m: usize) -> Vec<Mat<S>> {
    let mut gammas: Vec<Mat<S>> = Vec::new();
    let mut dim = 1usize;
    for _ in 0..m {
        let s1 = sigma1::<S>();
        let mut next: Vec<Mat<S>> = gammas.iter().map(|g| s1.kron(g)).collect();
        let id = Mat::<S>::identity(dim);
        next.push(i_sigma2::<S>().kron(&id));
        next.push(i_sigma3::<S>().kron(&id));
        gammas = next;
        dim *= 2;
    }
    gammas
}

#[derive(Debug, Clone)]
pub struct MatrixRep<S> {
    n: usize,
    kind: RepKind,
    dim: usize,
    gammas: Vec<Mat<S>>,
}

impl<S: Scalar> MatrixRep<S> {
    pub fn build(n: usize, kind: RepKind) -> Result<Self> {
        if n < 1 || n > crate::clifford::MAX_GENERATORS {
            return Err(Error::SizeOutOfRange {
                what: "matrix representation generators",
                n,
                min: 1,
                max: crate::clifford::MAX_GENERATORS,
            });
        }
        let rep = match kind {
            RepKind::Dirac => {
                if n % 2 != 0 {
                    return Err(Error::ParityMismatch {
                        kind: "dirac",
                        parity: "even",
                        n,
                    });
                }
                let gammas = dirac_generators::<S>(n / 2);
                MatrixRep {
                    n,
                    kind,
                    dim: 1 << (n / 2),
                    gammas,
                }
            }
            RepKind::Pauli => {
                if n % 2 != 1 {
                    return Err(Error::ParityMismatch {
                        kind: "pauli",
                        parity: "odd",
                        n,
                    });
                }
                let m = (n - 1) / 2;
                let mut gammas = dirac_generators::<S>(m);
                // Last generator: i^{m+1} g_1···g_{2m}; squares to -1 and
                // anticommutes with every even generator.
                let mut prod = Mat::<S>::identity(1 << m);
                for g in &gammas {
                    prod = prod.matmul(g);
                }
                gammas.push(prod.scale(&i_power::<S>((m as u32) + 1)));
                MatrixRep {
                    n,
                    kind,
                    dim: 1 << m,
                    gammas,
                }
            }
            RepKind::Cartan => {
                if n % 2 != 1 {
                    return Err(Error::ParityMismatch {
                        kind: "cartan",
                        parity: "odd",
                        n,
                    });
                }
                let pauli = MatrixRep::<S>::build(n, RepKind::Pauli)?;
                let gammas = pauli
                    .gammas
                    .iter()
                    .map(|g| Mat::block_diag(g, &g.neg()))
                    .collect();
                MatrixRep {
                    n,
                    kind,
                    dim: 2 * pauli.dim,
                    gammas,
                }
            }
        };
        debug_assert!(rep.verify_relations() == 0.0);
        Ok(rep)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn kind(&self) -> RepKind {
        self.kind
    }
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Generator image, 1-based.
    pub fn gamma(&self, i: usize) -> &Mat<S> {
        assert!(i >= 1 && i <= self.n, "generator index out of range");
        &self.gammas[i - 1]
    }

    pub fn gammas(&self) -> &[Mat<S>] {
        &self.gammas
    }

    /// Max residual of the defining relations g_i g_j + g_j g_i = -2 delta_ij.
    pub fn verify_relations(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.n {
            for j in i..self.n {
                let anti = self.gammas[i]
                    .matmul(&self.gammas[j])
                    .add(&self.gammas[j].matmul(&self.gammas[i]));
                let expect = if i == j {
                    Mat::<S>::identity(self.dim).scale(&S::from_int(-2))
                } else {
                    Mat::zeros(self.dim, self.dim)
                };
                worst = worst.max(anti.distance(&expect));
            }
        }
        worst
    }

    /// Max residual of anti-Hermitianity g_i^† = -g_i of every generator.
    pub fn verify_skew_adjoint(&self) -> f64 {
        self.gammas
            .iter()
            .map(|g| g.dagger().distance(&g.neg()))
            .fold(0.0, f64::max)
    }

    /// Image of a basis monomial: the ascending product of its generators.
    pub fn monomial_image(&self, mask: u32) -> Mat<S> {
        assert!(mask < (1u32 << self.n), "monomial outside algebra");
        let mut out = Mat::<S>::identity(self.dim);
        for i in 0..self.n {
            if mask & (1 << i) != 0 {
                out = out.matmul(&self.gammas[i]);
            }
        }
        out
    }

    /// Linear extension of `monomial_image` to algebra elements.
    pub fn represent(&self, elem: &crate::clifford::AlgebraElement<S>) -> Result<Mat<S>> {
        if elem.n() != self.n {
            return Err(Error::DimensionMismatch {
                what: "represent: element generator count vs representation",
                expected: self.n,
                got: elem.n(),
            });
        }
        let mut out = Mat::zeros(self.dim, self.dim);
        for (mask, c) in elem.terms() {
            out = out.add(&self.monomial_image(mask).scale(c));
        }
        Ok(out)
    }

    /// Image of the volume monomial e_1···e_n.
    pub fn volume_element(&self) -> Mat<S> {
        self.monomial_image((1u32 << self.n) - 1)
    }

    /// For the (non-faithful) pauli model the volume acts as a scalar; return
    /// it.  Panics if the volume is not scalar — i.e. if called on a faithful
    /// model, which is a caller bug.
    pub fn volume_scalar(&self) -> S {
        self.volume_element()
            .is_scalar_multiple_of_identity()
            .expect("volume element is not scalar in this representation")
    }

    /// Dimension of the linear span of all 2^n monomial images inside the
    /// endomorphism algebra.  Exact rank in exact mode.
    pub fn span_dimension(&self) -> usize {
        let count = 1usize << self.n;
        let flat = self.dim * self.dim;
        let mut rows = Mat::zeros(count, flat);
        for mask in 0..count as u32 {
            let img = self.monomial_image(mask);
            for r in 0..self.dim {
                for c in 0..self.dim {
                    rows.set(mask as usize, r * self.dim + c, img.get(r, c).clone());
                }
            }
        }
        rows.rank(S::tol(1e-6))
    }
}
