//! Named verification suites: clifford, bundle, curvature, lichnerowicz,
//! killing, splitting.  Each runs a family of identity checks at one
//! dimension and returns [`CheckResult`]s; the command-line tool and the
//! acceptance battery both drive these functions, so a green suite here is
//! the same statement as a green acceptance run.
//!
//! Sampling is seeded (ChaCha8) and every check reports the number of cases
//! it covered, so a report is reproducible from its config echo alone.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bundle::{BundleContext, BundleSelector, LiftSign};
use crate::clifford::{AlgebraElement, CliffordAlgebra};
use crate::error::{Error, Result};
use crate::field::{basis_fields, spinor_dim, PolySpinorField, SpherePoint, VectorField};
use crate::gamma::{MatrixRep, RepKind};
use crate::matrix::Mat;
use crate::report::CheckResult;
use crate::scalar::{Exact, Mode, Scalar, C64};
use crate::spectrum::{
    curvature_pair_norm, dirac_apply, dirac_apply_ambient, killing_field, killing_verify,
    lichnerowicz_defect, monogenic_kernel, spectrum, KillingSign, SpectrumTable,
};

/// The suites the verifier can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Clifford,
    Bundle,
    Curvature,
    Lichnerowicz,
    Killing,
    Splitting,
    All,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Clifford => "clifford",
            Suite::Bundle => "bundle",
            Suite::Curvature => "curvature",
            Suite::Lichnerowicz => "lichnerowicz",
            Suite::Killing => "killing",
            Suite::Splitting => "splitting",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clifford" => Ok(Suite::Clifford),
            "bundle" => Ok(Suite::Bundle),
            "curvature" => Ok(Suite::Curvature),
            "lichnerowicz" => Ok(Suite::Lichnerowicz),
            "killing" => Ok(Suite::Killing),
            "splitting" => Ok(Suite::Splitting),
            "all" => Ok(Suite::All),
            other => Err(Error::InvalidConfig(format!(
                "unknown suite '{other}' (expected clifford | bundle | curvature | \
                 lichnerowicz | killing | splitting | all)"
            ))),
        }
    }
}

/// Generator relations, the involution α, the volume-element sign law, and
/// the matrix models — all in exact arithmetic, thresholds zero.
///
/// `n` is the generator count of the algebra under test.
pub fn suite_clifford(n: usize) -> Result<Vec<CheckResult>> {
    let alg = CliffordAlgebra::build(n)?;
    let mut out = Vec::new();

    // e_i e_j + e_j e_i = −2δ_ij.
    let mut rel = 0.0f64;
    let mut rel_cases = 0;
    for i in 1..=n {
        for j in i..=n {
            let ei = AlgebraElement::<Exact>::generator(&alg, i);
            let ej = AlgebraElement::<Exact>::generator(&alg, j);
            let mut anti = ei.multiply(&ej, &alg)?.add(&ej.multiply(&ei, &alg)?)?;
            if i == j {
                anti = anti.add(&AlgebraElement::one(&alg).scale(&Exact::from_int(2)))?;
            }
            rel = rel.max(anti.max_abs());
            rel_cases += 1;
        }
    }
    out.push(CheckResult::new("clifford_relations", n, rel_cases, rel, 0.0));

    // α(e_A) = (−1)^{|A|} e_A and α² = id on the monomial basis.
    let mut inv = 0.0f64;
    let mut inv_cases = 0;
    for mask in alg.monomials() {
        let e = AlgebraElement::<Exact>::monomial(&alg, mask, Exact::one());
        let sign = if alg.grade(mask) % 2 == 0 {
            Exact::one()
        } else {
            Exact::from_int(-1)
        };
        inv = inv.max(e.involution_alpha().sub(&e.scale(&sign))?.max_abs());
        inv = inv.max(e.involution_alpha().involution_alpha().sub(&e)?.max_abs());
        inv_cases += 1;
    }
    out.push(CheckResult::new("alpha_involution", n, inv_cases, inv, 0.0));

    // α(ab) = α(a)α(b) over every monomial pair.
    let mut auto = 0.0f64;
    let mut auto_cases = 0;
    for a in alg.monomials() {
        let ea = AlgebraElement::<Exact>::monomial(&alg, a, Exact::one());
        for b in alg.monomials() {
            let eb = AlgebraElement::<Exact>::monomial(&alg, b, Exact::one());
            let lhs = ea.multiply(&eb, &alg)?.involution_alpha();
            let rhs = ea.involution_alpha().multiply(&eb.involution_alpha(), &alg)?;
            auto = auto.max(lhs.sub(&rhs)?.max_abs());
            auto_cases += 1;
        }
    }
    out.push(CheckResult::new("alpha_automorphism", n, auto_cases, auto, 0.0));

    // α(dM) = (−1)ⁿ dM; in particular α(dM) = −dM for odd n.
    let dm = AlgebraElement::<Exact>::monomial(&alg, alg.volume_mask(), Exact::one());
    let vsign = if n % 2 == 0 {
        Exact::one()
    } else {
        Exact::from_int(-1)
    };
    let vol = dm.involution_alpha().sub(&dm.scale(&vsign))?.max_abs();
    out.push(CheckResult::new("alpha_volume", n, 1, vol, 0.0));

    // Matrix models: relations and skew-adjointness, exact.
    let kinds: Vec<RepKind> = if n % 2 == 0 {
        vec![RepKind::Dirac]
    } else {
        vec![RepKind::Pauli, RepKind::Cartan]
    };
    let mut grel = 0.0f64;
    let mut gskew = 0.0f64;
    for kind in &kinds {
        let rep = MatrixRep::<Exact>::build(n, *kind)?;
        grel = grel.max(rep.verify_relations());
        gskew = gskew.max(rep.verify_skew_adjoint());
    }
    out.push(CheckResult::new("gamma_relations", n, kinds.len(), grel, 0.0));
    out.push(CheckResult::new("gamma_skew_adjoint", n, kinds.len(), gskew, 0.0));

    // Span dimensions: the faithful model spans 2·4^{(n−1)/2}, twice the
    // non-faithful one; the even-dimensional model spans the full 2ⁿ.
    if n % 2 == 1 {
        let cartan = MatrixRep::<Exact>::build(n, RepKind::Cartan)?;
        let expected = 2 * 4usize.pow(((n - 1) / 2) as u32);
        let got = cartan.span_dimension();
        out.push(CheckResult::new(
            "cartan_span",
            n,
            1,
            (got as f64 - expected as f64).abs(),
            0.0,
        ));
        let pauli = MatrixRep::<Exact>::build(n, RepKind::Pauli)?;
        let got_p = pauli.span_dimension();
        out.push(CheckResult::new(
            "pauli_span",
            n,
            1,
            (got_p as f64 - (expected / 2) as f64).abs(),
            0.0,
        ));
    } else {
        let dirac = MatrixRep::<Exact>::build(n, RepKind::Dirac)?;
        let got = dirac.span_dimension();
        out.push(CheckResult::new(
            "dirac_span",
            n,
            1,
            (got as f64 - (1usize << n) as f64).abs(),
            0.0,
        ));
    }
    Ok(out)
}

fn random_spinor<R: Rng>(dim: usize, rng: &mut R) -> Vec<C64> {
    (0..dim)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect()
}

fn random_tangent<R: Rng>(p: &SpherePoint, rng: &mut R) -> Vec<f64> {
    loop {
        let g: Vec<f64> = (0..p.coords().len())
            .map(|_| rng.sample(StandardNormal))
            .collect();
        let ip: f64 = g.iter().zip(p.coords()).map(|(a, b)| a * b).sum();
        let t: Vec<f64> = g
            .iter()
            .zip(p.coords())
            .map(|(a, b)| a - ip * b)
            .collect();
        let norm: f64 = t.iter().map(|c| c * c).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return t.iter().map(|c| c / norm).collect();
        }
    }
}

fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Lift suite: ĝ_± are involutions and commute with Clifford multiplication
/// against dg = −id, sampled at seeded random points.
pub fn suite_bundle(n: usize, samples: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let ctx = BundleContext::<C64>::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = ctx.dim();
    let mut involution = 0.0f64;
    let mut equivariance = 0.0f64;
    for _ in 0..samples {
        let p = SpherePoint::random(n, &mut rng);
        let phi = random_spinor(dim, &mut rng);
        let t = random_tangent(&p, &mut rng);
        for sign in [LiftSign::Plus, LiftSign::Minus] {
            // ĝ² = Id.
            let (q, psi) = ctx.lift(sign, &p, &phi);
            let (p2, phi2) = ctx.lift(sign, &q, &psi);
            involution = involution.max(max_diff(&phi2, &phi));
            let pd: f64 = p2
                .coords()
                .iter()
                .zip(p.coords())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            involution = involution.max(pd);
            // ĝ(x, t·φ) = (−x, (dg t)·ĝφ) with dg = −id on tangents.
            let (_, lhs) = ctx.lift(sign, &p, &ctx.mu(&p, &t, &phi)?);
            let mt: Vec<f64> = t.iter().map(|c| -c).collect();
            let rhs = ctx.mu(&q, &mt, &psi)?;
            equivariance = equivariance.max(max_diff(&lhs, &rhs));
        }
    }
    Ok(vec![
        CheckResult::new("lift_involution", n, samples, involution, 1e-12),
        CheckResult::new("lift_equivariance", n, samples, equivariance, 1e-12),
    ])
}

/// Curvature suite: R(V,W)Φ = ½(W·V + ⟨V,W⟩)Φ on the full field basis up
/// to `max_degree`, plus metric compatibility and the Leibniz rule on
/// subsets.  Thresholds are zero in exact mode.
pub fn suite_curvature<S: Scalar>(n: usize, max_degree: u32) -> Result<Vec<CheckResult>> {
    let ctx = BundleContext::<S>::new(n)?;
    let fields = basis_fields::<S>(n, max_degree)?;
    let frame: Vec<VectorField<S>> = (0..=n)
        .map(|a| VectorField::projected_coordinate(n, a))
        .collect();
    let mut curv = 0.0f64;
    let mut curv_cases = 0;
    for f in &fields {
        for a in 0..=n {
            for b in (a + 1)..=n {
                curv = curv.max(ctx.curvature_defect(f, &frame[a], &frame[b]));
                curv_cases += 1;
            }
        }
    }
    let mut out = vec![CheckResult::new(
        "curvature_identity",
        n,
        curv_cases,
        curv,
        S::tol(1e-10),
    )];

    // V⟨Φ,Ψ⟩ = ⟨∇_VΦ,Ψ⟩ + ⟨Φ,∇_VΨ⟩ on a field subset, all frame fields.
    let sub: Vec<&PolySpinorField<S>> = fields.iter().step_by(fields.len() / 6 + 1).collect();
    let mut metric = 0.0f64;
    let mut metric_cases = 0;
    for f in &sub {
        for g in &sub {
            for v in &frame {
                metric = metric.max(ctx.metric_compat_defect(f, g, v));
                metric_cases += 1;
            }
        }
    }
    out.push(CheckResult::new(
        "metric_compatibility",
        n,
        metric_cases,
        metric,
        S::tol(1e-11),
    ));

    // ∇_V(W·Φ) = (∇_VW)·Φ + W·∇_VΦ for tangent V, W.
    let mut leibniz = 0.0f64;
    let mut leibniz_cases = 0;
    for f in &sub {
        for v in &frame {
            for w in &frame {
                leibniz = leibniz.max(ctx.leibniz_defect(f, v, w));
                leibniz_cases += 1;
            }
        }
    }
    out.push(CheckResult::new(
        "leibniz_rule",
        n,
        leibniz_cases,
        leibniz,
        S::tol(1e-10),
    ));
    Ok(out)
}

/// Lichnerowicz suite: D²Φ = ΔΦ + (n(n−1)/4)Φ on the full basis up to
/// `max_degree`, with the two Dirac routes compared alongside.
pub fn suite_lichnerowicz<S: Scalar>(n: usize, max_degree: u32) -> Result<Vec<CheckResult>> {
    let ctx = BundleContext::<S>::new(n)?;
    let fields = basis_fields::<S>(n, max_degree)?;
    let mut lich = 0.0f64;
    let mut routes = 0.0f64;
    for f in &fields {
        lich = lich.max(lichnerowicz_defect(&ctx, f));
        routes = routes.max(
            dirac_apply(&ctx, f)
                .sub(&dirac_apply_ambient(&ctx, f))
                .max_coeff_abs(),
        );
    }
    Ok(vec![
        CheckResult::new("lichnerowicz_identity", n, fields.len(), lich, S::tol(1e-9)),
        CheckResult::new(
            "dirac_route_agreement",
            n,
            fields.len(),
            routes,
            S::tol(1e-10),
        ),
    ])
}

fn random_lattice_spinor<S: Scalar, R: Rng>(dim: usize, rng: &mut R) -> Vec<S> {
    loop {
        let v: Vec<S> = (0..dim)
            .map(|_| {
                let re = rng.gen_range(-3i64..=3);
                let im = rng.gen_range(-3i64..=3);
                S::from_int(re).add(&S::i().mul(&S::from_int(im)))
            })
            .collect();
        if v.iter().any(|c| !c.is_zero()) {
            return v;
        }
    }
}

/// Killing suite: both families verify at λ = ∓½ with the right quotient
/// membership and Dirac eigenvalue, and every other λ on the grid is
/// rejected with at least the |2λ² − ½|·‖Φ‖ margin.
pub fn suite_killing<S: Scalar>(n: usize, samples: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let ctx = BundleContext::<S>::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = spinor_dim(n);
    let mut out = Vec::new();

    let mut family = |sign: KillingSign, name: &str| -> Result<CheckResult> {
        let mut worst = 0.0f64;
        for _ in 0..samples {
            let s = random_lattice_spinor::<S, _>(dim, &mut rng);
            let f = killing_field(&ctx, &s, sign)?;
            let rep = killing_verify(&ctx, &f, &sign.lambda::<S>());
            worst = worst.max(rep.residual);
            worst = worst.max(rep.curvature_consistency);
            worst = worst.max(ctx.section_defect(sign.selector(), &f));
            worst = worst.max((rep.dirac_eigenvalue - sign.dirac_eigenvalue(n)).abs());
            worst = worst.max(rep.dirac_residual);
        }
        Ok(CheckResult::new(name, n, samples, worst, S::tol(1e-12)))
    };
    out.push(family(KillingSign::Minus, "killing_minus_family")?);
    out.push(family(KillingSign::Plus, "killing_plus_family")?);

    // Rejection margin for λ off the Killing grid, on constants and both
    // split families (fields where the margin is provable).  Needs n ≥ 2:
    // on S¹ the curvature term vanishes identically and the consistency
    // defect is zero for every λ.
    if n >= 2 {
        let grid: [(i64, i64); 7] = [(0, 1), (1, 4), (-1, 4), (3, 4), (-3, 4), (1, 1), (2, 1)];
        let mut shortfall = 0.0f64;
        let mut reject_cases = 0;
        for _ in 0..samples {
            let s = random_lattice_spinor::<S, _>(dim, &mut rng);
            let constant = PolySpinorField::constant(n, &s);
            let fields = [
                constant.clone(),
                killing_field(&ctx, &s, KillingSign::Minus)?,
                killing_field(&ctx, &s, KillingSign::Plus)?,
            ];
            for f in &fields {
                // One pair sweep serves the whole λ grid: the consistency
                // defect at λ is exactly |2λ² − ½| times this norm.
                let pair_norm = curvature_pair_norm(&ctx, f);
                let phi_norm = f.max_coeff_abs();
                for (num, den) in grid {
                    let margin = (2.0 * (num as f64 / den as f64).powi(2) - 0.5).abs();
                    shortfall = shortfall.max(margin * (phi_norm - pair_norm));
                    reject_cases += 1;
                }
            }
        }
        // Threshold is float in both modes: the margin inequality itself is
        // exact, but ‖·‖ evaluation of Gaussian-integer coefficients rounds
        // through f64 on both sides of the comparison.
        out.push(CheckResult::new(
            "killing_lambda_rejection",
            n,
            reject_cases,
            shortfall.max(0.0),
            1e-12,
        ));
    }

    // The λ = −½ family has Dirac eigenvalue exactly n/2.
    let mut dmax = 0.0f64;
    for _ in 0..samples.min(4) {
        let s = random_lattice_spinor::<S, _>(dim, &mut rng);
        let f = killing_field(&ctx, &s, KillingSign::Minus)?;
        let df = dirac_apply(&ctx, &f);
        let half_n = S::from_ratio(n as i64, 2);
        dmax = dmax.max(df.sub(&f.harmonic_reduce().scale(&half_n)).max_coeff_abs());
    }
    out.push(CheckResult::new(
        "killing_dirac_eigenvalue",
        n,
        samples.min(4),
        dmax,
        S::tol(1e-12),
    ));
    Ok(out)
}

/// Splitting suite: the pointwise volume element squares to the identity,
/// classification is unanimous over the samples, and the behavior matches
/// the parity law (even n swaps the eigenbundles, odd n preserves them).
pub fn suite_splitting(n: usize, samples: usize, seed: u64) -> Result<Vec<CheckResult>> {
    let ctx = BundleContext::<C64>::new(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let class = ctx.classify_splitting(samples, &mut rng)?;
    let behavior_ok = if n % 2 == 0 {
        class.even_swaps
    } else {
        class.odd_preserves
    };
    let mut square = 0.0f64;
    for _ in 0..samples {
        let p = SpherePoint::random(n, &mut rng);
        let f = ctx.splitting_matrix(&p);
        let ff = f.matmul(&f);
        square = square.max(ff.distance(&Mat::identity(ctx.dim())));
    }
    Ok(vec![
        CheckResult::new("splitting_square", n, samples, square, 1e-10),
        CheckResult::new(
            "splitting_residual",
            n,
            class.samples,
            class.matched_residual,
            1e-9,
        ),
        CheckResult::new(
            "splitting_gap",
            n,
            class.samples,
            (0.5 - class.opposite_gap).max(0.0),
            0.0,
        ),
        CheckResult::new(
            "splitting_behavior",
            n,
            class.samples,
            if behavior_ok { 0.0 } else { 1.0 },
            0.0,
        ),
    ])
}

/// Internal-consistency checks of a spectrum computation at one (n, m):
/// sphere symmetry, quotient partition, the monogenic oracle, and the
/// Killing eigenvalues ±n/2.  Backs the spectrum acceptance criterion; not
/// one of the named verify suites.
pub fn suite_spectrum<S: Scalar>(n: usize, m: u32) -> Result<Vec<CheckResult>> {
    let ctx = BundleContext::<S>::new(n)?;
    let sphere = spectrum(&ctx, BundleSelector::Sphere, m)?;
    let plus = spectrum(&ctx, BundleSelector::RpPlus, m)?;
    let minus = spectrum(&ctx, BundleSelector::RpMinus, m)?;
    let mut out = Vec::new();

    let herm = sphere
        .hermiticity_defect
        .max(plus.hermiticity_defect)
        .max(minus.hermiticity_defect);
    out.push(CheckResult::new("spectrum_hermiticity", n, 3, herm, 1e-9));
    let closure = sphere
        .closure_residual
        .max(plus.closure_residual)
        .max(minus.closure_residual);
    out.push(CheckResult::new("spectrum_closure", n, 3, closure, 1e-9));

    // Sphere symmetry λ ↦ −λ on non-truncated entries.
    let mut sym = 0.0f64;
    let mut sym_cases = 0;
    for e in sphere.entries.iter().filter(|e| !e.truncated) {
        let diff = e.multiplicity as f64 - sphere.multiplicity(-e.eigenvalue) as f64;
        sym = sym.max(diff.abs());
        sym_cases += 1;
    }
    out.push(CheckResult::new("spectrum_symmetry", n, sym_cases, sym, 0.0));

    // Partition: mult_sphere = mult_rp_plus + mult_rp_minus, non-truncated.
    let mut part = 0.0f64;
    for e in sphere.entries.iter().filter(|e| !e.truncated) {
        let sum = plus.multiplicity(e.eigenvalue) + minus.multiplicity(e.eigenvalue);
        part = part.max((e.multiplicity as f64 - sum as f64).abs());
    }
    out.push(CheckResult::new("spectrum_partition", n, sym_cases, part, 0.0));

    // Monogenic oracle: (1∓x)·M_k are eigenfields at ±(k + n/2); those with
    // k ≤ m−1 lie inside the table's space, so the table must carry at
    // least dim M_k at each sign.  Degrees capped at 2 as an oracle scope.
    let mut oracle = 0.0f64;
    let mut oracle_cases = 0;
    for k in 0..=2u32.min(m.saturating_sub(1)) {
        let mono = monogenic_kernel::<S>(ctx.rep(), k);
        let mu = k as f64 + n as f64 / 2.0;
        for lam in [mu, -mu] {
            let got = sphere.multiplicity(lam);
            oracle = oracle.max((mono.len() as f64 - got as f64).max(0.0));
            oracle_cases += 1;
        }
    }
    out.push(CheckResult::new(
        "spectrum_monogenic_oracle",
        n,
        oracle_cases,
        oracle,
        0.0,
    ));

    // ±n/2 present with multiplicity ≥ dim Δ each.
    let want = spinor_dim(n) as f64;
    let half_n = n as f64 / 2.0;
    let killing = (want - sphere.multiplicity(half_n) as f64)
        .max(want - sphere.multiplicity(-half_n) as f64)
        .max(0.0);
    out.push(CheckResult::new("spectrum_killing_eigenvalue", n, 2, killing, 0.0));
    Ok(out)
}

/// Spectrum tables for the three selectors at (n, m), in a fixed order.
pub fn spectrum_tables<S: Scalar>(n: usize, m: u32) -> Result<Vec<SpectrumTable>> {
    let ctx = BundleContext::<S>::new(n)?;
    Ok(vec![
        spectrum(&ctx, BundleSelector::Sphere, m)?,
        spectrum(&ctx, BundleSelector::RpPlus, m)?,
        spectrum(&ctx, BundleSelector::RpMinus, m)?,
    ])
}

/// Runs one suite (or all six) at the given dimension, dispatching on the
/// arithmetic mode for the suites that are mode-generic.
pub fn run_suite(
    suite: Suite,
    n: usize,
    m: u32,
    mode: Mode,
    samples: usize,
    seed: u64,
) -> Result<Vec<CheckResult>> {
    let degree = m.max(1);
    match suite {
        Suite::Clifford => suite_clifford(n),
        Suite::Bundle => suite_bundle(n, samples, seed),
        Suite::Curvature => match mode {
            Mode::Exact => suite_curvature::<Exact>(n, degree),
            Mode::Float => suite_curvature::<C64>(n, degree),
        },
        Suite::Lichnerowicz => match mode {
            Mode::Exact => suite_lichnerowicz::<Exact>(n, degree),
            Mode::Float => suite_lichnerowicz::<C64>(n, degree),
        },
        Suite::Killing => match mode {
            Mode::Exact => suite_killing::<Exact>(n, samples, seed),
            Mode::Float => suite_killing::<C64>(n, samples, seed),
        },
        Suite::Splitting => suite_splitting(n, samples, seed),
        Suite::All => {
            let mut out = Vec::new();
            for s in [
                Suite::Clifford,
                Suite::Bundle,
                Suite::Curvature,
                Suite::Lichnerowicz,
                Suite::Killing,
                Suite::Splitting,
            ] {
                out.extend(run_suite(s, n, m, mode, samples, seed)?);
            }
            Ok(out)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_pass(checks: &[CheckResult]) {
        for c in checks {
            assert!(
                c.pass,
                "{} failed: residual {:.3e} > threshold {:.3e}",
                c.check_name, c.max_residual, c.threshold
            );
        }
    }

    #[test]
    fn clifford_suite_passes_small() {
        for n in 1..=4 {
            all_pass(&suite_clifford(n).unwrap());
        }
    }

    #[test]
    fn bundle_suite_passes() {
        all_pass(&suite_bundle(3, 25, 11).unwrap());
    }

    #[test]
    fn curvature_suite_passes_exact_n2() {
        all_pass(&suite_curvature::<Exact>(2, 2).unwrap());
    }

    #[test]
    fn lichnerowicz_suite_passes_exact_n2() {
        all_pass(&suite_lichnerowicz::<Exact>(2, 2).unwrap());
    }

    #[test]
    fn killing_suite_passes_exact() {
        all_pass(&suite_killing::<Exact>(2, 3, 5).unwrap());
        all_pass(&suite_killing::<Exact>(3, 2, 5).unwrap());
    }

    #[test]
    fn splitting_suite_passes() {
        all_pass(&suite_splitting(2, 10, 3).unwrap());
        all_pass(&suite_splitting(3, 10, 3).unwrap());
    }

    #[test]
    fn spectrum_suite_passes_n2_m2() {
        all_pass(&suite_spectrum::<Exact>(2, 2).unwrap());
    }

    #[test]
    fn suite_parsing_round_trips() {
        for s in [
            Suite::Clifford,
            Suite::Bundle,
            Suite::Curvature,
            Suite::Lichnerowicz,
            Suite::Killing,
            Suite::Splitting,
            Suite::All,
        ] {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!(matches!(
            "spectral".parse::<Suite>(),
            Err(Error::InvalidConfig(_))
        ));
    }

    #[test]
    fn run_suite_dispatches_all() {
        let checks = run_suite(Suite::All, 2, 1, Mode::Float, 5, 1).unwrap();
        all_pass(&checks);
        // Every family contributed.
        for name in [
            "clifford_relations",
            "lift_involution",
            "curvature_identity",
            "lichnerowicz_identity",
            "killing_minus_family",
            "splitting_behavior",
        ] {
            assert!(checks.iter().any(|c| c.check_name == name), "{name}");
        }
    }
}
