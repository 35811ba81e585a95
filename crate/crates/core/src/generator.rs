//! Seeded construction of genuine ring *-homomorphisms, deliberately broken
//! near-misses, and the parallel fuzz sweep over both.
//!
//! Coverage: every unital *-homomorphism between finite-dimensional
//! C*-algebras is unitarily equivalent to a block embedding with
//! multiplicities. A ring *-homomorphism `phi` splits as `P phi + Q phi`
//! with `P, Q` central, where `P phi` is such a *-homomorphism and `Q phi`
//! is one composed with entrywise conjugation. The grammar
//! `ad(U) . embed . (id + conj)` produces exactly these, so it also covers
//! maps whose `P` and `Q` corners both carry multiplicities and are mixed by
//! one shared unitary: the unitary acts on the whole codomain block, after
//! the plain and conjugated copies have been placed side by side.
//!
//! Seeds: a fuzz trial `t` under master seed `s` runs on
//! `derive_seed(s, t)`. Everything inside the trial (domain, tree,
//! unitaries, samples, mutation) is drawn from a ChaCha8 stream on that
//! seed, so a counterexample is reproduced from its `trial_seed` alone and
//! thread scheduling cannot change any result.

use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSignature, CMatrix, Element};
use crate::decomposition::{decompose, Classification, RECONSTRUCTION_TOL};
use crate::error::{Error, Result};
use crate::hom::{
    compile, contractivity_margin, isometry_check, kernel, kernel_ideal_residuals, verify, verify_with_unit,
    IdealResiduals, IsometryReport, RealLinearMap, StructuredHom, VerificationReport, INJECTIVITY_TOL,
};
use crate::linalg::invert;
use crate::spectral::{dilation, is_positive, operator_norm, spectrum};

/// Random pairs for `verify` in each trial, on top of all basis pairs for
/// small domains.
pub const VERIFY_SAMPLES: usize = 20;

/// Contractivity probes `real_dim + 3 * 34 >= 102` elements per trial.
pub const CONTRACTIVITY_TRIALS: usize = 34;

/// Random elements for the norm-preservation check.
pub const ISOMETRY_SAMPLES: usize = 100;

/// Generated maps must verify with every residual at or below this.
pub const SOUNDNESS_TOL: f64 = 1e-9;

/// A mutation counts as caught when verify fails and the targeted residual
/// is at least this large.
pub const MUTATION_FLOOR: f64 = 1e-3;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// Seed of trial `index` under `master`: splitmix64 of
/// `master + index * golden`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master.wrapping_add(index.wrapping_mul(GOLDEN)).wrapping_add(GOLDEN);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Gram-Schmidt (two passes) on the columns of a seeded complex Gaussian
/// matrix.
pub fn random_unitary(n: usize, seed: u64) -> CMatrix {
    assert!(n >= 1, "unitary of size 0");
    let sig = AlgebraSignature::new(vec![n]).expect("n >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let g = Element::random_with(&sig, &mut rng).into_blocks().remove(0);
        if let Some(u) = orthonormalize_columns(&g) {
            return u;
        }
    }
}

fn orthonormalize_columns(g: &CMatrix) -> Option<CMatrix> {
    let n = g.dim();
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v: Vec<Complex64> = (0..n).map(|i| g[(i, j)]).collect();
        let original = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= proj * y;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 1e-8 * original) {
            return None;
        }
        v.iter_mut().for_each(|x| *x /= norm);
        cols.push(v);
    }
    Some(CMatrix::from_fn(n, |i, j| cols[j][i]))
}

/// A generated tree with the branch bookkeeping needed to predict its
/// classification.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratedHom {
    pub hom: StructuredHom,
    pub domain: AlgebraSignature,
    pub codomain: AlgebraSignature,
    /// Some domain block lands in the codomain unconjugated.
    pub plain_used: bool,
    /// Some domain block lands in the codomain conjugated.
    pub conj_used: bool,
}

impl GeneratedHom {
    /// Classification implied by the construction.
    pub fn expected_classification(&self) -> Classification {
        match (self.plain_used, self.conj_used) {
            (true, true) => Classification::Mixed,
            (false, true) => Classification::ConjugateLinear,
            _ => Classification::Linear,
        }
    }
}

/// [`random_hom_detailed`] without the bookkeeping.
pub fn random_hom(domain: &AlgebraSignature, seed: u64, allow_conjugate: bool) -> StructuredHom {
    random_hom_detailed(domain, seed, allow_conjugate).hom
}

/// `ad(U) . embed . (id + conj)` with 1 to 3 codomain blocks. Each codomain
/// block takes 0 to 3 copies of each domain block, split at random between
/// plain and conjugated copies, and is exactly filled, so the map is unital.
pub fn random_hom_detailed(domain: &AlgebraSignature, seed: u64, allow_conjugate: bool) -> GeneratedHom {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dims = domain.block_dims();
    let k = dims.len();
    let num_blocks = rng.random_range(1..=3usize);

    let mut plain = vec![vec![0usize; k]; num_blocks];
    let mut conj = vec![vec![0usize; k]; num_blocks];
    let mut cod_dims = Vec::with_capacity(num_blocks);
    for j in 0..num_blocks {
        loop {
            for i in 0..k {
                let total = rng.random_range(0..=3usize);
                let c = if allow_conjugate { rng.random_range(0..=total) } else { 0 };
                plain[j][i] = total - c;
                conj[j][i] = c;
            }
            let n: usize = (0..k).map(|i| (plain[j][i] + conj[j][i]) * dims[i]).sum();
            if n >= 1 {
                cod_dims.push(n);
                break;
            }
        }
    }
    let codomain = AlgebraSignature::new(cod_dims).expect("every block is nonempty");

    let mut stages = Vec::with_capacity(3);
    let embedding = if allow_conjugate {
        stages.push(StructuredHom::DirectSum {
            branches: vec![StructuredHom::identity(domain), StructuredHom::conjugation(domain)],
        });
        let doubled: Vec<usize> = dims.iter().chain(dims).copied().collect();
        StructuredHom::BlockEmbedding {
            domain: AlgebraSignature::new(doubled).expect("nonempty"),
            codomain: codomain.clone(),
            multiplicities: (0..num_blocks)
                .map(|j| plain[j].iter().chain(&conj[j]).copied().collect())
                .collect(),
        }
    } else {
        StructuredHom::BlockEmbedding {
            domain: domain.clone(),
            codomain: codomain.clone(),
            multiplicities: plain.clone(),
        }
    };
    stages.push(embedding);
    let unitaries = codomain
        .block_dims()
        .iter()
        .map(|&n| random_unitary(n, rng.random()))
        .collect();
    let unitary = Element::from_blocks(codomain.clone(), unitaries).expect("block sizes match");
    stages.push(StructuredHom::UnitaryConjugation { unitary });

    GeneratedHom {
        hom: StructuredHom::Composition { stages },
        domain: domain.clone(),
        codomain,
        plain_used: plain.iter().flatten().any(|&m| m > 0),
        conj_used: conj.iter().flatten().any(|&m| m > 0),
    }
}

/// 1 to 3 blocks of size 1 to `max_block_dim`.
pub fn random_signature<R: Rng + ?Sized>(rng: &mut R, max_block_dim: usize) -> AlgebraSignature {
    let k = rng.random_range(1..=3usize);
    let dims = (0..k).map(|_| rng.random_range(1..=max_block_dim.max(1))).collect();
    AlgebraSignature::new(dims).expect("dims >= 1")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MutationKind {
    BreakMult,
    BreakStar,
    BreakUnital,
}

impl MutationKind {
    pub const ALL: [MutationKind; 3] = [Self::BreakMult, Self::BreakStar, Self::BreakUnital];

    /// The residual this mutation is designed to push past [`MUTATION_FLOOR`].
    pub fn targeted_residual(self, report: &VerificationReport) -> f64 {
        match self {
            Self::BreakMult => report.residual_multiplicative,
            Self::BreakStar => report.residual_star,
            Self::BreakUnital => report.residual_unital,
        }
    }
}

impl fmt::Display for MutationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::BreakMult => "break_mult",
            Self::BreakStar => "break_star",
            Self::BreakUnital => "break_unital",
        })
    }
}

/// Compiles `h` and perturbs it so that `verify` must fail.
///
/// - `break_mult`: `2 phi`. On any idempotent `e` with `phi(e) != 0` the
///   defect is `2 phi(e)`.
/// - `break_unital`: `phi + 0.01 tau(.) 1_B` with `tau(a) = Re tr(a) / sum n_i`,
///   a real functional with `tau(a^*) = tau(a)` and `tau(1) = 1`. Star
///   compatibility survives; multiplicativity moves by about `0.01`.
/// - `break_star`: `W phi(.) W^-1` for a seeded `W = 1 + 0.3 G / sqrt(dim B)`,
///   which keeps multiplicativity and unitality. If the image commutes with
///   `W^* W` the star defect vanishes; then `phi + 0.05 i tau(.) 1_B` is used
///   instead, whose star defect at `1` is `0.1 ||1_B||`.
pub fn mutate_invalid(h: &StructuredHom, kind: MutationKind, seed: u64) -> Result<RealLinearMap> {
    let m = compile(h)?;
    let (dom, cod) = (m.domain().clone(), m.codomain().clone());
    let one_b = Element::identity(&cod);
    let tau_norm = dom.block_dims().iter().sum::<usize>() as f64;
    let tau = |a: &Element| a.blocks().iter().map(|b| b.trace().re).sum::<f64>() / tau_norm;
    let shifted = |z: Complex64| {
        RealLinearMap::from_fn(&dom, &cod, |a| &m.image(a) + &one_b.scale(z * tau(a)))
    };
    match kind {
        MutationKind::BreakMult => RealLinearMap::new(dom.clone(), cod.clone(), m.matrix().scale(2.0)),
        MutationKind::BreakUnital => Ok(shifted(Complex64::new(0.01, 0.0))),
        MutationKind::BreakStar => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (w, w_inv) = loop {
                let g = Element::random_with(&cod, &mut rng);
                let w = &one_b + &g.scale_real(0.3 / (cod.dim() as f64).sqrt());
                let inv: Option<Vec<CMatrix>> = w.blocks().iter().map(invert).collect();
                if let Some(inv) = inv {
                    break (w, Element::from_blocks(cod.clone(), inv)?);
                }
            };
            let similar = RealLinearMap::from_fn(&dom, &cod, |a| &(&w * &m.image(a)) * &w_inv);
            let defect = Element::real_basis(&dom)
                .iter()
                .map(|x| (&similar.image(&x.adjoint()) - &similar.image(x).adjoint()).frobenius_norm())
                .fold(0.0, f64::max);
            if defect >= 10.0 * MUTATION_FLOOR {
                Ok(similar)
            } else {
                Ok(shifted(Complex64::new(0.0, 0.05)))
            }
        }
    }
}

/// Decomposition figures kept per fuzz trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionSummary {
    pub max_residual: f64,
    pub residual_linear: f64,
    pub residual_conjlinear: f64,
    pub residual_reconstruction: f64,
    pub center_dimension: usize,
    pub classification: Classification,
    /// Largest law residual of `phi1` verified against the unit `P`.
    pub phi1_residual: f64,
    /// Largest law residual of `phi2` verified against the unit `Q`.
    pub phi2_residual: f64,
    /// `max ||[P, phi(a)]||` over random `a`.
    pub projection_commutator: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MutationOutcome {
    pub kind: MutationKind,
    pub targeted_residual: f64,
    pub rejected: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub invariant: String,
    pub residual: Option<f64>,
}

/// Everything measured in one fuzz trial.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub trial_seed: u64,
    pub generated: GeneratedHom,
    pub verification: VerificationReport,
    pub contractivity_margin: f64,
    pub contractivity_samples: usize,
    pub isometry: IsometryReport,
    /// Present for non-injective maps.
    pub kernel_ideal: Option<IdealResiduals>,
    pub decomposition: Option<DecompositionSummary>,
    /// `max ||phi2(x) - [[k, phi(a)], [phi(a)^*, k]]||` over dilations `x`.
    pub amplification_residual: f64,
    pub mutation: MutationOutcome,
    pub failures: Vec<Failure>,
}

impl TrialOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub trial: usize,
    pub trial_seed: u64,
    pub description: String,
    pub hom: StructuredHom,
    pub invariant: String,
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub trials: usize,
    pub seed: u64,
    pub pass_count: usize,
    pub fail_count: usize,
    pub worst_contractivity_margin: f64,
    pub counterexamples: Vec<Counterexample>,
}

/// Runs `trials` independent trials in parallel; results are in trial
/// order and do not depend on the number of threads.
pub fn fuzz_outcomes(trials: usize, seed: u64, max_block_dim: usize, tol: f64) -> Result<Vec<TrialOutcome>> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    if max_block_dim == 0 {
        return Err(Error::InvalidArgument("max block dimension must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    Ok((0..trials)
        .into_par_iter()
        .map(|t| run_trial(t, derive_seed(seed, t as u64), max_block_dim, tol))
        .collect())
}

/// Condenses trial outcomes into a report.
pub fn summarize(outcomes: &[TrialOutcome], seed: u64) -> FuzzReport {
    let fail_count = outcomes.iter().filter(|o| !o.passed()).count();
    let counterexamples = outcomes
        .iter()
        .flat_map(|o| {
            o.failures.iter().map(move |f| Counterexample {
                trial: o.trial,
                trial_seed: o.trial_seed,
                description: o.generated.hom.to_string(),
                hom: o.generated.hom.clone(),
                invariant: f.invariant.clone(),
                residual: f.residual,
            })
        })
        .collect();
    FuzzReport {
        trials: outcomes.len(),
        seed,
        pass_count: outcomes.len() - fail_count,
        fail_count,
        worst_contractivity_margin: outcomes
            .iter()
            .map(|o| o.contractivity_margin)
            .fold(f64::INFINITY, f64::min),
        counterexamples,
    }
}

pub fn fuzz_theorems(trials: usize, seed: u64, max_block_dim: usize, tol: f64) -> Result<FuzzReport> {
    Ok(summarize(&fuzz_outcomes(trials, seed, max_block_dim, tol)?, seed))
}

/// One trial under its own seed. Public so a counterexample can be rerun.
pub fn run_trial(trial: usize, trial_seed: u64, max_block_dim: usize, tol: f64) -> TrialOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    let domain = random_signature(&mut rng, max_block_dim);
    let allow_conjugate = rng.random_bool(0.5);
    let hom_seed: u64 = rng.random();
    let check_seed: u64 = rng.random();
    let mutation_seed: u64 = rng.random();
    let kind = MutationKind::ALL[trial % 3];

    let generated = random_hom_detailed(&domain, hom_seed, allow_conjugate);
    let m = compile(&generated.hom).expect("generated trees are well formed");
    let mut failures = Vec::new();
    let mut fail = |invariant: &str, residual: Option<f64>| {
        failures.push(Failure {
            invariant: invariant.to_string(),
            residual,
        })
    };

    let verification = verify(&m, VERIFY_SAMPLES, check_seed, tol);
    if !verification.passed || verification.max_residual() > SOUNDNESS_TOL {
        fail("soundness", Some(verification.max_residual()));
    }

    let margin = contractivity_margin(&m, CONTRACTIVITY_TRIALS, check_seed).min(verification.contractivity_margin);
    if !(margin >= -tol) {
        fail("contractivity", Some(margin));
    }

    let isometry = isometry_check(&m, ISOMETRY_SAMPLES, check_seed, tol);
    if !isometry.consistent {
        let r = if isometry.injective {
            isometry.max_norm_deviation
        } else {
            1.0 - isometry.kernel_deviation
        };
        fail("injective_iff_isometric", Some(r));
    }

    let mut kernel_ideal = None;
    if !isometry.injective {
        let k = kernel(&m, INJECTIVITY_TOL);
        if !k.is_complex_closed() {
            fail("kernel_complex_closed", None);
        }
        let res = kernel_ideal_residuals(&k, 20, check_seed);
        if !(res.max() <= tol) {
            fail("kernel_ideal", Some(res.max()));
        }
        kernel_ideal = Some(res);
    }

    let mut sample_rng = ChaCha8Rng::seed_from_u64(check_seed ^ GOLDEN);
    let samples: Vec<Element> = (0..ISOMETRY_SAMPLES)
        .map(|_| Element::random_with(&domain, &mut sample_rng))
        .collect();

    let decomposition = match decompose(&m, tol) {
        Err(Error::DecompositionResidual { name, value, .. }) => {
            fail(&format!("decompose:{name}"), Some(value));
            None
        }
        Err(e) => {
            fail(&format!("decompose:{e}"), None);
            None
        }
        Ok(d) => {
            if !(d.residual_reconstruction <= RECONSTRUCTION_TOL) {
                fail("reconstruction", Some(d.residual_reconstruction));
            }
            if d.classification != generated.expected_classification() {
                fail("classification", None);
            }
            if d.center_dimension == 1 && d.classification == Classification::Mixed {
                fail("trivial_center_not_mixed", None);
            }
            let phi1 = verify_with_unit(&d.phi1, &d.p, 10, check_seed, tol).expect("P lies in the codomain");
            let phi2 = verify_with_unit(&d.phi2, &d.q, 10, check_seed, tol).expect("Q lies in the codomain");
            if !phi1.passed {
                fail("phi1_homomorphism", Some(phi1.max_residual()));
            }
            if !phi2.passed {
                fail("phi2_homomorphism", Some(phi2.max_residual()));
            }
            // Frobenius norms bound the operator norms from above.
            let mut comm: f64 = 0.0;
            for a in &samples {
                let fa = m.image(a);
                comm = comm
                    .max(d.p.commutator(&fa).expect("same codomain").frobenius_norm())
                    .max(d.q.commutator(&fa).expect("same codomain").frobenius_norm());
            }
            if !(comm <= SOUNDNESS_TOL) {
                fail("projection_commutes", Some(comm));
            }
            Some(DecompositionSummary {
                max_residual: d.max_residual(),
                residual_linear: d.residual_linear,
                residual_conjlinear: d.residual_conjlinear,
                residual_reconstruction: d.residual_reconstruction,
                center_dimension: d.center_dimension,
                classification: d.classification,
                phi1_residual: phi1.max_residual(),
                phi2_residual: phi2.max_residual(),
                projection_commutator: comm,
            })
        }
    };

    // Order preservation: a <= b with b - a = v^* v gives phi(a) <= phi(b).
    let mut order_ok = true;
    for pair in samples[..20].chunks(2) {
        let a = &pair[0].adjoint() * &pair[0];
        let b = &a + &(&pair[1].adjoint() * &pair[1]);
        order_ok &= is_positive(&(&m.image(&b) - &m.image(&a)), tol);
    }

    // Spectrum containment: sigma(phi(a)) lies in sigma(a) for the linear
    // part and in conj(sigma(a)) for the conjugate-linear part.
    let expected = generated.expected_classification();
    let mut spectral_gap: f64 = 0.0;
    for a in &samples[..10] {
        let own = spectrum(a).values();
        let mut source = Vec::new();
        if expected != Classification::ConjugateLinear {
            source.extend(own.iter().copied());
        }
        if expected != Classification::Linear {
            source.extend(own.iter().map(|z| z.conj()));
        }
        let scale = 1.0 + operator_norm(a);
        for z in spectrum(&m.image(a)).values() {
            let gap = source.iter().map(|s| (z - s).norm()).fold(f64::INFINITY, f64::min);
            spectral_gap = spectral_gap.max(gap / scale);
        }
    }
    if !order_ok {
        fail("order_preservation", None);
    }
    if !(spectral_gap <= 1e-6) {
        fail("spectrum_containment", Some(spectral_gap));
    }

    // Dilations map to dilations under the 2x2 amplification.
    let amplified = m.amplify2();
    let mut amplification_residual: f64 = 0.0;
    for a in samples.iter().take(3) {
        let k = operator_norm(a) * 1.5;
        let expected = dilation(&m.image(a), k);
        let got = amplified.image(&dilation(a, k));
        amplification_residual = amplification_residual.max((&got - &expected).frobenius_norm());
    }
    if !(amplification_residual <= SOUNDNESS_TOL) {
        fail("amplification", Some(amplification_residual));
    }

    let mutated = mutate_invalid(&generated.hom, kind, mutation_seed).expect("generated trees are well formed");
    let report = verify(&mutated, 20, check_seed, tol);
    let targeted_residual = kind.targeted_residual(&report);
    let rejected = !report.passed && targeted_residual >= MUTATION_FLOOR;
    if !rejected {
        fail(&format!("negative_rejected:{kind}"), Some(targeted_residual));
    }

    TrialOutcome {
        trial,
        trial_seed,
        contractivity_samples: 2 * domain.real_dim() + 3 * CONTRACTIVITY_TRIALS + VERIFY_SAMPLES,
        generated,
        verification,
        contractivity_margin: margin,
        isometry,
        kernel_ideal,
        decomposition,
        amplification_residual,
        mutation: MutationOutcome {
            kind,
            targeted_residual,
            rejected,
        },
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hom::DEFAULT_TOL;

    fn sig(dims: &[usize]) -> AlgebraSignature {
        AlgebraSignature::new(dims.to_vec()).unwrap()
    }

    fn unitary_residual(u: &CMatrix) -> f64 {
        (&u.gram() - &CMatrix::identity(u.dim())).max_abs()
    }

    #[test]
    fn unitaries() {
        let u1 = random_unitary(1, 3);
        assert!((u1[(0, 0)].norm() - 1.0).abs() < 1e-15);
        assert_eq!(random_unitary(3, 9), random_unitary(3, 9));
        assert_ne!(random_unitary(3, 9), random_unitary(3, 10));
        for n in 1..=6 {
            assert!(unitary_residual(&random_unitary(n, n as u64)) <= 1e-12);
        }
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        let seeds: std::collections::HashSet<u64> = (0..1000).map(|t| derive_seed(42, t)).collect();
        assert_eq!(seeds.len(), 1000);
        assert_eq!(derive_seed(42, 7), derive_seed(42, 7));
        assert_ne!(derive_seed(42, 7), derive_seed(43, 7));
    }

    #[test]
    fn generated_maps_on_m2_verify() {
        let d = sig(&[2]);
        for seed in 0..1000 {
            let g = random_hom_detailed(&d, seed, seed % 2 == 0);
            let m = compile(&g.hom).unwrap();
            let r = verify(&m, 5, seed, DEFAULT_TOL);
            assert!(r.passed && r.max_residual() <= SOUNDNESS_TOL, "seed {seed}: {r:?}");
            assert!(g.codomain.block_dims().iter().all(|&n| n % 2 == 0));
        }
    }

    #[test]
    fn scalar_domain_without_conjugation_is_identity_when_codomain_is_c() {
        let c = sig(&[1]);
        let mut found = false;
        for seed in 0..200 {
            let g = random_hom_detailed(&c, seed, false);
            if g.codomain == c {
                let m = compile(&g.hom).unwrap();
                assert!(m.matrix().max_abs_diff(RealLinearMap::identity(&c).matrix()) < 1e-14);
                found = true;
            }
        }
        assert!(found);
    }

    #[test]
    fn scalar_domain_with_both_branches_is_mixed() {
        let c = sig(&[1]);
        let g = (0..500)
            .map(|s| random_hom_detailed(&c, s, true))
            .find(|g| g.codomain == sig(&[2]) && g.plain_used && g.conj_used)
            .expect("some seed gives z -> U diag(z, conj z) U*");
        assert_eq!(g.expected_classification(), Classification::Mixed);
        let d = decompose(&compile(&g.hom).unwrap(), DEFAULT_TOL).unwrap();
        assert_eq!(d.classification, Classification::Mixed);
        assert_eq!(d.center_dimension, 2);
    }

    #[test]
    fn mutations_are_rejected() {
        let c = sig(&[1]);
        let id = StructuredHom::identity(&c);
        let m = mutate_invalid(&id, MutationKind::BreakUnital, 0).unwrap();
        let r = verify(&m, 10, 0, DEFAULT_TOL);
        assert!((r.residual_unital - 0.01).abs() < 1e-12);
        assert!(r.residual_star < 1e-15);
        assert!(!r.passed);

        let m = mutate_invalid(&StructuredHom::conjugation(&c), MutationKind::BreakMult, 0).unwrap();
        let r = verify(&m, 10, 0, DEFAULT_TOL);
        assert!(r.residual_multiplicative >= 1.0);

        // identity on C commutes with every W, so the fallback kicks in
        let m = mutate_invalid(&id, MutationKind::BreakStar, 0).unwrap();
        let r = verify(&m, 10, 0, DEFAULT_TOL);
        assert!(r.residual_star >= 0.1 - 1e-12);
    }

    #[test]
    fn star_mutation_by_similarity_keeps_multiplicativity() {
        let h = StructuredHom::identity(&sig(&[3]));
        let m = mutate_invalid(&h, MutationKind::BreakStar, 5).unwrap();
        let r = verify(&m, 10, 1, DEFAULT_TOL);
        assert!(r.residual_star >= 1e-2);
        assert!(r.residual_multiplicative < 1e-12);
        assert!(r.residual_unital < 1e-12);
    }

    #[test]
    fn small_fuzz_run_is_clean_and_deterministic() {
        let a = fuzz_theorems(12, 7, 2, DEFAULT_TOL).unwrap();
        assert_eq!(a.fail_count, 0, "{:#?}", a.counterexamples);
        assert_eq!(a.pass_count, 12);
        assert!(a.worst_contractivity_margin >= -DEFAULT_TOL);
        let b = fuzz_theorems(12, 7, 2, DEFAULT_TOL).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    }

    #[test]
    fn fuzz_rejects_bad_arguments() {
        assert!(fuzz_theorems(0, 1, 2, DEFAULT_TOL).is_err());
        assert!(fuzz_theorems(1, 1, 0, DEFAULT_TOL).is_err());
    }
}
