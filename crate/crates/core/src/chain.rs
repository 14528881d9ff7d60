//! The chain of Cremona transformations carrying `φ_L` to `φ_G`.
//!
//! Both embeddings are projections of the product system `L + G`. Starting
//! from `A_0 = L G_0` (which induces the same map as `L`), each step replaces
//! one more coordinate by `L_0 G_{i+1}`, until `A_n = L_0 G` (which induces
//! the same map as `G`). Step `i`:
//!
//! 1. `H_i = (A_i, L_0 G_{i+1})` embeds the variety `Y_i` in `P^{n+1}`;
//! 2. a bi-monoid hypersurface `S_i ⊃ Y_i` with vertices `q1 = e_{n+1}` and a
//!    random `q2 ∈ {x_0 = ... = x_i = x_{n+1} = 0}` is interpolated;
//! 3. `Φ_i` maps the projection of `Y_i` from `q1` (that is, `A_i`) to its
//!    projection from `q2`, whose coordinates form `A_{i+1}`.

use rand::Rng;

use crate::bimonoid::{adapt_coordinates, find_min_k, KAttempt};
use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::LinearMatrix;
use crate::monoid::{build_cremona_with, CremonaMap, RoundTripTranscript};
use crate::poly::MultiPoly;
use crate::projective::{
    complete_basis, failure_log2, find_nonproportional, generic_injectivity_heuristic, pointwise_equal,
    projection_matrix, Equality, Injectivity, ProjPoint,
};
use crate::sample::{fork_seed, random_point, seeded, SeededRng};
use crate::system::{pad_zeros, sub_system_a0, systems_equal_as_maps, target_system, LinearSystem};

pub const CERTIFICATE_VERSION: &str = "cremona-chain/1";
/// Point pairs used by the injectivity heuristic on the inputs.
pub const INJECTIVITY_PAIRS: usize = 20;

/// Validated input: `L` and `G` of equal length `n + 1` on `P^r`, with the
/// transpositions that bring a nonzero entry to slot 0 of each.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainInput<F: Field> {
    pub r: usize,
    pub n: usize,
    pub l: LinearSystem<F>,
    pub g: LinearSystem<F>,
    pub l_perm: Vec<usize>,
    pub g_perm: Vec<usize>,
}

impl<F: Field> ChainInput<F> {
    /// Pads `G` with zeros and checks the hypothesis `n >= r + 2`.
    pub fn new(l: LinearSystem<F>, g: LinearSystem<F>) -> Result<Self> {
        if l.param_vars() != g.param_vars() {
            return Err(Error::VarCountMismatch(l.param_vars(), g.param_vars()));
        }
        let r = l.param_vars() - 1;
        if l.len() < 2 {
            return Err(Error::InvalidInput("L must have at least two entries".into()));
        }
        let n = l.len() - 1;
        if g.len() > n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                got: g.len(),
            });
        }
        if n < r + 2 {
            return Err(Error::HypothesisViolation { r, n });
        }
        let g = pad_zeros(&g, n)?;
        let l_perm = l.leading_permutation();
        let g_perm = g.leading_permutation();
        Ok(Self {
            r,
            n,
            l,
            g,
            l_perm,
            g_perm,
        })
    }

    /// `L` with its leading permutation applied.
    pub fn l_permuted(&self) -> LinearSystem<F> {
        self.l.permuted(&self.l_perm).expect("valid permutation").with_label("L'")
    }

    pub fn g_permuted(&self) -> LinearSystem<F> {
        self.g.permuted(&self.g_perm).expect("valid permutation").with_label("G'")
    }

    pub fn a0(&self, field: &F) -> Result<LinearSystem<F>> {
        sub_system_a0(field, &self.l_permuted(), &self.g_permuted())
    }

    /// `G_{L_0} = L_0 G'`, the system the chain must end at.
    pub fn target(&self, field: &F) -> Result<LinearSystem<F>> {
        target_system(field, &self.l_permuted(), &self.g_permuted())
    }

    /// `H_i = (A_i, L_0 G_{i+1})`.
    pub fn h(&self, field: &F, i: usize, a: &LinearSystem<F>) -> Result<LinearSystem<F>> {
        let l0 = self.l_permuted().entry(0).clone();
        let extra = l0.mul(field, self.g_permuted().entry(i + 1))?;
        a.appended(extra, format!("H{i}"))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepTranscript {
    pub seed: u64,
    pub q2_attempts: usize,
    /// Error messages of the rejected `q2` choices.
    pub failures: Vec<String>,
    pub k_log: Vec<KAttempt>,
    pub roundtrip: RoundTripTranscript,
    pub conjugation_trials: usize,
    pub conjugation_failure_log2: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainStep<F: Field> {
    pub index: usize,
    pub a: LinearSystem<F>,
    pub h: LinearSystem<F>,
    pub q2: Vec<F::Elem>,
    pub map: CremonaMap<F>,
    pub a_next: LinearSystem<F>,
    pub transcript: StepTranscript,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EndToEnd {
    pub seed: u64,
    pub trials: usize,
    pub forward_passes: usize,
    pub backward_passes: usize,
    pub resamples: usize,
    pub failure_log2: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChainCertificate<F: Field> {
    pub version: String,
    pub seed: u64,
    pub input: ChainInput<F>,
    pub injectivity: InjectivityVerdicts,
    pub steps: Vec<ChainStep<F>>,
    /// Index at which `A_i` already induced the target map.
    pub shortcut: Option<usize>,
    pub end_to_end: Option<EndToEnd>,
}

/// Heuristic birationality verdicts for `φ_L` and `φ_G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InjectivityVerdicts {
    pub pairs: usize,
    pub l_collision: bool,
    pub g_collision: bool,
}

/// A failed run: the error and everything built before it.
#[derive(Clone, Debug)]
pub struct ChainAbort<F: Field> {
    pub error: Error,
    pub partial: ChainCertificate<F>,
}

impl<F: Field> From<ChainAbort<F>> for Error {
    fn from(a: ChainAbort<F>) -> Self {
        a.error
    }
}

/// The `q2`-side projection rows, reordered so that the coordinate read off
/// `e_{n+1}` lands in slot `i + 1`.
pub fn step_projection<F: Field>(field: &F, q2: &ProjPoint<F>, i: usize) -> Result<Vec<Vec<F::Elem>>> {
    let dim = q2.coords().len();
    let rows = projection_matrix(field, q2)?;
    let chosen = complete_basis(field, &[q2.coords().to_vec()], dim)?;
    let last = chosen
        .iter()
        .position(|&j| j == dim - 1)
        .ok_or_else(|| Error::InvalidInput("q2 must have a zero last coordinate".into()))?;
    if last <= i {
        return Err(Error::InvalidInput("q2 violates the coordinate pattern of the step".into()));
    }
    let mut out: Vec<Vec<F::Elem>> = rows[..=i].to_vec();
    out.push(rows[last].clone());
    out.extend(rows[i + 1..last].iter().cloned());
    out.extend(rows[last + 1..].iter().cloned());
    Ok(out)
}

/// Entry `j` is `sum_t rows[j][t] * H_t` (zero coefficients skipped, so
/// unit rows copy entries verbatim).
pub fn push_forward<F: Field>(
    field: &F,
    rows: &[Vec<F::Elem>],
    h: &LinearSystem<F>,
    label: impl Into<String>,
) -> Result<LinearSystem<F>> {
    let entries = rows
        .iter()
        .map(|row| {
            let mut acc = MultiPoly::zero(h.param_vars(), h.degree());
            for (c, e) in row.iter().zip(h.entries()) {
                if field.is_zero(c) {
                    continue;
                }
                let term = if field.is_one(c) { e.clone() } else { e.scalar_mul(field, c) };
                acc = acc.add(field, &term)?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>>>()?;
    LinearSystem::new(label, entries)
}

/// Checks the syntactic prefix `A_{i+1}[0..=i+1] = L_0 G_0, ..., L_0 G_{i+1}`.
pub fn check_prefix<F: Field>(a: &LinearSystem<F>, target: &LinearSystem<F>, upto: usize) -> bool {
    a.entries()[..=upto] == target.entries()[..=upto]
}

/// `Φ ∘ φ_A ≡ φ_B`, evaluated pointwise.
pub fn check_conjugation<F: Field, R: Rng + ?Sized>(
    field: &F,
    map: &CremonaMap<F>,
    a: &LinearSystem<F>,
    b: &LinearSystem<F>,
    config: &RunConfig,
    rng: &mut R,
) -> Result<Equality<F>> {
    let nonzero = |v: Vec<F::Elem>| if v.iter().all(|x| field.is_zero(x)) { None } else { Some(v) };
    let degree = u64::from(map.forward().degree() * a.degree() + b.degree());
    pointwise_equal(
        field,
        a.param_vars(),
        degree,
        config.trials,
        config.resample_cap,
        rng,
        |s| {
            let Some(x) = nonzero(a.eval(field, s)?) else {
                return Ok(None);
            };
            Ok(nonzero(map.forward().eval(field, &x)?))
        },
        |s| Ok(nonzero(b.eval(field, s)?)),
    )
}

fn random_q2<F: Field, R: Rng + ?Sized>(field: &F, n: usize, i: usize, rng: &mut R) -> Vec<F::Elem> {
    let mut q = vec![field.zero(); n + 2];
    for slot in q.iter_mut().take(n + 1).skip(i + 1) {
        *slot = field.random_nonzero(rng);
    }
    q
}

/// Draws points of `Y_i = φ_H(P^r)` and returns them in the coordinates
/// adapted to `m`.
fn sample_adapted<F: Field, R: Rng + ?Sized>(
    field: &F,
    h: &LinearSystem<F>,
    m_inv: &LinearMatrix<F>,
    count: usize,
    cap: usize,
    rng: &mut R,
) -> Result<Vec<Vec<F::Elem>>> {
    let mut out = Vec::with_capacity(count);
    let mut misses = 0;
    while out.len() < count {
        let s = random_point(field, h.param_vars(), rng);
        let y = h.eval(field, &s)?;
        if y.iter().all(|v| field.is_zero(v)) {
            misses += 1;
            if misses > cap {
                return Err(Error::ResampleCapExceeded(cap));
            }
            continue;
        }
        out.push(m_inv.apply(field, &y)?);
    }
    Ok(out)
}

fn recoverable(e: &Error) -> bool {
    !matches!(
        e,
        Error::KMaxExceeded { .. }
            | Error::HypothesisViolation { .. }
            | Error::Parse(_)
            | Error::InvalidInput(_)
            | Error::DimensionMismatch { .. }
            | Error::VarCountMismatch(..)
            | Error::DegreeMismatch(..)
    )
}

/// One step of the chain, retrying with a fresh `q2` on recoverable errors.
pub fn chain_step<F: Field, R: Rng + ?Sized>(
    field: &F,
    input: &ChainInput<F>,
    i: usize,
    a: &LinearSystem<F>,
    config: &RunConfig,
    rng: &mut R,
) -> Result<ChainStep<F>> {
    let n = input.n;
    if i >= n {
        return Err(Error::InvalidInput(format!("step index {i} out of range")));
    }
    let target = input.target(field)?;
    if !check_prefix(a, &target, i) {
        return Err(Error::StepVerificationFailure {
            step: i,
            detail: "A_i does not start with L0*G0..L0*Gi".into(),
        });
    }
    let h = input.h(field, i, a)?;
    let mut failures = Vec::new();
    for attempt in 1..=config.q2_retries {
        let seed = fork_seed(rng);
        let mut local = seeded(seed);
        let q2 = random_q2(field, n, i, &mut local);
        match try_step(field, input, i, a, &h, &target, &q2, config, &mut local) {
            Ok((map, a_next, k_log, conj)) => {
                let roundtrip = map.inverse_witness().cloned().expect("certified map");
                let Equality::Equal { trials, failure_log2 } = conj else {
                    unreachable!("accepted steps carry an equality");
                };
                return Ok(ChainStep {
                    index: i,
                    a: a.clone(),
                    h,
                    q2,
                    map,
                    a_next,
                    transcript: StepTranscript {
                        seed,
                        q2_attempts: attempt,
                        failures,
                        k_log,
                        roundtrip,
                        conjugation_trials: trials,
                        conjugation_failure_log2: failure_log2,
                    },
                });
            }
            Err(e) if recoverable(&e) => failures.push(e.to_string()),
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetriesExhausted {
        step: i,
        attempts: config.q2_retries,
        last: failures.last().cloned().unwrap_or_default(),
    })
}

type StepParts<F> = (CremonaMap<F>, LinearSystem<F>, Vec<KAttempt>, Equality<F>);

#[allow(clippy::too_many_arguments)]
fn try_step<F: Field>(
    field: &F,
    input: &ChainInput<F>,
    i: usize,
    a: &LinearSystem<F>,
    h: &LinearSystem<F>,
    target: &LinearSystem<F>,
    q2: &[F::Elem],
    config: &RunConfig,
    rng: &mut SeededRng,
) -> Result<StepParts<F>> {
    let n = input.n;
    let q1 = ProjPoint::vertex(field, n + 1, n + 1);
    let q2p = ProjPoint::new(field, q2.to_vec())?;
    let m = adapt_coordinates(field, &q1, &q2p, n)?;
    let m_inv = m.inverse(field)?;
    let cap = config.resample_cap;
    let (surface, k_log) = find_min_k(
        field,
        |count, rng: &mut SeededRng| sample_adapted(field, h, &m_inv, count, cap, rng),
        n,
        &m,
        config.k_max,
        config.solution_retries,
        rng,
    )?;
    let p1 = projection_matrix(field, &q1)?;
    let p2 = step_projection(field, &q2p, i)?;
    let mut map = build_cremona_with(field, &surface, &p1, &p2)?;
    map.certify(field, config.trials, rng)?;
    let a_next = push_forward(field, &p2, h, format!("A{}", i + 1))?;
    if !check_prefix(&a_next, target, i + 1) {
        return Err(Error::StepVerificationFailure {
            step: i,
            detail: "prefix invariant broken".into(),
        });
    }
    let conj = check_conjugation(field, &map, a, &a_next, config, rng)?;
    if let Equality::NotEqual { point, .. } = &conj {
        let pt: Vec<String> = point.iter().map(|v| field.format(v)).collect();
        return Err(Error::StepVerificationFailure {
            step: i,
            detail: format!("Φ_i ∘ φ_A_i differs from φ_A_(i+1) at [{}]", pt.join(" : ")),
        });
    }
    Ok((map, a_next, k_log, conj))
}

fn inverse_perm(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

fn permute<T: Clone>(v: &[T], perm: &[usize]) -> Vec<T> {
    perm.iter().map(|&j| v[j].clone()).collect()
}

/// Pushes `φ_L` samples through the forward maps and `φ_G` samples through
/// the backward maps in reverse, comparing with the other side.
pub fn check_end_to_end<F: Field>(
    field: &F,
    input: &ChainInput<F>,
    maps: &[&CremonaMap<F>],
    trials: usize,
    resample_cap: usize,
    seed: u64,
) -> Result<EndToEnd> {
    let mut rng = seeded(seed);
    let l_inv = inverse_perm(&input.l_perm);
    let g_inv = inverse_perm(&input.g_perm);
    let nonzero = |v: &[F::Elem]| v.iter().any(|x| !field.is_zero(x));
    let mut resamples = 0;
    let mut passes = [0usize; 2];
    for (dir, pass) in passes.iter_mut().enumerate() {
        while *pass < trials {
            let s = random_point(field, input.r + 1, &mut rng);
            let (src, dst) = if dir == 0 {
                (input.l.eval(field, &s)?, input.g.eval(field, &s)?)
            } else {
                (input.g.eval(field, &s)?, input.l.eval(field, &s)?)
            };
            let mut x = if dir == 0 { permute(&src, &input.l_perm) } else { permute(&src, &input.g_perm) };
            let mut ok = nonzero(&src) && nonzero(&dst);
            if ok {
                if dir == 0 {
                    for m in maps {
                        x = m.forward().eval(field, &x)?;
                        ok &= nonzero(&x);
                    }
                } else {
                    for m in maps.iter().rev() {
                        x = m.backward().eval(field, &x)?;
                        ok &= nonzero(&x);
                    }
                }
            }
            if !ok {
                resamples += 1;
                if resamples > resample_cap {
                    return Err(Error::ResampleCapExceeded(resample_cap));
                }
                continue;
            }
            let y = if dir == 0 { permute(&x, &g_inv) } else { permute(&x, &l_inv) };
            if find_nonproportional(field, &y, &dst).is_some() {
                let pt: Vec<String> = s.iter().map(|v| field.format(v)).collect();
                let which = if dir == 0 { "Φ ∘ φ_L vs φ_G" } else { "Φ⁻¹ ∘ φ_G vs φ_L" };
                return Err(Error::VerificationFailed(format!("end-to-end ({which}) fails at parameters [{}]", pt.join(" : "))));
            }
            *pass += 1;
        }
    }
    let k_prod: u64 = maps.iter().map(|m| u64::from(m.forward().degree())).product();
    let degree = u64::from(input.l.degree()) * k_prod + u64::from(input.g.degree());
    Ok(EndToEnd {
        seed,
        trials,
        forward_passes: passes[0],
        backward_passes: passes[1],
        resamples,
        failure_log2: failure_log2(field, degree, trials),
    })
}

pub fn injectivity_verdicts<F: Field, R: Rng + ?Sized>(
    field: &F,
    input: &ChainInput<F>,
    rng: &mut R,
) -> Result<InjectivityVerdicts> {
    let check = |s: &LinearSystem<F>, rng: &mut R| -> Result<bool> {
        Ok(matches!(
            generic_injectivity_heuristic(field, &s.to_map(), INJECTIVITY_PAIRS, rng)?,
            Injectivity::Collision { .. }
        ))
    };
    Ok(InjectivityVerdicts {
        pairs: INJECTIVITY_PAIRS,
        l_collision: check(&input.l, rng)?,
        g_collision: check(&input.g, rng)?,
    })
}

/// Runs the whole chain and checks it end to end.
pub fn run_chain<F: Field>(
    field: &F,
    l: LinearSystem<F>,
    g: LinearSystem<F>,
    config: &RunConfig,
) -> std::result::Result<ChainCertificate<F>, Box<ChainAbort<F>>> {
    let early = |error: Error| {
        Box::new(ChainAbort {
            error,
            partial: ChainCertificate {
                version: CERTIFICATE_VERSION.into(),
                seed: config.seed,
                input: ChainInput {
                    r: 0,
                    n: 0,
                    l: l.clone(),
                    g: g.clone(),
                    l_perm: Vec::new(),
                    g_perm: Vec::new(),
                },
                injectivity: InjectivityVerdicts {
                    pairs: 0,
                    l_collision: false,
                    g_collision: false,
                },
                steps: Vec::new(),
                shortcut: None,
                end_to_end: None,
            },
        })
    };
    if let Err(e) = config.validate() {
        return Err(early(e));
    }
    let input = match ChainInput::new(l.clone(), g.clone()) {
        Ok(i) => i,
        Err(e) => return Err(early(e)),
    };
    let mut rng = seeded(config.seed);
    let injectivity = match injectivity_verdicts(field, &input, &mut rng) {
        Ok(v) => v,
        Err(e) => return Err(early(e)),
    };
    let mut cert = ChainCertificate {
        version: CERTIFICATE_VERSION.into(),
        seed: config.seed,
        input,
        injectivity,
        steps: Vec::new(),
        shortcut: None,
        end_to_end: None,
    };
    match extend_chain(field, &mut cert, config, &mut rng) {
        Ok(()) => Ok(cert),
        Err(error) => Err(Box::new(ChainAbort { error, partial: cert })),
    }
}

fn extend_chain<F: Field>(
    field: &F,
    cert: &mut ChainCertificate<F>,
    config: &RunConfig,
    rng: &mut SeededRng,
) -> Result<()> {
    let input = cert.input.clone();
    let target = input.target(field)?;
    let mut a = input.a0(field)?;
    for i in 0..input.n {
        if config.early_termination && systems_equal_as_maps(field, &a, &target, config.trials, rng)?.is_equal() {
            cert.shortcut = Some(i);
            break;
        }
        let step = chain_step(field, &input, i, &a, config, rng)?;
        a = step.a_next.clone();
        cert.steps.push(step);
    }
    if cert.shortcut.is_none() && a.entries() != target.entries() {
        return Err(Error::StepVerificationFailure {
            step: input.n - 1,
            detail: "final system differs from L0*G".into(),
        });
    }
    let maps: Vec<&CremonaMap<F>> = cert.steps.iter().map(|s| &s.map).collect();
    let seed = fork_seed(rng);
    cert.end_to_end = Some(check_end_to_end(field, &input, &maps, config.trials, config.resample_cap, seed)?);
    Ok(())
}

/// One named check performed by [`verify_certificate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub step: Option<usize>,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn record(&mut self, name: &str, step: Option<usize>, outcome: Result<()>) -> bool {
        let passed = outcome.is_ok();
        self.checks.push(Check {
            name: name.into(),
            step,
            passed,
            detail: outcome.err().map(|e| e.to_string()).unwrap_or_default(),
        });
        passed
    }
}

fn fail(msg: impl Into<String>) -> Result<()> {
    Err(Error::VerificationFailed(msg.into()))
}

/// Re-checks every claim of a certificate with fresh randomness.
pub fn verify_certificate<F: Field, R: Rng + ?Sized>(
    field: &F,
    cert: &ChainCertificate<F>,
    trials: usize,
    rng: &mut R,
) -> VerificationReport {
    let mut report = VerificationReport::default();
    let config = RunConfig {
        trials,
        ..RunConfig::default()
    };
    let input = &cert.input;
    let rebuilt = ChainInput::new(input.l.clone(), input.g.clone());
    let input_ok = match &rebuilt {
        Ok(r) => r == input,
        Err(_) => false,
    };
    report.record(
        "input",
        None,
        if input_ok { Ok(()) } else { fail("input echo does not re-validate") },
    );
    if !input_ok {
        return report;
    }
    let (target, mut a) = match (input.target(field), input.a0(field)) {
        (Ok(t), Ok(a)) => (t, a),
        (Err(e), _) | (_, Err(e)) => {
            report.record("A0", None, Err(e));
            return report;
        }
    };
    for step in &cert.steps {
        let i = step.index;
        let s = Some(i);
        report.record(
            "A_i",
            s,
            if step.a == a { Ok(()) } else { fail("A_i does not match the previous step") },
        );
        let h = match input.h(field, i, &a) {
            Ok(h) => h,
            Err(e) => {
                report.record("H_i", s, Err(e));
                return report;
            }
        };
        report.record("q2 pattern", s, check_q2(field, input.n, i, &step.q2));
        let q1 = ProjPoint::vertex(field, input.n + 1, input.n + 1);
        let frames = ProjPoint::new(field, step.q2.clone()).and_then(|q2| {
            let m = adapt_coordinates(field, &q1, &q2, input.n)?;
            let p1 = projection_matrix(field, &q1)?;
            let p2 = step_projection(field, &q2, i)?;
            Ok((m, p1, p2))
        });
        let (m, p1, p2) = match frames {
            Ok(f) => f,
            Err(e) => {
                report.record("adaptation", s, Err(e));
                return report;
            }
        };
        let surface = step.map.surface();
        report.record(
            "adaptation",
            s,
            if *surface.adaptation() == m { Ok(()) } else { fail("adaptation matrix differs from the canonical one") },
        );
        report.record("witnesses", s, surface.validate(field));
        report.record("S contains Y_i", s, check_vanishing(field, &h, surface, trials, rng));
        let expected = build_cremona_with(field, surface, &p1, &p2);
        report.record(
            "Φ_i closed form",
            s,
            match &expected {
                Ok(e) if e.forward() == step.map.forward() && e.backward() == step.map.backward() => Ok(()),
                Ok(e) => {
                    let which = if e.forward() != step.map.forward() { "forward" } else { "backward" };
                    fail(format!("{which} map differs from the one induced by S"))
                }
                Err(err) => Err(err.clone()),
            },
        );
        report.record("round trip", s, step.map.verify_roundtrip(field, trials, rng).map(|_| ()));
        let next = push_forward(field, &p2, &h, format!("A{}", i + 1));
        report.record(
            "A_(i+1)",
            s,
            match &next {
                Ok(nx) if *nx == step.a_next => Ok(()),
                Ok(_) => fail("A_(i+1) is not the projection of H_i from q2"),
                Err(e) => Err(e.clone()),
            },
        );
        report.record(
            "prefix",
            s,
            if check_prefix(&step.a_next, &target, i + 1) { Ok(()) } else { fail("prefix invariant broken") },
        );
        let conj = check_conjugation(field, &step.map, &a, &step.a_next, &config, rng);
        report.record(
            "conjugation",
            s,
            match conj {
                Ok(Equality::Equal { .. }) => Ok(()),
                Ok(Equality::NotEqual { point, .. }) => {
                    let pt: Vec<String> = point.iter().map(|v| field.format(v)).collect();
                    fail(format!("differs at parameters [{}]", pt.join(" : ")))
                }
                Err(e) => Err(e),
            },
        );
        a = step.a_next.clone();
    }
    let expected_steps = cert.shortcut.unwrap_or(input.n);
    report.record(
        "step count",
        None,
        if cert.steps.len() == expected_steps && cert.steps.iter().enumerate().all(|(j, st)| st.index == j) {
            Ok(())
        } else {
            fail(format!("expected {expected_steps} consecutive steps, found {}", cert.steps.len()))
        },
    );
    let final_check = match cert.shortcut {
        None => {
            if a.entries() == target.entries() {
                Ok(())
            } else {
                fail("final system differs from L0*G")
            }
        }
        Some(_) => match systems_equal_as_maps(field, &a, &target, trials, rng) {
            Ok(Equality::Equal { .. }) => Ok(()),
            Ok(_) => fail("shortcut system does not induce the target map"),
            Err(e) => Err(e),
        },
    };
    report.record("final system", None, final_check);
    let maps: Vec<&CremonaMap<F>> = cert.steps.iter().map(|s| &s.map).collect();
    let e2e = check_end_to_end(field, input, &maps, trials, RunConfig::default().resample_cap, fork_seed(rng));
    report.record("end to end", None, e2e.map(|_| ()));
    report
}

fn check_q2<F: Field>(field: &F, n: usize, i: usize, q2: &[F::Elem]) -> Result<()> {
    if q2.len() != n + 2 {
        return fail("q2 has the wrong length");
    }
    let zeros_ok = q2[..=i].iter().all(|v| field.is_zero(v)) && field.is_zero(&q2[n + 1]);
    if !zeros_ok {
        return fail("q2 is not in {x_0 = ... = x_i = x_(n+1) = 0}");
    }
    if q2.iter().all(|v| field.is_zero(v)) {
        return fail("q2 is zero");
    }
    Ok(())
}

fn check_vanishing<F: Field, R: Rng + ?Sized>(
    field: &F,
    h: &LinearSystem<F>,
    surface: &crate::bimonoid::BiMonoidSurface<F>,
    trials: usize,
    rng: &mut R,
) -> Result<()> {
    let m_inv = surface.adaptation().inverse(field)?;
    for z in sample_adapted(field, h, &m_inv, trials, RunConfig::default().resample_cap, rng)? {
        if !field.is_zero(&surface.eval_adapted(field, &z)?) {
            return fail("S does not vanish on a fresh sample of Y_i");
        }
    }
    Ok(())
}
