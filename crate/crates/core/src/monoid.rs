//! The Cremona transformation induced by a bi-monoid hypersurface.
//!
//! Projecting `S` from `q1` and from `q2` gives two birational maps onto
//! `P^n`. Composing one with the inverse of the other yields a Cremona map
//! with an explicit inverse. In adapted coordinates, with `u = a x_n + b` and
//! `w = a y + c`:
//!
//! ```text
//! forward  [x_0 : ... : x_n]     = [x_0 u : ... : x_{n-1} u : -(c x_n + d)]
//! backward [x_0 : ... : x_{n-1} : y] = [x_0 w : ... : x_{n-1} w : -(b y + d)]
//! ```
//!
//! and `backward(forward(x)) = x * u^{k-1} * (bc - ad)` identically.

use rand::Rng;

use crate::bimonoid::BiMonoidSurface;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::LinearMatrix;
use crate::poly::MultiPoly;
use crate::projective::{compose, failure_log2, find_nonproportional, projection_matrix, ProjPoint, RationalMap, DEFAULT_RESAMPLE_CAP};
use crate::sample::{fork_seed, random_point, seeded};

/// Counts from a randomized round-trip check.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundTripTranscript {
    pub seed: u64,
    pub trials: usize,
    /// Points passing `backward ∘ forward ~ id`.
    pub forward_then_backward: usize,
    /// Points passing `forward ∘ backward ~ id`.
    pub backward_then_forward: usize,
    /// Points discarded for lying on an exceptional locus.
    pub resamples: usize,
    pub failure_log2: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CremonaMap<F: Field> {
    forward: RationalMap<F>,
    backward: RationalMap<F>,
    surface: BiMonoidSurface<F>,
    /// `T1`: adapted q1-side coordinates `(z_0..z_n)` to source coordinates.
    source_frame: LinearMatrix<F>,
    /// `T`: adapted q2-side coordinates `(z_0..z_{n-1}, z_{n+1})` to target
    /// coordinates.
    target_frame: LinearMatrix<F>,
    inverse_witness: Option<RoundTripTranscript>,
}

fn lift_forms<F: Field>(s: &BiMonoidSurface<F>) -> [MultiPoly<F>; 4] {
    let n = s.n();
    let slots: Vec<usize> = (0..n).collect();
    s.forms().map(|p| p.embed(n + 1, &slots).expect("valid slots"))
}

/// `[x_0 u : ... : x_{n-1} u : -(c x_n + d)]` on `P^n`.
pub fn adapted_forward<F: Field>(field: &F, s: &BiMonoidSurface<F>) -> RationalMap<F> {
    let [a, b, c, d] = lift_forms(s);
    half_map(field, s.n(), &a, &b, &c, &d)
}

/// `[x_0 w : ... : x_{n-1} w : -(b y + d)]` on `P^n`, with `y` the last variable.
pub fn adapted_backward<F: Field>(field: &F, s: &BiMonoidSurface<F>) -> RationalMap<F> {
    let [a, b, c, d] = lift_forms(s);
    half_map(field, s.n(), &a, &c, &b, &d)
}

/// Shared shape of both halves: `[x_j (p x_n + q) : -(r x_n + d)]`.
fn half_map<F: Field>(
    field: &F,
    n: usize,
    p: &MultiPoly<F>,
    q: &MultiPoly<F>,
    r: &MultiPoly<F>,
    d: &MultiPoly<F>,
) -> RationalMap<F> {
    let last = MultiPoly::var(field, n + 1, n);
    let u = p.mul(field, &last).unwrap().add(field, q).unwrap();
    let mut comps: Vec<MultiPoly<F>> = (0..n)
        .map(|j| MultiPoly::var(field, n + 1, j).mul(field, &u).unwrap())
        .collect();
    comps.push(r.mul(field, &last).unwrap().add(field, d).unwrap().neg(field));
    RationalMap::new(n, comps).expect("well-formed half map")
}

/// Square matrix `P * M` with column `drop` removed, after checking that
/// column is zero (that is, `P` kills the projection center).
fn frame<F: Field>(field: &F, proj: &[Vec<F::Elem>], m: &LinearMatrix<F>, drop: usize) -> Result<LinearMatrix<F>> {
    let dim = m.dim();
    if proj.len() + 1 != dim || proj.iter().any(|r| r.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim - 1,
            got: proj.len(),
        });
    }
    let mut rows = Vec::with_capacity(dim - 1);
    for r in proj {
        let full: Vec<F::Elem> = (0..dim)
            .map(|j| {
                (0..dim).fold(field.zero(), |acc, t| field.add(&acc, &field.mul(&r[t], m.get(t, j))))
            })
            .collect();
        if !field.is_zero(&full[drop]) {
            return Err(Error::InvalidInput("projection does not vanish at its center".into()));
        }
        rows.push(full.into_iter().enumerate().filter(|(j, _)| *j != drop).map(|(_, v)| v).collect());
    }
    let t = LinearMatrix::from_rows(field, rows)?;
    if !t.is_invertible(field) {
        return Err(Error::SingularMatrix);
    }
    Ok(t)
}

/// The frames `(T1, T)` relating adapted coordinates to the source and target
/// copies of `P^n` picked out by the projection rows `p1`, `p2`.
pub fn frames<F: Field>(
    field: &F,
    s: &BiMonoidSurface<F>,
    p1: &[Vec<F::Elem>],
    p2: &[Vec<F::Elem>],
) -> Result<(LinearMatrix<F>, LinearMatrix<F>)> {
    let n = s.n();
    Ok((frame(field, p1, s.adaptation(), n + 1)?, frame(field, p2, s.adaptation(), n)?))
}

/// Builds the Cremona map of `S` using the default projections from
/// `q1 = M e_{n+1}` and `q2 = M e_n`.
pub fn build_cremona<F: Field>(field: &F, s: &BiMonoidSurface<F>) -> Result<CremonaMap<F>> {
    let m = s.adaptation();
    let q1 = ProjPoint::new(field, m.column(s.n() + 1))?;
    let q2 = ProjPoint::new(field, m.column(s.n()))?;
    build_cremona_with(field, s, &projection_matrix(field, &q1)?, &projection_matrix(field, &q2)?)
}

/// Builds the Cremona map of `S` with explicit projection rows.
///
/// `p1` and `p2` are `(n+1) x (n+2)` matrices of projections from `q1` and
/// `q2` (in original coordinates); they fix the coordinates on the source
/// and target copies of `P^n`.
pub fn build_cremona_with<F: Field>(
    field: &F,
    s: &BiMonoidSurface<F>,
    p1: &[Vec<F::Elem>],
    p2: &[Vec<F::Elem>],
) -> Result<CremonaMap<F>> {
    s.validate(field)?;
    let (t1, t) = frames(field, s, p1, p2)?;
    let forward = adapted_forward(field, s)
        .pre_linear(field, &t1.inverse(field)?)?
        .post_linear(field, &t)?;
    let backward = adapted_backward(field, s)
        .pre_linear(field, &t.inverse(field)?)?
        .post_linear(field, &t1)?;
    Ok(CremonaMap {
        forward,
        backward,
        surface: s.clone(),
        source_frame: t1,
        target_frame: t,
        inverse_witness: None,
    })
}

impl<F: Field> CremonaMap<F> {
    /// Reassembles a map from stored parts without recomputing anything.
    pub fn from_parts(
        forward: RationalMap<F>,
        backward: RationalMap<F>,
        surface: BiMonoidSurface<F>,
        source_frame: LinearMatrix<F>,
        target_frame: LinearMatrix<F>,
        inverse_witness: Option<RoundTripTranscript>,
    ) -> Self {
        Self {
            forward,
            backward,
            surface,
            source_frame,
            target_frame,
            inverse_witness,
        }
    }

    pub fn forward(&self) -> &RationalMap<F> {
        &self.forward
    }

    pub fn backward(&self) -> &RationalMap<F> {
        &self.backward
    }

    pub fn surface(&self) -> &BiMonoidSurface<F> {
        &self.surface
    }

    pub fn source_frame(&self) -> &LinearMatrix<F> {
        &self.source_frame
    }

    pub fn target_frame(&self) -> &LinearMatrix<F> {
        &self.target_frame
    }

    pub fn inverse_witness(&self) -> Option<&RoundTripTranscript> {
        self.inverse_witness.as_ref()
    }

    pub fn set_inverse_witness(&mut self, t: RoundTripTranscript) {
        self.inverse_witness = Some(t);
    }

    /// Replaces the backward map; used to build negative controls.
    pub fn with_backward(mut self, backward: RationalMap<F>) -> Result<Self> {
        if backward.source_dim() != self.backward.source_dim() || backward.target_dim() != self.backward.target_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.backward.target_dim(),
                got: backward.target_dim(),
            });
        }
        self.backward = backward;
        Ok(self)
    }

    pub fn with_forward(mut self, forward: RationalMap<F>) -> Result<Self> {
        if forward.source_dim() != self.forward.source_dim() || forward.target_dim() != self.forward.target_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.forward.target_dim(),
                got: forward.target_dim(),
            });
        }
        self.forward = forward;
        Ok(self)
    }

    /// True when `x` (source coordinates) avoids `{u = 0} ∪ {bc - ad = 0}`.
    fn source_is_regular(&self, field: &F, inv_t1: &LinearMatrix<F>, x: &[F::Elem]) -> Result<bool> {
        let z = inv_t1.apply(field, x)?;
        self.adapted_is_regular(field, &z, true)
    }

    fn target_is_regular(&self, field: &F, inv_t: &LinearMatrix<F>, y: &[F::Elem]) -> Result<bool> {
        let z = inv_t.apply(field, y)?;
        self.adapted_is_regular(field, &z, false)
    }

    fn adapted_is_regular(&self, field: &F, z: &[F::Elem], source_side: bool) -> Result<bool> {
        let s = &self.surface;
        let n = s.n();
        let base = &z[..n];
        let [a, b, c, d] = s.forms().map(|p| p.eval(field, base));
        let (a, b, c, d) = (a?, b?, c?, d?);
        let lin = if source_side { &b } else { &c };
        let factor = field.add(&field.mul(&a, &z[n]), lin);
        let minor = field.sub(&field.mul(&b, &c), &field.mul(&a, &d));
        Ok(!field.is_zero(&factor) && !field.is_zero(&minor))
    }

    /// Checks both compositions at `trials` random regular points each.
    pub fn verify_roundtrip<R: Rng + ?Sized>(&self, field: &F, trials: usize, rng: &mut R) -> Result<RoundTripTranscript> {
        let seed = fork_seed(rng);
        let mut local = seeded(seed);
        let inv_t1 = self.source_frame.inverse(field)?;
        let inv_t = self.target_frame.inverse(field)?;
        let dim = self.forward.source_dim() + 1;
        let mut resamples = 0;
        let mut passes = [0usize; 2];
        for (dir, pass) in passes.iter_mut().enumerate() {
            let (first, second) = if dir == 0 {
                (&self.forward, &self.backward)
            } else {
                (&self.backward, &self.forward)
            };
            while *pass < trials {
                let x = random_point(field, dim, &mut local);
                let regular = if dir == 0 {
                    self.source_is_regular(field, &inv_t1, &x)?
                } else {
                    self.target_is_regular(field, &inv_t, &x)?
                };
                if !regular {
                    resamples += 1;
                    if resamples > DEFAULT_RESAMPLE_CAP {
                        return Err(Error::ResampleCapExceeded(DEFAULT_RESAMPLE_CAP));
                    }
                    continue;
                }
                let y = first.eval(field, &x)?;
                let back = second.eval(field, &y)?;
                let zero = back.iter().all(|v| field.is_zero(v));
                if zero || find_nonproportional(field, &back, &x).is_some() {
                    let pt: Vec<String> = x.iter().map(|v| field.format(v)).collect();
                    let which = if dir == 0 { "backward∘forward" } else { "forward∘backward" };
                    return Err(Error::RoundTripFailure(format!("[{}] ({which})", pt.join(" : "))));
                }
                *pass += 1;
            }
        }
        let k = u64::from(self.forward.degree());
        Ok(RoundTripTranscript {
            seed,
            trials,
            forward_then_backward: passes[0],
            backward_then_forward: passes[1],
            resamples,
            failure_log2: failure_log2(field, 2 * k * k + 1, trials),
        })
    }

    /// Runs [`Self::verify_roundtrip`] and stores the transcript.
    pub fn certify<R: Rng + ?Sized>(&mut self, field: &F, trials: usize, rng: &mut R) -> Result<&RoundTripTranscript> {
        let t = self.verify_roundtrip(field, trials, rng)?;
        self.inverse_witness = Some(t);
        Ok(self.inverse_witness.as_ref().unwrap())
    }
}

/// Exact symbolic evidence that the map is birational with the given inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolicProof<F: Field> {
    /// `u^{k-1} (bc - ad)` in adapted source coordinates.
    pub factor: MultiPoly<F>,
    /// Terms in the expanded adapted composition.
    pub expanded_terms: usize,
}

/// Largest `k` and `n` accepted by [`symbolic_roundtrip_smallcase`].
pub const SYMBOLIC_CAP: (u32, usize) = (3, 3);

/// Expands both compositions symbolically.
///
/// In adapted coordinates every component of `backward ∘ forward` must equal
/// `x_j u^{k-1} (bc - ad)` exactly; in original coordinates both
/// compositions must be the identity up to a common factor (all cross
/// products `h_i x_j - h_j x_i` vanish).
pub fn symbolic_roundtrip_smallcase<F: Field>(field: &F, m: &CremonaMap<F>) -> Result<SymbolicProof<F>> {
    let s = &m.surface;
    let (k, n) = (s.k(), s.n());
    if k > SYMBOLIC_CAP.0 || n > SYMBOLIC_CAP.1 {
        return Err(Error::CapExceeded(format!("symbolic check limited to k <= 3, n <= 3 (got k = {k}, n = {n})")));
    }
    let fwd = adapted_forward(field, s);
    let bwd = adapted_backward(field, s);
    let comp = compose(field, &bwd, &fwd)?;
    let [a, b, _, _] = lift_forms(s);
    let last = MultiPoly::var(field, n + 1, n);
    let u = a.mul(field, &last)?.add(field, &b)?;
    let slots: Vec<usize> = (0..n).collect();
    let minor = s.minor(field).embed(n + 1, &slots)?;
    let factor = u.pow(field, k - 1).mul(field, &minor)?;
    let mut terms = 0;
    for (j, h) in comp.components().iter().enumerate() {
        let expect = MultiPoly::var(field, n + 1, j).mul(field, &factor)?;
        if *h != expect {
            return Err(Error::RoundTripFailure(format!("component {j} of the adapted composition")));
        }
        terms += h.num_terms();
    }
    for (first, second) in [(&m.forward, &m.backward), (&m.backward, &m.forward)] {
        let comp = compose(field, second, first)?;
        check_identity_up_to_factor(field, &comp)?;
    }
    Ok(SymbolicProof {
        factor,
        expanded_terms: terms,
    })
}

fn check_identity_up_to_factor<F: Field>(field: &F, h: &RationalMap<F>) -> Result<()> {
    let nv = h.source_dim() + 1;
    let comps = h.components();
    for i in 0..nv {
        for j in i + 1..nv {
            let lhs = comps[i].mul(field, &MultiPoly::var(field, nv, j))?;
            let rhs = comps[j].mul(field, &MultiPoly::var(field, nv, i))?;
            if lhs != rhs {
                return Err(Error::RoundTripFailure(format!("cross product ({i}, {j}) does not vanish")));
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bimonoid::{adapt_coordinates, Witnesses};
    use crate::field::{PrimeField, Rationals};
    use crate::grammar::{ambient_vars, format_poly, parse_poly};
    use crate::projective::maps_equal_projective;
    use crate::sample::random_vector;

    fn forms<F: Field>(f: &F, n: usize, src: [&str; 4]) -> [MultiPoly<F>; 4] {
        let vars = ambient_vars(n);
        let v: Vec<&str> = vars.iter().map(String::as_str).collect();
        src.map(|s| parse_poly(f, s, &v, None).unwrap())
    }

    fn surface<F: Field>(f: &F, n: usize, k: u32, src: [&str; 4], seed: u64) -> BiMonoidSurface<F> {
        let m = LinearMatrix::identity(f, n + 2);
        let mut parts = forms(f, n, src);
        let degs = [k - 2, k - 1, k - 1, k];
        for (p, d) in parts.iter_mut().zip(degs) {
            if p.is_zero() {
                *p = MultiPoly::zero(n, d);
            }
        }
        BiMonoidSurface::with_sampled_witnesses(f, n, k, parts, m, &mut seeded(seed), 64).unwrap()
    }

    fn show<F: Field>(f: &F, m: &RationalMap<F>) -> Vec<String> {
        let vars = ambient_vars(m.source_dim() + 1);
        m.components().iter().map(|c| format_poly(f, c, &vars)).collect()
    }

    #[test]
    fn quadratic_cremona() {
        let f = Rationals;
        let s = surface(&f, 2, 2, ["1", "0", "0", "-x0*x1"], 1);
        let mut m = build_cremona(&f, &s).unwrap();
        assert_eq!(show(&f, m.forward()), ["x0*x2", "x1*x2", "x0*x1"]);
        assert_eq!(show(&f, m.backward()), ["x0*x2", "x1*x2", "x0*x1"]);
        let proof = symbolic_roundtrip_smallcase(&f, &m).unwrap();
        // u = x2, bc - ad = x0 x1
        assert_eq!(format_poly(&f, &proof.factor, &ambient_vars(3)), "x0*x1*x2");
        let t = m.certify(&f, 1000, &mut seeded(2)).unwrap();
        assert_eq!((t.forward_then_backward, t.backward_then_forward), (1000, 1000));
    }

    #[test]
    fn conic_map() {
        let f = PrimeField::default();
        let s = surface(&f, 2, 2, ["1", "0", "-x0", "x1^2"], 3);
        let m = build_cremona(&f, &s).unwrap();
        assert_eq!(show(&f, m.forward()), ["x0*x2", "x1*x2", "x0*x2 - x1^2"]);
        let proof = symbolic_roundtrip_smallcase(&f, &m).unwrap();
        // bc - ad = 0 * (-x0) - 1 * x1^2
        assert_eq!(format_poly(&f, &proof.factor, &ambient_vars(3)), "-x1^2*x2");
        m.verify_roundtrip(&f, 100, &mut seeded(4)).unwrap();
    }

    #[test]
    fn degree_below_two_is_refused() {
        let f = Rationals;
        let [_, b, c, d] = forms(&f, 2, ["0", "1", "0", "x0"]);
        let a = MultiPoly::zero(2, 0);
        let res = BiMonoidSurface::with_sampled_witnesses(&f, 2, 1, [a, b, c, d], LinearMatrix::identity(&f, 4), &mut seeded(0), 4);
        assert!(matches!(res, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn corrupted_backward_is_caught() {
        let f = PrimeField::default();
        let s = surface(&f, 2, 2, ["1", "0", "-x0", "x1^2"], 5);
        let m = build_cremona(&f, &s).unwrap();
        let mut comps = m.backward().components().to_vec();
        comps[1] = comps[1].add(&f, &MultiPoly::var(&f, 3, 0).pow(&f, 2)).unwrap();
        let bad = m.clone().with_backward(RationalMap::new(2, comps).unwrap()).unwrap();
        let err = bad.verify_roundtrip(&f, 100, &mut seeded(6)).unwrap_err();
        assert!(matches!(err, Error::RoundTripFailure(_)), "{err:?}");
        assert!(symbolic_roundtrip_smallcase(&f, &bad).is_err());
    }

    #[test]
    fn validation_rejects_broken_witness() {
        let f = PrimeField::default();
        let s = surface(&f, 2, 2, ["1", "0", "0", "-x0*x1"], 7);
        let mut w = s.witnesses().clone();
        w.u_point[0] = f.add(&w.u_point[0], &f.one());
        let parts = s.forms().map(Clone::clone);
        let res = BiMonoidSurface::from_parts(&f, 2, 2, parts, s.adaptation().clone(), w);
        assert!(matches!(res, Err(Error::DegenerateSurface(_))));

        let zero_minor: Witnesses<PrimeField> = Witnesses {
            minor_point: vec![0, 1],
            ..s.witnesses().clone()
        };
        let parts = s.forms().map(Clone::clone);
        let res = BiMonoidSurface::from_parts(&f, 2, 2, parts, s.adaptation().clone(), zero_minor);
        assert!(matches!(res, Err(Error::DegenerateSurface(_))));
    }

    fn random_surface(f: &PrimeField, n: usize, k: u32, rng: &mut crate::sample::SeededRng) -> BiMonoidSurface<PrimeField> {
        let degs = [k - 2, k - 1, k - 1, k];
        let parts = degs.map(|d| {
            let mons = crate::poly::monomials(n, d);
            let coeffs: Vec<u64> = random_vector(f, mons.len(), rng);
            MultiPoly::from_terms(f, n, d, mons.into_iter().zip(coeffs)).unwrap()
        });
        let q1 = ProjPoint::new(f, random_point(f, n + 2, rng)).unwrap();
        let q2 = ProjPoint::new(f, random_point(f, n + 2, rng)).unwrap();
        let m = adapt_coordinates(f, &q1, &q2, n).unwrap();
        BiMonoidSurface::with_sampled_witnesses(f, n, k, parts, m, rng, 64).unwrap()
    }

    #[test]
    fn random_surfaces_symbolic_small() {
        let f = PrimeField::default();
        let mut rng = seeded(8);
        for n in 2..=3 {
            for k in 2..=3 {
                for _ in 0..3 {
                    let s = random_surface(&f, n, k, &mut rng);
                    let m = build_cremona(&f, &s).unwrap();
                    for c in m.forward().components().iter().chain(m.backward().components()) {
                        assert_eq!(c.degree(), k);
                    }
                    symbolic_roundtrip_smallcase(&f, &m).unwrap();
                }
            }
        }
    }

    #[test]
    fn residual_point_law() {
        let f = PrimeField::default();
        let mut rng = seeded(9);
        for (n, k) in [(2, 2), (3, 3), (4, 2)] {
            let s = random_surface(&f, n, k, &mut rng);
            let m = build_cremona(&f, &s).unwrap();
            let q1 = ProjPoint::new(&f, s.adaptation().column(n + 1)).unwrap();
            let q2 = ProjPoint::new(&f, s.adaptation().column(n)).unwrap();
            let p1 = projection_matrix(&f, &q1).unwrap();
            let p2 = projection_matrix(&f, &q2).unwrap();
            let mut checked = 0;
            while checked < 100 {
                // random point of S with u != 0, in adapted then original coordinates
                let mut z = random_point(&f, n + 1, &mut rng);
                let u = s.eval_u(&f, &[z.clone(), vec![0]].concat()).unwrap();
                if f.is_zero(&u) {
                    continue;
                }
                z.push(0);
                let rest = s.eval_adapted(&f, &z).unwrap();
                z[n + 1] = f.neg(&f.div(&rest, &u).unwrap());
                assert_eq!(s.eval_adapted(&f, &z).unwrap(), 0);
                let y = s.adaptation().apply(&f, &z).unwrap();
                let src = crate::linalg::mat_vec(&f, &p1, &y);
                let dst = crate::linalg::mat_vec(&f, &p2, &y);
                let img = m.forward().eval(&f, &src).unwrap();
                assert!(find_nonproportional(&f, &img, &dst).is_none());
                checked += 1;
            }
        }
    }

    #[test]
    fn base_locus_is_u_and_residual() {
        let f = PrimeField::default();
        let s = surface(&f, 2, 2, ["1", "0", "-x0", "x1^2"], 10);
        let m = build_cremona(&f, &s).unwrap();
        // u = x2 and c x2 + d = -x0 x2 + x1^2 vanish together on x1 = x2 = 0
        assert_eq!(m.forward().apply(&f, &ProjPoint::new(&f, vec![1, 0, 0]).unwrap()), Err(Error::BaseLocus));
        // u = 0 alone is contracted, not undefined
        let img = m.forward().apply(&f, &ProjPoint::new(&f, vec![1, 1, 0]).unwrap()).unwrap();
        assert!(img.proj_eq(&f, &ProjPoint::vertex(&f, 2, 2)));
    }

    #[test]
    fn explicit_frames_match_default() {
        let f = PrimeField::default();
        let mut rng = seeded(11);
        let s = random_surface(&f, 3, 2, &mut rng);
        let a = build_cremona(&f, &s).unwrap();
        let q1 = ProjPoint::new(&f, s.adaptation().column(4)).unwrap();
        let q2 = ProjPoint::new(&f, s.adaptation().column(3)).unwrap();
        let mut p2 = projection_matrix(&f, &q2).unwrap();
        p2.swap(0, 3);
        let b = build_cremona_with(&f, &s, &projection_matrix(&f, &q1).unwrap(), &p2).unwrap();
        let swap = LinearMatrix::permutation(&f, &[3, 1, 2, 0]);
        let a_swapped = a.forward().post_linear(&f, &swap).unwrap();
        assert!(maps_equal_projective(&f, &a_swapped, b.forward(), 50, &mut rng).unwrap().is_equal());
        b.verify_roundtrip(&f, 50, &mut rng).unwrap();
    }
}
