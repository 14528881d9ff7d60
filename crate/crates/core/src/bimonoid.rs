//! Hypersurfaces of `P^{n+1}` with two points of multiplicity `k - 1`.
//!
//! After a linear change of coordinates sending `e_{n+1}` to `q1` and `e_n`
//! to `q2`, such a hypersurface is
//!
//! ```text
//! S = a * x_n * x_{n+1} + b * x_{n+1} + c * x_n + d
//! ```
//!
//! with `a, b, c, d` forms of degrees `k-2, k-1, k-1, k` in `x_0..x_{n-1}`.
//! Both multiplicity conditions are built into the shape, so finding an `S`
//! through a sampled variety `Y` is a linear problem in the coefficients of
//! `a, b, c, d`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{dot, nullspace, LinearMatrix};
use crate::poly::{monomials, power_table, Exponents, MultiPoly};
use crate::projective::{complete_basis, ProjPoint};
use crate::sample::random_point;

/// Number of hold-out samples every interpolated surface must vanish on.
pub const HOLDOUT_SAMPLES: usize = 100;
/// Random nullspace combinations tried before giving up on a degree.
pub const DEFAULT_SOLUTION_RETRIES: usize = 16;
pub const DEFAULT_K_MAX: u32 = 12;

/// Recorded points certifying that the surface is not degenerate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witnesses<F: Field> {
    /// Point of `S` (adapted coordinates) where `u = a x_n + b` is nonzero.
    pub u_point: Vec<F::Elem>,
    /// Point of `S` (adapted coordinates) where `w = a x_{n+1} + c` is nonzero.
    pub w_point: Vec<F::Elem>,
    /// Point of `P^{n-1}` where `bc - ad` is nonzero.
    pub minor_point: Vec<F::Elem>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiMonoidSurface<F: Field> {
    n: usize,
    k: u32,
    a: MultiPoly<F>,
    b: MultiPoly<F>,
    c: MultiPoly<F>,
    d: MultiPoly<F>,
    adaptation: LinearMatrix<F>,
    witnesses: Witnesses<F>,
}

/// Invertible `M` with `M e_{n+1} = q1` and `M e_n = q2`.
///
/// The remaining columns are the first standard vectors (in index order)
/// that complete `{q1, q2}` to a basis.
pub fn adapt_coordinates<F: Field>(
    field: &F,
    q1: &ProjPoint<F>,
    q2: &ProjPoint<F>,
    n: usize,
) -> Result<LinearMatrix<F>> {
    let dim = n + 2;
    if q1.coords().len() != dim || q2.coords().len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: q1.coords().len().max(q2.coords().len()),
        });
    }
    let fixed = [q1.coords().to_vec(), q2.coords().to_vec()];
    let chosen = complete_basis(field, &fixed, dim)?;
    let mut cols: Vec<Vec<F::Elem>> = chosen
        .into_iter()
        .map(|j| {
            let mut e = vec![field.zero(); dim];
            e[j] = field.one();
            e
        })
        .collect();
    cols.push(q2.coords().to_vec());
    cols.push(q1.coords().to_vec());
    LinearMatrix::from_columns(field, &cols)
}

/// Monomial layout of the unknowns `(a, b, c, d)`.
#[derive(Clone, Debug)]
pub struct Ansatz {
    pub n: usize,
    pub k: u32,
    mons: [Vec<Exponents>; 4],
}

impl Ansatz {
    pub fn new(n: usize, k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidInput(format!("bi-monoid degree must be >= 2, got {k}")));
        }
        if n < 1 {
            return Err(Error::InvalidInput("ambient dimension too small".into()));
        }
        Ok(Self {
            n,
            k,
            mons: [
                monomials(n, k - 2),
                monomials(n, k - 1),
                monomials(n, k - 1),
                monomials(n, k),
            ],
        })
    }

    pub fn dim(&self) -> usize {
        self.mons.iter().map(Vec::len).sum()
    }

    /// Sizes of the `a, b, c, d` blocks.
    pub fn block_sizes(&self) -> [usize; 4] {
        [self.mons[0].len(), self.mons[1].len(), self.mons[2].len(), self.mons[3].len()]
    }

    /// Linear functional `coefficients -> S(z)` for an adapted point `z`.
    pub fn row<F: Field>(&self, field: &F, z: &[F::Elem]) -> Vec<F::Elem> {
        let n = self.n;
        let powers = power_table(field, &z[..n], self.k);
        let xn = &z[n];
        let xn1 = &z[n + 1];
        let mut row = Vec::with_capacity(self.dim());
        let multipliers = [field.mul(xn, xn1), xn1.clone(), xn.clone(), field.one()];
        for (block, mult) in self.mons.iter().zip(&multipliers) {
            for e in block {
                let mut v = mult.clone();
                for (var, &k) in e.iter().enumerate() {
                    if k > 0 {
                        v = field.mul(&v, &powers[var][k as usize]);
                    }
                }
                row.push(v);
            }
        }
        row
    }

    /// Splits a coefficient vector into the four forms.
    pub fn forms<F: Field>(&self, field: &F, coeffs: &[F::Elem]) -> Result<[MultiPoly<F>; 4]> {
        let mut offset = 0;
        let degrees = [self.k - 2, self.k - 1, self.k - 1, self.k];
        let mut out = Vec::with_capacity(4);
        for (block, deg) in self.mons.iter().zip(degrees) {
            let terms = block
                .iter()
                .zip(&coeffs[offset..offset + block.len()])
                .map(|(e, c)| (e.clone(), c.clone()));
            out.push(MultiPoly::from_terms(field, self.n, deg, terms)?);
            offset += block.len();
        }
        Ok(out.try_into().expect("four blocks"))
    }
}

impl<F: Field> BiMonoidSurface<F> {
    /// Assembles a surface from its parts, checking shapes and witnesses.
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        field: &F,
        n: usize,
        k: u32,
        [a, b, c, d]: [MultiPoly<F>; 4],
        adaptation: LinearMatrix<F>,
        witnesses: Witnesses<F>,
    ) -> Result<Self> {
        let s = Self::unchecked(n, k, [a, b, c, d], adaptation, witnesses)?;
        s.validate(field)?;
        Ok(s)
    }

    /// Shape checks only; witnesses are not re-evaluated. Used when reading
    /// certificates, whose claims are checked separately.
    pub fn from_parts_unchecked(
        n: usize,
        k: u32,
        forms: [MultiPoly<F>; 4],
        adaptation: LinearMatrix<F>,
        witnesses: Witnesses<F>,
    ) -> Result<Self> {
        Self::unchecked(n, k, forms, adaptation, witnesses)
    }

    fn unchecked(
        n: usize,
        k: u32,
        [a, b, c, d]: [MultiPoly<F>; 4],
        adaptation: LinearMatrix<F>,
        witnesses: Witnesses<F>,
    ) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidInput(format!("bi-monoid degree must be >= 2, got {k}")));
        }
        for (p, deg) in [(&a, k - 2), (&b, k - 1), (&c, k - 1), (&d, k)] {
            if p.nvars() != n {
                return Err(Error::VarCountMismatch(n, p.nvars()));
            }
            if p.degree() != deg {
                return Err(Error::DegreeMismatch(deg, p.degree()));
            }
        }
        if adaptation.dim() != n + 2 {
            return Err(Error::DimensionMismatch {
                expected: n + 2,
                got: adaptation.dim(),
            });
        }
        Ok(Self {
            n,
            k,
            a,
            b,
            c,
            d,
            adaptation,
            witnesses,
        })
    }

    /// Builds a surface with freshly sampled witnesses on `S` itself; used
    /// when no particular variety `Y` is attached.
    pub fn with_sampled_witnesses<R: Rng + ?Sized>(
        field: &F,
        n: usize,
        k: u32,
        forms: [MultiPoly<F>; 4],
        adaptation: LinearMatrix<F>,
        rng: &mut R,
        attempts: usize,
    ) -> Result<Self> {
        let placeholder = Witnesses {
            u_point: Vec::new(),
            w_point: Vec::new(),
            minor_point: Vec::new(),
        };
        let mut s = Self::unchecked(n, k, forms, adaptation, placeholder)?;
        for _ in 0..attempts {
            let base = random_point(field, n, rng);
            let t = field.random_nonzero(rng);
            let (a, b, c, d) = s.eval_forms(field, &base);
            // lift along x_{n+1}: S = u x_{n+1} + (c x_n + d)
            let u = field.add(&field.mul(&a, &t), &b);
            let w_lift = field.add(&field.mul(&a, &t), &c);
            let minor = field.sub(&field.mul(&b, &c), &field.mul(&a, &d));
            if field.is_zero(&u) || field.is_zero(&w_lift) || field.is_zero(&minor) {
                continue;
            }
            let xn1 = field.neg(&field.div(&field.add(&field.mul(&c, &t), &d), &u).unwrap());
            let mut u_point = base.clone();
            u_point.push(t.clone());
            u_point.push(xn1);
            let xn = field.neg(&field.div(&field.add(&field.mul(&b, &t), &d), &w_lift).unwrap());
            let mut w_point = base.clone();
            w_point.push(xn);
            w_point.push(t);
            s.witnesses = Witnesses {
                u_point,
                w_point,
                minor_point: base,
            };
            s.validate(field)?;
            return Ok(s);
        }
        Err(Error::WitnessFailure { k, attempts })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn a(&self) -> &MultiPoly<F> {
        &self.a
    }

    pub fn b(&self) -> &MultiPoly<F> {
        &self.b
    }

    pub fn c(&self) -> &MultiPoly<F> {
        &self.c
    }

    pub fn d(&self) -> &MultiPoly<F> {
        &self.d
    }

    pub fn forms(&self) -> [&MultiPoly<F>; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn adaptation(&self) -> &LinearMatrix<F> {
        &self.adaptation
    }

    pub fn witnesses(&self) -> &Witnesses<F> {
        &self.witnesses
    }

    fn eval_forms(&self, field: &F, base: &[F::Elem]) -> (F::Elem, F::Elem, F::Elem, F::Elem) {
        let powers = power_table(field, base, self.k);
        (
            self.a.eval_with(field, &powers),
            self.b.eval_with(field, &powers),
            self.c.eval_with(field, &powers),
            self.d.eval_with(field, &powers),
        )
    }

    /// `S` at an adapted point of `P^{n+1}`.
    pub fn eval_adapted(&self, field: &F, z: &[F::Elem]) -> Result<F::Elem> {
        self.check_point(z)?;
        let n = self.n;
        let (a, b, c, d) = self.eval_forms(field, &z[..n]);
        let (xn, xn1) = (&z[n], &z[n + 1]);
        let s = field.add(
            &field.mul(&field.add(&field.mul(&a, xn), &b), xn1),
            &field.add(&field.mul(&c, xn), &d),
        );
        Ok(s)
    }

    /// `u = a x_n + b` at an adapted point.
    pub fn eval_u(&self, field: &F, z: &[F::Elem]) -> Result<F::Elem> {
        self.check_point(z)?;
        let (a, b, _, _) = self.eval_forms(field, &z[..self.n]);
        Ok(field.add(&field.mul(&a, &z[self.n]), &b))
    }

    /// `w = a x_{n+1} + c` at an adapted point.
    pub fn eval_w(&self, field: &F, z: &[F::Elem]) -> Result<F::Elem> {
        self.check_point(z)?;
        let (a, _, c, _) = self.eval_forms(field, &z[..self.n]);
        Ok(field.add(&field.mul(&a, &z[self.n + 1]), &c))
    }

    fn check_point(&self, z: &[F::Elem]) -> Result<()> {
        if z.len() != self.n + 2 {
            return Err(Error::DimensionMismatch {
                expected: self.n + 2,
                got: z.len(),
            });
        }
        Ok(())
    }

    /// `bc - ad`, a form of degree `2k - 2` in `x_0..x_{n-1}`.
    pub fn minor(&self, field: &F) -> MultiPoly<F> {
        let bc = self.b.mul(field, &self.c).expect("same vars");
        let ad = self.a.mul(field, &self.d).expect("same vars");
        bc.sub(field, &ad).expect("same degree")
    }

    /// `S` as a polynomial in the adapted coordinates `x_0..x_{n+1}`.
    pub fn adapted_equation(&self, field: &F) -> MultiPoly<F> {
        let n = self.n;
        let nv = n + 2;
        let slots: Vec<usize> = (0..n).collect();
        let lift = |p: &MultiPoly<F>| p.embed(nv, &slots).expect("valid slots");
        let xn = MultiPoly::var(field, nv, n);
        let xn1 = MultiPoly::var(field, nv, n + 1);
        let xx = xn.mul(field, &xn1).unwrap();
        let terms = [
            lift(&self.a).mul(field, &xx).unwrap(),
            lift(&self.b).mul(field, &xn1).unwrap(),
            lift(&self.c).mul(field, &xn).unwrap(),
            lift(&self.d),
        ];
        terms
            .iter()
            .skip(1)
            .fold(terms[0].clone(), |acc, t| acc.add(field, t).unwrap())
    }

    /// `S` in the original coordinates: `S_adapted ∘ M^{-1}`.
    pub fn equation(&self, field: &F) -> Result<MultiPoly<F>> {
        let inv = self.adaptation.inverse(field)?;
        self.adapted_equation(field).substitute_linear(field, &inv)
    }

    /// Re-checks shapes and the three witnesses.
    pub fn validate(&self, field: &F) -> Result<()> {
        let w = &self.witnesses;
        if !self.adaptation.is_invertible(field) {
            return Err(Error::DegenerateSurface("adaptation matrix is singular".into()));
        }
        if w.u_point.len() != self.n + 2 || w.w_point.len() != self.n + 2 || w.minor_point.len() != self.n {
            return Err(Error::DegenerateSurface("witness points have the wrong length".into()));
        }
        for (name, p) in [("W1", &w.u_point), ("W2", &w.w_point)] {
            if !field.is_zero(&self.eval_adapted(field, p)?) {
                return Err(Error::DegenerateSurface(format!("{name} point is not on S")));
            }
        }
        if field.is_zero(&self.eval_u(field, &w.u_point)?) {
            return Err(Error::DegenerateSurface("W1: u vanishes at the witness".into()));
        }
        if field.is_zero(&self.eval_w(field, &w.w_point)?) {
            return Err(Error::DegenerateSurface("W2: w vanishes at the witness".into()));
        }
        if field.is_zero(&self.minor(field).eval(field, &w.minor_point)?) {
            return Err(Error::DegenerateSurface("W3: bc - ad vanishes at the witness".into()));
        }
        Ok(())
    }
}

/// What happened at each degree tried by [`find_min_k`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KAttempt {
    pub k: u32,
    pub ansatz_dim: usize,
    pub nullity: usize,
    pub outcome: String,
}

/// Finds an admissible surface of degree `k` through the adapted samples.
///
/// A random element of the nullspace is accepted when it vanishes on every
/// hold-out sample and passes witnesses W1-W3, all at samples of `Y`.
#[allow(clippy::too_many_arguments)]
pub fn interpolate<F: Field, R: Rng + ?Sized>(
    field: &F,
    samples: &[Vec<F::Elem>],
    holdouts: &[Vec<F::Elem>],
    k: u32,
    n: usize,
    adaptation: &LinearMatrix<F>,
    retries: usize,
    rng: &mut R,
) -> Result<(BiMonoidSurface<F>, usize)> {
    let ansatz = Ansatz::new(n, k)?;
    let rows: Vec<Vec<F::Elem>> = samples.iter().map(|z| ansatz.row(field, z)).collect();
    let basis = nullspace(field, &rows, ansatz.dim());
    if basis.is_empty() {
        return Err(Error::NoSolution { k });
    }
    let holdout_rows: Vec<Vec<F::Elem>> = holdouts.iter().map(|z| ansatz.row(field, z)).collect();
    'attempt: for _ in 0..retries {
        let weights: Vec<F::Elem> = (0..basis.len()).map(|_| field.random(rng)).collect();
        let coeffs: Vec<F::Elem> = (0..ansatz.dim())
            .map(|j| {
                basis
                    .iter()
                    .zip(&weights)
                    .fold(field.zero(), |acc, (v, w)| field.add(&acc, &field.mul(&v[j], w)))
            })
            .collect();
        for r in &holdout_rows {
            if !field.is_zero(&dot(field, r, &coeffs)) {
                continue 'attempt;
            }
        }
        let forms = ansatz.forms(field, &coeffs)?;
        let placeholder = Witnesses {
            u_point: Vec::new(),
            w_point: Vec::new(),
            minor_point: Vec::new(),
        };
        let mut s = BiMonoidSurface::unchecked(n, k, forms, adaptation.clone(), placeholder)?;
        let Some(u_point) = samples.iter().find(|z| !field.is_zero(&s.eval_u(field, z).unwrap())) else {
            continue;
        };
        let Some(w_point) = samples.iter().find(|z| !field.is_zero(&s.eval_w(field, z).unwrap())) else {
            continue;
        };
        let minor = s.minor(field);
        if minor.is_zero() {
            continue;
        }
        let Some(minor_point) = (0..8)
            .map(|_| random_point(field, n, rng))
            .find(|p| !field.is_zero(&minor.eval(field, p).unwrap()))
        else {
            continue;
        };
        s.witnesses = Witnesses {
            u_point: u_point.clone(),
            w_point: w_point.clone(),
            minor_point,
        };
        s.validate(field)?;
        return Ok((s, basis.len()));
    }
    Err(Error::WitnessFailure { k, attempts: retries })
}

/// Smallest `k` in `2..=k_max` for which [`interpolate`] succeeds.
///
/// `sample` draws `count` points of `Y` in adapted coordinates. Each degree
/// uses twice the ansatz dimension in samples plus [`HOLDOUT_SAMPLES`]
/// hold-outs. Witness failures move on to the next degree as well.
pub fn find_min_k<F, R, S>(
    field: &F,
    mut sample: S,
    n: usize,
    adaptation: &LinearMatrix<F>,
    k_max: u32,
    retries: usize,
    rng: &mut R,
) -> Result<(BiMonoidSurface<F>, Vec<KAttempt>)>
where
    F: Field,
    R: Rng + ?Sized,
    S: FnMut(usize, &mut R) -> Result<Vec<Vec<F::Elem>>>,
{
    let mut log = Vec::new();
    for k in 2..=k_max {
        let ansatz = Ansatz::new(n, k)?;
        let dim = ansatz.dim();
        let pts = sample(2 * dim + HOLDOUT_SAMPLES, rng)?;
        let (fit, hold) = pts.split_at(2 * dim);
        match interpolate(field, fit, hold, k, n, adaptation, retries, rng) {
            Ok((s, nullity)) => {
                log.push(KAttempt {
                    k,
                    ansatz_dim: dim,
                    nullity,
                    outcome: "accepted".into(),
                });
                return Ok((s, log));
            }
            Err(e @ (Error::NoSolution { .. } | Error::WitnessFailure { .. })) => {
                log.push(KAttempt {
                    k,
                    ansatz_dim: dim,
                    nullity: 0,
                    outcome: e.to_string(),
                });
            }
            Err(e) => return Err(e),
        }
    }
    Err(Error::KMaxExceeded { k_max })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};
    use crate::grammar::parse_poly;
    use crate::linalg::rank;
    use crate::sample::seeded;

    fn conic_samples<F: Field>(field: &F, count: usize, rng: &mut impl Rng) -> Vec<Vec<F::Elem>> {
        (0..count)
            .map(|_| {
                let p = random_point(field, 2, rng);
                let (s, t) = (&p[0], &p[1]);
                vec![field.mul(s, s), field.mul(s, t), field.mul(t, t), field.zero()]
            })
            .collect()
    }

    #[test]
    fn adaptation_cases() {
        let f = Rationals;
        let n = 2;
        let e = |i| ProjPoint::vertex(&f, n + 1, i);
        assert_eq!(adapt_coordinates(&f, &e(3), &e(2), n).unwrap(), LinearMatrix::identity(&f, 4));
        assert_eq!(
            adapt_coordinates(&f, &e(3), &e(1), n).unwrap(),
            LinearMatrix::permutation(&f, &[0, 2, 1, 3])
        );
        assert_eq!(adapt_coordinates(&f, &e(3), &e(3), n), Err(Error::CoincidentPoints));

        let g = PrimeField::default();
        let mut rng = seeded(17);
        for _ in 0..50 {
            let q1 = ProjPoint::new(&g, random_point(&g, 5, &mut rng)).unwrap();
            let q2 = ProjPoint::new(&g, random_point(&g, 5, &mut rng)).unwrap();
            let m = adapt_coordinates(&g, &q1, &q2, 3).unwrap();
            let inv = m.inverse(&g).unwrap();
            let back1 = ProjPoint::new(&g, inv.apply(&g, q1.coords()).unwrap()).unwrap();
            let back2 = ProjPoint::new(&g, inv.apply(&g, q2.coords()).unwrap()).unwrap();
            assert!(back1.proj_eq(&g, &ProjPoint::vertex(&g, 4, 4)));
            assert!(back2.proj_eq(&g, &ProjPoint::vertex(&g, 4, 3)));
        }
    }

    /// Independent dense computation of the conic constraint matrix: the
    /// restriction of `c x2 + d` to `(s^2, st, t^2, 0)`, written out by hand.
    #[test]
    fn conic_nullspace_matches_hand_derivation() {
        let f = Rationals;
        let ansatz = Ansatz::new(2, 2).unwrap();
        assert_eq!(ansatz.block_sizes(), [1, 2, 2, 3]);
        // unknown order: a | b0 b1 | c0 c1 | d0 d1 d2 with monomials
        // c: x0, x1 ; d: x0^2, x0 x1, x1^2.  On the conic x3 = 0 and
        // S = c0 s^2 t^2 + c1 s t^3 + d0 s^4 + d1 s^3 t + d2 s^2 t^2.
        // Coefficients of s^4, s^3 t, s^2 t^2, s t^3, t^4:
        let z = f.zero();
        let o = f.one();
        let hand: Vec<Vec<_>> = vec![
            vec![z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), o.clone(), z.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), z.clone(), o.clone(), z.clone()],
            vec![z.clone(), z.clone(), z.clone(), o.clone(), z.clone(), z.clone(), z.clone(), o.clone()],
            vec![z.clone(), z.clone(), z.clone(), z.clone(), o.clone(), z.clone(), z.clone(), z.clone()],
            vec![z.clone(); 8],
        ];
        assert_eq!(rank(&f, &hand, 8), 4);
        let hand_kernel = nullspace(&f, &hand, 8);
        assert_eq!(hand_kernel.len(), 4);

        let mut rng = seeded(1);
        let samples = conic_samples(&f, 16, &mut rng);
        let rows: Vec<_> = samples.iter().map(|z| ansatz.row(&f, z)).collect();
        assert_eq!(rank(&f, &rows, 8), 4);
        // same kernel: every hand kernel vector annihilates the sampled rows
        for v in &hand_kernel {
            for r in &rows {
                assert!(f.is_zero(&dot(&f, r, v)));
            }
        }
        // the hand pick S = x2 x3 + x1^2 - x0 x2 is in it
        let pick = [1, 0, 0, -1, 0, 0, 0, 1].map(|v| f.from_i64(v));
        for r in &rows {
            assert!(f.is_zero(&dot(&f, r, &pick)));
        }
        let forms = ansatz.forms(&f, &pick).unwrap();
        let vars = ["x0", "x1"];
        assert_eq!(forms[2], parse_poly(&f, "-x0", &vars, None).unwrap());
        assert_eq!(forms[3], parse_poly(&f, "x1^2", &vars, None).unwrap());
    }

    #[test]
    fn conic_interpolation() {
        let f = PrimeField::default();
        let mut rng = seeded(2);
        let id = LinearMatrix::identity(&f, 4);
        let samples = conic_samples(&f, 16, &mut rng);
        let holdouts = conic_samples(&f, 100, &mut rng);
        let (s, nullity) = interpolate(&f, &samples, &holdouts, 2, 2, &id, 16, &mut rng).unwrap();
        assert_eq!(nullity, 4);
        s.validate(&f).unwrap();
        for z in conic_samples(&f, 100, &mut rng) {
            assert_eq!(s.eval_adapted(&f, &z).unwrap(), 0);
        }
        let eq = s.equation(&f).unwrap();
        for e in eq.terms().map(|(e, _)| e) {
            assert!(e[2] <= 1 && e[3] <= 1);
        }
    }

    #[test]
    fn interpolation_is_monotone_in_k() {
        let f = PrimeField::default();
        let mut rng = seeded(3);
        let id = LinearMatrix::identity(&f, 4);
        for k in 2..=4 {
            let dim = Ansatz::new(2, k).unwrap().dim();
            let samples = conic_samples(&f, 2 * dim, &mut rng);
            let holdouts = conic_samples(&f, 100, &mut rng);
            assert!(interpolate(&f, &samples, &holdouts, k, 2, &id, 16, &mut rng).is_ok());
        }
    }

    #[test]
    fn single_point_always_interpolates() {
        let f = PrimeField::default();
        let mut rng = seeded(4);
        for n in 2..=4 {
            let p = random_point(&f, n + 2, &mut rng);
            let m = LinearMatrix::identity(&f, n + 2);
            let samples = vec![p.clone(); 4];
            let (s, nullity) = interpolate(&f, &samples, std::slice::from_ref(&p), 2, n, &m, 16, &mut rng).unwrap();
            assert_eq!(nullity, Ansatz::new(n, 2).unwrap().dim() - 1);
            assert_eq!(s.eval_adapted(&f, &p).unwrap(), 0);
        }
    }

    #[test]
    fn oversized_variety_needs_larger_k() {
        // 30 general points of P^3 impose independent conditions on the
        // ansatz until its dimension exceeds 30.
        let f = PrimeField::default();
        let mut rng = seeded(5);
        let pts: Vec<Vec<u64>> = (0..30).map(|_| random_point(&f, 4, &mut rng)).collect();
        let id = LinearMatrix::identity(&f, 4);
        let err = interpolate(&f, &pts, &[], 2, 2, &id, 16, &mut rng).unwrap_err();
        assert_eq!(err, Error::NoSolution { k: 2 });
        let mut cursor = 0;
        let (s, log) = find_min_k(
            &f,
            |count, _rng: &mut crate::sample::SeededRng| {
                // the same 30 points, reused cyclically
                let out = (0..count).map(|i| pts[(cursor + i) % 30].clone()).collect();
                cursor += count;
                Ok(out)
            },
            2,
            &id,
            12,
            16,
            &mut rng,
        )
        .unwrap();
        // ansatz dimension is 4k for n = 2; first k with 4k > 30 is 8
        assert_eq!(s.k(), 8);
        assert_eq!(log.len(), 7);
    }

    #[test]
    fn dense_sampler_exceeds_k_max() {
        // Y = all of P^4: no hypersurface contains it
        let f = PrimeField::default();
        let mut rng = seeded(6);
        let m = LinearMatrix::identity(&f, 5);
        let res = find_min_k(
            &f,
            |count, rng: &mut crate::sample::SeededRng| Ok((0..count).map(|_| random_point(&f, 5, rng)).collect()),
            3,
            &m,
            4,
            4,
            &mut rng,
        );
        assert!(matches!(res, Err(Error::KMaxExceeded { k_max: 4 })), "{res:?}");
    }
}
