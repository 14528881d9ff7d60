//! Sparse homogeneous multivariate polynomials.
//!
//! A [`MultiPoly`] maps exponent vectors to nonzero coefficients. Every
//! polynomial carries its total degree explicitly, so the zero form of
//! degree `d` is distinct from the zero form of degree `d + 1`; this is what
//! lets zero entries sit inside linear systems of a fixed degree.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::LinearMatrix;

pub type Exponents = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly<F: Field> {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Exponents, F::Elem>,
}

/// All exponent vectors of `nvars` variables and total degree `degree`,
/// in descending lexicographic order (`x0^d` first).
pub fn monomials(nvars: usize, degree: u32) -> Vec<Exponents> {
    fn rec(slot: usize, left: u32, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if slot + 1 == cur.len() {
            cur[slot] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[slot] = e;
            rec(slot + 1, left - e, cur, out);
        }
        cur[slot] = 0;
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut cur = vec![0; nvars];
    rec(0, degree, &mut cur, &mut out);
    out
}

/// Number of monomials of the given degree in `nvars` variables.
pub fn monomial_count(nvars: usize, degree: u32) -> usize {
    if nvars == 0 {
        return usize::from(degree == 0);
    }
    // C(degree + nvars - 1, nvars - 1)
    let (n, k) = (degree as usize + nvars - 1, nvars - 1);
    let mut acc: usize = 1;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        Self {
            nvars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: &F, nvars: usize, c: F::Elem) -> Self {
        let mut p = Self::zero(nvars, 0);
        if !field.is_zero(&c) {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    /// The coordinate form `x_i`.
    pub fn var(field: &F, nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(field, e, field.one())
    }

    pub fn monomial(field: &F, exps: Exponents, coeff: F::Elem) -> Self {
        let degree = exps.iter().sum();
        let mut p = Self::zero(exps.len(), degree);
        if !field.is_zero(&coeff) {
            p.terms.insert(exps, coeff);
        }
        p
    }

    /// Collects terms, summing duplicates and dropping zeros.
    pub fn from_terms<I>(field: &F, nvars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponents, F::Elem)>,
    {
        let mut p = Self::zero(nvars, degree);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::VarCountMismatch(nvars, e.len()));
            }
            let d: u32 = e.iter().sum();
            if d != degree {
                return Err(Error::DegreeMismatch(degree, d));
            }
            p.add_term(field, e, c);
        }
        Ok(p)
    }

    /// Linear form with the given coefficient vector.
    pub fn linear(field: &F, coeffs: &[F::Elem]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n, 1);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(field, e, c.clone());
        }
        p
    }

    fn add_term(&mut self, field: &F, e: Exponents, c: F::Elem) {
        if field.is_zero(&c) {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = field.add(o.get(), &c);
                if field.is_zero(&s) {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending lexicographic order of exponents.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponents, &F::Elem)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> Option<&F::Elem> {
        self.terms.get(exps)
    }

    /// Highest power of `x_var` appearing in any term.
    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(0)
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VarCountMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn add(&self, field: &F, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch(self.degree, other.degree));
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(field, e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, field: &F, other: &Self) -> Result<Self> {
        self.add(field, &other.neg(field))
    }

    pub fn neg(&self, field: &F) -> Self {
        Self {
            nvars: self.nvars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), field.neg(c)))
                .collect(),
        }
    }

    pub fn scalar_mul(&self, field: &F, s: &F::Elem) -> Self {
        if field.is_zero(s) {
            return Self::zero(self.nvars, self.degree);
        }
        Self {
            nvars: self.nvars,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), field.mul(c, s)))
                .collect(),
        }
    }

    pub fn mul(&self, field: &F, other: &Self) -> Result<Self> {
        self.check_vars(other)?;
        let mut out = Self::zero(self.nvars, self.degree + other.degree);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(field, e, field.mul(c1, c2));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, field: &F, e: u32) -> Self {
        let mut acc = Self::constant(field, self.nvars, field.one());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(field, &base).expect("same vars");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(field, &base).expect("same vars");
            }
        }
        acc
    }

    pub fn eval(&self, field: &F, point: &[F::Elem]) -> Result<F::Elem> {
        if point.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: point.len(),
            });
        }
        let powers = power_table(field, point, self.degree);
        Ok(self.eval_with(field, &powers))
    }

    /// Evaluation against a precomputed table `powers[var][e] = point[var]^e`.
    pub(crate) fn eval_with(&self, field: &F, powers: &[Vec<F::Elem>]) -> F::Elem {
        let mut acc = field.zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = field.mul(&t, &powers[v][k as usize]);
                }
            }
            acc = field.add(&acc, &t);
        }
        acc
    }

    /// Replaces every variable by a polynomial; all replacements share one
    /// degree and one variable count. The result has degree `deg(self) * e`.
    pub fn substitute(&self, field: &F, images: &[MultiPoly<F>]) -> Result<Self> {
        if images.len() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: images.len(),
            });
        }
        let Some(first) = images.first() else {
            return Ok(self.clone());
        };
        let (nv, e) = (first.nvars, first.degree);
        for g in images {
            if g.nvars != nv {
                return Err(Error::VarCountMismatch(nv, g.nvars));
            }
            if g.degree != e {
                return Err(Error::DegreeMismatch(e, g.degree));
            }
        }
        let mut cache: Vec<Vec<MultiPoly<F>>> = images
            .iter()
            .map(|g| vec![MultiPoly::constant(field, nv, field.one()), g.clone()])
            .collect();
        let mut out = Self::zero(nv, self.degree * e);
        for (exps, c) in &self.terms {
            let mut t = MultiPoly::constant(field, nv, c.clone());
            for (v, &k) in exps.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while cache[v].len() <= k as usize {
                    let next = cache[v].last().unwrap().mul(field, &images[v])?;
                    cache[v].push(next);
                }
                t = t.mul(field, &cache[v][k as usize])?;
                if t.is_zero() {
                    break;
                }
            }
            for (te, tc) in t.terms {
                out.add_term(field, te, tc);
            }
        }
        Ok(out)
    }

    /// `f ∘ M`: variable `x_i` becomes the linear form given by row `i` of `M`.
    pub fn substitute_linear(&self, field: &F, m: &LinearMatrix<F>) -> Result<Self> {
        if m.dim() != self.nvars {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: m.dim(),
            });
        }
        let forms: Vec<MultiPoly<F>> = (0..m.dim())
            .map(|i| MultiPoly::linear(field, m.row(i)))
            .collect();
        let mut out = self.substitute(field, &forms)?;
        out.degree = self.degree;
        Ok(out)
    }

    /// Re-indexes into `nvars` variables: old variable `i` becomes `slots[i]`.
    pub fn embed(&self, nvars: usize, slots: &[usize]) -> Result<Self> {
        if slots.len() != self.nvars || slots.iter().any(|&s| s >= nvars) {
            return Err(Error::DimensionMismatch {
                expected: self.nvars,
                got: slots.len(),
            });
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut ne = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                ne[slots[i]] += k;
            }
            terms.insert(ne, c.clone());
        }
        Ok(Self {
            nvars,
            degree: self.degree,
            terms,
        })
    }

    /// Divides out the largest monomial dividing every term; returns the
    /// removed exponent vector. The zero polynomial is returned unchanged.
    pub fn strip_monomial_content(&self) -> (Exponents, Self) {
        if self.is_zero() {
            return (vec![0; self.nvars], self.clone());
        }
        let mut content = vec![u32::MAX; self.nvars];
        for e in self.terms.keys() {
            for (c, &k) in content.iter_mut().zip(e) {
                *c = (*c).min(k);
            }
        }
        let removed: u32 = content.iter().sum();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (e.iter().zip(&content).map(|(a, b)| a - b).collect(), c.clone()))
            .collect();
        (
            content,
            Self {
                nvars: self.nvars,
                degree: self.degree - removed,
                terms,
            },
        )
    }

    /// Divides by a monomial known to divide every term.
    pub fn div_monomial(&self, m: &[u32]) -> Result<Self> {
        let removed: u32 = m.iter().sum();
        if removed > self.degree {
            return Err(Error::DegreeMismatch(self.degree, removed));
        }
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e.iter().zip(m).any(|(a, b)| a < b) {
                return Err(Error::InvalidInput("monomial does not divide".into()));
            }
            terms.insert(e.iter().zip(m).map(|(a, b)| a - b).collect(), c.clone());
        }
        Ok(Self {
            nvars: self.nvars,
            degree: self.degree - removed,
            terms,
        })
    }

    /// Overrides the degree tag of a zero polynomial.
    pub fn with_degree(mut self, degree: u32) -> Result<Self> {
        if !self.is_zero() && degree != self.degree {
            return Err(Error::DegreeMismatch(self.degree, degree));
        }
        self.degree = degree;
        Ok(self)
    }

    pub fn map_coeffs(&self, mut f: impl FnMut(&F::Elem) -> F::Elem, field: &F) -> Self {
        let mut out = Self::zero(self.nvars, self.degree);
        for (e, c) in &self.terms {
            out.add_term(field, e.clone(), f(c));
        }
        out
    }
}

/// `powers[v][e] = point[v]^e` for `e <= max_exp`.
pub fn power_table<F: Field>(field: &F, point: &[F::Elem], max_exp: u32) -> Vec<Vec<F::Elem>> {
    point
        .iter()
        .map(|x| {
            let mut row = Vec::with_capacity(max_exp as usize + 1);
            row.push(field.one());
            for i in 0..max_exp as usize {
                row.push(field.mul(&row[i], x));
            }
            row
        })
        .collect()
}
