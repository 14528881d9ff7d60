//! Dense univariate polynomials, used to restrict maps to lines.
//!
//! Coefficients are stored low degree first; the zero polynomial is empty.

use rand::Rng;

use crate::field::Field;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniPoly<F: Field> {
    coeffs: Vec<F::Elem>,
}

impl<F: Field> UniPoly<F> {
    pub fn new(field: &F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn x(field: &F) -> Self {
        Self::new(field, vec![field.zero(), field.one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn eval(&self, field: &F, x: &F::Elem) -> F::Elem {
        self.coeffs
            .iter()
            .rev()
            .fold(field.zero(), |acc, c| field.add(&field.mul(&acc, x), c))
    }

    pub fn sub(&self, field: &F, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = field.zero();
        let c = (0..n)
            .map(|i| {
                field.sub(
                    self.coeffs.get(i).unwrap_or(&z),
                    other.coeffs.get(i).unwrap_or(&z),
                )
            })
            .collect();
        Self::new(field, c)
    }

    pub fn mul(&self, field: &F, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                c[i + j] = field.add(&c[i + j], &field.mul(a, b));
            }
        }
        Self::new(field, c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, field: &F, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = field.inv(&d.coeffs[dd]).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        let Some(qlen) = (r.len()).checked_sub(dd) else {
            return (Self::zero(), self.clone());
        };
        if qlen == 0 {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![field.zero(); qlen];
        for i in (0..qlen).rev() {
            let c = field.mul(&r[i + dd], &lead_inv);
            if !field.is_zero(&c) {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    r[i + j] = field.sub(&r[i + j], &field.mul(&c, dc));
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Self::new(field, q), Self::new(field, r))
    }

    pub fn monic(&self, field: &F) -> Self {
        match self.coeffs.last() {
            None => Self::zero(),
            Some(l) => {
                let inv = field.inv(l).expect("nonzero");
                Self::new(field, self.coeffs.iter().map(|c| field.mul(c, &inv)).collect())
            }
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(field: &F, a: &Self, b: &Self) -> Self {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(field, &b);
            a = b;
            b = r;
        }
        a.monic(field)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, field: &F, mut e: u64, m: &Self) -> Self {
        let mut acc = Self::new(field, vec![field.one()]).div_rem(field, m).1;
        let mut base = self.div_rem(field, m).1;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(field, &base).div_rem(field, m).1;
            }
            base = base.mul(field, &base).div_rem(field, m).1;
            e >>= 1;
        }
        acc
    }

    /// Strips every factor shared with `other` (repeatedly).
    pub fn remove_common(&self, field: &F, other: &Self) -> Self {
        let mut cur = self.clone();
        loop {
            let g = Self::gcd(field, &cur, other);
            match g.degree() {
                None | Some(0) => return cur,
                Some(_) => cur = cur.div_rem(field, &g).0,
            }
        }
    }

    /// Roots lying in the base field. Over `F_p` this is complete
    /// (Cantor-Zassenhaus); over the rationals only linear factors are
    /// found when the polynomial itself is linear.
    pub fn roots<R: Rng + ?Sized>(&self, field: &F, rng: &mut R) -> Vec<F::Elem> {
        let Some(d) = self.degree() else {
            return Vec::new();
        };
        if d == 0 {
            return Vec::new();
        }
        let p = field.characteristic();
        if p == 0 {
            if d == 1 {
                return vec![linear_root(field, self)];
            }
            return Vec::new();
        }
        if p < 64 {
            return (0..p as i64)
                .map(|v| field.from_i64(v))
                .filter(|x| field.is_zero(&self.eval(field, x)))
                .collect();
        }
        let f = self.monic(field);
        let x = Self::x(field);
        let xp = x.pow_mod(field, p, &f);
        let split = Self::gcd(field, &f, &xp.sub(field, &x));
        let mut out = Vec::new();
        equal_degree_split(field, &split, p, rng, &mut out);
        out
    }
}

fn linear_root<F: Field>(field: &F, f: &UniPoly<F>) -> F::Elem {
    field.neg(&field.div(&f.coeffs[0], &f.coeffs[1]).expect("degree one"))
}

fn equal_degree_split<F: Field, R: Rng + ?Sized>(
    field: &F,
    g: &UniPoly<F>,
    p: u64,
    rng: &mut R,
    out: &mut Vec<F::Elem>,
) {
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(linear_root(field, g)),
        Some(_) => loop {
            let a = field.random(rng);
            let shift = UniPoly::new(field, vec![a, field.one()]);
            let one = UniPoly::new(field, vec![field.one()]);
            let h = shift.pow_mod(field, (p - 1) / 2, g).sub(field, &one);
            let d = UniPoly::gcd(field, g, &h);
            let dd = d.degree().unwrap_or(0);
            if dd > 0 && Some(dd) < g.degree() {
                let rest = g.div_rem(field, &d).0;
                equal_degree_split(field, &d, p, rng, out);
                equal_degree_split(field, &rest, p, rng, out);
                return;
            }
        },
    }
}
