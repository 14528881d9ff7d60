//! Linear systems on the parameter space `P^r` of a parametrized variety.
//!
//! A system is an ordered tuple of forms of one degree in `r + 1` parameter
//! variables. Order matters (entry `j` is coordinate `x_j` of the target),
//! zero entries are allowed, and duplicates are kept.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{power_table, MultiPoly};
use crate::projective::{pointwise_equal, Equality, RationalMap, DEFAULT_RESAMPLE_CAP};
use crate::sample::random_point;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSystem<F: Field> {
    label: String,
    param_vars: usize,
    degree: u32,
    entries: Vec<MultiPoly<F>>,
}

impl<F: Field> LinearSystem<F> {
    pub fn new(label: impl Into<String>, entries: Vec<MultiPoly<F>>) -> Result<Self> {
        let label = label.into();
        let Some(lead) = entries.iter().find(|e| !e.is_zero()) else {
            return Err(Error::AllZero(format!("system `{label}` has no nonzero entry")));
        };
        let (param_vars, degree) = (lead.nvars(), lead.degree());
        let mut fixed = Vec::with_capacity(entries.len());
        for e in entries {
            if e.nvars() != param_vars {
                return Err(Error::VarCountMismatch(param_vars, e.nvars()));
            }
            if e.is_zero() {
                fixed.push(MultiPoly::zero(param_vars, degree));
            } else if e.degree() != degree {
                return Err(Error::DegreeMismatch(degree, e.degree()));
            } else {
                fixed.push(e);
            }
        }
        Ok(Self {
            label,
            param_vars,
            degree,
            entries: fixed,
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `r + 1`.
    pub fn param_vars(&self) -> usize {
        self.param_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[MultiPoly<F>] {
        &self.entries
    }

    pub fn entry(&self, i: usize) -> &MultiPoly<F> {
        &self.entries[i]
    }

    pub fn to_map(&self) -> RationalMap<F> {
        RationalMap::new(self.param_vars - 1, self.entries.clone()).expect("system is a valid map")
    }

    pub fn eval(&self, field: &F, params: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if params.len() != self.param_vars {
            return Err(Error::DimensionMismatch {
                expected: self.param_vars,
                got: params.len(),
            });
        }
        let powers = power_table(field, params, self.degree);
        Ok(self.entries.iter().map(|e| e.eval_with(field, &powers)).collect())
    }

    /// Appends one entry (the last coordinate of a larger ambient space).
    pub fn appended(&self, entry: MultiPoly<F>, label: impl Into<String>) -> Result<Self> {
        let mut entries = self.entries.clone();
        entries.push(entry);
        Self::new(label, entries)
    }

    /// Entry `i` of the result is entry `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                got: perm.len(),
            });
        }
        let entries = perm.iter().map(|&j| self.entries[j].clone()).collect();
        Self::new(self.label.clone(), entries)
    }

    /// Transposition bringing the first nonzero entry to slot 0.
    pub fn leading_permutation(&self) -> Vec<usize> {
        let mut perm: Vec<usize> = (0..self.len()).collect();
        let first = self.entries.iter().position(|e| !e.is_zero()).expect("nonzero entry");
        perm.swap(0, first);
        perm
    }
}

/// All products `L_i G_j`, row-major in `(i, j)`.
pub fn product_system<F: Field>(
    field: &F,
    l: &LinearSystem<F>,
    g: &LinearSystem<F>,
) -> Result<LinearSystem<F>> {
    if l.param_vars != g.param_vars {
        return Err(Error::VarCountMismatch(l.param_vars, g.param_vars));
    }
    let mut entries = Vec::with_capacity(l.len() * g.len());
    for li in &l.entries {
        for gj in &g.entries {
            entries.push(li.mul(field, gj)?);
        }
    }
    LinearSystem::new(format!("{}+{}", l.label, g.label), entries)
}

/// Extends `g` with zero entries to length `n + 1`.
pub fn pad_zeros<F: Field>(g: &LinearSystem<F>, n: usize) -> Result<LinearSystem<F>> {
    if g.len() > n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            got: g.len(),
        });
    }
    let mut entries = g.entries.clone();
    entries.resize(n + 1, MultiPoly::zero(g.param_vars, g.degree));
    LinearSystem::new(g.label.clone(), entries)
}

/// `{L_0 m, ..., L_n m}` for a fixed form `m`.
pub fn scaled_by<F: Field>(
    field: &F,
    l: &LinearSystem<F>,
    m: &MultiPoly<F>,
    label: impl Into<String>,
) -> Result<LinearSystem<F>> {
    let entries = l
        .entries
        .iter()
        .map(|e| e.mul(field, m))
        .collect::<Result<Vec<_>>>()?;
    LinearSystem::new(label, entries)
}

/// `A_0 = {L_0 G_0, ..., L_n G_0}`.
pub fn sub_system_a0<F: Field>(
    field: &F,
    l: &LinearSystem<F>,
    g: &LinearSystem<F>,
) -> Result<LinearSystem<F>> {
    if l.param_vars != g.param_vars {
        return Err(Error::VarCountMismatch(l.param_vars, g.param_vars));
    }
    let g0 = &g.entries[0];
    if g0.is_zero() {
        return Err(Error::AllZero(format!("leading entry of `{}` is zero", g.label)));
    }
    scaled_by(field, l, g0, "A0")
}

/// `G_{L_0} = {L_0 G_0, ..., L_0 G_n}`, the system the chain must reach.
pub fn target_system<F: Field>(
    field: &F,
    l: &LinearSystem<F>,
    g: &LinearSystem<F>,
) -> Result<LinearSystem<F>> {
    let l0 = &l.entries[0];
    if l0.is_zero() {
        return Err(Error::AllZero(format!("leading entry of `{}` is zero", l.label)));
    }
    scaled_by(field, g, l0, "target")
}

/// Randomized equality of the maps two systems induce.
pub fn systems_equal_as_maps<F: Field, R: Rng + ?Sized>(
    field: &F,
    a: &LinearSystem<F>,
    b: &LinearSystem<F>,
    trials: usize,
    rng: &mut R,
) -> Result<Equality<F>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    if a.param_vars != b.param_vars {
        return Err(Error::VarCountMismatch(a.param_vars, b.param_vars));
    }
    let eval = |s: &LinearSystem<F>, p: &[F::Elem]| -> Result<Option<Vec<F::Elem>>> {
        let v = s.eval(field, p)?;
        Ok(if v.iter().all(|x| field.is_zero(x)) { None } else { Some(v) })
    };
    pointwise_equal(
        field,
        a.param_vars,
        u64::from(a.degree + b.degree),
        trials,
        DEFAULT_RESAMPLE_CAP,
        rng,
        |p| eval(a, p),
        |p| eval(b, p),
    )
}

/// A variety given by a parametrization `P^r --> X`, together with the
/// systems that are evaluated on it.
#[derive(Clone, Debug)]
pub struct ParametrizedVariety<F: Field> {
    r: usize,
    systems: Vec<LinearSystem<F>>,
}

/// One sampled parameter point and the value of every attached system.
#[derive(Clone, Debug)]
pub struct VarietySample<F: Field> {
    pub params: Vec<F::Elem>,
    pub images: Vec<Vec<F::Elem>>,
}

impl<F: Field> ParametrizedVariety<F> {
    pub fn new(r: usize, systems: Vec<LinearSystem<F>>) -> Result<Self> {
        for s in &systems {
            if s.param_vars != r + 1 {
                return Err(Error::VarCountMismatch(r + 1, s.param_vars));
            }
        }
        Ok(Self { r, systems })
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn systems(&self) -> &[LinearSystem<F>] {
        &self.systems
    }

    /// Draws a parameter point at which every attached system has a
    /// nonzero value, resampling up to `cap` times.
    pub fn sample<R: Rng + ?Sized>(&self, field: &F, rng: &mut R, cap: usize) -> Result<VarietySample<F>> {
        for _ in 0..=cap {
            let params = random_point(field, self.r + 1, rng);
            let images = self
                .systems
                .iter()
                .map(|s| s.eval(field, &params))
                .collect::<Result<Vec<_>>>()?;
            if images.iter().all(|v| v.iter().any(|x| !field.is_zero(x))) {
                return Ok(VarietySample { params, images });
            }
        }
        Err(Error::ResampleCapExceeded(cap))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::grammar::parse_poly;
    use crate::sample::seeded;

    const ST: [&str; 2] = ["s", "t"];

    fn sys(f: &PrimeField, label: &str, entries: &[&str]) -> LinearSystem<PrimeField> {
        let polys = entries
            .iter()
            .map(|e| parse_poly(f, e, &ST, None).unwrap())
            .collect();
        LinearSystem::new(label, polys).unwrap()
    }

    #[test]
    fn products() {
        let f = PrimeField::default();
        let l = sys(&f, "L", &["s", "t"]);
        let p = product_system(&f, &l, &l).unwrap();
        assert_eq!(p, sys(&f, "L+L", &["s^2", "s*t", "s*t", "t^2"]));

        let cubic = sys(&f, "L", &["s^3", "s^2*t", "s*t^2", "t^3"]);
        let g = pad_zeros(&sys(&f, "G", &["s", "t"]), 3).unwrap();
        let p = product_system(&f, &cubic, &g).unwrap();
        assert_eq!(p.len(), 16);
        assert_eq!(p.entries().iter().filter(|e| e.is_zero()).count(), 8);
        assert_eq!(p.degree(), 4);

        let unit = LinearSystem::new("1", vec![MultiPoly::constant(&f, 2, f.from_i64(3))]).unwrap();
        let p = product_system(&f, &cubic, &unit).unwrap();
        assert!(systems_equal_as_maps(&f, &p, &cubic, 20, &mut seeded(0)).unwrap().is_equal());
    }

    #[test]
    fn product_evaluates_to_outer_product() {
        let f = PrimeField::default();
        let l = sys(&f, "L", &["s^3", "s^2*t + t^3", "s*t^2"]);
        let g = sys(&f, "G", &["s - t", "2*t", "s"]);
        let p = product_system(&f, &l, &g).unwrap();
        let mut rng = seeded(8);
        for _ in 0..100 {
            let pt = random_point(&f, 2, &mut rng);
            let (lv, gv, pv) = (l.eval(&f, &pt).unwrap(), g.eval(&f, &pt).unwrap(), p.eval(&f, &pt).unwrap());
            for i in 0..3 {
                for j in 0..3 {
                    assert_eq!(pv[3 * i + j], f.mul(&lv[i], &gv[j]));
                }
            }
        }
    }

    #[test]
    fn padding() {
        let f = PrimeField::default();
        let g = sys(&f, "G", &["s", "t"]);
        let padded = pad_zeros(&g, 3).unwrap();
        assert_eq!(padded, sys(&f, "G", &["s", "t", "0", "0"]));
        assert_eq!(pad_zeros(&g, 1).unwrap(), g);
        assert!(pad_zeros(&padded, 1).is_err());
        let v = padded.eval(&f, &[5, 7]).unwrap();
        assert_eq!(&v[2..], &[0, 0]);
    }

    #[test]
    fn a0_construction() {
        let f = PrimeField::default();
        let cubic = sys(&f, "L", &["s^3", "s^2*t", "s*t^2", "t^3"]);
        let g = sys(&f, "G", &["s", "t", "0", "0"]);
        let a0 = sub_system_a0(&f, &cubic, &g).unwrap();
        assert_eq!(a0.entries(), sys(&f, "A0", &["s^4", "s^3*t", "s^2*t^2", "s*t^3"]).entries());
        let lin = sys(&f, "L", &["s", "t"]);
        assert_eq!(sub_system_a0(&f, &lin, &lin).unwrap().entries(), sys(&f, "", &["s^2", "s*t"]).entries());
        let g_lead_zero = sys(&f, "G", &["0", "t"]);
        assert!(matches!(sub_system_a0(&f, &lin, &g_lead_zero), Err(Error::AllZero(_))));
        assert!(matches!(LinearSystem::<PrimeField>::new("Z", vec![MultiPoly::zero(2, 1)]), Err(Error::AllZero(_))));
        // A0 and L induce the same map
        let mut rng = seeded(3);
        assert!(systems_equal_as_maps(&f, &a0, &cubic, 50, &mut rng).unwrap().is_equal());
    }

    #[test]
    fn equality_up_to_common_factor() {
        let f = PrimeField::default();
        let mut rng = seeded(12);
        let a = sys(&f, "A", &["s^3", "s^2*t", "s*t^2", "t^3"]);
        let d = MultiPoly::from_terms(
            &f,
            2,
            2,
            crate::poly::monomials(2, 2).into_iter().map(|e| (e, f.random(&mut rng))),
        )
        .unwrap();
        let ad = scaled_by(&f, &a, &d, "AD").unwrap();
        assert!(systems_equal_as_maps(&f, &a, &ad, 100, &mut rng).unwrap().is_equal());
        let permuted = a.permuted(&[1, 0, 2, 3]).unwrap();
        assert!(!systems_equal_as_maps(&f, &a, &permuted, 100, &mut rng).unwrap().is_equal());
        assert!(systems_equal_as_maps(&f, &a, &a, 1000, &mut rng).unwrap().is_equal());
    }

    #[test]
    fn sampler_avoids_vanishing() {
        let f = PrimeField::new(3).unwrap();
        let s = sys(&f, "S", &["s*t", "0"]);
        let x = ParametrizedVariety::new(1, vec![s]).unwrap();
        let mut rng = seeded(1);
        for _ in 0..20 {
            let smp = x.sample(&f, &mut rng, 64).unwrap();
            assert_ne!(smp.images[0][0], 0);
        }
    }
}
