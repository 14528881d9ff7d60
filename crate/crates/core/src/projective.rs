//! Projective points, rational maps given by tuples of forms, and the
//! randomized tests used to compare maps.

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{rank, LinearMatrix};
use crate::poly::{power_table, MultiPoly};
use crate::sample::{random_point, random_vector};
use crate::univariate::UniPoly;

/// Default number of base-locus resamples before giving up.
pub const DEFAULT_RESAMPLE_CAP: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjPoint<F: Field> {
    coords: Vec<F::Elem>,
}

impl<F: Field> ProjPoint<F> {
    pub fn new(field: &F, coords: Vec<F::Elem>) -> Result<Self> {
        if coords.iter().all(|c| field.is_zero(c)) {
            return Err(Error::InvalidInput("all coordinates are zero".into()));
        }
        Ok(Self { coords })
    }

    /// Standard vertex `e_i` of `P^{dim}`.
    pub fn vertex(field: &F, dim: usize, i: usize) -> Self {
        let mut coords = vec![field.zero(); dim + 1];
        coords[i] = field.one();
        Self { coords }
    }

    pub fn coords(&self) -> &[F::Elem] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<F::Elem> {
        self.coords
    }

    /// `P^dim` this point lives in.
    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn proj_eq(&self, field: &F, other: &Self) -> bool {
        self.coords.len() == other.coords.len()
            && find_nonproportional(field, &self.coords, &other.coords).is_none()
    }

    /// Representative whose first nonzero coordinate is one.
    pub fn normalized(&self, field: &F) -> Self {
        let lead = self
            .coords
            .iter()
            .find(|c| !field.is_zero(c))
            .expect("nonzero point");
        let inv = field.inv(lead).expect("nonzero");
        Self {
            coords: self.coords.iter().map(|c| field.mul(c, &inv)).collect(),
        }
    }
}

/// Indices `(i, j)` of a nonvanishing 2x2 minor `a_i b_j - a_j b_i`, if any.
pub fn find_nonproportional<F: Field>(
    field: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> Option<(usize, usize)> {
    let j = b.iter().position(|x| !field.is_zero(x))?;
    for i in 0..a.len() {
        let lhs = field.mul(&a[i], &b[j]);
        let rhs = field.mul(&a[j], &b[i]);
        if lhs != rhs {
            return Some((i.min(j), i.max(j)));
        }
    }
    if a.iter().all(|x| field.is_zero(x)) {
        return Some((j, j));
    }
    None
}

/// A rational map `P^m --> P^{m'}` given by `m' + 1` forms of a common degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalMap<F: Field> {
    source_dim: usize,
    components: Vec<MultiPoly<F>>,
}

impl<F: Field> RationalMap<F> {
    pub fn new(source_dim: usize, components: Vec<MultiPoly<F>>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::InvalidInput("map without components".into()));
        };
        let degree = first.degree();
        for c in &components {
            if c.nvars() != source_dim + 1 {
                return Err(Error::VarCountMismatch(source_dim + 1, c.nvars()));
            }
            if c.degree() != degree {
                return Err(Error::DegreeMismatch(degree, c.degree()));
            }
        }
        if components.iter().all(|c| c.is_zero()) {
            return Err(Error::AllZero("every component of the map vanishes".into()));
        }
        Ok(Self {
            source_dim,
            components,
        })
    }

    pub fn identity(field: &F, dim: usize) -> Self {
        let comps = (0..=dim).map(|i| MultiPoly::var(field, dim + 1, i)).collect();
        Self::new(dim, comps).expect("identity is well formed")
    }

    /// The linear map whose components are the rows of `rows`.
    pub fn linear(field: &F, rows: &[Vec<F::Elem>]) -> Result<Self> {
        let n = rows.first().map(|r| r.len()).unwrap_or(0);
        if n == 0 {
            return Err(Error::InvalidInput("empty linear map".into()));
        }
        let comps = rows.iter().map(|r| MultiPoly::linear(field, r)).collect();
        Self::new(n - 1, comps)
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.components.len() - 1
    }

    pub fn degree(&self) -> u32 {
        self.components[0].degree()
    }

    pub fn components(&self) -> &[MultiPoly<F>] {
        &self.components
    }

    pub fn into_components(self) -> Vec<MultiPoly<F>> {
        self.components
    }

    /// Evaluates every component; no base-locus check.
    pub fn eval(&self, field: &F, coords: &[F::Elem]) -> Result<Vec<F::Elem>> {
        if coords.len() != self.source_dim + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.source_dim + 1,
                got: coords.len(),
            });
        }
        let powers = power_table(field, coords, self.degree());
        Ok(self
            .components
            .iter()
            .map(|c| c.eval_with(field, &powers))
            .collect())
    }

    pub fn apply(&self, field: &F, p: &ProjPoint<F>) -> Result<ProjPoint<F>> {
        let v = self.eval(field, p.coords())?;
        ProjPoint::new(field, v).map_err(|_| Error::BaseLocus)
    }

    /// Applies `M` to the output coordinates: component `i` becomes
    /// `sum_j M[i][j] * f_j`.
    pub fn post_linear(&self, field: &F, m: &LinearMatrix<F>) -> Result<Self> {
        if m.dim() != self.components.len() {
            return Err(Error::DimensionMismatch {
                expected: self.components.len(),
                got: m.dim(),
            });
        }
        let deg = self.degree();
        let nv = self.source_dim + 1;
        let mut comps = Vec::with_capacity(m.dim());
        for i in 0..m.dim() {
            let mut acc = MultiPoly::zero(nv, deg);
            for (j, c) in self.components.iter().enumerate() {
                let s = m.get(i, j);
                if !field.is_zero(s) {
                    acc = acc.add(field, &c.scalar_mul(field, s))?;
                }
            }
            comps.push(acc);
        }
        Self::new(self.source_dim, comps)
    }

    /// Precomposes with the linear substitution `x -> M x` on the source.
    pub fn pre_linear(&self, field: &F, m: &LinearMatrix<F>) -> Result<Self> {
        let comps = self
            .components
            .iter()
            .map(|c| c.substitute_linear(field, m))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.source_dim, comps)
    }
}

/// Indices of standard basis vectors completing `fixed` to a basis of the
/// `dim`-dimensional space, chosen greedily in increasing index order.
pub fn complete_basis<F: Field>(field: &F, fixed: &[Vec<F::Elem>], dim: usize) -> Result<Vec<usize>> {
    let mut current: Vec<Vec<F::Elem>> = fixed.to_vec();
    if rank(field, &current, dim) != current.len() {
        return Err(Error::CoincidentPoints);
    }
    let mut chosen = Vec::new();
    for j in 0..dim {
        if current.len() == dim {
            break;
        }
        let mut e = vec![field.zero(); dim];
        e[j] = field.one();
        current.push(e);
        if rank(field, &current, dim) == current.len() {
            chosen.push(j);
        } else {
            current.pop();
        }
    }
    Ok(chosen)
}

/// Rows of the linear projection from `q` in `P^m` (an `m x (m+1)` matrix).
///
/// `q` is completed to the basis `[q, e_{j1}, ..., e_{jm}]` with the `e_j`
/// chosen lexicographically; the projection reads off the `e_j`-coordinates.
pub fn projection_matrix<F: Field>(field: &F, q: &ProjPoint<F>) -> Result<Vec<Vec<F::Elem>>> {
    let dim = q.coords().len();
    let chosen = complete_basis(field, &[q.coords().to_vec()], dim)?;
    let mut cols = vec![q.coords().to_vec()];
    for j in chosen {
        let mut e = vec![field.zero(); dim];
        e[j] = field.one();
        cols.push(e);
    }
    let basis = LinearMatrix::from_columns(field, &cols)?;
    let inv = basis.inverse(field)?;
    Ok(inv.rows()[1..].to_vec())
}

pub fn projection_from_point<F: Field>(field: &F, q: &ProjPoint<F>) -> Result<RationalMap<F>> {
    if q.dim() == 0 {
        return Err(Error::InvalidInput("cannot project P^0 from a point".into()));
    }
    RationalMap::linear(field, &projection_matrix(field, q)?)
}

/// `g ∘ f`, computed by symbolic substitution.
pub fn compose<F: Field>(field: &F, g: &RationalMap<F>, f: &RationalMap<F>) -> Result<RationalMap<F>> {
    if f.target_dim() != g.source_dim() {
        return Err(Error::DimensionMismatch {
            expected: g.source_dim(),
            got: f.target_dim(),
        });
    }
    let comps = g
        .components()
        .iter()
        .map(|c| c.substitute(field, f.components()))
        .collect::<Result<Vec<_>>>()?;
    if comps.iter().all(|c| c.is_zero()) {
        return Err(Error::IdenticallyZero);
    }
    RationalMap::new(f.source_dim(), comps)
}

/// Outcome of a randomized projective equality test.
#[derive(Clone, Debug, PartialEq)]
pub enum Equality<F: Field> {
    /// No disagreement in `trials` points; a disagreement would have been
    /// missed with probability at most `2^failure_log2`.
    Equal { trials: usize, failure_log2: f64 },
    /// The 2x2 minor `(i, j)` of `[f(p); g(p)]` is nonzero at `point`.
    NotEqual { point: Vec<F::Elem>, minor: (usize, usize) },
}

impl<F: Field> Equality<F> {
    pub fn is_equal(&self) -> bool {
        matches!(self, Equality::Equal { .. })
    }
}

/// Schwartz-Zippel bound, in log2, for `trials` independent points when the
/// polynomial being tested has degree `degree`.
pub fn failure_log2<F: Field>(field: &F, degree: u64, trials: usize) -> f64 {
    let per_trial = (degree.max(1) as f64) / (field.sample_set_size() - 1.0);
    (trials as f64) * per_trial.min(1.0).log2()
}

/// Compares two point evaluators at random source points. Evaluators return
/// `None` on base-locus hits, which are resampled up to `resample_cap` times.
#[allow(clippy::too_many_arguments)]
pub fn pointwise_equal<F, R, A, B>(
    field: &F,
    source_vars: usize,
    degree: u64,
    trials: usize,
    resample_cap: usize,
    rng: &mut R,
    mut f: A,
    mut g: B,
) -> Result<Equality<F>>
where
    F: Field,
    R: Rng + ?Sized,
    A: FnMut(&[F::Elem]) -> Result<Option<Vec<F::Elem>>>,
    B: FnMut(&[F::Elem]) -> Result<Option<Vec<F::Elem>>>,
{
    let mut misses = 0;
    let mut done = 0;
    while done < trials {
        let pt = random_point(field, source_vars, rng);
        let (Some(a), Some(b)) = (f(&pt)?, g(&pt)?) else {
            misses += 1;
            if misses > resample_cap {
                return Err(Error::ResampleCapExceeded(resample_cap));
            }
            continue;
        };
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch {
                expected: a.len(),
                got: b.len(),
            });
        }
        if let Some(minor) = find_nonproportional(field, &a, &b) {
            return Ok(Equality::NotEqual { point: pt, minor });
        }
        done += 1;
    }
    Ok(Equality::Equal {
        trials,
        failure_log2: failure_log2(field, degree, trials),
    })
}

fn nonzero_eval<F: Field>(field: &F, m: &RationalMap<F>, pt: &[F::Elem]) -> Result<Option<Vec<F::Elem>>> {
    let v = m.eval(field, pt)?;
    Ok(if v.iter().all(|x| field.is_zero(x)) { None } else { Some(v) })
}

/// Randomized test that `f` and `g` agree as maps to projective space:
/// all cross products `f_i g_j - f_j g_i` vanish at `trials` random points.
pub fn maps_equal_projective<F: Field, R: Rng + ?Sized>(
    field: &F,
    f: &RationalMap<F>,
    g: &RationalMap<F>,
    trials: usize,
    rng: &mut R,
) -> Result<Equality<F>> {
    if f.source_dim() != g.source_dim() || f.target_dim() != g.target_dim() {
        return Err(Error::DimensionMismatch {
            expected: f.target_dim(),
            got: g.target_dim(),
        });
    }
    pointwise_equal(
        field,
        f.source_dim() + 1,
        u64::from(f.degree() + g.degree()),
        trials,
        DEFAULT_RESAMPLE_CAP,
        rng,
        |p| nonzero_eval(field, f, p),
        |p| nonzero_eval(field, g, p),
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Injectivity<F: Field> {
    NoCollisionFound { samples: usize },
    /// Distinct source points with the same image.
    Collision { first: Vec<F::Elem>, second: Vec<F::Elem> },
}

impl<F: Field> Injectivity<F> {
    pub fn is_collision(&self) -> bool {
        matches!(self, Injectivity::Collision { .. })
    }
}

/// Restricts `f` to the line `t -> p + t v`.
fn restrict_to_line<F: Field>(
    field: &F,
    f: &MultiPoly<F>,
    p: &[F::Elem],
    v: &[F::Elem],
) -> Result<UniPoly<F>> {
    let images: Vec<MultiPoly<F>> = p
        .iter()
        .zip(v)
        .map(|(a, b)| MultiPoly::linear(field, &[a.clone(), b.clone()]))
        .collect();
    let bivariate = f.substitute(field, &images)?;
    let mut coeffs = vec![field.zero(); f.degree() as usize + 1];
    for (e, c) in bivariate.terms() {
        coeffs[e[1] as usize] = c.clone();
    }
    Ok(UniPoly::new(field, coeffs))
}

/// Searches for fiber collisions of `f`.
///
/// For each sample a random source point `p` is drawn and `f` is restricted
/// to a random line through `p`; other points of that line in the fiber of
/// `f(p)` are roots of the gcd of the restricted cross products, away from
/// `p` itself and from base points. This finds every collision when the
/// source is `P^1`; in higher dimension it only sees fibers meeting the line.
pub fn generic_injectivity_heuristic<F: Field, R: Rng + ?Sized>(
    field: &F,
    f: &RationalMap<F>,
    pairs: usize,
    rng: &mut R,
) -> Result<Injectivity<F>> {
    let nv = f.source_dim() + 1;
    let mut misses = 0;
    let mut done = 0;
    while done < pairs {
        let p = random_point(field, nv, rng);
        let Some(y) = nonzero_eval(field, f, &p)? else {
            misses += 1;
            if misses > DEFAULT_RESAMPLE_CAP {
                return Err(Error::ResampleCapExceeded(DEFAULT_RESAMPLE_CAP));
            }
            continue;
        };
        done += 1;
        let v = random_vector(field, nv, rng);
        let on_line = |t: &F::Elem| -> Vec<F::Elem> {
            p.iter()
                .zip(&v)
                .map(|(a, b)| field.add(a, &field.mul(t, b)))
                .collect()
        };
        let check = |q: Vec<F::Elem>| -> Result<Option<Injectivity<F>>> {
            let Some(img) = nonzero_eval(field, f, &q)? else {
                return Ok(None);
            };
            let pp = ProjPoint::new(field, p.clone())?;
            let Ok(qq) = ProjPoint::new(field, q.clone()) else {
                return Ok(None);
            };
            if find_nonproportional(field, &img, &y).is_none() && !pp.proj_eq(field, &qq) {
                return Ok(Some(Injectivity::Collision {
                    first: p.clone(),
                    second: q,
                }));
            }
            Ok(None)
        };

        let restricted = f
            .components()
            .iter()
            .map(|c| restrict_to_line(field, c, &p, &v))
            .collect::<Result<Vec<_>>>()?;
        let pivot = y.iter().position(|c| !field.is_zero(c)).expect("nonzero image");
        let mut minors_gcd = UniPoly::zero();
        for (i, fi) in restricted.iter().enumerate() {
            let scale = |g: &UniPoly<F>, s: &F::Elem| {
                UniPoly::new(field, g.coeffs().iter().map(|c| field.mul(c, s)).collect())
            };
            let minor = scale(fi, &y[pivot]).sub(field, &scale(&restricted[pivot], &y[i]));
            minors_gcd = UniPoly::gcd(field, &minors_gcd, &minor);
        }
        if minors_gcd.is_zero() {
            // the whole line is contracted to f(p)
            for k in 1..=8 {
                if let Some(hit) = check(on_line(&field.from_i64(k)))? {
                    return Ok(hit);
                }
            }
            continue;
        }
        let base = restricted
            .iter()
            .fold(UniPoly::zero(), |acc, g| UniPoly::gcd(field, &acc, g));
        let mut residual = minors_gcd.remove_common(field, &UniPoly::x(field));
        if !base.is_zero() {
            residual = residual.remove_common(field, &base);
        }
        if residual.degree().unwrap_or(0) == 0 {
            continue;
        }
        for t in residual.roots(field, rng) {
            if let Some(hit) = check(on_line(&t))? {
                return Ok(hit);
            }
        }
    }
    Ok(Injectivity::NoCollisionFound { samples: pairs })
}
