//! Divisorial obstruction: a hypersurface `X ⊂ P^n` of degree `d` is not
//! Cremona equivalent to a hyperplane when the pair `(P^n, (n+1)/d X)` is
//! canonical. Canonicity is certified from first-blowup discrepancies, which
//! is exact for ordinary singularities.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::Rng;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{rank, LinearMatrix};
use crate::poly::{monomials, MultiPoly};
use crate::projective::{projection_matrix, ProjPoint};
use crate::sample::{random_point, random_vector};
use crate::system::LinearSystem;
use crate::univariate::UniPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Singularity {
    pub multiplicity: u32,
    pub ordinary: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorialInput {
    pub n: u32,
    pub d: u32,
    pub singularities: Vec<Singularity>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The pair is canonical: `X` is not Cremona equivalent to a hyperplane.
    Obstructed,
    /// Nothing is certified either way.
    Inconclusive,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Obstructed => "obstructed",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub center: String,
    pub multiplicity: u32,
    pub value: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    /// `(n+1)/d`.
    pub coefficient: BigRational,
    pub discrepancies: Vec<Discrepancy>,
    pub verdict: Verdict,
    pub explanation: String,
}

fn ratio(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Discrepancy of the blowup of a point of multiplicity `m`:
/// `(n - 1) - ((n + 1) / d) m`.
pub fn point_discrepancy(n: u32, d: u32, m: u32) -> BigRational {
    ratio(i64::from(n) - 1, 1) - ratio(i64::from(n) + 1, i64::from(d)) * ratio(i64::from(m), 1)
}

pub fn check_obstruction(input: &DivisorialInput) -> Result<ObstructionReport> {
    let DivisorialInput { n, d, singularities } = input;
    let (n, d) = (*n, *d);
    if d <= 1 {
        return Err(Error::InvalidInput(format!("degree must exceed 1, got {d}")));
    }
    if n < 2 {
        return Err(Error::InvalidInput(format!("ambient dimension must be at least 2, got {n}")));
    }
    if let Some(s) = singularities.iter().find(|s| s.multiplicity < 2) {
        return Err(Error::InvalidInput(format!("singular points have multiplicity >= 2, got {}", s.multiplicity)));
    }
    let coefficient = ratio(i64::from(n) + 1, i64::from(d));
    // blowing up a smooth codimension-2 locus of X gives 1 - (n+1)/d
    let mut discrepancies = vec![Discrepancy {
        center: "general codimension-2 locus of X".into(),
        multiplicity: 1,
        value: ratio(1, 1) - coefficient.clone(),
    }];
    for (idx, s) in singularities.iter().enumerate() {
        discrepancies.push(Discrepancy {
            center: format!("singular point {idx}{}", if s.ordinary { "" } else { " (not ordinary)" }),
            multiplicity: s.multiplicity,
            value: point_discrepancy(n, d, s.multiplicity),
        });
    }
    let negative: Vec<&Discrepancy> = discrepancies.iter().filter(|x| x.value.is_negative()).collect();
    let all_ordinary = singularities.iter().all(|s| s.ordinary);
    let (verdict, explanation) = if !negative.is_empty() {
        let first = negative[0];
        (
            Verdict::Inconclusive,
            format!(
                "discrepancy {} < 0 at {}: the pair (P^{n}, {coefficient} X) is not canonical there",
                first.value, first.center
            ),
        )
    } else if !all_ordinary {
        (
            Verdict::Inconclusive,
            "all discrepancies are >= 0 but some singularity is not ordinary, so one blowup does not certify canonicity".into(),
        )
    } else {
        (
            Verdict::Obstructed,
            format!("the pair (P^{n}, {coefficient} X) is canonical, so X is not Cremona equivalent to a hyperplane"),
        )
    };
    Ok(ObstructionReport {
        coefficient,
        discrepancies,
        verdict,
        explanation,
    })
}

/// A rational plane curve of degree `a + 1` obtained by projecting a curve of
/// type `(1, a)` on the smooth quadric surface in `P^3`.
#[derive(Clone, Debug)]
pub struct NodalCurve<F: Field> {
    pub a: u32,
    pub p: MultiPoly<F>,
    pub q: MultiPoly<F>,
    pub center: Vec<F::Elem>,
    /// `[s p : s q : t p : t q]` in `P^3`.
    pub space_curve: LinearSystem<F>,
    /// The projected curve in `P^2`.
    pub system: LinearSystem<F>,
    /// `a (a - 1) / 2`: the genus drop, i.e. the expected number of nodes.
    pub expected_nodes: u32,
    pub resamples: usize,
}

fn random_form<F: Field, R: Rng + ?Sized>(field: &F, degree: u32, rng: &mut R) -> MultiPoly<F> {
    let mons = monomials(2, degree);
    let coeffs = random_vector(field, mons.len(), rng);
    MultiPoly::from_terms(field, 2, degree, mons.into_iter().zip(coeffs)).expect("valid terms")
}

fn dehomogenize<F: Field>(field: &F, p: &MultiPoly<F>) -> UniPoly<F> {
    // p(s, 1) as a polynomial in s
    let mut coeffs = vec![field.zero(); p.degree() as usize + 1];
    for (e, c) in p.terms() {
        coeffs[e[0] as usize] = c.clone();
    }
    UniPoly::new(field, coeffs)
}

fn has_common_factor<F: Field>(field: &F, forms: &[MultiPoly<F>]) -> bool {
    // a common root at t = 0 means every coefficient of s^deg vanishes
    let deg = forms[0].degree();
    if forms.iter().all(|f| f.coeff(&[deg, 0]).is_none()) {
        return true;
    }
    let g = forms
        .iter()
        .skip(1)
        .fold(dehomogenize(field, &forms[0]), |acc, f| UniPoly::gcd(field, &acc, &dehomogenize(field, f)));
    g.degree().is_some_and(|d| d > 0)
}

/// Random nodal plane curve of degree `a + 1`, resampled until the plane
/// forms are independent and coprime and the center avoids the quadric.
pub fn gen_nodal_curve<F: Field, R: Rng + ?Sized>(field: &F, a: u32, rng: &mut R, cap: usize) -> Result<NodalCurve<F>> {
    if a < 2 {
        return Err(Error::InvalidInput(format!("a must be at least 2, got {a}")));
    }
    let s = MultiPoly::var(field, 2, 0);
    let t = MultiPoly::var(field, 2, 1);
    for attempt in 0..=cap {
        let p = random_form(field, a, rng);
        let q = random_form(field, a, rng);
        let quad = [&s, &t]
            .iter()
            .flat_map(|l| [&p, &q].map(|f| l.mul(field, f).expect("same vars")))
            .collect::<Vec<_>>();
        let space = LinearSystem::new("C", quad)?;
        let center = random_point(field, 4, rng);
        // the curve lies on x0 x3 = x1 x2; keep the center off that quadric
        let on_quadric = field.mul(&center[0], &center[3]) == field.mul(&center[1], &center[2]);
        if on_quadric {
            continue;
        }
        let rows = projection_matrix(field, &ProjPoint::new(field, center.clone())?)?;
        let proj = LinearMatrix::from_rows(field, {
            let mut r = rows.clone();
            r.push(center.clone());
            r
        });
        if proj.is_err() {
            continue;
        }
        let plane: Vec<MultiPoly<F>> = rows
            .iter()
            .map(|row| {
                row.iter().zip(space.entries()).fold(MultiPoly::zero(2, a + 1), |acc, (c, e)| {
                    acc.add(field, &e.scalar_mul(field, c)).expect("same shape")
                })
            })
            .collect();
        let coeff_rows: Vec<Vec<F::Elem>> = plane
            .iter()
            .map(|f| monomials(2, a + 1).iter().map(|e| f.coeff(e).cloned().unwrap_or_else(|| field.zero())).collect())
            .collect();
        if plane.iter().any(MultiPoly::is_zero)
            || rank(field, &coeff_rows, (a + 2) as usize) < 3
            || has_common_factor(field, &plane)
        {
            continue;
        }
        return Ok(NodalCurve {
            a,
            p,
            q,
            center,
            space_curve: space,
            system: LinearSystem::new("L", plane)?,
            expected_nodes: a * (a - 1) / 2,
            resamples: attempt,
        });
    }
    Err(Error::ResampleCapExceeded(cap))
}

/// Verdict for `n = 2` and `count` ordinary nodes on a curve of degree `d`.
pub fn nodal_plane_curve(d: u32, count: usize) -> Result<ObstructionReport> {
    check_obstruction(&DivisorialInput {
        n: 2,
        d,
        singularities: vec![
            Singularity {
                multiplicity: 2,
                ordinary: true
            };
            count
        ],
    })
}

impl ObstructionReport {
    pub fn min_discrepancy(&self) -> BigRational {
        self.discrepancies
            .iter()
            .map(|d| d.value.clone())
            .min()
            .unwrap_or_else(BigRational::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use crate::projective::generic_injectivity_heuristic;
    use crate::sample::seeded;

    #[test]
    fn worked_cases() {
        let r = nodal_plane_curve(6, 3).unwrap();
        assert_eq!(r.verdict, Verdict::Obstructed);
        assert_eq!(r.discrepancies[1].value, ratio(0, 1));

        let r = nodal_plane_curve(5, 2).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.discrepancies[1].value, ratio(-1, 5));

        let triple = DivisorialInput {
            n: 2,
            d: 6,
            singularities: vec![Singularity {
                multiplicity: 3,
                ordinary: true,
            }],
        };
        let r = check_obstruction(&triple).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.discrepancies[1].value, ratio(-1, 2));

        let r = nodal_plane_curve(3, 1).unwrap();
        assert_eq!(r.discrepancies[1].value, ratio(-1, 1));
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn guards() {
        assert!(nodal_plane_curve(1, 0).is_err());
        let bad = DivisorialInput {
            n: 2,
            d: 6,
            singularities: vec![Singularity {
                multiplicity: 1,
                ordinary: true,
            }],
        };
        assert!(check_obstruction(&bad).is_err());
        // smooth conic: nothing singular, but the coefficient 3/2 > 1
        assert_eq!(nodal_plane_curve(2, 0).unwrap().verdict, Verdict::Inconclusive);
    }

    #[test]
    fn non_ordinary_is_inconclusive() {
        let input = DivisorialInput {
            n: 2,
            d: 8,
            singularities: vec![Singularity {
                multiplicity: 2,
                ordinary: false,
            }],
        };
        let r = check_obstruction(&input).unwrap();
        assert!(r.min_discrepancy() >= ratio(0, 1));
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn threshold_and_monotonicity() {
        for d in 2..=20 {
            let v = nodal_plane_curve(d, 4).unwrap().verdict;
            assert_eq!(v == Verdict::Obstructed, d >= 6, "d = {d}");
        }
        for n in 2..=5 {
            for m in 2..=4 {
                let mut seen = false;
                for d in 2..=40 {
                    let input = DivisorialInput {
                        n,
                        d,
                        singularities: vec![Singularity {
                            multiplicity: m,
                            ordinary: true,
                        }],
                    };
                    let obstructed = check_obstruction(&input).unwrap().verdict == Verdict::Obstructed;
                    assert!(!seen || obstructed);
                    seen |= obstructed;
                }
            }
        }
    }

    #[test]
    fn generated_curves() {
        let f = PrimeField::default();
        let mut rng = seeded(7);
        for a in 2..=6 {
            let c = gen_nodal_curve(&f, a, &mut rng, 64).unwrap();
            assert_eq!(c.system.len(), 3);
            assert!(c.system.entries().iter().all(|e| e.degree() == a + 1));
            let inj = generic_injectivity_heuristic(&f, &c.system.to_map(), 100, &mut rng).unwrap();
            assert!(!inj.is_collision(), "a = {a}");
        }
        assert!(gen_nodal_curve(&f, 1, &mut rng, 4).is_err());
    }

    #[test]
    fn small_field_generator_resamples() {
        let f = PrimeField::new(7).unwrap();
        let c = gen_nodal_curve(&f, 3, &mut seeded(1), 256).unwrap();
        assert!(c.system.entries().iter().all(|e| e.degree() == 4));
    }
}
