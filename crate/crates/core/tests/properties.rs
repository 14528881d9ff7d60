use proptest::prelude::*;

use cremona::bimonoid::{adapt_coordinates, interpolate, Ansatz, BiMonoidSurface};
use cremona::certificate::{from_doc, to_doc, CertificateDoc};
use cremona::chain::{run_chain, verify_certificate};
use cremona::config::RunConfig;
use cremona::linalg::LinearMatrix;
use cremona::monoid::{adapted_backward, adapted_forward, build_cremona};
use cremona::obstruction::{check_obstruction, DivisorialInput, Singularity, Verdict};
use cremona::poly::{monomials, MultiPoly};
use cremona::projective::{maps_equal_projective, ProjPoint, RationalMap};
use cremona::sample::{random_point, random_vector, seeded, SeededRng};
use cremona::system::LinearSystem;
use cremona::{Field, PrimeField};

fn random_form(f: &PrimeField, nvars: usize, degree: u32, rng: &mut SeededRng) -> MultiPoly<PrimeField> {
    let mons = monomials(nvars, degree);
    let coeffs = random_vector(f, mons.len(), rng);
    MultiPoly::from_terms(f, nvars, degree, mons.into_iter().zip(coeffs)).unwrap()
}

fn random_surface(f: &PrimeField, n: usize, k: u32, rng: &mut SeededRng) -> BiMonoidSurface<PrimeField> {
    let forms = [k - 2, k - 1, k - 1, k].map(|d| random_form(f, n, d, rng));
    let q1 = ProjPoint::new(f, random_point(f, n + 2, rng)).unwrap();
    let q2 = ProjPoint::new(f, random_point(f, n + 2, rng)).unwrap();
    let m = adapt_coordinates(f, &q1, &q2, n).unwrap();
    BiMonoidSurface::with_sampled_witnesses(f, n, k, forms, m, rng, 64).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// backward(forward(x)) = x * u^{k-1} (bc - ad) exactly, as vectors.
    #[test]
    fn keystone_identity(seed in any::<u64>(), n in 2usize..=4, k in 2u32..=4) {
        let f = PrimeField::default();
        let mut rng = seeded(seed);
        let s = random_surface(&f, n, k, &mut rng);
        let fwd = adapted_forward(&f, &s);
        let bwd = adapted_backward(&f, &s);
        let minor = s.minor(&f);
        for _ in 0..5 {
            let x = random_point(&f, n + 1, &mut rng);
            let back = bwd.eval(&f, &fwd.eval(&f, &x).unwrap()).unwrap();
            let mut z = x.clone();
            z.push(0);
            let u = s.eval_u(&f, &z).unwrap();
            let factor = f.mul(&f.pow(&u, u64::from(k - 1)), &minor.eval(&f, &x[..n]).unwrap());
            let expect: Vec<u64> = x.iter().map(|v| f.mul(v, &factor)).collect();
            prop_assert_eq!(back, expect);
        }
    }

    /// Maps built in original coordinates have degree k and invert each other.
    #[test]
    fn conjugated_maps_round_trip(seed in any::<u64>(), n in 2usize..=4, k in 2u32..=3) {
        let f = PrimeField::default();
        let mut rng = seeded(seed);
        let s = random_surface(&f, n, k, &mut rng);
        let m = build_cremona(&f, &s).unwrap();
        prop_assert!(m.forward().components().iter().all(|c| c.degree() == k));
        prop_assert!(m.backward().components().iter().all(|c| c.degree() == k));
        prop_assert!(m.verify_roundtrip(&f, 10, &mut rng).is_ok());
    }

    /// Every interpolated surface has x_n- and x_{n+1}-degree at most one in
    /// adapted coordinates and vanishes on fresh samples.
    #[test]
    fn interpolation_structure(seed in any::<u64>()) {
        let f = PrimeField::default();
        let mut rng = seeded(seed);
        // rational normal quartic through random coordinates in P^4 (n = 3)
        let curve = |rng: &mut SeededRng| {
            let p = random_point(&f, 2, rng);
            let (s, t) = (p[0], p[1]);
            (0..5u32).map(|i| f.mul(&f.pow(&s, u64::from(4 - i)), &f.pow(&t, u64::from(i)))).collect::<Vec<u64>>()
        };
        let m = LinearMatrix::identity(&f, 5);
        let dim = Ansatz::new(3, 2).unwrap().dim();
        let samples: Vec<Vec<u64>> = (0..2 * dim).map(|_| curve(&mut rng)).collect();
        let hold: Vec<Vec<u64>> = (0..100).map(|_| curve(&mut rng)).collect();
        if let Ok((s, _)) = interpolate(&f, &samples, &hold, 2, 3, &m, 16, &mut rng) {
            let eq = s.adapted_equation(&f);
            prop_assert!(eq.degree_in(3) <= 1 && eq.degree_in(4) <= 1);
            for _ in 0..20 {
                prop_assert_eq!(s.eval_adapted(&f, &curve(&mut rng)).unwrap(), 0);
            }
        }
    }

    /// Equality of maps ignores an overall scalar and detects a perturbation.
    #[test]
    fn projective_equality(seed in any::<u64>(), scale in 1u64..1000) {
        let f = PrimeField::default();
        let mut rng = seeded(seed);
        let comps: Vec<MultiPoly<PrimeField>> = (0..3).map(|_| random_form(&f, 3, 2, &mut rng)).collect();
        let a = RationalMap::new(2, comps.clone()).unwrap();
        let scaled = RationalMap::new(2, comps.iter().map(|c| c.scalar_mul(&f, &scale)).collect()).unwrap();
        prop_assert!(maps_equal_projective(&f, &a, &scaled, 20, &mut rng).unwrap().is_equal());
        let mut bumped = comps.clone();
        bumped[1] = bumped[1].add(&f, &MultiPoly::var(&f, 3, 0).pow(&f, 2)).unwrap();
        let b = RationalMap::new(2, bumped).unwrap();
        prop_assert!(!maps_equal_projective(&f, &a, &b, 20, &mut rng).unwrap().is_equal());
    }

    /// Obstructed verdicts persist as the degree grows.
    #[test]
    fn obstruction_monotone(n in 2u32..6, d in 2u32..30, mults in proptest::collection::vec(2u32..5, 0..4)) {
        let sing: Vec<Singularity> = mults.iter().map(|&m| Singularity { multiplicity: m, ordinary: true }).collect();
        let at = |d| check_obstruction(&DivisorialInput { n, d, singularities: sing.clone() }).unwrap().verdict;
        if at(d) == Verdict::Obstructed {
            prop_assert_eq!(at(d + 1), Verdict::Obstructed);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    /// Rational normal curves in general coordinates of P^3 and P^4: prefix
    /// and degree invariants, verifier acceptance, and document round trip.
    #[test]
    fn chain_invariants(seed in any::<u64>(), n in 3usize..=4) {
        let f = PrimeField::default();
        let mut rng = seeded(seed);
        let l = LinearSystem::new("L", (0..=n).map(|_| random_form(&f, 2, n as u32, &mut rng)).collect()).unwrap();
        let g = LinearSystem::new("G", (0..2).map(|_| random_form(&f, 2, 1, &mut rng)).collect()).unwrap();
        let cert = run_chain(&f, l.clone(), g.clone(), &RunConfig::with_seed(seed)).map_err(|a| a.error).unwrap();
        let target = cert.input.target(&f).unwrap();
        let total = l.degree() + g.degree();
        for st in &cert.steps {
            let i = st.index;
            prop_assert_eq!(&st.a_next.entries()[..=i + 1], &target.entries()[..=i + 1]);
            prop_assert!(st.a_next.entries().iter().all(|e| e.degree() == total));
        }
        prop_assert!(verify_certificate(&f, &cert, 20, &mut seeded(seed ^ 1)).passed());
        let vars = vec!["s0".to_string(), "s1".to_string()];
        let text = to_doc(&f, &cert, &vars).to_json();
        let back = from_doc(&f, &CertificateDoc::from_json(&text).unwrap()).unwrap();
        prop_assert_eq!(to_doc(&f, &back, &vars).to_json(), text);
    }
}
