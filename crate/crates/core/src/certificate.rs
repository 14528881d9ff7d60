//! JSON documents: run inputs and chain certificates.
//!
//! Polynomials are stored as strings in the polynomial grammar and field
//! elements as decimal strings (symmetric representatives over `F_p`), so a
//! document can be re-checked without this crate.

use serde::{Deserialize, Serialize};

use crate::bimonoid::{BiMonoidSurface, KAttempt, Witnesses};
use crate::chain::{step_projection, ChainCertificate, ChainInput, ChainStep, EndToEnd, InjectivityVerdicts, StepTranscript};
use crate::error::{Error, Result};
use crate::field::{Field, FieldSpec};
use crate::grammar::{ambient_vars, format_poly, param_vars, parse_poly};
use crate::linalg::LinearMatrix;
use crate::monoid::{frames, CremonaMap, RoundTripTranscript};
use crate::poly::MultiPoly;
use crate::projective::{projection_matrix, ProjPoint, RationalMap};
use crate::system::LinearSystem;

/// Input of `equivalence` and `linearize`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Names of the parameters; defaults to `s0..s_r`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub param_vars: Option<Vec<String>>,
    #[serde(rename = "L")]
    pub l: Vec<String>,
    #[serde(rename = "G", default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<String>>,
    /// Free-form provenance of generated inputs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl InputDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("input document: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }

    pub fn vars(&self) -> Result<Vec<String>> {
        match (&self.param_vars, self.r) {
            (Some(v), r) => {
                if r.is_some_and(|r| r + 1 != v.len()) {
                    return Err(Error::Parse(format!("r = {} but {} parameter names given", r.unwrap(), v.len())));
                }
                if v.is_empty() {
                    return Err(Error::Parse("no parameter names".into()));
                }
                Ok(v.clone())
            }
            (None, Some(r)) => Ok(param_vars(r + 1)),
            (None, None) => Err(Error::Parse("input needs `r` or `param_vars`".into())),
        }
    }

    /// `(L, G)`; `G` is `None` when the document omits it.
    pub fn systems<F: Field>(&self, field: &F) -> Result<(LinearSystem<F>, Option<LinearSystem<F>>)> {
        let vars = self.vars()?;
        let v: Vec<&str> = vars.iter().map(String::as_str).collect();
        if let Some(n) = self.n {
            if n + 1 != self.l.len() {
                return Err(Error::Parse(format!("n = {n} but L has {} entries", self.l.len())));
            }
        }
        let l = parse_system(field, "L", &self.l, &v, None)?;
        let g = match &self.g {
            Some(g) => Some(parse_system(field, "G", g, &v, None)?),
            None => None,
        };
        Ok((l, g))
    }
}

fn parse_system<F: Field>(field: &F, label: &str, entries: &[String], vars: &[&str], degree: Option<u32>) -> Result<LinearSystem<F>> {
    let polys = entries
        .iter()
        .map(|e| parse_poly(field, e, vars, degree))
        .collect::<Result<Vec<_>>>()?;
    LinearSystem::new(label, polys).map_err(|e| Error::Parse(format!("system {label}: {e}")))
}

/// The linear system `{s_0, ..., s_r}` on `P^r`.
pub fn linear_system<F: Field>(field: &F, r: usize) -> LinearSystem<F> {
    let entries = (0..=r).map(|i| MultiPoly::var(field, r + 1, i)).collect();
    LinearSystem::new("G", entries).expect("nonzero")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDoc {
    pub version: String,
    pub field: FieldSpec,
    pub seed: u64,
    pub r: usize,
    pub n: usize,
    pub param_vars: Vec<String>,
    #[serde(rename = "L")]
    pub l: Vec<String>,
    #[serde(rename = "G")]
    pub g: Vec<String>,
    pub l_permutation: Vec<usize>,
    pub g_permutation: Vec<usize>,
    pub injectivity: InjectivityDoc,
    pub steps: Vec<StepDoc>,
    pub shortcut: Option<usize>,
    pub end_to_end: Option<EndToEndDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InjectivityDoc {
    pub pairs: usize,
    pub l_collision: bool,
    pub g_collision: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepDoc {
    pub i: usize,
    pub q2: Vec<String>,
    pub k: u32,
    pub surface: SurfaceDoc,
    pub forward: Vec<String>,
    pub backward: Vec<String>,
    #[serde(rename = "A_next")]
    pub a_next: Vec<String>,
    pub transcript: TranscriptDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceDoc {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    pub adaptation: Vec<Vec<String>>,
    pub witnesses: WitnessDoc,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessDoc {
    pub u_point: Vec<String>,
    pub w_point: Vec<String>,
    pub minor_point: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranscriptDoc {
    pub seed: u64,
    pub trials: usize,
    pub q2_attempts: usize,
    pub failures: Vec<String>,
    pub k_tried: Vec<KAttemptDoc>,
    pub roundtrip: RoundTripDoc,
    pub conjugation_failure_log2: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KAttemptDoc {
    pub k: u32,
    pub ansatz_dim: usize,
    pub nullity: usize,
    pub outcome: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundTripDoc {
    pub seed: u64,
    pub trials: usize,
    pub forward_then_backward: usize,
    pub backward_then_forward: usize,
    pub resamples: usize,
    pub failure_log2: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndToEndDoc {
    pub seed: u64,
    pub trials: usize,
    pub forward_passes: usize,
    pub backward_passes: usize,
    pub resamples: usize,
    pub failure_log2: f64,
}

impl CertificateDoc {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("certificate: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

fn fmt_vec<F: Field>(field: &F, v: &[F::Elem]) -> Vec<String> {
    v.iter().map(|x| field.format(x)).collect()
}

fn fmt_polys<F: Field>(field: &F, ps: &[MultiPoly<F>], vars: &[String]) -> Vec<String> {
    ps.iter().map(|p| format_poly(field, p, vars)).collect()
}

fn parse_vec<F: Field>(field: &F, v: &[String]) -> Result<Vec<F::Elem>> {
    v.iter().map(|s| field.parse_elem(s)).collect()
}

fn parse_polys<F: Field>(field: &F, v: &[String], vars: &[String], degree: u32) -> Result<Vec<MultiPoly<F>>> {
    let names: Vec<&str> = vars.iter().map(String::as_str).collect();
    v.iter().map(|s| parse_poly(field, s, &names, Some(degree))).collect()
}

/// Serializes a certificate. `vars` names the parameters.
pub fn to_doc<F: Field>(field: &F, cert: &ChainCertificate<F>, vars: &[String]) -> CertificateDoc {
    let input = &cert.input;
    let n = input.n;
    let small = ambient_vars(n);
    let big = ambient_vars(n + 1);
    let steps = cert
        .steps
        .iter()
        .map(|st| {
            let s = st.map.surface();
            let w = s.witnesses();
            let t = &st.transcript;
            StepDoc {
                i: st.index,
                q2: fmt_vec(field, &st.q2),
                k: s.k(),
                surface: SurfaceDoc {
                    a: format_poly(field, s.a(), &small),
                    b: format_poly(field, s.b(), &small),
                    c: format_poly(field, s.c(), &small),
                    d: format_poly(field, s.d(), &small),
                    adaptation: s.adaptation().rows().iter().map(|r| fmt_vec(field, r)).collect(),
                    witnesses: WitnessDoc {
                        u_point: fmt_vec(field, &w.u_point),
                        w_point: fmt_vec(field, &w.w_point),
                        minor_point: fmt_vec(field, &w.minor_point),
                    },
                },
                forward: fmt_polys(field, st.map.forward().components(), &big),
                backward: fmt_polys(field, st.map.backward().components(), &big),
                a_next: fmt_polys(field, st.a_next.entries(), vars),
                transcript: TranscriptDoc {
                    seed: t.seed,
                    trials: t.conjugation_trials,
                    q2_attempts: t.q2_attempts,
                    failures: t.failures.clone(),
                    k_tried: t
                        .k_log
                        .iter()
                        .map(|a| KAttemptDoc {
                            k: a.k,
                            ansatz_dim: a.ansatz_dim,
                            nullity: a.nullity,
                            outcome: a.outcome.clone(),
                        })
                        .collect(),
                    roundtrip: RoundTripDoc {
                        seed: t.roundtrip.seed,
                        trials: t.roundtrip.trials,
                        forward_then_backward: t.roundtrip.forward_then_backward,
                        backward_then_forward: t.roundtrip.backward_then_forward,
                        resamples: t.roundtrip.resamples,
                        failure_log2: t.roundtrip.failure_log2,
                    },
                    conjugation_failure_log2: t.conjugation_failure_log2,
                },
            }
        })
        .collect();
    CertificateDoc {
        version: cert.version.clone(),
        field: field.spec(),
        seed: cert.seed,
        r: input.r,
        n,
        param_vars: vars.to_vec(),
        l: fmt_polys(field, input.l.entries(), vars),
        g: fmt_polys(field, input.g.entries(), vars),
        l_permutation: input.l_perm.clone(),
        g_permutation: input.g_perm.clone(),
        injectivity: InjectivityDoc {
            pairs: cert.injectivity.pairs,
            l_collision: cert.injectivity.l_collision,
            g_collision: cert.injectivity.g_collision,
        },
        steps,
        shortcut: cert.shortcut,
        end_to_end: cert.end_to_end.as_ref().map(|e| EndToEndDoc {
            seed: e.seed,
            trials: e.trials,
            forward_passes: e.forward_passes,
            backward_passes: e.backward_passes,
            resamples: e.resamples,
            failure_log2: e.failure_log2,
        }),
    }
}

fn check_perm(p: &[usize], len: usize) -> Result<()> {
    let mut seen = vec![false; len];
    if p.len() != len {
        return Err(Error::Parse("permutation has the wrong length".into()));
    }
    for &j in p {
        if j >= len || std::mem::replace(&mut seen[j], true) {
            return Err(Error::Parse("not a permutation".into()));
        }
    }
    Ok(())
}

/// Reads a certificate back. Derived data (`A_0`, every `H_i`, the frames)
/// is recomputed; stored claims are taken verbatim so that a verifier can
/// test them.
pub fn from_doc<F: Field>(field: &F, doc: &CertificateDoc) -> Result<ChainCertificate<F>> {
    if doc.field != field.spec() {
        return Err(Error::Parse(format!("certificate is over {}, not {}", doc.field, field.spec())));
    }
    if doc.param_vars.len() != doc.r + 1 {
        return Err(Error::Parse("param_vars does not match r".into()));
    }
    let names: Vec<&str> = doc.param_vars.iter().map(String::as_str).collect();
    let l = parse_system(field, "L", &doc.l, &names, None)?;
    let g = parse_system(field, "G", &doc.g, &names, None)?;
    let n = doc.n;
    if l.len() != n + 1 || g.len() != n + 1 {
        return Err(Error::Parse("L and G must have n + 1 entries".into()));
    }
    check_perm(&doc.l_permutation, n + 1)?;
    check_perm(&doc.g_permutation, n + 1)?;
    let input = ChainInput {
        r: doc.r,
        n,
        l,
        g,
        l_perm: doc.l_permutation.clone(),
        g_perm: doc.g_permutation.clone(),
    };
    let small = ambient_vars(n);
    let big = ambient_vars(n + 1);
    let mut a = input.a0(field)?;
    let sys_degree = a.degree();
    let mut steps = Vec::with_capacity(doc.steps.len());
    for sd in &doc.steps {
        let i = sd.i;
        if i >= n {
            return Err(Error::Parse(format!("step index {i} out of range")));
        }
        let k = sd.k;
        if k < 2 {
            return Err(Error::Parse("k must be at least 2".into()));
        }
        let h = input.h(field, i, &a)?;
        let q2 = parse_vec(field, &sd.q2)?;
        let sf = &sd.surface;
        let forms: Vec<MultiPoly<F>> = [(&sf.a, k - 2), (&sf.b, k - 1), (&sf.c, k - 1), (&sf.d, k)]
            .into_iter()
            .map(|(t, deg)| parse_polys(field, std::slice::from_ref(t), &small, deg).map(|mut v| v.remove(0)))
            .collect::<Result<_>>()?;
        let rows = sf
            .adaptation
            .iter()
            .map(|r| parse_vec(field, r))
            .collect::<Result<Vec<_>>>()?;
        if rows.len() != n + 2 || rows.iter().any(|r| r.len() != n + 2) {
            return Err(Error::Parse("adaptation matrix has the wrong shape".into()));
        }
        let adaptation = LinearMatrix::from_rows(field, rows)?;
        let witnesses = Witnesses {
            u_point: parse_vec(field, &sf.witnesses.u_point)?,
            w_point: parse_vec(field, &sf.witnesses.w_point)?,
            minor_point: parse_vec(field, &sf.witnesses.minor_point)?,
        };
        let forms: [MultiPoly<F>; 4] = forms.try_into().expect("four forms");
        let surface = BiMonoidSurface::from_parts_unchecked(n, k, forms, adaptation, witnesses)?;
        let forward = RationalMap::new(n, parse_polys(field, &sd.forward, &big, k)?)?;
        let backward = RationalMap::new(n, parse_polys(field, &sd.backward, &big, k)?)?;
        if forward.target_dim() != n || backward.target_dim() != n {
            return Err(Error::Parse("maps must have n + 1 components".into()));
        }
        // frames depend only on the adaptation and q2; a corrupted matrix
        // falls back to the identity and is reported by the verifier
        let (t1, t) = ProjPoint::new(field, q2.clone())
            .and_then(|q| {
                let q1 = ProjPoint::vertex(field, n + 1, n + 1);
                frames(field, &surface, &projection_matrix(field, &q1)?, &step_projection(field, &q, i)?)
            })
            .unwrap_or_else(|_| (LinearMatrix::identity(field, n + 1), LinearMatrix::identity(field, n + 1)));
        let tr = &sd.transcript;
        let roundtrip = RoundTripTranscript {
            seed: tr.roundtrip.seed,
            trials: tr.roundtrip.trials,
            forward_then_backward: tr.roundtrip.forward_then_backward,
            backward_then_forward: tr.roundtrip.backward_then_forward,
            resamples: tr.roundtrip.resamples,
            failure_log2: tr.roundtrip.failure_log2,
        };
        let map = CremonaMap::from_parts(forward, backward, surface, t1, t, Some(roundtrip.clone()));
        let a_next = LinearSystem::new(
            format!("A{}", i + 1),
            parse_polys(field, &sd.a_next, &doc.param_vars, sys_degree)?,
        )?;
        if a_next.len() != n + 1 {
            return Err(Error::Parse("A_next must have n + 1 entries".into()));
        }
        steps.push(ChainStep {
            index: i,
            a: a.clone(),
            h,
            q2,
            map,
            a_next: a_next.clone(),
            transcript: StepTranscript {
                seed: tr.seed,
                q2_attempts: tr.q2_attempts,
                failures: tr.failures.clone(),
                k_log: tr
                    .k_tried
                    .iter()
                    .map(|a| KAttempt {
                        k: a.k,
                        ansatz_dim: a.ansatz_dim,
                        nullity: a.nullity,
                        outcome: a.outcome.clone(),
                    })
                    .collect(),
                roundtrip,
                conjugation_trials: tr.trials,
                conjugation_failure_log2: tr.conjugation_failure_log2,
            },
        });
        a = a_next;
    }
    Ok(ChainCertificate {
        version: doc.version.clone(),
        seed: doc.seed,
        input,
        injectivity: InjectivityVerdicts {
            pairs: doc.injectivity.pairs,
            l_collision: doc.injectivity.l_collision,
            g_collision: doc.injectivity.g_collision,
        },
        steps,
        shortcut: doc.shortcut,
        end_to_end: doc.end_to_end.as_ref().map(|e| EndToEnd {
            seed: e.seed,
            trials: e.trials,
            forward_passes: e.forward_passes,
            backward_passes: e.backward_passes,
            resamples: e.resamples,
            failure_log2: e.failure_log2,
        }),
    })
}
