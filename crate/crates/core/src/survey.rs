//! Exhaustive (n <= 4) or sampled (n >= 5) check of the classification
//! equivalences over all digraphs of a given order.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classify::Verdict;
use crate::digraph::Digraph;
use crate::enumerate::{all_digraphs, uniform_digraph};
use crate::error::{Error, Result};
use crate::kelly::kelly_width_exact;
use crate::matrix::{check_matrix, nu_lower_bound_search, random_q0_matrix, seeded_q0_matrix, MatrixVerdict};
use crate::minors::{forbidden_scan_with, MinorSearch};

/// Largest order enumerated exhaustively.
pub const EXHAUSTIVE_LIMIT: usize = 4;
/// Examples kept per failure list.
const KEEP: usize = 20;

#[derive(Clone, Debug)]
pub struct SurveyOptions {
    /// Instances drawn when `n` exceeds [`EXHAUSTIVE_LIMIT`].
    pub sample: usize,
    pub seed: u64,
    /// Trials of the nullity-two search on each minor-free instance.
    pub nu_trials: u64,
    /// Random `Q0` matrices fed to `check_matrix` on each minor-free instance.
    pub matrix_samples: usize,
    pub minor: MinorSearch,
}

impl Default for SurveyOptions {
    fn default() -> Self {
        SurveyOptions {
            sample: 2000,
            seed: 0,
            nu_trials: 20,
            matrix_samples: 2,
            minor: MinorSearch::default(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DichotomyTally {
    pub checked: usize,
    pub nullity_at_most_one: usize,
    pub sp_violations: usize,
    /// Matrices of nullity two or more that keep the support property.
    pub counterexamples: usize,
    pub examples: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SurveySummary {
    pub n: usize,
    pub mode: &'static str,
    pub seed: u64,
    pub instances: usize,
    pub nu_zero: usize,
    pub nu_one: usize,
    pub nu_at_least_two: usize,
    /// Digraphs where minor-freeness and Kelly-width disagree.
    pub structural_disagreements: Vec<String>,
    /// Digraphs where acyclicity and Kelly-width one disagree.
    pub acyclicity_disagreements: Vec<String>,
    /// Minor-free digraphs that received an ASAP nullity-two certificate.
    pub nu_certificates_on_minor_free: Vec<String>,
    pub dichotomy: DichotomyTally,
}

impl SurveySummary {
    /// True iff every structural equivalence held. Dichotomy counterexamples
    /// are reported but do not count.
    pub fn equivalences_hold(&self) -> bool {
        self.structural_disagreements.is_empty()
            && self.acyclicity_disagreements.is_empty()
            && self.nu_certificates_on_minor_free.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("summary serializes");
        v["equivalences_hold"] = self.equivalences_hold().into();
        v
    }
}

struct Outcome {
    verdict: Verdict,
    structural_ok: bool,
    acyclic_ok: bool,
    nu_hit: bool,
    dichotomy: DichotomyTally,
    text: String,
}

fn examine(d: &Digraph, index: u64, opts: &SurveyOptions) -> Result<Outcome> {
    let acyclic = d.is_acyclic().is_some();
    let wf = kelly_width_exact(d)?.kelly_width;
    let wr = kelly_width_exact(&d.reverse())?.kelly_width;
    let clean = forbidden_scan_with(d, &opts.minor)?.is_clean();
    let width_ok = wf <= 2 && wr <= 2;
    let verdict = if acyclic {
        Verdict::NuZero
    } else if width_ok {
        Verdict::NuOne
    } else {
        Verdict::NuAtLeastTwo
    };
    let acyclic_ok = d.n() == 0 || acyclic == (wf == 1);
    let mut tally = DichotomyTally::default();
    let mut nu_hit = false;
    if clean {
        let seed = opts.seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
        nu_hit = nu_lower_bound_search(d, 2, opts.nu_trials, seed).is_some();
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(index);
        for k in 0..opts.matrix_samples {
            let a = if k % 2 == 0 {
                random_q0_matrix(d, &mut rng)
            } else {
                match seeded_q0_matrix(d, 2, &mut rng) {
                    Some(a) => a,
                    None => continue,
                }
            };
            tally.checked += 1;
            match check_matrix(d, &a) {
                Ok(r) => match r.verdict {
                    MatrixVerdict::NullityAtMostOne => tally.nullity_at_most_one += 1,
                    MatrixVerdict::SpViolation(_) => tally.sp_violations += 1,
                },
                Err(Error::Internal(_)) => {
                    tally.counterexamples += 1;
                    tally.examples.push(format!("{}{}", d.to_text(), a.to_text()));
                }
                Err(e) => return Err(e),
            }
        }
    }
    Ok(Outcome {
        verdict,
        structural_ok: clean == width_ok,
        acyclic_ok,
        nu_hit,
        dichotomy: tally,
        text: d.to_text(),
    })
}

/// Runs the survey on order `n`. Instances are processed in parallel and
/// folded in enumeration order, so the summary depends only on the inputs.
pub fn survey(n: usize, opts: &SurveyOptions) -> Result<SurveySummary> {
    if n > opts.minor.cap {
        return Err(Error::Capacity {
            what: "survey order",
            size: n,
            limit: opts.minor.cap,
        });
    }
    let (mode, digraphs): (&'static str, Vec<Digraph>) = if n <= EXHAUSTIVE_LIMIT {
        ("exhaustive", all_digraphs(n).collect())
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        ("sampled", (0..opts.sample).map(|_| uniform_digraph(n, &mut rng)).collect())
    };
    let outcomes = digraphs
        .par_iter()
        .enumerate()
        .map(|(i, d)| examine(d, i as u64, opts))
        .collect::<Result<Vec<_>>>()?;

    let mut s = SurveySummary {
        n,
        mode,
        seed: opts.seed,
        instances: outcomes.len(),
        nu_zero: 0,
        nu_one: 0,
        nu_at_least_two: 0,
        structural_disagreements: Vec::new(),
        acyclicity_disagreements: Vec::new(),
        nu_certificates_on_minor_free: Vec::new(),
        dichotomy: DichotomyTally::default(),
    };
    for o in outcomes {
        match o.verdict {
            Verdict::NuZero => s.nu_zero += 1,
            Verdict::NuOne => s.nu_one += 1,
            Verdict::NuAtLeastTwo => s.nu_at_least_two += 1,
        }
        if !o.structural_ok {
            s.structural_disagreements.push(o.text.clone());
        }
        if !o.acyclic_ok {
            s.acyclicity_disagreements.push(o.text.clone());
        }
        if o.nu_hit {
            s.nu_certificates_on_minor_free.push(o.text.clone());
        }
        let t = &mut s.dichotomy;
        t.checked += o.dichotomy.checked;
        t.nullity_at_most_one += o.dichotomy.nullity_at_most_one;
        t.sp_violations += o.dichotomy.sp_violations;
        t.counterexamples += o.dichotomy.counterexamples;
        for e in o.dichotomy.examples {
            if t.examples.len() < KEEP {
                t.examples.push(e);
            }
        }
    }
    for list in [
        &mut s.structural_disagreements,
        &mut s.acyclicity_disagreements,
        &mut s.nu_certificates_on_minor_free,
    ] {
        list.truncate(KEEP);
    }
    Ok(s)
}
