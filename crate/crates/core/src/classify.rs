//! Classification of a digraph by its stable maximum nullity.
//!
//! `nu = 0` exactly for acyclic digraphs. Otherwise `nu <= 1` exactly when
//! both the digraph and its reverse have Kelly-width at most two, which in
//! turn holds exactly when none of the five forbidden patterns is a
//! directed minor. Kelly-width decides; the minor scan cross-checks.

use std::time::Instant;

use serde::Serialize;

use crate::digraph::{Digraph, VertexId};
use crate::error::{Error, Result};
use crate::kelly::{kelly_width_exact, ordering_width, recognize_width1, WidthMethod, WidthReport};
use crate::matrix::{asap_check, in_q, nu_lower_bound_search, NuCertificate};
use crate::minors::{forbidden_scan_with, MinorSearch, MinorWitness, Pattern};

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Verdict {
    NuZero,
    NuOne,
    NuAtLeastTwo,
}

#[derive(Clone, Debug)]
pub struct ClassifyOptions {
    pub minor: MinorSearch,
    /// Attach an ASAP matrix of the claimed nullity when the search finds one.
    pub with_matrix: bool,
    pub matrix_trials: u64,
    pub seed: u64,
    pub timings: bool,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            minor: MinorSearch::default(),
            with_matrix: false,
            matrix_trials: 2000,
            seed: 0,
            timings: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    TopologicalOrder(Vec<VertexId>),
    WidthOne {
        forward: WidthReport,
        reverse: WidthReport,
        matrix: Option<NuCertificate>,
    },
    ForbiddenMinor {
        forward: WidthReport,
        reverse: WidthReport,
        /// Absent when the digraph exceeds the minor-search cap.
        minor: Option<(Pattern, MinorWitness)>,
        matrix: Option<NuCertificate>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossCheck {
    Agree,
    /// Host larger than the minor-search cap.
    Skipped,
    /// Acyclic digraphs need no cross-check.
    NotApplicable,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassificationReport {
    pub n: usize,
    pub arcs: usize,
    pub verdict: Verdict,
    pub certificate: Certificate,
    pub cross_check: CrossCheck,
    /// Stage name and wall time in milliseconds, when requested.
    pub timings: Option<Vec<(&'static str, f64)>>,
}

pub fn classify(d: &Digraph) -> Result<ClassificationReport> {
    classify_with(d, &ClassifyOptions::default())
}

pub fn classify_with(d: &Digraph, opts: &ClassifyOptions) -> Result<ClassificationReport> {
    let mut clock = Stopwatch::new(opts.timings);
    let base = |verdict, certificate, cross_check| ClassificationReport {
        n: d.n(),
        arcs: d.arc_count(),
        verdict,
        certificate,
        cross_check,
        timings: None,
    };

    if let Some(order) = d.is_acyclic() {
        clock.lap("acyclicity");
        let mut report = base(Verdict::NuZero, Certificate::TopologicalOrder(order), CrossCheck::NotApplicable);
        report.timings = clock.finish();
        report.validate(d)?;
        return Ok(report);
    }

    let forward = side_width(d)?;
    let reverse = side_width(&d.reverse())?;
    clock.lap("kelly-width");
    let width_ok = forward.kelly_width <= 2 && reverse.kelly_width <= 2;

    let (cross_check, minor) = if d.n() <= opts.minor.cap {
        let scan = forbidden_scan_with(d, &opts.minor)?;
        clock.lap("forbidden-scan");
        if scan.is_clean() != width_ok {
            return Err(Error::internal(format!(
                "Kelly-width ({}, {}) and forbidden-minor scan (clean = {}) disagree on\n{}",
                forward.kelly_width,
                reverse.kelly_width,
                scan.is_clean(),
                d.to_text()
            )));
        }
        (CrossCheck::Agree, scan.first_found().map(|(p, w)| (p, w.clone())))
    } else {
        (CrossCheck::Skipped, None)
    };

    let matrix = if opts.with_matrix {
        let target = if width_ok { 1 } else { 2 };
        let found = nu_lower_bound_search(d, target, opts.matrix_trials, opts.seed);
        clock.lap("matrix-search");
        found
    } else {
        None
    };

    let mut report = if width_ok {
        base(
            Verdict::NuOne,
            Certificate::WidthOne { forward, reverse, matrix },
            cross_check,
        )
    } else {
        base(
            Verdict::NuAtLeastTwo,
            Certificate::ForbiddenMinor {
                forward,
                reverse,
                minor,
                matrix,
            },
            cross_check,
        )
    };
    report.timings = clock.finish();
    report.validate(d)?;
    Ok(report)
}

/// Greedy width-one recognition first, exact dynamic programming when it fails.
fn side_width(d: &Digraph) -> Result<WidthReport> {
    if let Some(ordering) = recognize_width1(d) {
        let w = ordering_width(d, ordering.as_slice())?;
        return Ok(WidthReport {
            kelly_width: w + 1,
            ordering,
            method: WidthMethod::Greedy,
        });
    }
    kelly_width_exact(d)
}

fn check_matrix_certificate(d: &Digraph, c: &NuCertificate, target: usize) -> Result<()> {
    if !in_q(d, &c.matrix)? || c.matrix.nullity() != c.nullity || c.nullity < target || !asap_check(&c.matrix).holds {
        return Err(Error::internal("matrix certificate does not re-validate"));
    }
    Ok(())
}

impl ClassificationReport {
    /// Replays every certificate against `d`.
    pub fn validate(&self, d: &Digraph) -> Result<()> {
        match &self.certificate {
            Certificate::TopologicalOrder(order) => {
                let mut pos = vec![usize::MAX; d.n()];
                for (i, &v) in order.iter().enumerate() {
                    pos[v] = i;
                }
                if order.len() != d.n() || d.arcs().any(|(u, w)| pos[u] >= pos[w]) {
                    return Err(Error::internal("topological order does not re-validate"));
                }
            }
            Certificate::WidthOne { forward, reverse, matrix } => {
                forward.revalidate(d)?;
                reverse.revalidate(&d.reverse())?;
                if forward.kelly_width > 2 || reverse.kelly_width > 2 {
                    return Err(Error::internal("width-one certificate is too wide"));
                }
                if let Some(c) = matrix {
                    check_matrix_certificate(d, c, 1)?;
                }
            }
            Certificate::ForbiddenMinor {
                forward,
                reverse,
                minor,
                matrix,
            } => {
                forward.revalidate(d)?;
                reverse.revalidate(&d.reverse())?;
                if let Some((p, w)) = minor {
                    w.verify(d, &p.digraph())?;
                }
                if let Some(c) = matrix {
                    check_matrix_certificate(d, c, 2)?;
                }
            }
        }
        Ok(())
    }

    /// Deterministic JSON with 1-based vertex numbers.
    pub fn to_json(&self) -> serde_json::Value {
        use serde_json::{json, Value};
        let width = |r: &WidthReport| {
            json!({
                "kelly_width": r.kelly_width,
                "ordering": r.ordering.one_based(),
                "method": r.method,
            })
        };
        let matrix = |m: &Option<NuCertificate>| match m {
            None => Value::Null,
            Some(c) => json!({
                "matrix": c.matrix.to_json(),
                "nullity": c.nullity,
                "asap": true,
                "trial": c.trial,
            }),
        };
        let certificate = match &self.certificate {
            Certificate::TopologicalOrder(order) => json!({
                "kind": "topological_order",
                "order": order.iter().map(|v| v + 1).collect::<Vec<_>>(),
            }),
            Certificate::WidthOne {
                forward,
                reverse,
                matrix: m,
            } => json!({
                "kind": "width_one_orderings",
                "forward": width(forward),
                "reverse": width(reverse),
                "matrix": matrix(m),
            }),
            Certificate::ForbiddenMinor {
                forward,
                reverse,
                minor,
                matrix: m,
            } => json!({
                "kind": "forbidden_minor",
                "forward": width(forward),
                "reverse": width(reverse),
                "pattern": minor.as_ref().map(|(p, _)| p.name()),
                "witness": minor.as_ref().map(|(_, w)| w.to_json_value()),
                "matrix": matrix(m),
            }),
        };
        let mut out = json!({
            "schema": REPORT_SCHEMA,
            "n": self.n,
            "arcs": self.arcs,
            "verdict": self.verdict,
            "certificate": certificate,
            "cross_check": self.cross_check,
        });
        if let Some(t) = &self.timings {
            out["timings_ms"] = t.iter().map(|(k, v)| ((*k).to_string(), json!(v))).collect();
        }
        out
    }
}

struct Stopwatch {
    start: Option<Instant>,
    laps: Vec<(&'static str, f64)>,
}

impl Stopwatch {
    fn new(on: bool) -> Self {
        Stopwatch {
            start: on.then(Instant::now),
            laps: Vec::new(),
        }
    }

    fn lap(&mut self, name: &'static str) {
        if let Some(s) = self.start.as_mut() {
            self.laps.push((name, s.elapsed().as_secs_f64() * 1e3));
            *s = Instant::now();
        }
    }

    fn finish(self) -> Option<Vec<(&'static str, f64)>> {
        self.start.map(|_| self.laps)
    }
}
