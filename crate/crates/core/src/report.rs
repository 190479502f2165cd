//! Structured results of identity checks.

use std::time::Instant;

use serde::Serialize;

use crate::scalar::{Decision, Scalar, ZeroConfig};
use crate::tensor::{blade_name, ExteriorTensor, Variance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    ProbabilisticPass,
    Indeterminate,
    /// The check does not apply to the input.
    Skipped,
}

impl Status {
    pub fn is_pass(self) -> bool {
        matches!(self, Status::Pass | Status::ProbabilisticPass | Status::Skipped)
    }

    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::ProbabilisticPass => "probabilistic-pass",
            Status::Indeterminate => "indeterminate",
            Status::Skipped => "skipped",
        }
    }

    /// The worse of two statuses.
    pub fn combine(self, other: Status) -> Status {
        fn severity(s: Status) -> u8 {
            match s {
                Status::Skipped | Status::Pass => 0,
                Status::ProbabilisticPass => 1,
                Status::Indeterminate => 2,
                Status::Fail => 3,
            }
        }
        if severity(other) > severity(self) {
            other
        } else {
            self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    /// The basis element or argument tuple that exposed the failure.
    pub element: String,
    pub residual: String,
    pub decision: Decision,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Probabilistic {
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub status: Status,
    pub cases: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probabilistic: Option<Probabilistic>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub values: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.status.is_pass()
    }

    pub fn note(mut self, n: impl Into<String>) -> Self {
        self.notes.push(n.into());
        self
    }

    pub fn value(mut self, key: impl Into<String>, v: impl Into<String>) -> Self {
        self.values.push((key.into(), v.into()));
        self
    }

    /// A report for a check that could not run, e.g. a rejected input.
    pub fn failure(check: impl Into<String>, element: impl Into<String>, residual: impl Into<String>) -> Self {
        VerificationReport {
            check: check.into(),
            status: Status::Fail,
            cases: 1,
            witnesses: vec![Witness {
                element: element.into(),
                residual: residual.into(),
                decision: Decision::NonZero,
            }],
            notes: Vec::new(),
            probabilistic: None,
            values: Vec::new(),
            elapsed_ms: None,
        }
    }

    pub fn skipped(check: impl Into<String>, why: impl Into<String>) -> Self {
        VerificationReport {
            check: check.into(),
            status: Status::Skipped,
            cases: 0,
            witnesses: Vec::new(),
            notes: vec![why.into()],
            probabilistic: None,
            values: Vec::new(),
            elapsed_ms: None,
        }
    }

    /// Merges sub-reports into one named report.
    pub fn merge(check: impl Into<String>, parts: &[VerificationReport]) -> Self {
        let mut status = Status::Pass;
        let mut out = VerificationReport {
            check: check.into(),
            status,
            cases: 0,
            witnesses: Vec::new(),
            notes: Vec::new(),
            probabilistic: None,
            values: Vec::new(),
            elapsed_ms: None,
        };
        for p in parts {
            status = status.combine(p.status);
            out.cases += p.cases;
            for w in &p.witnesses {
                out.witnesses.push(Witness {
                    element: format!("{}: {}", p.check, w.element),
                    ..w.clone()
                });
            }
            if out.probabilistic.is_none() {
                out.probabilistic = p.probabilistic.clone();
            }
        }
        out.status = status;
        out
    }
}

/// Names used to render residuals.
#[derive(Clone, Debug, Default)]
pub struct Names {
    pub coords: Vec<String>,
    pub vectors: Vec<String>,
    pub forms: Vec<String>,
}

impl Names {
    pub fn scalar(&self, s: &Scalar) -> String {
        s.display(&self.coords).to_string()
    }

    pub fn tensor(&self, t: &ExteriorTensor) -> String {
        let frame = match t.variance() {
            Variance::Multivector => &self.vectors,
            Variance::Form => &self.forms,
        };
        t.display(&self.coords, frame).to_string()
    }

    pub fn blade(&self, t: &ExteriorTensor, b: crate::tensor::Blade) -> String {
        let frame = match t.variance() {
            Variance::Multivector => &self.vectors,
            Variance::Form => &self.forms,
        };
        blade_name(b, frame)
    }
}

const MAX_WITNESSES: usize = 8;

/// Accumulates residual tests into a [`VerificationReport`].
pub struct Checker {
    name: String,
    cfg: ZeroConfig,
    names: Names,
    status: Status,
    cases: usize,
    witnesses: Vec<Witness>,
    notes: Vec<String>,
    sampled: bool,
    started: Instant,
}

impl Checker {
    pub fn new(name: impl Into<String>, cfg: &ZeroConfig, names: &Names) -> Self {
        Checker {
            name: name.into(),
            cfg: cfg.clone(),
            names: names.clone(),
            status: Status::Pass,
            cases: 0,
            witnesses: Vec::new(),
            notes: Vec::new(),
            sampled: false,
            started: Instant::now(),
        }
    }

    pub fn config(&self) -> &ZeroConfig {
        &self.cfg
    }

    pub fn names(&self) -> &Names {
        &self.names
    }

    pub fn note(&mut self, n: impl Into<String>) {
        self.notes.push(n.into());
    }

    fn record(&mut self, d: Decision, element: impl FnOnce() -> String, residual: impl FnOnce() -> String) -> bool {
        self.cases += 1;
        let status = match d {
            Decision::Zero => Status::Pass,
            Decision::ProbablyZero => {
                self.sampled = true;
                Status::ProbabilisticPass
            }
            Decision::NonZero => Status::Fail,
            Decision::ProbablyNonZero => {
                self.sampled = true;
                Status::Fail
            }
            Decision::Indeterminate => {
                self.sampled = true;
                Status::Indeterminate
            }
        };
        self.status = self.status.combine(status);
        if matches!(status, Status::Fail | Status::Indeterminate) && self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(Witness {
                element: element(),
                residual: residual(),
                decision: d,
            });
        }
        d.is_zero()
    }

    /// Records a scalar residual; returns whether it vanished.
    pub fn scalar(&mut self, element: impl FnOnce() -> String, residual: &Scalar) -> bool {
        let d = residual.decide(&self.cfg);
        let r = if d == Decision::Zero {
            String::new()
        } else {
            self.names.scalar(residual)
        };
        self.record(d, element, || r)
    }

    /// Records a tensor residual; returns whether it vanished.
    pub fn tensor(&mut self, element: impl FnOnce() -> String, residual: &ExteriorTensor) -> bool {
        let (d, _) = residual.decide(&self.cfg);
        if d == Decision::Zero {
            return self.record(d, element, String::new);
        }
        let r = self.names.tensor(residual);
        self.record(d, element, || r)
    }

    /// Records a hard failure that is not a residual, e.g. a rejected input.
    pub fn fail(&mut self, element: impl Into<String>, why: impl Into<String>) {
        let (e, w) = (element.into(), why.into());
        self.record(Decision::NonZero, || e, || w);
    }

    pub fn finish(self) -> VerificationReport {
        VerificationReport {
            check: self.name,
            status: self.status,
            cases: self.cases,
            witnesses: self.witnesses,
            notes: self.notes,
            probabilistic: self.sampled.then(|| Probabilistic {
                seed: self.cfg.seed,
                samples: self.cfg.samples,
                tolerance: self.cfg.tolerance,
            }),
            values: Vec::new(),
            elapsed_ms: Some(self.started.elapsed().as_millis() as u64),
        }
    }
}
