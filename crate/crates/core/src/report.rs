//! Batch commands and their machine-readable reports.
//!
//! Every command returns a [`RunReport`]. Exit codes: 0 clean, 1 law
//! violation, 2 input error, 3 enumeration budget exceeded. Reports contain
//! no timestamps and use sorted keys, so equal inputs give equal bytes.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::category::{
    classify, classify_metric, compose, compression_submultiplicativity, contravariance_check, MetricMap,
    MorphismClassification,
};
use crate::error::Error;
use crate::ext::format_ratio;
use crate::generate::{GeneratorConfig, InstanceGenerator};
use crate::hom::{elem_json, LawViolation};
use crate::io::{load_map, map_to_doc, metric_space_to_doc, read_json, space_from_doc, space_to_doc, InputError, LoadedMap, SpaceDoc};
use crate::lipschitz::{lipschitz_bruteforce, lipschitz_fast, BruteForceOutcome};
use crate::{Compression, Map};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Vec<InputDigest>,
    pub results: Value,
    pub violations: Vec<LawViolation>,
    pub exit_code: i32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl RunReport {
    fn new(command: &str) -> Self {
        RunReport {
            command: command.to_string(),
            inputs: Vec::new(),
            results: json!({}),
            violations: Vec::new(),
            exit_code: EXIT_OK,
        }
    }

    fn input_error(mut self, err: &InputError) -> Self {
        self.results = json!({ "error": error_json(err) });
        self.exit_code = EXIT_INPUT;
        self
    }

    fn digest(&mut self, path: &Path) {
        let shown = path.display().to_string();
        if self.inputs.iter().any(|i| i.path == shown) {
            return;
        }
        if let Ok(bytes) = fs::read(path) {
            self.inputs.push(InputDigest {
                path: shown,
                sha256: hex::encode(Sha256::digest(&bytes)),
            });
        }
    }

    fn violation(&mut self, law: &str, witness: Value) {
        self.violations.push(LawViolation {
            law: law.to_string(),
            witness,
        });
    }

    /// Settle the exit code from the collected violations.
    fn finish(mut self, budget_exceeded: bool) -> Self {
        if self.exit_code == EXIT_OK {
            if !self.violations.is_empty() {
                self.exit_code = EXIT_VIOLATION;
            } else if budget_exceeded {
                self.exit_code = EXIT_BUDGET;
            }
        }
        self
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
            Format::Text => self.render_text(),
        }
    }

    fn render_text(&self) -> String {
        let status = match self.exit_code {
            EXIT_OK => "ok",
            EXIT_VIOLATION => "law violations",
            EXIT_INPUT => "input error",
            _ => "budget exceeded",
        };
        let mut out = format!("{}: {} (exit {})\n", self.command, status, self.exit_code);
        for input in &self.inputs {
            out.push_str(&format!("input {} sha256:{}\n", input.path, input.sha256));
        }
        if let Value::Object(map) = &self.results {
            for (k, v) in map {
                out.push_str(&format!("{k} = {v}\n"));
            }
        }
        for v in &self.violations {
            out.push_str(&format!("violation {}: {}\n", v.law, v.witness));
        }
        out
    }
}

fn error_json(err: &InputError) -> Value {
    json!({
        "file": err.path(),
        "field": err.field(),
        "kind": err.kind(),
        "reason": err.reason(),
    })
}

fn compression_json(c: &Compression) -> Value {
    json!(c.to_string())
}

/// Parse and validate each file; stop at the first error per file.
pub fn cmd_validate(paths: &[PathBuf]) -> RunReport {
    let mut report = RunReport::new("validate");
    let mut files = Vec::new();
    let mut any_error = false;
    for path in paths {
        report.digest(path);
        let shown = path.display().to_string();
        let outcome = read_json::<Value>(path).and_then(|raw| {
            if raw.get("fn").is_some() {
                let loaded: LoadedMap<num_bigint::BigInt> = load_map(path)?;
                Ok(("map", json!(map_to_doc(&loaded.map))))
            } else {
                let doc: SpaceDoc = serde_json::from_value(raw).map_err(|e| InputError::Json {
                    path: shown.clone(),
                    message: e.to_string(),
                })?;
                let (space, metric) = space_from_doc::<num_bigint::BigInt>(&doc, &shown)?;
                Ok(match metric {
                    Some(m) => ("metric_space", json!(metric_space_to_doc(&m))),
                    None => ("space", json!(space_to_doc(&space))),
                })
            }
        });
        files.push(match outcome {
            Ok((kind, canonical)) => json!({ "path": shown, "kind": kind, "ok": true, "canonical": canonical }),
            Err(e) => {
                any_error = true;
                json!({ "path": shown, "ok": false, "error": error_json(&e) })
            }
        });
    }
    report.results = json!({ "files": files });
    if any_error {
        report.exit_code = EXIT_INPUT;
    }
    report.finish(false)
}

pub fn classification_json(c: &MorphismClassification<num_bigint::BigInt>) -> Value {
    let mut out = json!({
        "measurable": c.measurable,
        "inp": c.inverse_nil_preserving,
        "compression": compression_json(&c.compression),
        "degenerate": c.compression.is_degenerate(),
        "sigma_finite": { "source": c.source_sigma_finite, "target": c.target_sigma_finite },
    });
    if let Some(lip) = &c.lipschitz_point {
        out["lipschitz"] = compression_json(lip);
        out["short"] = json!(c.short);
        out["bounded_deformation"] = json!(c.bounded_deformation);
        if let Some(r) = &c.rescale {
            out["rescale"] = json!({
                "source_factor": format_ratio(&r.source_factor),
                "target_factor": format_ratio(&r.target_factor),
            });
        }
    }
    out
}

fn open_map(report: &mut RunReport, path: &Path) -> Result<LoadedMap<num_bigint::BigInt>, InputError> {
    let loaded = load_map(path);
    match &loaded {
        Ok(l) => {
            for f in &l.files {
                report.digest(f);
            }
        }
        Err(_) => report.digest(path),
    }
    loaded
}

/// Decide inp, compression and, when both spaces carry a metric, the
/// Lipschitz and bounded-deformation properties.
pub fn cmd_classify(map_path: &Path) -> RunReport {
    let mut report = RunReport::new("classify");
    let loaded = match open_map(&mut report, map_path) {
        Ok(l) => l,
        Err(e) => return report.input_error(&e),
    };
    let classification = match (&loaded.source_metric, &loaded.target_metric) {
        (Some(s), Some(t)) => {
            let mm = MetricMap::new(s, t, loaded.map.clone()).expect("metric built on the same spaces");
            classify_metric(&mm)
        }
        _ => classify(&loaded.map),
    };
    report.results = classification_json(&classification);
    report.finish(false)
}

/// Signature of the fast Lipschitz route, swappable for mutation tests.
pub type FastPath = fn(&Map) -> Compression;

/// The three constants for one map.
#[derive(Clone, Debug)]
pub struct InstanceCheck {
    pub compression: Compression,
    pub fast: Compression,
    pub brute: Result<BruteForceOutcome<num_bigint::BigInt>, Error>,
}

impl InstanceCheck {
    pub fn run(map: &Map, budget: usize, fast: FastPath) -> Self {
        InstanceCheck {
            compression: map.compression(),
            fast: fast(map),
            brute: lipschitz_bruteforce(map, budget),
        }
    }

    pub fn budget_exceeded(&self) -> bool {
        self.brute.is_err()
    }

    /// `None` when the brute-force route did not run.
    pub fn agrees(&self) -> Option<bool> {
        let brute = self.brute.as_ref().ok()?;
        Some(self.compression == self.fast && self.fast == brute.result)
    }

    /// Bounded positive brute-force maxima must be attained against `[∅]`.
    pub fn empty_extremal(&self) -> Option<bool> {
        let brute = self.brute.as_ref().ok()?;
        match &brute.result {
            Compression::Bounded(v) if !num_traits::Zero::is_zero(v) => Some(brute.attained_at_empty),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let mut out = json!({
            "compression": compression_json(&self.compression),
            "degenerate": self.compression.is_degenerate(),
            "lipschitz_fast": compression_json(&self.fast),
        });
        match &self.brute {
            Ok(b) => {
                out["lipschitz_bruteforce"] = compression_json(&b.result);
                out["agreement"] = json!(self.agrees());
                out["attained_at_empty"] = json!(b.attained_at_empty);
                out["pairs_checked"] = json!(b.pairs_checked);
                out["witness"] = match (&b.witness, &b.fin_violation) {
                    (Some((a, e)), _) => json!({ "a": elem_json(a), "b": elem_json(e) }),
                    (None, Some(v)) => json!({ "fin_violation": elem_json(v) }),
                    (None, None) => json!({}),
                };
            }
            Err(e) => {
                out["lipschitz_bruteforce"] = Value::Null;
                out["error"] = json!({ "kind": e.kind(), "reason": e.to_string() });
            }
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct TheoremArgs {
    pub map: Option<PathBuf>,
    pub budget: usize,
    pub trials: Option<u64>,
    pub seed: u64,
}

pub fn cmd_theorem_check(args: &TheoremArgs) -> RunReport {
    cmd_theorem_check_with(args, lipschitz_fast)
}

fn instance_size(map: &Map) -> (usize, usize) {
    (
        map.source().num_atoms() + map.target().num_atoms(),
        map.source().num_points() + map.target().num_points(),
    )
}

/// Theorem check with an explicit fast route.
pub fn cmd_theorem_check_with(args: &TheoremArgs, fast: FastPath) -> RunReport {
    let mut report = RunReport::new("theorem-check");
    let mut results = json!({});
    let mut budget_exceeded = false;
    if args.map.is_none() && args.trials.is_none() {
        let err = InputError::Invalid {
            path: String::new(),
            field: "map".into(),
            error: Error::ArityMismatch {
                what: "map path or --trials",
                expected: 1,
                found: 0,
            },
        };
        return report.input_error(&err);
    }

    if let Some(path) = &args.map {
        let loaded = match open_map(&mut report, path) {
            Ok(l) => l,
            Err(e) => return report.input_error(&e),
        };
        let check = InstanceCheck::run(&loaded.map, args.budget, fast);
        budget_exceeded |= check.budget_exceeded();
        if check.agrees() == Some(false) {
            report.violation(
                "theorem_agreement",
                json!({ "map": map_to_doc(&loaded.map), "check": check.to_json() }),
            );
        }
        if check.empty_extremal() == Some(false) {
            report.violation("empty_extremality", json!({ "map": map_to_doc(&loaded.map) }));
        }
        results["instance"] = check.to_json();
    }

    if let Some(trials) = args.trials {
        let checks: Vec<(Map, InstanceCheck)> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let map: Map = InstanceGenerator::new(args.seed, t, GeneratorConfig::default()).instance();
                let check = InstanceCheck::run(&map, args.budget, fast);
                (map, check)
            })
            .collect();
        let count = |f: &dyn Fn(&InstanceCheck) -> bool| checks.iter().filter(|(_, c)| f(c)).count();
        let agreements = count(&|c| c.agrees() == Some(true));
        let exceeded = count(&|c| c.budget_exceeded());
        budget_exceeded |= exceeded > 0;
        results["trials"] = json!({
            "seed": args.seed,
            "count": trials,
            "agreements": agreements,
            "disagreements": count(&|c| c.agrees() == Some(false)),
            "budget_exceeded": exceeded,
            "bounded": count(&|c| c.compression.is_bounded()),
            "unbounded": count(&|c| !c.compression.is_bounded()),
            "degenerate": count(&|c| c.compression.is_degenerate()),
            "bounded_positive": count(&|c| c.empty_extremal().is_some()),
            "attained_at_empty": count(&|c| c.empty_extremal() == Some(true)),
        });
        let smallest_failure = |bad: &dyn Fn(&InstanceCheck) -> bool| {
            checks
                .iter()
                .enumerate()
                .filter(|(_, (_, c))| bad(c))
                .min_by_key(|(i, (m, _))| (instance_size(m), *i))
                .map(|(i, (m, c))| json!({ "trial": i, "map": map_to_doc(m), "check": c.to_json() }))
        };
        if let Some(w) = smallest_failure(&|c| c.agrees() == Some(false)) {
            report.violation("theorem_agreement", w);
        }
        if let Some(w) = smallest_failure(&|c| c.empty_extremal() == Some(false)) {
            report.violation("empty_extremality", w);
        }
    }
    report.results = results;
    report.finish(budget_exceeded)
}

/// Functor laws and compression submultiplicativity for `f` then `g`.
pub fn cmd_functor_check(f_path: &Path, g_path: &Path) -> RunReport {
    let mut report = RunReport::new("functor-check");
    let f = match open_map(&mut report, f_path) {
        Ok(l) => l.map,
        Err(e) => return report.input_error(&e),
    };
    let g = match open_map(&mut report, g_path) {
        Ok(l) => l.map,
        Err(e) => return report.input_error(&e),
    };
    let pair_error = |error: Error| InputError::Invalid {
        path: format!("{} ; {}", f_path.display(), g_path.display()),
        field: "fn".into(),
        error,
    };
    let laws = match contravariance_check(&f, &g) {
        Ok(r) => r,
        Err(e) => return report.input_error(&pair_error(e)),
    };
    let composite = compose(&g, &f).expect("composability checked");
    let holds = compression_submultiplicativity(&f, &g).expect("composability checked");
    report.results = json!({
        "contravariance": { "checked": laws.checked, "passed": laws.passed() },
        "submultiplicativity": {
            "holds": holds,
            "composite": compression_json(&composite.compression()),
            "f": compression_json(&f.compression()),
            "g": compression_json(&g.compression()),
        },
    });
    report.violations.extend(laws.violations);
    if !holds {
        report.violation(
            "submultiplicativity",
            json!({ "f": map_to_doc(&f), "g": map_to_doc(&g) }),
        );
    }
    report.finish(false)
}
