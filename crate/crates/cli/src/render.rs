//! Text, JSON and CSV renderers. Every renderer returns the full stdout
//! payload so identical inputs give identical bytes.

use std::fmt::Write as _;

use hyperqnd_core::protocols::{
    AnalyzerConfig, DetectionTable, MonteCarloReport, SignatureTable, Transcript,
    VerificationReport,
};
use hyperqnd_core::statecore::{HyperLabel, Sign};
use serde::Serialize;

use crate::Format;

pub fn feasibility_line(cfg: &AnalyzerConfig) -> String {
    format!(
        "feasibility: alpha*theta^2 = {} (alpha = {}, theta = {})",
        cfg.feasibility(),
        cfg.alpha,
        cfg.theta
    )
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn label_with_names(label: &HyperLabel) -> String {
    match label.bell_names() {
        Some(names) => format!("{label} ({names})"),
        None => label.to_string(),
    }
}

#[derive(Serialize)]
struct AnalysisJson<'a> {
    input: &'a HyperLabel,
    label: &'a HyperLabel,
    correct: bool,
    transcript: &'a Transcript,
}

pub fn analysis(
    input: &HyperLabel,
    decoded: &HyperLabel,
    t: &Transcript,
    format: Format,
) -> String {
    let readouts: Vec<String> = t
        .probe_readouts
        .iter()
        .map(|r| format!("{}={}", r.probe, r.magnitude))
        .collect();
    match format {
        Format::Json => json(&AnalysisJson {
            input,
            label: decoded,
            correct: input == decoded,
            transcript: t,
        }),
        Format::Csv => format!(
            "input,label,probes,detectors\n{input},{decoded},{},{}\n",
            readouts.join(" "),
            t.detector_outcome.tokens()
        ),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "input:     {}", label_with_names(input));
            let _ = writeln!(out, "label:     {}", label_with_names(decoded));
            let _ = writeln!(out, "probes:");
            for r in &t.probe_readouts {
                let _ = writeln!(
                    out,
                    "  {:<8} |multiple| = {}  p = {:.6}",
                    r.probe, r.magnitude, r.p
                );
            }
            let _ = writeln!(out, "detectors: {}", t.detector_outcome.tokens());
            let _ = writeln!(
                out,
                "config:    model = {}, seed = {}",
                t.config.model.name(),
                t.config.seed
            );
            out
        }
    }
}

pub fn verification(r: &VerificationReport, format: Format) -> String {
    match format {
        Format::Json => json(r),
        Format::Csv => format!(
            "n,total,correct,groups,model\n{},{},{},{},{}\n",
            r.n,
            r.total,
            r.correct,
            r.groups,
            r.model.name()
        ),
        Format::Text => {
            let mut out = format!(
                "verify n={}: {}/{} correct, {} QND groups, model {}\n",
                r.n,
                r.correct,
                r.total,
                r.groups,
                r.model.name()
            );
            if let Some(noise) = &r.noise {
                let _ = writeln!(
                    out,
                    "sampled misclassification: {}/{} = {:.6} (95% CI {:.6}..{:.6})",
                    noise.errors, noise.trials, noise.rate, noise.ci_low, noise.ci_high
                );
            }
            for v in r.states.iter().filter(|v| !v.correct) {
                let _ = writeln!(out, "  misidentified: {}", v.label);
            }
            out
        }
    }
}

fn sign_symbol(s: Sign) -> String {
    s.symbol().to_string()
}

#[derive(Serialize)]
struct SignatureRowJson {
    state: String,
    description: String,
    shifted: Vec<bool>,
}

#[derive(Serialize)]
struct SignatureJson<'a> {
    probes: &'a [String],
    rows: Vec<SignatureRowJson>,
}

#[derive(Serialize)]
struct GroupJson {
    signs: [String; 2],
    rule: String,
    states: Vec<HyperLabel>,
    detections: Vec<String>,
}

#[derive(Serialize)]
struct TablesJson<'a> {
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    signature: Option<SignatureJson<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detection: Option<Vec<GroupJson>>,
}

pub fn tables(
    n: usize,
    signature: Option<&SignatureTable>,
    detection: Option<&DetectionTable>,
    format: Format,
) -> String {
    match format {
        Format::Json => json(&TablesJson {
            n,
            signature: signature.map(|t| SignatureJson {
                probes: &t.probes,
                rows: t
                    .rows
                    .iter()
                    .map(|r| {
                        let (p, s) = r.display_bits();
                        SignatureRowJson {
                            state: format!("P:{p};S:{s}"),
                            description: r.description(),
                            shifted: r.shifted.clone(),
                        }
                    })
                    .collect(),
            }),
            detection: detection.map(|t| {
                t.groups
                    .iter()
                    .map(|g| GroupJson {
                        signs: [sign_symbol(g.signs.0), sign_symbol(g.signs.1)],
                        rule: g.parity_rule(),
                        states: g.members.clone(),
                        detections: g.outcomes.iter().map(|o| o.tokens()).collect(),
                    })
                    .collect()
            }),
        }),
        Format::Csv => {
            let parts: Vec<String> = signature
                .map(SignatureTable::to_csv)
                .into_iter()
                .chain(detection.map(DetectionTable::to_csv))
                .collect();
            parts.join("\n")
        }
        Format::Text => {
            let mut parts = Vec::new();
            if let Some(t) = signature {
                parts.push(format!("QND signatures (n = {n})\n{}", t.to_text()));
            }
            if let Some(t) = detection {
                parts.push(format!("Detection groups (n = {n})\n{}", t.to_text()));
            }
            parts.join("\n")
        }
    }
}

pub fn monte_carlo(r: &MonteCarloReport, format: Format) -> String {
    let reference = format!(
        "reference: per-probe error {:.6e}, predicted misclassification {:.6e} over {} probes",
        r.per_probe_error,
        r.predicted_rate,
        2 * (r.n - 1)
    );
    match format {
        Format::Json => json(r),
        Format::Csv => {
            eprintln!("{reference}");
            let mut out = String::from("state,trials,errors,rate,ci_low,ci_high\n");
            let rows = r
                .per_state
                .iter()
                .map(|s| (s.state.to_string(), &s.estimate))
                .chain(std::iter::once(("aggregate".to_string(), &r.aggregate)));
            for (state, e) in rows {
                let _ = writeln!(
                    out,
                    "{state},{},{},{},{},{}",
                    e.trials, e.errors, e.rate, e.ci_low, e.ci_high
                );
            }
            out
        }
        Format::Text => {
            let mut out = format!(
                "monte carlo: n = {}, model = {}, theta = {}, alpha = {}, seed = {}\n{reference}\n",
                r.n,
                r.model.name(),
                r.theta,
                r.alpha,
                r.seed
            );
            let width = r
                .per_state
                .first()
                .map_or(9, |s| s.state.to_string().chars().count().max(9));
            let _ = writeln!(
                out,
                "{:<width$}  {:>7}  {:>7}  {:>9}  {:>9}  {:>9}",
                "state", "trials", "errors", "rate", "ci_low", "ci_high"
            );
            let rows = r
                .per_state
                .iter()
                .map(|s| (s.state.to_string(), &s.estimate))
                .chain(std::iter::once(("aggregate".to_string(), &r.aggregate)));
            for (state, e) in rows {
                let _ = writeln!(
                    out,
                    "{state:<width$}  {:>7}  {:>7}  {:>9.6}  {:>9.6}  {:>9.6}",
                    e.trials, e.errors, e.rate, e.ci_low, e.ci_high
                );
            }
            out
        }
    }
}
