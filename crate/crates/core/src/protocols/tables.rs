//! Signature tables (probe shifts per QND group) and detection tables (states
//! grouped by detector parities), with text and CSV renderers.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::pipeline::{probe_ids, StageOrder};
use super::verify::explore_branches;
use crate::error::{Error, Result};
use crate::optics::DetectorOutcome;
use crate::statecore::{check_photon_count, BitString, Dof, GhzLabel, HyperLabel, Sign};

/// One QND group: the four states sharing `pol_bits`/`spa_bits`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignatureRow {
    /// Canonical bits (first bit 0).
    pub pol_bits: BitString,
    pub spa_bits: BitString,
    /// Per probe, `alpha…` then `beta…`: true for a `±θ` shift.
    pub shifted: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignatureTable {
    pub n: usize,
    pub probes: Vec<String>,
    pub rows: Vec<SignatureRow>,
}

/// `4^(n−1)` rows ordered by polarization bits, then spatial bits. Shifts are
/// obtained by running the ideal QND stages, not from the decoding rule.
pub fn emit_signature_table(n: usize) -> Result<SignatureTable> {
    check_photon_count(n, 2)?;
    let half = 1u32 << (n - 1);
    let mut rows = Vec::with_capacity((half * half) as usize);
    for pb in 0..half {
        for sb in 0..half {
            let pol_bits = BitString::new(n, pb)?;
            let spa_bits = BitString::new(n, sb)?;
            let label = HyperLabel::new(
                GhzLabel::new(Sign::Plus, pol_bits),
                GhzLabel::new(Sign::Plus, spa_bits),
            )?;
            let leaves = explore_branches(n, &label.state(), StageOrder::default())?;
            let mags = &leaves
                .first()
                .ok_or_else(|| Error::InvalidState("no measurement branches".into()))?
                .magnitudes;
            if leaves.iter().any(|l| &l.magnitudes != mags) {
                return Err(Error::InvalidState(format!(
                    "probe magnitudes of {label} are not deterministic"
                )));
            }
            rows.push(SignatureRow {
                pol_bits,
                spa_bits,
                shifted: mags.iter().map(|&m| m != 0).collect(),
            });
        }
    }
    Ok(SignatureTable {
        n,
        probes: Dof::ALL.iter().flat_map(|&d| probe_ids(n, d)).collect(),
        rows,
    })
}

/// States whose detector patterns share one sign pair.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectionGroup {
    pub signs: (Sign, Sign),
    pub members: Vec<HyperLabel>,
    /// Union of the members' detector supports, sorted.
    pub outcomes: Vec<DetectorOutcome>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionTable {
    pub n: usize,
    pub groups: Vec<DetectionGroup>,
}

/// Groups all `4^n` states by the sign pair decoded from their detector
/// patterns, in the order `(+,+) (+,−) (−,+) (−,−)`.
pub fn emit_detection_table(n: usize) -> Result<DetectionTable> {
    check_photon_count(n, 2)?;
    let mut groups: Vec<DetectionGroup> = Sign::ALL
        .iter()
        .flat_map(|&p| {
            Sign::ALL.iter().map(move |&s| DetectionGroup {
                signs: (p, s),
                members: Vec::new(),
                outcomes: Vec::new(),
            })
        })
        .collect();
    let mut supports: Vec<BTreeSet<Vec<_>>> = vec![BTreeSet::new(); 4];
    let mut labels = HyperLabel::enumerate(n)?;
    labels.sort_by_key(|l| (l.pol().bits, l.spa().bits));
    for label in labels {
        let leaves = explore_branches(n, &label.state(), StageOrder::default())?;
        let signs: BTreeSet<_> = leaves
            .iter()
            .map(|l| (l.label.pol().sign, l.label.spa().sign))
            .collect();
        let signs = match signs.into_iter().collect::<Vec<_>>()[..] {
            [one] => one,
            _ => {
                return Err(Error::InvalidState(format!(
                    "detector patterns of {label} decode to several sign pairs"
                )))
            }
        };
        let gi = groups
            .iter()
            .position(|g| g.signs == signs)
            .expect("all pairs present");
        groups[gi].members.push(label);
        for leaf in leaves {
            if supports[gi].insert(leaf.outcome.records.clone()) {
                groups[gi].outcomes.push(DetectorOutcome {
                    probability: 0.0,
                    ..leaf.outcome
                });
            }
        }
    }
    for g in &mut groups {
        g.outcomes.sort_by(DetectorOutcome::cmp_records);
    }
    Ok(DetectionTable { n, groups })
}

fn sign_str(s: Sign) -> &'static str {
    match s {
        Sign::Plus => "+",
        Sign::Minus => "−",
    }
}

/// `|φ+⟩P` for two photons, `|Φ+100⟩P` otherwise. `sign = None` renders `±`.
fn ket_name(label: GhzLabel, sign: Option<Sign>, dof: Dof) -> String {
    let sign = sign.map_or("±", sign_str);
    match label.bell_kind() {
        Some(_) => {
            let greek = if label.canonical().bits.value() == 0 {
                "φ"
            } else {
                "ψ"
            };
            format!("|{greek}{sign}⟩{dof}")
        }
        None => format!("|Φ{sign}{}⟩{dof}", label.display_bits()),
    }
}

fn display_state(label: &HyperLabel) -> String {
    format!(
        "{}{}",
        ket_name(label.pol(), Some(label.pol().sign), Dof::Polarization),
        ket_name(label.spa(), Some(label.spa().sign), Dof::Spatial)
    )
}

/// `P:+000;S:-100` with display representatives.
fn plain_state(pol: GhzLabel, spa: GhzLabel) -> String {
    format!(
        "P:{}{};S:{}{}",
        pol.sign,
        pol.display_bits(),
        spa.sign,
        spa.display_bits()
    )
}

impl SignatureRow {
    /// Row description in the `|φ+⟩P|φ±⟩S, |φ−⟩P|φ±⟩S` style.
    pub fn description(&self) -> String {
        let pol = GhzLabel::new(Sign::Plus, self.pol_bits);
        let spa = GhzLabel::new(Sign::Plus, self.spa_bits);
        Sign::ALL
            .iter()
            .map(|&ps| {
                format!(
                    "{}{}",
                    ket_name(pol, Some(ps), Dof::Polarization),
                    ket_name(spa, None, Dof::Spatial)
                )
            })
            .collect::<Vec<_>>()
            .join(", ")
    }

    /// Display representatives, e.g. `100` for canonical `011`.
    pub fn display_bits(&self) -> (BitString, BitString) {
        (
            GhzLabel::new(Sign::Plus, self.pol_bits).display_bits(),
            GhzLabel::new(Sign::Plus, self.spa_bits).display_bits(),
        )
    }
}

impl SignatureTable {
    fn header_names(&self) -> Vec<String> {
        if self.n == 2 {
            vec!["alpha".into(), "beta".into()]
        } else {
            self.probes.clone()
        }
    }

    /// Aligned text with `0` / `±θ` cells.
    pub fn to_text(&self) -> String {
        let descs: Vec<String> = self.rows.iter().map(|r| r.description()).collect();
        let width = descs
            .iter()
            .map(|d| d.chars().count())
            .max()
            .unwrap_or(0)
            .max("Initial states".len());
        let mut out = String::new();
        let _ = write!(out, "{:<width$}", "Initial states");
        for h in self.header_names() {
            let _ = write!(out, "  {h:>7}");
        }
        out.push('\n');
        for (row, desc) in self.rows.iter().zip(&descs) {
            let pad = width - desc.chars().count();
            let _ = write!(out, "{desc}{}", " ".repeat(pad));
            for &s in &row.shifted {
                let _ = write!(out, "  {:>7}", if s { "±θ" } else { "0" });
            }
            out.push('\n');
        }
        out
    }

    /// `state,alpha1,…,beta{n-1}` with `0` / `t` cells.
    pub fn to_csv(&self) -> String {
        let mut out = format!("state,{}\n", self.probes.join(","));
        for row in &self.rows {
            let (p, s) = row.display_bits();
            let cells: Vec<&str> = row
                .shifted
                .iter()
                .map(|&b| if b { "t" } else { "0" })
                .collect();
            let _ = writeln!(out, "P:{p};S:{s},{}", cells.join(","));
        }
        out
    }
}

impl DetectionGroup {
    pub fn parity_rule(&self) -> String {
        let word = |s: Sign| if s == Sign::Plus { "even" } else { "odd" };
        format!("{} #V, {} #x2", word(self.signs.0), word(self.signs.1))
    }
}

impl DetectionTable {
    /// Two photons: member states and their detector patterns. More photons:
    /// member states and the parity rule.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (i, g) in self.groups.iter().enumerate() {
            let members: Vec<String> = g.members.iter().map(display_state).collect();
            let _ = writeln!(
                out,
                "Group {} ({}, {})",
                i + 1,
                sign_str(g.signs.0),
                sign_str(g.signs.1)
            );
            let _ = writeln!(out, "  states: {}", members.join(", "));
            if self.n == 2 {
                let pats: Vec<String> = g
                    .outcomes
                    .iter()
                    .map(|o| o.tokens().replace(' ', ""))
                    .collect();
                let _ = writeln!(out, "  detections: {}", pats.join(", "));
            } else {
                let _ = writeln!(
                    out,
                    "  detections: {} ({} patterns)",
                    g.parity_rule(),
                    g.outcomes.len()
                );
            }
        }
        out
    }

    /// `group,state,v_parity,x2_parity`, one row per member.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("group,state,v_parity,x2_parity\n");
        let word = |s: Sign| if s == Sign::Plus { "even" } else { "odd" };
        for (i, g) in self.groups.iter().enumerate() {
            for m in &g.members {
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    i + 1,
                    plain_state(m.pol(), m.spa()),
                    word(g.signs.0),
                    word(g.signs.1)
                );
            }
        }
        out
    }
}
