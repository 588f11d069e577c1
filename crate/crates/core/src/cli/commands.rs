use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::corpus::{run_suite, SuiteRow};
use super::report::*;
use crate::error::{Error, Result};
use crate::monodromy::{build_any, build_pair, imprimitivity_flag, scalar_shift, HyperPair};
use crate::padtower::{self, PaddedPair};
use crate::polycore::{parameters_of, parse_poly, parse_poly_in, IntPoly};
use crate::quadform;
use crate::witness::arithmeticity_report;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Options {
    pub search_bound: u32,
    pub word_bound: usize,
    /// Swap `f, g` or apply `x ↦ −x` when the constant terms come out the
    /// wrong way round.
    pub auto_shift: bool,
}

impl Default for Options {
    fn default() -> Self {
        Options { search_bound: 3, word_bound: 8, auto_shift: false }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Inconsistency(_) => EXIT_INCONSISTENT,
        _ => EXIT_INVALID,
    }
}

/// Variant name of an error, for machine-readable output.
pub fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorDoc {
    pub kind: String,
    pub message: String,
    pub exit_code: i32,
}

impl ErrorDoc {
    pub fn new(e: &Error) -> Self {
        ErrorDoc { kind: error_kind(e), message: e.to_string(), exit_code: exit_code(e) }
    }
}

struct Clock {
    start: Instant,
    timings: BTreeMap<String, u64>,
}

impl Clock {
    fn new() -> Self {
        Clock { start: Instant::now(), timings: BTreeMap::new() }
    }

    fn lap(&mut self, phase: &str) {
        let now = Instant::now();
        self.timings.insert(phase.to_string(), now.duration_since(self.start).as_millis() as u64);
        self.start = now;
    }
}

fn parse_pair(f: &str, g: &str) -> Result<(IntPoly, IntPoly)> {
    Ok((parse_poly(f)?, parse_poly(g)?))
}

/// Orthogonal normalization, optionally repairing the constant terms.
fn normalize(f: &IntPoly, g: &IntPoly, auto_shift: bool) -> Result<(HyperPair, Option<String>)> {
    match build_pair(f, g) {
        Err(Error::ConstantTerms { .. }) if auto_shift => {
            if f.degree() % 2 == 1 {
                let (fs, gs) = (scalar_shift(f), scalar_shift(g));
                if let Ok(p) = build_pair(&fs, &gs) {
                    return Ok((p, Some("scalar shift x -> -x applied to f and g".into())));
                }
            }
            let p = build_pair(g, f)?;
            Ok((p, Some("f and g swapped".into())))
        }
        other => other.map(|p| (p, None)),
    }
}

fn derived(pair: &HyperPair, normalized: Option<String>) -> Result<DerivedDoc> {
    let id = crate::linalg::IntMatrix::identity(pair.n);
    Ok(DerivedDoc {
        n: pair.n,
        kind: pair.kind.kind,
        ratio: pair.kind.ratio,
        f_expanded: pair.f.to_string(),
        g_expanded: pair.g.to_string(),
        det_a: IntStr(pair.a.determinant()?),
        det_b: IntStr(pair.b.determinant()?),
        det_c: IntStr(pair.c.determinant()?),
        rank_c_minus_1: (&pair.c - &id).to_rational().rank(),
        c_squared_is_identity: (&pair.c * &pair.c).is_identity(),
        v: ints(&pair.v),
        imprimitive_power: imprimitivity_flag(&pair.f, &pair.g),
        normalized,
    })
}

/// Full pipeline for one pair given as text.
pub fn analyze(f: &str, g: &str, opts: &Options) -> Result<ReportDocument> {
    let mut clock = Clock::new();
    let (fp, gp) = parse_pair(f, g)?;
    clock.lap("parse");
    let any = build_any(&fp, &gp)?;
    let (pair, normalized) = if any.is_orthogonal() { normalize(&fp, &gp, opts.auto_shift)? } else { (any, None) };
    clock.lap("pair");
    let doc = analyze_pair(&pair, normalized, f, g, opts, &mut clock)?;
    Ok(doc)
}

fn analyze_pair(
    pair: &HyperPair,
    normalized: Option<String>,
    f: &str,
    g: &str,
    opts: &Options,
    clock: &mut Clock,
) -> Result<ReportDocument> {
    let input = InputDoc { f: f.to_string(), g: g.to_string() };
    let derived = derived(pair, normalized)?;
    if !pair.is_orthogonal() {
        let report = arithmeticity_report(pair, opts.search_bound, opts.word_bound)?;
        clock.lap("witness");
        return Ok(ReportDocument {
            schema_version: SCHEMA_VERSION.into(),
            input,
            derived,
            gram: None,
            signature: None,
            q_rank: None,
            witness: WitnessDoc::from_report(&report),
            padding: None,
            timings: std::mem::take(&mut clock.timings),
        });
    }

    let (cyc, std) = quadform::cross_checked(pair)?;
    let gram = GramDoc {
        cyclic: rat_rows(&cyc.gram),
        standard: rat_rows(&std.gram),
        cross_checked: true,
        determinant: RatStr(cyc.determinant()),
    };
    clock.lap("gram");

    let (diag, _) = quadform::diagonalize(&cyc);
    let (p, q) = quadform::signature_of_diagonal(&diag)?;
    let interlace = match (parameters_of(&pair.f), parameters_of(&pair.g)) {
        (Ok(a), Ok(b)) => Some(quadform::signature_interlace(&a, &b)?),
        _ => None,
    };
    if let Some(d) = interlace {
        if d != p.abs_diff(q) {
            return Err(Error::Inconsistency(format!(
                "interlacing gives |p-q| = {d}, diagonalization gives {}",
                p.abs_diff(q)
            )));
        }
    }
    let signature = SignatureDoc { p, q, interlace_abs_diff: interlace, diagonal: rats(&diag) };
    clock.lap("signature");

    let report = arithmeticity_report(pair, opts.search_bound, opts.word_bound)?;
    clock.lap("witness");
    let cert = report.rank_certificate.as_ref().ok_or_else(|| Error::Inconsistency("missing rank".into()))?;
    if cert.signature != (p, q) {
        return Err(Error::Inconsistency("rank certificate signature differs".into()));
    }
    let q_rank = QRankDoc {
        lo: cert.lo,
        hi: cert.hi,
        witnesses: cert.isotropic_witnesses.iter().map(|w| ints(w)).collect(),
        obstructions: cert.obstructions.clone(),
        residual_diagonal: rats(&cert.residual_diagonal),
        search: cert.search.clone(),
        notes: cert.notes.clone(),
    };
    Ok(ReportDocument {
        schema_version: SCHEMA_VERSION.into(),
        input,
        derived,
        gram: Some(gram),
        signature: Some(signature),
        q_rank: Some(q_rank),
        witness: WitnessDoc::from_report(&report),
        padding: None,
        timings: std::mem::take(&mut clock.timings),
    })
}

/// `P`, `Q` are read in `y`; plain `x` is accepted too.
fn parse_padding_poly(s: &str) -> Result<IntPoly> {
    parse_poly_in(s, 'y').or_else(|e| parse_poly(s).map_err(|_| e))
}

pub fn pad(f0: &str, g0: &str, p: &str, q: &str, d: usize, opts: &Options) -> Result<ReportDocument> {
    let mut clock = Clock::new();
    let (f0p, g0p) = parse_pair(f0, g0)?;
    let (pp, qp) = (parse_padding_poly(p)?, parse_padding_poly(q)?);
    clock.lap("parse");
    let padded: PaddedPair = padtower::pad_pair(&f0p, &g0p, &pp, &qp, d)?;
    let remainder_ok = padtower::remainder_coeff_check(&padded);
    let isometry_ok = padtower::isometry_check(&padded);
    let invariant_ok = padtower::isometry_check_invariant(&padded)?;
    if !(remainder_ok && isometry_ok && invariant_ok) {
        return Err(Error::Inconsistency(format!(
            "padding checks failed: remainder {remainder_ok}, isometry {isometry_ok}, invariant {invariant_ok}"
        )));
    }
    let seeded = padtower::padded_q_rank(&padded, opts.search_bound)?;
    clock.lap("padding");
    let (f, g) = (padded.f.render(), padded.g.render());
    let mut doc = analyze_pair(&padded.pair, None, &f, &g, opts, &mut clock)?;
    doc.padding = Some(PaddingDoc {
        f0: f0.to_string(),
        g0: g0.to_string(),
        p: p.to_string(),
        q: q.to_string(),
        d,
        m: padded.m(),
        remainder_coeff_check: remainder_ok,
        isometry_check: isometry_ok,
        isometry_check_invariant: invariant_ok,
        seeded_q_rank: [seeded.lo, seeded.hi],
        embedding: int_rows(&padded.embedding),
    });
    Ok(doc)
}

/// One batch input line: JSON `{"f": .., "g": ..}` or `f ; g`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BatchInput {
    pub f: String,
    pub g: String,
}

pub fn parse_batch_line(line: &str) -> Result<BatchInput> {
    let t = line.trim();
    if t.starts_with('{') {
        return serde_json::from_str(t).map_err(|e| Error::Syntax { pos: e.column().saturating_sub(1), msg: e.to_string() });
    }
    let (f, g) = t
        .split_once(';')
        .ok_or_else(|| Error::Syntax { pos: 0, msg: "expected `f ; g` or a JSON object".into() })?;
    Ok(BatchInput { f: f.trim().to_string(), g: g.trim().to_string() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BatchOutput {
    Report(Box<ReportDocument>),
    Failure { line: usize, error: ErrorDoc },
}

impl BatchOutput {
    pub fn exit_code(&self) -> i32 {
        match self {
            BatchOutput::Report(_) => EXIT_OK,
            BatchOutput::Failure { error, .. } => error.exit_code,
        }
    }
}

/// Analyzes every non-blank, non-`#` line concurrently; output order follows
/// input order.
pub fn batch(text: &str, opts: &Options) -> Vec<BatchOutput> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .map(|(i, l)| (i + 1, l))
        .collect();
    lines
        .par_iter()
        .map(|&(line, l)| match parse_batch_line(l).and_then(|b| analyze(&b.f, &b.g, opts)) {
            Ok(doc) => BatchOutput::Report(Box::new(doc)),
            Err(e) => BatchOutput::Failure { line, error: ErrorDoc::new(&e) },
        })
        .collect()
}

pub fn suite(opts: &Options) -> Result<(Vec<SuiteRow>, i32)> {
    let rows = run_suite(opts.search_bound, opts.word_bound)?;
    let code = if rows.iter().all(|r| r.outcome.is_ok()) { EXIT_OK } else { EXIT_INCONSISTENT };
    Ok((rows, code))
}

/// Human-readable summary of a report.
pub fn summary(doc: &ReportDocument) -> String {
    let mut out = Vec::new();
    let d = &doc.derived;
    out.push(format!("f = {}", d.f_expanded));
    out.push(format!("g = {}", d.g_expanded));
    let kind = match d.kind {
        crate::monodromy::PairKind::Orthogonal => "orthogonal",
        crate::monodromy::PairKind::Symplectic => "symplectic",
    };
    out.push(format!("degree {}, {kind}, det C = {}", d.n, d.det_c));
    if let Some(note) = &d.normalized {
        out.push(format!("normalized: {note}"));
    }
    if let Some(gm) = &doc.gram {
        let row: Vec<String> = gm.cyclic[0].iter().map(|x| short(&x.0)).collect();
        out.push(format!("v.A^k v = ({})", row.join(", ")));
    }
    if let Some(s) = &doc.signature {
        let inter = s.interlace_abs_diff.map(|x| x.to_string()).unwrap_or_else(|| "n/a".into());
        out.push(format!("signature ({}, {}), interlacing |p-q| = {inter}", s.p, s.q));
    }
    if let Some(r) = &doc.q_rank {
        out.push(format!("Q-rank in [{}, {}] ({} isotropic witness(es))", r.lo, r.hi, r.witnesses.len()));
        for o in &r.obstructions {
            out.push(format!("  obstruction: {}", o.statement));
        }
    }
    if let Some(p) = &doc.padding {
        out.push(format!(
            "padding m = {}, d = {}: remainder check {}, isometry {}, seeded Q-rank [{}, {}]",
            p.m, p.d, p.remainder_coeff_check, p.isometry_check, p.seeded_q_rank[0], p.seeded_q_rank[1]
        ));
    }
    let w = &doc.witness;
    if let Some(e) = &w.epsilon {
        out.push(format!("epsilon = {}", fmt_strs(e)));
    }
    if let Some(u) = &w.unipotent {
        out.push(format!("unipotent u = {}", crate::witness::word_string(&u.word)));
    }
    if let Some(t) = w.translation_rank {
        out.push(format!("translation rank {t} of {}", d.n.saturating_sub(2)));
    }
    for r in &w.reasons {
        out.push(format!("  note: {r}"));
    }
    out.push(format!("conclusion: {}", w.conclusion.as_str()));
    out.join("\n")
}

fn short(x: &crate::linalg::Rat) -> String {
    crate::linalg::fmt_rat(x)
}

fn fmt_strs(v: &[IntStr]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

pub fn suite_table(rows: &[SuiteRow]) -> String {
    let mut out = Vec::new();
    for r in rows {
        let tag = match r.outcome {
            super::corpus::Outcome::Match => "match",
            super::corpus::Outcome::Mismatch => "MISMATCH",
            super::corpus::Outcome::ExpectedMismatch => "expected-mismatch",
            super::corpus::Outcome::UnexpectedMatch => "UNEXPECTED-MATCH",
        };
        let mut line = format!("{:<11} {:<18} {}: printed {}, computed {}", r.example, tag, r.datum, r.printed, r.computed);
        if let Some(n) = &r.note {
            line.push_str(&format!(" [{n}]"));
        }
        out.push(line);
    }
    let ok = rows.iter().filter(|r| r.outcome.is_ok()).count();
    let typos = rows.iter().filter(|r| r.outcome == super::corpus::Outcome::ExpectedMismatch).count();
    out.push(format!("{ok}/{} data resolved ({typos} catalogued misprints reproduced)", rows.len()));
    out.join("\n")
}
