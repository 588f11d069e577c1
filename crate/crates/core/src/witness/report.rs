//! Assembles signature, rank certificate, unipotent witness and translation
//! rank into one verdict.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::group::{Frame, GroupElement, Letter, ReflectionCache};
use super::parabolic::Parabolic;
use super::unipotent::{orbit, radical_unipotents, unipotent_candidates, UnipotentWitness};
use crate::error::{Error, Result};
use crate::linalg::{proportionality, to_rat_vec, EchelonBasis, IntVector, Rat, RatVector};
use crate::monodromy::{imprimitivity_flag, HyperPair, PairType};
use crate::quadform::{self, RankCertificate};

/// Unipotent witnesses examined before settling for a partial translation rank.
const MAX_WITNESS_TRIES: usize = 32;
/// Extra rounds, each two letters longer, for the orbit supplying reflections.
const REFLECTION_DEPTH_STEPS: usize = 3;

pub const CAVEAT_ZARISKI: &str =
    "Zariski density assumed per Beukers–Heckman; primitivity of the pair is not checked";
pub const CAVEAT_FINITE_INDEX: &str = "finite-index conclusion invokes a cited theorem on groups containing \
     a lattice in the unipotent radical of a rational parabolic (Tits, Raghunathan), not re-proved here";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Conclusion {
    #[serde(rename = "witnessed-arithmetic")]
    WitnessedArithmetic,
    #[serde(rename = "inconclusive")]
    Inconclusive,
    #[serde(rename = "out-of-scope(symplectic)")]
    OutOfScopeSymplectic,
}

impl Conclusion {
    pub fn as_str(&self) -> &'static str {
        match self {
            Conclusion::WitnessedArithmetic => "witnessed-arithmetic",
            Conclusion::Inconclusive => "inconclusive",
            Conclusion::OutOfScopeSymplectic => "out-of-scope(symplectic)",
        }
    }
}

/// A reflection fixing `ε` that was offered to the span-rank search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionUsed {
    pub vector: IntVector,
    pub source: &'static str,
    pub element: GroupElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessReport {
    pub f: String,
    pub g: String,
    pub n: usize,
    pub pair_type: PairType,
    pub signature: Option<(usize, usize)>,
    pub rank_certificate: Option<RankCertificate>,
    pub epsilon: Option<IntVector>,
    pub unipotent: Option<UnipotentWitness>,
    pub reflections: Vec<ReflectionUsed>,
    /// Unipotents of the radical whose translations form the certified basis.
    pub span_elements: Vec<GroupElement>,
    /// Word length bound of the orbit the reflections were drawn from.
    pub reflection_depth: Option<usize>,
    pub translation_rank: Option<usize>,
    pub conclusion: Conclusion,
    pub reasons: Vec<String>,
    pub caveats: Vec<String>,
}

/// Vectors `w ⊥ ε` with integral reflections, tried in the order `A^k v`,
/// norm-2 vectors of the `ε^⊥` basis, then further orbit points. A candidate
/// is kept when its image in `ε^⊥/ℚε` raises the rank of the kept images and
/// pairs nontrivially with one of them (otherwise its reflection fixes their
/// span, which adds nothing to the translation span);
/// up to two more with non-parallel images are kept as well. Stops once the
/// images span the quotient.
fn choose_reflections(
    frame: &Frame,
    cache: &mut ReflectionCache,
    par: &Parabolic,
    points: &[super::unipotent::OrbitPoint],
) -> Result<Vec<ReflectionUsed>> {
    let target = par.quotient_dim();
    let eps = &par.eps;
    let mut out: Vec<ReflectionUsed> = Vec::new();
    let mut images: Vec<RatVector> = Vec::new();
    let mut span = EchelonBasis::new();
    let mut extras = 0;
    let mut consider = |w: &IntVector, source: &'static str, g_word: Option<&[Letter]>| -> Result<bool> {
        if !frame.product_int(w, eps).is_zero() {
            return Ok(false);
        }
        let img = par.quotient_coords_int(w)?;
        if img.iter().all(Zero::is_zero) || images.iter().any(|x| proportionality(x, &img).is_some()) {
            return Ok(false);
        }
        let linked = out.is_empty() || out.iter().any(|r| !frame.product_int(w, &r.vector).is_zero());
        let raises = linked && !span.contains(&img);
        if !raises && extras >= 2 {
            return Ok(false);
        }
        let built = match g_word {
            Some(word) => cache.get(w, word),
            None => super::group::reflection_matrix(frame, w),
        };
        let element = match built {
            Ok(e) => e,
            Err(Error::NonIntegralReflection) | Err(Error::IsotropicReflection) => return Ok(false),
            Err(e) => return Err(e),
        };
        if !raises {
            extras += 1;
        }
        span.insert(&img);
        images.push(img);
        out.push(ReflectionUsed { vector: w.clone(), source, element });
        Ok(span.len() >= target)
    };

    let mut w = frame.v.clone();
    let mut word = Vec::new();
    let mut done = false;
    for _ in 0..frame.dim() {
        if consider(&w, "A^k v", Some(&word))? {
            done = true;
            break;
        }
        w = frame.a.mul_vec(&w);
        word.push(Letter::A);
    }
    let two = Rat::from_integer(2.into());
    if !done {
        for b in &par.perp_basis {
            if frame.product_int(b, b) == two && consider(b, "orthocomplement basis", None)? {
                done = true;
                break;
            }
        }
    }
    if !done {
        for p in points {
            if consider(&p.vector, "orbit of v", Some(&p.word))? {
                break;
            }
        }
    }
    Ok(out)
}

/// Runs the whole pipeline on a validated pair.
pub fn arithmeticity_report(pair: &HyperPair, search_bound: u32, word_bound: usize) -> Result<WitnessReport> {
    let mut caveats = vec![CAVEAT_ZARISKI.to_string(), CAVEAT_FINITE_INDEX.to_string()];
    if let Some(d) = imprimitivity_flag(&pair.f, &pair.g) {
        caveats.push(format!("f and g are both polynomials in x^{d}, so the monodromy is imprimitive"));
    }
    let mut report = WitnessReport {
        f: pair.f.render(),
        g: pair.g.render(),
        n: pair.n,
        pair_type: pair.kind,
        signature: None,
        rank_certificate: None,
        epsilon: None,
        unipotent: None,
        reflections: Vec::new(),
        span_elements: Vec::new(),
        reflection_depth: None,
        translation_rank: None,
        conclusion: Conclusion::Inconclusive,
        reasons: Vec::new(),
        caveats,
    };
    if !pair.is_orthogonal() {
        report.conclusion = Conclusion::OutOfScopeSymplectic;
        report.reasons.push("symplectic pairs are outside the orthogonal pipeline".into());
        return Ok(report);
    }

    let cert = quadform::q_rank(pair, search_bound)?;
    let (p, q) = cert.signature;
    report.signature = Some((p, q));
    report.rank_certificate = Some(cert);

    let frame = Frame::cyclic(pair)?;
    let points = orbit(&frame, word_bound);
    let candidates = unipotent_candidates(&frame, &points, None, MAX_WITNESS_TRIES)?;
    if candidates.is_empty() {
        report.reasons.push(format!("no unipotent witness from words of length ≤ {word_bound}"));
        return Ok(finish(report));
    }
    let target = pair.n - 2;
    let mut cache = ReflectionCache::new(&frame);
    let mut best: Option<(usize, UnipotentWitness, Vec<ReflectionUsed>, Vec<GroupElement>)> = None;
    let tried = candidates.len();
    let mut depth = word_bound;
    'outer: for extra in 0..=REFLECTION_DEPTH_STEPS {
        depth = word_bound + 2 * extra;
        let deeper;
        let pts = if extra == 0 {
            &points
        } else {
            deeper = orbit(&frame, depth);
            &deeper
        };
        let limit = if extra == 0 { candidates.len() } else { 4 };
        for w in candidates.iter().take(limit) {
            let par = Parabolic::new(&frame.gram, &w.eps)?;
            let reflections = choose_reflections(&frame, &mut cache, &par, pts)?;
            let elems: Vec<GroupElement> = reflections.iter().map(|r| r.element.clone()).collect();
            let (mut rank, mut used) = par.span_rank(&w.u, &elems)?;
            if rank < target {
                let mut seeds = vec![w.u.clone()];
                seeds.extend(radical_unipotents(&frame, &mut cache, &par, pts, target)?);
                (rank, used) = par.span_rank_from(&seeds, &elems)?;
            }
            if best.as_ref().is_none_or(|b| rank > b.0) {
                best = Some((rank, w.clone(), reflections, used));
            }
            if rank == target {
                break 'outer;
            }
        }
    }
    report.reflection_depth = Some(depth);
    let (rank, w, reflections, used) = best.expect("nonempty");
    if rank < target {
        report.reasons.push(format!("best of {tried} unipotent witness(es) tried"));
    }
    report.epsilon = Some(w.eps.clone());
    report.unipotent = Some(w);
    report.reflections = reflections;
    report.span_elements = used;
    report.translation_rank = Some(rank);
    Ok(finish(report))
}

fn finish(mut r: WitnessReport) -> WitnessReport {
    let target = r.n.saturating_sub(2);
    let real_rank = r.signature.map(|(p, q)| p.min(q)).unwrap_or(0);
    if real_rank < 2 {
        r.reasons.push(format!("real rank {real_rank} < 2"));
    }
    match r.translation_rank {
        Some(t) if t != target => {
            r.reasons.push(format!("translation rank {t} < {target}"));
        }
        _ => {}
    }
    let witnessed = real_rank >= 2 && r.unipotent.is_some() && r.translation_rank == Some(target) && target > 0;
    r.conclusion = if witnessed { Conclusion::WitnessedArithmetic } else { Conclusion::Inconclusive };
    r
}

impl WitnessReport {
    pub fn translation(&self) -> Option<Vec<Rat>> {
        self.unipotent.as_ref().map(|u| u.translation.clone())
    }

    pub fn epsilon_rat(&self) -> Option<RatVector> {
        self.epsilon.as_ref().map(|e| to_rat_vec(e))
    }
}
