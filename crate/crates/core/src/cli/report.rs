//! Versioned JSON report. Every rational is written as `"n/d"` and every
//! integer coordinate as a decimal string, so nothing passes through floats.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::linalg::{IntMatrix, Rat, RatMatrix};
use crate::monodromy::PairKind;
use crate::quadform::Obstruction;
use crate::witness::{Conclusion, Letter, WitnessReport};

pub const SCHEMA_VERSION: &str = "orthomono/1";

/// Exact rational, serialized as `"numerator/denominator"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatStr(pub Rat);

impl fmt::Display for RatStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for RatStr {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let (n, d) = s.split_once('/').ok_or_else(|| format!("expected n/d, got {s:?}"))?;
        let n: BigInt = n.parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let d: BigInt = d.parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if d == BigInt::from(0) {
            return Err(format!("zero denominator in {s:?}"));
        }
        Ok(RatStr(Rat::new(n, d)))
    }
}

/// Arbitrary-size integer as a decimal string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntStr(pub BigInt);

impl fmt::Display for IntStr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for IntStr {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        s.parse().map(IntStr).map_err(|_| format!("bad integer {s:?}"))
    }
}

macro_rules! string_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                s.serialize_str(&self.to_string())
            }
        }
        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}
string_serde!(RatStr);
string_serde!(IntStr);

pub fn rats(v: &[Rat]) -> Vec<RatStr> {
    v.iter().cloned().map(RatStr).collect()
}

pub fn ints(v: &[BigInt]) -> Vec<IntStr> {
    v.iter().cloned().map(IntStr).collect()
}

pub fn rat_rows(m: &RatMatrix) -> Vec<Vec<RatStr>> {
    (0..m.nrows()).map(|i| rats(m.row(i))).collect()
}

pub fn int_rows(m: &IntMatrix) -> Vec<Vec<IntStr>> {
    (0..m.nrows()).map(|i| ints(m.row(i))).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDoc {
    pub f: String,
    pub g: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedDoc {
    pub n: usize,
    #[serde(rename = "type")]
    pub kind: PairKind,
    /// `f(0)/g(0)`.
    pub ratio: i8,
    pub f_expanded: String,
    pub g_expanded: String,
    pub det_a: IntStr,
    pub det_b: IntStr,
    pub det_c: IntStr,
    pub rank_c_minus_1: usize,
    pub c_squared_is_identity: bool,
    /// `v = A⁻¹(g − f)` in the basis `1, x, …`.
    pub v: Vec<IntStr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    #[serde(default)]
    pub imprimitive_power: Option<usize>,
    /// Transformation applied to bring the constant terms to `f(0) = −1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalized: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramDoc {
    /// Basis `v, Av, …, A^{n−1}v`.
    pub cyclic: Vec<Vec<RatStr>>,
    /// Basis `1, x, …, x^{n−1}`.
    pub standard: Vec<Vec<RatStr>>,
    /// Both bases give the same form under the change of basis.
    pub cross_checked: bool,
    pub determinant: RatStr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureDoc {
    pub p: usize,
    pub q: usize,
    /// `|p − q|` from interlacing of root parameters (absent when a
    /// polynomial is not a product of cyclotomics).
    pub interlace_abs_diff: Option<usize>,
    pub diagonal: Vec<RatStr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QRankDoc {
    pub lo: usize,
    pub hi: usize,
    pub witnesses: Vec<Vec<IntStr>>,
    pub obstructions: Vec<Obstruction>,
    pub residual_diagonal: Vec<RatStr>,
    pub search: String,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnipotentDoc {
    pub g_word: Vec<Letter>,
    pub gv: Vec<IntStr>,
    pub sign: i8,
    pub word: Vec<Letter>,
    pub matrix: Vec<Vec<IntStr>>,
    pub translation: Vec<RatStr>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReflectionDoc {
    pub vector: Vec<IntStr>,
    pub source: String,
    pub word: Vec<Letter>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub conclusion: Conclusion,
    /// Coordinates in the cyclic basis.
    pub epsilon: Option<Vec<IntStr>>,
    pub unipotent: Option<UnipotentDoc>,
    pub reflections: Vec<ReflectionDoc>,
    /// Words of unipotents whose translations span the certified rank.
    pub span_words: Vec<Vec<Letter>>,
    pub translation_rank: Option<usize>,
    pub reflection_depth: Option<usize>,
    pub reasons: Vec<String>,
    pub caveats: Vec<String>,
}

impl WitnessDoc {
    pub fn from_report(r: &WitnessReport) -> Self {
        WitnessDoc {
            conclusion: r.conclusion,
            epsilon: r.epsilon.as_deref().map(ints),
            unipotent: r.unipotent.as_ref().map(|u| UnipotentDoc {
                g_word: u.g.word.clone(),
                gv: ints(&u.gv),
                sign: u.sign,
                word: u.u.word.clone(),
                matrix: int_rows(&u.u.matrix),
                translation: rats(&u.translation),
            }),
            reflections: r
                .reflections
                .iter()
                .map(|x| ReflectionDoc {
                    vector: ints(&x.vector),
                    source: x.source.to_string(),
                    word: x.element.word.clone(),
                })
                .collect(),
            span_words: r.span_elements.iter().map(|e| e.word.clone()).collect(),
            translation_rank: r.translation_rank,
            reflection_depth: r.reflection_depth,
            reasons: r.reasons.clone(),
            caveats: r.caveats.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaddingDoc {
    pub f0: String,
    pub g0: String,
    #[serde(rename = "P")]
    pub p: String,
    #[serde(rename = "Q")]
    pub q: String,
    pub d: usize,
    pub m: usize,
    pub remainder_coeff_check: bool,
    pub isometry_check: bool,
    pub isometry_check_invariant: bool,
    /// ℚ-rank bounds of the padded pair, seeded with the base witnesses.
    pub seeded_q_rank: [usize; 2],
    /// Columns `A^k v`, `k < 5`, in the basis `1, x, …`.
    pub embedding: Vec<Vec<IntStr>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub input: InputDoc,
    pub derived: DerivedDoc,
    pub gram: Option<GramDoc>,
    pub signature: Option<SignatureDoc>,
    pub q_rank: Option<QRankDoc>,
    pub witness: WitnessDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub padding: Option<PaddingDoc>,
    /// Wall-clock milliseconds per phase; the only nondeterministic field.
    #[serde(default)]
    pub timings: BTreeMap<String, u64>,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    /// Same document with timings cleared, for byte comparisons.
    pub fn without_timings(&self) -> Self {
        ReportDocument { timings: BTreeMap::new(), ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    #[test]
    fn rationals_are_strings() {
        let r = RatStr(Rat::new(BigInt::from(-3), BigInt::from(6)));
        assert_eq!(serde_json::to_string(&r).unwrap(), "\"-1/2\"");
        assert_eq!(serde_json::to_string(&RatStr(rat(2))).unwrap(), "\"2/1\"");
        let back: RatStr = serde_json::from_str("\"4/-8\"").unwrap();
        assert_eq!(back.0, Rat::new(BigInt::from(-1), BigInt::from(2)));
        assert!(serde_json::from_str::<RatStr>("\"1/0\"").is_err());
        assert!(serde_json::from_str::<RatStr>("0.5").is_err());
    }

    #[test]
    fn big_integers_survive() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let s = serde_json::to_string(&IntStr(big.clone())).unwrap();
        assert_eq!(serde_json::from_str::<IntStr>(&s).unwrap().0, big);
    }
}
