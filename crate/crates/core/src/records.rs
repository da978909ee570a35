//! Machine-readable records. Every JSON document is an [`Envelope`]:
//! `{"schema_version": 1, "record": <kind>, "data": {...}}`. Field elements
//! and polynomials are rendered as strings, exact fractions as `"n/d"`.

use serde::{Deserialize, Serialize};

use crate::blowup::{BlowupStatus, Rank3Blowup};
use crate::census::CensusReport;
use crate::codim::CodimReport;
use crate::field::Field;
use crate::membership::MembershipReport;
use crate::regularity::RegularityVerdict;
use crate::singularity::{ConditionGReport, PointKind, PointReport};

pub const SCHEMA_VERSION: u32 = 1;

pub fn elem_strings<F: Field>(k: &F, v: &[F::Elem]) -> Vec<String> {
    v.iter().map(|e| k.display(e).to_string()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionGRecord {
    pub coefficients: Vec<String>,
    pub restricted_cubic: String,
    pub cubic_sing_dim: i64,
    pub h: String,
    /// Projective dimension of the common zeros of `h` and the singular locus.
    pub h_on_singular_points_dim: Option<i64>,
    pub verdict: bool,
}

impl ConditionGRecord {
    pub fn from_report<F: Field>(r: &ConditionGReport<F>) -> Self {
        let k = r.h.field();
        ConditionGRecord {
            coefficients: elem_strings(k, &r.coefficients),
            restricted_cubic: r.restricted_cubic.to_string(),
            cubic_sing_dim: r.cubic_sing_dim,
            h: r.h.to_string(),
            h_on_singular_points_dim: r.h_on_singular_points.as_ref().and_then(|d| d.projective_dim),
            verdict: r.verdict,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupVerdictRecord {
    /// Coordinates in the diagonal frame of the blown-up point.
    pub point: Vec<String>,
    pub status: BlowupStatus,
    pub rank: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupRecord {
    pub rank: usize,
    pub points_examined: usize,
    pub verdicts: Vec<BlowupVerdictRecord>,
    pub rank_a_points: usize,
    pub rank_a_locus_dim: i64,
    pub formula_direct_agree: bool,
    pub rank_a_isolated: bool,
    pub consistent_with_g: bool,
}

impl BlowupRecord {
    pub fn from_blowup<F: Field>(b: &Rank3Blowup<F>) -> Self {
        let k = b.model.field();
        let a = b.model.rank();
        BlowupRecord {
            rank: a,
            points_examined: b.points_examined,
            verdicts: b
                .verdicts
                .iter()
                .map(|v| BlowupVerdictRecord { point: elem_strings(k, &v.point), status: v.status, rank: v.status.rank(a) })
                .collect(),
            rank_a_points: b.rank_a_points,
            rank_a_locus_dim: b.rank_a_locus_dim,
            formula_direct_agree: b.formula_direct_agree,
            rank_a_isolated: b.rank_a_isolated,
            consistent_with_g: b.consistent_with_g,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointRecord {
    pub point: Vec<String>,
    pub kind: PointKind,
    pub condition_g: Option<ConditionGRecord>,
    pub regularity: Option<RegularityVerdict>,
    pub blowup: Option<BlowupRecord>,
}

impl PointRecord {
    pub fn from_report<F: Field>(r: &PointReport<F>, blowup: Option<&Rank3Blowup<F>>) -> Self {
        let k = r.point.field();
        PointRecord {
            point: elem_strings(k, r.point.coords()),
            kind: r.kind,
            condition_g: r.condition_g.as_ref().map(ConditionGRecord::from_report),
            regularity: r.regularity.clone(),
            blowup: blowup.map(BlowupRecord::from_blowup),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", content = "data", rename_all = "snake_case")]
pub enum Record {
    Point(PointRecord),
    Membership(MembershipReport),
    Codim(CodimReport),
    Census(CensusReport),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub schema_version: u32,
    #[serde(flatten)]
    pub body: Record,
}

impl Envelope {
    pub fn new(body: Record) -> Self {
        Envelope { schema_version: SCHEMA_VERSION, body }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
