//! Splitting a polynomial field into quasihomogeneous parts and delegating
//! the local portrait at one end to the dominant part.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::Result;
use crate::field::QHField;
use crate::poly::BivarPoly;
use crate::report::{analyze, AnalysisReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum End {
    #[serde(rename = "ORIGIN")]
    Origin,
    #[serde(rename = "INFINITY")]
    Infinity,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Component {
    /// P has weighted degree p − 1 + m and Q has q − 1 + m
    pub m: i64,
    #[serde(rename = "P")]
    pub p_text: String,
    #[serde(rename = "Q")]
    pub q_text: String,
    #[serde(skip)]
    pub p_poly: BivarPoly,
    #[serde(skip)]
    pub q_poly: BivarPoly,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decomposition {
    pub p: u32,
    pub q: u32,
    pub end: End,
    pub components: Vec<Component>,
    pub selected_m: Option<i64>,
    pub applicable: bool,
    pub message: String,
    pub analysis: Option<AnalysisReport>,
}

pub fn components(p: u32, q: u32, pp: &BivarPoly, qq: &BivarPoly) -> Vec<Component> {
    let mut parts: BTreeMap<i64, (BivarPoly, BivarPoly)> = BTreeMap::new();
    for (d, c) in pp.weighted_components(p, q) {
        parts.entry(d as i64 - p as i64 + 1).or_default().0 = c;
    }
    for (d, c) in qq.weighted_components(p, q) {
        parts.entry(d as i64 - q as i64 + 1).or_default().1 = c;
    }
    parts
        .into_iter()
        .map(|(m, (a, b))| Component {
            m,
            p_text: a.to_string(),
            q_text: b.to_string(),
            p_poly: a,
            q_poly: b,
        })
        .collect()
}

pub fn decompose(p: u32, q: u32, pp: &BivarPoly, qq: &BivarPoly, end: End, tol: f64) -> Result<Decomposition> {
    let comps = components(p, q, pp, qq);
    let chosen = match end {
        End::Origin => comps.first(),
        End::Infinity => comps.last(),
    }
    .cloned();
    let mut out = Decomposition {
        p,
        q,
        end,
        selected_m: chosen.as_ref().map(|c| c.m),
        components: comps,
        applicable: false,
        message: String::new(),
        analysis: None,
    };
    let Some(c) = chosen else {
        out.message = "field is zero".into();
        return Ok(out);
    };
    if c.m < 1 {
        out.message = format!("dominant part has degree m = {} < 1; theorem inapplicable", c.m);
        return Ok(out);
    }
    let x = match QHField::from_raw(p, q, c.m as u32, c.p_poly, c.q_poly) {
        Ok(x) => x,
        Err(e) => {
            out.message = format!("dominant part is not in the family ({e}); theorem inapplicable");
            return Ok(out);
        }
    };
    let report = analyze(&x, tol)?;
    if report.verdict.is_stable() {
        out.applicable = true;
        out.message = format!(
            "local portrait at {} equals that of the degree-{} part",
            match end {
                End::Origin => "the origin",
                End::Infinity => "infinity",
            },
            c.m
        );
    } else {
        out.message = "dominant part not structurally stable; theorem inapplicable".into();
    }
    out.analysis = Some(report);
    Ok(out)
}
