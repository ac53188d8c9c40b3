//! The full analysis of one field, as JSON or text.

use serde::Serialize;

use crate::error::Result;
use crate::field::{check_membership, compute_eta, MembershipReport, QHField};
use crate::geometry::{
    infinite_singularities, invariant_curves, origin_sectors, CurveKind, InfinitySingularity, SectorDecomposition,
};
use crate::poly::IsolatedRoot;
use crate::sequences::{sign_sequence, SignSequence};
use crate::stability::{
    classify_with, normal_form, theta_membership, NormalForm, Portrait, StabilityVerdict, ThetaMembership,
};
use crate::WeightSignature;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RootView {
    /// exact when rational, else the isolating interval
    pub exact: Option<String>,
    pub interval: (String, String),
    pub approx: f64,
}

impl RootView {
    pub fn new(r: &IsolatedRoot) -> Self {
        let mut r = r.clone();
        if r.exact_value.is_none() {
            r.refine_to(&crate::poly::rat(1, 1 << 20));
        }
        RootView {
            exact: r.exact_value.as_ref().map(|v| v.to_string()),
            interval: (r.lo.to_string(), r.hi.to_string()),
            approx: r.approx(),
        }
    }

    fn text(&self) -> String {
        match &self.exact {
            Some(e) => e.clone(),
            None => format!("{:.9}", self.approx),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularityView {
    pub chart: &'static str,
    pub lambda: Option<RootView>,
    pub multiplicity: usize,
    pub kind: &'static str,
    pub sigma: i8,
    pub nu: i8,
}

impl SingularityView {
    pub fn new(s: &InfinitySingularity) -> Self {
        SingularityView {
            chart: s.chart.name(),
            lambda: s.lambda.as_ref().map(RootView::new),
            multiplicity: s.multiplicity,
            kind: s.kind.name(),
            sigma: s.sigma_sign,
            nu: s.nu_sign,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveView {
    pub kind: CurveKind,
    pub lambda: Option<RootView>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub w: WeightSignature,
    #[serde(rename = "P")]
    pub p_text: String,
    #[serde(rename = "Q")]
    pub q_text: String,
    pub eta: String,
    pub membership: MembershipReport,
    pub verdict: StabilityVerdict,
    pub normal_form: Option<NormalForm>,
    pub theta: Option<ThetaMembership>,
    pub singularities: Vec<SingularityView>,
    pub invariant_curves: Vec<CurveView>,
    pub sectors: Option<SectorDecomposition>,
    pub sequence: Option<String>,
    #[serde(skip)]
    pub sign_sequence: Option<SignSequence>,
}

pub fn analyze(x: &QHField, tol: f64) -> Result<AnalysisReport> {
    let eta = compute_eta(x);
    let verdict = classify_with(x, &eta, tol);
    let points = infinite_singularities(x, &eta);
    let sectors = if points.is_empty() {
        None
    } else {
        origin_sectors(&points).ok()
    };
    let sign_sequence = if verdict.is_stable() && verdict.portrait == Some(Portrait::Sectored) {
        Some(sign_sequence(x, &points)?)
    } else {
        None
    };
    Ok(AnalysisReport {
        w: x.w,
        p_text: x.p_poly.to_string(),
        q_text: x.q_poly.to_string(),
        eta: eta.eta.to_string(),
        membership: check_membership(x.w),
        normal_form: if eta.identically_zero {
            None
        } else {
            normal_form(x, &eta).ok()
        },
        theta: theta_membership(x.w).ok(),
        singularities: points.iter().map(SingularityView::new).collect(),
        invariant_curves: invariant_curves(x, &eta)
            .iter()
            .map(|c| CurveView {
                kind: c.kind,
                lambda: c.lambda.as_ref().map(RootView::new),
            })
            .collect(),
        sectors,
        sequence: sign_sequence.as_ref().map(|s| s.to_string()),
        sign_sequence,
        verdict,
    })
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let w = self.w;
        s += &format!("field     (p,q,m) = ({},{},{})\n", w.p, w.q, w.m);
        s += &format!("  P = {}\n  Q = {}\n  eta = {}\n", self.p_text, self.q_text, self.eta);
        let v = &self.verdict;
        s += &format!("verdict   {}", v.verdict.name());
        if let Some(p) = v.portrait {
            s += &format!(" / {}", p.name());
        }
        s += "\n";
        match v.portrait {
            Some(Portrait::GlobalUnstableFocus) => {
                s += "  global unstable focus: every orbit spirals out to infinity\n"
            }
            Some(Portrait::GlobalStableFocus) => s += "  global stable focus: every orbit spirals in to the origin\n",
            Some(Portrait::GlobalCenter) => s += "  global center: all orbits are periodic\n",
            _ => {}
        }
        if let Some(i) = &v.integral {
            s += &format!(
                "  return integral {:.12} (error bound {:.1e})\n",
                i.value, i.error_bound
            );
        }
        for r in &v.reasons {
            s += &format!("  reason {}\n", serde_json::to_string(r).unwrap().trim_matches('"'));
        }
        if let Some(nf) = &self.normal_form {
            s += &format!(
                "normal form case {} with r = {}\n",
                serde_json::to_string(&nf.case).unwrap().trim_matches('"'),
                nf.r
            );
        }
        if !self.singularities.is_empty() {
            s += &format!("infinity  {} singular points\n", self.singularities.len());
        }
        for p in &self.singularities {
            let at = p
                .lambda
                .as_ref()
                .map(|l| format!(" lambda = {}", l.text()))
                .unwrap_or_default();
            s += &format!(
                "  {:<6}{at} mult {} {} (sigma {:+}, nu {:+})\n",
                p.chart, p.multiplicity, p.kind, p.sigma, p.nu
            );
        }
        if let Some(sd) = &self.sectors {
            let letters: Vec<String> = sd.sectors.iter().map(|k| k.letter().to_string()).collect();
            s += &format!(
                "origin    sectors {} ({} separatrices)\n",
                letters.join(","),
                sd.separatrix_count
            );
        }
        if let Some(seq) = &self.sequence {
            s += &format!("sequence  {seq}\n");
        }
        s
    }
}
