//! Class counts: the D and E recurrences, C = (D + E)/2, the closed-form
//! totals and an exhaustive orbit-enumeration oracle.

use std::collections::{BTreeMap, BTreeSet};

use num::rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::WeightSignature;
use crate::sequences::{is_admissible, j_set, symmetric_sequences, SignSequence};
use crate::stability::{theta_membership, ThetaMembership};

pub const DEFAULT_R_BOUND: u32 = 9;

pub type Half = Ratio<i64>;

fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// 𝒫_{2n} = (1/n)(base^n − Σ_{l|n, l≠n} l 𝒫_{2l}), base 4 or 2.
fn necklace_p(n: u64, base: i64) -> i64 {
    let sub: i64 = divisors(n)
        .into_iter()
        .filter(|&l| l != n)
        .map(|l| l as i64 * necklace_p(l, base))
        .sum();
    (base.pow(n as u32) - sub) / n as i64
}

/// I_{2n} = 2^{n+1} − Σ_{l|n, l≠n} I_{2l}
fn symmetric_i_odd_r(n: u64) -> i64 {
    let sub: i64 = divisors(n).into_iter().filter(|&l| l != n).map(symmetric_i_odd_r).sum();
    2i64.pow(n as u32 + 1) - sub
}

/// I_{2n} = 2^{(n+1)/2} − Σ_{l|n, l≠n} I_{2l}, for odd n
fn symmetric_i_even_r(n: u64) -> i64 {
    let sub: i64 = divisors(n)
        .into_iter()
        .filter(|&l| l != n)
        .map(symmetric_i_even_r)
        .sum();
    2i64.pow(n.div_ceil(2) as u32) - sub
}

pub fn p_a(n: u64) -> i64 {
    necklace_p(n, 4)
}

pub fn p_b(n: u64) -> i64 {
    necklace_p(n, 2)
}

pub fn i_a(n: u64) -> i64 {
    symmetric_i_odd_r(n)
}

pub fn i_b(n: u64) -> i64 {
    symmetric_i_even_r(n)
}

/// Which of the four recurrence families applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    #[serde(rename = "ODD_ODD_R_ODD")]
    OddOddROdd,
    #[serde(rename = "ODD_ODD_R_EVEN")]
    OddOddREven,
    #[serde(rename = "EVEN_Q_THETA12")]
    EvenQTheta12,
    #[serde(rename = "EVEN_Q_THETA34")]
    EvenQTheta34,
}

impl Regime {
    pub fn name(self) -> &'static str {
        match self {
            Regime::OddOddROdd => "ODD_ODD_R_ODD",
            Regime::OddOddREven => "ODD_ODD_R_EVEN",
            Regime::EvenQTheta12 => "EVEN_Q_THETA12",
            Regime::EvenQTheta34 => "EVEN_Q_THETA34",
        }
    }
}

/// Convention (i): with a weight equal to 1, put it first when both are odd.
pub fn apply_conventions(w: WeightSignature) -> WeightSignature {
    if w.q == 1 && w.p != 1 {
        WeightSignature::new(1, w.p, w.m)
    } else {
        w
    }
}

fn setup(w: WeightSignature) -> Result<(ThetaMembership, u32)> {
    let t = theta_membership(w)?;
    let r = t.r.ok_or(Error::NoR(w.p, w.q, w.m))?;
    Ok((t, r))
}

pub fn regime(w: WeightSignature, t: &ThetaMembership, r: u32) -> Regime {
    if w.q % 2 == 1 {
        if r % 2 == 1 {
            Regime::OddOddROdd
        } else {
            Regime::OddOddREven
        }
    } else if t.holds(1) || t.holds(2) {
        Regime::EvenQTheta12
    } else {
        Regime::EvenQTheta34
    }
}

fn check_k(r: u32, k: u32) -> Result<()> {
    if k == 0 || !j_set(r).contains(&k) {
        return Err(Error::KOutOfRange { k, r });
    }
    Ok(())
}

pub fn count_d(w: WeightSignature, r: u32, k: u32) -> Result<i64> {
    check_k(r, k)?;
    let w = apply_conventions(w);
    let t = theta_membership(w)?;
    let k64 = k as u64;
    let base = match regime(w, &t, r) {
        Regime::OddOddROdd => divisors(k64 / 2).into_iter().map(p_a).sum(),
        _ => divisors(k64).into_iter().map(p_b).sum::<i64>(),
    };
    Ok(if k == r + 1 { base - 1 } else { base })
}

pub fn count_e(w: WeightSignature, r: u32, k: u32) -> Result<i64> {
    check_k(r, k)?;
    let w = apply_conventions(w);
    let t = theta_membership(w)?;
    let k64 = k as u64;
    let top = k == r + 1;
    Ok(match regime(w, &t, r) {
        Regime::OddOddROdd => divisors(k64 / 2).into_iter().map(i_a).sum::<i64>() - top as i64,
        Regime::OddOddREven => divisors(k64).into_iter().map(i_b).sum::<i64>() - top as i64,
        Regime::EvenQTheta12 => {
            if top {
                1
            } else {
                2
            }
        }
        Regime::EvenQTheta34 => match (r % 2 == 1, top) {
            (true, false) => 4,
            (false, false) => 2,
            (true, true) => 3,
            (false, true) => 1,
        },
    })
}

/// Foci contribute two classes exactly when a rootless η exists (Θ₁) and
/// both integral signs occur (r odd).
pub fn c0(t: &ThetaMembership, r: u32) -> u32 {
    if t.holds(1) && r % 2 == 1 {
        2
    } else {
        0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KCount {
    #[serde(rename = "D")]
    pub d: i64,
    #[serde(rename = "E")]
    pub e: i64,
    /// (D + E)/2, absent when D + E is odd
    #[serde(rename = "C")]
    pub c: Option<i64>,
}

impl KCount {
    fn new(d: i64, e: i64) -> Self {
        KCount {
            d,
            e,
            c: ((d + e) % 2 == 0).then_some((d + e) / 2),
        }
    }

    pub fn c_half(&self) -> Half {
        Half::new(self.d + self.e, 2)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassCount {
    pub w: WeightSignature,
    pub r: u32,
    pub regime: Regime,
    pub per_k: BTreeMap<u32, KCount>,
    pub c0: u32,
    /// c0 + Σ (D + E)/2
    #[serde(serialize_with = "ser_half")]
    pub total_formula: Half,
    /// the displayed closed form, evaluated literally
    #[serde(serialize_with = "ser_half")]
    pub total_closed_form: Half,
    pub closed_form_branch: &'static str,
    pub total_enumerated: Option<i64>,
}

fn ser_half<S: serde::Serializer>(h: &Half, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&half_text(h))
}

pub fn half_text(h: &Half) -> String {
    if h.is_integer() {
        h.to_integer().to_string()
    } else {
        format!("{}/{}", h.numer(), h.denom())
    }
}

/// Closed-form total and the name of the branch used.
pub fn closed_form(w: WeightSignature) -> Result<(Half, &'static str)> {
    let w = apply_conventions(w);
    let (t, r) = setup(w)?;
    let r64 = r as u64;
    let half = |n: i64| Half::new(n, 2);
    let sum_over = |js: std::ops::RangeInclusive<u64>, arg: &dyn Fn(u64) -> u64, f: &dyn Fn(u64) -> i64| -> i64 {
        js.flat_map(|j| divisors(arg(j))).map(f).sum()
    };
    if w.q % 2 == 1 {
        if r % 2 == 1 {
            let s = sum_over(1..=r64.div_ceil(2), &|j| j, &|n| p_a(n) + i_a(n));
            if t.holds(1) {
                Ok((Half::from(1) + half(s), "a.1/theta1"))
            } else {
                Ok((Half::from(-1) + half(s), "a.1/theta2-4"))
            }
        } else {
            let s = sum_over(1..=r64 / 2, &|j| 2 * j + 1, &|n| p_b(n) + i_b(n));
            Ok((Half::from(-1) + half(s), "a.2"))
        }
    } else {
        let odd_sum = || sum_over(1..=r64 / 2, &|j| 2 * j + 1, &|n| p_b(n));
        if r % 2 == 0 {
            let branch = if t.holds(1) {
                "b.1"
            } else if t.holds(2) {
                "b.2"
            } else {
                "b.3"
            };
            return Ok((half(r as i64 - 2 + odd_sum()), branch));
        }
        let even_sum = sum_over(1..=r64.div_ceil(2), &|j| 2 * j, &|n| p_b(n));
        if t.holds(1) {
            Ok((half(r as i64 + 3 + even_sum), "b.1"))
        } else if t.holds(2) {
            Ok((half(r as i64 - 1 + even_sum), "b.2"))
        } else {
            let s = sum_over(1..=r64.div_ceil(2), &|j| j, &|n| p_b(n));
            Ok((Half::from(r as i64) + half(s), "b.3"))
        }
    }
}

pub fn count_formula(w: WeightSignature) -> Result<ClassCount> {
    let w = apply_conventions(w);
    let (t, r) = setup(w)?;
    let mut per_k = BTreeMap::new();
    for k in j_set(r).into_iter().filter(|&k| k != 0) {
        per_k.insert(k, KCount::new(count_d(w, r, k)?, count_e(w, r, k)?));
    }
    let c0 = c0(&t, r);
    let total_formula = per_k.values().fold(Half::from(c0 as i64), |acc, c| acc + c.c_half());
    let (total_closed_form, closed_form_branch) = closed_form(w)?;
    Ok(ClassCount {
        w,
        r,
        regime: regime(w, &t, r),
        per_k,
        c0,
        total_formula,
        total_closed_form,
        closed_form_branch,
        total_enumerated: None,
    })
}

/// Orbit data for one k from exhaustive enumeration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitCensus {
    pub admissible: usize,
    /// shift orbits meeting the admissible set
    #[serde(rename = "D")]
    pub d: usize,
    /// those orbits mapped to themselves by reversal
    #[serde(rename = "E")]
    pub e: usize,
    /// orbits of the group generated by shift and reversal
    #[serde(rename = "C")]
    pub c: usize,
    /// sizes of the dihedral orbits in S^{2k}
    pub orbit_sizes: Vec<usize>,
    /// admissible members of each dihedral orbit
    pub orbit_hits: Vec<usize>,
}

fn rotation_key(e: &[(i8, i8)]) -> Vec<u8> {
    let b: Vec<u8> = e
        .iter()
        .map(|&(a, c)| (((a > 0) as u8) << 1) | ((c > 0) as u8))
        .collect();
    (0..b.len())
        .map(|t| {
            let mut r = b.clone();
            r.rotate_left(t);
            r
        })
        .min()
        .unwrap_or_default()
}

fn dihedral_members(s: &SignSequence) -> BTreeSet<Vec<(i8, i8)>> {
    let mut out = BTreeSet::new();
    for base in [s.clone(), s.reverse()] {
        for t in 0..base.len() {
            out.insert(base.shift_by(t).entries);
        }
    }
    out
}

pub fn census(w: WeightSignature, r: u32, k: u32) -> Result<OrbitCensus> {
    let adm: Vec<SignSequence> = symmetric_sequences(w, r, k as usize)
        .into_iter()
        .filter(|s| is_admissible(s, w, r).unwrap_or(false))
        .collect();
    let mut shift_orbits: BTreeMap<Vec<u8>, bool> = BTreeMap::new();
    let mut dihedral: BTreeMap<Vec<u8>, (usize, usize)> = BTreeMap::new();
    for s in &adm {
        let key = rotation_key(&s.entries);
        let rev = rotation_key(&s.reverse().entries);
        shift_orbits.insert(key.clone(), key == rev);
        let dk = key.clone().min(rev);
        let entry = dihedral.entry(dk).or_insert_with(|| (dihedral_members(s).len(), 0));
        entry.1 += 1;
    }
    Ok(OrbitCensus {
        admissible: adm.len(),
        d: shift_orbits.len(),
        e: shift_orbits.values().filter(|&&sym| sym).count(),
        c: dihedral.len(),
        orbit_sizes: dihedral.values().map(|v| v.0).collect(),
        orbit_hits: dihedral.values().map(|v| v.1).collect(),
    })
}

pub fn count_bruteforce(w: WeightSignature, r_bound: u32) -> Result<(ClassCount, BTreeMap<u32, OrbitCensus>)> {
    let w = apply_conventions(w);
    let (t, r) = setup(w)?;
    if r > r_bound {
        return Err(Error::BoundExceeded { r, bound: r_bound });
    }
    let mut per_k = BTreeMap::new();
    let mut censuses = BTreeMap::new();
    for k in j_set(r).into_iter().filter(|&k| k != 0) {
        let c = census(w, r, k)?;
        per_k.insert(
            k,
            KCount {
                d: c.d as i64,
                e: c.e as i64,
                c: Some(c.c as i64),
            },
        );
        censuses.insert(k, c);
    }
    let c0 = c0(&t, r);
    let total: i64 = c0 as i64 + per_k.values().map(|c| c.c.unwrap_or(0)).sum::<i64>();
    let (total_closed_form, closed_form_branch) = closed_form(w)?;
    Ok((
        ClassCount {
            w,
            r,
            regime: regime(w, &t, r),
            per_k,
            c0,
            total_formula: Half::from(total),
            total_closed_form,
            closed_form_branch,
            total_enumerated: Some(total),
        },
        censuses,
    ))
}

/// One row of the formula/oracle comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Discrepancy {
    pub w: WeightSignature,
    pub r: u32,
    pub k: Option<u32>,
    pub regime: Regime,
    /// "D", "E", "C" or "TOTAL_CLOSED_FORM"
    pub quantity: &'static str,
    pub formula: String,
    pub oracle: String,
}

pub fn compare(formula: &ClassCount, oracle: &ClassCount) -> Vec<Discrepancy> {
    let mut out = Vec::new();
    let row = |k: Option<u32>, quantity, f: String, o: String| Discrepancy {
        w: formula.w,
        r: formula.r,
        k,
        regime: formula.regime,
        quantity,
        formula: f,
        oracle: o,
    };
    for (k, f) in &formula.per_k {
        let o = &oracle.per_k[k];
        if f.d != o.d {
            out.push(row(Some(*k), "D", f.d.to_string(), o.d.to_string()));
        }
        if f.e != o.e {
            out.push(row(Some(*k), "E", f.e.to_string(), o.e.to_string()));
        }
        if f.c_half() != o.c_half() {
            out.push(row(Some(*k), "C", half_text(&f.c_half()), o.c.unwrap_or(0).to_string()));
        }
    }
    let total = Half::from(oracle.total_enumerated.unwrap_or(0));
    if formula.total_closed_form != total {
        out.push(row(
            None,
            "TOTAL_CLOSED_FORM",
            half_text(&formula.total_closed_form),
            half_text(&total),
        ));
    }
    out
}
