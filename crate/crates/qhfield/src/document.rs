//! Field documents: the JSON and EXPR input formats.
//!
//! JSON: `{"p":1,"q":2,"m":2,"P":[[2,0,"1"],[0,1,"-1/2"]],"Q":[[3,0,"1"],[1,1,"2"]]}`.
//! EXPR: `key = value` lines for p, q, optional m, P and Q; `#` starts a comment.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::QHField;
use crate::poly::{parse_rational, BivarPoly, Rational, WeightedDegree};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Expr,
}

impl Format {
    /// JSON when the first non-blank character is `{`.
    pub fn detect(text: &str) -> Format {
        if text.trim_start().starts_with('{') {
            Format::Json
        } else {
            Format::Expr
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDocument {
    pub p: u32,
    pub q: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(rename = "P")]
    pub p_terms: Vec<(u32, u32, String)>,
    #[serde(rename = "Q")]
    pub q_terms: Vec<(u32, u32, String)>,
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

pub fn parse_field(text: &str, format: Format) -> Result<FieldDocument> {
    match format {
        Format::Json => {
            let doc: FieldDocument =
                serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.column(), e.to_string()))?;
            for (i, j, c) in doc.p_terms.iter().chain(&doc.q_terms) {
                if parse_rational(c).is_none() {
                    return Err(parse_err(0, 0, format!("bad coefficient {c:?} at ({i},{j})")));
                }
            }
            Ok(doc)
        }
        Format::Expr => parse_expr_document(text),
    }
}

pub fn parse_auto(text: &str) -> Result<FieldDocument> {
    parse_field(text, Format::detect(text))
}

/// P and Q of a general polynomial field; weights in the document are optional.
pub fn parse_components(text: &str) -> Result<(BivarPoly, BivarPoly)> {
    let doc = match Format::detect(text) {
        Format::Json => {
            #[derive(Deserialize)]
            struct Loose {
                #[serde(rename = "P")]
                p_terms: Vec<(u32, u32, String)>,
                #[serde(rename = "Q")]
                q_terms: Vec<(u32, u32, String)>,
            }
            let l: Loose = serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.column(), e.to_string()))?;
            FieldDocument {
                p: 1,
                q: 1,
                m: None,
                p_terms: l.p_terms,
                q_terms: l.q_terms,
            }
        }
        Format::Expr => parse_expr_lines(text, true)?,
    };
    doc.polys()
}

fn parse_expr_document(text: &str) -> Result<FieldDocument> {
    parse_expr_lines(text, false)
}

fn parse_expr_lines(text: &str, loose: bool) -> Result<FieldDocument> {
    let (mut p, mut q, mut m) = (None, None, None);
    let (mut pp, mut qq) = (None, None);
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let Some((key, value)) = body.split_once('=') else {
            return Err(parse_err(line, 1, "expected `key = value`"));
        };
        let col = key.len() + 2;
        match key.trim() {
            k @ ("p" | "q" | "m") => {
                let v: u32 = value
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(line, col, format!("{k} must be a positive integer")))?;
                *match k {
                    "p" => &mut p,
                    "q" => &mut q,
                    _ => &mut m,
                } = Some(v);
            }
            "P" => pp = Some(parse_poly_at(value, line, col)?),
            "Q" => qq = Some(parse_poly_at(value, line, col)?),
            other => return Err(parse_err(line, 1, format!("unknown key {other:?}"))),
        }
    }
    let missing = |k: &str| parse_err(text.lines().count().max(1), 1, format!("missing {k}"));
    let terms = |b: BivarPoly| b.terms().map(|(i, j, c)| (i, j, c.to_string())).collect();
    Ok(FieldDocument {
        p: p.or(loose.then_some(1)).ok_or_else(|| missing("p"))?,
        q: q.or(loose.then_some(1)).ok_or_else(|| missing("q"))?,
        m,
        p_terms: terms(pp.ok_or_else(|| missing("P"))?),
        q_terms: terms(qq.ok_or_else(|| missing("Q"))?),
    })
}

/// Parse `poly := term (("+"|"-") term)*`, reporting 1-based columns.
pub fn parse_poly(text: &str) -> Result<BivarPoly> {
    parse_poly_at(text, 1, 1)
}

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
    line: usize,
    col0: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        parse_err(self.line, self.col0 + self.pos, msg)
    }

    fn digits(&mut self) -> Option<String> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| String::from_utf8_lossy(&self.s[start..self.pos]).into_owned())
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() != Some(b'^') {
            return Ok(1);
        }
        self.pos += 1;
        let Some(d) = self.digits() else {
            return Err(self.err("expected exponent"));
        };
        d.parse().map_err(|_| self.err("exponent too large"))
    }
}

fn parse_poly_at(text: &str, line: usize, col0: usize) -> Result<BivarPoly> {
    let mut c = Cursor {
        s: text.as_bytes(),
        pos: 0,
        line,
        col0,
    };
    let mut out = BivarPoly::zero();
    let mut first = true;
    loop {
        let mut negative = false;
        match c.peek() {
            None if first => return Err(c.err("empty polynomial")),
            None => break,
            Some(b @ (b'+' | b'-')) => {
                negative = b == b'-';
                c.pos += 1;
            }
            Some(_) if !first => return Err(c.err("expected `+` or `-`")),
            Some(_) => {}
        }
        first = false;
        let mut coeff: Option<Rational> = None;
        if let Some(n) = c.digits() {
            let mut lit = n;
            if c.peek() == Some(b'/') {
                c.pos += 1;
                let Some(d) = c.digits() else {
                    return Err(c.err("expected denominator"));
                };
                lit = format!("{lit}/{d}");
            }
            coeff = Some(parse_rational(&lit).ok_or_else(|| c.err("zero denominator"))?);
            if c.peek() == Some(b'*') {
                c.pos += 1;
            }
        }
        let (mut i, mut j, mut mono) = (0, 0, false);
        if c.peek() == Some(b'x') {
            c.pos += 1;
            i = c.exponent()?;
            mono = true;
        }
        if c.peek() == Some(b'*') && mono {
            c.pos += 1;
        }
        if c.peek() == Some(b'y') {
            c.pos += 1;
            j = c.exponent()?;
            mono = true;
        }
        if coeff.is_none() && !mono {
            return Err(c.err("expected a term"));
        }
        let mut v = coeff.unwrap_or_else(|| Rational::from_integer(1.into()));
        if negative {
            v = -v;
        }
        out.add_term(i, j, v);
    }
    Ok(out)
}

fn terms_poly(terms: &[(u32, u32, String)]) -> Result<BivarPoly> {
    let mut b = BivarPoly::zero();
    for (i, j, c) in terms {
        let v = parse_rational(c).ok_or_else(|| parse_err(0, 0, format!("bad coefficient {c:?}")))?;
        b.add_term(*i, *j, v);
    }
    Ok(b)
}

/// m from the supports: deg_w P − p + 1, cross-checked against deg_w Q − q + 1.
pub fn infer_m(p: u32, q: u32, pp: &BivarPoly, qq: &BivarPoly) -> Result<u32> {
    let from = |b: &BivarPoly, shift: u32, name: &str| -> Result<Option<u32>> {
        match b.weighted_degree(p, q) {
            WeightedDegree::Zero => Ok(None),
            WeightedDegree::Mixed => Err(Error::DegreeInference(format!("{name} mixes weighted degrees"))),
            WeightedDegree::Homogeneous(d) if d + 1 > shift => Ok(Some(d + 1 - shift)),
            WeightedDegree::Homogeneous(d) => Err(Error::DegreeInference(format!(
                "{name} has weighted degree {d}, too low"
            ))),
        }
    };
    match (from(pp, p, "P")?, from(qq, q, "Q")?) {
        (Some(a), Some(b)) if a != b => Err(Error::DegreeInference(format!("P gives m = {a}, Q gives m = {b}"))),
        (Some(a), _) | (None, Some(a)) => Ok(a),
        (None, None) => Err(Error::DegreeInference("both components are zero".into())),
    }
}

impl FieldDocument {
    pub fn polys(&self) -> Result<(BivarPoly, BivarPoly)> {
        Ok((terms_poly(&self.p_terms)?, terms_poly(&self.q_terms)?))
    }

    /// Normalize, infer m if absent, validate.
    pub fn to_field(&self) -> Result<QHField> {
        let (pp, qq) = self.polys()?;
        let m = match self.m {
            Some(m) => m,
            None => infer_m(self.p, self.q, &pp, &qq)?,
        };
        QHField::from_raw(self.p, self.q, m, pp, qq)
    }

    pub fn from_field(x: &QHField) -> Self {
        let terms = |b: &BivarPoly| b.terms().map(|(i, j, c)| (i, j, c.to_string())).collect();
        FieldDocument {
            p: x.w.p,
            q: x.w.q,
            m: Some(x.w.m),
            p_terms: terms(&x.p_poly),
            q_terms: terms(&x.q_poly),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("documents serialize")
    }

    pub fn to_expr(&self) -> Result<String> {
        let (pp, qq) = self.polys()?;
        let mut s = format!("p = {}\nq = {}\n", self.p, self.q);
        if let Some(m) = self.m {
            s += &format!("m = {m}\n");
        }
        s += &format!("P = {pp}\nQ = {qq}\n");
        Ok(s)
    }
}
