use num::{BigInt, One, Signed, Zero};

use super::univar::sign_variations;
use super::{sign, to_f64, Rational, UnivarPoly};
use crate::error::{Error, Result};

/// A real root of a polynomial, isolated in a rational interval.
///
/// `defining` is the squarefree factor the root belongs to. Unless the root
/// is exact, `defining` is nonzero at both endpoints and changes sign across
/// the interval.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatedRoot {
    pub lo: Rational,
    pub hi: Rational,
    pub multiplicity: usize,
    pub exact_value: Option<Rational>,
    defining: UnivarPoly,
}

impl IsolatedRoot {
    /// Root known exactly.
    pub fn exact(value: Rational, multiplicity: usize) -> Self {
        IsolatedRoot {
            lo: value.clone(),
            hi: value.clone(),
            multiplicity,
            defining: UnivarPoly::linear_root(&value),
            exact_value: Some(value),
        }
    }

    pub fn defining_poly(&self) -> &UnivarPoly {
        &self.defining
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    /// Halve the interval, keeping the root inside.
    pub fn bisect(&mut self) {
        if self.exact_value.is_some() {
            return;
        }
        let mid = self.midpoint();
        let s = self.defining.sign_at(&mid);
        if s == 0 {
            self.lo = mid.clone();
            self.hi = mid.clone();
            self.exact_value = Some(mid);
        } else if s == self.defining.sign_at(&self.lo) {
            self.lo = mid;
        } else {
            self.hi = mid;
        }
    }

    pub fn refine_to(&mut self, width: &Rational) {
        while self.exact_value.is_none() && &self.width() > width {
            self.bisect();
        }
    }

    /// Floating approximation accurate to about 2^-60 relative to the
    /// interval scale.
    pub fn approx(&self) -> f64 {
        let mut r = self.clone();
        let scale = r.lo.abs().max(r.hi.abs()).max(Rational::one());
        r.refine_to(&(scale / Rational::from_integer(BigInt::one() << 60usize)));
        to_f64(&r.midpoint())
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Try to pin the root to a rational value: rational roots of an integer
    /// polynomial with leading coefficient L have the form N/L.
    fn detect_rational(&mut self) {
        if self.exact_value.is_some() {
            return;
        }
        let ints = self.defining.primitive_integer();
        let lead = Rational::from_integer(ints.last().unwrap().clone());
        let target = Rational::one() / &lead;
        while self.exact_value.is_none() && self.width() >= target {
            self.bisect();
        }
        if self.exact_value.is_some() {
            return;
        }
        let lo_n = (&self.lo * &lead).ceil().to_integer();
        let hi_n = (&self.hi * &lead).floor().to_integer();
        let mut n = lo_n;
        while n <= hi_n {
            let cand = Rational::from_integer(n.clone()) / &lead;
            if self.defining.eval(&cand).is_zero() {
                self.lo = cand.clone();
                self.hi = cand.clone();
                self.exact_value = Some(cand);
                return;
            }
            n += 1;
        }
    }
}

fn cauchy_bound(f: &UnivarPoly) -> Rational {
    let lead = f.leading().abs();
    let max = f.coeffs()[..f.coeffs().len() - 1]
        .iter()
        .map(|c| c.abs() / &lead)
        .fold(Rational::zero(), |a, b| if b > a { b } else { a });
    let bound = max + Rational::one();
    let mut b = Rational::one();
    while b <= bound {
        b *= Rational::from_integer(BigInt::from(2));
    }
    b
}

/// Isolate the roots of a squarefree polynomial. Returns (lo, hi, exact).
fn isolate_squarefree(f: &UnivarPoly) -> Vec<(Rational, Rational, bool)> {
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let sturm = f.sturm_sequence();
    let count = |a: &Rational, b: &Rational| sign_variations(&sturm, a).saturating_sub(sign_variations(&sturm, b));
    let b = cauchy_bound(f);
    let lo = -b.clone();
    let n = count(&lo, &b);
    let mut stack = vec![(lo, b, n)];
    let two = Rational::from_integer(BigInt::from(2));
    while let Some((lo, hi, n)) = stack.pop() {
        match n {
            0 => continue,
            1 => {
                out.push((lo, hi, false));
                continue;
            }
            _ => {}
        }
        let mid = (&lo + &hi) / &two;
        if f.sign_at(&mid) != 0 {
            let nl = count(&lo, &mid);
            stack.push((mid.clone(), hi, n - nl));
            stack.push((lo, mid, nl));
            continue;
        }
        // exact root at the midpoint: fence it off with a small gap
        let mut delta = (&hi - &lo) / Rational::from_integer(BigInt::from(4));
        loop {
            let a = &mid - &delta;
            let c = &mid + &delta;
            if f.sign_at(&a) != 0 && f.sign_at(&c) != 0 && count(&a, &c) == 1 {
                out.push((mid.clone(), mid.clone(), true));
                let nl = count(&lo, &a);
                let nr = count(&c, &hi);
                stack.push((c, hi, nr));
                stack.push((lo, a, nl));
                break;
            }
            delta /= &two;
        }
    }
    out
}

/// All distinct real roots with multiplicities, ascending, in pairwise
/// disjoint isolating intervals.
pub fn isolate_real_roots(poly: &UnivarPoly) -> Result<Vec<IsolatedRoot>> {
    if poly.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut roots = Vec::new();
    for (factor, mult) in poly.square_free_decomposition() {
        for (lo, hi, exact) in isolate_squarefree(&factor) {
            let mut r = IsolatedRoot {
                exact_value: exact.then(|| lo.clone()),
                lo,
                hi,
                multiplicity: mult,
                defining: factor.clone(),
            };
            r.detect_rational();
            roots.push(r);
        }
    }
    // separate intervals coming from different squarefree factors
    loop {
        roots.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.hi.cmp(&b.hi)));
        let clash = (1..roots.len()).find(|&i| roots[i - 1].hi >= roots[i].lo);
        match clash {
            None => break,
            Some(i) => {
                let wa = roots[i - 1].width();
                let wb = roots[i].width();
                if wa >= wb && roots[i - 1].exact_value.is_none() {
                    roots[i - 1].bisect();
                } else if roots[i].exact_value.is_none() {
                    roots[i].bisect();
                } else {
                    roots[i - 1].bisect();
                }
            }
        }
    }
    Ok(roots)
}

/// Sign of `probe` at the root, decided by refining the interval until the
/// probe has no root inside it.
pub fn refine_until_sign(root: &IsolatedRoot, probe: &UnivarPoly) -> Result<i8> {
    if probe.is_zero() {
        return Err(Error::ProbeVanishes);
    }
    if let Some(v) = &root.exact_value {
        return match sign(&probe.eval(v)) {
            0 => Err(Error::ProbeVanishes),
            s => Ok(s),
        };
    }
    let g = super::univar_gcd(probe, &root.defining)?;
    if g.degree().unwrap_or(0) > 0 && g.sign_at(&root.lo) * g.sign_at(&root.hi) < 0 {
        return Err(Error::ProbeVanishes);
    }
    let sf = probe.square_free_part();
    let sturm = (sf.degree().unwrap_or(0) > 0).then(|| sf.sturm_sequence());
    let mut r = root.clone();
    loop {
        if r.exact_value.is_some() {
            return refine_until_sign(&r, probe);
        }
        let clean = match &sturm {
            None => true,
            Some(seq) => {
                sf.sign_at(&r.lo) != 0
                    && sf.sign_at(&r.hi) != 0
                    && sign_variations(seq, &r.lo) == sign_variations(seq, &r.hi)
            }
        };
        if clean {
            return Ok(probe.sign_at(&r.lo));
        }
        r.bisect();
    }
}
